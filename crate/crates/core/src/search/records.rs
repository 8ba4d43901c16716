//! On-disk formats: the compacted record snapshot and the append-only journal.
//!
//! The snapshot is JSON lines: one header line, then one line per degree that
//! has a record. It holds no timestamps, so identical configurations give
//! byte-identical files. Timestamps and per-chunk progress live in the
//! journal `<records>.journal`.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::SearchError;

pub const SCHEMA_VERSION: u32 = 1;

/// Counters for one chunk, one degree, or a whole run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub enumerated: u64,
    pub residue_pass: u64,
    pub split: u64,
    pub undecided: u64,
    pub irreducible: u64,
}

impl Stats {
    pub fn add(&mut self, o: &Stats) {
        self.enumerated += o.enumerated;
        self.residue_pass += o.residue_pass;
        self.split += o.split;
        self.undecided += o.undecided;
        self.irreducible += o.irreducible;
    }
}

/// A totally split irreducible polynomial found by the search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    /// Constant term first.
    pub coeffs: Vec<i64>,
    #[serde(with = "exact_f64")]
    pub height: f64,
    #[serde(with = "exact_f64")]
    pub error_radius: f64,
}

impl Candidate {
    /// Smaller height wins; heights equal within their error radii are
    /// ordered by the polynomials, top coefficient first.
    pub fn better_than(&self, other: &Candidate) -> bool {
        let tie = self.error_radius + other.error_radius;
        if self.height < other.height - tie {
            return true;
        }
        if self.height > other.height + tie {
            return false;
        }
        self.coeffs.len() < other.coeffs.len()
            || (self.coeffs.len() == other.coeffs.len()
                && self.coeffs.iter().rev().lt(other.coeffs.iter().rev()))
    }
}

/// `f64` as its shortest round-trip decimal string.
mod exact_f64 {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub kind: String,
    pub schema_version: u32,
    pub s_key: String,
    pub degrees: [usize; 2],
    pub coeff_bound: i64,
    pub resume_token: String,
    pub complete: bool,
    /// Degrees whose enumeration has finished, with their counters.
    pub stats: BTreeMap<usize, Stats>,
}

/// One snapshot line per degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub s_key: String,
    pub degree: usize,
    /// Decimal strings, constant term first.
    pub coeffs: Vec<String>,
    pub height: String,
    pub error_radius: String,
}

impl Record {
    pub fn from_candidate(s_key: &str, c: &Candidate) -> Record {
        Record {
            s_key: s_key.to_string(),
            degree: c.coeffs.len() - 1,
            coeffs: c.coeffs.iter().map(|x| x.to_string()).collect(),
            height: format!("{:.12}", c.height),
            error_radius: format!("{:.3e}", c.error_radius),
        }
    }

    pub fn height_value(&self) -> f64 {
        self.height.parse().unwrap_or(f64::NAN)
    }

    pub fn coeffs_i64(&self) -> Result<Vec<i64>, SearchError> {
        self.coeffs
            .iter()
            .map(|c| c.parse().map_err(|_| SearchError::Schema(format!("bad coefficient {c:?}"))))
            .collect()
    }
}

/// Per-degree best records for one set of places and one enumeration box.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordTable {
    pub header: SnapshotHeader,
    pub records: BTreeMap<usize, Record>,
}

impl RecordTable {
    pub fn render(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("serializable");
        out.push('\n');
        for r in self.records.values() {
            out.push_str(&serde_json::to_string(r).expect("serializable"));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<RecordTable, SearchError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let first = lines.next().ok_or_else(|| SearchError::Schema("empty records file".into()))?;
        let header: SnapshotHeader =
            serde_json::from_str(first).map_err(|e| SearchError::Schema(format!("header: {e}")))?;
        if header.kind != "header" {
            return Err(SearchError::Schema("first line is not a header".into()));
        }
        if header.schema_version != SCHEMA_VERSION {
            return Err(SearchError::Schema(format!(
                "schema version {} (expected {SCHEMA_VERSION})",
                header.schema_version
            )));
        }
        let mut records = BTreeMap::new();
        for line in lines {
            let r: Record = serde_json::from_str(line).map_err(|e| SearchError::Schema(format!("record: {e}")))?;
            records.insert(r.degree, r);
        }
        Ok(RecordTable { header, records })
    }

    pub fn load(path: &Path) -> Result<RecordTable, SearchError> {
        let text = fs::read_to_string(path).map_err(|e| SearchError::Io(format!("{}: {e}", path.display())))?;
        RecordTable::parse(&text)
    }

    /// Write to a temporary file in the same directory, then rename over `path`.
    pub fn write_atomic(&self, path: &Path) -> Result<(), SearchError> {
        let tmp = tmp_path(path);
        let io = |e: std::io::Error| SearchError::Io(format!("{}: {e}", path.display()));
        let mut f = File::create(&tmp).map_err(io)?;
        f.write_all(self.render().as_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
        drop(f);
        fs::rename(&tmp, path).map_err(io)
    }
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    path.with_file_name(name)
}

pub fn journal_path(records: &Path) -> PathBuf {
    let mut name = records.file_name().unwrap_or_default().to_os_string();
    name.push(".journal");
    records.with_file_name(name)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum JournalEvent {
    Start {
        resume_token: String,
        s_key: String,
        timestamp: u64,
    },
    Chunk {
        degree: usize,
        index: usize,
        stats: Stats,
        best: Option<Candidate>,
        undecided: Vec<Vec<i64>>,
        violations: Vec<String>,
        timestamp: u64,
    },
    Complete {
        timestamp: u64,
    },
}

pub fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Events from an existing journal. A torn final line from an interrupted
/// append is dropped.
pub fn read_journal(path: &Path) -> Result<Vec<JournalEvent>, SearchError> {
    let f = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(SearchError::Io(format!("{}: {e}", path.display()))),
    };
    let lines: Vec<String> = BufReader::new(f)
        .lines()
        .collect::<Result<_, _>>()
        .map_err(|e| SearchError::Io(e.to_string()))?;
    let mut events = Vec::with_capacity(lines.len());
    for (i, line) in lines.iter().enumerate() {
        match serde_json::from_str(line) {
            Ok(ev) => events.push(ev),
            Err(_) if i + 1 == lines.len() => break,
            Err(e) => return Err(SearchError::Schema(format!("journal line {}: {e}", i + 1))),
        }
    }
    Ok(events)
}

/// Append-only journal writer; every event is flushed to disk before returning.
pub struct Journal {
    file: File,
}

impl Journal {
    pub fn open(path: &Path, events_kept: &[JournalEvent]) -> Result<Journal, SearchError> {
        let io = |e: std::io::Error| SearchError::Io(format!("{}: {e}", path.display()));
        // Rewrite only the intact prefix so a torn line never sits mid-file.
        let mut tmp = String::new();
        for ev in events_kept {
            tmp.push_str(&serde_json::to_string(ev).expect("serializable"));
            tmp.push('\n');
        }
        let staging = tmp_path(path);
        fs::write(&staging, tmp).map_err(io)?;
        fs::rename(&staging, path).map_err(io)?;
        let file = OpenOptions::new().append(true).open(path).map_err(io)?;
        Ok(Journal { file })
    }

    pub fn append(&mut self, ev: &JournalEvent) -> Result<(), SearchError> {
        let mut line = serde_json::to_string(ev).expect("serializable");
        line.push('\n');
        self.file
            .write_all(line.as_bytes())
            .and_then(|_| self.file.sync_data())
            .map_err(|e| SearchError::Io(format!("journal append failed: {e}")))
    }
}
