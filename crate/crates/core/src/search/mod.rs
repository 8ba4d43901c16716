//! Exhaustive search over boxes of monic integer polynomials for totally
//! `L_S` algebraic integers of small height, with a persistent record table.
//!
//! Each degree is cut into chunks by the two top non-leading coefficients.
//! Workers take chunks from a shared counter and send results to the calling
//! thread, which alone appends them to the journal; the final table is a
//! fixed-order merge of the chunk results and so does not depend on the
//! number of workers or on interruptions.

mod irreducible;
mod records;
mod report;

pub use irreducible::{certify_irreducible, kronecker_factor, MAX_IRREDUCIBILITY_DEGREE};
pub use records::{
    journal_path, read_journal, Candidate, JournalEvent, Record, RecordTable, SnapshotHeader, Stats, SCHEMA_VERSION,
};
pub use report::{audit, report, AuditReport, ReportFormat};

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::capacity::finite_degree_lower_bound;
use crate::heights::{baker_mahler_holds, pairwise_g_sum, weil_height};
use crate::padic::PrecisionPolicy;
use crate::place::{places_key, LocalFieldSpec};
use crate::poly::IntPolynomial;
use crate::splitting::{Decision, SplittingChecker, SplittingError};
use records::{now, Journal};

/// Slack allowed below the finite-degree lower bound before a record counts
/// as a violation.
pub const LOWER_BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("irreducibility needs a nonconstant polynomial")]
    NotIrreducibleInput,
    #[error("degree {0} is above the irreducibility cap of 12; certify it externally")]
    DegreeTooLarge(usize),
    #[error("could not sample enough factorable values for Kronecker's method")]
    KroneckerValues,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("records file belongs to another configuration (resume token {found}, expected {expected})")]
    ResumeTokenMismatch { expected: String, found: String },
    #[error("records format: {0}")]
    Schema(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Splitting(#[from] SplittingError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub places: Vec<LocalFieldSpec>,
    pub degree_min: usize,
    pub degree_max: usize,
    /// Non-leading coefficients range over `[-B, B]`.
    pub coeff_bound: i64,
    /// Worker threads, at least 1.
    pub jobs: usize,
    pub records: PathBuf,
    pub policy: PrecisionPolicy,
    /// Stop cleanly after this many chunks have been journaled in this run.
    pub stop_after_chunks: Option<usize>,
}

impl SearchConfig {
    pub fn new(places: Vec<LocalFieldSpec>, degrees: (usize, usize), coeff_bound: i64, records: impl Into<PathBuf>) -> Self {
        SearchConfig {
            places,
            degree_min: degrees.0,
            degree_max: degrees.1,
            coeff_bound,
            jobs: 1,
            records: records.into(),
            policy: PrecisionPolicy::from_env(),
            stop_after_chunks: None,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: &str| Err(SearchError::Config(m.to_string()));
        if self.places.is_empty() {
            return bad("at least one place is required");
        }
        if let Some(pl) = self.places.iter().find(|p| !p.is_decidable()) {
            return Err(SearchError::Config(format!("place {pl} must be unramified over Q")));
        }
        if self.degree_min < 2 || self.degree_min > self.degree_max {
            return bad("degrees must satisfy 2 <= d_min <= d_max");
        }
        if self.degree_max > MAX_IRREDUCIBILITY_DEGREE {
            return bad("degree above the irreducibility cap of 12");
        }
        if self.coeff_bound < 1 {
            return bad("coefficient bound must be at least 1");
        }
        if self.jobs == 0 {
            return bad("jobs must be at least 1");
        }
        Ok(())
    }

    pub fn s_key(&self) -> String {
        places_key(&self.places)
    }

    /// Digest of everything that determines the output.
    pub fn resume_token(&self) -> String {
        let canonical = format!(
            "schema={SCHEMA_VERSION};s={};degrees={}..{};B={};precision={}..{}",
            self.s_key(),
            self.degree_min,
            self.degree_max,
            self.coeff_bound,
            self.policy.initial,
            self.policy.cap
        );
        Sha256::digest(canonical.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    fn chunks(&self) -> Vec<ChunkId> {
        let b = self.coeff_bound;
        let mut out = Vec::new();
        for degree in self.degree_min..=self.degree_max {
            let mut index = 0;
            for top in -b..=b {
                for next in -b..=b {
                    out.push(ChunkId { degree, index, top, next });
                    index += 1;
                }
            }
        }
        out
    }

    fn chunks_per_degree(&self) -> usize {
        let w = (2 * self.coeff_bound + 1) as usize;
        w * w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ChunkId {
    degree: usize,
    index: usize,
    /// `a_{n-1}` and `a_{n-2}`.
    top: i64,
    next: i64,
}

#[derive(Debug, Clone, PartialEq)]
struct ChunkResult {
    stats: Stats,
    best: Option<Candidate>,
    undecided: Vec<Vec<i64>>,
    violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub table: RecordTable,
    pub stats: Stats,
    /// Coefficient vectors whose splitting stayed undecided at the precision cap.
    pub undecided: Vec<Vec<i64>>,
    /// Lower-bound and Baker–Mahler failures, and internal errors.
    pub violations: Vec<String>,
    pub interrupted: bool,
    /// Chunks computed in this run (not taken from the journal).
    pub chunks_computed: usize,
}

impl SearchOutcome {
    /// 3 for assertion failures, 2 for undecided splittings, else 0.
    pub fn exit_code(&self) -> i32 {
        if !self.violations.is_empty() {
            3
        } else if !self.undecided.is_empty() {
            2
        } else {
            0
        }
    }
}

struct Context<'a> {
    checker: SplittingChecker,
    lower_bounds: BTreeMap<usize, f64>,
    config: &'a SearchConfig,
}

pub fn run_search(config: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    config.validate()?;
    let token = config.resume_token();
    let s_key = config.s_key();
    let jpath = journal_path(&config.records);

    if config.records.exists() {
        let existing = RecordTable::load(&config.records)?;
        if existing.header.resume_token != token {
            return Err(SearchError::ResumeTokenMismatch {
                expected: token,
                found: existing.header.resume_token,
            });
        }
    }
    let mut kept = Vec::new();
    let mut done: BTreeMap<(usize, usize), ChunkResult> = BTreeMap::new();
    for ev in read_journal(&jpath)? {
        match &ev {
            JournalEvent::Start { resume_token, .. } if resume_token != &token => {
                return Err(SearchError::ResumeTokenMismatch {
                    expected: token,
                    found: resume_token.clone(),
                });
            }
            JournalEvent::Chunk { degree, index, stats, best, undecided, violations, .. } => {
                done.insert(
                    (*degree, *index),
                    ChunkResult {
                        stats: *stats,
                        best: best.clone(),
                        undecided: undecided.clone(),
                        violations: violations.clone(),
                    },
                );
            }
            _ => {}
        }
        if !matches!(ev, JournalEvent::Complete { .. }) {
            kept.push(ev);
        }
    }
    if kept.is_empty() {
        kept.push(JournalEvent::Start {
            resume_token: token.clone(),
            s_key: s_key.clone(),
            timestamp: now(),
        });
    }
    let mut journal = Journal::open(&jpath, &kept)?;

    let ctx = Context {
        checker: SplittingChecker::new(&config.places, config.policy)?,
        lower_bounds: (config.degree_min..=config.degree_max)
            .map(|n| (n, finite_degree_lower_bound(n, &config.places).expect("n >= 2").value()))
            .collect(),
        config,
    };

    let pending: Vec<ChunkId> = config
        .chunks()
        .into_iter()
        .filter(|c| !done.contains_key(&(c.degree, c.index)))
        .collect();
    let cursor = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let mut computed = 0;
    let mut interrupted = false;
    let mut failure = None;
    let per_degree = config.chunks_per_degree();

    std::thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<(ChunkId, ChunkResult)>();
        for _ in 0..config.jobs.min(pending.len().max(1)) {
            let tx = tx.clone();
            let (ctx, pending, cursor, stop) = (&ctx, &pending, &cursor, &stop);
            scope.spawn(move || loop {
                if stop.load(Ordering::SeqCst) {
                    break;
                }
                let i = cursor.fetch_add(1, Ordering::SeqCst);
                let Some(&chunk) = pending.get(i) else { break };
                let result = process_chunk(ctx, chunk);
                if tx.send((chunk, result)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for (chunk, result) in rx {
            if stop.load(Ordering::SeqCst) {
                continue;
            }
            let ev = JournalEvent::Chunk {
                degree: chunk.degree,
                index: chunk.index,
                stats: result.stats,
                best: result.best.clone(),
                undecided: result.undecided.clone(),
                violations: result.violations.clone(),
                timestamp: now(),
            };
            if let Err(e) = journal.append(&ev) {
                failure = Some(e);
                stop.store(true, Ordering::SeqCst);
                continue;
            }
            done.insert((chunk.degree, chunk.index), result);
            computed += 1;
            let finished = done.range((chunk.degree, 0)..(chunk.degree + 1, 0)).count() == per_degree;
            if finished {
                let table = build_table(config, &token, &done, false);
                if let Err(e) = table.write_atomic(&config.records) {
                    failure = Some(e);
                    stop.store(true, Ordering::SeqCst);
                    continue;
                }
            }
            if config.stop_after_chunks.is_some_and(|k| computed >= k) && done.len() < config.chunks().len() {
                interrupted = true;
                stop.store(true, Ordering::SeqCst);
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }

    let complete = done.len() == config.chunks().len();
    let table = build_table(config, &token, &done, complete);
    if complete {
        journal.append(&JournalEvent::Complete { timestamp: now() })?;
        table.write_atomic(&config.records)?;
    }
    let mut stats = Stats::default();
    let mut undecided = Vec::new();
    let mut violations = Vec::new();
    for r in done.values() {
        stats.add(&r.stats);
        undecided.extend(r.undecided.iter().cloned());
        violations.extend(r.violations.iter().cloned());
    }
    Ok(SearchOutcome {
        table,
        stats,
        undecided,
        violations,
        interrupted: interrupted || !complete,
        chunks_computed: computed,
    })
}

fn build_table(
    config: &SearchConfig,
    token: &str,
    done: &BTreeMap<(usize, usize), ChunkResult>,
    complete: bool,
) -> RecordTable {
    let s_key = config.s_key();
    let per_degree = config.chunks_per_degree();
    let mut stats = BTreeMap::new();
    let mut records = BTreeMap::new();
    for degree in config.degree_min..=config.degree_max {
        let chunks: Vec<&ChunkResult> = done.range((degree, 0)..(degree + 1, 0)).map(|(_, r)| r).collect();
        if chunks.len() != per_degree {
            continue;
        }
        let mut s = Stats::default();
        let mut best: Option<&Candidate> = None;
        for r in &chunks {
            s.add(&r.stats);
            if let Some(c) = &r.best {
                if best.is_none_or(|b| c.better_than(b)) {
                    best = Some(c);
                }
            }
        }
        stats.insert(degree, s);
        if let Some(c) = best {
            records.insert(degree, Record::from_candidate(&s_key, c));
        }
    }
    RecordTable {
        header: SnapshotHeader {
            kind: "header".into(),
            schema_version: SCHEMA_VERSION,
            s_key,
            degrees: [config.degree_min, config.degree_max],
            coeff_bound: config.coeff_bound,
            resume_token: token.to_string(),
            complete,
            stats,
        },
        records,
    }
}

fn process_chunk(ctx: &Context<'_>, chunk: ChunkId) -> ChunkResult {
    let n = chunk.degree;
    let b = ctx.config.coeff_bound;
    let mut c = vec![-b; n + 1];
    c[n] = 1;
    c[n - 1] = chunk.top;
    c[n - 2] = chunk.next;
    let free = n - 2; // c[0..free] vary, c[0] fastest
    let mut out = ChunkResult {
        stats: Stats::default(),
        best: None,
        undecided: Vec::new(),
        violations: Vec::new(),
    };
    loop {
        if c[0] != 0 {
            examine(ctx, &c, &mut out);
        }
        // odometer, lexicographic with the top coefficient most significant
        let mut i = 0;
        loop {
            if i == free {
                return out;
            }
            if c[i] < b {
                c[i] += 1;
                break;
            }
            c[i] = -b;
            i += 1;
        }
    }
}

fn examine(ctx: &Context<'_>, c: &[i64], out: &mut ChunkResult) {
    let n = c.len() - 1;
    out.stats.enumerated += 1;
    if !ctx.checker.residues_split_monic(c) {
        return;
    }
    out.stats.residue_pass += 1;
    if !ctx.checker.lift_bound_allows_split(c) {
        return;
    }
    let f = IntPolynomial::from_i64(c);
    match ctx.checker.check(&f) {
        Ok(r) => match r.decision {
            Decision::No => return,
            Decision::Undecided => {
                out.stats.undecided += 1;
                out.undecided.push(c.to_vec());
                return;
            }
            Decision::Yes => out.stats.split += 1,
        },
        Err(e) => {
            out.violations.push(format!("{f}: splitting failed: {e}"));
            return;
        }
    }
    match certify_irreducible(&f) {
        Ok(true) => {}
        Ok(false) => return,
        Err(e) => {
            out.violations.push(format!("{f}: irreducibility failed: {e}"));
            return;
        }
    }
    out.stats.irreducible += 1;
    let report = match weil_height(&f) {
        Ok(r) => r,
        Err(e) => {
            out.violations.push(format!("{f}: height failed: {e}"));
            return;
        }
    };
    let lb = ctx.lower_bounds[&n];
    if report.h + report.error_radius < lb - LOWER_BOUND_SLACK {
        out.violations.push(format!(
            "{f}: height {:.12} below the degree-{n} lower bound {lb:.12}",
            report.h
        ));
    }
    match pairwise_g_sum(&report.roots, n) {
        Ok(g) if baker_mahler_holds(&g, n) => {}
        Ok(g) => out.violations.push(format!("{f}: g-sum {:.12} below -log n/(n-1)", g.value)),
        Err(e) => out.violations.push(format!("{f}: g-sum failed: {e}")),
    }
    let cand = Candidate {
        coeffs: c.to_vec(),
        height: report.h,
        error_radius: report.error_radius,
    };
    if out.best.as_ref().is_none_or(|b| cand.better_than(b)) {
        out.best = Some(cand);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two() -> Vec<LocalFieldSpec> {
        vec![LocalFieldSpec::unramified(2, 1).unwrap()]
    }

    #[test]
    fn tiny_box_is_empty_in_degree_two() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = SearchConfig::new(two(), (2, 2), 1, dir.path().join("r.jsonl"));
        let out = run_search(&cfg).unwrap();
        // x^2 + a x + b with a in {-1, 0, 1} and b in {-1, 1}
        assert_eq!(out.stats.enumerated, 6);
        assert!(out.table.records.is_empty());
        assert_eq!(out.exit_code(), 0);
        assert!(out.table.header.complete);
    }

    #[test]
    fn small_box_records_and_bounds() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = SearchConfig::new(two(), (2, 4), 3, dir.path().join("r.jsonl"));
        let out = run_search(&cfg).unwrap();
        assert!(out.violations.is_empty(), "{:?}", out.violations);
        assert!(out.undecided.is_empty());
        for (d, r) in &out.table.records {
            let lb = finite_degree_lower_bound(*d, &two()).unwrap().value();
            assert!(r.height_value() >= lb - 1e-9);
        }
        // a monic quadratic splits over Q_2 iff its odd discriminant is 1 mod 8
        let q = &out.table.records[&2];
        let c = q.coeffs_i64().unwrap();
        let disc = c[1] * c[1] - 4 * c[0];
        assert_eq!(disc.rem_euclid(8), 1);
    }

    #[test]
    fn config_validation() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.jsonl");
        assert!(SearchConfig::new(two(), (1, 3), 2, &p).validate().is_err());
        assert!(SearchConfig::new(two(), (2, 3), 0, &p).validate().is_err());
        let ram = vec!["2,2,1".parse().unwrap()];
        assert!(SearchConfig::new(ram, (2, 3), 2, &p).validate().is_err());
        let a = SearchConfig::new(two(), (2, 3), 2, &p);
        let b = SearchConfig::new(two(), (2, 3), 3, &p);
        assert_ne!(a.resume_token(), b.resume_token());
        assert_eq!(a.resume_token().len(), 64);
    }

    #[test]
    fn token_mismatch_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.jsonl");
        run_search(&SearchConfig::new(two(), (2, 2), 2, &p)).unwrap();
        let err = run_search(&SearchConfig::new(two(), (2, 2), 3, &p)).unwrap_err();
        assert!(matches!(err, SearchError::ResumeTokenMismatch { .. }));
    }
}
