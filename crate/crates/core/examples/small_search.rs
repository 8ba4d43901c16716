//! A small search with a record table, a text report and an audit.
//!
//! ```text
//! cargo run --release --example small_search -- [records.jsonl]
//! ```

use totally_padic::search::{audit, report, run_search, ReportFormat, SearchConfig};
use totally_padic::LocalFieldSpec;

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("tpadic_small_search.jsonl"));
    let _ = std::fs::remove_file(&path);
    let _ = std::fs::remove_file(totally_padic::search::journal_path(&path));

    let places = vec![LocalFieldSpec::unramified(2, 1).unwrap()];
    let mut cfg = SearchConfig::new(places, (2, 4), 5, &path);
    cfg.jobs = 2;
    let out = run_search(&cfg).unwrap();
    println!(
        "enumerated {}, split {}, irreducible {}, undecided {}, violations {}",
        out.stats.enumerated,
        out.stats.split,
        out.stats.irreducible,
        out.undecided.len(),
        out.violations.len()
    );
    print!("{}", report(&out.table, ReportFormat::Text).unwrap());
    let a = audit(&path).unwrap();
    println!("audit: {} records checked, ok = {}", a.checked, a.ok());
    println!("records written to {}", path.display());
}
