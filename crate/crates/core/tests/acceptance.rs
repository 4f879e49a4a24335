//! Full-scale acceptance run: one line per criterion, nonzero exit if any fails.

use sumfree::enumeration::SearchConfig;
use sumfree::verify::{run_criterion, Suite, CRITERIA};

fn main() {
    let only: Vec<u8> = std::env::var("SUMFREE_ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect())
        .unwrap_or_default();
    let cfg = SearchConfig::default().with_threads(0);
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let report = run_criterion(id, Suite::Full, &cfg).expect("known criterion");
        println!("{report}");
        if !report.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
