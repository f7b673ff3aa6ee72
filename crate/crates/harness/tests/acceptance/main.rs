//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.
//!
//! Pass criterion numbers as arguments to run a subset:
//! `cargo test --test acceptance -- 1 6`.

mod directional;
mod metrics;
mod optimality;
mod shapes;

use std::process::ExitCode;
use std::time::Instant;

/// What a criterion reports: `Ok(summary)` or `Err(reason)`.
pub type Verdict = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    run: fn() -> Verdict,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        name: "exhaustion optimality",
        run: optimality::exhaustion_optimality,
    },
    Criterion {
        id: 2,
        name: "rectangle shape",
        run: shapes::rectangle_shape,
    },
    Criterion {
        id: 3,
        name: "strict rectangle = monobead",
        run: shapes::strict_matches_monobead,
    },
    Criterion {
        id: 4,
        name: "overhead bound",
        run: shapes::overhead_bound,
    },
    Criterion {
        id: 5,
        name: "monobead width monotonicity",
        run: shapes::monobead_monotone,
    },
    Criterion {
        id: 6,
        name: "bounded suboptimality",
        run: optimality::bounded_suboptimality,
    },
    Criterion {
        id: 7,
        name: "admissibility audit",
        run: optimality::admissibility_audit,
    },
    Criterion {
        id: 8,
        name: "15-puzzle anytime profile",
        run: directional::fifteen_puzzle,
    },
    Criterion {
        id: 9,
        name: "slalom map",
        run: directional::slalom,
    },
    Criterion {
        id: 10,
        name: "harness metrics",
        run: metrics::harness_metrics,
    },
];

fn main() -> ExitCode {
    let wanted: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    let mut lines = Vec::new();
    for c in CRITERIA {
        if !wanted.is_empty() && !wanted.contains(&c.id) {
            continue;
        }
        let t = Instant::now();
        let verdict = (c.run)();
        let secs = t.elapsed().as_secs_f64();
        let line = match verdict {
            Ok(msg) => format!("criterion {:>2} PASS  {} ({secs:.1}s): {msg}", c.id, c.name),
            Err(msg) => {
                failed += 1;
                format!("criterion {:>2} FAIL  {} ({secs:.1}s): {msg}", c.id, c.name)
            }
        };
        println!("{line}");
        lines.push(line);
    }
    println!("\nacceptance summary");
    for l in &lines {
        println!("{l}");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
