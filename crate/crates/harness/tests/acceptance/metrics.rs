//! Harness metric examples and rerun determinism.

use std::collections::BTreeMap;

use rectsearch::bestfirst::WeightSchedule;
use rectsearch::domains::{PancakeCost, TileCost};
use rectsearch::search::TraceEvent;
use rectsearch::{AnytimeTrace, SortKey, TerminalStatus};
use rectsearch_harness::config::{AlgorithmSpec, DomainSpec, InstanceSource, RunConfig};
use rectsearch_harness::metrics::{build_quality_curves, quality, Axis, RunTrace};
use rectsearch_harness::runner::{run_experiment, write_jsonl};

use crate::Verdict;

fn run(alg: &str, inst: &str, events: &[(u64, f64)]) -> RunTrace {
    RunTrace {
        algorithm: alg.into(),
        instance: inst.into(),
        trace: AnytimeTrace {
            events: events
                .iter()
                .map(|&(x, cost)| TraceEvent {
                    elapsed_ms: x as f64,
                    expansions: x,
                    generated: x,
                    cost,
                })
                .collect(),
            status: TerminalStatus::ExpansionLimit,
            total_expansions: 100,
            total_generated: 100,
        },
    }
}

fn check(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn quality_examples() -> Result<(), String> {
    check(
        quality(10.0, f64::INFINITY) == Ok(0.0),
        "quality(10, inf) != 0",
    )?;
    check(quality(10.0, 10.0) == Ok(1.0), "quality(10, 10) != 1")?;
    check(quality(10.0, 20.0) == Ok(0.5), "quality(10, 20) != 0.5")?;
    check(quality(0.0, 0.0) == Ok(1.0), "quality(0, 0) != 1")?;
    check(
        quality(10.0, 9.0).is_err(),
        "incumbent below best known accepted",
    )
}

fn averaging_rule() -> Result<(), String> {
    // a solves x and y; b solves only x. y counts in quality, not in cost.
    let runs = vec![
        run("a", "x", &[(5, 10.0)]),
        run("a", "y", &[(5, 40.0)]),
        run("b", "x", &[(5, 20.0)]),
        run("b", "y", &[]),
    ];
    let best: BTreeMap<String, f64> = [("x".to_string(), 10.0), ("y".to_string(), 40.0)].into();
    let curves = build_quality_curves(&runs, &best, &[0.0, 5.0], Axis::Expansions)
        .map_err(|e| e.to_string())?;
    let a = &curves[0];
    let b = &curves[1];
    check(a.quality == vec![0.0, 1.0], "a quality")?;
    check(b.quality == vec![0.0, 0.25], "b quality counts y as 0")?;
    check(
        a.coverage == vec![0, 2] && b.coverage == vec![0, 1],
        "coverage",
    )?;
    check(
        a.avg_cost == vec![None, Some(10.0)],
        "a cost average must exclude y",
    )?;
    check(b.avg_cost == vec![None, Some(20.0)], "b cost average")?;
    check(
        a.full_coverage_at == Some(5.0) && b.full_coverage_at.is_none(),
        "full coverage dot",
    )?;

    // An algorithm under 20% coverage is flagged and leaves the mutual set.
    let mut runs = Vec::new();
    for i in 0..10 {
        let inst = format!("i{i}");
        runs.push(run("good", &inst, &[(1, 2.0)]));
        let rare: &[(u64, f64)] = if i == 0 { &[(1, 4.0)] } else { &[] };
        runs.push(run("rare", &inst, rare));
    }
    let best = (0..10).map(|i| (format!("i{i}"), 2.0)).collect();
    let curves =
        build_quality_curves(&runs, &best, &[1.0], Axis::Expansions).map_err(|e| e.to_string())?;
    check(!curves[0].flagged && curves[1].flagged, "20% flag")?;
    check(
        curves[0].avg_cost == vec![Some(2.0)],
        "flagged algorithm must not shrink the mutual set",
    )?;
    check(
        curves[1].avg_cost == vec![None],
        "flagged algorithm has no cost average",
    )?;

    let empty = vec![run("a", "x", &[]), run("b", "x", &[])];
    let best = [("x".to_string(), 3.0)].into();
    let curves = build_quality_curves(&empty, &best, &[0.0, 9.0], Axis::Expansions)
        .map_err(|e| e.to_string())?;
    check(
        curves.iter().all(|c| c.quality == vec![0.0, 0.0]),
        "empty traces give zero curves",
    )
}

fn rerun_bytes() -> Result<Vec<u8>, String> {
    let algs = [
        AlgorithmSpec::Rectangle { aspect: 1 },
        AlgorithmSpec::Cabs { order: SortKey::D },
        AlgorithmSpec::Arastar {
            schedule: WeightSchedule::list(&[5.0, 3.0, 2.0, 1.5, 1.0]),
        },
        AlgorithmSpec::Aees,
        AlgorithmSpec::IldsStar,
    ];
    let domains = [
        (DomainSpec::Tiles(TileCost::Inverse), "gen:count=4,w=4"),
        (DomainSpec::Pancake(PancakeCost::Heavy), "gen:count=4,n=12"),
    ];
    let mut configs = Vec::new();
    for alg in &algs {
        for (domain, source) in &domains {
            let mut c =
                RunConfig::new(alg.clone(), *domain, InstanceSource::parse(source).unwrap());
            c.time_limit_ms = None;
            c.expansion_limit = Some(20_000);
            c.seed = 11;
            c.record_wall_clock = false;
            configs.push(c);
        }
    }
    let records = run_experiment(&configs).map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("r.jsonl");
    write_jsonl(&path, &records).map_err(|e| e.to_string())?;
    std::fs::read(&path).map_err(|e| e.to_string())
}

pub fn harness_metrics() -> Verdict {
    quality_examples()?;
    averaging_rule()?;
    let a = rerun_bytes()?;
    let b = rerun_bytes()?;
    check(a == b, "reruns produced different trace files")?;
    Ok(format!(
        "quality examples exact; mutual-set averaging; reruns byte-identical ({} bytes)",
        a.len()
    ))
}
