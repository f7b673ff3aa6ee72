//! Anytime quality metrics and curve aggregation.

use std::collections::{BTreeMap, BTreeSet};

use rectsearch::{AnytimeTrace, Cost};
use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Relative slack when checking that the incumbent is not below the best
/// known cost (irrational cost models disagree in the last bits).
const LOWER_ENVELOPE_SLACK: f64 = 1e-9;

/// `best_known / incumbent`: 0 without an incumbent, 1 when they match.
pub fn quality(best_known: Cost, incumbent: Cost) -> Result<f64, HarnessError> {
    if best_known.is_nan() || incumbent.is_nan() || best_known < 0.0 {
        return Err(HarnessError::Metric(format!(
            "invalid costs {best_known} / {incumbent}"
        )));
    }
    if incumbent.is_infinite() {
        return Ok(0.0);
    }
    if incumbent < best_known - LOWER_ENVELOPE_SLACK * best_known.max(1.0) {
        return Err(HarnessError::Metric(format!(
            "incumbent {incumbent} is below the best known cost {best_known}"
        )));
    }
    if best_known == 0.0 {
        return if incumbent == 0.0 {
            Ok(1.0)
        } else {
            Err(HarnessError::Metric(format!(
                "best known cost 0 but incumbent {incumbent}"
            )))
        };
    }
    Ok((best_known / incumbent).min(1.0))
}

/// Which trace coordinate the grid is laid over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    Milliseconds,
    Expansions,
}

impl Axis {
    fn cost_at(self, trace: &AnytimeTrace, t: f64) -> Cost {
        match self {
            Axis::Milliseconds => trace.cost_at_ms(t),
            Axis::Expansions => trace
                .events
                .iter()
                .take_while(|e| e.expansions as f64 <= t)
                .last()
                .map_or(Cost::INFINITY, |e| e.cost),
        }
    }

    fn first_event(self, trace: &AnytimeTrace) -> Option<f64> {
        trace.events.first().map(|e| match self {
            Axis::Milliseconds => e.elapsed_ms,
            Axis::Expansions => e.expansions as f64,
        })
    }
}

/// One algorithm's trace on one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace {
    pub algorithm: String,
    pub instance: String,
    pub trace: AnytimeTrace,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QualityCurve {
    pub algorithm: String,
    pub grid: Vec<f64>,
    /// Average quality over all instances, unsolved ones counting as 0.
    pub quality: Vec<f64>,
    /// Instances with an incumbent at each grid point.
    pub coverage: Vec<usize>,
    /// Average incumbent cost over the instances every unflagged algorithm
    /// has solved at that point; `None` when that set is empty or the
    /// algorithm is flagged.
    pub avg_cost: Vec<Option<f64>>,
    /// When the last instance got its first solution, if all were solved.
    pub full_coverage_at: Option<f64>,
    /// Solved fewer than 20% of the instances by the end of its traces;
    /// such algorithms are left out of cost averaging.
    pub flagged: bool,
}

/// Fraction of instances below which an algorithm is left out of cost
/// averages.
pub const COST_PLOT_MIN_COVERAGE: f64 = 0.2;

/// Lowest cost per instance over all final incumbents and, where given,
/// oracle values.
pub fn best_known(runs: &[RunTrace], oracle: &BTreeMap<String, Cost>) -> BTreeMap<String, Cost> {
    let mut best: BTreeMap<String, Cost> = oracle.clone();
    for r in runs {
        let c = r.trace.final_cost();
        let e = best.entry(r.instance.clone()).or_insert(Cost::INFINITY);
        if c < *e {
            *e = c;
        }
    }
    best
}

pub fn build_quality_curves(
    runs: &[RunTrace],
    best_known: &BTreeMap<String, Cost>,
    grid: &[f64],
    axis: Axis,
) -> Result<Vec<QualityCurve>, HarnessError> {
    let mut by_alg: BTreeMap<&str, BTreeMap<&str, &AnytimeTrace>> = BTreeMap::new();
    for r in runs {
        if by_alg
            .entry(&r.algorithm)
            .or_default()
            .insert(&r.instance, &r.trace)
            .is_some()
        {
            return Err(HarnessError::Metric(format!(
                "duplicate trace for {} on {}",
                r.algorithm, r.instance
            )));
        }
    }
    let instances: BTreeSet<&str> = runs.iter().map(|r| r.instance.as_str()).collect();
    for (alg, traces) in &by_alg {
        if traces.len() != instances.len() {
            return Err(HarnessError::Metric(format!(
                "{alg} has traces for {} of {} instances",
                traces.len(),
                instances.len()
            )));
        }
    }
    for inst in &instances {
        if !best_known.contains_key(*inst) {
            return Err(HarnessError::Metric(format!(
                "no best known cost for {inst}"
            )));
        }
    }
    let n = instances.len();
    let flagged: BTreeMap<&str, bool> = by_alg
        .iter()
        .map(|(alg, traces)| {
            let solved = traces.values().filter(|t| !t.events.is_empty()).count();
            (*alg, (solved as f64) < COST_PLOT_MIN_COVERAGE * n as f64)
        })
        .collect();

    let mut curves = Vec::with_capacity(by_alg.len());
    for (alg, traces) in &by_alg {
        let mut curve = QualityCurve {
            algorithm: alg.to_string(),
            grid: grid.to_vec(),
            quality: Vec::with_capacity(grid.len()),
            coverage: Vec::with_capacity(grid.len()),
            avg_cost: Vec::with_capacity(grid.len()),
            full_coverage_at: None,
            flagged: flagged[alg],
        };
        for &t in grid {
            let mut q = 0.0;
            let mut covered = 0;
            for (inst, trace) in traces {
                let c = axis.cost_at(trace, t);
                q += quality(best_known[*inst], c)?;
                covered += usize::from(c.is_finite());
            }
            curve.quality.push(if n == 0 { 0.0 } else { q / n as f64 });
            curve.coverage.push(covered);
            let avg = if curve.flagged {
                None
            } else {
                let mutual: Vec<&str> = instances
                    .iter()
                    .copied()
                    .filter(|inst| {
                        by_alg
                            .iter()
                            .filter(|(a, _)| !flagged[*a])
                            .all(|(_, ts)| axis.cost_at(ts[inst], t).is_finite())
                    })
                    .collect();
                (!mutual.is_empty()).then(|| {
                    mutual
                        .iter()
                        .map(|i| axis.cost_at(traces[i], t))
                        .sum::<f64>()
                        / mutual.len() as f64
                })
            };
            curve.avg_cost.push(avg);
        }
        if n > 0 && traces.values().all(|t| !t.events.is_empty()) {
            curve.full_coverage_at = traces
                .values()
                .filter_map(|t| axis.first_event(t))
                .reduce(f64::max);
        }
        curves.push(curve);
    }
    Ok(curves)
}

/// Parses `a:b:step` into the inclusive grid `a, a+step, …, ≤ b`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, HarnessError> {
    let bad = || HarnessError::Config(format!("grid `{spec}` is not a:b:step"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [a, b, step] = parts[..] else {
        return Err(bad());
    };
    if !(a.is_finite() && b.is_finite() && step > 0.0 && a <= b) {
        return Err(bad());
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| a + step * i as f64).collect())
}
