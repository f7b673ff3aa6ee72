//! Exhaustion optimality, bounded suboptimality and heuristic audits on
//! oracle-scale instances.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rectsearch::bestfirst::{wastar, WeightSchedule};
use rectsearch::domains::{BlocksVariant, GridCost, PancakeCost, TileCost, VacuumCost};
use rectsearch::search::{cost_le, Successor};
use rectsearch::{Cost, Limits, SearchDomain, SortKey, TerminalStatus};
use rectsearch_harness::config::{AlgorithmSpec, DomainSpec};
use rectsearch_harness::dispatch::{run_algorithm, with_domain, DomainVisitor};
use rectsearch_harness::instances::{generate, NamedInstance};
use rectsearch_harness::oracle::{
    min_actions_from, optimal_cost_from, oracle_optimal, ORACLE_MAX_STATES,
};

use crate::Verdict;

/// Safety net against a runaway algorithm; a run that hits it counts as a
/// failure because it did not exhaust.
const RUN_CAP: u64 = 50_000_000;

fn same_cost(a: Cost, b: Cost) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

fn algorithms() -> Vec<AlgorithmSpec> {
    vec![
        AlgorithmSpec::Rectangle { aspect: 1 },
        AlgorithmSpec::Rectangle { aspect: 500 },
        AlgorithmSpec::StrictRectangle { aspect: 1 },
        AlgorithmSpec::Cabs { order: SortKey::D },
        AlgorithmSpec::Awastar { weight: 1.0 },
        AlgorithmSpec::Awastar { weight: 2.0 },
        AlgorithmSpec::Awastar { weight: 3.0 },
        AlgorithmSpec::Arastar {
            schedule: WeightSchedule::decrement(10.0, 0.02),
        },
        AlgorithmSpec::Arastar {
            schedule: WeightSchedule::decrement(2.5, 0.02),
        },
        AlgorithmSpec::Arastar {
            schedule: WeightSchedule::list(&[5.0, 3.0, 2.0, 1.5, 1.0]),
        },
        AlgorithmSpec::Aees,
        AlgorithmSpec::DfsStar {
            order_children: false,
        },
        AlgorithmSpec::DfsStar {
            order_children: true,
        },
        AlgorithmSpec::IldsStar,
    ]
}

fn gen(kind: &str, params: &[(&str, &str)], seed: u64) -> Vec<NamedInstance> {
    let kind = rectsearch_harness::DomainKind::parse(kind).unwrap();
    let p = params
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    generate(kind, &p, seed).expect("generator parameters are valid")
}

/// Every (domain, cost model) pair with its instance set.
fn oracle_sets() -> Vec<(DomainSpec, Vec<NamedInstance>)> {
    let tiles = gen("tiles", &[("count", "50"), ("w", "3")], 101);
    let pancakes = gen("pancake", &[("count", "50"), ("n", "7")], 102);
    let blocks = gen("blocks", &[("count", "50"), ("n", "5")], 103);
    let vacuum = gen(
        "vacuum",
        &[("count", "25"), ("w", "8"), ("dirts", "3")],
        104,
    );
    let grids = gen("grid", &[("count", "25"), ("w", "20")], 105);
    let mut sets = Vec::new();
    for c in TileCost::ALL {
        sets.push((DomainSpec::Tiles(c), tiles.clone()));
    }
    for c in [PancakeCost::Unit, PancakeCost::Heavy] {
        sets.push((DomainSpec::Pancake(c), pancakes.clone()));
    }
    for v in [BlocksVariant::Standard, BlocksVariant::Deep] {
        sets.push((DomainSpec::Blocks(v), blocks.clone()));
    }
    for c in [VacuumCost::Unit, VacuumCost::Heavy] {
        sets.push((DomainSpec::Vacuum(c), vacuum.clone()));
    }
    for c in [GridCost::Unit, GridCost::Life, GridCost::Octile] {
        sets.push((DomainSpec::Grid(c), grids.clone()));
    }
    sets
}

struct OracleVisitor;

impl DomainVisitor for OracleVisitor {
    type Output = Option<Cost>;
    fn visit<D: SearchDomain + Sync>(self, domain: &D) -> Option<Cost> {
        oracle_optimal(domain).expect("instance within oracle scale")
    }
}

/// Oracle values, computed once and shared between criteria.
fn oracle_cost(spec: DomainSpec, inst: &NamedInstance) -> Option<Cost> {
    static CACHE: OnceLock<Mutex<BTreeMap<(String, String), Option<Cost>>>> = OnceLock::new();
    let key = (spec.to_string(), inst.name.clone());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().unwrap().get(&key) {
        return *c;
    }
    let c = with_domain(&inst.instance, spec, OracleVisitor).expect("domain builds");
    cache.lock().unwrap().insert(key, c);
    c
}

struct AllAlgorithms<'a> {
    algs: &'a [AlgorithmSpec],
    optimal: Option<Cost>,
    seconds: &'a mut [f64],
}

impl DomainVisitor for AllAlgorithms<'_> {
    type Output = Vec<String>;
    fn visit<D: SearchDomain + Sync>(self, domain: &D) -> Vec<String> {
        let mut problems = Vec::new();
        for (i, alg) in self.algs.iter().enumerate() {
            let t = Instant::now();
            let out = run_algorithm(domain, alg, Limits::expansions(RUN_CAP));
            self.seconds[i] += t.elapsed().as_secs_f64();
            let ok = out.trace.status == TerminalStatus::Exhausted
                && out.verified
                && match (out.cost, self.optimal) {
                    (Some(a), Some(b)) => same_cost(a, b),
                    (None, None) => true,
                    _ => false,
                };
            if !ok {
                problems.push(format!(
                    "{}: {:?} cost {:?} (optimal {:?}, verified {})",
                    alg.label(),
                    out.trace.status,
                    out.cost,
                    self.optimal,
                    out.verified
                ));
            }
        }
        problems
    }
}

pub fn exhaustion_optimality() -> Verdict {
    let algs = algorithms();
    let mut failures = Vec::new();
    let mut runs = 0;
    let mut seconds = vec![0.0; algs.len()];
    let mut oracle_secs = 0.0;
    for (spec, instances) in oracle_sets() {
        let started = Instant::now();
        let before = seconds.clone();
        for inst in &instances {
            let t = Instant::now();
            let optimal = oracle_cost(spec, inst);
            oracle_secs += t.elapsed().as_secs_f64();
            let v = AllAlgorithms {
                algs: &algs,
                optimal,
                seconds: &mut seconds,
            };
            for p in with_domain(&inst.instance, spec, v).expect("domain builds") {
                failures.push(format!("{spec} {}: {p}", inst.name));
            }
            runs += algs.len();
        }
        let slowest = algs
            .iter()
            .zip(seconds.iter().zip(&before))
            .map(|(a, (s, b))| (s - b, a.label()))
            .max_by(|x, y| x.0.total_cmp(&y.0))
            .unwrap_or_default();
        println!(
            "  {spec}: {} instances in {:.1}s (slowest {} {:.1}s)",
            instances.len(),
            started.elapsed().as_secs_f64(),
            slowest.1,
            slowest.0
        );
    }
    let timing: Vec<String> = algs
        .iter()
        .zip(&seconds)
        .map(|(a, s)| format!("{} {s:.1}s", a.label()))
        .collect();
    println!(
        "  criterion 1 timing: oracle {oracle_secs:.1}s; {}",
        timing.join(", ")
    );
    if failures.is_empty() {
        Ok(format!("{runs} runs exhausted at the oracle cost"))
    } else {
        for f in failures.iter().take(20) {
            println!("  {f}");
        }
        Err(format!(
            "{} of {runs} runs disagree with the oracle",
            failures.len()
        ))
    }
}

struct WastarBound<'a> {
    weights: &'a [f64],
    optimal: Cost,
}

impl DomainVisitor for WastarBound<'_> {
    type Output = Vec<(f64, Option<Cost>)>;
    fn visit<D: SearchDomain + Sync>(self, domain: &D) -> Self::Output {
        self.weights
            .iter()
            .map(|&w| {
                (
                    w,
                    wastar(domain, w, Limits::expansions(RUN_CAP))
                        .solution
                        .map(|s| s.cost),
                )
            })
            .filter(|&(w, c)| !c.is_some_and(|c| c <= w * self.optimal * (1.0 + 1e-12)))
            .collect()
    }
}

pub fn bounded_suboptimality() -> Verdict {
    let weights = [1.5, 2.0, 3.0];
    let mut checked = 0;
    let mut failures = Vec::new();
    for (spec, instances) in oracle_sets() {
        for inst in &instances {
            let Some(optimal) = oracle_cost(spec, inst) else {
                continue;
            };
            let v = WastarBound {
                weights: &weights,
                optimal,
            };
            for (w, c) in with_domain(&inst.instance, spec, v).expect("domain builds") {
                failures.push(format!(
                    "{spec} {} w={w}: cost {c:?} vs optimal {optimal}",
                    inst.name
                ));
            }
            checked += weights.len();
        }
    }
    if failures.is_empty() {
        Ok(format!(
            "{checked} weighted A* solutions within w x optimal"
        ))
    } else {
        for f in failures.iter().take(20) {
            println!("  {f}");
        }
        Err(format!(
            "{} of {checked} solutions exceed the bound",
            failures.len()
        ))
    }
}

/// Audit counts for one domain and cost model.
#[derive(Default)]
struct Audit {
    states: usize,
    h_violations: Vec<String>,
    d_violations: usize,
}

struct AuditVisitor<'a> {
    rng: &'a mut ChaCha8Rng,
    samples: usize,
    audit: &'a mut Audit,
}

impl DomainVisitor for AuditVisitor<'_> {
    type Output = ();
    fn visit<D: SearchDomain + Sync>(self, domain: &D) {
        let mut succ: Vec<Successor<D::State, D::Action>> = Vec::new();
        for _ in 0..self.samples {
            // Random walk from the start state; the walk length sets how far
            // from the start the sampled state lies.
            let mut s = domain.initial_state();
            for _ in 0..self.rng.gen_range(0..40) {
                succ.clear();
                domain.successors(&s, &mut succ);
                match succ.choose(self.rng) {
                    Some(x) => s = x.state.clone(),
                    None => break,
                }
            }
            let Some(opt) =
                optimal_cost_from(domain, s.clone(), ORACLE_MAX_STATES).expect("oracle scale")
            else {
                continue;
            };
            self.audit.states += 1;
            let h = domain.h(&s);
            if !cost_le(h, opt) {
                self.audit
                    .h_violations
                    .push(format!("{s:?}: h {h} > optimal {opt}"));
            }
            let steps =
                min_actions_from(domain, s.clone(), ORACLE_MAX_STATES).expect("oracle scale");
            if steps.is_some_and(|n| domain.d(&s) > n as f64 + 1e-9) {
                self.audit.d_violations += 1;
            }
        }
    }
}

pub fn admissibility_audit() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    let mut report = Vec::new();
    let mut heavy_gap = 0;
    for (spec, instances) in oracle_sets() {
        let mut audit = Audit::default();
        let per_instance = 200usize.div_ceil(instances.len());
        for inst in &instances {
            let v = AuditVisitor {
                rng: &mut rng,
                samples: per_instance,
                audit: &mut audit,
            };
            with_domain(&inst.instance, spec, v).expect("domain builds");
        }
        if audit.states < 200 {
            failures.push(format!("{spec}: only {} states audited", audit.states));
        }
        if spec == DomainSpec::Pancake(PancakeCost::Heavy) {
            heavy_gap = audit.h_violations.len();
            println!(
                "  heavy gap audit: {heavy_gap} violations in {} states",
                audit.states
            );
        } else if !audit.h_violations.is_empty() {
            failures.push(format!(
                "{spec}: {} h violations, e.g. {}",
                audit.h_violations.len(),
                audit.h_violations[0]
            ));
        }
        report.push(format!("{spec} {}/{}", audit.states, audit.d_violations));
    }
    println!(
        "  audited states / d above fewest actions: {}",
        report.join(", ")
    );
    if failures.is_empty() {
        Ok(format!(
            "h <= optimal on every audited state; heavy gap violations: {heavy_gap}"
        ))
    } else {
        Err(failures.join("; "))
    }
}
