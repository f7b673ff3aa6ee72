//! Directional comparisons: the 15-puzzle anytime profile and the slalom
//! room map.

use std::collections::BTreeMap;
use std::time::Instant;

use rectsearch::bestfirst::{gbfs, WeightSchedule};
use rectsearch::domains::{GridCost, GridDomain, GridInstance, GridMap, TileCost};
use rectsearch::rectangle::{rectangle_search, RectangleConfig};
use rectsearch::{Limits, SearchDomain};
use rectsearch_harness::config::{AlgorithmSpec, DomainSpec};
use rectsearch_harness::dispatch::{run_algorithm, with_domain, DomainVisitor, Outcome};
use rectsearch_harness::instances::generate;
use rectsearch_harness::metrics::{best_known, build_quality_curves, Axis, RunTrace};
use rectsearch_harness::DomainKind;

use crate::Verdict;

const BUDGET: u64 = 10_000_000;

struct Run<'a>(&'a AlgorithmSpec);

impl DomainVisitor for Run<'_> {
    type Output = Outcome;
    fn visit<D: SearchDomain + Sync>(self, domain: &D) -> Outcome {
        run_algorithm(domain, self.0, Limits::expansions(BUDGET))
    }
}

pub fn fifteen_puzzle() -> Verdict {
    let params = [("count", "50"), ("w", "4")].map(|(k, v)| (k.to_string(), v.to_string()));
    let instances =
        generate(DomainKind::Tiles, &params.into_iter().collect(), 8).map_err(|e| e.to_string())?;
    let algs = [
        AlgorithmSpec::Rectangle { aspect: 1 },
        AlgorithmSpec::Arastar {
            schedule: WeightSchedule::list(&[5.0, 3.0, 2.0, 1.5, 1.0]),
        },
        AlgorithmSpec::Aees,
    ];
    let spec = DomainSpec::Tiles(TileCost::Unit);
    let mut runs = Vec::new();
    for alg in &algs {
        let t = Instant::now();
        for inst in &instances {
            let out = with_domain(&inst.instance, spec, Run(alg)).map_err(|e| e.to_string())?;
            if !out.verified {
                return Err(format!(
                    "{} on {}: plan failed verification",
                    alg.label(),
                    inst.name
                ));
            }
            runs.push(RunTrace {
                algorithm: alg.label(),
                instance: inst.name.clone(),
                trace: out.trace,
            });
        }
        println!(
            "  {}: {} instances in {:.0}s",
            alg.label(),
            instances.len(),
            t.elapsed().as_secs_f64()
        );
    }
    let best = best_known(&runs, &BTreeMap::new());
    let curves = build_quality_curves(&runs, &best, &[BUDGET as f64], Axis::Expansions)
        .map_err(|e| e.to_string())?;
    let mut summary = Vec::new();
    for alg in &algs {
        let label = alg.label();
        let quality = curves
            .iter()
            .find(|c| c.algorithm == label)
            .map_or(0.0, |c| c.quality[0]);
        let firsts: Vec<_> = runs
            .iter()
            .filter(|r| r.algorithm == label)
            .map(|r| r.trace.events.first().map(|e| e.expansions))
            .collect();
        let coverage = firsts
            .iter()
            .copied()
            .collect::<Option<Vec<_>>>()
            .map(|v| v.into_iter().max().unwrap_or(0));
        summary.push((label, coverage, quality));
    }
    let msg = summary
        .iter()
        .map(|(l, c, q)| {
            let c = c.map_or("never".to_string(), |c| c.to_string());
            format!("{l}: full coverage at {c}, quality {q:.4}")
        })
        .collect::<Vec<_>>()
        .join("; ");
    let (_, rect_cov, rect_q) = summary[0];
    let Some(rect_cov) = rect_cov else {
        return Err(msg);
    };
    let ok = summary[1..]
        .iter()
        .all(|(_, c, q)| c.is_none_or(|c| rect_cov <= c) && rect_q >= q - 0.02);
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Room with staggered rows of cups, exits near the start.
#[derive(Clone, Copy, Debug)]
pub struct Slalom {
    pub room_w: usize,
    pub room_h: usize,
    pub cup_w: usize,
    pub cup_h: usize,
    pub gap: usize,
    pub row_step: usize,
}

impl Slalom {
    pub fn build(&self, goal_inside: bool) -> GridInstance {
        let margin = 3;
        let w = self.room_w + 2 + 2 * margin;
        let top = 12;
        let h = self.room_h + 2 + top + margin;
        let mut map = GridMap::open(w, h);
        let (x0, y0) = (margin, top);
        let (x1, y1) = (x0 + self.room_w + 1, y0 + self.room_h + 1);
        for x in x0..=x1 {
            map.set_blocked(x, y0, true);
            map.set_blocked(x, y1, true);
        }
        for y in y0..=y1 {
            map.set_blocked(x0, y, true);
            map.set_blocked(x1, y, true);
        }
        // Cups open downwards, towards the start.
        let mut row = 0;
        let mut cy = y0 + 3;
        while cy + self.cup_h + 4 < y1 {
            let offset = if row % 2 == 0 {
                2
            } else {
                2 + (self.cup_w + self.gap) / 2
            };
            let mut cx = x0 + offset;
            while cx + self.cup_w < x1 - 1 {
                for x in cx..cx + self.cup_w {
                    map.set_blocked(x, cy, true);
                }
                for y in cy..cy + self.cup_h {
                    map.set_blocked(cx, y, true);
                    map.set_blocked(cx + self.cup_w - 1, y, true);
                }
                cx += self.cup_w + self.gap;
            }
            cy += self.row_step;
            row += 1;
        }
        let start = (x0 + 2, y1 - 2);
        // Exits in the bottom wall next to the start.
        map.set_blocked(x0 + 4, y1, false);
        map.set_blocked(x0 + 8, y1, false);
        let goal = if goal_inside {
            (x0 + self.room_w / 2 + 1, y0 + 4)
        } else {
            (x0 + 2, 2)
        };
        for (x, y) in [start, goal] {
            map.set_blocked(x, y, false);
        }
        GridInstance::new(map, start, goal).expect("start and goal are free")
    }
}

pub fn slalom() -> Verdict {
    let layout = Slalom {
        room_w: 60,
        room_h: 40,
        cup_w: 6,
        cup_h: 4,
        gap: 3,
        row_step: 6,
    };
    let limits = Limits::expansions(10_000_000);
    let mut counts = Vec::new();
    for inside in [false, true] {
        let dom = GridDomain::new(&layout.build(inside), GridCost::Octile);
        let g = gbfs(&dom, limits);
        let r = rectangle_search(&dom, &RectangleConfig::new(1).with_limits(limits)).result;
        let first = |t: &rectsearch::AnytimeTrace| t.events.first().map(|e| e.expansions);
        let (Some(g), Some(r)) = (first(&g.trace), first(&r.trace)) else {
            return Err(format!(
                "no solution with the goal {}",
                if inside { "inside" } else { "outside" }
            ));
        };
        counts.push((g, r));
    }
    let [(g_out, r_out), (g_in, r_in)] = counts[..] else {
        unreachable!()
    };
    let msg = format!("goal outside: rectangle {r_out} vs gbfs {g_out}; goal inside: rectangle {r_in} vs gbfs {g_in}");
    if 2 * r_out < g_out && g_in < r_in {
        Ok(msg)
    } else {
        Err(msg)
    }
}
