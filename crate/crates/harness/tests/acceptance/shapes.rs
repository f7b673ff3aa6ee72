//! Expansion shape properties on synthetic trees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rectsearch::beam::monobead_search;
use rectsearch::domains::tree::{RandomTreeSpec, TreeBuilder, TreeDomain};
use rectsearch::rectangle::{
    rectangle_search, strict_rectangle_search, RectangleConfig, SlotRecord,
};
use rectsearch::search::Successor;
use rectsearch::{Cost, Limits, NodeOrder, SearchDomain};

use crate::Verdict;

fn scramble(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Unit-cost tree generated on the fly: node ids are `parent * B + i + 1`
/// (wrapping, which only matters on very wide or deep trees), depth is
/// capped, and an optional single goal node.
#[derive(Debug)]
struct Implicit {
    branching: u64,
    max_depth: u32,
    goal: Option<u64>,
}

impl SearchDomain for Implicit {
    type State = (u64, u32);
    type Action = u64;
    fn initial_state(&self) -> (u64, u32) {
        (0, 0)
    }
    fn successors(&self, &(id, depth): &(u64, u32), out: &mut Vec<Successor<(u64, u32), u64>>) {
        if Some(id) == self.goal || depth >= self.max_depth {
            return;
        }
        for i in 0..self.branching {
            let c = id.wrapping_mul(self.branching).wrapping_add(i + 1);
            out.push(Successor {
                state: (c, depth + 1),
                action: c,
                cost: 1.0,
            });
        }
    }
    fn is_goal(&self, s: &(u64, u32)) -> bool {
        Some(s.0) == self.goal
    }
    fn h(&self, _: &(u64, u32)) -> Cost {
        0.0
    }
    fn d(&self, s: &(u64, u32)) -> f64 {
        if self.is_goal(s) {
            0.0
        } else {
            (1 + scramble(s.0) % 50) as f64
        }
    }
}

/// Runs rectangle(1) for 1..=25 iterations and compares the per-depth
/// expansion counts with `want(k, depth)`.
fn check_shape(dom: &Implicit, want: impl Fn(u64, u32) -> u64) -> Result<(), String> {
    for k in 1..=25u64 {
        let mut cfg = RectangleConfig::new(1);
        cfg.max_iterations = Some(k);
        let run = rectangle_search(dom, &cfg);
        let per_depth = &run.expansions_per_depth;
        for depth in 1..per_depth.len().max(k as usize + 1) {
            let got = per_depth.get(depth).copied().unwrap_or(0);
            let want = if depth as u64 <= k {
                want(k, depth as u32)
            } else {
                0
            };
            if got != want {
                return Err(format!(
                    "branching {}: after {k} iterations depth {depth} has {got} expansions, not {want}",
                    dom.branching
                ));
            }
        }
    }
    Ok(())
}

pub fn rectangle_shape() -> Verdict {
    // Shallow levels of a branching-3 tree run out of nodes: depth j holds
    // only 3^j, and a spent level forfeits its expansion.
    let narrow = Implicit {
        branching: 3,
        max_depth: 30,
        goal: None,
    };
    check_shape(&narrow, |k, j| k.min(3u64.saturating_pow(j)))?;
    // Wide enough that no level runs out within 25 iterations.
    let wide = Implicit {
        branching: 25,
        max_depth: 30,
        goal: None,
    };
    check_shape(&wide, |k, _| k)?;

    // root -> A B C; A -> D E; B -> F; D -> G H; E -> I. Lower d is better,
    // so A, B, C / D, E, F / G, H, I head their levels in that order.
    let mut b = TreeBuilder::new(3.0);
    let r = b.root();
    let a = b.child(r, 1.0, 0.0, 1.0, false);
    let bb = b.child(r, 1.0, 0.0, 2.0, false);
    let c = b.child(r, 1.0, 0.0, 3.0, false);
    let d = b.child(a, 1.0, 0.0, 1.0, false);
    let e = b.child(a, 1.0, 0.0, 2.0, false);
    let f = b.child(bb, 1.0, 0.0, 3.0, false);
    let g = b.child(d, 1.0, 0.0, 1.0, false);
    let h = b.child(d, 1.0, 0.0, 2.0, false);
    let i = b.child(e, 1.0, 0.0, 3.0, false);
    let tree = b.build();
    let names = [
        (a, 'A'),
        (bb, 'B'),
        (c, 'C'),
        (d, 'D'),
        (e, 'E'),
        (f, 'F'),
        (g, 'G'),
        (h, 'H'),
        (i, 'I'),
    ];
    let mut cfg = RectangleConfig::new(1);
    cfg.max_iterations = Some(3);
    cfg.record_expansions = true;
    let run = rectangle_search(&tree, &cfg);
    let order: String = run
        .expansion_log
        .iter()
        .filter(|(depth, _)| *depth > 0)
        .map(|(_, s)| {
            names
                .iter()
                .find(|(id, _)| id == s)
                .map_or('?', |(_, n)| *n)
        })
        .collect();
    if order != "ABDECFGHI" {
        return Err(format!("ten-node tree expanded in order {order}"));
    }
    Ok("k = 1..25: min(k, 3^j) expansions at depth j with branching 3, k at every depth with branching 25; ten-node order A;B,D,E;C,F,G,H,I".into())
}

fn by_position<S: Clone>(log: &[SlotRecord<S>], max_slot: u32) -> Vec<SlotRecord<S>> {
    let mut v: Vec<_> = log.iter().filter(|r| r.slot <= max_slot).cloned().collect();
    v.sort_by_key(|r| (r.depth, r.slot));
    v
}

pub fn strict_matches_monobead() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut compared = 0;
    for t in 0..100 {
        let spec = RandomTreeSpec {
            max_branching: 4,
            max_depth: 12,
            goal_prob: 0.0,
            cost_range: (1, 5),
        };
        let dom = TreeDomain::random(&mut rng, spec);
        let mut cfg = RectangleConfig::new(1);
        cfg.record_expansions = true;
        let strict = strict_rectangle_search(&dom, &cfg);
        for width in 1..=8u32 {
            let mono = monobead_search(&dom, width as usize, NodeOrder::D, Limits::unbounded());
            let a = by_position(&strict.slot_log, width);
            let b = by_position(&mono.slot_log, width);
            if a != b {
                let at = a
                    .iter()
                    .zip(&b)
                    .position(|(x, y)| x != y)
                    .unwrap_or(a.len().min(b.len()));
                return Err(format!(
                    "tree {t} ({} nodes), width {width}: logs differ at entry {at} of {}/{}",
                    dom.len(),
                    a.len(),
                    b.len()
                ));
            }
            compared += a.len();
        }
    }
    Ok(format!(
        "100 trees x widths 1..8 identical ({compared} slot records)"
    ))
}

fn case_bound(s: i64, d: i64) -> i64 {
    use std::cmp::Ordering::*;
    match s.cmp(&d) {
        Equal => 0,
        Greater => (s - d - 1) * (s - 1),
        Less => (d - 1) * (d - s),
    }
}

pub fn overhead_bound() -> Verdict {
    let mut worst = Vec::new();
    for s in 1..=8u32 {
        for d in 1..=8u32 {
            let mut dom = Implicit {
                branching: 8,
                max_depth: 64,
                goal: None,
            };
            // Find the node monobead puts in slot s at depth d, then hang
            // the only goal below it.
            let probe = monobead_search(
                &dom,
                s as usize,
                NodeOrder::D,
                Limits::expansions(u64::from(s * (d + 2))),
            );
            let Some(x) = probe.slot_log.iter().find(|r| r.depth == d && r.slot == s) else {
                return Err(format!("monobead({s}) never filled slot {s} at depth {d}"));
            };
            dom.goal = Some(x.state.0 * dom.branching + 1);
            let mono = monobead_search(&dom, s as usize, NodeOrder::D, Limits::unbounded());
            let mut cfg = RectangleConfig::new(1);
            cfg.limits = Limits::expansions(1_000_000);
            let strict = strict_rectangle_search(&dom, &cfg);
            let (Some(m), Some(r)) = (
                mono.result.trace.events.first(),
                strict.result.trace.events.first(),
            ) else {
                return Err(format!("s={s} d={d}: a search missed the goal"));
            };
            let extra = r.expansions as i64 - m.expansions as i64;
            let bound = case_bound(s as i64, d as i64);
            let ok = if s == d {
                extra == 0
            } else {
                (0..=bound).contains(&extra)
            };
            if !ok {
                return Err(format!(
                    "s={s} d={d}: {extra} extra expansions, bound {bound}"
                ));
            }
            worst.push((extra, s, d));
        }
    }
    let (extra, s, d) = worst.into_iter().max().unwrap_or_default();
    Ok(format!(
        "64 (s, d) pairs within the case bound; largest overhead {extra} at s={s}, d={d}"
    ))
}

pub fn monobead_monotone() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let mut solved = 0;
    for t in 0..200 {
        let spec = RandomTreeSpec {
            max_branching: 4,
            max_depth: 10,
            goal_prob: 0.08,
            cost_range: (1, 1),
        };
        let dom = TreeDomain::random(&mut rng, spec);
        let mut prev = Cost::INFINITY;
        for width in 1..=8 {
            let run = monobead_search(&dom, width, NodeOrder::D, Limits::unbounded());
            let c = run.result.trace.first_cost();
            if c > prev {
                return Err(format!(
                    "tree {t}: width {width} found cost {c} after {prev} at width {}",
                    width - 1
                ));
            }
            prev = c;
        }
        solved += usize::from(prev.is_finite());
    }
    Ok(format!("200 unit-cost trees, first-solution cost non-increasing over widths 1..8 ({solved} solved at width 8)"))
}
