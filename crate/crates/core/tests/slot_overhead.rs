use rectsearch::beam::monobead_search;
use rectsearch::rectangle::{strict_rectangle_search, RectangleConfig};
use rectsearch::search::{Cost, Limits, NodeOrder, SearchDomain, Successor};

/// Infinite unit-cost tree. Node ids are `parent * B + i + 1`; distance-to-go
/// values are scrambled per node so sibling order differs between parents.
#[derive(Debug)]
struct Implicit {
    branching: u64,
    goal: Option<u64>,
}

fn scramble(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SearchDomain for Implicit {
    type State = u64;
    type Action = u64;
    fn initial_state(&self) -> u64 {
        0
    }
    fn successors(&self, s: &u64, out: &mut Vec<Successor<u64, u64>>) {
        if Some(*s) == self.goal {
            return;
        }
        for i in 0..self.branching {
            let c = s * self.branching + i + 1;
            out.push(Successor {
                state: c,
                action: c,
                cost: 1.0,
            });
        }
    }
    fn is_goal(&self, s: &u64) -> bool {
        Some(*s) == self.goal
    }
    fn h(&self, _: &u64) -> Cost {
        0.0
    }
    fn d(&self, s: &u64) -> f64 {
        if self.is_goal(s) {
            0.0
        } else {
            (1 + scramble(*s) % 50) as f64
        }
    }
}

fn bound(s: i64, d: i64) -> i64 {
    use std::cmp::Ordering::*;
    match s.cmp(&d) {
        Equal => 0,
        Greater => (s - d - 1) * (s - 1),
        Less => (d - 1) * (d - s),
    }
}

#[test]
fn overhead_within_case_bound() {
    for s in 1..=8u32 {
        for d in 1..=8u32 {
            let mut dom = Implicit {
                branching: 8,
                goal: None,
            };
            let probe = monobead_search(
                &dom,
                s as usize,
                NodeOrder::D,
                Limits::expansions(u64::from(s * (d + 2))),
            );
            let x = probe
                .slot_log
                .iter()
                .find(|r| r.depth == d && r.slot == s)
                .expect("slot exists")
                .state;
            dom.goal = Some(x * dom.branching + 1);
            let mono = monobead_search(&dom, s as usize, NodeOrder::D, Limits::unbounded());
            assert_eq!(mono.result.trace.events.len(), 1);
            let mut cfg = RectangleConfig::new(1);
            cfg.limits = Limits::expansions(100_000);
            let strict = strict_rectangle_search(&dom, &cfg);
            let m = mono.result.trace.events[0].expansions as i64;
            let r = strict.result.trace.events[0].expansions as i64;
            let extra = r - m;
            println!(
                "s={s} d={d} mono={m} strict={r} extra={extra} bound={}",
                bound(s as i64, d as i64)
            );
            if s == d {
                assert_eq!(extra, 0);
            } else {
                assert!(extra <= bound(s as i64, d as i64) && extra >= 0);
            }
        }
    }
}
