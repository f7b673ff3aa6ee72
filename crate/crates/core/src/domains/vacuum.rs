//! Vacuum world: a robot on a 4-connected grid collects up to 64 dirts.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::DomainError;
use crate::search::{Cost, SearchDomain, Successor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VacuumCost {
    Unit,
    /// Moving costs one plus the number of dirts already vacuumed.
    Heavy,
    /// Moving costs exactly the number of dirts already vacuumed. Moves
    /// before the first pickup are free, so [`VacuumDomain::new`] refuses it.
    HeavyLiteral,
}

impl FromStr for VacuumCost {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unit" => Ok(VacuumCost::Unit),
            "heavy" => Ok(VacuumCost::Heavy),
            "heavy-literal" => Ok(VacuumCost::HeavyLiteral),
            _ => Err(DomainError::Unsupported(format!("vacuum cost model `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VacuumInstance {
    pub width: usize,
    pub height: usize,
    pub blocked: Vec<bool>,
    pub agent: (usize, usize),
    pub dirts: Vec<(usize, usize)>,
}

impl VacuumInstance {
    pub fn new(
        width: usize,
        height: usize,
        blocked: Vec<bool>,
        agent: (usize, usize),
        dirts: Vec<(usize, usize)>,
    ) -> Result<Self, DomainError> {
        if width == 0
            || height == 0
            || blocked.len() != width * height
            || width * height > u32::MAX as usize
        {
            return Err(DomainError::Invalid("bad grid size".into()));
        }
        if dirts.len() > 64 {
            return Err(DomainError::Invalid(format!(
                "{} dirts; at most 64 supported",
                dirts.len()
            )));
        }
        let inst = VacuumInstance {
            width,
            height,
            blocked,
            agent,
            dirts,
        };
        let reach = inst.reachable();
        let ok = |&(x, y): &(usize, usize)| x < width && y < height && reach[y * width + x];
        if !ok(&inst.agent) {
            return Err(DomainError::Invalid("agent off the grid or blocked".into()));
        }
        if !inst.dirts.iter().all(ok) {
            return Err(DomainError::Invalid("some dirt is unreachable".into()));
        }
        let mut sorted = inst.dirts.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != inst.dirts.len() {
            return Err(DomainError::Invalid("duplicate dirt".into()));
        }
        Ok(inst)
    }

    fn reachable(&self) -> Vec<bool> {
        let (w, h) = (self.width, self.height);
        let mut seen = vec![false; w * h];
        let (ax, ay) = self.agent;
        if ax >= w || ay >= h || self.blocked[ay * w + ax] {
            return seen;
        }
        let mut queue = VecDeque::from([ay * w + ax]);
        seen[ay * w + ax] = true;
        while let Some(c) = queue.pop_front() {
            let (x, y) = (c % w, c / w);
            let nbrs = [
                (y > 0).then(|| c - w),
                (y + 1 < h).then(|| c + w),
                (x > 0).then(|| c - 1),
                (x + 1 < w).then(|| c + 1),
            ];
            for n in nbrs.into_iter().flatten() {
                if !self.blocked[n] && !seen[n] {
                    seen[n] = true;
                    queue.push_back(n);
                }
            }
        }
        seen
    }

    /// Parses `"w h"` then one row per line: `#` blocked, `.` free, `@`
    /// agent, `*` dirt.
    pub fn parse(text: &str) -> Result<Self, DomainError> {
        let mut lines = text.lines().enumerate();
        let (ln, header) = lines
            .find(|(_, l)| !l.trim().is_empty())
            .ok_or_else(|| DomainError::parse(1, "empty file"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| DomainError::parse(ln + 1, format!("bad size `{t}`")))
            })
            .collect::<Result<_, _>>()?;
        let [w, h] = dims[..] else {
            return Err(DomainError::parse(ln + 1, "expected `w h`"));
        };
        let mut blocked = Vec::with_capacity(w * h);
        let mut agent = None;
        let mut dirts = Vec::new();
        let mut y = 0;
        for (ln, line) in lines {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            if y >= h {
                return Err(DomainError::parse(ln + 1, "too many rows"));
            }
            if line.chars().count() != w {
                return Err(DomainError::parse(
                    ln + 1,
                    format!("row width differs from {w}"),
                ));
            }
            for (x, ch) in line.chars().enumerate() {
                match ch {
                    '#' => blocked.push(true),
                    '.' => blocked.push(false),
                    '@' => {
                        if agent.replace((x, y)).is_some() {
                            return Err(DomainError::parse(ln + 1, "second agent"));
                        }
                        blocked.push(false);
                    }
                    '*' => {
                        dirts.push((x, y));
                        blocked.push(false);
                    }
                    _ => return Err(DomainError::parse(ln + 1, format!("bad cell `{ch}`"))),
                }
            }
            y += 1;
        }
        if y != h {
            return Err(DomainError::parse(
                text.lines().count(),
                format!("expected {h} rows, found {y}"),
            ));
        }
        let agent = agent.ok_or_else(|| DomainError::Invalid("no agent".into()))?;
        VacuumInstance::new(w, h, blocked, agent, dirts)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.width, self.height);
        for y in 0..self.height {
            for x in 0..self.width {
                let ch = if (x, y) == self.agent {
                    '@'
                } else if self.dirts.contains(&(x, y)) {
                    '*'
                } else if self.blocked[y * self.width + x] {
                    '#'
                } else {
                    '.'
                };
                s.push(ch);
            }
            writeln!(s).unwrap();
        }
        s
    }

    /// Random layout: each cell blocked with probability `density`; agent
    /// and dirts on distinct free cells reachable from the agent. The agent
    /// cell never holds dirt.
    pub fn random<R: Rng>(
        rng: &mut R,
        width: usize,
        height: usize,
        dirts: usize,
        density: f64,
    ) -> Result<Self, DomainError> {
        if dirts > 64 || dirts + 1 > width * height {
            return Err(DomainError::Invalid(format!(
                "{dirts} dirts on a {width}x{height} grid"
            )));
        }
        for _ in 0..1000 {
            let blocked: Vec<bool> = (0..width * height).map(|_| rng.gen_bool(density)).collect();
            let free: Vec<usize> = (0..width * height).filter(|&c| !blocked[c]).collect();
            if free.is_empty() {
                continue;
            }
            let a = free[rng.gen_range(0..free.len())];
            let probe = VacuumInstance {
                width,
                height,
                blocked: blocked.clone(),
                agent: (a % width, a / width),
                dirts: Vec::new(),
            };
            let reach = probe.reachable();
            let cells: Vec<usize> = free.into_iter().filter(|&c| reach[c] && c != a).collect();
            if cells.len() < dirts {
                continue;
            }
            let picks = rand::seq::index::sample(rng, cells.len(), dirts);
            let mut chosen: Vec<usize> = picks.iter().map(|i| cells[i]).collect();
            chosen.sort_unstable();
            return VacuumInstance::new(
                width,
                height,
                blocked,
                probe.agent,
                chosen.into_iter().map(|c| (c % width, c / width)).collect(),
            );
        }
        Err(DomainError::Invalid(format!(
            "density {density} leaves no room for {dirts} dirts"
        )))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VacuumState {
    pub cell: u32,
    /// Bit `i` set while dirt `i` remains.
    pub dirt: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VacuumAction {
    Suck,
    Up,
    Down,
    Left,
    Right,
}

const MST_TABLE_MAX_DIRTS: usize = 16;

#[derive(Clone, Debug)]
pub struct VacuumDomain {
    width: usize,
    height: usize,
    blocked: Vec<bool>,
    dirt_cells: Vec<(i64, i64)>,
    start: VacuumState,
    cost: VacuumCost,
    /// MST weight per dirt mask, when there are few enough dirts to
    /// tabulate.
    mst_table: Vec<u32>,
}

impl VacuumDomain {
    pub fn new(inst: &VacuumInstance, cost: VacuumCost) -> Result<Self, DomainError> {
        if cost == VacuumCost::HeavyLiteral && !inst.dirts.is_empty() {
            return Err(DomainError::ZeroCostEdges("heavy-literal".into()));
        }
        let n = inst.dirts.len();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let dirt_cells: Vec<(i64, i64)> = inst
            .dirts
            .iter()
            .map(|&(x, y)| (x as i64, y as i64))
            .collect();
        let mst_table = if n <= MST_TABLE_MAX_DIRTS {
            (0..=all)
                .map(|m| Self::mst(&dirt_cells, m) as u32)
                .collect()
        } else {
            Vec::new()
        };
        Ok(VacuumDomain {
            width: inst.width,
            height: inst.height,
            blocked: inst.blocked.clone(),
            dirt_cells,
            start: VacuumState {
                cell: (inst.agent.1 * inst.width + inst.agent.0) as u32,
                dirt: all,
            },
            cost,
            mst_table,
        })
    }

    pub fn cost_model(&self) -> VacuumCost {
        self.cost
    }

    fn cleaned(&self, s: &VacuumState) -> u32 {
        self.dirt_cells.len() as u32 - s.dirt.count_ones()
    }

    fn move_cost(&self, s: &VacuumState) -> Cost {
        let cleaned = f64::from(self.cleaned(s));
        match self.cost {
            VacuumCost::Unit => 1.0,
            VacuumCost::Heavy => 1.0 + cleaned,
            VacuumCost::HeavyLiteral => cleaned,
        }
    }

    fn dirt_at(&self, s: &VacuumState) -> Option<usize> {
        let (x, y) = (
            (s.cell as usize % self.width) as i64,
            (s.cell as usize / self.width) as i64,
        );
        (0..self.dirt_cells.len()).find(|&i| s.dirt >> i & 1 == 1 && self.dirt_cells[i] == (x, y))
    }

    fn step(&self, s: &VacuumState, a: VacuumAction) -> Option<(VacuumState, Cost)> {
        let c = s.cell as usize;
        let (x, y) = (c % self.width, c / self.width);
        let to = match a {
            VacuumAction::Suck => {
                let i = self.dirt_at(s)?;
                return Some((
                    VacuumState {
                        cell: s.cell,
                        dirt: s.dirt & !(1 << i),
                    },
                    1.0,
                ));
            }
            VacuumAction::Up if y > 0 => c - self.width,
            VacuumAction::Down if y + 1 < self.height => c + self.width,
            VacuumAction::Left if x > 0 => c - 1,
            VacuumAction::Right if x + 1 < self.width => c + 1,
            _ => return None,
        };
        if self.blocked[to] {
            return None;
        }
        Some((
            VacuumState {
                cell: to as u32,
                dirt: s.dirt,
            },
            self.move_cost(s),
        ))
    }

    /// MST weight over the dirts in `mask`, Manhattan distance, by Prim's
    /// algorithm on the complete graph.
    fn mst(dirt_cells: &[(i64, i64)], mask: u64) -> i64 {
        let mut pts = [(0i64, 0i64); 64];
        let mut n = 0;
        for (i, &p) in dirt_cells.iter().enumerate() {
            if mask >> i & 1 == 1 {
                pts[n] = p;
                n += 1;
            }
        }
        if n < 2 {
            return 0;
        }
        let md = |a: (i64, i64), b: (i64, i64)| (a.0 - b.0).abs() + (a.1 - b.1).abs();
        let mut dist = [i64::MAX; 64];
        let mut in_tree = [false; 64];
        in_tree[0] = true;
        for j in 1..n {
            dist[j] = md(pts[j], pts[0]);
        }
        let mut total = 0;
        for _ in 1..n {
            let k = (1..n)
                .filter(|&k| !in_tree[k])
                .min_by_key(|&k| dist[k])
                .unwrap();
            in_tree[k] = true;
            total += dist[k];
            for j in 1..n {
                if !in_tree[j] {
                    dist[j] = dist[j].min(md(pts[j], pts[k]));
                }
            }
        }
        total
    }

    /// MST weight over remaining dirts plus the agent's distance to the
    /// nearest one, all in Manhattan distance.
    fn distance_terms(&self, s: &VacuumState) -> f64 {
        if s.dirt == 0 {
            return 0.0;
        }
        let ax = (s.cell as usize % self.width) as i64;
        let ay = (s.cell as usize / self.width) as i64;
        let nearest = (0..self.dirt_cells.len())
            .filter(|&i| s.dirt >> i & 1 == 1)
            .map(|i| (self.dirt_cells[i].0 - ax).abs() + (self.dirt_cells[i].1 - ay).abs())
            .min()
            .unwrap();
        let tree = match self.mst_table.get(s.dirt as usize) {
            Some(&t) => i64::from(t),
            None => Self::mst(&self.dirt_cells, s.dirt),
        };
        (tree + nearest) as f64
    }
}

impl SearchDomain for VacuumDomain {
    type State = VacuumState;
    type Action = VacuumAction;

    fn initial_state(&self) -> VacuumState {
        self.start
    }

    fn successors(&self, s: &VacuumState, out: &mut Vec<Successor<VacuumState, VacuumAction>>) {
        use VacuumAction::*;
        for a in [Suck, Up, Down, Left, Right] {
            if let Some((state, cost)) = self.step(s, a) {
                out.push(Successor {
                    state,
                    action: a,
                    cost,
                });
            }
        }
    }

    fn apply(&self, s: &VacuumState, a: &VacuumAction) -> Option<(VacuumState, Cost)> {
        self.step(s, *a)
    }

    fn is_goal(&self, s: &VacuumState) -> bool {
        s.dirt == 0
    }

    fn h(&self, s: &VacuumState) -> Cost {
        let remaining = f64::from(s.dirt.count_ones());
        let scale = match self.cost {
            VacuumCost::Unit => 1.0,
            VacuumCost::Heavy => 1.0 + f64::from(self.cleaned(s)),
            VacuumCost::HeavyLiteral => f64::from(self.cleaned(s)),
        };
        remaining + scale * self.distance_terms(s)
    }

    fn d(&self, s: &VacuumState) -> f64 {
        f64::from(s.dirt.count_ones()) + self.distance_terms(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn example_heuristic_values() {
        // Dirts at (0,0) and (0,2), agent between them.
        let inst = VacuumInstance::parse("1 3\n*\n@\n*\n").unwrap();
        let dom = VacuumDomain::new(&inst, VacuumCost::Unit).unwrap();
        assert_eq!(dom.h(&dom.initial_state()), 5.0);
        let inst = VacuumInstance::new(2, 1, vec![false; 2], (1, 0), vec![(1, 0)]).unwrap();
        let dom = VacuumDomain::new(&inst, VacuumCost::Heavy).unwrap();
        let s = dom.initial_state();
        assert_eq!(dom.h(&s), 1.0);
        let (t, c) = dom.apply(&s, &VacuumAction::Suck).unwrap();
        assert_eq!(c, 1.0);
        assert!(dom.is_goal(&t));
        assert_eq!(dom.h(&t), 0.0);
    }

    #[test]
    fn heavy_moves_cost_more_after_pickups() {
        let inst = VacuumInstance::parse("3 1\n@**\n").unwrap();
        let dom = VacuumDomain::new(&inst, VacuumCost::Heavy).unwrap();
        let s = dom.initial_state();
        let (s, c) = dom.apply(&s, &VacuumAction::Right).unwrap();
        assert_eq!(c, 1.0);
        let (s, _) = dom.apply(&s, &VacuumAction::Suck).unwrap();
        let (_, c) = dom.apply(&s, &VacuumAction::Right).unwrap();
        assert_eq!(c, 2.0);
        // remaining 1 + (MST 0 + nearest 1) * 2
        assert_eq!(dom.h(&s), 3.0);
    }

    #[test]
    fn literal_heavy_is_refused() {
        let inst = VacuumInstance::parse("2 1\n@*\n").unwrap();
        assert_eq!(
            VacuumDomain::new(&inst, VacuumCost::HeavyLiteral).unwrap_err(),
            DomainError::ZeroCostEdges("heavy-literal".into())
        );
    }

    #[test]
    fn parse_checks_layout() {
        assert!(matches!(
            VacuumInstance::parse("2 1\n@x\n"),
            Err(DomainError::Parse { line: 2, .. })
        ));
        assert!(VacuumInstance::parse("3 1\n@#*\n").is_err());
        assert!(VacuumInstance::parse("2 2\n@*\n").is_err());
        let inst = VacuumInstance::parse("3 2\n@#*\n...\n").unwrap();
        assert_eq!(VacuumInstance::parse(&inst.to_text()).unwrap(), inst);
    }

    proptest! {
        #[test]
        fn moves_invert_and_suck_only_on_dirt(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = VacuumInstance::random(&mut rng, 6, 5, 3, 0.2).unwrap();
            let dom = VacuumDomain::new(&inst, VacuumCost::Heavy).unwrap();
            let mut s = dom.initial_state();
            let mut out = Vec::new();
            for _ in 0..40 {
                out.clear();
                dom.successors(&s, &mut out);
                for x in &out {
                    let back = match x.action {
                        VacuumAction::Suck => {
                            prop_assert_eq!(x.state.dirt.count_ones() + 1, s.dirt.count_ones());
                            continue;
                        }
                        VacuumAction::Up => VacuumAction::Down,
                        VacuumAction::Down => VacuumAction::Up,
                        VacuumAction::Left => VacuumAction::Right,
                        VacuumAction::Right => VacuumAction::Left,
                    };
                    prop_assert_eq!(dom.apply(&x.state, &back).unwrap().0, s);
                }
                s = out[rng.gen_range(0..out.len())].state;
            }
        }
    }
}
