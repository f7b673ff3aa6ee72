//! Grid pathfinding on occupancy maps: 4-way unit, 4-way life cost, and
//! 8-way octile movement.

use std::collections::VecDeque;
use std::f64::consts::SQRT_2;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::DomainError;
use crate::search::{Cost, SearchDomain, Successor};

/// Cost model; it also fixes the movement: `unit` and `life` are 4-way,
/// `octile` is 8-way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridCost {
    Unit,
    /// Leaving a cell in row `y` (0-based from the top) costs `y + 1`.
    Life,
    Octile,
}

impl FromStr for GridCost {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unit" => Ok(GridCost::Unit),
            "life" => Ok(GridCost::Life),
            "octile" => Ok(GridCost::Octile),
            _ => Err(DomainError::Unsupported(format!("grid cost model `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridMap {
    pub width: usize,
    pub height: usize,
    pub blocked: Vec<bool>,
}

impl GridMap {
    pub fn open(width: usize, height: usize) -> Self {
        GridMap {
            width,
            height,
            blocked: vec![false; width * height],
        }
    }

    pub fn is_free(&self, x: usize, y: usize) -> bool {
        x < self.width && y < self.height && !self.blocked[y * self.width + x]
    }

    pub fn set_blocked(&mut self, x: usize, y: usize, b: bool) {
        self.blocked[y * self.width + x] = b;
    }

    pub fn blocked_fraction(&self) -> f64 {
        self.blocked.iter().filter(|&&b| b).count() as f64 / self.blocked.len() as f64
    }

    /// Parses a movingai `.map` file. `.`, `G` and `S` are passable; `@`,
    /// `O`, `T` and `W` are not.
    pub fn parse_movingai(text: &str) -> Result<Self, DomainError> {
        let mut lines = text.lines().enumerate();
        let mut height = None;
        let mut width = None;
        for (ln, line) in lines.by_ref() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[..] {
                ["type", _] => {}
                ["height", v] => height = v.parse::<usize>().ok(),
                ["width", v] => width = v.parse::<usize>().ok(),
                ["map"] => break,
                [] => {}
                _ => {
                    return Err(DomainError::parse(
                        ln + 1,
                        format!("unexpected header line `{line}`"),
                    ))
                }
            }
        }
        let (Some(height), Some(width)) = (height, width) else {
            return Err(DomainError::parse(1, "missing height or width"));
        };
        let mut blocked = Vec::with_capacity(width * height);
        let mut rows = 0;
        for (ln, line) in lines {
            let line = line.trim_end_matches('\r');
            if line.is_empty() && rows == height {
                continue;
            }
            if rows == height {
                return Err(DomainError::parse(ln + 1, "too many rows"));
            }
            if line.len() != width {
                return Err(DomainError::parse(
                    ln + 1,
                    format!("row width differs from {width}"),
                ));
            }
            for ch in line.chars() {
                blocked.push(match ch {
                    '.' | 'G' | 'S' => false,
                    '@' | 'O' | 'T' | 'W' => true,
                    _ => return Err(DomainError::parse(ln + 1, format!("bad cell `{ch}`"))),
                });
            }
            rows += 1;
        }
        if rows != height {
            return Err(DomainError::parse(
                text.lines().count(),
                format!("expected {height} rows, found {rows}"),
            ));
        }
        Ok(GridMap {
            width,
            height,
            blocked,
        })
    }

    pub fn to_movingai(&self) -> String {
        let mut s = format!(
            "type octile\nheight {}\nwidth {}\nmap\n",
            self.height, self.width
        );
        for row in self.blocked.chunks(self.width) {
            s.extend(row.iter().map(|&b| if b { '@' } else { '.' }));
            s.push('\n');
        }
        s
    }

    /// Cells 4-connected to `from`.
    fn component(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.blocked.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(c) = queue.pop_front() {
            let (x, y) = (c % self.width, c / self.width);
            let nbrs = [
                (y > 0).then(|| c - self.width),
                (y + 1 < self.height).then(|| c + self.width),
                (x > 0).then(|| c - 1),
                (x + 1 < self.width).then(|| c + 1),
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
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridInstance {
    pub map: GridMap,
    pub start: (usize, usize),
    pub goal: (usize, usize),
}

impl GridInstance {
    pub fn new(
        map: GridMap,
        start: (usize, usize),
        goal: (usize, usize),
    ) -> Result<Self, DomainError> {
        if map.width * map.height > u32::MAX as usize {
            return Err(DomainError::Invalid("map too large".into()));
        }
        if !map.is_free(start.0, start.1) || !map.is_free(goal.0, goal.1) {
            return Err(DomainError::Invalid(
                "start or goal is blocked or off the map".into(),
            ));
        }
        Ok(GridInstance { map, start, goal })
    }

    /// Parses a scenario line `sx sy gx gy`.
    pub fn parse_scenario(text: &str) -> Result<((usize, usize), (usize, usize)), DomainError> {
        let (ln, line) = text
            .lines()
            .enumerate()
            .find(|(_, l)| !l.trim().is_empty())
            .ok_or_else(|| DomainError::parse(1, "empty scenario"))?;
        let v: Vec<usize> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| DomainError::parse(ln + 1, format!("bad coordinate `{t}`")))
            })
            .collect::<Result<_, _>>()?;
        let [sx, sy, gx, gy] = v[..] else {
            return Err(DomainError::parse(ln + 1, "expected `sx sy gx gy`"));
        };
        Ok(((sx, sy), (gx, gy)))
    }

    pub fn from_texts(map: &str, scenario: &str) -> Result<Self, DomainError> {
        let (start, goal) = GridInstance::parse_scenario(scenario)?;
        GridInstance::new(GridMap::parse_movingai(map)?, start, goal)
    }

    pub fn scenario_text(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "{} {} {} {}",
            self.start.0, self.start.1, self.goal.0, self.goal.1
        )
        .unwrap();
        s
    }

    /// Random obstacles at `density`, with start and goal drawn from one
    /// 4-connected component.
    pub fn random<R: Rng>(
        rng: &mut R,
        width: usize,
        height: usize,
        density: f64,
    ) -> Result<Self, DomainError> {
        if width * height < 2 || !(0.0..1.0).contains(&density) {
            return Err(DomainError::Invalid(format!(
                "{width}x{height} grid at density {density}"
            )));
        }
        for _ in 0..1000 {
            let map = GridMap {
                width,
                height,
                blocked: (0..width * height).map(|_| rng.gen_bool(density)).collect(),
            };
            let free: Vec<usize> = (0..width * height).filter(|&c| !map.blocked[c]).collect();
            if free.len() < 2 {
                continue;
            }
            let s = free[rng.gen_range(0..free.len())];
            let comp = map.component(s);
            let reach: Vec<usize> = free.into_iter().filter(|&c| comp[c] && c != s).collect();
            if reach.is_empty() {
                continue;
            }
            let g = reach[rng.gen_range(0..reach.len())];
            return GridInstance::new(map, (s % width, s / width), (g % width, g / width));
        }
        Err(DomainError::Invalid(format!(
            "could not place start and goal at density {density}"
        )))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dir {
    N,
    S,
    W,
    E,
    NW,
    NE,
    SW,
    SE,
}

impl Dir {
    pub const ALL: [Dir; 8] = [
        Dir::N,
        Dir::S,
        Dir::W,
        Dir::E,
        Dir::NW,
        Dir::NE,
        Dir::SW,
        Dir::SE,
    ];

    pub fn delta(self) -> (i64, i64) {
        match self {
            Dir::N => (0, -1),
            Dir::S => (0, 1),
            Dir::W => (-1, 0),
            Dir::E => (1, 0),
            Dir::NW => (-1, -1),
            Dir::NE => (1, -1),
            Dir::SW => (-1, 1),
            Dir::SE => (1, 1),
        }
    }

    pub fn inverse(self) -> Dir {
        match self {
            Dir::N => Dir::S,
            Dir::S => Dir::N,
            Dir::W => Dir::E,
            Dir::E => Dir::W,
            Dir::NW => Dir::SE,
            Dir::NE => Dir::SW,
            Dir::SW => Dir::NE,
            Dir::SE => Dir::NW,
        }
    }
}

fn tri(n: u64) -> u64 {
    n * (n + 1) / 2
}

/// Cheapest obstacle-free 4-way path under life cost. Such a path does
/// its horizontal steps on its highest row `r`; raising the path from row
/// `r` to `r - 1` adds `2r + 1` vertical cost and saves `dx`, so the total is
/// concave in `r` and the optimum is `r = 0` or `r = min(y1, y2)`.
pub fn life_distance((x1, y1): (usize, usize), (x2, y2): (usize, usize)) -> Cost {
    let dx = x1.abs_diff(x2) as u64;
    let (y1, y2) = (y1 as u64, y2 as u64);
    let via = |r: u64| {
        let up = tri(y1 + 1) - tri(r + 1);
        let down = tri(y2) - tri(r);
        up + down + dx * (r + 1)
    };
    via(0).min(via(y1.min(y2))) as Cost
}

pub fn octile_distance(dx: usize, dy: usize) -> Cost {
    let (lo, hi) = (dx.min(dy) as f64, dx.max(dy) as f64);
    hi + (SQRT_2 - 1.0) * lo
}

#[derive(Clone, Debug)]
pub struct GridDomain {
    map: GridMap,
    start: u32,
    goal: u32,
    cost: GridCost,
}

impl GridDomain {
    pub fn new(inst: &GridInstance, cost: GridCost) -> Self {
        let w = inst.map.width;
        GridDomain {
            start: (inst.start.1 * w + inst.start.0) as u32,
            goal: (inst.goal.1 * w + inst.goal.0) as u32,
            map: inst.map.clone(),
            cost,
        }
    }

    pub fn map(&self) -> &GridMap {
        &self.map
    }

    pub fn xy(&self, cell: u32) -> (usize, usize) {
        (
            cell as usize % self.map.width,
            cell as usize / self.map.width,
        )
    }

    fn step(&self, cell: u32, dir: Dir) -> Option<(u32, Cost)> {
        let diagonal = matches!(dir, Dir::NW | Dir::NE | Dir::SW | Dir::SE);
        if diagonal && self.cost != GridCost::Octile {
            return None;
        }
        let (x, y) = self.xy(cell);
        let (dx, dy) = dir.delta();
        let nx = x as i64 + dx;
        let ny = y as i64 + dy;
        if nx < 0 || ny < 0 || !self.map.is_free(nx as usize, ny as usize) {
            return None;
        }
        // No squeezing between two blocked orthogonal neighbours.
        if diagonal && !self.map.is_free(nx as usize, y) && !self.map.is_free(x, ny as usize) {
            return None;
        }
        let cost = match self.cost {
            GridCost::Unit => 1.0,
            GridCost::Life => (y + 1) as Cost,
            GridCost::Octile if diagonal => SQRT_2,
            GridCost::Octile => 1.0,
        };
        Some(((ny as usize * self.map.width + nx as usize) as u32, cost))
    }
}

impl SearchDomain for GridDomain {
    type State = u32;
    type Action = Dir;

    fn initial_state(&self) -> u32 {
        self.start
    }

    fn successors(&self, &cell: &u32, out: &mut Vec<Successor<u32, Dir>>) {
        let dirs = if self.cost == GridCost::Octile {
            &Dir::ALL[..]
        } else {
            &Dir::ALL[..4]
        };
        for &dir in dirs {
            if let Some((state, cost)) = self.step(cell, dir) {
                out.push(Successor {
                    state,
                    action: dir,
                    cost,
                });
            }
        }
    }

    fn apply(&self, &cell: &u32, dir: &Dir) -> Option<(u32, Cost)> {
        self.step(cell, *dir)
    }

    fn is_goal(&self, &cell: &u32) -> bool {
        cell == self.goal
    }

    fn h(&self, &cell: &u32) -> Cost {
        let (a, b) = (self.xy(cell), self.xy(self.goal));
        let (dx, dy) = (a.0.abs_diff(b.0), a.1.abs_diff(b.1));
        match self.cost {
            GridCost::Unit => (dx + dy) as Cost,
            GridCost::Life => life_distance(a, b),
            GridCost::Octile => octile_distance(dx, dy),
        }
    }

    fn d(&self, &cell: &u32) -> f64 {
        let (a, b) = (self.xy(cell), self.xy(self.goal));
        let (dx, dy) = (a.0.abs_diff(b.0), a.1.abs_diff(b.1));
        match self.cost {
            GridCost::Unit | GridCost::Life => (dx + dy) as f64,
            GridCost::Octile => dx.max(dy) as f64,
        }
    }
}
