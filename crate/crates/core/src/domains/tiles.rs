//! Sliding-tile puzzles up to 5x5 with weighted Manhattan distance.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::DomainError;
use crate::search::{Cost, SearchDomain, Successor};

const BITS: u32 = 5;
const MASK: u128 = (1 << BITS) - 1;
const MAX_CELLS: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TileCost {
    Unit,
    Heavy,
    Sqrt,
    Inverse,
    Reverse,
    ReverseInverse,
}

impl TileCost {
    pub const ALL: [TileCost; 6] = [
        TileCost::Unit,
        TileCost::Heavy,
        TileCost::Sqrt,
        TileCost::Inverse,
        TileCost::Reverse,
        TileCost::ReverseInverse,
    ];

    /// Cost of moving tile `t` on a board with `cells` positions.
    pub fn of(self, t: u32, cells: u32) -> Cost {
        debug_assert!(t >= 1 && t < cells);
        let t = f64::from(t);
        let n = f64::from(cells);
        match self {
            TileCost::Unit => 1.0,
            TileCost::Heavy => t,
            TileCost::Sqrt => t.sqrt(),
            TileCost::Inverse => 1.0 / t,
            TileCost::Reverse => n - t,
            TileCost::ReverseInverse => 1.0 / (n - t),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TileCost::Unit => "unit",
            TileCost::Heavy => "heavy",
            TileCost::Sqrt => "sqrt",
            TileCost::Inverse => "inverse",
            TileCost::Reverse => "reverse",
            TileCost::ReverseInverse => "reverse-inverse",
        }
    }
}

impl FromStr for TileCost {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TileCost::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| DomainError::Unsupported(format!("tile cost model `{s}`")))
    }
}

/// Board layout: `tiles[pos]` is the tile at row-major position `pos`, with
/// `0` for the blank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilesInstance {
    pub width: usize,
    pub height: usize,
    pub tiles: Vec<u8>,
}

impl TilesInstance {
    pub fn new(width: usize, height: usize, tiles: Vec<u8>) -> Result<Self, DomainError> {
        let n = width * height;
        if width < 2 || height < 2 || n > MAX_CELLS {
            return Err(DomainError::Invalid(format!(
                "unsupported board size {width}x{height}"
            )));
        }
        if tiles.len() != n {
            return Err(DomainError::Invalid(format!(
                "expected {n} tiles, found {}",
                tiles.len()
            )));
        }
        let mut seen = vec![false; n];
        for &t in &tiles {
            let t = t as usize;
            if t >= n || seen[t] {
                return Err(DomainError::Invalid("tiles are not a permutation".into()));
            }
            seen[t] = true;
        }
        Ok(TilesInstance {
            width,
            height,
            tiles,
        })
    }

    pub fn goal(width: usize, height: usize) -> Self {
        TilesInstance::new(width, height, (0..(width * height) as u8).collect())
            .expect("valid size")
    }

    /// Reachability of the goal (blank in the top-left corner, tiles in
    /// order). A single move is one transposition and shifts the blank by
    /// one cell, so the permutation parity must match the parity of the
    /// blank's Manhattan distance from its home.
    pub fn is_solvable(&self) -> bool {
        let n = self.tiles.len();
        let mut visited = vec![false; n];
        let mut transpositions = 0;
        for start in 0..n {
            let mut len = 0;
            let mut p = start;
            while !visited[p] {
                visited[p] = true;
                p = self.tiles[p] as usize;
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        let blank = self
            .tiles
            .iter()
            .position(|&t| t == 0)
            .expect("blank present");
        let blank_dist = blank % self.width + blank / self.width;
        transpositions % 2 == blank_dist % 2
    }

    /// Parses `"w h"` followed by the row-major permutation.
    pub fn parse(text: &str) -> Result<Self, DomainError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (ln, header) = lines
            .next()
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
        let mut tiles = Vec::new();
        for (ln, line) in lines {
            for t in line.split_whitespace() {
                let v: u8 = t
                    .parse()
                    .map_err(|_| DomainError::parse(ln + 1, format!("bad tile `{t}`")))?;
                tiles.push(v);
            }
        }
        TilesInstance::new(w, h, tiles)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.width, self.height);
        let body: Vec<String> = self.tiles.iter().map(u8::to_string).collect();
        writeln!(s, "{}", body.join(" ")).unwrap();
        s
    }

    /// Uniformly random solvable board.
    pub fn random<R: Rng>(rng: &mut R, width: usize, height: usize) -> Self {
        let mut inst = TilesInstance::goal(width, height);
        loop {
            inst.tiles.shuffle(rng);
            if inst.is_solvable() {
                return inst;
            }
        }
    }
}

/// Packed board, five bits per cell, plus the blank position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TileState {
    cells: u128,
    blank: u8,
}

impl TileState {
    pub fn tile_at(&self, pos: usize) -> u8 {
        ((self.cells >> (BITS as usize * pos)) & MASK) as u8
    }

    pub fn blank(&self) -> usize {
        self.blank as usize
    }

    fn pack(tiles: &[u8]) -> Self {
        let mut cells = 0u128;
        let mut blank = 0;
        for (pos, &t) in tiles.iter().enumerate() {
            cells |= u128::from(t) << (BITS as usize * pos);
            if t == 0 {
                blank = pos as u8;
            }
        }
        TileState { cells, blank }
    }

    pub fn tiles(&self, n: usize) -> Vec<u8> {
        (0..n).map(|p| self.tile_at(p)).collect()
    }
}

/// Direction the blank moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slide {
    Up,
    Left,
    Right,
    Down,
}

impl Slide {
    pub fn inverse(self) -> Slide {
        match self {
            Slide::Up => Slide::Down,
            Slide::Down => Slide::Up,
            Slide::Left => Slide::Right,
            Slide::Right => Slide::Left,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TilesDomain {
    width: usize,
    cells: usize,
    cost: TileCost,
    start: TileState,
    goal: TileState,
    tile_cost: Vec<Cost>,
    /// `md[t * cells + pos]`: Manhattan distance of tile `t` at `pos` from home.
    md: Vec<u8>,
}

impl TilesDomain {
    pub fn new(inst: &TilesInstance, cost: TileCost) -> Result<Self, DomainError> {
        if !inst.is_solvable() {
            return Err(DomainError::Unsolvable);
        }
        let (w, n) = (inst.width, inst.tiles.len());
        let mut tile_cost = vec![0.0; n];
        for t in 1..n {
            tile_cost[t] = cost.of(t as u32, n as u32);
        }
        let mut md = vec![0u8; n * n];
        for t in 1..n {
            for pos in 0..n {
                let dx = (t % w).abs_diff(pos % w);
                let dy = (t / w).abs_diff(pos / w);
                md[t * n + pos] = (dx + dy) as u8;
            }
        }
        Ok(TilesDomain {
            width: w,
            cells: n,
            cost,
            start: TileState::pack(&inst.tiles),
            goal: TileState::pack(&TilesInstance::goal(w, inst.height).tiles),
            tile_cost,
            md,
        })
    }

    pub fn cost_model(&self) -> TileCost {
        self.cost
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn tile_cost(&self, t: u8) -> Cost {
        self.tile_cost[t as usize]
    }

    pub fn state_of(&self, tiles: &[u8]) -> TileState {
        assert_eq!(tiles.len(), self.cells);
        TileState::pack(tiles)
    }

    fn target(&self, blank: usize, dir: Slide) -> Option<usize> {
        let (x, y) = (blank % self.width, blank / self.width);
        let height = self.cells / self.width;
        match dir {
            Slide::Up if y > 0 => Some(blank - self.width),
            Slide::Down if y + 1 < height => Some(blank + self.width),
            Slide::Left if x > 0 => Some(blank - 1),
            Slide::Right if x + 1 < self.width => Some(blank + 1),
            _ => None,
        }
    }

    fn slide(&self, s: &TileState, to: usize) -> (TileState, u8) {
        let t = s.tile_at(to);
        let from = s.blank();
        let moved = u128::from(t);
        let cells = (s.cells & !(MASK << (BITS as usize * to))) | (moved << (BITS as usize * from));
        (
            TileState {
                cells,
                blank: to as u8,
            },
            t,
        )
    }
}

impl SearchDomain for TilesDomain {
    type State = TileState;
    type Action = Slide;

    fn initial_state(&self) -> TileState {
        self.start
    }

    fn successors(&self, s: &TileState, out: &mut Vec<Successor<TileState, Slide>>) {
        for dir in [Slide::Up, Slide::Left, Slide::Right, Slide::Down] {
            if let Some(to) = self.target(s.blank(), dir) {
                let (state, t) = self.slide(s, to);
                out.push(Successor {
                    state,
                    action: dir,
                    cost: self.tile_cost[t as usize],
                });
            }
        }
    }

    fn apply(&self, s: &TileState, dir: &Slide) -> Option<(TileState, Cost)> {
        let to = self.target(s.blank(), *dir)?;
        let (state, t) = self.slide(s, to);
        Some((state, self.tile_cost[t as usize]))
    }

    fn is_goal(&self, s: &TileState) -> bool {
        *s == self.goal
    }

    fn h(&self, s: &TileState) -> Cost {
        let mut h = 0.0;
        let mut cells = s.cells;
        for pos in 0..self.cells {
            let t = (cells & MASK) as usize;
            cells >>= BITS;
            if t != 0 {
                h += self.tile_cost[t] * f64::from(self.md[t * self.cells + pos]);
            }
        }
        h
    }

    fn child_estimates(
        &self,
        parent: &TileState,
        parent_h: Cost,
        parent_d: f64,
        child: &TileState,
    ) -> (Cost, f64) {
        if *child == self.goal {
            return (0.0, 0.0);
        }
        // The tile now at the parent's blank came from the child's blank.
        let (from, to) = (child.blank(), parent.blank());
        let t = child.tile_at(to) as usize;
        let delta =
            i32::from(self.md[t * self.cells + to]) - i32::from(self.md[t * self.cells + from]);
        (
            parent_h + self.tile_cost[t] * f64::from(delta),
            parent_d + f64::from(delta),
        )
    }

    fn d(&self, s: &TileState) -> f64 {
        let mut d = 0u32;
        let mut cells = s.cells;
        for pos in 0..self.cells {
            let t = (cells & MASK) as usize;
            cells >>= BITS;
            if t != 0 {
                d += u32::from(self.md[t * self.cells + pos]);
            }
        }
        f64::from(d)
    }
}
