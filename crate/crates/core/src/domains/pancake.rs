//! Pancake sorting with the gap heuristic.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::DomainError;
use crate::search::{Cost, SearchDomain, Successor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PancakeCost {
    Unit,
    /// A flip costs the ID of the pancake directly above the spatula.
    Heavy,
}

impl FromStr for PancakeCost {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unit" => Ok(PancakeCost::Unit),
            "heavy" => Ok(PancakeCost::Heavy),
            _ => Err(DomainError::Unsupported(format!(
                "pancake cost model `{s}`"
            ))),
        }
    }
}

/// Stack from top to bottom; IDs are `1..=N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PancakeInstance {
    pub stack: Vec<u8>,
}

impl PancakeInstance {
    pub fn new(stack: Vec<u8>) -> Result<Self, DomainError> {
        let n = stack.len();
        if !(2..=254).contains(&n) {
            return Err(DomainError::Invalid(format!("stack of {n} pancakes")));
        }
        let mut seen = vec![false; n + 1];
        for &p in &stack {
            let p = p as usize;
            if p == 0 || p > n || seen[p] {
                return Err(DomainError::Invalid(
                    "stack is not a permutation of 1..=N".into(),
                ));
            }
            seen[p] = true;
        }
        Ok(PancakeInstance { stack })
    }

    pub fn parse(text: &str) -> Result<Self, DomainError> {
        let mut stack = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            for t in line.split_whitespace() {
                stack.push(
                    t.parse()
                        .map_err(|_| DomainError::parse(ln + 1, format!("bad pancake `{t}`")))?,
                );
            }
        }
        PancakeInstance::new(stack)
    }

    pub fn to_text(&self) -> String {
        let body: Vec<String> = self.stack.iter().map(u8::to_string).collect();
        body.join(" ") + "\n"
    }

    pub fn random<R: Rng>(rng: &mut R, n: usize) -> Self {
        let mut stack: Vec<u8> = (1..=n as u8).collect();
        stack.shuffle(rng);
        PancakeInstance { stack }
    }
}

#[derive(Clone, Debug)]
pub struct PancakeDomain {
    start: Box<[u8]>,
    cost: PancakeCost,
}

impl PancakeDomain {
    pub fn new(inst: &PancakeInstance, cost: PancakeCost) -> Self {
        PancakeDomain {
            start: inst.stack.clone().into_boxed_slice(),
            cost,
        }
    }

    pub fn cost_model(&self) -> PancakeCost {
        self.cost
    }

    /// Cost of flipping the top `k` pancakes of `s`.
    pub fn flip_cost(&self, s: &[u8], k: usize) -> Cost {
        match self.cost {
            PancakeCost::Unit => 1.0,
            PancakeCost::Heavy => f64::from(s[k - 1]),
        }
    }

    /// Adjacent pairs (including the plate below the bottom pancake) whose
    /// IDs differ by more than one.
    fn gaps(s: &[u8]) -> impl Iterator<Item = (u8, u8)> + '_ {
        let plate = s.len() as u8 + 1;
        (0..s.len())
            .map(move |i| (s[i], if i + 1 < s.len() { s[i + 1] } else { plate }))
            .filter(|&(a, b)| a.abs_diff(b) > 1)
    }
}

impl SearchDomain for PancakeDomain {
    type State = Box<[u8]>;
    /// Number of pancakes flipped.
    type Action = u8;

    fn initial_state(&self) -> Box<[u8]> {
        self.start.clone()
    }

    fn successors(&self, s: &Box<[u8]>, out: &mut Vec<Successor<Box<[u8]>, u8>>) {
        for k in 2..=s.len() {
            let mut next = s.clone();
            next[..k].reverse();
            out.push(Successor {
                state: next,
                action: k as u8,
                cost: self.flip_cost(s, k),
            });
        }
    }

    fn apply(&self, s: &Box<[u8]>, &k: &u8) -> Option<(Box<[u8]>, Cost)> {
        let k = k as usize;
        if !(2..=s.len()).contains(&k) {
            return None;
        }
        let mut next = s.clone();
        next[..k].reverse();
        Some((next, self.flip_cost(s, k)))
    }

    fn is_goal(&self, s: &Box<[u8]>) -> bool {
        s.iter().enumerate().all(|(i, &p)| p as usize == i + 1)
    }

    fn h(&self, s: &Box<[u8]>) -> Cost {
        match self.cost {
            PancakeCost::Unit => Self::gaps(s).count() as Cost,
            PancakeCost::Heavy => Self::gaps(s).map(|(a, b)| f64::from(a.min(b))).sum(),
        }
    }

    fn d(&self, s: &Box<[u8]>) -> f64 {
        Self::gaps(s).count() as f64
    }

    fn state_heap_bytes(&self) -> usize {
        self.start.len()
    }
}
