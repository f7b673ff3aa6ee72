//! Blocks world, in the one-step move variant and the deep variant where
//! picking up and putting down are separate actions.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::DomainError;
use crate::search::{Cost, SearchDomain, Successor};

/// Support code for a block standing on the table.
pub const TABLE: u8 = u8::MAX;
/// Support code for the block in the hand (deep variant only).
pub const HELD: u8 = u8::MAX - 1;
const MAX_BLOCKS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlocksVariant {
    Standard,
    Deep,
}

impl FromStr for BlocksVariant {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(BlocksVariant::Standard),
            "deep" => Ok(BlocksVariant::Deep),
            _ => Err(DomainError::Unsupported(format!("blocks variant `{s}`"))),
        }
    }
}

/// `initial[b]` / `goal[b]` give the support of block `b`: another block's
/// index or [`TABLE`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlocksInstance {
    pub names: Vec<String>,
    pub initial: Vec<u8>,
    pub goal: Vec<u8>,
}

fn check_config(on: &[u8], what: &str) -> Result<(), DomainError> {
    let n = on.len();
    let mut below = vec![false; n];
    for &s in on {
        if s == TABLE {
            continue;
        }
        let s = s as usize;
        if s >= n {
            return Err(DomainError::Invalid(format!("{what}: unknown support")));
        }
        if below[s] {
            return Err(DomainError::Invalid(format!(
                "{what}: two blocks on one block"
            )));
        }
        below[s] = true;
    }
    for start in 0..n {
        let mut b = start;
        for _ in 0..=n {
            if on[b] == TABLE {
                break;
            }
            b = on[b] as usize;
            if b == start {
                return Err(DomainError::Invalid(format!("{what}: blocks form a cycle")));
            }
        }
    }
    Ok(())
}

impl BlocksInstance {
    pub fn new(names: Vec<String>, initial: Vec<u8>, goal: Vec<u8>) -> Result<Self, DomainError> {
        let n = names.len();
        if n == 0 || n > MAX_BLOCKS || initial.len() != n || goal.len() != n {
            return Err(DomainError::Invalid(format!("{n} blocks")));
        }
        check_config(&initial, "initial")?;
        check_config(&goal, "goal")?;
        Ok(BlocksInstance {
            names,
            initial,
            goal,
        })
    }

    /// Parses `"X on Y"` / `"X on table"` lines for the initial state, a
    /// blank line, then the same for the goal.
    pub fn parse(text: &str) -> Result<Self, DomainError> {
        let mut sections: Vec<Vec<(usize, &str)>> = vec![Vec::new()];
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                if !sections.last().unwrap().is_empty() {
                    sections.push(Vec::new());
                }
            } else {
                sections.last_mut().unwrap().push((ln + 1, line));
            }
        }
        sections.retain(|s| !s.is_empty());
        if sections.len() != 2 {
            return Err(DomainError::parse(
                text.lines().count().max(1),
                "expected initial and goal sections",
            ));
        }
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, u8> = HashMap::new();
        let mut pairs = [Vec::new(), Vec::new()];
        for (k, section) in sections.iter().enumerate() {
            for &(ln, line) in section {
                let toks: Vec<&str> = line.split_whitespace().collect();
                let [block, "on", support] = toks[..] else {
                    return Err(DomainError::parse(ln, "expected `X on Y`"));
                };
                if k == 0 && !index.contains_key(block) {
                    if names.len() >= MAX_BLOCKS {
                        return Err(DomainError::parse(ln, "too many blocks"));
                    }
                    index.insert(block.to_string(), names.len() as u8);
                    names.push(block.to_string());
                }
                pairs[k].push((ln, block, support));
            }
        }
        let n = names.len();
        let mut configs = [vec![None; n], vec![None; n]];
        for k in 0..2 {
            for &(ln, block, support) in &pairs[k] {
                let b = *index
                    .get(block)
                    .ok_or_else(|| DomainError::parse(ln, format!("unknown block `{block}`")))?;
                let s = if support == "table" {
                    TABLE
                } else {
                    *index.get(support).ok_or_else(|| {
                        DomainError::parse(ln, format!("unknown block `{support}`"))
                    })?
                };
                if configs[k][b as usize].replace(s).is_some() {
                    return Err(DomainError::parse(
                        ln,
                        format!("block `{block}` placed twice"),
                    ));
                }
            }
        }
        let [initial, goal] = configs.map(|c| c.into_iter().collect::<Option<Vec<u8>>>());
        let (Some(initial), Some(goal)) = (initial, goal) else {
            return Err(DomainError::Invalid(
                "every block must be placed in both sections".into(),
            ));
        };
        BlocksInstance::new(names, initial, goal)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, config) in [&self.initial, &self.goal].into_iter().enumerate() {
            if k == 1 {
                s.push('\n');
            }
            for (b, &on) in config.iter().enumerate() {
                let support = if on == TABLE {
                    "table"
                } else {
                    &self.names[on as usize]
                };
                writeln!(s, "{} on {}", self.names[b], support).unwrap();
            }
        }
        s
    }

    /// Random initial and goal configurations: blocks are placed one at a
    /// time, in random order, on the table or on a uniformly chosen stack.
    pub fn random<R: Rng>(rng: &mut R, n: usize) -> Self {
        assert!((1..=MAX_BLOCKS).contains(&n));
        let names = (0..n).map(|i| format!("b{i}")).collect();
        let mut config = || {
            let mut order: Vec<u8> = (0..n as u8).collect();
            order.shuffle(rng);
            let mut on = vec![TABLE; n];
            let mut tops: Vec<u8> = Vec::new();
            for b in order {
                let k = rng.gen_range(0..=tops.len());
                if k == tops.len() {
                    tops.push(b);
                } else {
                    on[b as usize] = tops[k];
                    tops[k] = b;
                }
            }
            on
        };
        let initial = config();
        let goal = config();
        BlocksInstance {
            names,
            initial,
            goal,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockAction {
    /// Standard variant: move a clear block onto a support.
    Move {
        block: u8,
        onto: u8,
    },
    Pickup(u8),
    Putdown {
        block: u8,
        onto: u8,
    },
}

#[derive(Clone, Debug)]
pub struct BlocksDomain {
    variant: BlocksVariant,
    start: Box<[u8]>,
    goal: Box<[u8]>,
}

impl BlocksDomain {
    pub fn new(inst: &BlocksInstance, variant: BlocksVariant) -> Self {
        BlocksDomain {
            variant,
            start: inst.initial.clone().into_boxed_slice(),
            goal: inst.goal.clone().into_boxed_slice(),
        }
    }

    pub fn variant(&self) -> BlocksVariant {
        self.variant
    }

    fn clear_flags(on: &[u8]) -> Vec<bool> {
        let mut clear: Vec<bool> = on.iter().map(|&s| s != HELD).collect();
        for &s in on {
            if s != TABLE && s != HELD {
                clear[s as usize] = false;
            }
        }
        clear
    }

    /// Blocks not resting on a from-the-table-up prefix of a goal stack.
    pub fn out_of_place(&self, on: &[u8]) -> usize {
        // 0 unknown, 1 in place, 2 out of place
        let mut mark = vec![0u8; on.len()];
        let mut chain = Vec::new();
        for start in 0..on.len() {
            let mut b = start;
            while mark[b] == 0 {
                if on[b] != self.goal[b] {
                    mark[b] = 2;
                    break;
                }
                if on[b] == TABLE {
                    mark[b] = 1;
                    break;
                }
                chain.push(b);
                b = on[b] as usize;
            }
            let m = mark[b];
            for c in chain.drain(..) {
                mark[c] = m;
            }
        }
        mark.iter().filter(|&&m| m == 2).count()
    }

    fn held(on: &[u8]) -> Option<usize> {
        on.iter().position(|&s| s == HELD)
    }

    fn transition(&self, on: &[u8], a: BlockAction) -> Option<Box<[u8]>> {
        let n = on.len();
        let clear = Self::clear_flags(on);
        let mut next: Box<[u8]> = on.into();
        let valid_onto = |block: usize, onto: u8| {
            onto == TABLE || ((onto as usize) < n && onto as usize != block && clear[onto as usize])
        };
        match (self.variant, a) {
            (BlocksVariant::Standard, BlockAction::Move { block, onto }) => {
                let b = block as usize;
                if b >= n || !clear[b] || on[b] == onto || !valid_onto(b, onto) {
                    return None;
                }
                next[b] = onto;
            }
            (BlocksVariant::Deep, BlockAction::Pickup(block)) => {
                let b = block as usize;
                if b >= n || Self::held(on).is_some() || !clear[b] {
                    return None;
                }
                next[b] = HELD;
            }
            (BlocksVariant::Deep, BlockAction::Putdown { block, onto }) => {
                let b = block as usize;
                if Self::held(on) != Some(b) || !valid_onto(b, onto) {
                    return None;
                }
                next[b] = onto;
            }
            _ => return None,
        }
        Some(next)
    }
}

impl SearchDomain for BlocksDomain {
    type State = Box<[u8]>;
    type Action = BlockAction;

    fn initial_state(&self) -> Box<[u8]> {
        self.start.clone()
    }

    fn successors(&self, on: &Box<[u8]>, out: &mut Vec<Successor<Box<[u8]>, BlockAction>>) {
        let n = on.len();
        let clear = Self::clear_flags(on);
        let mut push = |state: Box<[u8]>, action| {
            out.push(Successor {
                state,
                action,
                cost: 1.0,
            })
        };
        match self.variant {
            BlocksVariant::Standard => {
                for b in (0..n).filter(|&b| clear[b]) {
                    let targets =
                        std::iter::once(TABLE).chain((0..n as u8).filter(|&y| clear[y as usize]));
                    for onto in targets {
                        if onto as usize == b || on[b] == onto {
                            continue;
                        }
                        let mut next = on.clone();
                        next[b] = onto;
                        push(
                            next,
                            BlockAction::Move {
                                block: b as u8,
                                onto,
                            },
                        );
                    }
                }
            }
            BlocksVariant::Deep => match Self::held(on) {
                Some(b) => {
                    let targets =
                        std::iter::once(TABLE).chain((0..n as u8).filter(|&y| clear[y as usize]));
                    for onto in targets {
                        let mut next = on.clone();
                        next[b] = onto;
                        push(
                            next,
                            BlockAction::Putdown {
                                block: b as u8,
                                onto,
                            },
                        );
                    }
                }
                None => {
                    for b in (0..n).filter(|&b| clear[b]) {
                        let mut next = on.clone();
                        next[b] = HELD;
                        push(next, BlockAction::Pickup(b as u8));
                    }
                }
            },
        }
    }

    fn apply(&self, on: &Box<[u8]>, a: &BlockAction) -> Option<(Box<[u8]>, Cost)> {
        self.transition(on, *a).map(|s| (s, 1.0))
    }

    fn is_goal(&self, on: &Box<[u8]>) -> bool {
        *on == self.goal
    }

    /// Out-of-place count. Deep counts two actions per misplaced block,
    /// except that a held block needs only its putdown.
    fn h(&self, on: &Box<[u8]>) -> Cost {
        let oop = self.out_of_place(on) as Cost;
        match self.variant {
            BlocksVariant::Standard => oop,
            BlocksVariant::Deep => 2.0 * oop - if Self::held(on).is_some() { 1.0 } else { 0.0 },
        }
    }

    fn d(&self, on: &Box<[u8]>) -> f64 {
        self.h(on)
    }

    fn state_heap_bytes(&self) -> usize {
        self.start.len()
    }
}
