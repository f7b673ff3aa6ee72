//! Rectangle search: one priority queue per depth level. Every iteration
//! expands one node at each existing level and then `depth` nodes at each of
//! `aspect` newly opened levels, so the explored region grows as a rectangle
//! of width × depth. The search is anytime: goals found along the way become
//! incumbents whose cost prunes the queues, and exhausting the queues proves
//! the last incumbent optimal under an admissible heuristic.

mod strict;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::search::{
    cost_le, cost_lt, expand, node_bytes_estimate, Cost, FastMap, Flow, Incumbent, Limits, Monitor,
    Node, NodeArena, NodeId, NodeOrder, OpenQueue, SearchDomain, SearchResult, Stop, Successor,
    TerminalStatus,
};

pub use strict::{strict_rectangle_search, SlotRecord, StrictRun};

/// Configuration for [`rectangle_search`] and [`strict_rectangle_search`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectangleConfig {
    /// New depth levels opened per iteration (≥ 1).
    pub aspect: u32,
    pub ordering: NodeOrder,
    pub limits: Limits,
    /// Stop after this many main-loop iterations.
    pub max_iterations: Option<u64>,
    /// Keep a `(depth, state)` record of every expansion.
    pub record_expansions: bool,
}

impl RectangleConfig {
    pub fn new(aspect: u32) -> Self {
        assert!(aspect >= 1, "aspect must be at least 1");
        RectangleConfig {
            aspect,
            ordering: NodeOrder::D,
            limits: Limits::unbounded(),
            max_iterations: None,
            record_expansions: false,
        }
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }
}

impl Default for RectangleConfig {
    fn default() -> Self {
        RectangleConfig::new(1)
    }
}

/// Result of a rectangle run with its shape statistics.
#[derive(Clone, Debug)]
pub struct RectangleRun<S, A> {
    pub result: SearchResult<A>,
    pub iterations: u64,
    /// Expansions per depth; index 0 is the root.
    pub expansions_per_depth: Vec<u64>,
    /// `(depth, state)` per expansion, in order, when requested.
    pub expansion_log: Vec<(u32, S)>,
}

/// Planned expansions for iteration `k` (1-based) of an unpruned run:
/// one at every previously explored level, then the running depth counter
/// at the previously deepest level and each newly opened one except the
/// newest.
pub fn iteration_schedule(k: u64, aspect: u32) -> Vec<(u64, u64)> {
    assert!(k >= 1 && aspect >= 1);
    let aspect = u64::from(aspect);
    let deepest = 1 + (k - 1) * aspect;
    let depth = deepest;
    (1..deepest)
        .map(|level| (level, 1))
        .chain((deepest..deepest + aspect).map(|level| (level, depth)))
        .collect()
}

#[derive(Clone, Copy, Debug)]
struct ClosedEntry {
    g: Cost,
    expanded: bool,
}

#[derive(Debug)]
struct Level {
    depth: u32,
    queue: OpenQueue,
}

/// Ordered per-depth open lists plus the closed table shared by all levels.
/// Depth labels are absolute and consecutive. Empty levels at either end
/// are not stored; `deepest` is the label of the deepest opened level,
/// which may lie past the last stored one.
#[derive(Debug)]
pub struct OpenLevels<S> {
    levels: VecDeque<Level>,
    closed: FastMap<S, ClosedEntry>,
    deepest: u32,
}

impl<S: std::hash::Hash + Eq> OpenLevels<S> {
    fn new() -> Self {
        OpenLevels {
            levels: VecDeque::new(),
            closed: FastMap::default(),
            deepest: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.iter().all(|l| l.queue.is_empty())
    }

    /// Depth labels of the levels currently held.
    pub fn depth_labels(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.depth).collect()
    }

    pub fn queue_len(&self, i: usize) -> usize {
        self.levels[i].queue.len()
    }

    fn append_level(&mut self) {
        let depth = self.levels.back().map_or(1, |l| l.depth + 1);
        self.levels.push_back(Level {
            depth,
            queue: OpenQueue::new(),
        });
        self.deepest = self.deepest.max(depth);
    }

    /// Index of the stored level with label `depth`, if any.
    fn index_of(&self, depth: u32) -> Option<usize> {
        let first = self.levels.front()?.depth;
        let i = depth.checked_sub(first)? as usize;
        (i < self.levels.len()).then_some(i)
    }

    /// Drops empty levels from both ends. An empty level past the deepest
    /// stored one still counts as opened through `deepest`, so the extra
    /// expansions of an iteration keep landing on the right label.
    fn trim(&mut self) {
        while self.levels.front().is_some_and(|l| l.queue.is_empty()) {
            self.levels.pop_front();
        }
        while self.levels.back().is_some_and(|l| l.queue.is_empty()) {
            self.levels.pop_back();
        }
    }
}

struct Rectangle<'a, D: SearchDomain> {
    domain: &'a D,
    cfg: &'a RectangleConfig,
    arena: NodeArena<D::State, D::Action>,
    open: OpenLevels<D::State>,
    incumbent: Incumbent<D::State, D::Action>,
    monitor: Monitor,
    scratch: Vec<Successor<D::State, D::Action>>,
    kids: Vec<Node<D::State, D::Action>>,
    per_depth: Vec<u64>,
    log: Vec<(u32, D::State)>,
    iterations: u64,
}

impl<'a, D: SearchDomain> Rectangle<'a, D> {
    fn new(domain: &'a D, cfg: &'a RectangleConfig) -> Self {
        let node_bytes = node_bytes_estimate::<D::State, D::Action>(domain.state_heap_bytes());
        Rectangle {
            domain,
            cfg,
            arena: NodeArena::new(),
            open: OpenLevels::new(),
            incumbent: Incumbent::none(),
            monitor: Monitor::new(cfg.limits, node_bytes),
            scratch: Vec::new(),
            kids: Vec::new(),
            per_depth: Vec::new(),
            log: Vec::new(),
            iterations: 0,
        }
    }

    /// Expands `id` and routes surviving children into level `target`.
    fn expand_into(&mut self, id: NodeId, target: usize) -> Flow {
        self.monitor.begin_expansion(self.arena.len())?;
        let node = self.arena.get(id);
        let depth = node.depth as usize;
        if self.per_depth.len() <= depth {
            self.per_depth.resize(depth + 1, 0);
        }
        self.per_depth[depth] += 1;
        if self.cfg.record_expansions {
            self.log.push((node.depth, node.state.clone()));
        }
        if let Some(e) = self.open.closed.get_mut(&node.state) {
            e.expanded = true;
        }
        expand(self.domain, node, id, &mut self.scratch, &mut self.kids);
        self.monitor.add_generated(self.kids.len());

        for child in self.kids.drain(..) {
            if !cost_lt(child.f(), self.incumbent.cost) {
                continue;
            }
            if self.domain.is_goal(&child.state) {
                self.incumbent.offer(&child, &mut self.monitor);
                continue;
            }
            match self.open.closed.get_mut(&child.state) {
                Some(dup) if cost_le(dup.g, child.g) => continue,
                Some(dup) => {
                    dup.g = child.g;
                    dup.expanded = false;
                }
                None => {
                    self.open.closed.insert(
                        child.state.clone(),
                        ClosedEntry {
                            g: child.g,
                            expanded: false,
                        },
                    );
                }
            }
            let entry_order = self.cfg.ordering;
            let cid = self.arena.push(child);
            let entry = entry_order.entry(self.arena.get(cid), cid);
            if target == self.open.levels.len() {
                self.open.append_level();
            }
            self.open.levels[target].queue.push(entry);
        }
        Ok(())
    }

    /// Pops from level `i` until a node with `f < incumbent` that is not a
    /// superseded duplicate turns up, then expands it into level `i + 1`.
    /// An exhausted level makes this a no-op.
    fn select_and_expand(&mut self, i: usize) -> Flow {
        let id = loop {
            let Some(entry) = self.open.levels[i].queue.pop() else {
                return Ok(());
            };
            let node = self.arena.get(entry.id);
            if !cost_lt(node.f(), self.incumbent.cost) {
                continue;
            }
            let superseded = self
                .open
                .closed
                .get(&node.state)
                .is_some_and(|e| cost_lt(e.g, node.g));
            if superseded {
                continue;
            }
            break entry.id;
        };
        self.expand_into(id, i + 1)
    }

    fn start(&mut self) -> Result<bool, Stop> {
        let root = self.arena.push(Node::root(self.domain));
        let root_node = self.arena.get(root).clone();
        self.open.closed.insert(
            root_node.state.clone(),
            ClosedEntry {
                g: 0.0,
                expanded: false,
            },
        );
        if self.domain.is_goal(&root_node.state) {
            self.incumbent.offer(&root_node, &mut self.monitor);
            return Ok(false);
        }
        self.open.deepest = 1;
        self.expand_into(root, 0)?;
        Ok(true)
    }

    fn main_loop(&mut self) -> Flow {
        if !self.start()? {
            return Ok(());
        }
        let aspect = self.cfg.aspect as usize;
        let mut depth: u64 = 1;
        while !self.open.is_empty() {
            if self
                .cfg
                .max_iterations
                .is_some_and(|m| self.iterations >= m)
            {
                return Err(Stop(TerminalStatus::IterationLimit));
            }
            self.iterations += 1;
            let deepest = self.open.deepest;
            let mut i = 0;
            while i < self.open.len() && self.open.levels[i].depth < deepest {
                self.select_and_expand(i)?;
                i += 1;
            }
            self.open.deepest += aspect as u32;
            for label in deepest..deepest + aspect as u32 {
                let Some(j) = self.open.index_of(label) else {
                    break;
                };
                for _ in 0..depth {
                    if self.open.levels[j].queue.is_empty() {
                        break;
                    }
                    self.select_and_expand(j)?;
                }
            }
            depth += aspect as u64;
            self.open.trim();
            self.debug_check_levels();
        }
        Ok(())
    }

    fn debug_check_levels(&self) {
        if cfg!(debug_assertions) {
            let labels = self.open.depth_labels();
            debug_assert!(labels.windows(2).all(|w| w[1] == w[0] + 1));
            if let (Some(first), Some(last)) = (self.open.levels.front(), self.open.levels.back()) {
                debug_assert!(!first.queue.is_empty() && !last.queue.is_empty());
                debug_assert!(last.depth <= self.open.deepest);
            }
        }
    }

    fn finish(mut self, status: TerminalStatus) -> RectangleRun<D::State, D::Action> {
        let solution = self.incumbent.solution(&self.arena);
        if self.per_depth.is_empty() {
            self.per_depth.push(0);
        }
        RectangleRun {
            result: SearchResult {
                trace: self.monitor.finish(status),
                solution,
            },
            iterations: self.iterations,
            expansions_per_depth: self.per_depth,
            expansion_log: self.log,
        }
    }
}

/// Runs rectangle search until the open levels are exhausted or a limit
/// trips. With an admissible `h`, exhaustion proves the final incumbent
/// optimal; an unsolvable instance exhausts with no incumbent.
pub fn rectangle_search<D: SearchDomain>(
    domain: &D,
    cfg: &RectangleConfig,
) -> RectangleRun<D::State, D::Action> {
    let mut r = Rectangle::new(domain, cfg);
    let status = match r.main_loop() {
        Ok(()) => TerminalStatus::Exhausted,
        Err(Stop(s)) => s,
    };
    r.finish(status)
}
