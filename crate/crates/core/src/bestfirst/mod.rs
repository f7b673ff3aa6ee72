//! Best-first comparators: weighted A* (A* at `w = 1`), greedy best-first,
//! anytime weighted A*, ARA* and AEES. All of them keep a closed table keyed
//! on state and reopen a state when it is reached with a cheaper `g`.

mod aees;

use serde::{Deserialize, Serialize};

use crate::search::{
    cost_le, cost_lt, expand, node_bytes_estimate, Cost, FastMap, Flow, Incumbent, Limits, Monitor,
    Node, NodeArena, NodeId, NodeOrder, OpenQueue, QueueEntry, SearchDomain, SearchResult, Stop,
    Successor, TerminalStatus,
};

pub use aees::{aees, AeesConfig, AeesRun, ErrorModel};

/// Weights at or below `1 + WEIGHT_EPSILON` count as 1.
const WEIGHT_EPSILON: f64 = 1e-9;

/// Weight sequence for ARA*, indexed by the number of incumbents found so far.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum WeightSchedule {
    /// `max(1, initial - step * k)`.
    Decrement { initial: f64, step: f64 },
    /// Explicit weights ending in 1; the last one repeats.
    List { weights: Vec<f64> },
}

impl WeightSchedule {
    pub fn decrement(initial: f64, step: f64) -> Self {
        WeightSchedule::Decrement { initial, step }
    }

    pub fn list(weights: &[f64]) -> Self {
        WeightSchedule::List {
            weights: weights.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            WeightSchedule::Decrement { initial, step } => {
                if !(initial.is_finite() && *initial >= 1.0) {
                    return Err(format!("initial weight {initial} must be finite and >= 1"));
                }
                if !(step.is_finite() && *step > 0.0) {
                    return Err(format!("weight decrement {step} must be positive"));
                }
            }
            WeightSchedule::List { weights } => {
                let Some(&last) = weights.last() else {
                    return Err("weight list is empty".into());
                };
                if weights.iter().any(|w| !(w.is_finite() && *w >= 1.0)) {
                    return Err("weights must be finite and >= 1".into());
                }
                if weights.windows(2).any(|p| p[1] > p[0]) {
                    return Err("weights must be non-increasing".into());
                }
                if last != 1.0 {
                    return Err(format!("weight list must end at 1, not {last}"));
                }
            }
        }
        Ok(())
    }

    /// Weight in force after `k` incumbents.
    pub fn weight(&self, k: usize) -> f64 {
        let w = match self {
            WeightSchedule::Decrement { initial, step } => initial - step * k as f64,
            WeightSchedule::List { weights } => weights[k.min(weights.len() - 1)],
        };
        if w <= 1.0 + WEIGHT_EPSILON {
            1.0
        } else {
            w
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Priority {
    /// `g + w·h`, ties broken on lower `h`.
    Weighted(f64),
    /// `h` alone.
    Greedy,
}

impl Priority {
    fn entry<S, A>(self, node: &Node<S, A>, id: NodeId) -> QueueEntry {
        match self {
            Priority::Weighted(w) => QueueEntry {
                primary: node.g + w * node.h,
                f: node.h,
                id,
            },
            Priority::Greedy => NodeOrder::H.entry(node, id),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Mode {
    /// Stop at the first goal popped.
    OneShot,
    /// Keep searching after each goal, pruning on the incumbent.
    Anytime,
}

struct BestFirst<'a, D: SearchDomain> {
    domain: &'a D,
    arena: NodeArena<D::State, D::Action>,
    /// Best known `g` per state and the node holding it.
    closed: FastMap<D::State, (Cost, NodeId)>,
    open: OpenQueue,
    incumbent: Incumbent<D::State, D::Action>,
    monitor: Monitor,
    scratch: Vec<Successor<D::State, D::Action>>,
    kids: Vec<Node<D::State, D::Action>>,
    priority: Priority,
    mode: Mode,
    schedule: Option<&'a WeightSchedule>,
    improvements: usize,
}

impl<'a, D: SearchDomain> BestFirst<'a, D> {
    fn new(domain: &'a D, priority: Priority, mode: Mode, limits: Limits) -> Self {
        let node_bytes = node_bytes_estimate::<D::State, D::Action>(domain.state_heap_bytes());
        BestFirst {
            domain,
            arena: NodeArena::new(),
            closed: FastMap::default(),
            open: OpenQueue::new(),
            incumbent: Incumbent::none(),
            monitor: Monitor::new(limits, node_bytes),
            scratch: Vec::new(),
            kids: Vec::new(),
            priority,
            mode,
            schedule: None,
            improvements: 0,
        }
    }

    fn pruned(&self, f: Cost) -> bool {
        self.mode == Mode::Anytime && !cost_lt(f, self.incumbent.cost)
    }

    fn current(&self, id: NodeId) -> bool {
        let node = self.arena.get(id);
        self.closed
            .get(&node.state)
            .is_some_and(|&(_, best)| best == id)
    }

    /// Re-keys the open list under a new weight, dropping stale and pruned
    /// entries.
    fn reorder(&mut self, weight: f64) {
        self.priority = Priority::Weighted(weight);
        let entries: Vec<QueueEntry> = self.open.drain().collect();
        for e in entries {
            let node = self.arena.get(e.id);
            if self.current(e.id) && !self.pruned(node.f()) {
                let entry = self.priority.entry(node, e.id);
                self.open.push(entry);
            }
        }
    }

    /// Handles a popped goal. Returns `Some(status)` when the search ends.
    fn on_goal(&mut self, id: NodeId) -> Option<TerminalStatus> {
        let goal = self.arena.get(id).clone();
        if !self.incumbent.offer(&goal, &mut self.monitor) {
            return None;
        }
        if self.mode == Mode::OneShot {
            return Some(TerminalStatus::Solved);
        }
        if let Some(schedule) = self.schedule {
            if self.priority == Priority::Weighted(1.0) {
                return Some(TerminalStatus::Exhausted);
            }
            self.improvements += 1;
            self.reorder(schedule.weight(self.improvements));
        }
        None
    }

    fn run(&mut self) -> Result<TerminalStatus, Stop> {
        let root = self.arena.push(Node::root(self.domain));
        let root_node = self.arena.get(root);
        self.closed.insert(root_node.state.clone(), (0.0, root));
        self.open.push(self.priority.entry(root_node, root));

        while let Some(e) = self.open.pop() {
            if !self.current(e.id) {
                continue;
            }
            let node = self.arena.get(e.id);
            if self.pruned(node.f()) {
                continue;
            }
            if self.domain.is_goal(&node.state) {
                if let Some(status) = self.on_goal(e.id) {
                    return Ok(status);
                }
                continue;
            }
            self.expand(e.id)?;
        }
        Ok(TerminalStatus::Exhausted)
    }

    fn expand(&mut self, id: NodeId) -> Flow {
        self.monitor.begin_expansion(self.arena.len())?;
        expand(
            self.domain,
            self.arena.get(id),
            id,
            &mut self.scratch,
            &mut self.kids,
        );
        self.monitor.add_generated(self.kids.len());
        let mut kids = std::mem::take(&mut self.kids);
        for child in kids.drain(..) {
            if self.pruned(child.f()) {
                continue;
            }
            if self
                .closed
                .get(&child.state)
                .is_some_and(|&(g, _)| cost_le(g, child.g))
            {
                continue;
            }
            let state = child.state.clone();
            let g = child.g;
            let cid = self.arena.push(child);
            self.closed.insert(state, (g, cid));
            self.open
                .push(self.priority.entry(self.arena.get(cid), cid));
        }
        self.kids = kids;
        Ok(())
    }

    fn finish(mut self) -> SearchResult<D::Action> {
        let status = match self.run() {
            Ok(s) => s,
            Err(Stop(s)) => s,
        };
        SearchResult {
            solution: self.incumbent.solution(&self.arena),
            trace: self.monitor.finish(status),
        }
    }
}

/// Weighted A* on `g + w·h`, stopping at the first goal expanded. Reports
/// `Solved`, or `Exhausted` with no solution when the instance is unsolvable.
pub fn wastar<D: SearchDomain>(domain: &D, w: f64, limits: Limits) -> SearchResult<D::Action> {
    assert!(w >= 1.0, "weight must be at least 1");
    BestFirst::new(domain, Priority::Weighted(w), Mode::OneShot, limits).finish()
}

pub fn astar<D: SearchDomain>(domain: &D, limits: Limits) -> SearchResult<D::Action> {
    wastar(domain, 1.0, limits)
}

/// Greedy best-first search on `h`.
pub fn gbfs<D: SearchDomain>(domain: &D, limits: Limits) -> SearchResult<D::Action> {
    BestFirst::new(domain, Priority::Greedy, Mode::OneShot, limits).finish()
}

/// Anytime weighted A*: weighted A* that keeps going after each solution,
/// pruning on `f >= incumbent`, until open runs dry.
pub fn awastar<D: SearchDomain>(domain: &D, w: f64, limits: Limits) -> SearchResult<D::Action> {
    assert!(w >= 1.0, "weight must be at least 1");
    BestFirst::new(domain, Priority::Weighted(w), Mode::Anytime, limits).finish()
}

/// ARA*: anytime weighted A* whose weight steps down the schedule after
/// every solution, re-keying the open list. Stops after a solution found at
/// weight 1 or when open runs dry.
pub fn arastar<D: SearchDomain>(
    domain: &D,
    schedule: &WeightSchedule,
    limits: Limits,
) -> SearchResult<D::Action> {
    if let Err(msg) = schedule.validate() {
        panic!("invalid weight schedule: {msg}");
    }
    let mut bf = BestFirst::new(
        domain,
        Priority::Weighted(schedule.weight(0)),
        Mode::Anytime,
        limits,
    );
    bf.schedule = Some(schedule);
    bf.finish()
}
