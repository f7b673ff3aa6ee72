//! Fixed-width layered searches: beam, bead (beam ordered on `d`), monobead
//! (beam with numbered slots), and CABS (repeated beam with doubling width).

mod monobead;

use serde::{Deserialize, Serialize};

use crate::search::{
    cost_le, cost_lt, expand, node_bytes_estimate, Cost, FastMap, Incumbent, Limits, Monitor, Node,
    NodeArena, NodeOrder, SearchDomain, SearchResult, Solution, Stop, Successor, TerminalStatus,
};

pub use monobead::{monobead_search, MonobeadRun};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeamConfig {
    pub width: usize,
    pub ordering: NodeOrder,
    pub limits: Limits,
}

impl BeamConfig {
    pub fn new(width: usize, ordering: NodeOrder) -> Self {
        assert!(width >= 1, "beam width must be at least 1");
        BeamConfig {
            width,
            ordering,
            limits: Limits::unbounded(),
        }
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }
}

#[derive(Clone, Debug)]
pub struct BeamRun<A> {
    pub result: SearchResult<A>,
    /// Number of nodes in each expanded layer, root layer first.
    pub layer_sizes: Vec<usize>,
}

/// One pass of layered beam search.
struct Layered<'a, D: SearchDomain> {
    domain: &'a D,
    width: usize,
    ordering: NodeOrder,
    /// Iterated mode: prune on the incumbent and keep going after goals.
    anytime: bool,
    arena: NodeArena<D::State, D::Action>,
    incumbent: Incumbent<D::State, D::Action>,
    closed: FastMap<D::State, Cost>,
    scratch: Vec<Successor<D::State, D::Action>>,
    kids: Vec<Node<D::State, D::Action>>,
    layer_sizes: Vec<usize>,
    /// Lowest f among candidates cut off by the width limit.
    min_excluded_f: Cost,
}

impl<'a, D: SearchDomain> Layered<'a, D> {
    fn new(domain: &'a D, width: usize, ordering: NodeOrder, anytime: bool, bound: Cost) -> Self {
        let mut incumbent = Incumbent::none();
        incumbent.cost = bound;
        Layered {
            domain,
            width,
            ordering,
            anytime,
            arena: NodeArena::new(),
            incumbent,
            closed: FastMap::default(),
            scratch: Vec::new(),
            kids: Vec::new(),
            layer_sizes: Vec::new(),
            min_excluded_f: Cost::INFINITY,
        }
    }

    fn run(&mut self, monitor: &mut Monitor) -> Result<(), Stop> {
        let root = Node::root(self.domain);
        if self.domain.is_goal(&root.state) {
            self.incumbent.offer(&root, monitor);
            return Ok(());
        }
        self.closed.insert(root.state.clone(), 0.0);
        let mut layer = vec![self.arena.push(root)];
        let mut candidates: Vec<Node<D::State, D::Action>> = Vec::new();
        let mut index: FastMap<D::State, usize> = FastMap::default();

        while !layer.is_empty() {
            self.layer_sizes.push(layer.len());
            candidates.clear();
            index.clear();
            for &id in &layer {
                if self.anytime && !cost_lt(self.arena.get(id).f(), self.incumbent.cost) {
                    continue;
                }
                monitor.begin_expansion(self.arena.len() + candidates.len())?;
                expand(
                    self.domain,
                    self.arena.get(id),
                    id,
                    &mut self.scratch,
                    &mut self.kids,
                );
                monitor.add_generated(self.kids.len());
                let mut goal_seen = false;
                for child in self.kids.drain(..) {
                    if self.anytime && !cost_lt(child.f(), self.incumbent.cost) {
                        continue;
                    }
                    if self.domain.is_goal(&child.state) {
                        self.incumbent.offer(&child, monitor);
                        goal_seen = true;
                        continue;
                    }
                    if self
                        .closed
                        .get(&child.state)
                        .is_some_and(|&g| cost_le(g, child.g))
                    {
                        continue;
                    }
                    match index.get(&child.state) {
                        Some(&k) => {
                            if cost_lt(child.g, candidates[k].g) {
                                candidates[k] = child;
                            }
                        }
                        None => {
                            index.insert(child.state.clone(), candidates.len());
                            candidates.push(child);
                        }
                    }
                }
                if goal_seen && !self.anytime {
                    return Ok(());
                }
            }
            // Stable sort: equal keys keep generation order.
            candidates.sort_by(|a, b| self.ordering.compare(a, b));
            layer = Vec::with_capacity(self.width.min(candidates.len()));
            for (k, c) in candidates.drain(..).enumerate() {
                if k < self.width {
                    self.closed.insert(c.state.clone(), c.g);
                    layer.push(self.arena.push(c));
                } else if c.f() < self.min_excluded_f {
                    self.min_excluded_f = c.f();
                }
            }
        }
        Ok(())
    }

    fn solution(&self) -> Option<Solution<D::Action>> {
        self.incumbent.solution(&self.arena)
    }
}

/// Beam search that stops at the first goal generated. Exhausting the beam
/// without a goal reports `Exhausted` with no solution; that only means the
/// beam failed, not that the instance is unsolvable.
pub fn beam_search<D: SearchDomain>(domain: &D, cfg: &BeamConfig) -> BeamRun<D::Action> {
    let node_bytes = node_bytes_estimate::<D::State, D::Action>(domain.state_heap_bytes());
    let mut monitor = Monitor::new(cfg.limits, node_bytes);
    let mut pass = Layered::new(domain, cfg.width, cfg.ordering, false, Cost::INFINITY);
    let status = match pass.run(&mut monitor) {
        Ok(()) if pass.incumbent.goal.is_some() => TerminalStatus::Solved,
        Ok(()) => TerminalStatus::Exhausted,
        Err(Stop(s)) => s,
    };
    BeamRun {
        result: SearchResult {
            solution: pass.solution(),
            trace: monitor.finish(status),
        },
        layer_sizes: pass.layer_sizes,
    }
}

/// Beam search ordered on distance-to-go.
pub fn bead_search<D: SearchDomain>(
    domain: &D,
    width: usize,
    limits: Limits,
) -> BeamRun<D::Action> {
    beam_search(
        domain,
        &BeamConfig::new(width, NodeOrder::D).with_limits(limits),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CabsConfig {
    pub ordering: NodeOrder,
    pub limits: Limits,
    /// Stop after this many beam passes.
    pub max_iterations: Option<u64>,
}

impl Default for CabsConfig {
    fn default() -> Self {
        CabsConfig {
            ordering: NodeOrder::D,
            limits: Limits::unbounded(),
            max_iterations: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CabsRun<A> {
    pub result: SearchResult<A>,
    /// Beam width of each completed or interrupted pass.
    pub widths: Vec<usize>,
}

/// Complete anytime beam search: beam passes of width 1, 2, 4, … each with a
/// fresh closed table, pruning on the incumbent. Stops once a pass excludes
/// no node with `f` below the incumbent cost.
pub fn cabs<D: SearchDomain>(domain: &D, cfg: &CabsConfig) -> CabsRun<D::Action> {
    let node_bytes = node_bytes_estimate::<D::State, D::Action>(domain.state_heap_bytes());
    let mut monitor = Monitor::new(cfg.limits, node_bytes);
    let mut best: Option<Solution<D::Action>> = None;
    let mut widths = Vec::new();
    let mut width = 1usize;
    let status = loop {
        if cfg.max_iterations.is_some_and(|m| widths.len() as u64 >= m) {
            break TerminalStatus::IterationLimit;
        }
        widths.push(width);
        let bound = best.as_ref().map_or(Cost::INFINITY, |s| s.cost);
        let mut pass = Layered::new(domain, width, cfg.ordering, true, bound);
        let outcome = pass.run(&mut monitor);
        if pass.incumbent.goal.is_some() {
            best = pass.solution();
        }
        if let Err(Stop(s)) = outcome {
            break s;
        }
        let cost = best.as_ref().map_or(Cost::INFINITY, |s| s.cost);
        if !cost_lt(pass.min_excluded_f, cost) {
            break TerminalStatus::Exhausted;
        }
        width = width.saturating_mul(2);
    };
    CabsRun {
        result: SearchResult {
            trace: monitor.finish(status),
            solution: best,
        },
        widths,
    }
}
