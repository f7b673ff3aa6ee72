//! Depth-first anytime comparators. Both keep only the current path in
//! memory and avoid cycles by checking the path's own states.
//!
//! * DFS*: cost-bounded depth-first iterations whose bound doubles, then
//!   branch and bound on the incumbent.
//! * ILDS*: limited-discrepancy probes under a depth bound that doubles.

use std::hash::Hash;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::search::{
    cost_lt, expand, node_bytes_estimate, Cost, Flow, Limits, Monitor, Node, NodeId, NodeOrder,
    SearchDomain, SearchResult, Solution, Stop, Successor, TerminalStatus,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DfsStarConfig {
    /// Visit children in increasing `f` (ties on `d`) instead of generation
    /// order.
    pub order_children: bool,
    pub limits: Limits,
}

impl DfsStarConfig {
    pub fn new(order_children: bool) -> Self {
        DfsStarConfig {
            order_children,
            limits: Limits::unbounded(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DfsStarRun<A> {
    pub result: SearchResult<A>,
    /// Cost bound of each iteration.
    pub bounds: Vec<Cost>,
}

/// The current root-to-node path.
struct Path<S, A> {
    frames: Vec<Frame<S, A>>,
    on_path: FxHashSet<S>,
}

struct Frame<S, A> {
    node: Node<S, A>,
    children: Vec<Node<S, A>>,
    next: usize,
    /// Discrepancies left (ILDS* only).
    budget: u32,
    /// Discrepancies used so far (ILDS* only).
    used: u32,
}

impl<S: Clone + Eq + Hash, A: Clone> Path<S, A> {
    fn new() -> Self {
        Path {
            frames: Vec::new(),
            on_path: FxHashSet::default(),
        }
    }

    fn push(&mut self, node: Node<S, A>, children: Vec<Node<S, A>>, budget: u32, used: u32) {
        self.on_path.insert(node.state.clone());
        self.frames.push(Frame {
            node,
            children,
            next: 0,
            budget,
            used,
        });
    }

    fn pop(&mut self) -> Option<Frame<S, A>> {
        let f = self.frames.pop()?;
        self.on_path.remove(&f.node.state);
        Some(f)
    }

    /// Plan to `goal`, whose parent is the top frame (or the root itself).
    fn solution(&self, goal: &Node<S, A>) -> Solution<A> {
        let mut actions: Vec<A> = self
            .frames
            .iter()
            .filter_map(|f| f.node.action.clone())
            .collect();
        if let Some(a) = &goal.action {
            actions.push(a.clone());
        }
        Solution {
            actions,
            cost: goal.g,
        }
    }
}

/// Incumbent for path-based searches: the plan is copied out when found.
struct Best<A> {
    cost: Cost,
    solution: Option<Solution<A>>,
}

impl<A> Best<A> {
    fn none() -> Self {
        Best {
            cost: Cost::INFINITY,
            solution: None,
        }
    }

    fn offer(&mut self, sol: Solution<A>, monitor: &mut Monitor) {
        if cost_lt(sol.cost, self.cost) {
            self.cost = sol.cost;
            monitor.record(sol.cost);
            self.solution = Some(sol);
        }
    }
}

fn children_of<D: SearchDomain>(
    domain: &D,
    node: &Node<D::State, D::Action>,
    scratch: &mut Vec<Successor<D::State, D::Action>>,
    monitor: &mut Monitor,
) -> Vec<Node<D::State, D::Action>> {
    let mut kids = Vec::new();
    // Parent links are unused: plans are read off the path.
    expand(domain, node, NodeId(0), scratch, &mut kids);
    monitor.add_generated(kids.len());
    kids
}

/// Smallest outgoing edge cost of the start state, used as the first bound
/// when `h(start) = 0`.
fn min_edge_cost<D: SearchDomain>(domain: &D) -> Option<Cost> {
    let mut out = Vec::new();
    domain.successors(&domain.initial_state(), &mut out);
    out.iter().map(|s| s.cost).min_by(|a, b| a.total_cmp(b))
}

struct DfsStar<'a, D: SearchDomain> {
    domain: &'a D,
    cfg: &'a DfsStarConfig,
    monitor: Monitor,
    best: Best<D::Action>,
    scratch: Vec<Successor<D::State, D::Action>>,
}

impl<D: SearchDomain> DfsStar<'_, D> {
    /// One depth-first pass pruning `f > bound` and `f >= incumbent`.
    /// Returns whether the bound cut off any node with `f` below the
    /// incumbent.
    fn iteration(&mut self, bound: Cost) -> Result<bool, Stop> {
        let mut cut = false;
        let mut path: Path<D::State, D::Action> = Path::new();
        let root = Node::root(self.domain);
        if !self.visit(root, bound, &mut path, &mut cut)? {
            return Ok(cut);
        }
        while let Some(top) = path.frames.last_mut() {
            if top.next >= top.children.len() {
                path.pop();
                continue;
            }
            let child = top.children[top.next].clone();
            top.next += 1;
            if path.on_path.contains(&child.state) {
                continue;
            }
            self.visit(child, bound, &mut path, &mut cut)?;
        }
        Ok(cut)
    }

    /// Handles one node: prune, record a goal, or expand it onto the path.
    /// Returns whether it was pushed.
    fn visit(
        &mut self,
        node: Node<D::State, D::Action>,
        bound: Cost,
        path: &mut Path<D::State, D::Action>,
        cut: &mut bool,
    ) -> Result<bool, Stop> {
        let f = node.f();
        if !cost_lt(f, self.best.cost) {
            return Ok(false);
        }
        if cost_lt(bound, f) {
            *cut = true;
            return Ok(false);
        }
        if self.domain.is_goal(&node.state) {
            self.best.offer(path.solution(&node), &mut self.monitor);
            return Ok(false);
        }
        self.monitor.begin_expansion(path.frames.len() + 1)?;
        let mut children = children_of(self.domain, &node, &mut self.scratch, &mut self.monitor);
        if self.cfg.order_children {
            children.sort_by(|a, b| a.f().total_cmp(&b.f()).then(a.d.total_cmp(&b.d)));
        }
        path.push(node, children, 0, 0);
        Ok(true)
    }

    fn run(&mut self, bounds: &mut Vec<Cost>) -> Flow {
        let start = self.domain.initial_state();
        let mut bound = self.domain.h(&start);
        if bound <= 0.0 && !self.domain.is_goal(&start) {
            match min_edge_cost(self.domain) {
                Some(c) => bound = c,
                None => return Ok(()),
            }
        }
        loop {
            bounds.push(bound);
            let cut = self.iteration(bound)?;
            if self.best.solution.is_some() || !cut {
                return Ok(());
            }
            bound *= 2.0;
        }
    }
}

/// DFS* (or DFS*-co with `order_children`). The pass that finds the first
/// solution runs with a bound at least its cost and prunes on the incumbent
/// from then on, so it completes the branch-and-bound phase by itself.
pub fn dfs_star<D: SearchDomain>(domain: &D, cfg: &DfsStarConfig) -> DfsStarRun<D::Action> {
    let node_bytes = node_bytes_estimate::<D::State, D::Action>(domain.state_heap_bytes()) * 8;
    let mut s = DfsStar {
        domain,
        cfg,
        monitor: Monitor::new(cfg.limits, node_bytes),
        best: Best::none(),
        scratch: Vec::new(),
    };
    let mut bounds = Vec::new();
    let status = match s.run(&mut bounds) {
        Ok(()) => TerminalStatus::Exhausted,
        Err(Stop(st)) => st,
    };
    DfsStarRun {
        result: SearchResult {
            trace: s.monitor.finish(status),
            solution: s.best.solution,
        },
        bounds,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IldsConfig {
    pub limits: Limits,
    /// Keep a record of every node visited.
    pub record_visits: bool,
}

impl Default for IldsConfig {
    fn default() -> Self {
        IldsConfig {
            limits: Limits::unbounded(),
            record_visits: false,
        }
    }
}

/// A node reached during a probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IldsVisit {
    pub depth_bound: u32,
    pub discrepancies: u32,
    pub depth: u32,
    /// Non-preferred moves on the path to this node.
    pub used: u32,
}

#[derive(Clone, Debug)]
pub struct IldsRun<A> {
    pub result: SearchResult<A>,
    /// `(depth bound, discrepancy count)` of every probe.
    pub probes: Vec<(u32, u32)>,
    /// Probe in which each incumbent was found, parallel to the trace events.
    pub event_probes: Vec<(u32, u32)>,
    pub visits: Vec<IldsVisit>,
}

struct Ilds<'a, D: SearchDomain> {
    domain: &'a D,
    cfg: &'a IldsConfig,
    monitor: Monitor,
    best: Best<D::Action>,
    scratch: Vec<Successor<D::State, D::Action>>,
    probes: Vec<(u32, u32)>,
    event_probes: Vec<(u32, u32)>,
    visits: Vec<IldsVisit>,
    /// Lowest `f` cut by the discrepancy budget in the current probe.
    discrepancy_cut: Cost,
    /// Lowest `f` cut by the depth bound in the current depth round.
    depth_cut: Cost,
}

impl<D: SearchDomain> Ilds<'_, D> {
    fn note_cut(slot: &mut Cost, f: Cost) {
        if f < *slot {
            *slot = f;
        }
    }

    fn visit(
        &mut self,
        node: Node<D::State, D::Action>,
        budget: u32,
        used: u32,
        depth_bound: u32,
        path: &mut Path<D::State, D::Action>,
    ) -> Flow {
        if !cost_lt(node.f(), self.best.cost) {
            return Ok(());
        }
        let probe = *self.probes.last().expect("probe started");
        if self.cfg.record_visits {
            self.visits.push(IldsVisit {
                depth_bound,
                discrepancies: probe.1,
                depth: node.depth,
                used,
            });
        }
        if self.domain.is_goal(&node.state) {
            let before = self.best.cost;
            self.best.offer(path.solution(&node), &mut self.monitor);
            if self.best.cost < before {
                self.event_probes.push(probe);
            }
            return Ok(());
        }
        if node.depth >= depth_bound {
            Self::note_cut(&mut self.depth_cut, node.f());
            return Ok(());
        }
        self.monitor.begin_expansion(path.frames.len() + 1)?;
        let mut children = children_of(self.domain, &node, &mut self.scratch, &mut self.monitor);
        // Stable: equal keys keep generation order.
        children.sort_by(|a, b| NodeOrder::D.compare(a, b));
        path.push(node, children, budget, used);
        Ok(())
    }

    /// One probe with exactly `k` discrepancies along paths that reach the
    /// depth bound.
    fn probe(&mut self, k: u32, depth_bound: u32) -> Flow {
        self.probes.push((depth_bound, k));
        let mut path: Path<D::State, D::Action> = Path::new();
        self.visit(Node::root(self.domain), k, 0, depth_bound, &mut path)?;
        while let Some(top) = path.frames.last_mut() {
            if top.next >= top.children.len() {
                path.pop();
                continue;
            }
            let rank = top.next;
            top.next += 1;
            let remaining = depth_bound - top.node.depth;
            let (budget, used) = (top.budget, top.used);
            let child = &top.children[rank];
            let (child_budget, child_used) = if rank == 0 {
                if remaining <= budget {
                    continue;
                }
                (budget, used)
            } else {
                if budget == 0 {
                    if cost_lt(child.f(), self.best.cost) {
                        Self::note_cut(&mut self.discrepancy_cut, child.f());
                    }
                    continue;
                }
                (budget - 1, used + 1)
            };
            if path.on_path.contains(&child.state) {
                continue;
            }
            let child = child.clone();
            self.visit(child, child_budget, child_used, depth_bound, &mut path)?;
        }
        Ok(())
    }

    fn run(&mut self) -> Flow {
        let start = self.domain.initial_state();
        let mut depth_bound = (self.domain.d(&start).ceil() as u32).max(1);
        loop {
            self.depth_cut = Cost::INFINITY;
            for k in 0..=depth_bound {
                self.discrepancy_cut = Cost::INFINITY;
                self.probe(k, depth_bound)?;
                if !cost_lt(self.discrepancy_cut, self.best.cost) {
                    break;
                }
            }
            if !cost_lt(self.depth_cut, self.best.cost) {
                return Ok(());
            }
            depth_bound = depth_bound.saturating_mul(2);
        }
    }
}

/// ILDS*: discrepancy sweeps `k = 0, 1, …` under a depth bound starting at
/// `d(start)`. A sweep stops early once a probe cuts nothing below the
/// incumbent on discrepancies; the depth bound doubles while the bound cut
/// anything below the incumbent.
pub fn ilds_star<D: SearchDomain>(domain: &D, cfg: &IldsConfig) -> IldsRun<D::Action> {
    let node_bytes = node_bytes_estimate::<D::State, D::Action>(domain.state_heap_bytes()) * 8;
    let mut s = Ilds {
        domain,
        cfg,
        monitor: Monitor::new(cfg.limits, node_bytes),
        best: Best::none(),
        scratch: Vec::new(),
        probes: Vec::new(),
        event_probes: Vec::new(),
        visits: Vec::new(),
        discrepancy_cut: Cost::INFINITY,
        depth_cut: Cost::INFINITY,
    };
    let status = match s.run() {
        Ok(()) => TerminalStatus::Exhausted,
        Err(Stop(st)) => st,
    };
    IldsRun {
        result: SearchResult {
            trace: s.monitor.finish(status),
            solution: s.best.solution,
        },
        probes: s.probes,
        event_probes: s.event_probes,
        visits: s.visits,
    }
}
