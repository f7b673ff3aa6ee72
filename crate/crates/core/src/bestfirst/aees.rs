//! Anytime explicit estimation search.
//!
//! Three views of the open list: `fhat` (error-corrected cost estimate),
//! `focal` (corrected distance-to-go, restricted to nodes whose `fhat` is
//! within the current suboptimality factor of the best `fhat`), and
//! `cleanup` (plain `f`). Nodes outside the focal threshold wait in
//! `pending`, ordered on `fhat`, and move into focal when the threshold
//! rises. All heaps delete lazily.

use serde::{Deserialize, Serialize};

use crate::search::{
    cost_le, cost_lt, expand, node_bytes_estimate, Cost, FastMap, Flow, Incumbent, Limits, Monitor,
    Node, NodeArena, NodeId, OpenQueue, QueueEntry, SearchDomain, SearchResult, Stop, Successor,
    TerminalStatus,
};

/// Largest allowed mean one-step distance error.
const MAX_DISTANCE_ERROR: f64 = 1.0 - 1e-6;

/// Global running means of the one-step heuristic and distance errors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorModel {
    sum_h: f64,
    sum_d: f64,
    pub samples: u64,
}

impl ErrorModel {
    pub fn eps_h(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            (self.sum_h / self.samples as f64).max(0.0)
        }
    }

    pub fn eps_d(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            (self.sum_d / self.samples as f64).clamp(0.0, MAX_DISTANCE_ERROR)
        }
    }

    /// Adds the sample from parent `(h, d)` to best child `(h, d)` over an
    /// edge of cost `cost`.
    pub fn observe(
        &mut self,
        parent_h: Cost,
        parent_d: f64,
        child_h: Cost,
        child_d: f64,
        cost: Cost,
    ) {
        self.sum_h += child_h + cost - parent_h;
        self.sum_d += child_d + 1.0 - parent_d;
        self.samples += 1;
    }

    pub fn d_hat(&self, d: f64) -> f64 {
        d / (1.0 - self.eps_d())
    }

    pub fn f_hat(&self, g: Cost, h: Cost, d: f64) -> Cost {
        g + h + self.eps_h() * self.d_hat(d)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AeesConfig {
    pub limits: Limits,
    /// Keep every distinct value taken by the lowest open `f`.
    pub record_f_min: bool,
}

impl Default for AeesConfig {
    fn default() -> Self {
        AeesConfig {
            limits: Limits::unbounded(),
            record_f_min: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AeesRun<A> {
    pub result: SearchResult<A>,
    /// Successive distinct lowest-`f` values among open nodes, when recorded.
    pub f_min_history: Vec<Cost>,
    pub error_model: ErrorModel,
}

#[derive(Clone, Copy, Debug)]
struct Extra {
    d_hat: f64,
    f_hat: Cost,
    open: bool,
    in_focal: bool,
}

struct Aees<'a, D: SearchDomain> {
    domain: &'a D,
    cfg: &'a AeesConfig,
    arena: NodeArena<D::State, D::Action>,
    extra: Vec<Extra>,
    closed: FastMap<D::State, (Cost, NodeId)>,
    fhat: OpenQueue,
    focal: OpenQueue,
    pending: OpenQueue,
    cleanup: OpenQueue,
    model: ErrorModel,
    incumbent: Incumbent<D::State, D::Action>,
    monitor: Monitor,
    scratch: Vec<Successor<D::State, D::Action>>,
    kids: Vec<Node<D::State, D::Action>>,
    f_min_history: Vec<Cost>,
}

fn keyed(primary: f64, secondary: f64, id: NodeId) -> QueueEntry {
    QueueEntry {
        primary,
        f: secondary,
        id,
    }
}

impl<'a, D: SearchDomain> Aees<'a, D> {
    fn new(domain: &'a D, cfg: &'a AeesConfig) -> Self {
        let node_bytes =
            node_bytes_estimate::<D::State, D::Action>(domain.state_heap_bytes()) + 120;
        Aees {
            domain,
            cfg,
            arena: NodeArena::new(),
            extra: Vec::new(),
            closed: FastMap::default(),
            fhat: OpenQueue::new(),
            focal: OpenQueue::new(),
            pending: OpenQueue::new(),
            cleanup: OpenQueue::new(),
            model: ErrorModel::default(),
            incumbent: Incumbent::none(),
            monitor: Monitor::new(cfg.limits, node_bytes),
            scratch: Vec::new(),
            kids: Vec::new(),
            f_min_history: Vec::new(),
        }
    }

    fn live(&self, id: NodeId) -> bool {
        self.extra[id.index()].open && cost_lt(self.arena.get(id).f(), self.incumbent.cost)
    }

    fn kill(&mut self, id: NodeId) {
        self.extra[id.index()].open = false;
    }

    fn insert(&mut self, node: Node<D::State, D::Action>) {
        let d_hat = self.model.d_hat(node.d);
        let f_hat = self.model.f_hat(node.g, node.h, node.d);
        let (f, g) = (node.f(), node.g);
        let state = node.state.clone();
        let id = self.arena.push(node);
        if let Some(&(_, old)) = self.closed.get(&state) {
            self.kill(old);
        }
        self.closed.insert(state, (g, id));
        self.extra.push(Extra {
            d_hat,
            f_hat,
            open: true,
            in_focal: false,
        });
        self.fhat.push(keyed(f_hat, f, id));
        self.cleanup.push(keyed(f, f_hat, id));
        self.pending.push(keyed(f_hat, d_hat, id));
    }

    /// Pops dead entries off the top of a heap.
    fn settle(&mut self, which: Heap) {
        loop {
            let top = match self.heap(which).peek() {
                Some(e) => e.id,
                None => return,
            };
            let stale = match which {
                Heap::Focal => !self.extra[top.index()].in_focal,
                Heap::Pending => self.extra[top.index()].in_focal,
                _ => false,
            };
            if self.live(top) && !stale {
                return;
            }
            self.heap_mut(which).pop();
        }
    }

    fn heap(&self, which: Heap) -> &OpenQueue {
        match which {
            Heap::Fhat => &self.fhat,
            Heap::Focal => &self.focal,
            Heap::Pending => &self.pending,
            Heap::Cleanup => &self.cleanup,
        }
    }

    fn heap_mut(&mut self, which: Heap) -> &mut OpenQueue {
        match which {
            Heap::Fhat => &mut self.fhat,
            Heap::Focal => &mut self.focal,
            Heap::Pending => &mut self.pending,
            Heap::Cleanup => &mut self.cleanup,
        }
    }

    /// Brings focal in line with `threshold`: pending nodes below it move in,
    /// and focal's top moves out while it is at or above it.
    fn sync_focal(&mut self, threshold: Cost) {
        loop {
            self.settle(Heap::Pending);
            match self.pending.peek() {
                Some(e) if e.primary < threshold => {
                    let e = self.pending.pop().expect("peeked");
                    let x = &mut self.extra[e.id.index()];
                    x.in_focal = true;
                    let d_hat = x.d_hat;
                    self.focal.push(keyed(d_hat, e.primary, e.id));
                }
                _ => break,
            }
        }
        loop {
            self.settle(Heap::Focal);
            match self.focal.peek() {
                Some(e) if e.f >= threshold => {
                    let e = self.focal.pop().expect("peeked");
                    let x = &mut self.extra[e.id.index()];
                    x.in_focal = false;
                    let f_hat = x.f_hat;
                    self.pending.push(keyed(f_hat, x.d_hat, e.id));
                }
                _ => break,
            }
        }
    }

    /// Picks the next node to expand, or `None` when no open node has
    /// `f` below the incumbent.
    fn select(&mut self) -> Option<NodeId> {
        self.settle(Heap::Cleanup);
        let f_min = self.cleanup.peek()?.primary;
        if self.cfg.record_f_min && self.f_min_history.last() != Some(&f_min) {
            self.f_min_history.push(f_min);
        }
        self.settle(Heap::Fhat);
        let best_fhat = self.fhat.peek().map_or(Cost::INFINITY, |e| e.primary);
        let inc = self.incumbent.cost;
        let w = if inc.is_finite() {
            inc / f_min
        } else {
            Cost::INFINITY
        };
        let threshold = if w.is_finite() {
            w * best_fhat
        } else {
            Cost::INFINITY
        };
        self.sync_focal(threshold);

        let chosen = match self.focal.peek() {
            Some(e) if cost_le(e.f, inc) => e.id,
            _ => match self.fhat.peek() {
                Some(e) if cost_le(e.primary, inc) => e.id,
                _ => self.cleanup.peek().expect("settled non-empty").id,
            },
        };
        self.kill(chosen);
        Some(chosen)
    }

    fn expand(&mut self, id: NodeId) -> Flow {
        self.monitor.begin_expansion(self.arena.len())?;
        let parent = self.arena.get(id);
        let (ph, pd, pg) = (parent.h, parent.d, parent.g);
        expand(self.domain, parent, id, &mut self.scratch, &mut self.kids);
        self.monitor.add_generated(self.kids.len());
        let mut kids = std::mem::take(&mut self.kids);

        let best = kids.iter().min_by(|a, b| {
            let fa = self.model.f_hat(a.g, a.h, a.d);
            let fb = self.model.f_hat(b.g, b.h, b.d);
            fa.total_cmp(&fb).then(a.d.total_cmp(&b.d))
        });
        if let Some(b) = best {
            self.model.observe(ph, pd, b.h, b.d, b.g - pg);
        }

        for child in kids.drain(..) {
            if !cost_lt(child.f(), self.incumbent.cost) {
                continue;
            }
            if self.domain.is_goal(&child.state) {
                self.incumbent.offer(&child, &mut self.monitor);
                continue;
            }
            if self
                .closed
                .get(&child.state)
                .is_some_and(|&(g, _)| cost_le(g, child.g))
            {
                continue;
            }
            self.insert(child);
        }
        self.kids = kids;
        Ok(())
    }

    fn run(&mut self) -> Result<(), Stop> {
        let root = Node::root(self.domain);
        if self.domain.is_goal(&root.state) {
            self.incumbent.offer(&root, &mut self.monitor);
            return Ok(());
        }
        self.insert(root);
        while let Some(id) = self.select() {
            self.expand(id)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
enum Heap {
    Fhat,
    Focal,
    Pending,
    Cleanup,
}

/// Runs AEES until no open node has `f` below the incumbent cost.
pub fn aees<D: SearchDomain>(domain: &D, cfg: &AeesConfig) -> AeesRun<D::Action> {
    let mut a = Aees::new(domain, cfg);
    let status = match a.run() {
        Ok(()) => TerminalStatus::Exhausted,
        Err(Stop(s)) => s,
    };
    AeesRun {
        result: SearchResult {
            solution: a.incumbent.solution(&a.arena),
            trace: a.monitor.finish(status),
        },
        f_min_history: a.f_min_history,
        error_model: a.model,
    }
}
