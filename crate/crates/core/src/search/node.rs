use std::fmt;

use super::domain::{Cost, SearchDomain, Successor};

/// Index of a node in a [`NodeArena`]. Ids are handed out in insertion order,
/// so they double as the global insertion counter used for tie-breaking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A search node. `f` is always derived as `g + h`.
#[derive(Clone, Debug)]
pub struct Node<S, A> {
    pub state: S,
    /// Action that generated this node; `None` for the root.
    pub action: Option<A>,
    pub parent: Option<NodeId>,
    pub g: Cost,
    pub h: Cost,
    pub d: f64,
    /// Root is depth 0.
    pub depth: u32,
    /// Insertion sequence number, assigned when the node enters an arena.
    /// Unplaced children carry `u32::MAX`.
    pub seq: u32,
}

impl<S, A> Node<S, A> {
    #[inline]
    pub fn f(&self) -> Cost {
        self.g + self.h
    }
}

impl<S: Clone, A> Node<S, A> {
    pub fn root<D>(domain: &D) -> Self
    where
        D: SearchDomain<State = S, Action = A>,
    {
        let state = domain.initial_state();
        Node {
            h: domain.h(&state),
            d: domain.d(&state),
            state,
            action: None,
            parent: None,
            g: 0.0,
            depth: 0,
            seq: u32::MAX,
        }
    }
}

/// Generates the children of `parent` (stored at `parent_id`) in the domain's
/// canonical successor order. `scratch` is reused between calls.
pub fn expand<D: SearchDomain>(
    domain: &D,
    parent: &Node<D::State, D::Action>,
    parent_id: NodeId,
    scratch: &mut Vec<Successor<D::State, D::Action>>,
    out: &mut Vec<Node<D::State, D::Action>>,
) {
    scratch.clear();
    out.clear();
    domain.successors(&parent.state, scratch);
    out.extend(scratch.drain(..).map(|succ| {
        debug_assert!(succ.cost > 0.0, "non-positive edge cost {}", succ.cost);
        let (h, d) = domain.child_estimates(&parent.state, parent.h, parent.d, &succ.state);
        Node {
            h,
            d,
            state: succ.state,
            action: Some(succ.action),
            parent: Some(parent_id),
            g: parent.g + succ.cost,
            depth: parent.depth + 1,
            seq: u32::MAX,
        }
    }));
}

/// A reconstructed root-to-node plan.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution<A> {
    pub actions: Vec<A>,
    pub cost: Cost,
}

/// Append-only node storage with parent links.
#[derive(Debug)]
pub struct NodeArena<S, A> {
    nodes: Vec<Node<S, A>>,
}

impl<S, A> Default for NodeArena<S, A> {
    fn default() -> Self {
        NodeArena { nodes: Vec::new() }
    }
}

impl<S, A: Clone> NodeArena<S, A> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, mut node: Node<S, A>) -> NodeId {
        let id = NodeId(u32::try_from(self.nodes.len()).expect("node arena exceeded u32 ids"));
        node.seq = id.0;
        self.nodes.push(node);
        id
    }

    #[inline]
    pub fn get(&self, id: NodeId) -> &Node<S, A> {
        &self.nodes[id.index()]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Actions in root-to-node order; the cost is `g` of the node.
    pub fn reconstruct_path(&self, id: NodeId) -> Solution<A> {
        let mut actions = Vec::with_capacity(self.get(id).depth as usize);
        let mut cur = Some(id);
        while let Some(c) = cur {
            let node = self.get(c);
            if let Some(a) = &node.action {
                actions.push(a.clone());
            }
            cur = node.parent;
        }
        actions.reverse();
        Solution {
            actions,
            cost: self.get(id).g,
        }
    }

    /// Path for a node that has not been placed in the arena (e.g. a goal
    /// detected at generation time).
    pub fn reconstruct_detached(&self, node: &Node<S, A>) -> Solution<A> {
        let mut sol = match node.parent {
            Some(p) => self.reconstruct_path(p),
            None => Solution {
                actions: Vec::new(),
                cost: 0.0,
            },
        };
        if let Some(a) = &node.action {
            sol.actions.push(a.clone());
        }
        sol.cost = node.g;
        sol
    }
}
