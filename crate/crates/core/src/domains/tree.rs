//! Explicit trees with hand-assigned estimates. Used to construct the
//! adversarial and synthetic cases that exercise search-order properties.

use rand::Rng;

use crate::search::{Cost, SearchDomain, Successor};

#[derive(Clone, Debug)]
struct TreeNode {
    children: Vec<u32>,
    edge_cost: Cost,
    h: Cost,
    d: f64,
    goal: bool,
}

/// A finite rooted tree. States are node indices; the root is `0`. The
/// action label of an edge is the index of the child it leads to.
#[derive(Clone, Debug)]
pub struct TreeDomain {
    nodes: Vec<TreeNode>,
}

/// Incremental constructor for [`TreeDomain`].
#[derive(Clone, Debug)]
pub struct TreeBuilder {
    nodes: Vec<TreeNode>,
}

impl TreeBuilder {
    /// A tree holding only a non-goal root with `h = 0` and the given `d`.
    pub fn new(root_d: f64) -> Self {
        TreeBuilder {
            nodes: vec![TreeNode {
                children: Vec::new(),
                edge_cost: 0.0,
                h: 0.0,
                d: root_d,
                goal: false,
            }],
        }
    }

    pub fn root(&self) -> u32 {
        0
    }

    /// Appends a child under `parent` and returns its index.
    pub fn child(&mut self, parent: u32, cost: Cost, h: Cost, d: f64, goal: bool) -> u32 {
        assert!(cost > 0.0, "edge costs must be positive");
        let id = self.nodes.len() as u32;
        let (h, d) = if goal { (0.0, 0.0) } else { (h, d) };
        self.nodes.push(TreeNode {
            children: Vec::new(),
            edge_cost: cost,
            h,
            d,
            goal,
        });
        self.nodes[parent as usize].children.push(id);
        id
    }

    pub fn set_estimates(&mut self, node: u32, h: Cost, d: f64) {
        let n = &mut self.nodes[node as usize];
        n.h = h;
        n.d = d;
    }

    pub fn set_goal(&mut self, node: u32) {
        let n = &mut self.nodes[node as usize];
        n.goal = true;
        n.h = 0.0;
        n.d = 0.0;
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn build(self) -> TreeDomain {
        TreeDomain { nodes: self.nodes }
    }
}

/// Parameters for [`TreeDomain::random`].
#[derive(Clone, Copy, Debug)]
pub struct RandomTreeSpec {
    pub max_branching: u32,
    pub max_depth: u32,
    /// Probability that a non-root node is a goal leaf.
    pub goal_prob: f64,
    /// Inclusive range of integer edge costs.
    pub cost_range: (u32, u32),
}

impl TreeDomain {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn children(&self, node: u32) -> &[u32] {
        &self.nodes[node as usize].children
    }

    /// Random tree: each non-goal node above `max_depth` gets
    /// `0..=max_branching` children, with random distance-to-go values and
    /// `h = 0` (trivially admissible). The root always has at least one child.
    pub fn random<R: Rng>(rng: &mut R, spec: RandomTreeSpec) -> TreeDomain {
        let mut b = TreeBuilder::new(spec.max_depth as f64);
        let mut frontier = vec![(b.root(), 0u32)];
        while let Some((node, depth)) = frontier.pop() {
            if depth >= spec.max_depth {
                continue;
            }
            let lo = u32::from(node == 0);
            let n = rng.gen_range(lo..=spec.max_branching);
            for _ in 0..n {
                let goal = rng.gen_bool(spec.goal_prob);
                let cost = rng.gen_range(spec.cost_range.0..=spec.cost_range.1) as Cost;
                let d = rng.gen_range(1..=2 * spec.max_depth) as f64;
                let c = b.child(node, cost, 0.0, d, goal);
                if !goal {
                    frontier.push((c, depth + 1));
                }
            }
        }
        b.build()
    }

    /// Uniform tree of the given branching factor and depth with no goals.
    /// Child `i` of a node has `d = i + 1`.
    pub fn uniform(branching: u32, depth: u32) -> TreeDomain {
        let mut b = TreeBuilder::new(depth as f64);
        let mut layer = vec![b.root()];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(layer.len() * branching as usize);
            for &n in &layer {
                for i in 0..branching {
                    next.push(b.child(n, 1.0, 0.0, (i + 1) as f64, false));
                }
            }
            layer = next;
        }
        b.build()
    }
}

impl SearchDomain for TreeDomain {
    type State = u32;
    type Action = u32;

    fn initial_state(&self) -> u32 {
        0
    }

    fn successors(&self, state: &u32, out: &mut Vec<Successor<u32, u32>>) {
        for &c in &self.nodes[*state as usize].children {
            out.push(Successor {
                state: c,
                action: c,
                cost: self.nodes[c as usize].edge_cost,
            });
        }
    }

    fn is_goal(&self, state: &u32) -> bool {
        self.nodes[*state as usize].goal
    }

    fn h(&self, state: &u32) -> Cost {
        self.nodes[*state as usize].h
    }

    fn d(&self, state: &u32) -> f64 {
        self.nodes[*state as usize].d
    }
}
