use std::fmt::Debug;
use std::hash::Hash;

/// Path and edge costs. Integral cost models are exact in `f64`; fractional
/// ones (inverse, sqrt, octile) are compared with [`COST_EPSILON`] slack.
pub type Cost = f64;

/// Absolute slack used by every cost comparison in the crate.
pub const COST_EPSILON: Cost = 1e-12;

/// `a < b` with [`COST_EPSILON`] slack. Anything finite is below infinity.
#[inline]
pub fn cost_lt(a: Cost, b: Cost) -> bool {
    a < b - COST_EPSILON
}

/// `a <= b` with [`COST_EPSILON`] slack.
#[inline]
pub fn cost_le(a: Cost, b: Cost) -> bool {
    a <= b + COST_EPSILON
}

/// One generated transition.
#[derive(Clone, Debug, PartialEq)]
pub struct Successor<S, A> {
    pub state: S,
    pub action: A,
    pub cost: Cost,
}

/// An immutable problem model.
///
/// The state itself is its own duplicate-detection key: two states compare
/// equal exactly when they denote the same search state, so `Hash + Eq` on
/// `State` is the canonical identity used by every closed table.
///
/// Implementations must report `h = 0` and `d = 0` on goals and generate only
/// strictly positive edge costs.
pub trait SearchDomain {
    type State: Clone + Eq + Hash + Debug;
    type Action: Clone + PartialEq + Debug;

    fn initial_state(&self) -> Self::State;

    /// Appends the successors of `state` to `out` in the domain's canonical order.
    fn successors(&self, state: &Self::State, out: &mut Vec<Successor<Self::State, Self::Action>>);

    fn is_goal(&self, state: &Self::State) -> bool;

    /// Admissible estimate of the remaining cost.
    fn h(&self, state: &Self::State) -> Cost;

    /// Estimated number of actions remaining along a cheapest path.
    fn d(&self, state: &Self::State) -> f64;

    /// `(h, d)` of `child`, a successor of `parent` whose estimates are
    /// `parent_h` and `parent_d`. Domains that can update the parent's
    /// values incrementally override this; the result must match
    /// `(h(child), d(child))` up to floating-point rounding.
    fn child_estimates(
        &self,
        parent: &Self::State,
        parent_h: Cost,
        parent_d: f64,
        child: &Self::State,
    ) -> (Cost, f64) {
        let _ = (parent, parent_h, parent_d);
        (self.h(child), self.d(child))
    }

    /// Transition function used for plan replay. The default scans the
    /// successor list for the first matching action label.
    fn apply(&self, state: &Self::State, action: &Self::Action) -> Option<(Self::State, Cost)> {
        let mut out = Vec::new();
        self.successors(state, &mut out);
        out.into_iter()
            .find(|s| &s.action == action)
            .map(|s| (s.state, s.cost))
    }

    /// Approximate heap bytes owned by one state, for memory accounting.
    fn state_heap_bytes(&self) -> usize {
        0
    }
}

/// Replays `actions` from the initial state. Returns the final state and the
/// accumulated cost, or `None` if some action is not applicable.
pub fn replay<D: SearchDomain>(domain: &D, actions: &[D::Action]) -> Option<(D::State, Cost)> {
    let mut state = domain.initial_state();
    let mut cost = 0.0;
    for action in actions {
        let (next, c) = domain.apply(&state, action)?;
        state = next;
        cost += c;
    }
    Some((state, cost))
}

/// A domain viewed from a different start state. Used by audits that need
/// cost-to-go from arbitrary states.
#[derive(Debug)]
pub struct Restarted<'a, D: SearchDomain> {
    pub inner: &'a D,
    pub start: D::State,
}

impl<'a, D: SearchDomain> Restarted<'a, D> {
    pub fn new(inner: &'a D, start: D::State) -> Self {
        Restarted { inner, start }
    }
}

impl<D: SearchDomain> SearchDomain for Restarted<'_, D> {
    type State = D::State;
    type Action = D::Action;

    fn initial_state(&self) -> Self::State {
        self.start.clone()
    }
    fn successors(&self, state: &Self::State, out: &mut Vec<Successor<Self::State, Self::Action>>) {
        self.inner.successors(state, out)
    }
    fn is_goal(&self, state: &Self::State) -> bool {
        self.inner.is_goal(state)
    }
    fn h(&self, state: &Self::State) -> Cost {
        self.inner.h(state)
    }
    fn d(&self, state: &Self::State) -> f64 {
        self.inner.d(state)
    }
    fn child_estimates(
        &self,
        parent: &Self::State,
        parent_h: Cost,
        parent_d: f64,
        child: &Self::State,
    ) -> (Cost, f64) {
        self.inner
            .child_estimates(parent, parent_h, parent_d, child)
    }
    fn apply(&self, state: &Self::State, action: &Self::Action) -> Option<(Self::State, Cost)> {
        self.inner.apply(state, action)
    }
    fn state_heap_bytes(&self) -> usize {
        self.inner.state_heap_bytes()
    }
}
