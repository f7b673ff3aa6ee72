//! Brute-force optimality oracle: uniform-cost search with full duplicate
//! detection. Uses only the domain's transition function; none of the node,
//! queue or closed-table code of the search crate.

use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use rectsearch::{Cost, SearchDomain};

use crate::HarnessError;

/// Largest state space the oracle agrees to enumerate.
pub const ORACLE_MAX_STATES: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Open {
    g: Cost,
    idx: usize,
}

impl Eq for Open {}

impl Ord for Open {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed for a min-heap; index breaks ties.
        other
            .g
            .total_cmp(&self.g)
            .then_with(|| other.idx.cmp(&self.idx))
    }
}

impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn refuse(limit: usize) -> HarnessError {
    HarnessError::Oracle(format!(
        "state space exceeds {limit} states; refusing to approximate"
    ))
}

/// Optimal cost from `start` to a goal, `None` if no goal is reachable.
/// Fails rather than guessing once more than `max_states` states are seen.
pub fn optimal_cost_from<D: SearchDomain>(
    domain: &D,
    start: D::State,
    max_states: usize,
) -> Result<Option<Cost>, HarnessError> {
    let mut index: HashMap<D::State, usize> = HashMap::new();
    let mut states: Vec<D::State> = Vec::new();
    let mut dist: Vec<Cost> = Vec::new();
    let mut done: Vec<bool> = Vec::new();
    let mut heap = BinaryHeap::new();
    index.insert(start.clone(), 0);
    states.push(start);
    dist.push(0.0);
    done.push(false);
    heap.push(Open { g: 0.0, idx: 0 });
    let mut succ = Vec::new();
    while let Some(Open { g, idx }) = heap.pop() {
        if done[idx] || g > dist[idx] {
            continue;
        }
        done[idx] = true;
        if domain.is_goal(&states[idx]) {
            return Ok(Some(g));
        }
        succ.clear();
        domain.successors(&states[idx], &mut succ);
        for s in succ.drain(..) {
            let ng = g + s.cost;
            match index.entry(s.state) {
                Entry::Occupied(e) => {
                    let j = *e.get();
                    if !done[j] && ng < dist[j] {
                        dist[j] = ng;
                        heap.push(Open { g: ng, idx: j });
                    }
                }
                Entry::Vacant(e) => {
                    if states.len() >= max_states {
                        return Err(refuse(max_states));
                    }
                    let j = states.len();
                    states.push(e.key().clone());
                    e.insert(j);
                    dist.push(ng);
                    done.push(false);
                    heap.push(Open { g: ng, idx: j });
                }
            }
        }
    }
    Ok(None)
}

/// Optimal solution cost of the domain's instance.
pub fn oracle_optimal<D: SearchDomain>(domain: &D) -> Result<Option<Cost>, HarnessError> {
    optimal_cost_from(domain, domain.initial_state(), ORACLE_MAX_STATES)
}

/// Fewest actions from `start` to a goal (breadth-first).
pub fn min_actions_from<D: SearchDomain>(
    domain: &D,
    start: D::State,
    max_states: usize,
) -> Result<Option<u64>, HarnessError> {
    let mut seen: HashMap<D::State, u64> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone(), 0);
    queue.push_back(start);
    let mut succ = Vec::new();
    while let Some(s) = queue.pop_front() {
        let depth = seen[&s];
        if domain.is_goal(&s) {
            return Ok(Some(depth));
        }
        succ.clear();
        domain.successors(&s, &mut succ);
        for x in succ.drain(..) {
            if !seen.contains_key(&x.state) {
                if seen.len() >= max_states {
                    return Err(refuse(max_states));
                }
                seen.insert(x.state.clone(), depth + 1);
                queue.push_back(x.state);
            }
        }
    }
    Ok(None)
}
