use std::hash::Hash;

use super::domain::{cost_le, cost_lt, Cost};
use super::FastMap;

/// Duplicate table for slot-disciplined searches. A copy of a state
/// generated from slot `i` with cost `g` is a duplicate only when a copy
/// from slot `<= i` with cost `<= g` was seen before.
#[derive(Debug)]
pub struct SlotTable<S> {
    seen: FastMap<S, Vec<(u32, Cost)>>,
}

impl<S> Default for SlotTable<S> {
    fn default() -> Self {
        SlotTable {
            seen: FastMap::default(),
        }
    }
}

impl<S: Hash + Eq + Clone> SlotTable<S> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records the copy unless it is dominated. Returns whether it was new.
    pub fn admit(&mut self, state: &S, slot: u32, g: Cost) -> bool {
        match self.seen.get_mut(state) {
            Some(copies) => {
                if copies.iter().any(|&(s, og)| s <= slot && cost_le(og, g)) {
                    return false;
                }
                copies.retain(|&(s, og)| !(s >= slot && cost_le(g, og)));
                copies.push((slot, g));
                true
            }
            None => {
                self.seen.insert(state.clone(), vec![(slot, g)]);
                true
            }
        }
    }

    /// Whether a strictly cheaper copy from slot `<= slot` has been admitted.
    pub fn superseded(&self, state: &S, slot: u32, g: Cost) -> bool {
        self.seen
            .get(state)
            .is_some_and(|copies| copies.iter().any(|&(s, og)| s <= slot && cost_lt(og, g)))
    }

    pub fn copies(&self, state: &S) -> &[(u32, Cost)] {
        self.seen.get(state).map_or(&[], Vec::as_slice)
    }
}
