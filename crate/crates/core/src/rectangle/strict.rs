//! Strict rectangle: rectangle search with monobead's slot discipline.
//!
//! Each level keeps numbered slots. Stepping a level takes its next slot,
//! expands the node in it (if any), and immediately fills the same slot one
//! level down from that level's candidate queue. A level with no parent
//! level left fills its slots lazily from its own queue.
//!
//! Empty levels past the deepest live one are not stored. Their slot
//! counters follow from the iteration geometry alone, so a level that gets
//! nodes again is rebuilt with the counter it would have had, and the slots
//! its parent already stepped past are vacant.

use std::collections::VecDeque;

use super::RectangleConfig;
use crate::search::{
    cost_lt, expand, node_bytes_estimate, Flow, Incumbent, Monitor, Node, NodeArena, NodeId,
    OpenQueue, SearchDomain, SearchResult, SlotTable, Stop, Successor, TerminalStatus,
};

/// One expansion in slot order. Slots are 1-based; `parent_slot` is the
/// slot the node was generated from (0 for the root).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SlotRecord<S> {
    pub depth: u32,
    pub slot: u32,
    pub parent_slot: u32,
    pub state: S,
}

#[derive(Clone, Debug)]
pub struct StrictRun<S, A> {
    pub result: SearchResult<A>,
    pub iterations: u64,
    /// Expansions in order, when `record_expansions` is set.
    pub slot_log: Vec<SlotRecord<S>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Slot {
    Undecided,
    Vacant,
    Filled(NodeId),
}

#[derive(Debug)]
struct Level {
    depth: u32,
    queue: OpenQueue,
    /// Slots from `next_slot` on; earlier ones have been stepped.
    slots: VecDeque<Slot>,
    next_slot: usize,
    /// Filled slots not yet stepped.
    pending: usize,
}

impl Level {
    fn new(depth: u32) -> Self {
        Level {
            depth,
            queue: OpenQueue::new(),
            slots: VecDeque::new(),
            next_slot: 0,
            pending: 0,
        }
    }

    fn live(&self) -> bool {
        !self.queue.is_empty() || self.pending > 0
    }
}

struct Strict<'a, D: SearchDomain> {
    domain: &'a D,
    cfg: &'a RectangleConfig,
    arena: NodeArena<D::State, D::Action>,
    /// Slot of the parent that generated each node; the root has 0.
    provenance: Vec<u32>,
    seen: SlotTable<D::State>,
    levels: VecDeque<Level>,
    /// Label of the deepest opened level, stored or not.
    deepest: u32,
    incumbent: Incumbent<D::State, D::Action>,
    monitor: Monitor,
    scratch: Vec<Successor<D::State, D::Action>>,
    kids: Vec<Node<D::State, D::Action>>,
    log: Vec<SlotRecord<D::State>>,
    iterations: u64,
}

impl<'a, D: SearchDomain> Strict<'a, D> {
    fn new(domain: &'a D, cfg: &'a RectangleConfig) -> Self {
        let node_bytes = node_bytes_estimate::<D::State, D::Action>(domain.state_heap_bytes()) + 16;
        Strict {
            domain,
            cfg,
            arena: NodeArena::new(),
            provenance: Vec::new(),
            seen: SlotTable::new(),
            levels: VecDeque::new(),
            deepest: 0,
            incumbent: Incumbent::none(),
            monitor: Monitor::new(cfg.limits, node_bytes),
            scratch: Vec::new(),
            kids: Vec::new(),
            log: Vec::new(),
            iterations: 0,
        }
    }

    fn superseded(&self, id: NodeId) -> bool {
        let node = self.arena.get(id);
        self.seen
            .superseded(&node.state, self.provenance[id.index()], node.g)
    }

    fn push_node(&mut self, node: Node<D::State, D::Action>, slot: u32) -> NodeId {
        let id = self.arena.push(node);
        self.provenance.push(slot);
        id
    }

    /// Expands `id`, which occupies `slot` (1-based), into level `target`.
    fn expand_into(&mut self, id: NodeId, slot: u32, target: usize) -> Flow {
        self.monitor.begin_expansion(self.arena.len())?;
        let node = self.arena.get(id);
        if self.cfg.record_expansions {
            self.log.push(SlotRecord {
                depth: node.depth,
                slot,
                parent_slot: self.provenance[id.index()],
                state: node.state.clone(),
            });
        }
        expand(self.domain, node, id, &mut self.scratch, &mut self.kids);
        self.monitor.add_generated(self.kids.len());
        let mut kids = std::mem::take(&mut self.kids);
        for child in kids.drain(..) {
            if !cost_lt(child.f(), self.incumbent.cost) {
                continue;
            }
            if self.domain.is_goal(&child.state) {
                self.incumbent.offer(&child, &mut self.monitor);
                continue;
            }
            if !self.seen.admit(&child.state, slot, child.g) {
                continue;
            }
            let cid = self.push_node(child, slot);
            let entry = self.cfg.ordering.entry(self.arena.get(cid), cid);
            if target == self.levels.len() {
                self.restore_level(slot as usize - 1);
            }
            self.levels[target].queue.push(entry);
        }
        self.kids = kids;
        Ok(())
    }

    /// Pops the best live candidate at level `j`.
    fn select(&mut self, j: usize) -> Slot {
        while let Some(e) = self.levels[j].queue.pop() {
            if cost_lt(self.arena.get(e.id).f(), self.incumbent.cost) && !self.superseded(e.id) {
                return Slot::Filled(e.id);
            }
        }
        Slot::Vacant
    }

    fn decide(&mut self, j: usize, i: usize) {
        // With aspect > 1 a level can run ahead of its parent.
        let Some(k) = i.checked_sub(self.levels[j].next_slot) else {
            return;
        };
        if self.levels[j].slots.len() <= k {
            self.levels[j].slots.resize(k + 1, Slot::Undecided);
        }
        if self.levels[j].slots[k] == Slot::Undecided {
            let s = self.select(j);
            if matches!(s, Slot::Filled(_)) {
                self.levels[j].pending += 1;
            }
            self.levels[j].slots[k] = s;
        }
    }

    /// Expands the next slot of level `j` and fills that slot at `j + 1`.
    fn step(&mut self, j: usize) -> Flow {
        let i = self.levels[j].next_slot;
        self.decide(j, i);
        let slot = self.levels[j].slots.pop_front();
        self.levels[j].next_slot += 1;
        let slot_no = u32::try_from(i + 1).expect("slot index overflow");
        if let Some(Slot::Filled(id)) = slot {
            self.levels[j].pending -= 1;
            let live = cost_lt(self.arena.get(id).f(), self.incumbent.cost) && !self.superseded(id);
            if live {
                self.expand_into(id, slot_no, j + 1)?;
            }
        }
        if j + 1 < self.levels.len() {
            self.decide(j + 1, i);
        }
        Ok(())
    }

    fn start(&mut self) -> Result<bool, Stop> {
        let root = Node::root(self.domain);
        if self.domain.is_goal(&root.state) {
            self.incumbent.offer(&root, &mut self.monitor);
            return Ok(false);
        }
        self.seen.admit(&root.state, 0, 0.0);
        let root = self.push_node(root, 0);
        self.deepest = 1;
        self.expand_into(root, 1, 0)?;
        Ok(true)
    }

    /// Slots stepped at level `depth` before the current iteration.
    fn steps_before(&self, depth: u32) -> usize {
        let a = u64::from(self.cfg.aspect);
        let done = self.iterations.saturating_sub(1);
        // Iteration in which `depth` first takes the extra expansions.
        let m = u64::from(depth - 1) / a + 1;
        if m > done {
            0
        } else {
            (1 + (m - 1) * a + (done - m)) as usize
        }
    }

    /// Stores the level below the deepest stored one. Its parent is
    /// stepping slot `i`, so earlier slots back to the level's own counter
    /// were decided while it was empty.
    fn restore_level(&mut self, i: usize) {
        let depth = self.levels.back().map_or(1, |l| l.depth + 1);
        debug_assert!(depth <= self.deepest);
        let mut level = Level::new(depth);
        level.next_slot = self.steps_before(depth);
        level
            .slots
            .resize(i.saturating_sub(level.next_slot), Slot::Vacant);
        self.levels.push_back(level);
    }

    fn index_of(&self, depth: u32) -> Option<usize> {
        let first = self.levels.front()?.depth;
        let i = depth.checked_sub(first)? as usize;
        (i < self.levels.len()).then_some(i)
    }

    fn dead_from(&self, j: usize) -> bool {
        self.levels.range(j..).all(|l| !l.live())
    }

    fn trim(&mut self) {
        while self.levels.front().is_some_and(|l| !l.live()) {
            self.levels.pop_front();
        }
        while self.levels.back().is_some_and(|l| !l.live()) {
            self.levels.pop_back();
        }
    }

    fn main_loop(&mut self) -> Flow {
        if !self.start()? {
            return Ok(());
        }
        let aspect = self.cfg.aspect as usize;
        let mut depth: u64 = 1;
        while self.levels.iter().any(Level::live) {
            if self
                .cfg
                .max_iterations
                .is_some_and(|m| self.iterations >= m)
            {
                return Err(Stop(TerminalStatus::IterationLimit));
            }
            self.iterations += 1;
            let deepest = self.deepest;
            let mut j = 0;
            while j < self.levels.len() && self.levels[j].depth < deepest {
                self.step(j)?;
                j += 1;
            }
            self.deepest += aspect as u32;
            'block: for label in deepest..deepest + aspect as u32 {
                let Some(j) = self.index_of(label) else {
                    break;
                };
                for _ in 0..depth {
                    if self.dead_from(j) {
                        break 'block;
                    }
                    self.step(j)?;
                }
            }
            depth += aspect as u64;
            self.trim();
        }
        Ok(())
    }
}

/// Runs strict rectangle search. Exhaustion semantics match
/// [`super::rectangle_search`].
pub fn strict_rectangle_search<D: SearchDomain>(
    domain: &D,
    cfg: &RectangleConfig,
) -> StrictRun<D::State, D::Action> {
    let mut s = Strict::new(domain, cfg);
    let status = match s.main_loop() {
        Ok(()) => TerminalStatus::Exhausted,
        Err(Stop(st)) => st,
    };
    let solution = s.incumbent.solution(&s.arena);
    StrictRun {
        result: SearchResult {
            trace: s.monitor.finish(status),
            solution,
        },
        iterations: s.iterations,
        slot_log: s.log,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::tree::TreeDomain;

    fn logged(aspect: u32) -> RectangleConfig {
        let mut cfg = RectangleConfig::new(aspect);
        cfg.record_expansions = true;
        cfg
    }

    #[test]
    fn uniform_tree_fills_slots_in_order() {
        let dom = TreeDomain::uniform(3, 4);
        let mut cfg = logged(1);
        cfg.max_iterations = Some(3);
        let run = strict_rectangle_search(&dom, &cfg);
        let keys: Vec<(u32, u32)> = run.slot_log.iter().map(|r| (r.depth, r.slot)).collect();
        assert_eq!(
            keys,
            vec![
                (0, 1),
                (1, 1),
                (1, 2),
                (2, 1),
                (2, 2),
                (1, 3),
                (2, 3),
                (3, 1),
                (3, 2),
                (3, 3)
            ]
        );
    }

    #[test]
    fn exhausts_uniform_tree() {
        let run = strict_rectangle_search(&TreeDomain::uniform(2, 3), &logged(1));
        assert_eq!(run.result.trace.status, TerminalStatus::Exhausted);
        assert_eq!(run.result.trace.total_expansions, 15);
        let mut states: Vec<u32> = run.slot_log.iter().map(|r| r.state).collect();
        states.sort_unstable();
        states.dedup();
        assert_eq!(states.len(), 15);
    }

    #[test]
    fn wide_aspect_exhausts_random_trees() {
        use crate::domains::tree::RandomTreeSpec;
        use rand::SeedableRng;

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let spec = RandomTreeSpec {
            max_branching: 3,
            max_depth: 10,
            goal_prob: 0.0,
            cost_range: (1, 3),
        };
        for aspect in [2, 3, 7] {
            for _ in 0..10 {
                let dom = TreeDomain::random(&mut rng, spec);
                let run = strict_rectangle_search(&dom, &logged(aspect));
                assert_eq!(run.result.trace.status, TerminalStatus::Exhausted);
                assert_eq!(run.result.trace.total_expansions as usize, dom.len());
            }
        }
    }

    #[test]
    fn later_slot_duplicate_survives() {
        #[derive(Debug)]
        struct Shared;
        // r -> a, b; both a and b lead to x with equal g.
        impl SearchDomain for Shared {
            type State = char;
            type Action = char;
            fn initial_state(&self) -> char {
                'r'
            }
            fn successors(&self, s: &char, out: &mut Vec<Successor<char, char>>) {
                let t: &[char] = match s {
                    'r' => &['a', 'b'],
                    'a' | 'b' => &['x'],
                    _ => &[],
                };
                out.extend(t.iter().map(|&c| Successor {
                    state: c,
                    action: c,
                    cost: 1.0,
                }));
            }
            fn is_goal(&self, _: &char) -> bool {
                false
            }
            fn h(&self, _: &char) -> f64 {
                0.0
            }
            fn d(&self, s: &char) -> f64 {
                if *s == 'b' {
                    2.0
                } else {
                    1.0
                }
            }
        }
        let cfg = logged(1);
        // a (slot 1) generates x first, so b's copy from slot 2 is dropped.
        let run = strict_rectangle_search(&Shared, &cfg);
        assert_eq!(run.slot_log.iter().filter(|r| r.state == 'x').count(), 1);
    }

    #[test]
    fn slot_columns_match_monobead() {
        use crate::beam::monobead_search;
        use crate::domains::tree::RandomTreeSpec;
        use crate::search::{Limits, NodeOrder};
        use rand::SeedableRng;

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let spec = RandomTreeSpec {
            max_branching: 4,
            max_depth: 9,
            goal_prob: 0.0,
            cost_range: (1, 4),
        };
        for _ in 0..20 {
            let dom = TreeDomain::random(&mut rng, spec);
            let strict = strict_rectangle_search(&dom, &logged(1));
            for width in 1..=6u32 {
                let mono = monobead_search(&dom, width as usize, NodeOrder::D, Limits::unbounded());
                let mut a: Vec<_> = strict
                    .slot_log
                    .iter()
                    .filter(|r| r.slot <= width)
                    .cloned()
                    .collect();
                let mut b = mono.slot_log.clone();
                a.sort_by_key(|r| (r.depth, r.slot));
                b.sort_by_key(|r| (r.depth, r.slot));
                assert_eq!(a, b, "width {width}");
            }
        }
    }
}
