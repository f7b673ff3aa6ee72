use crate::rectangle::SlotRecord;
use crate::search::{
    expand, node_bytes_estimate, Incumbent, Limits, Monitor, Node, NodeArena, NodeId, NodeOrder,
    OpenQueue, SearchDomain, SearchResult, SlotTable, Stop, TerminalStatus,
};

#[derive(Clone, Debug)]
pub struct MonobeadRun<S, A> {
    pub result: SearchResult<A>,
    /// Every expansion in order with its slot.
    pub slot_log: Vec<SlotRecord<S>>,
}

/// Beam search over numbered slots. Slot `i` at the next depth is filled
/// right after slot `i` at the current depth is expanded, from a queue that
/// only holds children of slots `1..=i`. Stops at the first goal generated;
/// duplicates are dropped only against copies from the same or an earlier
/// slot.
pub fn monobead_search<D: SearchDomain>(
    domain: &D,
    width: usize,
    ordering: NodeOrder,
    limits: Limits,
) -> MonobeadRun<D::State, D::Action> {
    assert!(width >= 1, "beam width must be at least 1");
    let node_bytes = node_bytes_estimate::<D::State, D::Action>(domain.state_heap_bytes()) + 8;
    let mut monitor = Monitor::new(limits, node_bytes);
    let mut incumbent = Incumbent::none();
    let mut arena = NodeArena::new();
    let mut provenance: Vec<u32> = Vec::new();
    let mut seen = SlotTable::new();
    let mut log = Vec::new();
    let (mut scratch, mut kids) = (Vec::new(), Vec::new());

    let root = Node::root(domain);
    let status = if domain.is_goal(&root.state) {
        incumbent.offer(&root, &mut monitor);
        TerminalStatus::Solved
    } else {
        seen.admit(&root.state, 0, 0.0);
        let mut current: Vec<Option<NodeId>> = vec![None; width];
        current[0] = Some(arena.push(root));
        provenance.push(0);
        let mut run = || -> Result<TerminalStatus, Stop> {
            let mut queue = OpenQueue::new();
            loop {
                queue.clear();
                let mut next: Vec<Option<NodeId>> = vec![None; width];
                for i in 0..width {
                    let slot = i as u32 + 1;
                    if let Some(id) = current[i] {
                        monitor.begin_expansion(arena.len())?;
                        let node = arena.get(id);
                        log.push(SlotRecord {
                            depth: node.depth,
                            slot,
                            parent_slot: provenance[id.index()],
                            state: node.state.clone(),
                        });
                        expand(domain, node, id, &mut scratch, &mut kids);
                        monitor.add_generated(kids.len());
                        let mut goal_seen = false;
                        for child in kids.drain(..) {
                            if domain.is_goal(&child.state) {
                                incumbent.offer(&child, &mut monitor);
                                goal_seen = true;
                            } else if seen.admit(&child.state, slot, child.g) {
                                let cid = arena.push(child);
                                provenance.push(slot);
                                queue.push(ordering.entry(arena.get(cid), cid));
                            }
                        }
                        if goal_seen {
                            return Ok(TerminalStatus::Solved);
                        }
                    }
                    while let Some(e) = queue.pop() {
                        let n = arena.get(e.id);
                        if !seen.superseded(&n.state, provenance[e.id.index()], n.g) {
                            next[i] = Some(e.id);
                            break;
                        }
                    }
                }
                if next.iter().all(Option::is_none) {
                    return Ok(TerminalStatus::Exhausted);
                }
                current = next;
            }
        };
        match run() {
            Ok(s) => s,
            Err(Stop(s)) => s,
        }
    };
    MonobeadRun {
        result: SearchResult {
            solution: incumbent.solution(&arena),
            trace: monitor.finish(status),
        },
        slot_log: log,
    }
}
