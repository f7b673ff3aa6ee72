//! Shared search machinery: the domain abstraction, node storage, node
//! orderings, and incumbent/trace bookkeeping used by every algorithm.

mod domain;
mod node;
mod order;
mod slots;
mod trace;

pub use domain::{
    cost_le, cost_lt, replay, Cost, Restarted, SearchDomain, Successor, COST_EPSILON,
};
pub use node::{expand, Node, NodeArena, NodeId, Solution};
pub use order::{NodeOrder, OpenQueue, QueueEntry, SortKey};
pub use slots::SlotTable;
pub use trace::{
    node_bytes_estimate, AnytimeTrace, Flow, Incumbent, Limits, Monitor, SearchResult, Stop,
    TerminalStatus, TraceEvent, CLOCK_SAMPLE_INTERVAL,
};

/// Duplicate-detection tables.
pub type FastMap<K, V> = rustc_hash::FxHashMap<K, V>;
