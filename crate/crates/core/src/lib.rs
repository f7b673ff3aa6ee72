//! Anytime heuristic search built around rectangle search: an iteratively
//! widening and deepening beam that keeps one priority queue per depth level.
//!
//! The crate also carries the comparators it is usually measured against
//! (beam, bead, monobead, CABS, weighted A*, AWA*, ARA*, AEES, DFS*, ILDS*)
//! and the benchmark domains (sliding tiles, pancakes, blocks world, vacuum
//! world, grid pathfinding, explicit trees).

pub mod beam;
pub mod bestfirst;
pub mod depthfirst;
pub mod domains;
pub mod error;
pub mod rectangle;
pub mod search;

pub use error::DomainError;
pub use search::{
    AnytimeTrace, Cost, Limits, Node, NodeOrder, SearchDomain, SearchResult, SortKey,
    TerminalStatus,
};
