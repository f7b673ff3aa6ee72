use std::cmp::{self, Reverse};
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::domain::Cost;
use super::node::{Node, NodeId};

/// Primary key of a node ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SortKey {
    /// Distance-to-go.
    D,
    F,
    H,
}

/// Total order over nodes: primary key ascending, then `f` ascending, then
/// insertion order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeOrder {
    pub primary: SortKey,
}

impl NodeOrder {
    pub const D: NodeOrder = NodeOrder {
        primary: SortKey::D,
    };
    pub const F: NodeOrder = NodeOrder {
        primary: SortKey::F,
    };
    pub const H: NodeOrder = NodeOrder {
        primary: SortKey::H,
    };

    #[inline]
    pub fn key<S, A>(&self, node: &Node<S, A>) -> f64 {
        match self.primary {
            SortKey::D => node.d,
            SortKey::F => node.f(),
            SortKey::H => node.h,
        }
    }

    /// `Less` means `a` is expanded first.
    pub fn compare<S, A>(&self, a: &Node<S, A>, b: &Node<S, A>) -> cmp::Ordering {
        self.key(a)
            .total_cmp(&self.key(b))
            .then(a.f().total_cmp(&b.f()))
            .then(a.seq.cmp(&b.seq))
    }

    pub fn entry<S, A>(&self, node: &Node<S, A>, id: NodeId) -> QueueEntry {
        QueueEntry {
            primary: self.key(node),
            f: node.f(),
            id,
        }
    }
}

impl Default for NodeOrder {
    fn default() -> Self {
        NodeOrder::D
    }
}

/// Priority-queue entry: (primary, f, insertion id) compared lexicographically.
#[derive(Clone, Copy, Debug)]
pub struct QueueEntry {
    pub primary: f64,
    pub f: Cost,
    pub id: NodeId,
}

impl PartialEq for QueueEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == cmp::Ordering::Equal
    }
}
impl Eq for QueueEntry {}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> cmp::Ordering {
        self.primary
            .total_cmp(&other.primary)
            .then(self.f.total_cmp(&other.f))
            .then(self.id.cmp(&other.id))
    }
}

/// Min-queue of [`QueueEntry`].
#[derive(Clone, Debug, Default)]
pub struct OpenQueue {
    heap: BinaryHeap<Reverse<QueueEntry>>,
}

impl OpenQueue {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, entry: QueueEntry) {
        self.heap.push(Reverse(entry));
    }

    #[inline]
    pub fn pop(&mut self) -> Option<QueueEntry> {
        self.heap.pop().map(|Reverse(e)| e)
    }

    #[inline]
    pub fn peek(&self) -> Option<&QueueEntry> {
        self.heap.peek().map(|Reverse(e)| e)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn clear(&mut self) {
        self.heap.clear();
    }

    /// Drains all entries in arbitrary order.
    pub fn drain(&mut self) -> impl Iterator<Item = QueueEntry> + '_ {
        self.heap.drain().map(|Reverse(e)| e)
    }
}

impl FromIterator<QueueEntry> for OpenQueue {
    fn from_iter<T: IntoIterator<Item = QueueEntry>>(iter: T) -> Self {
        OpenQueue {
            heap: iter.into_iter().map(Reverse).collect(),
        }
    }
}
