use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::domain::{cost_lt, Cost};
use super::node::{Node, NodeArena, Solution};

/// How a run ended. Limit statuses are normal terminations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminalStatus {
    /// Nothing left to expand. For the complete algorithms this proves the
    /// incumbent optimal (or that no solution exists when there is none).
    /// For plain beam searches it only means the beam died out.
    #[serde(rename = "exhausted-optimal")]
    Exhausted,
    /// A one-shot search stopped at its first solution.
    Solved,
    TimeLimit,
    MemoryLimit,
    ExpansionLimit,
    IterationLimit,
}

impl TerminalStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TerminalStatus::Exhausted => "exhausted-optimal",
            TerminalStatus::Solved => "solved",
            TerminalStatus::TimeLimit => "time-limit",
            TerminalStatus::MemoryLimit => "memory-limit",
            TerminalStatus::ExpansionLimit => "expansion-limit",
            TerminalStatus::IterationLimit => "iteration-limit",
        }
    }
}

impl fmt::Display for TerminalStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Early termination signal threaded through the search loops with `?`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stop(pub TerminalStatus);

pub type Flow = Result<(), Stop>;

/// One incumbent improvement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub elapsed_ms: f64,
    pub expansions: u64,
    pub generated: u64,
    pub cost: Cost,
}

/// Timestamped sequence of incumbent improvements plus the final status.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnytimeTrace {
    pub events: Vec<TraceEvent>,
    pub status: TerminalStatus,
    pub total_expansions: u64,
    pub total_generated: u64,
}

impl AnytimeTrace {
    pub fn final_cost(&self) -> Cost {
        self.events.last().map_or(Cost::INFINITY, |e| e.cost)
    }

    pub fn first_cost(&self) -> Cost {
        self.events.first().map_or(Cost::INFINITY, |e| e.cost)
    }

    /// Incumbent cost after `expansions` expansions.
    pub fn cost_at_expansions(&self, expansions: u64) -> Cost {
        self.events
            .iter()
            .take_while(|e| e.expansions <= expansions)
            .last()
            .map_or(Cost::INFINITY, |e| e.cost)
    }

    /// Incumbent cost at `elapsed_ms`.
    pub fn cost_at_ms(&self, elapsed_ms: f64) -> Cost {
        self.events
            .iter()
            .take_while(|e| e.elapsed_ms <= elapsed_ms)
            .last()
            .map_or(Cost::INFINITY, |e| e.cost)
    }
}

/// Resource limits. `None` means unbounded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub time: Option<Duration>,
    pub expansions: Option<u64>,
    pub memory_bytes: Option<u64>,
}

impl Limits {
    pub fn unbounded() -> Self {
        Limits::default()
    }

    pub fn expansions(n: u64) -> Self {
        Limits {
            expansions: Some(n),
            ..Limits::default()
        }
    }
}

/// Clock is read for limit checks only every this many expansions.
pub const CLOCK_SAMPLE_INTERVAL: u64 = 64;

/// Per-run bookkeeping: expansion/generation counters, limit checks, and the
/// incumbent trace.
#[derive(Debug)]
pub struct Monitor {
    start: Instant,
    limits: Limits,
    node_bytes: usize,
    expansions: u64,
    generated: u64,
    events: Vec<TraceEvent>,
    best: Cost,
}

impl Monitor {
    pub fn new(limits: Limits, node_bytes: usize) -> Self {
        Monitor {
            start: Instant::now(),
            limits,
            node_bytes: node_bytes.max(1),
            expansions: 0,
            generated: 0,
            events: Vec::new(),
            best: Cost::INFINITY,
        }
    }

    /// Checks limits and counts one expansion. `live_nodes` is the number of
    /// nodes the algorithm currently holds in memory.
    pub fn begin_expansion(&mut self, live_nodes: usize) -> Flow {
        if let Some(max) = self.limits.expansions {
            if self.expansions >= max {
                return Err(Stop(TerminalStatus::ExpansionLimit));
            }
        }
        if let Some(mem) = self.limits.memory_bytes {
            if (live_nodes as u64).saturating_mul(self.node_bytes as u64) > mem {
                return Err(Stop(TerminalStatus::MemoryLimit));
            }
        }
        if let Some(t) = self.limits.time {
            if self.expansions.is_multiple_of(CLOCK_SAMPLE_INTERVAL) && self.start.elapsed() >= t {
                return Err(Stop(TerminalStatus::TimeLimit));
            }
        }
        self.expansions += 1;
        Ok(())
    }

    #[inline]
    pub fn add_generated(&mut self, n: usize) {
        self.generated += n as u64;
    }

    pub fn expansions(&self) -> u64 {
        self.expansions
    }

    pub fn generated(&self) -> u64 {
        self.generated
    }

    pub fn best(&self) -> Cost {
        self.best
    }

    pub fn elapsed_ms(&self) -> f64 {
        self.start.elapsed().as_secs_f64() * 1e3
    }

    /// Records `cost` if it strictly improves on the best so far.
    pub fn record(&mut self, cost: Cost) -> bool {
        if !cost_lt(cost, self.best) {
            return false;
        }
        self.best = cost;
        self.events.push(TraceEvent {
            elapsed_ms: self.elapsed_ms(),
            expansions: self.expansions,
            generated: self.generated,
            cost,
        });
        true
    }

    pub fn finish(self, status: TerminalStatus) -> AnytimeTrace {
        AnytimeTrace {
            events: self.events,
            status,
            total_expansions: self.expansions,
            total_generated: self.generated,
        }
    }
}

/// Best solution found so far.
#[derive(Clone, Debug)]
pub struct Incumbent<S, A> {
    pub cost: Cost,
    /// Goal node; its parent chain lives in the run's arena.
    pub goal: Option<Node<S, A>>,
    pub found_at_ms: f64,
    pub found_after_expansions: u64,
}

impl<S, A: Clone> Incumbent<S, A> {
    pub fn none() -> Self {
        Incumbent {
            cost: Cost::INFINITY,
            goal: None,
            found_at_ms: 0.0,
            found_after_expansions: 0,
        }
    }

    /// Installs `goal` if it improves on the current cost; reports it to the
    /// monitor.
    pub fn offer(&mut self, goal: &Node<S, A>, monitor: &mut Monitor) -> bool
    where
        S: Clone,
    {
        if !cost_lt(goal.g, self.cost) {
            return false;
        }
        self.cost = goal.g;
        self.goal = Some(goal.clone());
        self.found_at_ms = monitor.elapsed_ms();
        self.found_after_expansions = monitor.expansions();
        monitor.record(goal.g);
        true
    }

    pub fn solution(&self, arena: &NodeArena<S, A>) -> Option<Solution<A>> {
        self.goal.as_ref().map(|g| arena.reconstruct_detached(g))
    }
}

/// Outcome of one search run.
#[derive(Clone, Debug)]
pub struct SearchResult<A> {
    pub trace: AnytimeTrace,
    pub solution: Option<Solution<A>>,
}

impl<A> SearchResult<A> {
    pub fn cost(&self) -> Cost {
        self.solution.as_ref().map_or(Cost::INFINITY, |s| s.cost)
    }
}

/// Memory-accounting estimate for one stored node: the node itself, its
/// state's heap data, and closed-table / queue overhead.
pub fn node_bytes_estimate<S, A>(state_heap_bytes: usize) -> usize {
    std::mem::size_of::<Node<S, A>>() + state_heap_bytes + 48
}
