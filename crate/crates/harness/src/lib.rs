//! Experiment harness for rectsearch: run configurations, an independent
//! optimality oracle, anytime quality curves, and result files.

pub mod config;
pub mod dispatch;
pub mod instances;
pub mod metrics;
pub mod oracle;
pub mod runner;

use std::collections::BTreeMap;

use thiserror::Error;

pub use config::{AlgorithmSpec, DomainKind, DomainSpec, InstanceSource, RunConfig};
pub use metrics::{build_quality_curves, quality, Axis, QualityCurve, RunTrace};
pub use oracle::oracle_optimal;
pub use runner::{run_experiment, TraceRecord};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("instance error: {0}")]
    Instance(String),
    #[error("oracle: {0}")]
    Oracle(String),
    #[error("metric: {0}")]
    Metric(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl HarnessError {
    /// Process exit code for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Instance(_) => 3,
            _ => 1,
        }
    }
}

/// Quality curves per domain from a set of trace records. Best known costs
/// are the lowest final costs across all records of a domain.
pub fn curves_from_records(
    records: &[TraceRecord],
    grid: &[f64],
    axis: Axis,
) -> Result<Vec<(String, Vec<QualityCurve>)>, HarnessError> {
    let mut by_domain: BTreeMap<&str, Vec<RunTrace>> = BTreeMap::new();
    for r in records {
        by_domain
            .entry(&r.key.domain)
            .or_default()
            .push(r.to_run_trace());
    }
    by_domain
        .into_iter()
        .map(|(domain, runs)| {
            let best = metrics::best_known(&runs, &BTreeMap::new());
            Ok((
                domain.to_string(),
                build_quality_curves(&runs, &best, grid, axis)?,
            ))
        })
        .collect()
}
