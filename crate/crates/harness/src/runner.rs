//! Experiment execution and result files.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rayon::prelude::*;
use rectsearch::{Cost, TerminalStatus};
use serde::{Deserialize, Serialize};

use crate::config::{InstanceSource, RunConfig};
use crate::dispatch::{with_domain, RunVisitor};
use crate::instances::{self, NamedInstance};
use crate::metrics::{Axis, QualityCurve, RunTrace};
use crate::HarnessError;

pub const TRACE_SCHEMA: &str = "rectsearch.trace/1";
pub const CURVE_SCHEMA: &str = "rectsearch.curves/1";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RunKey {
    pub algorithm: String,
    pub domain: String,
    pub instance: String,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    pub expansions: u64,
    pub generated: u64,
    pub wall_ms: f64,
    pub final_cost: Option<Cost>,
    pub solution_length: Option<usize>,
    pub verified: bool,
}

/// One (algorithm, instance) run. Events are
/// `(elapsed_ms, expansions, generated, cost)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub key: RunKey,
    pub config: RunConfig,
    pub events: Vec<(f64, u64, u64, Cost)>,
    pub status: TerminalStatus,
    pub totals: Totals,
}

impl TraceRecord {
    pub fn to_run_trace(&self) -> RunTrace {
        use rectsearch::search::TraceEvent;
        RunTrace {
            algorithm: self.key.algorithm.clone(),
            instance: format!("{}:{}", self.key.domain, self.key.instance),
            trace: rectsearch::AnytimeTrace {
                events: self
                    .events
                    .iter()
                    .map(|&(elapsed_ms, expansions, generated, cost)| TraceEvent {
                        elapsed_ms,
                        expansions,
                        generated,
                        cost,
                    })
                    .collect(),
                status: self.status,
                total_expansions: self.totals.expansions,
                total_generated: self.totals.generated,
            },
        }
    }
}

pub fn resolve_instances(cfg: &RunConfig) -> Result<Vec<NamedInstance>, HarnessError> {
    let kind = cfg.domain.kind();
    match &cfg.instances {
        InstanceSource::Path(p) => instances::load_path(kind, p),
        InstanceSource::Generate(params) => instances::generate(kind, params, cfg.seed),
    }
}

/// Runs one configuration on one instance.
pub fn run_one(cfg: &RunConfig, inst: &NamedInstance) -> Result<TraceRecord, HarnessError> {
    let start = std::time::Instant::now();
    let visitor = RunVisitor {
        algorithm: &cfg.algorithm,
        limits: cfg.limits(),
    };
    let out = with_domain(&inst.instance, cfg.domain, visitor).map_err(|e| match e {
        rectsearch::DomainError::ZeroCostEdges(_) | rectsearch::DomainError::Unsupported(_) => {
            HarnessError::Config(e.to_string())
        }
        e => HarnessError::Instance(format!("{}: {e}", inst.name)),
    })?;
    let wall = cfg.record_wall_clock;
    Ok(TraceRecord {
        key: RunKey {
            algorithm: cfg.algorithm.label(),
            domain: cfg.domain.to_string(),
            instance: inst.name.clone(),
            seed: cfg.seed,
        },
        config: cfg.clone(),
        events: out
            .trace
            .events
            .iter()
            .map(|e| {
                (
                    if wall { e.elapsed_ms } else { 0.0 },
                    e.expansions,
                    e.generated,
                    e.cost,
                )
            })
            .collect(),
        status: out.trace.status,
        totals: Totals {
            expansions: out.trace.total_expansions,
            generated: out.trace.total_generated,
            wall_ms: if wall {
                start.elapsed().as_secs_f64() * 1e3
            } else {
                0.0
            },
            final_cost: out.cost,
            solution_length: out.solution_length,
            verified: out.verified,
        },
    })
}

/// Runs every configuration on each of its instances. Runs are independent
/// and may execute in parallel; the result order follows the inputs.
pub fn run_experiment(configs: &[RunConfig]) -> Result<Vec<TraceRecord>, HarnessError> {
    let mut jobs = Vec::new();
    for cfg in configs {
        cfg.validate()?;
        for inst in resolve_instances(cfg)? {
            jobs.push((cfg, inst));
        }
    }
    jobs.par_iter()
        .map(|(cfg, inst)| run_one(cfg, inst))
        .collect()
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Io(format!("{}: {e}", path.display()))
}

/// JSON lines: a schema header, then one record per line.
pub fn write_jsonl(path: &Path, records: &[TraceRecord]) -> Result<(), HarnessError> {
    let mut out = String::new();
    out.push_str(&serde_json::json!({ "schema": TRACE_SCHEMA }).to_string());
    out.push('\n');
    for r in records {
        out.push_str(&serde_json::to_string(r).map_err(|e| io_error(path, e))?);
        out.push('\n');
    }
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    fs::write(path, out).map_err(|e| io_error(path, e))
}

pub fn read_jsonl(path: &Path) -> Result<Vec<TraceRecord>, HarnessError> {
    let file = fs::File::open(path).map_err(|e| io_error(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .transpose()
        .map_err(|e| io_error(path, e))?
        .unwrap_or_default();
    let header: serde_json::Value = serde_json::from_str(&header).map_err(|e| io_error(path, e))?;
    if header["schema"] != TRACE_SCHEMA {
        return Err(io_error(
            path,
            format!("unexpected schema {}", header["schema"]),
        ));
    }
    let mut records = Vec::new();
    for line in lines {
        let line = line.map_err(|e| io_error(path, e))?;
        if !line.trim().is_empty() {
            records.push(serde_json::from_str(&line).map_err(|e| io_error(path, e))?);
        }
    }
    Ok(records)
}

/// Every `*.jsonl` file in `dir`, in name order.
pub fn read_dir_records(dir: &Path) -> Result<Vec<TraceRecord>, HarnessError> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .map_err(|e| io_error(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
        .collect();
    files.sort();
    let mut all = Vec::new();
    for f in files {
        all.extend(read_jsonl(&f)?);
    }
    Ok(all)
}

/// Curve table: a `# schema` comment line, then CSV with one row per
/// domain, algorithm and grid point.
pub fn write_curves_csv<W: Write>(
    mut out: W,
    groups: &[(String, Vec<QualityCurve>)],
    axis: Axis,
) -> Result<(), HarnessError> {
    let axis_name = match axis {
        Axis::Milliseconds => "ms",
        Axis::Expansions => "expansions",
    };
    let err = |e: &dyn std::fmt::Display| HarnessError::Io(e.to_string());
    writeln!(out, "# schema {CURVE_SCHEMA} axis={axis_name}").map_err(|e| err(&e))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "domain",
        "algorithm",
        "t",
        "quality",
        "coverage",
        "avg_cost",
        "full_coverage_at",
        "flagged",
    ])
    .map_err(|e| err(&e))?;
    let opt = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
    for (domain, curves) in groups {
        for c in curves {
            for i in 0..c.grid.len() {
                w.write_record([
                    domain.clone(),
                    c.algorithm.clone(),
                    c.grid[i].to_string(),
                    c.quality[i].to_string(),
                    c.coverage[i].to_string(),
                    opt(c.avg_cost[i]),
                    opt(c.full_coverage_at),
                    c.flagged.to_string(),
                ])
                .map_err(|e| err(&e))?;
            }
        }
    }
    w.flush().map_err(|e| err(&e))
}
