use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rectsearch_harness::config::{
    AlgorithmSpec, DomainKind, DomainSpec, InstanceSource, RunConfig,
};
use rectsearch_harness::dispatch::{with_domain, DomainVisitor};
use rectsearch_harness::{
    curves_from_records, instances, metrics, oracle, runner, Axis, HarnessError,
};

#[derive(Parser)]
#[command(
    name = "rectsearch",
    about = "Anytime heuristic search experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    Ms,
    Expansions,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm over a set of instances and write trace records.
    Run {
        #[arg(long)]
        alg: String,
        /// Algorithm parameter `k=v`; repeatable.
        #[arg(long = "alg-param")]
        alg_param: Vec<String>,
        #[arg(long)]
        domain: String,
        /// Cost model (blocks: `standard` or `deep`).
        #[arg(long)]
        cost: Option<String>,
        /// Instance file or directory, or `gen:k=v,...`.
        #[arg(long)]
        instances: String,
        #[arg(long = "time-limit-ms")]
        time_limit_ms: Option<u64>,
        #[arg(long = "expansion-limit")]
        expansion_limit: Option<u64>,
        #[arg(long = "mem-limit-bytes")]
        mem_limit_bytes: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Zero all wall-clock fields so reruns compare byte for byte.
        #[arg(long)]
        no_wall_clock: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Optimal cost of one instance by exhaustive uniform-cost search.
    Oracle {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        cost: Option<String>,
        #[arg(long)]
        instance: PathBuf,
    },
    /// Aggregate trace records into quality / coverage / cost curves.
    Curves {
        #[arg(long = "in")]
        input: PathBuf,
        /// `start:end:step`, in milliseconds or expansions.
        #[arg(long = "grid-ms")]
        grid: String,
        #[arg(long, value_enum, default_value_t = AxisArg::Ms)]
        axis: AxisArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate instance files.
    Gen {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generator parameter `k=v`; repeatable.
        #[arg(long = "param")]
        param: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

struct OracleVisitor;

impl DomainVisitor for OracleVisitor {
    type Output = Result<Option<f64>, HarnessError>;

    fn visit<D: rectsearch::SearchDomain + Sync>(self, domain: &D) -> Self::Output {
        oracle::oracle_optimal(domain)
    }
}

fn domain_spec(domain: &str, cost: Option<&str>) -> Result<DomainSpec, HarnessError> {
    let kind = DomainKind::parse(domain)?;
    DomainSpec::parse(domain, cost.unwrap_or(kind.default_cost()))
}

fn execute(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Run {
            alg,
            alg_param,
            domain,
            cost,
            instances,
            time_limit_ms,
            expansion_limit,
            mem_limit_bytes,
            seed,
            no_wall_clock,
            out,
        } => {
            let cfg = RunConfig {
                algorithm: AlgorithmSpec::parse(&alg, &alg_param)?,
                domain: domain_spec(&domain, cost.as_deref())?,
                instances: InstanceSource::parse(&instances)?,
                time_limit_ms,
                expansion_limit,
                mem_limit_bytes,
                seed,
                record_wall_clock: !no_wall_clock,
            };
            let records = runner::run_experiment(std::slice::from_ref(&cfg))?;
            let name = format!(
                "{}-{}-{}.jsonl",
                cfg.domain.kind().name(),
                cfg.domain.cost_name(),
                alg
            );
            runner::write_jsonl(&out.join(name), &records)?;
            for r in &records {
                let cost = r
                    .totals
                    .final_cost
                    .map_or_else(|| "-".to_string(), |c| c.to_string());
                println!(
                    "{}\t{}\t{}\t{}",
                    r.key.instance, r.status, r.totals.expansions, cost
                );
            }
            Ok(())
        }
        Command::Oracle {
            domain,
            cost,
            instance,
        } => {
            let spec = domain_spec(&domain, cost.as_deref())?;
            let inst = instances::load_file(spec.kind(), &instance)?;
            let cost = with_domain(&inst.instance, spec, OracleVisitor)
                .map_err(|e| HarnessError::Instance(e.to_string()))??;
            match cost {
                Some(c) => println!("{c}"),
                None => println!("unsolvable"),
            }
            Ok(())
        }
        Command::Curves {
            input,
            grid,
            axis,
            out,
        } => {
            let grid = metrics::parse_grid(&grid)?;
            let axis = match axis {
                AxisArg::Ms => Axis::Milliseconds,
                AxisArg::Expansions => Axis::Expansions,
            };
            let records = runner::read_dir_records(&input)?;
            let groups = curves_from_records(&records, &grid, axis)?;
            let file = std::fs::File::create(&out)
                .map_err(|e| HarnessError::Io(format!("{}: {e}", out.display())))?;
            runner::write_curves_csv(file, &groups, axis)
        }
        Command::Gen {
            kind,
            count,
            seed,
            param,
            out,
        } => {
            let kind = DomainKind::parse(&kind)?;
            let mut spec = format!("gen:count={count}");
            for p in &param {
                spec.push(',');
                spec.push_str(p);
            }
            let InstanceSource::Generate(params) = InstanceSource::parse(&spec)? else {
                unreachable!()
            };
            let set = instances::generate(kind, &params, seed)?;
            instances::write_all(&out, &set)
                .map_err(|e| HarnessError::Io(format!("{}: {e}", out.display())))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
