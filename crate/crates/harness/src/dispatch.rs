//! Glue between run configurations and the generic search code.

use rectsearch::beam::{bead_search, beam_search, cabs, monobead_search, BeamConfig, CabsConfig};
use rectsearch::bestfirst::{aees, arastar, astar, awastar, gbfs, wastar, AeesConfig};
use rectsearch::depthfirst::{dfs_star, ilds_star, DfsStarConfig, IldsConfig};
use rectsearch::domains::{BlocksDomain, GridDomain, PancakeDomain, TilesDomain, VacuumDomain};
use rectsearch::rectangle::{rectangle_search, strict_rectangle_search, RectangleConfig};
use rectsearch::search::{replay, Solution};
use rectsearch::{AnytimeTrace, Cost, DomainError, Limits, SearchDomain};

use crate::config::{AlgorithmSpec, DomainSpec};
use crate::instances::Instance;

/// Something to do with a concrete domain.
pub trait DomainVisitor {
    type Output;
    fn visit<D: SearchDomain + Sync>(self, domain: &D) -> Self::Output;
}

/// Builds the domain for `instance` under `spec` and hands it to `v`.
pub fn with_domain<V: DomainVisitor>(
    instance: &Instance,
    spec: DomainSpec,
    v: V,
) -> Result<V::Output, DomainError> {
    match (instance, spec) {
        (Instance::Tiles(i), DomainSpec::Tiles(c)) => Ok(v.visit(&TilesDomain::new(i, c)?)),
        (Instance::Pancake(i), DomainSpec::Pancake(c)) => Ok(v.visit(&PancakeDomain::new(i, c))),
        (Instance::Blocks(i), DomainSpec::Blocks(c)) => Ok(v.visit(&BlocksDomain::new(i, c))),
        (Instance::Vacuum(i), DomainSpec::Vacuum(c)) => Ok(v.visit(&VacuumDomain::new(i, c)?)),
        (Instance::Grid(i), DomainSpec::Grid(c)) => Ok(v.visit(&GridDomain::new(i, c))),
        (i, s) => Err(DomainError::Unsupported(format!(
            "{} instance with {s}",
            i.kind().name()
        ))),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub trace: AnytimeTrace,
    pub cost: Option<Cost>,
    pub solution_length: Option<usize>,
    /// The reported plan replays from the start state to a goal at the
    /// reported cost. Vacuously true without a solution.
    pub verified: bool,
}

fn outcome<D: SearchDomain>(
    domain: &D,
    trace: AnytimeTrace,
    solution: Option<Solution<D::Action>>,
) -> Outcome {
    let verified = match &solution {
        None => true,
        Some(sol) => replay(domain, &sol.actions).is_some_and(|(end, cost)| {
            domain.is_goal(&end) && (cost - sol.cost).abs() <= 1e-9 * sol.cost.abs().max(1.0)
        }),
    };
    Outcome {
        trace,
        cost: solution.as_ref().map(|s| s.cost),
        solution_length: solution.as_ref().map(|s| s.actions.len()),
        verified,
    }
}

/// Runs one algorithm on one domain.
pub fn run_algorithm<D: SearchDomain>(domain: &D, alg: &AlgorithmSpec, limits: Limits) -> Outcome {
    let r = match alg {
        AlgorithmSpec::Rectangle { aspect } => {
            rectangle_search(domain, &RectangleConfig::new(*aspect).with_limits(limits)).result
        }
        AlgorithmSpec::StrictRectangle { aspect } => {
            strict_rectangle_search(domain, &RectangleConfig::new(*aspect).with_limits(limits))
                .result
        }
        AlgorithmSpec::Beam { width, order } => {
            beam_search(
                domain,
                &BeamConfig::new(*width, AlgorithmSpec::node_order(*order)).with_limits(limits),
            )
            .result
        }
        AlgorithmSpec::Bead { width } => bead_search(domain, *width, limits).result,
        AlgorithmSpec::Monobead { width } => {
            monobead_search(domain, *width, rectsearch::NodeOrder::D, limits).result
        }
        AlgorithmSpec::Cabs { order } => {
            let cfg = CabsConfig {
                ordering: AlgorithmSpec::node_order(*order),
                limits,
                max_iterations: None,
            };
            cabs(domain, &cfg).result
        }
        AlgorithmSpec::Astar => astar(domain, limits),
        AlgorithmSpec::Wastar { weight } => wastar(domain, *weight, limits),
        AlgorithmSpec::Gbfs => gbfs(domain, limits),
        AlgorithmSpec::Awastar { weight } => awastar(domain, *weight, limits),
        AlgorithmSpec::Arastar { schedule } => arastar(domain, schedule, limits),
        AlgorithmSpec::Aees => {
            let cfg = AeesConfig {
                limits,
                ..AeesConfig::default()
            };
            aees(domain, &cfg).result
        }
        AlgorithmSpec::DfsStar { order_children } => {
            let cfg = DfsStarConfig {
                limits,
                ..DfsStarConfig::new(*order_children)
            };
            dfs_star(domain, &cfg).result
        }
        AlgorithmSpec::IldsStar => {
            let cfg = IldsConfig {
                limits,
                ..IldsConfig::default()
            };
            ilds_star(domain, &cfg).result
        }
    };
    outcome(domain, r.trace, r.solution)
}

/// [`run_algorithm`] as a visitor.
pub struct RunVisitor<'a> {
    pub algorithm: &'a AlgorithmSpec,
    pub limits: Limits,
}

impl DomainVisitor for RunVisitor<'_> {
    type Output = Outcome;

    fn visit<D: SearchDomain + Sync>(self, domain: &D) -> Outcome {
        run_algorithm(domain, self.algorithm, self.limits)
    }
}
