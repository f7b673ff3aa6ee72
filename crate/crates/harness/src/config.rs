//! Run configuration: which algorithm, on which domain and instances, under
//! which limits.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::time::Duration;

use rectsearch::bestfirst::WeightSchedule;
use rectsearch::domains::{BlocksVariant, GridCost, PancakeCost, TileCost, VacuumCost};
use rectsearch::search::SortKey;
use rectsearch::{Limits, NodeOrder};
use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "kebab-case")]
pub enum AlgorithmSpec {
    Rectangle { aspect: u32 },
    StrictRectangle { aspect: u32 },
    Beam { width: usize, order: SortKey },
    Bead { width: usize },
    Monobead { width: usize },
    Cabs { order: SortKey },
    Astar,
    Wastar { weight: f64 },
    Gbfs,
    Awastar { weight: f64 },
    Arastar { schedule: WeightSchedule },
    Aees,
    DfsStar { order_children: bool },
    IldsStar,
}

fn invalid(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

/// `k=v` pairs; every key must be consumed.
struct Params(BTreeMap<String, String>);

impl Params {
    fn parse(pairs: &[String]) -> Result<Self, HarnessError> {
        let mut map = BTreeMap::new();
        for p in pairs {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| invalid(format!("parameter `{p}` is not k=v")))?;
            if map
                .insert(k.trim().to_string(), v.trim().to_string())
                .is_some()
            {
                return Err(invalid(format!("parameter `{k}` given twice")));
            }
        }
        Ok(Params(map))
    }

    fn take<T: std::str::FromStr>(
        &mut self,
        key: &str,
        default: Option<T>,
    ) -> Result<T, HarnessError> {
        match self.0.remove(key) {
            Some(v) => v
                .parse()
                .map_err(|_| invalid(format!("bad value `{v}` for `{key}`"))),
            None => default.ok_or_else(|| invalid(format!("missing parameter `{key}`"))),
        }
    }

    fn take_opt(&mut self, key: &str) -> Option<String> {
        self.0.remove(key)
    }

    fn finish(self, what: &str) -> Result<(), HarnessError> {
        match self.0.keys().next() {
            Some(k) => Err(invalid(format!("unknown parameter `{k}` for {what}"))),
            None => Ok(()),
        }
    }
}

fn sort_key(s: &str) -> Result<SortKey, HarnessError> {
    match s {
        "d" => Ok(SortKey::D),
        "f" => Ok(SortKey::F),
        "h" => Ok(SortKey::H),
        _ => Err(invalid(format!("ordering `{s}` is not one of d, f, h"))),
    }
}

impl AlgorithmSpec {
    /// Builds a spec from an algorithm id and `k=v` parameters.
    pub fn parse(id: &str, params: &[String]) -> Result<Self, HarnessError> {
        let mut p = Params::parse(params)?;
        let spec = match id {
            "rectangle" => AlgorithmSpec::Rectangle {
                aspect: p.take("aspect", Some(1))?,
            },
            "strict-rectangle" => AlgorithmSpec::StrictRectangle {
                aspect: p.take("aspect", Some(1))?,
            },
            "beam" => AlgorithmSpec::Beam {
                width: p.take("width", None)?,
                order: sort_key(&p.take_opt("order").unwrap_or_else(|| "d".into()))?,
            },
            "bead" => AlgorithmSpec::Bead {
                width: p.take("width", None)?,
            },
            "monobead" => AlgorithmSpec::Monobead {
                width: p.take("width", None)?,
            },
            "cabs" => AlgorithmSpec::Cabs {
                order: sort_key(&p.take_opt("order").unwrap_or_else(|| "d".into()))?,
            },
            "astar" => AlgorithmSpec::Astar,
            "wastar" => AlgorithmSpec::Wastar {
                weight: p.take("weight", None)?,
            },
            "gbfs" => AlgorithmSpec::Gbfs,
            "awastar" => AlgorithmSpec::Awastar {
                weight: p.take("weight", None)?,
            },
            "arastar" => {
                let schedule = match p.take_opt("weights") {
                    Some(list) => {
                        let ws: Result<Vec<f64>, _> =
                            list.split(',').map(|w| w.trim().parse::<f64>()).collect();
                        WeightSchedule::list(
                            &ws.map_err(|_| invalid(format!("bad weight list `{list}`")))?,
                        )
                    }
                    None => WeightSchedule::decrement(
                        p.take("initial", Some(5.0))?,
                        p.take("step", Some(0.02))?,
                    ),
                };
                AlgorithmSpec::Arastar { schedule }
            }
            "aees" => AlgorithmSpec::Aees,
            "dfs-star" => AlgorithmSpec::DfsStar {
                order_children: p.take("order_children", Some(false))?,
            },
            "ilds-star" => AlgorithmSpec::IldsStar,
            _ => return Err(invalid(format!("unknown algorithm `{id}`"))),
        };
        p.finish(id)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        match self {
            AlgorithmSpec::Rectangle { aspect } | AlgorithmSpec::StrictRectangle { aspect }
                if *aspect == 0 =>
            {
                Err(invalid("aspect must be at least 1"))
            }
            AlgorithmSpec::Beam { width, .. }
            | AlgorithmSpec::Bead { width }
            | AlgorithmSpec::Monobead { width }
                if *width == 0 =>
            {
                Err(invalid("beam width must be at least 1"))
            }
            AlgorithmSpec::Wastar { weight } | AlgorithmSpec::Awastar { weight }
                if !(weight.is_finite() && *weight >= 1.0) =>
            {
                Err(invalid(format!("weight {weight} must be finite and >= 1")))
            }
            AlgorithmSpec::Arastar { schedule } => schedule.validate().map_err(invalid),
            _ => Ok(()),
        }
    }

    /// Short label used in run keys and curve columns, e.g. `rectangle(500)`.
    pub fn label(&self) -> String {
        let key = |k: &SortKey| format!("{k:?}").to_lowercase();
        match self {
            AlgorithmSpec::Rectangle { aspect } => format!("rectangle({aspect})"),
            AlgorithmSpec::StrictRectangle { aspect } => format!("strict-rectangle({aspect})"),
            AlgorithmSpec::Beam { width, order } => format!("beam({width},{})", key(order)),
            AlgorithmSpec::Bead { width } => format!("bead({width})"),
            AlgorithmSpec::Monobead { width } => format!("monobead({width})"),
            AlgorithmSpec::Cabs { order } => format!("cabs({})", key(order)),
            AlgorithmSpec::Astar => "astar".into(),
            AlgorithmSpec::Wastar { weight } => format!("wastar({weight})"),
            AlgorithmSpec::Gbfs => "gbfs".into(),
            AlgorithmSpec::Awastar { weight } => format!("awastar({weight})"),
            AlgorithmSpec::Arastar { schedule } => match schedule {
                WeightSchedule::Decrement { initial, step } => format!("arastar({initial}-{step})"),
                WeightSchedule::List { weights } => {
                    let ws: Vec<String> = weights.iter().map(f64::to_string).collect();
                    format!("arastar({})", ws.join(","))
                }
            },
            AlgorithmSpec::Aees => "aees".into(),
            AlgorithmSpec::DfsStar { order_children } => {
                if *order_children {
                    "dfs-star-co".into()
                } else {
                    "dfs-star".into()
                }
            }
            AlgorithmSpec::IldsStar => "ilds-star".into(),
        }
    }

    pub fn node_order(key: SortKey) -> NodeOrder {
        NodeOrder { primary: key }
    }
}

/// Domain kind plus its cost model (or variant, for blocks world).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "domain", content = "cost", rename_all = "kebab-case")]
pub enum DomainSpec {
    Tiles(TileCost),
    Pancake(PancakeCost),
    Blocks(BlocksVariant),
    Vacuum(VacuumCost),
    Grid(GridCost),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    Tiles,
    Pancake,
    Blocks,
    Vacuum,
    Grid,
}

impl DomainKind {
    pub fn parse(s: &str) -> Result<Self, HarnessError> {
        match s {
            "tiles" => Ok(DomainKind::Tiles),
            "pancake" => Ok(DomainKind::Pancake),
            "blocks" => Ok(DomainKind::Blocks),
            "vacuum" => Ok(DomainKind::Vacuum),
            "grid" => Ok(DomainKind::Grid),
            _ => Err(invalid(format!("unknown domain `{s}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DomainKind::Tiles => "tiles",
            DomainKind::Pancake => "pancake",
            DomainKind::Blocks => "blocks",
            DomainKind::Vacuum => "vacuum",
            DomainKind::Grid => "grid",
        }
    }

    /// File extension of instance files; grid instances also carry a
    /// `.scen` file next to the `.map`.
    pub fn extension(self) -> &'static str {
        match self {
            DomainKind::Grid => "map",
            k => k.name(),
        }
    }

    pub fn default_cost(self) -> &'static str {
        match self {
            DomainKind::Blocks => "standard",
            _ => "unit",
        }
    }
}

impl DomainSpec {
    pub fn parse(kind: &str, cost: &str) -> Result<Self, HarnessError> {
        let bad = |e: rectsearch::DomainError| invalid(e.to_string());
        Ok(match DomainKind::parse(kind)? {
            DomainKind::Tiles => DomainSpec::Tiles(cost.parse().map_err(bad)?),
            DomainKind::Pancake => DomainSpec::Pancake(cost.parse().map_err(bad)?),
            DomainKind::Blocks => DomainSpec::Blocks(cost.parse().map_err(bad)?),
            DomainKind::Vacuum => DomainSpec::Vacuum(cost.parse().map_err(bad)?),
            DomainKind::Grid => DomainSpec::Grid(cost.parse().map_err(bad)?),
        })
    }

    pub fn kind(&self) -> DomainKind {
        match self {
            DomainSpec::Tiles(_) => DomainKind::Tiles,
            DomainSpec::Pancake(_) => DomainKind::Pancake,
            DomainSpec::Blocks(_) => DomainKind::Blocks,
            DomainSpec::Vacuum(_) => DomainKind::Vacuum,
            DomainSpec::Grid(_) => DomainKind::Grid,
        }
    }

    pub fn cost_name(&self) -> String {
        let v = serde_json::to_value(self).expect("serializable");
        v["cost"].as_str().unwrap_or_default().to_string()
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.kind().name(), self.cost_name())
    }
}

/// Where instances come from: a file or directory, or a generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceSource {
    Path(PathBuf),
    /// Generator parameters such as `count=50`, `w=3`; the run seed drives it.
    Generate(BTreeMap<String, String>),
}

impl InstanceSource {
    /// `gen:count=50,w=3` or a path.
    pub fn parse(s: &str) -> Result<Self, HarnessError> {
        match s.strip_prefix("gen:") {
            Some(rest) => {
                let pairs: Vec<String> = rest
                    .split(',')
                    .filter(|p| !p.is_empty())
                    .map(str::to_string)
                    .collect();
                Ok(InstanceSource::Generate(Params::parse(&pairs)?.0))
            }
            None => Ok(InstanceSource::Path(PathBuf::from(s))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub algorithm: AlgorithmSpec,
    pub domain: DomainSpec,
    pub instances: InstanceSource,
    pub time_limit_ms: Option<u64>,
    pub expansion_limit: Option<u64>,
    pub mem_limit_bytes: Option<u64>,
    pub seed: u64,
    /// When false, every wall-clock field in the output is zero so that
    /// records from expansion-limited reruns compare byte for byte.
    #[serde(default = "default_true")]
    pub record_wall_clock: bool,
}

fn default_true() -> bool {
    true
}

impl RunConfig {
    pub fn new(algorithm: AlgorithmSpec, domain: DomainSpec, instances: InstanceSource) -> Self {
        RunConfig {
            algorithm,
            domain,
            instances,
            time_limit_ms: Some(300_000),
            expansion_limit: None,
            mem_limit_bytes: None,
            seed: 0,
            record_wall_clock: true,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.algorithm.validate()?;
        if self.time_limit_ms.is_none() && self.expansion_limit.is_none() {
            return Err(invalid(
                "time limit and expansion limit cannot both be unbounded",
            ));
        }
        Ok(())
    }

    pub fn limits(&self) -> Limits {
        Limits {
            time: self.time_limit_ms.map(Duration::from_millis),
            expansions: self.expansion_limit,
            memory_bytes: self.mem_limit_bytes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_algorithms() {
        assert_eq!(
            AlgorithmSpec::parse("rectangle", &ps(&["aspect=500"])).unwrap(),
            AlgorithmSpec::Rectangle { aspect: 500 }
        );
        let ara = AlgorithmSpec::parse("arastar", &ps(&["weights=5,3,2,1.5,1"])).unwrap();
        assert_eq!(ara.label(), "arastar(5,3,2,1.5,1)");
        let ara = AlgorithmSpec::parse("arastar", &ps(&["initial=2.5", "step=0.02"])).unwrap();
        assert_eq!(ara.label(), "arastar(2.5-0.02)");
        assert_eq!(
            AlgorithmSpec::parse("dfs-star", &ps(&["order_children=true"]))
                .unwrap()
                .label(),
            "dfs-star-co"
        );
    }

    #[test]
    fn reject_bad_algorithm_params() {
        for (id, p) in [
            ("rectangle", vec!["aspect=0"]),
            ("rectangle", vec!["width=3"]),
            ("bead", vec![]),
            ("wastar", vec!["weight=0.5"]),
            ("arastar", vec!["weights=3,4,1"]),
            ("arastar", vec!["weights=3,2"]),
            ("beam", vec!["width=2", "order=g"]),
            ("nope", vec![]),
        ] {
            assert!(
                matches!(
                    AlgorithmSpec::parse(id, &ps(&p)),
                    Err(HarnessError::Config(_))
                ),
                "{id} {p:?}"
            );
        }
    }

    #[test]
    fn domain_specs() {
        let d = DomainSpec::parse("tiles", "reverse-inverse").unwrap();
        assert_eq!(d, DomainSpec::Tiles(TileCost::ReverseInverse));
        assert_eq!(d.to_string(), "tiles/reverse-inverse");
        assert!(DomainSpec::parse("tiles", "life").is_err());
        assert!(DomainSpec::parse("chess", "unit").is_err());
        let json = serde_json::to_string(&DomainSpec::Blocks(BlocksVariant::Deep)).unwrap();
        assert_eq!(json, r#"{"domain":"blocks","cost":"deep"}"#);
    }

    #[test]
    fn both_limits_unbounded_is_rejected() {
        let mut cfg = RunConfig::new(
            AlgorithmSpec::Astar,
            DomainSpec::Tiles(TileCost::Unit),
            InstanceSource::parse("gen:count=2").unwrap(),
        );
        cfg.time_limit_ms = None;
        assert!(cfg.validate().is_err());
        cfg.expansion_limit = Some(10);
        assert!(cfg.validate().is_ok());
    }
}
