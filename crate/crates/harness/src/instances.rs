//! Loading, generating and writing benchmark instances.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rectsearch::domains::{
    BlocksInstance, GridInstance, PancakeInstance, TilesInstance, VacuumInstance,
};
use rectsearch::DomainError;

use crate::config::DomainKind;
use crate::HarnessError;

#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Tiles(TilesInstance),
    Pancake(PancakeInstance),
    Blocks(BlocksInstance),
    Vacuum(VacuumInstance),
    Grid(GridInstance),
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedInstance {
    pub name: String,
    pub instance: Instance,
}

impl Instance {
    pub fn kind(&self) -> DomainKind {
        match self {
            Instance::Tiles(_) => DomainKind::Tiles,
            Instance::Pancake(_) => DomainKind::Pancake,
            Instance::Blocks(_) => DomainKind::Blocks,
            Instance::Vacuum(_) => DomainKind::Vacuum,
            Instance::Grid(_) => DomainKind::Grid,
        }
    }

    /// Parses instance text. Grid instances need the scenario text as well.
    pub fn parse(
        kind: DomainKind,
        text: &str,
        scenario: Option<&str>,
    ) -> Result<Self, DomainError> {
        Ok(match kind {
            DomainKind::Tiles => Instance::Tiles(TilesInstance::parse(text)?),
            DomainKind::Pancake => Instance::Pancake(PancakeInstance::parse(text)?),
            DomainKind::Blocks => Instance::Blocks(BlocksInstance::parse(text)?),
            DomainKind::Vacuum => Instance::Vacuum(VacuumInstance::parse(text)?),
            DomainKind::Grid => {
                let scen = scenario
                    .ok_or_else(|| DomainError::Invalid("grid instance without scenario".into()))?;
                Instance::Grid(GridInstance::from_texts(text, scen)?)
            }
        })
    }

    /// Files that represent this instance: `(extension, contents)`.
    pub fn to_files(&self) -> Vec<(&'static str, String)> {
        match self {
            Instance::Tiles(i) => vec![("tiles", i.to_text())],
            Instance::Pancake(i) => vec![("pancake", i.to_text())],
            Instance::Blocks(i) => vec![("blocks", i.to_text())],
            Instance::Vacuum(i) => vec![("vacuum", i.to_text())],
            Instance::Grid(i) => vec![("map", i.map.to_movingai()), ("scen", i.scenario_text())],
        }
    }
}

fn instance_error(path: &Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Instance(format!("{}: {e}", path.display()))
}

/// Loads one instance file. For grids, `path` is the `.map` file and the
/// scenario is read from the `.scen` file with the same stem.
pub fn load_file(kind: DomainKind, path: &Path) -> Result<NamedInstance, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| instance_error(path, e))?;
    let scenario = if kind == DomainKind::Grid {
        let scen = path.with_extension("scen");
        Some(fs::read_to_string(&scen).map_err(|e| instance_error(&scen, e))?)
    } else {
        None
    };
    let instance =
        Instance::parse(kind, &text, scenario.as_deref()).map_err(|e| instance_error(path, e))?;
    let name = path
        .file_stem()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    Ok(NamedInstance { name, instance })
}

/// Loads a single file, or every file with the domain's extension in a
/// directory (sorted by name).
pub fn load_path(kind: DomainKind, path: &Path) -> Result<Vec<NamedInstance>, HarnessError> {
    if path.is_dir() {
        let mut files: Vec<PathBuf> = fs::read_dir(path)
            .map_err(|e| instance_error(path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == kind.extension()))
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(instance_error(
                path,
                format!("no .{} files", kind.extension()),
            ));
        }
        files.iter().map(|f| load_file(kind, f)).collect()
    } else {
        Ok(vec![load_file(kind, path)?])
    }
}

fn param<T: std::str::FromStr>(
    p: &BTreeMap<String, String>,
    key: &str,
    default: T,
) -> Result<T, HarnessError> {
    match p.get(key) {
        Some(v) => v
            .parse()
            .map_err(|_| HarnessError::Config(format!("bad generator value `{v}` for `{key}`"))),
        None => Ok(default),
    }
}

const GEN_KEYS: &[(DomainKind, &[&str])] = &[
    (DomainKind::Tiles, &["count", "w", "h"]),
    (DomainKind::Pancake, &["count", "n"]),
    (DomainKind::Blocks, &["count", "n"]),
    (DomainKind::Vacuum, &["count", "w", "h", "dirts", "density"]),
    (DomainKind::Grid, &["count", "w", "h", "density"]),
];

/// Deterministic instance set from generator parameters and a seed.
///
/// Parameters (defaults in brackets): tiles `w` [3], `h` [w]; pancake `n`
/// [7]; blocks `n` [5]; vacuum `w` [8], `h` [w], `dirts` [3], `density`
/// [0.1]; grid `w` [20], `h` [w], `density` [0.35]. All take `count` [1].
pub fn generate(
    kind: DomainKind,
    params: &BTreeMap<String, String>,
    seed: u64,
) -> Result<Vec<NamedInstance>, HarnessError> {
    let allowed = GEN_KEYS
        .iter()
        .find(|(k, _)| *k == kind)
        .map(|(_, v)| *v)
        .unwrap_or_default();
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(HarnessError::Config(format!(
            "unknown generator parameter `{k}` for {}",
            kind.name()
        )));
    }
    let count: usize = param(params, "count", 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bad = |e: DomainError| HarnessError::Config(e.to_string());
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let instance = match kind {
            DomainKind::Tiles => {
                let w: usize = param(params, "w", 3)?;
                let h: usize = param(params, "h", w)?;
                if !(2..=5).contains(&w) || !(2..=5).contains(&h) {
                    return Err(HarnessError::Config(format!(
                        "tiles board {w}x{h} unsupported"
                    )));
                }
                Instance::Tiles(TilesInstance::random(&mut rng, w, h))
            }
            DomainKind::Pancake => {
                let n: usize = param(params, "n", 7)?;
                if !(2..=254).contains(&n) {
                    return Err(HarnessError::Config(format!("{n} pancakes unsupported")));
                }
                Instance::Pancake(PancakeInstance::random(&mut rng, n))
            }
            DomainKind::Blocks => {
                let n: usize = param(params, "n", 5)?;
                if !(1..=200).contains(&n) {
                    return Err(HarnessError::Config(format!("{n} blocks unsupported")));
                }
                Instance::Blocks(BlocksInstance::random(&mut rng, n))
            }
            DomainKind::Vacuum => {
                let w: usize = param(params, "w", 8)?;
                let h: usize = param(params, "h", w)?;
                let dirts: usize = param(params, "dirts", 3)?;
                let density: f64 = param(params, "density", 0.1)?;
                if !(0.0..1.0).contains(&density) {
                    return Err(HarnessError::Config(format!(
                        "density {density} outside [0, 1)"
                    )));
                }
                Instance::Vacuum(
                    VacuumInstance::random(&mut rng, w, h, dirts, density).map_err(bad)?,
                )
            }
            DomainKind::Grid => {
                let w: usize = param(params, "w", 20)?;
                let h: usize = param(params, "h", w)?;
                let density: f64 = param(params, "density", 0.35)?;
                Instance::Grid(GridInstance::random(&mut rng, w, h, density).map_err(bad)?)
            }
        };
        out.push(NamedInstance {
            name: format!("{}-{i:04}", kind.name()),
            instance,
        });
    }
    Ok(out)
}

/// Writes each instance as `<dir>/<name>.<ext>`.
pub fn write_all(dir: &Path, instances: &[NamedInstance]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for inst in instances {
        for (ext, text) in inst.instance.to_files() {
            fs::write(dir.join(format!("{}.{ext}", inst.name)), text)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn same_seed_same_files() {
        for kind in [
            DomainKind::Tiles,
            DomainKind::Pancake,
            DomainKind::Blocks,
            DomainKind::Vacuum,
            DomainKind::Grid,
        ] {
            let p = params(&[("count", "4")]);
            let a = generate(kind, &p, 9).unwrap();
            let b = generate(kind, &p, 9).unwrap();
            assert_eq!(a, b);
            let c = generate(kind, &p, 10).unwrap();
            assert_ne!(a, c);
            let dir = tempfile::tempdir().unwrap();
            write_all(dir.path(), &a).unwrap();
            let loaded = load_path(kind, dir.path()).unwrap();
            assert_eq!(loaded, a);
        }
    }

    #[test]
    fn generator_rejects_bad_params() {
        assert!(generate(DomainKind::Tiles, &params(&[("w", "9")]), 0).is_err());
        assert!(generate(DomainKind::Tiles, &params(&[("n", "9")]), 0).is_err());
        assert!(generate(
            DomainKind::Vacuum,
            &params(&[("w", "2"), ("dirts", "9")]),
            0
        )
        .is_err());
        assert!(generate(DomainKind::Pancake, &params(&[("count", "x")]), 0).is_err());
    }

    #[test]
    fn parse_failure_is_an_instance_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.tiles");
        fs::write(&p, "3 3\n0 1 2\n").unwrap();
        assert!(matches!(
            load_path(DomainKind::Tiles, &p),
            Err(HarnessError::Instance(_))
        ));
        let p = dir.path().join("lonely.map");
        fs::write(&p, "type octile\nheight 1\nwidth 2\nmap\n..\n").unwrap();
        assert!(matches!(
            load_file(DomainKind::Grid, &p),
            Err(HarnessError::Instance(_))
        ));
    }
}
