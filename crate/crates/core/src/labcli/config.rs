//! `key = value` configuration with `#` comments and `[section]` headers.

use std::collections::BTreeMap;
use std::path::PathBuf;

use super::LabError;
use crate::frogcore::HorizonPolicy;
use crate::percpath::ExactnessCaps;
use crate::walkfield::{keyed::absorb, MAX_DIM};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Sim,
    Scaling,
    Perc,
    FmGap,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Sim => "sim",
            Kind::Scaling => "scaling",
            Kind::Perc => "perc",
            Kind::FmGap => "fmgap",
        }
    }

    fn parse(s: &str) -> Option<Kind> {
        Some(match s {
            "sim" => Kind::Sim,
            "scaling" => Kind::Scaling,
            "perc" => Kind::Perc,
            "fmgap" => Kind::FmGap,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Independent,
    MDependent,
    Frog,
}

impl FieldKind {
    pub fn name(self) -> &'static str {
        match self {
            FieldKind::Independent => "independent",
            FieldKind::MDependent => "m_dependent",
            FieldKind::Frog => "frog",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    EngineOracle,
    Genealogy,
    Subadditivity,
    MaskLocality,
    T2Reduction,
    Coupling,
    Percolation,
    Parity,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::EngineOracle,
        Suite::Genealogy,
        Suite::Subadditivity,
        Suite::MaskLocality,
        Suite::T2Reduction,
        Suite::Coupling,
        Suite::Percolation,
        Suite::Parity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::EngineOracle => "engine_oracle",
            Suite::Genealogy => "genealogy",
            Suite::Subadditivity => "subadditivity",
            Suite::MaskLocality => "mask_locality",
            Suite::T2Reduction => "t2_reduction",
            Suite::Coupling => "coupling",
            Suite::Percolation => "percolation",
            Suite::Parity => "parity",
        }
    }

    pub fn default_instances(self) -> u64 {
        match self {
            Suite::EngineOracle => 200,
            Suite::Genealogy => 10_000,
            Suite::Subadditivity => 10_000,
            Suite::MaskLocality => 1_000,
            Suite::T2Reduction => 100,
            Suite::Coupling => 1_000,
            Suite::Percolation => 1_000,
            Suite::Parity => 1_000,
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimParams {
    pub n: Vec<u32>,
    pub replicas: u64,
    pub direction: Vec<i32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PercParams {
    pub l: Vec<u32>,
    pub m: Vec<u32>,
    pub p: Vec<f64>,
    pub instances: u64,
    pub field: FieldKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FmGapParams {
    pub x: Vec<i32>,
    pub replicas: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyParams {
    /// Selected suites with their instance counts, in battery order.
    pub suites: Vec<(Suite, u64)>,
    pub corrupt_rng_key: bool,
}

/// Parsed experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    /// `d`; a list is accepted for `scaling`.
    pub dims: Vec<usize>,
    pub kind: Option<Kind>,
    pub output: PathBuf,
    pub workers: Option<usize>,
    /// Tasks hold this many replicas (or instances).
    pub block: u64,
    pub horizon_cap: u64,
    pub sim: SimParams,
    pub scaling: SimParams,
    pub perc: PercParams,
    pub fmgap: FmGapParams,
    pub verify: VerifyParams,
    pub caps: ExactnessCaps,
    /// `section.key -> value` as written, for the manifest.
    pub echo: BTreeMap<String, String>,
}

const KNOWN: &[&str] = &[
    "master_seed",
    "d",
    "kind",
    "output",
    "workers",
    "block",
    "horizon_cap",
    "sim.n",
    "sim.replicas",
    "sim.direction",
    "scaling.n",
    "scaling.replicas",
    "perc.L",
    "perc.M",
    "perc.p",
    "perc.instances",
    "perc.field",
    "perc.path_cap",
    "perc.animal_cap",
    "fmgap.x",
    "fmgap.replicas",
    "verify.suites",
    "verify.fault",
    "verify.engine_oracle",
    "verify.genealogy",
    "verify.subadditivity",
    "verify.mask_locality",
    "verify.t2_reduction",
    "verify.coupling",
    "verify.percolation",
    "verify.parity",
];

struct Raw {
    entries: BTreeMap<String, (String, usize)>,
}

impl Raw {
    fn parse(text: &str) -> Result<Raw, LabError> {
        let mut entries = BTreeMap::new();
        let mut section = String::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| LabError::config(lineno, "unterminated section header"))?
                    .trim();
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(LabError::config(lineno, format!("bad section name {name:?}")));
                }
                section = name.to_string();
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| LabError::config(lineno, "expected `key = value`"))?;
            let k = k.trim();
            let key = if section.is_empty() {
                k.to_string()
            } else {
                format!("{section}.{k}")
            };
            if !KNOWN.contains(&key.as_str()) {
                return Err(LabError::config(lineno, format!("unknown key {key:?}")));
            }
            if entries.insert(key.clone(), (v.trim().to_string(), lineno)).is_some() {
                return Err(LabError::config(lineno, format!("duplicate key {key:?}")));
            }
        }
        Ok(Raw { entries })
    }

    fn get(&self, key: &str) -> Option<(&str, usize)> {
        self.entries.get(key).map(|(v, l)| (v.as_str(), *l))
    }

    fn scalar<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, LabError> {
        match self.get(key) {
            None => Ok(None),
            Some((v, l)) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| LabError::config(l, format!("bad value {v:?} for {key}"))),
        }
    }

    fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, LabError> {
        match self.get(key) {
            None => Ok(None),
            Some((v, l)) => {
                let items: Result<Vec<T>, _> = v
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::parse::<T>)
                    .collect();
                items
                    .map(Some)
                    .map_err(|_| LabError::config(l, format!("bad list {v:?} for {key}")))
            }
        }
    }

    fn line(&self, key: &str) -> usize {
        self.get(key).map(|(_, l)| l).unwrap_or(0)
    }
}

fn unit_direction(dim: usize) -> Vec<i32> {
    let mut v = vec![0; dim];
    v[0] = 1;
    v
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, LabError> {
        let raw = Raw::parse(text)?;
        let master_seed = raw
            .scalar::<u64>("master_seed")?
            .ok_or_else(|| LabError::config(0, "master_seed is required"))?;
        let dims = raw.list::<usize>("d")?.unwrap_or_else(|| vec![2]);
        if dims.is_empty() || dims.iter().any(|d| !(1..=MAX_DIM).contains(d)) {
            return Err(LabError::config(raw.line("d"), format!("d must lie in 1..={MAX_DIM}")));
        }
        let kind = match raw.get("kind") {
            None => None,
            Some((v, l)) => Some(
                Kind::parse(v).ok_or_else(|| LabError::config(l, format!("unknown kind {v:?}")))?,
            ),
        };
        if dims.len() > 1 && kind != Some(Kind::Scaling) {
            return Err(LabError::config(raw.line("d"), "several d values need kind = scaling"));
        }
        let d0 = dims[0];
        let positive = |key: &str, v: u64| {
            if v == 0 {
                Err(LabError::config(raw.line(key), format!("{key} must be positive")))
            } else {
                Ok(v)
            }
        };
        let block = positive("block", raw.scalar("block")?.unwrap_or(64))?;
        let horizon_cap = positive(
            "horizon_cap",
            raw.scalar("horizon_cap")?.unwrap_or(HorizonPolicy::DEFAULT_CAP),
        )?;
        let workers = raw.scalar::<usize>("workers")?;
        let output = PathBuf::from(raw.get("output").map(|(v, _)| v).unwrap_or("results"));

        let walk_params = |sec: &str| -> Result<SimParams, LabError> {
            let nk = format!("{sec}.n");
            let n = raw.list::<u32>(&nk)?.unwrap_or_else(|| vec![8]);
            if n.is_empty() || n.contains(&0) {
                return Err(LabError::config(raw.line(&nk), "n values must be positive"));
            }
            let rk = format!("{sec}.replicas");
            let replicas = raw.scalar::<u64>(&rk)?.unwrap_or(100);
            if replicas < 2 && sec == "scaling" {
                return Err(LabError::config(raw.line(&rk), "scaling needs at least 2 replicas"));
            }
            positive(&rk, replicas)?;
            let dk = format!("{sec}.direction");
            let direction = match raw.list::<i32>(&dk)? {
                None => unit_direction(d0),
                Some(v) => v,
            };
            if sec == "sim" && (direction.len() != d0 || direction.iter().all(|&c| c == 0)) {
                return Err(LabError::config(
                    raw.line(&dk),
                    format!("direction must be a nonzero vector of {d0} integers"),
                ));
            }
            Ok(SimParams {
                n,
                replicas,
                direction,
            })
        };
        let sim = walk_params("sim")?;
        let scaling = walk_params("scaling")?;

        let mut caps = ExactnessCaps::default();
        if let Some(c) = raw.scalar::<u32>("perc.path_cap")? {
            caps.path_radius = c;
        }
        if let Some(c) = raw.scalar::<u32>("perc.animal_cap")? {
            caps.animal_cells = c;
        }
        let perc = PercParams {
            l: raw.list("perc.L")?.unwrap_or_else(|| vec![5]),
            m: raw.list("perc.M")?.unwrap_or_else(|| vec![1]),
            p: raw.list("perc.p")?.unwrap_or_else(|| vec![0.2]),
            instances: positive("perc.instances", raw.scalar("perc.instances")?.unwrap_or(100))?,
            field: match raw.get("perc.field").map(|(v, _)| v) {
                None | Some("m_dependent") => FieldKind::MDependent,
                Some("independent") => FieldKind::Independent,
                Some("frog") => FieldKind::Frog,
                Some(v) => {
                    return Err(LabError::config(
                        raw.line("perc.field"),
                        format!("unknown field kind {v:?}"),
                    ))
                }
            },
        };
        if perc.l.is_empty() || perc.m.is_empty() || perc.p.is_empty() {
            return Err(LabError::config(0, "perc grids must be nonempty"));
        }
        if let Some(&l) = perc.l.iter().find(|&&l| l > caps.path_radius) {
            return Err(LabError::config(
                raw.line("perc.L"),
                format!("L = {l} exceeds the exact-search cap {}", caps.path_radius),
            ));
        }
        if let Some(&p) = perc.p.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(LabError::config(raw.line("perc.p"), format!("p = {p} outside [0, 1]")));
        }
        if perc.field == FieldKind::Frog && perc.m.contains(&0) {
            return Err(LabError::config(raw.line("perc.M"), "frog fields need M >= 1"));
        }

        let fmgap = FmGapParams {
            x: raw.list("fmgap.x")?.unwrap_or_else(|| {
                let mut v = vec![0; d0];
                v[0] = 16;
                v
            }),
            replicas: raw.scalar("fmgap.replicas")?.unwrap_or(1000),
        };
        if fmgap.x.len() != d0 || fmgap.x.iter().all(|&c| c == 0) {
            return Err(LabError::config(
                raw.line("fmgap.x"),
                format!("fmgap.x must be a nonzero vector of {d0} integers"),
            ));
        }
        if fmgap.replicas < 2 {
            return Err(LabError::config(raw.line("fmgap.replicas"), "fmgap needs at least 2 replicas"));
        }

        let selected: Vec<Suite> = match raw.get("verify.suites") {
            None => Suite::ALL.to_vec(),
            Some(("all", _)) => Suite::ALL.to_vec(),
            Some((v, l)) => {
                let mut out = Vec::new();
                for name in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let s = Suite::parse(name)
                        .ok_or_else(|| LabError::config(l, format!("unknown suite {name:?}")))?;
                    if !out.contains(&s) {
                        out.push(s);
                    }
                }
                if out.is_empty() {
                    return Err(LabError::config(l, "empty verification battery"));
                }
                out.sort();
                out
            }
        };
        let mut suites = Vec::new();
        for s in selected {
            let key = format!("verify.{}", s.name());
            let count = raw.scalar::<u64>(&key)?.unwrap_or(s.default_instances());
            suites.push((s, count));
        }
        let corrupt_rng_key = match raw.get("verify.fault") {
            None | Some(("none", _)) => false,
            Some(("corrupt_rng_key", _)) => true,
            Some((v, l)) => return Err(LabError::config(l, format!("unknown fault {v:?}"))),
        };

        let echo = raw
            .entries
            .iter()
            .map(|(k, (v, _))| (k.clone(), v.clone()))
            .collect();
        Ok(ExperimentConfig {
            master_seed,
            dims,
            kind,
            output,
            workers,
            block,
            horizon_cap,
            sim,
            scaling,
            perc,
            fmgap,
            verify: VerifyParams {
                suites,
                corrupt_rng_key,
            },
            caps,
            echo,
        })
    }

    pub fn dim(&self) -> usize {
        self.dims[0]
    }

    pub fn policy(&self) -> HorizonPolicy {
        HorizonPolicy::adaptive(self.horizon_cap)
    }

    /// Hash of every setting that can change output bytes.
    pub fn fingerprint(&self) -> u64 {
        let mut h = 0x4652_4f47_4c41_4200;
        for (k, v) in &self.echo {
            if k == "workers" || k == "output" {
                continue;
            }
            for b in k.bytes().chain(*b"=").chain(v.bytes()).chain(*b"\n") {
                h = absorb(h, b as u64);
            }
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_comments() {
        let c = ExperimentConfig::parse(
            "# run\nmaster_seed = 1\nkind = sim  # inline\nd = 2\n[sim]\nn = 8, 16\nreplicas = 4\n",
        )
        .unwrap();
        assert_eq!(c.kind, Some(Kind::Sim));
        assert_eq!(c.sim.n, vec![8, 16]);
        assert_eq!(c.sim.replicas, 4);
        assert_eq!(c.sim.direction, vec![1, 0]);
        assert_eq!(c.verify.suites.len(), 8);
    }

    #[test]
    fn errors_carry_lines() {
        let e = ExperimentConfig::parse("master_seed = 1\nbogus = 3\n").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("line 2"));
        assert!(ExperimentConfig::parse("kind = sim\n").is_err());
        assert!(ExperimentConfig::parse("master_seed = 1\n[verify]\nsuites =\n").is_err());
        assert!(ExperimentConfig::parse("master_seed = 1\nmaster_seed = 2\n").is_err());
        assert!(ExperimentConfig::parse("master_seed = 1\nd = 7\n").is_err());
    }

    #[test]
    fn fingerprint_ignores_workers() {
        let a = ExperimentConfig::parse("master_seed = 1\nworkers = 1\n").unwrap();
        let b = ExperimentConfig::parse("master_seed = 1\nworkers = 8\n").unwrap();
        let c = ExperimentConfig::parse("master_seed = 2\n").unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_ne!(a.fingerprint(), c.fingerprint());
    }
}
