//! Experiment configuration: a flat JSON file whose keys mirror the CLI
//! flags, merged with command-line overrides, then validated into the
//! per-experiment parameter structs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// A numeric config value that may be a single number or a sweep list.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumOrList {
    Num(f64),
    List(Vec<f64>),
}

impl NumOrList {
    pub fn as_list(&self) -> Vec<f64> {
        match self {
            NumOrList::Num(v) => vec![*v],
            NumOrList::List(v) => v.clone(),
        }
    }

    /// Parse a comma-separated CLI value.
    pub fn parse(text: &str) -> Result<Self> {
        let vals: std::result::Result<Vec<f64>, _> =
            text.split(',').map(|t| t.trim().parse::<f64>()).collect();
        let vals =
            vals.map_err(|_| HarnessError::Config(format!("cannot parse number list {text:?}")))?;
        if vals.is_empty() {
            return Err(HarnessError::Config(format!("empty number list {text:?}")));
        }
        Ok(if vals.len() == 1 { NumOrList::Num(vals[0]) } else { NumOrList::List(vals) })
    }
}

/// Raw configuration: every field optional, flat keys, unknown keys rejected.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub kind: Option<String>,
    pub n: Option<NumOrList>,
    #[serde(rename = "L")]
    pub l: Option<f64>,
    pub p: Option<NumOrList>,
    pub eps: Option<NumOrList>,
    pub s: Option<NumOrList>,
    pub seed: Option<u64>,
    pub tmax: Option<f64>,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub levels: Option<Vec<usize>>,
    pub snapshot_times: Option<Vec<f64>>,
    pub gamma0: Option<f64>,
    pub gamma1: Option<f64>,
    pub amplitude: Option<f64>,
    pub init: Option<String>,
    pub nucleation: Option<Vec<[f64; 2]>>,
    pub nucleation_amplitude: Option<f64>,
    pub nucleation_sigma: Option<f64>,
    pub window_lo: Option<f64>,
    pub window_hi: Option<f64>,
    pub energy_offset: Option<f64>,
    pub max_iter: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| HarnessError::ConfigFile { path: path.to_owned(), source })?;
        serde_json::from_str(&text)
            .map_err(|source| HarnessError::ConfigParse { path: path.to_owned(), source })
    }

    /// Overlay `other` on `self`: any key present in `other` wins.
    pub fn merge(&mut self, other: FileConfig) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if other.$field.is_some() { self.$field = other.$field; })*
            };
        }
        take!(
            kind, n, l, p, eps, s, seed, tmax, out, tol, levels, snapshot_times, gamma0,
            gamma1, amplitude, init, nucleation, nucleation_amplitude, nucleation_sigma,
            window_lo, window_hi, energy_offset, max_iter
        );
    }
}

fn single(v: &Option<NumOrList>, name: &str, default: f64) -> Result<f64> {
    match v {
        None => Ok(default),
        Some(NumOrList::Num(x)) => Ok(*x),
        Some(NumOrList::List(l)) if l.len() == 1 => Ok(l[0]),
        Some(_) => Err(HarnessError::Config(format!("{name} must be a single value here"))),
    }
}

fn as_usize(v: f64, name: &str) -> Result<usize> {
    if v.fract() != 0.0 || v < 0.0 {
        return Err(HarnessError::Config(format!("{name} must be a nonnegative integer")));
    }
    Ok(v as usize)
}

/// Which discrete problem the convergence study runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergeKind {
    P4,
    P6,
}

#[derive(Debug, Clone)]
pub struct ConvergeParams {
    pub kind: ConvergeKind,
    pub levels: Vec<usize>,
    pub l: f64,
    pub eps: f64,
    pub tmax: f64,
    pub tol: f64,
    pub out: Option<PathBuf>,
}

pub fn resolve_converge(cfg: &FileConfig) -> Result<ConvergeParams> {
    let kind = match cfg.kind.as_deref() {
        Some("p4") => ConvergeKind::P4,
        Some("p6") => ConvergeKind::P6,
        Some(other) => {
            return Err(HarnessError::Config(format!(
                "converge kind must be 'p4' or 'p6', got {other:?}"
            )))
        }
        None => ConvergeKind::P4,
    };
    let levels = cfg.levels.clone().unwrap_or_else(|| vec![16, 32, 64]);
    if levels.len() < 2 {
        return Err(HarnessError::Config("need at least two levels".into()));
    }
    for w in levels.windows(2) {
        if w[1] != 2 * w[0] {
            return Err(HarnessError::Config(format!(
                "levels must double at each step, got {levels:?}"
            )));
        }
    }
    Ok(ConvergeParams {
        kind,
        levels,
        l: cfg.l.unwrap_or(3.2),
        eps: single(&cfg.eps, "eps", 0.1)?,
        tmax: cfg.tmax.unwrap_or(0.32),
        tol: cfg.tol.unwrap_or(1e-9),
        out: cfg.out.clone(),
    })
}

#[derive(Debug, Clone)]
pub struct ComplexityParams {
    pub ps: Vec<f64>,
    pub epss: Vec<f64>,
    pub ss: Vec<f64>,
    pub ns: Vec<usize>,
    /// Sup-norm error against the manufactured target at which a trace stops.
    pub gamma_tol: f64,
    pub max_iter: usize,
    pub out: Option<PathBuf>,
}

pub fn resolve_complexity(cfg: &FileConfig) -> Result<ComplexityParams> {
    let ns = cfg
        .n
        .as_ref()
        .map(|v| v.as_list())
        .unwrap_or_else(|| vec![128.0])
        .into_iter()
        .map(|v| as_usize(v, "n"))
        .collect::<Result<Vec<_>>>()?;
    Ok(ComplexityParams {
        ps: cfg.p.as_ref().map(|v| v.as_list()).unwrap_or_else(|| vec![4.0]),
        epss: cfg.eps.as_ref().map(|v| v.as_list()).unwrap_or_else(|| vec![0.03]),
        ss: cfg.s.as_ref().map(|v| v.as_list()).unwrap_or_else(|| vec![0.01]),
        ns,
        gamma_tol: cfg.tol.unwrap_or(1e-8),
        max_iter: cfg.max_iter.unwrap_or(500),
        out: cfg.out.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvolveKind {
    ThinFilm,
    Spfc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    Random,
    Sinusoidal,
}

#[derive(Debug, Clone)]
pub struct EvolveParams {
    pub kind: EvolveKind,
    pub n: usize,
    pub l: f64,
    pub p: u32,
    pub eps: f64,
    pub s: f64,
    pub gamma0: f64,
    pub gamma1: f64,
    pub seed: u64,
    pub amplitude: f64,
    pub init: InitKind,
    pub nucleation: Vec<(f64, f64)>,
    pub nucleation_amplitude: f64,
    pub nucleation_sigma: f64,
    pub tmax: f64,
    pub tol: f64,
    pub snapshot_times: Vec<f64>,
    pub window: (f64, f64),
    /// Added to the physical energy before the log-log slope fit; the raw
    /// thin-film energy crosses zero during coarsening, the excess above its
    /// faceting floor is what scales.
    pub energy_offset: f64,
    pub out: PathBuf,
}

pub fn resolve_evolve(cfg: &FileConfig) -> Result<EvolveParams> {
    let kind = match cfg.kind.as_deref() {
        Some("thin-film") | Some("thin_film") => EvolveKind::ThinFilm,
        Some("spfc") => EvolveKind::Spfc,
        Some(other) => {
            return Err(HarnessError::Config(format!(
                "evolve kind must be 'thin-film' or 'spfc', got {other:?}"
            )))
        }
        None => EvolveKind::ThinFilm,
    };
    let n = as_usize(single(&cfg.n, "n", 128.0)?, "n")?;
    let l = cfg.l.unwrap_or(match kind {
        EvolveKind::ThinFilm => 12.8,
        EvolveKind::Spfc => 100.0,
    });
    let p = as_usize(single(&cfg.p, "p", 4.0)?, "p")? as u32;
    let eps = single(
        &cfg.eps,
        "eps",
        match kind {
            EvolveKind::ThinFilm => 0.03,
            EvolveKind::Spfc => 1.0,
        },
    )?;
    let s = single(&cfg.s, "s", 0.01)?;
    let tmax = cfg
        .tmax
        .ok_or_else(|| HarnessError::Config("evolve needs tmax (final time)".into()))?;
    let init = match cfg.init.as_deref() {
        Some("random") | None => InitKind::Random,
        Some("sinusoidal") => InitKind::Sinusoidal,
        Some(other) => {
            return Err(HarnessError::Config(format!(
                "init must be 'random' or 'sinusoidal', got {other:?}"
            )))
        }
    };
    let window_lo = cfg.window_lo.unwrap_or(f64::max(1.0, tmax / 100.0));
    let window_hi = cfg.window_hi.unwrap_or(tmax);
    if !(window_lo > 0.0 && window_hi > window_lo) {
        return Err(HarnessError::Config(format!(
            "bad slope-fit window [{window_lo}, {window_hi}]"
        )));
    }
    let energy_offset = cfg.energy_offset.unwrap_or(match kind {
        // the faceting floor of the slope-selection energy is
        // -(1/2 - 1/p) L^2; the decaying excess above it is fitted
        EvolveKind::ThinFilm => (0.5 - 1.0 / p as f64) * l * l,
        EvolveKind::Spfc => 0.0,
    });
    Ok(EvolveParams {
        kind,
        n,
        l,
        p,
        eps,
        s,
        gamma0: cfg.gamma0.unwrap_or(0.5),
        gamma1: cfg.gamma1.unwrap_or(2.0),
        seed: cfg.seed.unwrap_or(0),
        amplitude: cfg.amplitude.unwrap_or(0.05),
        init,
        nucleation: cfg
            .nucleation
            .clone()
            .unwrap_or_default()
            .into_iter()
            .map(|c| (c[0], c[1]))
            .collect(),
        nucleation_amplitude: cfg.nucleation_amplitude.unwrap_or(0.3),
        nucleation_sigma: cfg.nucleation_sigma.unwrap_or(2.0),
        tmax,
        tol: cfg.tol.unwrap_or(1e-9),
        snapshot_times: cfg.snapshot_times.clone().unwrap_or_default(),
        window: (window_lo, window_hi),
        energy_offset,
        out: cfg.out.clone().unwrap_or_else(|| PathBuf::from("gridflow-out")),
    })
}
