//! Experiment configuration: an optional TOML file overridden by flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use corrgraph_core::admissibility::DEFAULT_CYCLE_CAP;
use corrgraph_core::moment::DEFAULT_C_PRIME;
use corrgraph_core::rho::{DEFAULT_RHO_N, DEFAULT_RHO_TRIALS};
use corrgraph_core::rng::DEFAULT_SEED;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    File { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

fn usage(msg: impl Into<String>) -> ConfigError {
    ConfigError::Usage(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    RhoSweep,
    Detect,
    Tv,
    AdmissibilityRate,
    MomentTrend,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::RhoSweep => "rho-sweep",
            ExperimentKind::Detect => "detect",
            ExperimentKind::Tv => "tv",
            ExperimentKind::AdmissibilityRate => "admissibility-rate",
            ExperimentKind::MomentTrend => "moment-trend",
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "rho-sweep" => ExperimentKind::RhoSweep,
            "detect" => ExperimentKind::Detect,
            "tv" => ExperimentKind::Tv,
            "admissibility-rate" => ExperimentKind::AdmissibilityRate,
            "moment-trend" => ExperimentKind::MomentTrend,
            _ => {
                return Err(format!(
                    "unknown experiment `{s}` (rho-sweep, detect, tv, admissibility-rate, moment-trend)"
                ))
            }
        })
    }
}

/// Which side of the detection experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectMode {
    /// Both hypotheses.
    Both,
    /// Correlated pairs scored with the planted bijection.
    Planted,
    /// Independent pairs scored with the identity bijection.
    H0,
    /// Correlated and independent pairs maximised over every bijection (n ≤ 8).
    Bruteforce,
}

impl FromStr for DetectMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "both" => DetectMode::Both,
            "planted" => DetectMode::Planted,
            "h0" => DetectMode::H0,
            "bruteforce" => DetectMode::Bruteforce,
            _ => return Err(format!("unknown mode `{s}` (both, planted, h0, bruteforce)")),
        })
    }
}

/// Sparsity given either directly or as an exponent, `p = n^(−α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sparsity {
    P(f64),
    Alpha(f64),
}

/// Every setting an experiment may read. Fields left `None` in the file and
/// on the command line fall back to per-kind defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub kind: Option<ExperimentKind>,
    pub n: Option<usize>,
    pub alpha: Option<f64>,
    pub p: Option<f64>,
    pub s: Option<f64>,
    pub epsilon: Option<f64>,
    pub lambda: Option<Vec<f64>>,
    pub s_grid: Option<Vec<f64>>,
    pub n_grid: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub mode: Option<DetectMode>,
    pub lambda_star: Option<f64>,
    pub tau: Option<f64>,
    pub xi: Option<f64>,
    pub delta: Option<f64>,
    pub c_prime: Option<f64>,
    pub k_max: Option<usize>,
    pub cycle_cap: Option<usize>,
    pub rho_n: Option<usize>,
    pub rho_trials: Option<usize>,
    pub tol: Option<f64>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field.clone(); } )*
    };
}

impl ConfigLayer {
    pub fn from_toml(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| ConfigError::File {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    fn sparsity(&self, origin: &str) -> Result<Option<Sparsity>, ConfigError> {
        match (self.p, self.alpha) {
            (Some(_), Some(_)) => Err(usage(format!(
                "{origin}: give either p or alpha, not both"
            ))),
            (Some(p), None) => Ok(Some(Sparsity::P(p))),
            (None, Some(a)) => Ok(Some(Sparsity::Alpha(a))),
            (None, None) => Ok(None),
        }
    }

    /// `self` with every field set in `top` replaced. Sparsity is one slot:
    /// a flag giving `p` or `alpha` replaces whichever the file gave.
    pub fn overlaid(&self, top: &ConfigLayer) -> ConfigLayer {
        let mut out = self.clone();
        if top.p.is_some() || top.alpha.is_some() {
            out.p = top.p;
            out.alpha = top.alpha;
        }
        overlay!(out, top; kind, n, s, epsilon, lambda, s_grid, n_grid, trials, seed, output,
            mode, lambda_star, tau, xi, delta, c_prime, k_max, cycle_cap, rho_n, rho_trials, tol);
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: usize,
    pub sparsity: Option<Sparsity>,
    pub s: Option<f64>,
    pub epsilon: f64,
    pub lambdas: Vec<f64>,
    pub s_grid: Vec<f64>,
    pub n_grid: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub mode: DetectMode,
    pub lambda_star: Option<f64>,
    pub tau: Option<f64>,
    pub xi: Option<f64>,
    /// `None` lets the moment experiment pick half of the observed δ₀.
    pub delta: Option<f64>,
    pub c_prime: f64,
    pub k_max: usize,
    pub cycle_cap: usize,
    pub rho_n: usize,
    pub rho_trials: usize,
    pub tol: f64,
}

impl ExperimentConfig {
    /// `p` at vertex count `n`.
    pub fn p_at(&self, n: usize) -> Option<f64> {
        match self.sparsity? {
            Sparsity::P(p) => Some(p),
            Sparsity::Alpha(a) => Some((n as f64).powf(-a)),
        }
    }

    pub fn p(&self) -> Option<f64> {
        self.p_at(self.n)
    }

    /// `α` with `p = n^(−α)`.
    pub fn alpha(&self) -> Option<f64> {
        match self.sparsity? {
            Sparsity::Alpha(a) => Some(a),
            Sparsity::P(p) => Some(-p.ln() / (self.n as f64).ln()),
        }
    }

    /// `λ = n p s²`, when both `p` and `s` are set.
    pub fn lambda(&self) -> Option<f64> {
        Some(self.n as f64 * self.p()? * self.s?.powi(2))
    }
}

fn positive(name: &str, x: f64) -> Result<f64, ConfigError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(usage(format!("{name} must be positive, got {x}")))
    }
}

fn probability(name: &str, x: f64) -> Result<f64, ConfigError> {
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(usage(format!("{name} must lie in [0, 1], got {x}")))
    }
}

/// Validates a merged layer: `file` values overridden by `flags`.
pub fn parse_config(
    flags: &ConfigLayer,
    file: Option<&ConfigLayer>,
) -> Result<ExperimentConfig, ConfigError> {
    flags.sparsity("flags")?;
    if let Some(f) = file {
        f.sparsity("config file")?;
    }
    let merged = match file {
        Some(f) => f.overlaid(flags),
        None => flags.clone(),
    };
    let kind = merged
        .kind
        .ok_or_else(|| usage("experiment kind is required"))?;
    let sparsity = merged.sparsity("merged configuration")?;
    match sparsity {
        Some(Sparsity::P(p)) => {
            probability("p", p)?;
        }
        Some(Sparsity::Alpha(a)) if !(a > 0.0 && a <= 1.0) => {
            return Err(usage(format!("alpha must lie in (0, 1], got {a}")));
        }
        _ => {}
    }
    let default_n = match kind {
        ExperimentKind::RhoSweep | ExperimentKind::Detect => 2000,
        ExperimentKind::Tv => 3,
        ExperimentKind::AdmissibilityRate => 3000,
        ExperimentKind::MomentTrend => 1000,
    };
    let default_trials = match kind {
        ExperimentKind::RhoSweep | ExperimentKind::Detect => 30,
        ExperimentKind::AdmissibilityRate => 20,
        ExperimentKind::MomentTrend => 10,
        ExperimentKind::Tv => 1,
    };
    let n = merged.n.unwrap_or(default_n);
    let trials = merged.trials.unwrap_or(default_trials);
    if trials == 0 {
        return Err(usage("trials must be positive"));
    }
    if let Some(s) = merged.s {
        probability("s", s)?;
    }
    let epsilon = positive("epsilon", merged.epsilon.unwrap_or(1.0))?;
    let lambdas = merged.lambda.clone().unwrap_or_default();
    for &l in &lambdas {
        positive("lambda", l)?;
    }
    let s_grid = merged.s_grid.clone().unwrap_or_default();
    for &s in &s_grid {
        probability("s", s)?;
    }
    let n_grid = merged.n_grid.clone().unwrap_or_default();
    for (name, v) in [
        ("lambda_star", merged.lambda_star),
        ("tau", merged.tau),
        ("xi", merged.xi),
        ("delta", merged.delta),
    ] {
        if let Some(x) = v {
            positive(name, x)?;
        }
    }
    let c_prime = positive("c_prime", merged.c_prime.unwrap_or(DEFAULT_C_PRIME))?;
    let tol = positive("tol", merged.tol.unwrap_or(0.01))?;
    let config = ExperimentConfig {
        kind,
        n,
        sparsity,
        s: merged.s,
        epsilon,
        lambdas,
        s_grid,
        n_grid,
        trials,
        seed: merged.seed.unwrap_or(DEFAULT_SEED),
        output: merged.output.clone(),
        mode: merged.mode.unwrap_or(DetectMode::Both),
        lambda_star: merged.lambda_star,
        tau: merged.tau,
        xi: merged.xi,
        delta: merged.delta,
        c_prime,
        k_max: merged.k_max.unwrap_or(4),
        cycle_cap: merged.cycle_cap.unwrap_or(DEFAULT_CYCLE_CAP),
        rho_n: merged.rho_n.unwrap_or(DEFAULT_RHO_N),
        rho_trials: merged.rho_trials.unwrap_or(DEFAULT_RHO_TRIALS),
        tol,
    };
    check_kind(&config)?;
    Ok(config)
}

fn check_kind(c: &ExperimentConfig) -> Result<(), ConfigError> {
    match c.kind {
        ExperimentKind::RhoSweep => {
            if c.lambdas.is_empty() {
                return Err(usage("rho-sweep needs a nonempty lambda grid"));
            }
            if c.lambdas.iter().any(|&l| l > c.n as f64) {
                return Err(usage("every lambda must be at most n"));
            }
        }
        ExperimentKind::Detect => {
            if c.sparsity.is_none() {
                return Err(usage("detect needs p or alpha"));
            }
            match c.mode {
                DetectMode::Bruteforce if c.n > 8 => {
                    return Err(usage("bruteforce mode needs n <= 8"))
                }
                DetectMode::Bruteforce if c.n < 3 => {
                    return Err(usage("bruteforce mode needs n >= 3"))
                }
                DetectMode::Both | DetectMode::Planted | DetectMode::H0 if c.n < 100 => {
                    return Err(usage("planted and h0 modes need n >= 100"))
                }
                _ => {}
            }
            if c.mode == DetectMode::Bruteforce && (c.s.is_none() || c.tau.is_none()) {
                return Err(usage("bruteforce mode needs explicit s and tau"));
            }
        }
        ExperimentKind::Tv => {
            if c.n > corrgraph_core::likelihood::TV_CAP {
                return Err(usage("tv needs n <= 4"));
            }
            if c.p().is_none() {
                return Err(usage("tv needs p or alpha"));
            }
            if c.s_grid.is_empty() && c.s.is_none() {
                return Err(usage("tv needs s or an s grid"));
            }
        }
        ExperimentKind::AdmissibilityRate => {
            if c.lambdas.len() != 1 {
                return Err(usage("admissibility-rate needs exactly one lambda"));
            }
            if c.xi.is_none() && c.sparsity.is_none() {
                return Err(usage("admissibility-rate needs xi, or alpha to derive it"));
            }
            if c.n < 3 {
                return Err(usage("admissibility-rate needs n >= 3"));
            }
        }
        ExperimentKind::MomentTrend => {
            if c.lambdas.len() != 1 {
                return Err(usage("moment-trend needs exactly one lambda"));
            }
            if c.n_grid.is_empty() {
                return Err(usage("moment-trend needs an n grid"));
            }
            if !matches!(c.sparsity, Some(Sparsity::Alpha(_))) {
                return Err(usage("moment-trend needs alpha so that p follows n"));
            }
        }
    }
    Ok(())
}
