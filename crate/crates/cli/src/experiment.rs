//! Batch experiments. Each returns a [`Table`] whose rows are in trial order
//! plus a summary recomputable from those rows.

use std::fmt::Write as _;

use anyhow::{bail, ensure, Context, Result};
use corrgraph_core::admissibility::{check_admissible, DEFAULT_DELTA};
use corrgraph_core::detection::{
    h0_union_bound, size_floor, statistic_bruteforce, statistic_identity, statistic_planted,
    threshold_tau, Decision, DetectionOutcome, Threshold, UnionBound,
};
use corrgraph_core::graph::{sample_correlated_pair, sample_er, sample_independent_pair};
use corrgraph_core::likelihood::exact_tv;
use corrgraph_core::moment::{delta0, truncated_moment_terms, MomentParams};
use corrgraph_core::rho::{estimate_rho, MonteCarloRho, RhoEstimate};
use corrgraph_core::rng::RngSeed;
use corrgraph_core::runner::TrialRunner;
use corrgraph_core::stats::mean_stderr;

use crate::config::{DetectMode, ExperimentConfig, ExperimentKind};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

// Labels separating the random streams of the parts of an experiment.
const RHO_LABEL: u64 = 1;
const H1_LABEL: u64 = 2;
const H0_LABEL: u64 = 3;
const ADMISSIBILITY_LABEL: u64 = 4;
const MOMENT_LABEL: u64 = 5;

/// Header comment line naming the schema of a CSV file.
pub fn schema_line(kind: &str) -> String {
    format!("# corrgraph-detect v{VERSION} {kind}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub kind: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(kind: &'static str, columns: &[&'static str]) -> Self {
        Table {
            kind,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = schema_line(self.kind);
        out.push('\n');
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

/// ϱ̂ curve seeded for threshold computations from a master seed.
pub fn rho_curve<R: TrialRunner>(
    n: usize,
    trials: usize,
    seed: u64,
    runner: &R,
) -> MonteCarloRho<'_, R> {
    MonteCarloRho::new(n, trials, RngSeed::new(seed).derive(RHO_LABEL), runner)
}

pub fn compute_threshold<R: TrialRunner>(
    alpha: f64,
    epsilon: f64,
    rho_n: usize,
    rho_trials: usize,
    seed: u64,
    tol: f64,
    runner: &R,
) -> Result<Threshold> {
    let curve = rho_curve(rho_n, rho_trials, seed, runner);
    threshold_tau(alpha, epsilon, &curve, tol).context("threshold computation failed")
}

/// λ̂*, τ and ξ, taken from the configuration when given and estimated
/// otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdView {
    pub lambda_star: Option<f64>,
    pub tau: Option<f64>,
    pub xi: Option<f64>,
    pub estimated: Option<Threshold>,
}

pub fn resolve_threshold<R: TrialRunner>(
    config: &ExperimentConfig,
    need_tau: bool,
    need_xi: bool,
    runner: &R,
) -> Result<ThresholdView> {
    let satisfied = config.lambda_star.is_some()
        && (!need_tau || config.tau.is_some())
        && (!need_xi || config.xi.is_some());
    let only_xi = need_xi && !need_tau && config.xi.is_some();
    if satisfied || only_xi {
        return Ok(ThresholdView {
            lambda_star: config.lambda_star,
            tau: config.tau,
            xi: config.xi,
            estimated: None,
        });
    }
    let alpha = config
        .alpha()
        .context("alpha (or p) is needed to estimate the threshold")?;
    let t = compute_threshold(
        alpha,
        config.epsilon,
        config.rho_n,
        config.rho_trials,
        config.seed,
        config.tol,
        runner,
    )?;
    Ok(ThresholdView {
        lambda_star: Some(config.lambda_star.unwrap_or(t.lambda_star)),
        tau: Some(config.tau.unwrap_or(t.tau)),
        xi: config.xi.or(t.xi),
        estimated: Some(t),
    })
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub table: Table,
    pub estimates: Vec<RhoEstimate>,
    pub warnings: Vec<String>,
}

/// ϱ̂ on a λ grid. All grid points share the trial streams of one seed, so
/// the estimated curve is monotone by construction; a drop larger than three
/// joint standard errors would indicate a defect and is reported.
pub fn run_rho_sweep<R: TrialRunner>(config: &ExperimentConfig, runner: &R) -> Result<SweepOutput> {
    ensure!(!config.lambdas.is_empty(), "empty lambda grid");
    let mut table = Table::new(
        ExperimentKind::RhoSweep.as_str(),
        &["lambda", "n", "trials", "mean", "stderr"],
    );
    let seed = RngSeed::new(config.seed).derive(RHO_LABEL);
    let mut estimates: Vec<RhoEstimate> = Vec::new();
    let mut warnings = Vec::new();
    for &lambda in &config.lambdas {
        let e = estimate_rho(lambda, config.n, config.trials, seed, runner)?;
        table.push(vec![
            lambda.to_string(),
            e.n.to_string(),
            e.trials.to_string(),
            e.mean.to_string(),
            e.stderr.to_string(),
        ]);
        estimates.push(e);
    }
    let mut sorted: Vec<&RhoEstimate> = estimates.iter().collect();
    sorted.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    for w in sorted.windows(2) {
        let joint = w[0].stderr.hypot(w[1].stderr);
        if w[1].mean < w[0].mean - 3.0 * joint {
            warnings.push(format!(
                "rho({}) = {} falls below rho({}) = {} by more than 3 joint stderr",
                w[1].lambda, w[1].mean, w[0].lambda, w[0].mean
            ));
        }
    }
    Ok(SweepOutput {
        table,
        estimates,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionSummary {
    pub n: usize,
    pub p: f64,
    pub s: f64,
    pub lambda: f64,
    pub lambda_star: Option<f64>,
    pub tau: f64,
    pub size_floor: usize,
    /// Fraction of correlated trials decided H0.
    pub miss_rate: Option<f64>,
    /// Fraction of independent trials decided H1.
    pub false_alarm_rate: Option<f64>,
    /// Trials whose constrained optimum came from the peeling fallback.
    pub approximate_trials: usize,
    pub h0_bound: Option<UnionBound>,
}

impl DetectionSummary {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("n {}", self.n),
            format!("p {}", self.p),
            format!("s {}", self.s),
            format!("lambda {}", self.lambda),
            format!("tau {}", self.tau),
            format!("size_floor {}", self.size_floor),
        ];
        if let Some(l) = self.lambda_star {
            out.push(format!("lambda_star {l}"));
        }
        if let Some(r) = self.miss_rate {
            out.push(format!("h1_miss_rate {r}"));
        }
        if let Some(r) = self.false_alarm_rate {
            out.push(format!("h0_identity_exceedance_rate {r}"));
        }
        out.push(format!("approximate_trials {}", self.approximate_trials));
        if let Some(b) = &self.h0_bound {
            out.push(format!("h0_union_bound_log {}", b.log_total));
            out.push(format!("h0_union_bound {}", b.total));
            out.push(format!(
                "h0_union_bound_inapplicable_terms {}",
                b.terms.iter().filter(|t| !t.chernoff_applicable).count()
            ));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct DetectionReport {
    pub table: Table,
    pub summary: DetectionSummary,
}

fn outcome_row(hyp: &str, trial: usize, tau: f64, o: &DetectionOutcome) -> Vec<String> {
    vec![
        hyp.to_string(),
        o.mode.as_str().to_string(),
        trial.to_string(),
        o.statistic.to_string(),
        tau.to_string(),
        o.decision.as_str().to_string(),
        flag(!o.approximate),
    ]
}

fn rate(outcomes: &[DetectionOutcome], wrong: Decision) -> Option<f64> {
    if outcomes.is_empty() {
        return None;
    }
    let bad = outcomes.iter().filter(|o| o.decision == wrong).count();
    Some(bad as f64 / outcomes.len() as f64)
}

/// `s = sqrt(λ / (n p))`, rejecting values above one.
pub fn s_for_lambda(n: usize, p: f64, lambda: f64) -> Result<f64> {
    let s = (lambda / (n as f64 * p)).sqrt();
    ensure!(
        s > 0.0 && s <= 1.0,
        "lambda = {lambda} needs s = {s}, outside (0, 1], at n = {n}, p = {p}"
    );
    Ok(s)
}

/// Correlated trials scored with the planted bijection and independent
/// trials scored with the identity, plus the analytic union bound for the
/// full statistic on the null side. In bruteforce mode (n ≤ 8) both sides
/// are maximised over every bijection.
pub fn run_detection_experiment<R: TrialRunner>(
    config: &ExperimentConfig,
    runner: &R,
) -> Result<DetectionReport> {
    let n = config.n;
    let p = config.p().context("detection needs p or alpha")?;
    let floor = size_floor(n)?;
    let (s, tau, lambda_star) = if config.mode == DetectMode::Bruteforce {
        let s = config.s.context("bruteforce mode needs s")?;
        let tau = config.tau.context("bruteforce mode needs tau")?;
        (s, tau, config.lambda_star)
    } else {
        let view = resolve_threshold(config, true, false, runner)?;
        let lambda_star = view.lambda_star.expect("resolved");
        let lambda = lambda_star + config.epsilon;
        let s = match config.s {
            Some(s) => s,
            None => s_for_lambda(n, p, lambda)?,
        };
        (s, view.tau.expect("resolved"), Some(lambda_star))
    };
    let h1_seed = RngSeed::new(config.seed).derive(H1_LABEL);
    let h0_seed = RngSeed::new(config.seed).derive(H0_LABEL);
    let trials = config.trials;
    let run_h1 = matches!(
        config.mode,
        DetectMode::Both | DetectMode::Planted | DetectMode::Bruteforce
    );
    let run_h0 = matches!(
        config.mode,
        DetectMode::Both | DetectMode::H0 | DetectMode::Bruteforce
    );
    let brute = config.mode == DetectMode::Bruteforce;
    let h1: Vec<DetectionOutcome> = if run_h1 {
        runner
            .run(trials, |t| -> corrgraph_core::Result<DetectionOutcome> {
                let pair = sample_correlated_pair(n, p, s, h1_seed.stream(t as u64))?;
                if brute {
                    statistic_bruteforce(&pair.g, &pair.g2, floor, tau)
                } else {
                    statistic_planted(&pair, floor, tau)
                }
            })
            .into_iter()
            .collect::<corrgraph_core::Result<_>>()?
    } else {
        Vec::new()
    };
    let h0: Vec<DetectionOutcome> = if run_h0 {
        runner
            .run(trials, |t| -> corrgraph_core::Result<DetectionOutcome> {
                let (g, g2) = sample_independent_pair(n, p * s, h0_seed.stream(t as u64))?;
                if brute {
                    statistic_bruteforce(&g, &g2, floor, tau)
                } else {
                    statistic_identity(&g, &g2, floor, tau)
                }
            })
            .into_iter()
            .collect::<corrgraph_core::Result<_>>()?
    } else {
        Vec::new()
    };
    let mut table = Table::new(
        ExperimentKind::Detect.as_str(),
        &["hypothesis", "mode", "trial", "statistic", "tau", "decision", "exact"],
    );
    for (t, o) in h1.iter().enumerate() {
        table.push(outcome_row("H1", t, tau, o));
    }
    for (t, o) in h0.iter().enumerate() {
        table.push(outcome_row("H0", t, tau, o));
    }
    let ps = p * s;
    let h0_bound = if run_h0 && ps > 0.0 && ps < 1.0 {
        Some(h0_union_bound(n, ps, tau)?)
    } else {
        None
    };
    let summary = DetectionSummary {
        n,
        p,
        s,
        lambda: n as f64 * p * s * s,
        lambda_star,
        tau,
        size_floor: floor,
        miss_rate: rate(&h1, Decision::H0),
        false_alarm_rate: rate(&h0, Decision::H1),
        approximate_trials: h1.iter().chain(&h0).filter(|o| o.approximate).count(),
        h0_bound,
    };
    Ok(DetectionReport { table, summary })
}

/// Exact total variation at `n ≤ 4` over an `s` grid.
pub fn run_tv_experiment(config: &ExperimentConfig) -> Result<Table> {
    let p = config.p().context("tv needs p or alpha")?;
    let grid = if config.s_grid.is_empty() {
        vec![config.s.context("tv needs s or an s grid")?]
    } else {
        config.s_grid.clone()
    };
    let mut table = Table::new(ExperimentKind::Tv.as_str(), &["n", "p", "s", "tv"]);
    for s in grid {
        let tv = exact_tv(config.n, p, s)?;
        table.push(vec![
            config.n.to_string(),
            p.to_string(),
            s.to_string(),
            tv.to_string(),
        ]);
    }
    Ok(table)
}

#[derive(Debug, Clone)]
pub struct AdmissibilityRun {
    pub table: Table,
    pub xi: f64,
    pub delta: f64,
    pub pass_rate: f64,
}

/// Fraction of G(n, λ/n) samples passing all four conditions.
pub fn run_admissibility_rate<R: TrialRunner>(
    config: &ExperimentConfig,
    runner: &R,
) -> Result<AdmissibilityRun> {
    let lambda = config.lambdas[0];
    let n = config.n;
    ensure!(lambda <= n as f64, "lambda exceeds n");
    let view = resolve_threshold(config, false, true, runner)?;
    let xi = view.xi.context("xi unavailable: lambda_star - epsilon <= 0")?;
    if let Some(ls) = view.lambda_star {
        if lambda > ls - config.epsilon {
            bail!(
                "lambda = {lambda} exceeds lambda_star - epsilon = {}",
                ls - config.epsilon
            );
        }
    }
    let delta = config.delta.unwrap_or(DEFAULT_DELTA);
    let seed = RngSeed::new(config.seed).derive(ADMISSIBILITY_LABEL);
    let cap = config.cycle_cap;
    let reports = runner
        .run(config.trials, |t| -> corrgraph_core::Result<_> {
            let h = sample_er(n, lambda / n as f64, seed.stream(t as u64))?;
            let r = check_admissible(&h, xi, delta, cap)?;
            Ok((r, h.max_degree()))
        })
        .into_iter()
        .collect::<corrgraph_core::Result<Vec<_>>>()?;
    let mut table = Table::new(
        ExperimentKind::AdmissibilityRate.as_str(),
        &[
            "trial",
            "admissible",
            "pass_i",
            "pass_ii",
            "pass_iii",
            "pass_iv",
            "density",
            "max_degree",
        ],
    );
    for (t, (r, maxdeg)) in reports.iter().enumerate() {
        table.push(vec![
            t.to_string(),
            flag(r.is_admissible()),
            flag(r.pass_i),
            flag(r.pass_ii),
            flag(r.pass_iii),
            flag(r.pass_iv),
            r.densest.1.to_f64().to_string(),
            maxdeg.to_string(),
        ]);
    }
    let passed = reports.iter().filter(|(r, _)| r.is_admissible()).count();
    Ok(AdmissibilityRun {
        table,
        xi,
        delta,
        pass_rate: passed as f64 / reports.len() as f64,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentPoint {
    pub n: usize,
    pub p: f64,
    pub delta: f64,
    pub admissible_trials: usize,
    pub non_tree: (f64, f64),
    pub tree: (f64, f64),
}

#[derive(Debug, Clone)]
pub struct MomentTrend {
    pub table: Table,
    pub xi: f64,
    pub points: Vec<MomentPoint>,
}

impl MomentTrend {
    /// Whether both averages are nonincreasing along the n grid up to three
    /// joint standard errors.
    pub fn nonincreasing(&self) -> bool {
        self.points.windows(2).all(|w| {
            let ok = |a: (f64, f64), b: (f64, f64)| b.0 <= a.0 + 3.0 * a.1.hypot(b.1);
            ok(w[0].non_tree, w[1].non_tree) && ok(w[0].tree, w[1].tree)
        })
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!("xi {}", self.xi)];
        for p in &self.points {
            out.push(format!(
                "n {} p {} delta {} admissible {} non_tree_mean {} non_tree_stderr {} tree_mean {} tree_stderr {}",
                p.n, p.p, p.delta, p.admissible_trials, p.non_tree.0, p.non_tree.1, p.tree.0, p.tree.1
            ));
        }
        out
    }
}

/// Truncated moment terms on G(n, λ/n) hosts along an n grid with
/// `p = n^(−α)`. Inadmissible hosts are recorded and left out of the
/// averages. Unless δ is given it is set to half of `δ₀ = ln(n p^ξ) / ln n`.
pub fn run_moment_trend<R: TrialRunner>(
    config: &ExperimentConfig,
    runner: &R,
) -> Result<MomentTrend> {
    let lambda = config.lambdas[0];
    let view = resolve_threshold(config, false, true, runner)?;
    let xi = view.xi.context("xi unavailable: lambda_star - epsilon <= 0")?;
    let mut table = Table::new(
        ExperimentKind::MomentTrend.as_str(),
        &["n", "trial", "admissible", "non_tree_sum", "tree_sum"],
    );
    let mut points = Vec::new();
    for &n in &config.n_grid {
        let p = config.p_at(n).expect("alpha checked");
        let delta = config.delta.unwrap_or_else(|| 0.5 * delta0(n, p, xi));
        let params = MomentParams {
            p,
            xi,
            c_prime: config.c_prime,
            k_max: config.k_max,
            delta,
            cycle_cap: config.cycle_cap,
        };
        let seed = RngSeed::new(config.seed)
            .derive(MOMENT_LABEL)
            .derive(n as u64);
        let results = runner
            .run(config.trials, |t| -> corrgraph_core::Result<_> {
                let h = sample_er(n, lambda / n as f64, seed.stream(t as u64))?;
                if !check_admissible(&h, xi, delta, config.cycle_cap)?.is_admissible() {
                    return Ok(None);
                }
                let terms = truncated_moment_terms(&h, &params)?;
                Ok(Some((terms.non_tree_sum, terms.tree_sum)))
            })
            .into_iter()
            .collect::<corrgraph_core::Result<Vec<_>>>()?;
        let mut nt = Vec::new();
        let mut tr = Vec::new();
        for (t, r) in results.iter().enumerate() {
            let (a, b) = match r {
                Some((a, b)) => {
                    nt.push(*a);
                    tr.push(*b);
                    (a.to_string(), b.to_string())
                }
                None => ("nan".to_string(), "nan".to_string()),
            };
            table.push(vec![
                n.to_string(),
                t.to_string(),
                flag(r.is_some()),
                a,
                b,
            ]);
        }
        ensure!(!nt.is_empty(), "no admissible host at n = {n}");
        points.push(MomentPoint {
            n,
            p,
            delta,
            admissible_trials: nt.len(),
            non_tree: mean_stderr(&nt),
            tree: mean_stderr(&tr),
        });
    }
    Ok(MomentTrend { table, xi, points })
}

/// Runs `config.kind` and returns the CSV text and summary lines.
pub fn run_experiment<R: TrialRunner>(
    config: &ExperimentConfig,
    runner: &R,
) -> Result<(String, Vec<String>)> {
    Ok(match config.kind {
        ExperimentKind::RhoSweep => {
            let out = run_rho_sweep(config, runner)?;
            (out.table.to_csv(), out.warnings)
        }
        ExperimentKind::Detect => {
            let r = run_detection_experiment(config, runner)?;
            (r.table.to_csv(), r.summary.lines())
        }
        ExperimentKind::Tv => (run_tv_experiment(config)?.to_csv(), Vec::new()),
        ExperimentKind::AdmissibilityRate => {
            let r = run_admissibility_rate(config, runner)?;
            let mut lines = Vec::new();
            let mut line = String::new();
            write!(line, "xi {} delta {} pass_rate {}", r.xi, r.delta, r.pass_rate).unwrap();
            lines.push(line);
            (r.table.to_csv(), lines)
        }
        ExperimentKind::MomentTrend => {
            let r = run_moment_trend(config, runner)?;
            let mut lines = r.lines();
            lines.push(format!("nonincreasing {}", r.nonincreasing()));
            (r.table.to_csv(), lines)
        }
    })
}
