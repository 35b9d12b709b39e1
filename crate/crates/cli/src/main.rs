use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use corrgraph::config::{parse_config, ConfigError, ConfigLayer, DetectMode, ExperimentKind};
use corrgraph::edgelist::{format_bijection, format_edge_list, parse_cycles, read_edge_list, write_edge_list};
use corrgraph::experiment::{
    compute_threshold, rho_curve, run_detection_experiment, run_experiment, schema_line,
};
use corrgraph::runner::RayonRunner;
use corrgraph_core::admissibility::{check_admissible, DEFAULT_CYCLE_CAP, DEFAULT_DELTA};
use corrgraph_core::density::{densest_bruteforce, densest_exact, greedy_peel};
use corrgraph_core::detection::h0_union_bound;
use corrgraph_core::graph::{sample_correlated_pair, sample_er};
use corrgraph_core::likelihood::{exact_tv, log_likelihood_ratio};
use corrgraph_core::moment::{delta0, truncated_moment_terms, MomentParams, DEFAULT_C_PRIME};
use corrgraph_core::orbit::orbit_decomposition;
use corrgraph_core::rho::{invert_rho, RhoCurve, DEFAULT_RHO_N, DEFAULT_RHO_TRIALS};
use corrgraph_core::rng::{RngSeed, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "corrgraph", version, about = "Densest-subgraph detection for correlated Erdős–Rényi graphs")]
struct Cli {
    /// Master seed; every random stream is derived from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Peel,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Planted,
    H0,
}

#[derive(Subcommand)]
enum Command {
    /// Sample G(n, q), or a correlated pair when --p and --s are given.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with_all = ["p", "s"])]
        q: Option<f64>,
        #[arg(long, requires = "s")]
        p: Option<f64>,
        #[arg(long, requires = "p")]
        s: Option<f64>,
        /// Where to write the second graph of a pair.
        #[arg(long, requires = "p")]
        g2: Option<PathBuf>,
        /// Where to write the planted bijection of a pair.
        #[arg(long, requires = "p")]
        pi: Option<PathBuf>,
    },
    /// Densest subgraph of an edge list.
    Densest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        method: Method,
    },
    /// Monte Carlo estimate of the limiting maximum density at average degree λ.
    Rho {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = DEFAULT_RHO_N)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_RHO_TRIALS)]
        trials: usize,
    },
    /// Estimated λ* solving ϱ(λ) = 1/α.
    LambdaStar {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_RHO_N)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_RHO_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0.01)]
        tol: f64,
    },
    /// Detection threshold τ and density cap ξ.
    Tau {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_RHO_N)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_RHO_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0.01)]
        tol: f64,
    },
    /// Detection trials on one side, CSV `trial,statistic,tau,decision`.
    Detect {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long, value_enum, default_value = "planted")]
        mode: Side,
        #[arg(long, default_value_t = 30)]
        trials: usize,
        #[arg(long)]
        lambda_star: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_RHO_N)]
        rho_n: usize,
        #[arg(long, default_value_t = DEFAULT_RHO_TRIALS)]
        rho_trials: usize,
    },
    /// Union bound on the null probability that the statistic reaches τ.
    H0Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        tau: f64,
    },
    /// Log likelihood ratio of two graphs (n ≤ 8).
    Likelihood {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        g2: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        s: f64,
    },
    /// Edge-orbit sizes of a permutation given in cycle notation.
    Orbits {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: String,
    },
    /// Exact total variation between the two models (n ≤ 4).
    Tv {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        s: f64,
    },
    /// The four admissibility conditions with witnesses.
    Admissible {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        xi: f64,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
        #[arg(long, default_value_t = DEFAULT_CYCLE_CAP)]
        cycle_cap: usize,
    },
    /// Truncated non-tree and tree moment sums of an admissible graph.
    MomentTerms {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        xi: f64,
        #[arg(long, default_value_t = DEFAULT_C_PRIME)]
        cprime: f64,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
        /// Defaults to half of ln(n p^ξ) / ln n.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_CYCLE_CAP)]
        cycle_cap: usize,
    },
    /// Batch experiment from flags and an optional TOML file.
    Experiment(Box<ExperimentArgs>),
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    kind: Option<ExperimentKind>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Comma-separated λ grid.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    s_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    n_grid: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    mode: Option<DetectMode>,
    #[arg(long)]
    lambda_star: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    cprime: Option<f64>,
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long)]
    cycle_cap: Option<usize>,
    #[arg(long)]
    rho_n: Option<usize>,
    #[arg(long)]
    rho_trials: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

impl ExperimentArgs {
    fn layer(&self, seed: Option<u64>, output: Option<PathBuf>) -> ConfigLayer {
        ConfigLayer {
            kind: self.kind,
            n: self.n,
            alpha: self.alpha,
            p: self.p,
            s: self.s,
            epsilon: self.eps,
            lambda: self.lambda.clone(),
            s_grid: self.s_grid.clone(),
            n_grid: self.n_grid.clone(),
            trials: self.trials,
            seed,
            output,
            mode: self.mode,
            lambda_star: self.lambda_star,
            tau: self.tau,
            xi: self.xi,
            delta: self.delta,
            c_prime: self.cprime,
            k_max: self.kmax,
            cycle_cap: self.cycle_cap,
            rho_n: self.rho_n,
            rho_trials: self.rho_trials,
            tol: self.tol,
        }
    }
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let runner = RayonRunner::new(cli.threads).context("cannot start worker pool")?;
    let output = cli.output.as_ref();
    let mut text = String::new();
    match cli.command {
        Command::Sample { n, q, p, s, g2, pi } => {
            let seed = RngSeed::new(seed);
            match (q, p, s) {
                (Some(q), None, None) => text = format_edge_list(&sample_er(n, q, seed)?),
                (None, Some(p), Some(s)) => {
                    let pair = sample_correlated_pair(n, p, s, seed)?;
                    let g2 = g2.context("a correlated pair needs --g2 for the second graph")?;
                    write_edge_list(&g2, &pair.g2)?;
                    if let Some(pi) = pi {
                        std::fs::write(&pi, format_bijection(&pair.pi_star))
                            .with_context(|| format!("cannot write {}", pi.display()))?;
                    }
                    text = format_edge_list(&pair.g);
                }
                _ => bail!("give either --q, or both --p and --s"),
            }
        }
        Command::Densest { input, method } => {
            let g = read_edge_list(&input)?;
            let r = match method {
                Method::Exact => densest_exact(&g)?,
                Method::Peel => greedy_peel(&g)?,
                Method::Brute => densest_bruteforce(&g)?,
            };
            writeln!(
                text,
                "{} {} {} {}",
                r.density.num,
                r.density.den,
                r.subset.len(),
                u8::from(r.exact)
            )?;
            let subset: Vec<String> = r.subset.iter().map(|v| v.to_string()).collect();
            writeln!(text, "{}", subset.join(" "))?;
        }
        Command::Rho { lambda, n, trials } => {
            let e = rho_curve(n, trials, seed, &runner).estimate(lambda)?;
            writeln!(text, "{:.6} {:.6}", e.mean, e.stderr)?;
        }
        Command::LambdaStar { alpha, n, trials, tol } => {
            ensure!(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
            let curve = rho_curve(n, trials, seed, &runner);
            writeln!(text, "{:.6}", invert_rho(&curve, 1.0 / alpha, tol)?)?;
        }
        Command::Tau { alpha, eps, n, trials, tol } => {
            let t = compute_threshold(alpha, eps, n, trials, seed, tol, &runner)?;
            writeln!(text, "lambda_star {:.6}", t.lambda_star)?;
            writeln!(text, "rho_star {:.6} {:.6}", t.rho_star.0, t.rho_star.1)?;
            writeln!(text, "rho_plus {:.6} {:.6}", t.rho_plus.0, t.rho_plus.1)?;
            if let Some(m) = t.rho_minus {
                writeln!(text, "rho_minus {:.6} {:.6}", m.0, m.1)?;
            }
            writeln!(text, "tau {:.6}", t.tau)?;
            match t.xi {
                Some(xi) => writeln!(text, "xi {xi:.6}")?,
                None => writeln!(text, "xi undefined")?,
            }
        }
        Command::Detect {
            n,
            alpha,
            eps,
            mode,
            trials,
            lambda_star,
            tau,
            rho_n,
            rho_trials,
        } => {
            let layer = ConfigLayer {
                kind: Some(ExperimentKind::Detect),
                n: Some(n),
                alpha: Some(alpha),
                epsilon: Some(eps),
                trials: Some(trials),
                seed: Some(seed),
                mode: Some(match mode {
                    Side::Planted => DetectMode::Planted,
                    Side::H0 => DetectMode::H0,
                }),
                lambda_star,
                tau,
                rho_n: Some(rho_n),
                rho_trials: Some(rho_trials),
                ..ConfigLayer::default()
            };
            let config = parse_config(&layer, None)?;
            let report = run_detection_experiment(&config, &runner)?;
            writeln!(text, "{}", schema_line("detect"))?;
            writeln!(text, "trial,statistic,tau,decision")?;
            for row in &report.table.rows {
                writeln!(text, "{},{},{},{}", row[2], row[3], row[4], row[5])?;
            }
            for line in report.summary.lines() {
                eprintln!("{line}");
            }
        }
        Command::H0Bound { n, p, s, tau } => {
            let b = h0_union_bound(n, p * s, tau)?;
            writeln!(text, "log_bound {}", b.log_total)?;
            writeln!(text, "bound {}", b.total)?;
            writeln!(
                text,
                "inapplicable_terms {}",
                b.terms.iter().filter(|t| !t.chernoff_applicable).count()
            )?;
        }
        Command::Likelihood { g, g2, p, s } => {
            let g = read_edge_list(&g)?;
            let g2 = read_edge_list(&g2)?;
            writeln!(text, "{}", log_likelihood_ratio(&g, &g2, p, s)?)?;
        }
        Command::Orbits { n, sigma } => {
            let sigma = parse_cycles(n, &sigma).map_err(anyhow::Error::msg)?;
            let sizes: Vec<String> = orbit_decomposition(&sigma)
                .sizes()
                .iter()
                .map(|k| k.to_string())
                .collect();
            writeln!(text, "{}", sizes.join(" "))?;
        }
        Command::Tv { n, p, s } => {
            writeln!(text, "{}", exact_tv(n, p, s)?)?;
        }
        Command::Admissible {
            input,
            xi,
            delta,
            cycle_cap,
        } => {
            let h = read_edge_list(&input)?;
            let r = check_admissible(&h, xi, delta, cycle_cap)?;
            let flag = |b: bool| u8::from(b);
            writeln!(text, "density_cap {} densest {}", flag(r.pass_i), r.densest.1)?;
            match r.witness_ii {
                Some((v, d)) => writeln!(text, "degree_cap {} vertex {v} degree {d}", flag(r.pass_ii))?,
                None => writeln!(text, "degree_cap {}", flag(r.pass_ii))?,
            }
            match &r.witness_iii {
                Some(w) => {
                    let w: Vec<String> = w.iter().map(|v| v.to_string()).collect();
                    writeln!(text, "no_small_bicyclic {} witness {}", flag(r.pass_iii), w.join(" "))?
                }
                None => writeln!(text, "no_small_bicyclic {}", flag(r.pass_iii))?,
            }
            match r.witness_iv {
                Some((k, c)) => {
                    writeln!(text, "cycle_counts {} length {k} count {c}", flag(r.pass_iv))?
                }
                None => writeln!(text, "cycle_counts {}", flag(r.pass_iv))?,
            }
            writeln!(text, "admissible {}", flag(r.is_admissible()))?;
        }
        Command::MomentTerms {
            input,
            p,
            xi,
            cprime,
            kmax,
            delta,
            cycle_cap,
        } => {
            let h = read_edge_list(&input)?;
            let delta = delta.unwrap_or_else(|| 0.5 * delta0(h.n(), p, xi));
            let params = MomentParams {
                p,
                xi,
                c_prime: cprime,
                k_max: kmax,
                delta,
                cycle_cap,
            };
            let terms = truncated_moment_terms(&h, &params)?;
            writeln!(text, "non_tree_sum {}", terms.non_tree_sum)?;
            writeln!(text, "tree_sum {}", terms.tree_sum)?;
        }
        Command::Experiment(args) => {
            let file = args
                .config
                .as_deref()
                .map(ConfigLayer::from_toml)
                .transpose()?;
            let flags = args.layer(cli.seed, cli.output.clone());
            let config = parse_config(&flags, file.as_ref())?;
            let (csv, lines) = run_experiment(&config, &runner)?;
            for line in lines {
                eprintln!("{line}");
            }
            return emit(config.output.as_ref(), &csv);
        }
    }
    emit(output, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some_and(|c| matches!(c, ConfigError::Usage(_))) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
