use corrgraph::config::{parse_config, ConfigLayer, DetectMode, ExperimentConfig, ExperimentKind};
use corrgraph::experiment::{
    run_admissibility_rate, run_detection_experiment, run_experiment, run_moment_trend,
    run_rho_sweep, run_tv_experiment, s_for_lambda, schema_line, Table,
};
use corrgraph_core::runner::Sequential;
use corrgraph_core::stats::mean_stderr;

fn config(layer: ConfigLayer) -> ExperimentConfig {
    parse_config(&layer, None).unwrap()
}

fn column(table: &Table, name: &str) -> Vec<String> {
    let i = table.columns.iter().position(|c| *c == name).unwrap();
    table.rows.iter().map(|r| r[i].clone()).collect()
}

fn floats(table: &Table, name: &str) -> Vec<f64> {
    column(table, name).iter().map(|x| x.parse().unwrap()).collect()
}

#[test]
fn csv_layout() {
    let c = config(ConfigLayer {
        kind: Some(ExperimentKind::Tv),
        n: Some(2),
        p: Some(0.5),
        s: Some(0.5),
        ..ConfigLayer::default()
    });
    let csv = run_tv_experiment(&c).unwrap().to_csv();
    let mut lines = csv.split('\n');
    assert_eq!(lines.next().unwrap(), schema_line("tv"));
    assert_eq!(lines.next().unwrap(), "n,p,s,tv");
    assert!(!csv.contains('\r'));
    assert!(csv.ends_with('\n'));
    assert_eq!(schema_line("tv"), format!("# corrgraph-detect v{} tv", env!("CARGO_PKG_VERSION")));
}

#[test]
fn tv_grid() {
    let c = config(ConfigLayer {
        kind: Some(ExperimentKind::Tv),
        n: Some(3),
        p: Some(0.5),
        s_grid: Some(vec![0.2, 0.5, 0.8]),
        ..ConfigLayer::default()
    });
    let t = run_tv_experiment(&c).unwrap();
    let tv = floats(&t, "tv");
    assert_eq!(tv.len(), 3);
    assert!(tv.windows(2).all(|w| w[0] <= w[1]), "{tv:?}");
    assert!(tv.iter().all(|x| (0.0..=1.0).contains(x)));
    let c = config(ConfigLayer {
        kind: Some(ExperimentKind::Tv),
        n: Some(4),
        p: Some(1.0),
        s_grid: Some(vec![0.3, 0.9]),
        ..ConfigLayer::default()
    });
    for tv in floats(&run_tv_experiment(&c).unwrap(), "tv") {
        assert!(tv.abs() < 1e-12);
    }
}

#[test]
fn rho_sweep_grids() {
    let sweep = |grid: Vec<f64>| {
        let c = config(ConfigLayer {
            kind: Some(ExperimentKind::RhoSweep),
            n: Some(2000),
            lambda: Some(grid),
            ..ConfigLayer::default()
        });
        run_rho_sweep(&c, &Sequential).unwrap()
    };
    // Below λ = 1 the densest part is usually the largest tree, whose
    // density 1 − 1/|T| approaches 1 only logarithmically in n.
    let low = sweep(vec![0.5, 1.0]);
    let m = floats(&low.table, "mean");
    assert!((0.95..=1.05).contains(&m[1]), "{m:?}");
    assert!(m[0] <= m[1] && m[0] < 1.0, "{m:?}");
    let high = sweep(vec![2.0, 3.0, 4.0]);
    assert!(high.warnings.is_empty());
    let e = &high.estimates;
    for w in e.windows(2) {
        assert!(w[1].mean - w[0].mean > 3.0 * w[0].stderr.hypot(w[1].stderr));
    }
    assert!((2.0..=4.0).contains(&e[2].mean));
    assert_eq!(column(&high.table, "trials"), vec!["30"; 3]);
}

#[test]
fn bruteforce_complete_pair() {
    let c = config(ConfigLayer {
        kind: Some(ExperimentKind::Detect),
        n: Some(6),
        p: Some(1.0),
        s: Some(1.0),
        tau: Some(2.4),
        trials: Some(3),
        mode: Some(DetectMode::Bruteforce),
        ..ConfigLayer::default()
    });
    let r = run_detection_experiment(&c, &Sequential).unwrap();
    let h1: Vec<&Vec<String>> = r.table.rows.iter().filter(|row| row[0] == "H1").collect();
    assert_eq!(h1.len(), 3);
    for row in h1 {
        assert_eq!(row[3], "2.5");
        assert_eq!(row[5], "H1");
        assert_eq!(row[6], "1");
    }
    assert_eq!(r.summary.miss_rate, Some(0.0));
}

#[test]
fn detection_refusals() {
    let c = config(ConfigLayer {
        kind: Some(ExperimentKind::Detect),
        n: Some(200),
        alpha: Some(0.5),
        lambda_star: Some(300.0),
        tau: Some(2.0),
        ..ConfigLayer::default()
    });
    let err = run_detection_experiment(&c, &Sequential).unwrap_err().to_string();
    assert!(err.contains("outside (0, 1]"), "{err}");
    assert!(s_for_lambda(100, 0.1, 20.0).is_err());
    assert!((s_for_lambda(100, 0.1, 2.5).unwrap() - 0.5).abs() < 1e-15);
}

// The summary must follow from the emitted rows alone.
#[test]
fn summaries_recompute_from_rows() {
    let c = config(ConfigLayer {
        kind: Some(ExperimentKind::Detect),
        n: Some(300),
        alpha: Some(0.5),
        lambda_star: Some(3.6),
        tau: Some(2.2),
        trials: Some(6),
        ..ConfigLayer::default()
    });
    let r = run_detection_experiment(&c, &Sequential).unwrap();
    let hyp = column(&r.table, "hypothesis");
    let dec = column(&r.table, "decision");
    let exact = column(&r.table, "exact");
    let rate = |h: &str, d: &str| {
        let total = hyp.iter().filter(|x| *x == h).count();
        let hit = hyp.iter().zip(&dec).filter(|(x, y)| *x == h && *y == d).count();
        hit as f64 / total as f64
    };
    assert_eq!(r.summary.miss_rate, Some(rate("H1", "H0")));
    assert_eq!(r.summary.false_alarm_rate, Some(rate("H0", "H1")));
    assert_eq!(
        r.summary.approximate_trials,
        exact.iter().filter(|x| *x == "0").count()
    );
    for t in floats(&r.table, "tau") {
        assert_eq!(t, r.summary.tau);
    }

    let c = config(ConfigLayer {
        kind: Some(ExperimentKind::AdmissibilityRate),
        n: Some(500),
        lambda: Some(vec![1.5]),
        xi: Some(1.8),
        trials: Some(8),
        ..ConfigLayer::default()
    });
    let a = run_admissibility_rate(&c, &Sequential).unwrap();
    let ok = column(&a.table, "admissible");
    let passed = ok.iter().filter(|x| *x == "1").count();
    assert_eq!(a.pass_rate, passed as f64 / ok.len() as f64);
    for (i, row) in a.table.rows.iter().enumerate() {
        let all = (2..=5).all(|j| row[j] == "1");
        assert_eq!(ok[i] == "1", all);
    }

    let c = config(ConfigLayer {
        kind: Some(ExperimentKind::MomentTrend),
        alpha: Some(0.5),
        lambda: Some(vec![1.2]),
        xi: Some(1.8),
        n_grid: Some(vec![300, 600]),
        trials: Some(6),
        ..ConfigLayer::default()
    });
    let m = run_moment_trend(&c, &Sequential).unwrap();
    let ns = column(&m.table, "n");
    let nt = floats(&m.table, "non_tree_sum");
    let tr = floats(&m.table, "tree_sum");
    for point in &m.points {
        let pick = |v: &[f64]| -> Vec<f64> {
            ns.iter()
                .zip(v)
                .filter(|(n, x)| **n == point.n.to_string() && !x.is_nan())
                .map(|(_, x)| *x)
                .collect()
        };
        assert_eq!(pick(&nt).len(), point.admissible_trials);
        assert_eq!(mean_stderr(&pick(&nt)), point.non_tree);
        assert_eq!(mean_stderr(&pick(&tr)), point.tree);
    }
}

#[test]
fn admissibility_rejects_lambda_above_cap() {
    let c = config(ConfigLayer {
        kind: Some(ExperimentKind::AdmissibilityRate),
        n: Some(300),
        lambda: Some(vec![3.0]),
        xi: Some(1.8),
        lambda_star: Some(3.6),
        trials: Some(2),
        ..ConfigLayer::default()
    });
    assert!(run_admissibility_rate(&c, &Sequential).is_err());
}

#[test]
fn same_seed_same_output() {
    let c = config(ConfigLayer {
        kind: Some(ExperimentKind::RhoSweep),
        n: Some(200),
        lambda: Some(vec![1.5, 2.5]),
        trials: Some(5),
        ..ConfigLayer::default()
    });
    let a = run_experiment(&c, &Sequential).unwrap();
    let b = run_experiment(&c, &Sequential).unwrap();
    assert_eq!(a, b);
    let other = ExperimentConfig { seed: c.seed + 1, ..c.clone() };
    assert_ne!(run_experiment(&other, &Sequential).unwrap().0, a.0);
}
