use corrgraph_core::graph::{
    edge_count_correlation_experiment, indicator_correlation, intersection_graph, pair_count,
    sample_correlated_pair, sample_er, Bijection, Graph, Hypothesis,
};
use corrgraph_core::rng::RngSeed;
use corrgraph_core::runner::Sequential;
use corrgraph_core::stats::mean_stderr;
use proptest::prelude::*;

#[test]
fn er_edge_count_mean_matches_binomial() {
    let n = 2000;
    let q = 2.0 / n as f64;
    let counts: Vec<f64> = (0..200)
        .map(|t| sample_er(n, q, RngSeed::new(77).stream(t)).unwrap().edge_count() as f64)
        .collect();
    let (mean, _) = mean_stderr(&counts);
    let pairs = pair_count(n) as f64;
    let expected = pairs * q;
    let se = (pairs * q * (1.0 - q) / counts.len() as f64).sqrt();
    assert!((mean - expected).abs() <= 3.0 * se, "{mean} vs {expected} (se {se})");
}

// Pearson correlation of the indicator pairs of one sample, from the 2×2
// table of (G_e, 𝖦_{π*(e)}) over all pairs.
fn indicator_table_correlation(g: &Graph, g2: &Graph, pi: &Bijection) -> f64 {
    let n = g.n() as u32;
    let total = pair_count(g.n()) as f64;
    let (mut a, mut b, mut both) = (0.0, 0.0, 0.0);
    for u in 0..n {
        for v in u + 1..n {
            let x = g.has_edge(u, v);
            let y = g2.has_edge(pi.apply(u), pi.apply(v));
            a += x as u8 as f64;
            b += y as u8 as f64;
            both += (x && y) as u8 as f64;
        }
    }
    let (pa, pb, pab) = (a / total, b / total, both / total);
    (pab - pa * pb) / (pa * (1.0 - pa) * pb * (1.0 - pb)).sqrt()
}

#[test]
fn indicator_correlation_matches_formula() {
    let (n, p, s) = (1000, 0.01, 0.5);
    let values: Vec<f64> = (0..100)
        .map(|t| {
            let pair = sample_correlated_pair(n, p, s, RngSeed::new(5).stream(t)).unwrap();
            indicator_table_correlation(&pair.g, &pair.g2, &pair.pi_star)
        })
        .collect();
    let (mean, se) = mean_stderr(&values);
    let want = s * (1.0 - p) / (1.0 - p * s);
    assert!((indicator_correlation(p, s) - want).abs() < 1e-15);
    assert!((mean - want).abs() <= 3.0 * se, "{mean} vs {want} (se {se})");
}

#[test]
fn edge_count_correlation_examples() {
    let null = edge_count_correlation_experiment(
        500, 0.1, 0.1, 500, Hypothesis::Null, RngSeed::new(8), &Sequential,
    )
    .unwrap();
    assert!(null.correlation.unwrap().abs() < 0.15);

    let alt = edge_count_correlation_experiment(
        500, 0.5, 0.5, 500, Hypothesis::Alternative, RngSeed::new(8), &Sequential,
    )
    .unwrap();
    assert!((alt.correlation.unwrap() - 1.0 / 3.0).abs() <= 0.15);

    // Both counts are constant at p = s = 1, so the correlation is undefined.
    let full = edge_count_correlation_experiment(
        20, 1.0, 1.0, 10, Hypothesis::Alternative, RngSeed::new(8), &Sequential,
    )
    .unwrap();
    assert!(full.counts.iter().all(|&(a, b)| a == b && a == 190));
    assert_eq!(full.correlation, None);
}

#[test]
fn correlated_marginals_match_binomial() {
    let (n, p, s) = (500, 0.02, 0.5);
    let mut first = Vec::new();
    let mut second = Vec::new();
    for t in 0..500 {
        let pair = sample_correlated_pair(n, p, s, RngSeed::new(19).stream(t)).unwrap();
        let h = pair.planted_intersection();
        assert!(h.edge_count() <= pair.g.edge_count().min(pair.g2.edge_count()));
        first.push(pair.g.edge_count() as f64);
        second.push(pair.g2.edge_count() as f64);
    }
    let pairs = pair_count(n) as f64;
    let q = p * s;
    let se = (pairs * q * (1.0 - q) / 500.0).sqrt();
    for counts in [&first, &second] {
        let (mean, _) = mean_stderr(counts);
        assert!((mean - pairs * q).abs() <= 3.0 * se, "{mean} vs {}", pairs * q);
    }
}

#[test]
fn intersection_examples() {
    let k4 = Graph::complete(4);
    assert_eq!(intersection_graph(&k4, &k4, &Bijection::identity(4)).unwrap(), k4);
    let pi = Bijection::new(vec![2, 1, 0]).unwrap();
    let path = Graph::path(3);
    assert_eq!(intersection_graph(&path, &path, &pi).unwrap(), path);
    let pair = sample_correlated_pair(4, 1.0, 1.0, RngSeed::new(1)).unwrap();
    assert_eq!(pair.planted_intersection(), k4);
    let empty = sample_correlated_pair(3, 1.0, 0.0, RngSeed::new(1)).unwrap();
    assert_eq!(empty.g.edge_count() + empty.g2.edge_count(), 0);
}

proptest! {
    #[test]
    fn planted_intersection_is_common_subgraph(seed in any::<u64>(), n in 2usize..40) {
        let pair = sample_correlated_pair(n, 0.4, 0.6, RngSeed::new(seed)).unwrap();
        let h = pair.planted_intersection();
        for &(u, v) in h.edges() {
            prop_assert!(pair.g.has_edge(u, v));
            prop_assert!(pair.g2.has_edge(pair.pi_star.apply(u), pair.pi_star.apply(v)));
        }
        let again = sample_correlated_pair(n, 0.4, 0.6, RngSeed::new(seed)).unwrap();
        prop_assert_eq!(&again.g, &pair.g);
        prop_assert_eq!(&again.g2, &pair.g2);
        prop_assert_eq!(&again.pi_star, &pair.pi_star);
    }

    #[test]
    fn er_nested_in_q(seed in any::<u64>(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let g = sample_er(30, lo, RngSeed::new(seed)).unwrap();
        let h = sample_er(30, hi, RngSeed::new(seed)).unwrap();
        prop_assert!(g.is_subgraph_of(&h));
    }
}
