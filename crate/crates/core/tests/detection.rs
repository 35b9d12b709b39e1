use corrgraph_core::detection::{
    h0_union_bound, h0_union_bound_term, size_floor, statistic_bruteforce, statistic_planted,
    Decision,
};
use corrgraph_core::graph::{sample_correlated_pair, sample_er, Bijection};
use corrgraph_core::rng::RngSeed;
use corrgraph_core::stats::{ln_binomial, ln_factorial};

#[test]
fn bruteforce_dominates_planted() {
    for t in 0..30u64 {
        let n = 3 + (t % 5) as usize;
        let pair = sample_correlated_pair(n, 0.7, 0.8, RngSeed::new(t)).unwrap();
        let floor = size_floor(n).unwrap().min(n);
        let planted = statistic_planted(&pair, floor, 1.0).unwrap();
        let full = statistic_bruteforce(&pair.g, &pair.g2, floor, 1.0).unwrap();
        assert!(full.density >= planted.density);
        assert!(planted.statistic >= 0.0);
        for out in [&planted, &full] {
            assert_eq!(out.decision == Decision::H1, out.statistic >= 1.0);
        }
    }
}

#[test]
fn bruteforce_is_relabel_invariant() {
    for t in 0..20u64 {
        let n = 2 + (t % 5) as usize;
        let g = sample_er(n, 0.5, RngSeed::new(t).derive(1)).unwrap();
        let g2 = sample_er(n, 0.5, RngSeed::new(t).derive(2)).unwrap();
        let mut rng = RngSeed::new(t).derive(3).rng();
        let a = Bijection::uniform(n, &mut rng);
        let b = Bijection::uniform(n, &mut rng);
        let base = statistic_bruteforce(&g, &g2, 1, 1.0).unwrap();
        let moved = statistic_bruteforce(&g.relabel(&a).unwrap(), &g2.relabel(&b).unwrap(), 1, 1.0)
            .unwrap();
        assert_eq!(base.density, moved.density);
    }
}

#[test]
fn complete_pair_statistic() {
    for t in 0..5 {
        let pair = sample_correlated_pair(6, 1.0, 1.0, RngSeed::new(t)).unwrap();
        let out = statistic_bruteforce(&pair.g, &pair.g2, size_floor(6).unwrap(), 2.4).unwrap();
        assert_eq!(out.statistic, 2.5);
        assert_eq!(out.decision, Decision::H1);
    }
}

#[test]
fn union_bound_terms_recomputed() {
    let (n, ps, tau) = (400usize, 0.02, 2.0);
    let bound = h0_union_bound(n, ps, tau).unwrap();
    let floor = size_floor(n).unwrap();
    assert_eq!(bound.terms.len(), n - floor + 1);
    let mut direct = 0.0;
    for k in floor..=n {
        let mu = (k * (k - 1) / 2) as f64 * ps * ps;
        let delta = tau * k as f64 / mu - 1.0;
        let log = 2.0 * ln_binomial(n as u64, k as u64)
            + ln_factorial(k as u64)
            - mu * ((1.0 + delta) * delta.ln_1p() - delta);
        let term = h0_union_bound_term(n, k, ps, tau).unwrap();
        assert!(term.chernoff_applicable);
        assert!((term.log_value - log).abs() < 1e-9 * log.abs().max(1.0));
        direct += log.exp();
    }
    assert!((bound.total - direct).abs() <= 1e-9 * direct.max(1e-300));
}
