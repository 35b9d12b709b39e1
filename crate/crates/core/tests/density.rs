use corrgraph_core::density::{
    densest_bruteforce, densest_exact, greedy_peel, k_core, k_core_members, peel_with_floor, subgraph_density,
    DensityValue,
};
use corrgraph_core::detection::constrained_densest;
use corrgraph_core::graph::{sample_er, Graph, Vertex};
use corrgraph_core::rng::RngSeed;
use proptest::prelude::*;

// Independent oracle: plain subset enumeration with its own tie-break
// (density, then cardinality).
fn oracle(g: &Graph) -> (DensityValue, usize) {
    let n = g.n();
    let mut best = (DensityValue::new(0, 1), 0usize);
    for mask in 1u32..1 << n {
        let m = g
            .edges()
            .iter()
            .filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1)
            .count() as u64;
        let size = mask.count_ones() as usize;
        let d = DensityValue::new(m, size as u64);
        if d > best.0 || (d == best.0 && size > best.1) {
            best = (d, size);
        }
    }
    best
}

#[test]
fn exact_matches_bruteforce_on_random_graphs() {
    let mut checked = 0;
    for trial in 0..200u64 {
        let n = 2 + (trial % 11) as usize;
        let q = 0.1 * (1 + trial % 9) as f64;
        let g = sample_er(n, q, RngSeed::new(1000 + trial)).unwrap();
        let exact = densest_exact(&g).unwrap();
        let brute = densest_bruteforce(&g).unwrap();
        assert_eq!(exact.density, brute.density, "trial {trial}: {g:?}");
        assert_eq!(exact.subset.len(), brute.subset.len(), "trial {trial}");
        let (d, size) = oracle(&g);
        assert_eq!(exact.density, d);
        assert_eq!(exact.subset.len(), size);
        assert_eq!(subgraph_density(&g, &exact.subset).unwrap(), exact.density);
        checked += 1;
    }
    assert_eq!(checked, 200);
}

#[test]
fn linear_size_densest_meets_floor() {
    let n = 2000;
    let floor = corrgraph_core::detection::size_floor(n).unwrap();
    let mut hits = 0;
    for t in 0..30 {
        let g = sample_er(n, 3.0 / n as f64, RngSeed::new(77).stream(t)).unwrap();
        let r = constrained_densest(&g, floor).unwrap();
        if densest_exact(&g).unwrap().subset.len() >= floor {
            assert!(r.exact);
            hits += 1;
        }
    }
    assert!(hits >= 27, "only {hits} of 30 met the floor");
}

#[test]
fn densest_set_lies_in_core() {
    // The densest subgraph has minimum degree at least its density, so it sits
    // inside the ceil(density)-core.
    for t in 0..20 {
        let g = sample_er(300, 4.0 / 300.0, RngSeed::new(5).stream(t)).unwrap();
        let best = densest_exact(&g).unwrap();
        let k = best.density.num.div_ceil(best.density.den) as usize;
        let core = k_core_members(&g, k);
        assert!(best.subset.iter().all(|&v| core[v as usize]));
        let inner = k_core(&g, k);
        assert!(best.subset.iter().all(|&v| inner.degree(v) >= k));
    }
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(Vertex, Vertex)> = (0..n as Vertex)
            .flat_map(|u| (u + 1..n as Vertex).map(move |v| (u, v)))
            .collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |keep| {
            let edges: Vec<_> = pairs
                .iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(&e, _)| e)
                .collect();
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn peel_never_beats_exact(g in arb_graph(14)) {
        let exact = densest_exact(&g).unwrap();
        let peel = greedy_peel(&g).unwrap();
        prop_assert!(peel.density <= exact.density);
        // Peeling is a 2-approximation.
        let twice = DensityValue::new(2 * peel.density.num, peel.density.den);
        prop_assert!(exact.density <= twice);
    }

    #[test]
    fn density_bounds(g in arb_graph(14)) {
        let best = densest_exact(&g).unwrap();
        let n = g.n() as u64;
        prop_assert!(best.density >= DensityValue::new(g.edge_count() as u64, n));
        prop_assert!(best.density <= DensityValue::new(n - 1, 2));
        prop_assert!(best.density.to_f64() <= g.max_degree() as f64 / 2.0 + 1e-12);
    }

    #[test]
    fn adding_edges_never_lowers_density(g in arb_graph(12), extra in any::<(u8, u8)>()) {
        let n = g.n() as Vertex;
        prop_assume!(n >= 2);
        let (u, v) = ((extra.0 as Vertex) % n, (extra.1 as Vertex) % n);
        prop_assume!(u != v && !g.has_edge(u, v));
        let mut edges = g.edges().to_vec();
        edges.push((u.min(v), u.max(v)));
        let bigger = Graph::from_edges(g.n(), edges).unwrap();
        prop_assert!(densest_exact(&bigger).unwrap().density >= densest_exact(&g).unwrap().density);
    }

    #[test]
    fn constrained_matches_oracle(g in arb_graph(12), f in 1usize..12) {
        prop_assume!(f <= g.n());
        let r = constrained_densest(&g, f).unwrap();
        prop_assert!(r.exact);
        prop_assert!(r.subset.len() >= f);
        let mut best = DensityValue::new(0, 1);
        for mask in 1u32..1 << g.n() {
            if (mask.count_ones() as usize) < f {
                continue;
            }
            let set: Vec<Vertex> = (0..g.n() as Vertex).filter(|&v| mask >> v & 1 == 1).collect();
            best = best.max(subgraph_density(&g, &set).unwrap());
        }
        prop_assert_eq!(r.density, best);
        let peel = peel_with_floor(&g, f).unwrap();
        prop_assert!(peel.density <= best);
        prop_assert!(peel.subset.len() >= f);
    }

    #[test]
    fn density_is_label_invariant(g in arb_graph(12), seed in any::<u64>()) {
        let mut rng = RngSeed::new(seed).rng();
        let perm = corrgraph_core::graph::Bijection::uniform(g.n(), &mut rng);
        let h = g.relabel(&perm).unwrap();
        let a = densest_exact(&g).unwrap();
        let b = densest_exact(&h).unwrap();
        prop_assert_eq!(a.density, b.density);
        prop_assert_eq!(a.subset.len(), b.subset.len());
    }
}
