use ilmr::reconstruction::probe_linearity;
use ilmr::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random connected graph: a random spanning tree plus extra edges.
fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let parents = proptest::collection::vec(any::<prop::sample::Index>(), n - 1);
            let extras = proptest::collection::vec((0..n, 0..n), 0..2 * n);
            (Just(n), parents, extras)
        })
        .prop_map(|(n, parents, extras)| {
            let mut edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, p)| (p.index(i + 1), i + 1)).collect();
            edges.extend(extras.into_iter().filter(|(a, b)| a != b));
            Graph::with_policy(n, edges, DuplicatePolicy::Dedup).unwrap()
        })
}

fn signal(n: usize, seed: u64) -> GraphSignal {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GraphSignal::from((0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect::<Vec<_>>())
}

fn brute_energy(g: &Graph, f: &[f64]) -> f64 {
    let mut total = 0.0;
    for p in 0..g.n_vertices() {
        for q in (p + 1)..g.n_vertices() {
            if g.neighbors(p).contains(&q) {
                total += (f[p] - f[q]).powi(2);
            }
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn laplacian_annihilates_constants(g in connected_graph(25)) {
        let l = laplacian(&g);
        let out = l.mul_vec(&vec![1.0; g.n_vertices()]).unwrap();
        prop_assert!(out.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn quadratic_form_is_edge_energy(g in connected_graph(25), seed in any::<u64>()) {
        let f = signal(g.n_vertices(), seed);
        let q = laplacian(&g).quadratic_form(f.values()).unwrap();
        let brute = brute_energy(&g, f.values());
        prop_assert!((q - brute).abs() <= 1e-10 * (1.0 + brute));
        prop_assert!((g.edge_energy(f.values()) - brute).abs() <= 1e-10 * (1.0 + brute));
    }

    #[test]
    fn bfs_triangle_inequality(g in connected_graph(25), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>(), c in any::<prop::sample::Index>()) {
        let n = g.n_vertices();
        let (u, v, w) = (a.index(n), b.index(n), c.index(n));
        let d = |x, y| bfs_distance(&g, x, y).unwrap().unwrap();
        prop_assert!(d(u, w) <= d(u, v) + d(v, w));
        prop_assert_eq!(d(u, v), d(v, u));
    }

    #[test]
    fn induced_subgraph_edge_count(g in connected_graph(25), mask in proptest::collection::vec(any::<bool>(), 25)) {
        let set: Vec<usize> = (0..g.n_vertices()).filter(|&v| mask[v]).collect();
        prop_assume!(!set.is_empty());
        let sub = induced_subgraph(&g, &set).unwrap();
        let brute = g.edges().iter().filter(|(p, q)| set.contains(p) && set.contains(q)).count();
        prop_assert_eq!(sub.graph.n_edges(), brute);
    }

    #[test]
    fn projector_properties(g in connected_graph(20), seed in any::<u64>(), frac in 0.0f64..1.0) {
        let basis = eigendecompose(&laplacian(&g)).unwrap();
        let omega = frac * basis.lambda_max();
        let p = basis.projector(omega).unwrap();
        let f = signal(g.n_vertices(), seed);
        let pf = p.project(&f).unwrap();
        prop_assert!(p.project(&pf).unwrap().distance(&pf) < 1e-10);
        prop_assert!(pf.norm() <= f.norm() + 1e-12);
        prop_assert!(pf.dot(&(&f - &pf)).abs() < 1e-10);
        let energy = laplacian(&g).quadratic_form(pf.values()).unwrap();
        prop_assert!(energy <= omega * pf.dot(&pf) + 1e-9);
    }

    #[test]
    fn greedy_partition_is_valid_and_deterministic(g in connected_graph(40), n_max in 1usize..10) {
        let p = greedy_partition(&g, n_max).unwrap();
        prop_assert!(validate_partition(&g, &p).is_empty());
        prop_assert!(p.sets().iter().all(|s| !s.is_empty() && s.len() <= n_max));
        prop_assert_eq!(p, greedy_partition(&g, n_max).unwrap());
    }

    #[test]
    fn centered_metrics_are_consistent(g in connected_graph(30), n_max in 1usize..8, picks in proptest::collection::vec(any::<prop::sample::Index>(), 30)) {
        let p = greedy_partition(&g, n_max).unwrap();
        let centers: Vec<usize> = p.sets().iter().zip(&picks).map(|(s, ix)| s[ix.index(s.len())]).collect();
        let p = p.centered(centers).unwrap();
        let m = partition_metrics(&g, &p).unwrap();
        let radii = m.radii.as_ref().unwrap();
        let ks = m.multiple_numbers.as_ref().unwrap();
        for i in 0..p.len() {
            prop_assert!(radii[i] <= m.diameters[i]);
            prop_assert!(ks[i] <= m.sizes[i]);
        }
        prop_assert!(m.q_max.unwrap() <= m.c_max + 1e-12);
    }

    #[test]
    fn every_scheme_yields_valid_weights(g in connected_graph(30), n_max in 1usize..6, seed in any::<u64>()) {
        let p = greedy_partition(&g, n_max).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise = NoiseModel::grouped(g.n_vertices(), &[0.1, 0.2, 0.5], &[0.5, 0.25, 0.25], &mut rng).unwrap();
        for scheme in WeightScheme::ALL {
            let w = make_weights(scheme, &p, Some(&noise), Some(&mut rng)).unwrap();
            prop_assert!(w.check_against(&p).is_ok(), "{scheme}");
        }
    }

    #[test]
    fn measurement_is_linear(g in connected_graph(30), seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let n = g.n_vertices();
        let p = greedy_partition(&g, 3).unwrap();
        let w = make_weights(WeightScheme::Random, &p, None, Some(&mut ChaCha8Rng::seed_from_u64(seed))).unwrap();
        let (f, h) = (signal(n, seed), signal(n, seed ^ 1));
        let combined = w.measure(&(&f.scaled(a) + &h.scaled(b))).unwrap();
        let (mf, mh) = (w.measure(&f).unwrap(), w.measure(&h).unwrap());
        for i in 0..p.len() {
            prop_assert!((combined.0[i] - (a * mf.0[i] + b * mh.0[i])).abs() < 1e-12);
        }
    }

    #[test]
    fn dirac_measurement_indexes_signal(g in connected_graph(30), seed in any::<u64>()) {
        let p = greedy_partition(&g, 4).unwrap();
        let w = make_weights(WeightScheme::Dirac, &p, None, Some(&mut ChaCha8Rng::seed_from_u64(seed))).unwrap();
        let f = signal(g.n_vertices(), seed);
        let m = w.measure(&f).unwrap();
        for i in 0..p.len() {
            let support = w.set_weights(i);
            prop_assert_eq!(support.len(), 1);
            prop_assert_eq!(m.0[i], f[support[0].0]);
        }
    }

    #[test]
    fn g_operator_is_linear(g in connected_graph(20), seed in any::<u64>(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let basis = eigendecompose(&laplacian(&g)).unwrap();
        let rec = Reconstructor::new(&g, &basis, 0.5 * basis.lambda_max()).unwrap();
        let p = greedy_partition(&g, 3).unwrap();
        let w = make_weights(WeightScheme::Random, &p, None, Some(&mut ChaCha8Rng::seed_from_u64(seed))).unwrap();
        let (f, h) = (signal(g.n_vertices(), seed), signal(g.n_vertices(), !seed));
        let lhs = rec.apply_g(&p, &w, &(&f.scaled(a) + &h.scaled(b))).unwrap();
        let rhs = &rec.apply_g(&p, &w, &f).unwrap().scaled(a) + &rec.apply_g(&p, &w, &h).unwrap().scaled(b);
        prop_assert!(lhs.distance(&rhs) < 1e-10);
    }

    #[test]
    fn iterates_stay_in_band(g in connected_graph(20), seed in any::<u64>(), steps in 0usize..6) {
        let basis = eigendecompose(&laplacian(&g)).unwrap();
        let omega = basis.eigenvalues()[basis.order() / 3];
        let rec = Reconstructor::new(&g, &basis, omega).unwrap();
        let p = greedy_partition(&g, 3).unwrap();
        let w = make_weights(WeightScheme::Uniform, &p, None, None).unwrap();
        let m = w.measure(&signal(g.n_vertices(), seed)).unwrap();
        let cfg = ReconstructionConfig { max_iterations: steps.max(1), stop_tolerance: 0.0, truth: None };
        let est = rec.ilmr(&m, &p, &w, &cfg).unwrap().estimate;
        prop_assert!(rec.projector().project(&est).unwrap().distance(&est) <= 1e-9);
    }
}

#[test]
fn oracle_mode_matches_explicit_weights() {
    let g = generators::grid_graph(8, 8);
    let basis = eigendecompose(&laplacian(&g)).unwrap();
    let omega = basis.cutoff_for_dimension(6).unwrap();
    let rec = Reconstructor::new(&g, &basis, omega).unwrap();
    let p = greedy_partition(&g, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let w = make_weights(WeightScheme::Random, &p, None, Some(&mut rng)).unwrap();
    let f = random_bandlimited(&basis, omega, &mut rng, 1.0, None).unwrap();
    let m = w.measure(&f).unwrap();
    let cfg = ReconstructionConfig::default();

    let hidden = w.clone();
    let oracle = FnOracle::new(p.len(), move |x: &GraphSignal| hidden.measure(x));
    assert!(probe_linearity(&oracle, g.n_vertices(), &mut rng, 5, 1e-12).unwrap());
    let explicit = rec.ilmr(&m, &p, &w, &cfg).unwrap();
    let blind = rec.ilmr(&m, &p, &oracle, &cfg).unwrap();
    assert_eq!(explicit.estimate, blind.estimate);
    assert_eq!(explicit.iterations_used, blind.iterations_used);

    let k = p.len();
    let squared = FnOracle::new(k, move |x: &GraphSignal| Ok(MeasurementSet(x.values()[..k].iter().map(|v| v * v).collect())));
    assert!(!probe_linearity(&squared, g.n_vertices(), &mut rng, 5, 1e-12).unwrap());
}

#[test]
fn converged_estimate_is_a_fixed_point() {
    let g = generators::grid_graph(6, 6);
    let basis = eigendecompose(&laplacian(&g)).unwrap();
    let omega = basis.cutoff_for_dimension(4).unwrap();
    let rec = Reconstructor::new(&g, &basis, omega).unwrap();
    let p = greedy_partition(&g, 2).unwrap();
    let w = make_weights(WeightScheme::Uniform, &p, None, None).unwrap();
    let f = random_bandlimited(&basis, omega, &mut ChaCha8Rng::seed_from_u64(4), 1.0, None).unwrap();
    let m = w.measure(&f).unwrap();
    let run = rec.ilmr(&m, &p, &w, &ReconstructionConfig::default()).unwrap();
    assert_eq!(run.stop_reason, StopReason::Converged);
    let reproduced = w.measure(&run.estimate).unwrap();
    assert!(m.values().iter().zip(reproduced.values()).all(|(a, b)| (a - b).abs() < 1e-9));
    assert!(run.estimate.distance(&f) < 1e-8);

    // A bandlimited signal that reproduces the measurements yields a zero increment.
    let gf = rec.apply_g(&p, &w, &f).unwrap();
    let from_measurements = rec.apply_g(&p, &w, &run.estimate).unwrap();
    assert!(gf.distance(&from_measurements) < 1e-9);
    assert!(rec.uniqueness_check(&w).unwrap());
}
