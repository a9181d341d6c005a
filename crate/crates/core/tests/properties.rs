use kronred_core::network::to_dsl;
use kronred_core::reduction::kron_reduce_matrix;
use kronred_core::sim::uniform_grid;
use kronred_core::synth::{random_network, random_removal, random_state, GenOptions};
use kronred_core::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn any_network(seed: u64) -> Network {
    let opts = GenOptions { boundary: 0.3, ..GenOptions::default() };
    random_network(&mut rng(seed), &opts)
}

/// All-reversible network, a removal and a positive state.
fn reducible(seed: u64) -> (Model, Vec<usize>, Vec<f64>) {
    let mut r = rng(seed);
    let opts = GenOptions { reversible: 1.0, boundary: 0.3, ..GenOptions::default() };
    let net = random_network(&mut r, &opts);
    let removed = random_removal(&mut r, StoichiometryView::new(&net).linkage_classes().0);
    let x = random_state(&mut r, net.num_species(), 0.1, 10.0);
    (Model::new(net), removed, x)
}

fn rel(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let scale = a.amax().max(b.amax());
    if scale == 0.0 { 0.0 } else { (a - b).amax() / scale }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn s_equals_z_times_b(seed in any::<u64>()) {
        let net = any_network(seed);
        let v = StoichiometryView::new(&net);
        prop_assert_eq!(v.s(), &(v.z() * v.b()));
        for j in 0..v.b().ncols() {
            let col = v.b().column(j);
            prop_assert_eq!(col.sum(), 0);
            prop_assert_eq!(col.iter().filter(|&&e| e == -1).count(), 1);
            prop_assert_eq!(col.iter().filter(|&&e| e == 1).count(), 1);
        }
    }

    #[test]
    fn linkage_count_matches_rank(seed in any::<u64>()) {
        let net = any_network(seed);
        let v = StoichiometryView::new(&net);
        let (_, ell) = v.linkage_classes();
        prop_assert_eq!(ell, net.num_complexes() - v.rank_b());
    }

    #[test]
    fn dsl_round_trip(seed in any::<u64>()) {
        let net = any_network(seed);
        let again = parse_network(&to_dsl(&net)).unwrap();
        prop_assert_eq!(&again, &net);
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let net = any_network(seed);
        let again = Network::from_json(&net.to_json()).unwrap();
        prop_assert_eq!(&again, &net);
    }

    #[test]
    fn laplacian_is_a_laplacian(seed in any::<u64>()) {
        let net = any_network(seed);
        let x = random_state(&mut rng(seed ^ 1), net.num_species(), 0.01, 100.0);
        for r in net.reactions() {
            let d = r.law.denominator.eval(&x);
            prop_assert!(d > 0.0 && d <= 1.0);
        }
        let model = Model::new(net);
        let l = laplacian(&model, &x).laplacian;
        for j in 0..l.ncols() {
            let col = l.column(j);
            let norm1: f64 = col.iter().map(|v| v.abs()).sum();
            prop_assert!(col.sum().abs() <= 1e-14 * norm1);
            prop_assert!(l[(j, j)] >= 0.0);
            for i in (0..l.nrows()).filter(|&i| i != j) {
                prop_assert!(l[(i, j)] <= 0.0);
            }
        }
    }

    #[test]
    fn full_rhs_two_routes_agree_and_conserve(seed in any::<u64>()) {
        let net = any_network(seed);
        let x = random_state(&mut rng(seed ^ 2), net.num_species(), 0.1, 10.0);
        let model = Model::new(net);
        let a = full_rhs(&model, &x, 0.0).unwrap();
        let b = stoichiometric_rhs(&model, &x);
        let scale = a.amax().max(b.amax()).max(1.0);
        prop_assert!((&a - &b).amax() <= 1e-12 * scale);
        for w in model.view().conservation_basis() {
            let dot: f64 = w.iter().zip(a.iter()).map(|(&wi, ai)| wi as f64 * ai).sum();
            let mag: f64 = w.iter().zip(a.iter()).map(|(&wi, ai)| (wi as f64 * ai).abs()).sum();
            prop_assert!(dot.abs() <= 1e-12 * mag.max(1e-300));
        }
    }

    #[test]
    fn identity_reduction_is_exact(seed in any::<u64>()) {
        let (model, _, x) = reducible(seed);
        let red = plan_reduction(&model, &[], &x).unwrap();
        let l = laplacian(&model, &x).laplacian;
        prop_assert!(rel(&red.schur(&x).unwrap().l_hat, &l) <= 1e-15);
        let a = red.reduced_rhs(&x, 0.0).unwrap();
        let b = full_rhs(&model, &x, 0.0).unwrap();
        prop_assert!((a - &b).amax() <= 1e-15 * b.amax().max(1.0));
    }

    #[test]
    fn kron_reduction_composes(seed in any::<u64>()) {
        let (model, removed, x) = reducible(seed);
        prop_assume!(removed.len() >= 2);
        let (v1, v2) = removed.split_at(removed.len() / 2);
        let once = plan_reduction(&model, &removed, &x).unwrap().schur(&x).unwrap().l_hat;
        let first = plan_reduction(&model, v1, &x).unwrap();
        let staged = kron_reduce_matrix(&first.schur(&x).unwrap().l_hat, first.kept(), v2);
        prop_assert!(rel(&once, &staged) <= 1e-11);
        let extended = first.extend(v2).unwrap().schur(&x).unwrap().l_hat;
        prop_assert!(rel(&once, &extended) <= 1e-11);
    }

    #[test]
    fn schur_matches_lu_route(seed in any::<u64>()) {
        let (model, removed, x) = reducible(seed);
        let red = plan_reduction(&model, &removed, &x).unwrap();
        prop_assert!(rel(&red.schur(&x).unwrap().l_hat, &red.schur_lu(&x).unwrap()) <= 1e-10);
    }

    #[test]
    fn auxiliary_system_is_consistent(seed in any::<u64>()) {
        let (model, removed, x) = reducible(seed);
        let red = plan_reduction(&model, &removed, &x).unwrap();
        let aux = red.auxiliary_consistency(&x).unwrap();
        prop_assert!(aux.max_residual() <= 1e-10 * aux.scale.max(1e-300));
        prop_assert!(aux.w2.iter().all(|w| w.is_finite()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn trajectories_stay_nonnegative_and_conserve(seed in any::<u64>()) {
        let net = any_network(seed);
        let x0 = random_state(&mut rng(seed ^ 3), net.num_species(), 0.1, 10.0);
        let model = Model::new(net);
        let cfg = SolverConfig { t_end: 2.0, ..SolverConfig::default() };
        let tr = match integrate(&model, &x0, &cfg) {
            Ok(tr) => tr,
            // Autocatalytic draws can blow up in finite time.
            Err(SimError::StepTooSmall { .. } | SimError::MaxStepsExceeded { .. }) => {
                return Err(TestCaseError::reject("finite-time blow-up"))
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(tr.states.iter().flatten().all(|&v| v >= 0.0));
        for w in model.view().conservation_basis() {
            let dot = |x: &[f64]| x.iter().zip(&w).map(|(a, &b)| a * b as f64).sum::<f64>();
            let w0 = dot(&tr.states[0]);
            let size: f64 = x0.iter().zip(&w).map(|(a, &b)| (a * b as f64).abs()).sum();
            for x in &tr.states {
                prop_assert!((dot(x) - w0).abs() <= 100.0 * cfg.atol * size.max(1.0));
            }
        }
    }

    #[test]
    fn identity_reduction_tracks_full_model(seed in any::<u64>()) {
        let (model, _, x0) = reducible(seed);
        let red = plan_reduction(&model, &[], &x0).unwrap();
        let cfg = SolverConfig { t_end: 1.0, ..SolverConfig::default() };
        let full = match integrate(&model, &x0, &cfg) {
            Ok(tr) => tr,
            Err(SimError::StepTooSmall { .. } | SimError::MaxStepsExceeded { .. }) => {
                return Err(TestCaseError::reject("finite-time blow-up"))
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let reduced = integrate(&red, &x0, &cfg).unwrap();
        let spec = ComparisonSpec {
            observed: (0..model.num_species()).collect(),
            grid: uniform_grid(1.0, 50),
            atol: cfg.atol,
        };
        let m = compare(&full, &reduced, &spec).unwrap();
        prop_assert!(m.aggregate <= 2.0 * cfg.rtol, "aggregate {}", m.aggregate);
    }
}
