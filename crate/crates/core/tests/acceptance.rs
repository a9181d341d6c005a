//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kronred_core::exact::left_null_space;
use kronred_core::reduction::{kron_reduce_matrix, ScanBudget, ScanOutcome, ScanSetup};
use kronred_core::sim::{relax_to_steady_state, uniform_grid, FnDynamics, PulseResult};
use kronred_core::synth::{mm_chain, random_network, random_removal, random_state, FastChain, GenOptions};
use kronred_core::*;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x6b72_6f6e;
const SUITE_SIZE: usize = 250;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Duration, Box<dyn Fn() -> Outcome + 'a>);

struct Case {
    model: Model,
    removed: Vec<usize>,
    x: Vec<f64>,
}

/// All-reversible networks with boundary fluxes, a removal keeping two
/// complexes per linkage class, and a positive state.
fn suite(n: usize, seed: u64, nonempty: usize) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = GenOptions { reversible: 1.0, mm: 0.5, boundary: 0.3, ..GenOptions::default() };
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let net = random_network(&mut rng, &opts);
        let view = StoichiometryView::new(&net);
        let removed = random_removal(&mut rng, view.linkage_classes().0);
        if removed.len() < nonempty {
            continue;
        }
        let x = random_state(&mut rng, net.num_species(), 0.1, 10.0);
        out.push(Case { model: Model::new(net), removed, x });
    }
    out
}

fn criterion_1() -> Outcome {
    let branched = StoichiometryView::new(&parse_network(synth::BRANCHED_DSL).map_err(|e| e.to_string())?);
    let s = DMatrix::from_row_slice(4, 5, &[-1, 1, 2, -2, 0, -2, 2, 1, -1, 0, 1, -1, -1, 0, -1, 0, 0, 0, 1, 1]);
    let z = DMatrix::from_row_slice(4, 4, &[1, 0, 2, 0, 2, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1]);
    if branched.s() != &s || branched.z() != &z {
        return Err(format!("branched S={} Z={}", branched.s(), branched.z()));
    }
    let r3 = parse_network("reaction r3: X1 + 3 X2 -> X3 + 3 X4 ; massaction kf=1").map_err(|e| e.to_string())?;
    let v = StoichiometryView::new(&r3);
    let ok = v.b() == &DMatrix::from_row_slice(2, 1, &[-1, 1])
        && v.z() == &DMatrix::from_row_slice(4, 2, &[1, 0, 3, 0, 0, 1, 0, 3])
        && v.s() == &DMatrix::from_row_slice(4, 1, &[-1, -3, 1, 3]);
    if !ok {
        return Err("single reaction B, Z or S differs".into());
    }
    Ok("branched S (4x5) and Z (4x4), single-reaction B, Z, S all integer-exact".into())
}

fn criterion_2(cases: &[Case]) -> Outcome {
    let mut worst_sum = 0.0f64;
    let mut min_diag = f64::INFINITY;
    let mut max_off = f64::NEG_INFINITY;
    for (i, c) in cases.iter().enumerate() {
        let red = plan_reduction(&c.model, &c.removed, &c.x).map_err(|e| format!("case {i}: {e}"))?;
        let l = red.schur(&c.x).map_err(|e| format!("case {i}: {e}"))?.l_hat;
        let scale = l.amax();
        for j in 0..l.ncols() {
            let sum: f64 = l.column(j).sum();
            worst_sum = worst_sum.max(sum.abs() / scale);
            min_diag = min_diag.min(l[(j, j)]);
            for k in 0..l.nrows() {
                if k != j {
                    max_off = max_off.max(l[(k, j)]);
                }
            }
        }
    }
    let detail = format!(
        "{} cases: max |col sum|/|L_hat| = {worst_sum:.2e}, min diag = {min_diag:.2e}, max off-diag = {max_off:.2e}",
        cases.len()
    );
    if worst_sum <= 1e-12 && min_diag > 0.0 && max_off <= 0.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_3(cases: &[Case]) -> Outcome {
    let mut worst = 0.0f64;
    for (i, c) in cases.iter().enumerate() {
        let red = plan_reduction(&c.model, &c.removed, &c.x).map_err(|e| format!("case {i}: {e}"))?;
        let a = red.reduced_rhs(&c.x, 0.0).map_err(|e| e.to_string())?;
        let b = red.reduced_rhs_projected(&c.x).map_err(|e| e.to_string())?;
        let scale = red.rhs_scale(&c.x).map_err(|e| e.to_string())?.amax().max(a.amax());
        if scale > 0.0 {
            worst = worst.max((a - b).amax() / scale);
        }
    }
    let detail = format!("{} cases: max relative difference {worst:.2e}", cases.len());
    if worst <= 1e-12 { Ok(detail) } else { Err(detail) }
}

fn criterion_4(cases: &[Case]) -> Outcome {
    let mut worst = 0.0f64;
    for (i, c) in cases.iter().enumerate() {
        let a = full_rhs(&c.model, &c.x, 0.0).map_err(|e| format!("case {i}: {e}"))?;
        let b = stoichiometric_rhs(&c.model, &c.x);
        let view = c.model.view();
        let v = kinetics::rates(&c.model, &c.x);
        let vb = DVector::from_vec(c.model.network().boundary_fluxes(&c.x));
        let scale = (view.s().map(|s| s.abs() as f64) * v.abs() + view.z_f64() * vb.abs()).amax();
        if scale > 0.0 {
            worst = worst.max((a - b).amax() / scale);
        }
    }
    let detail = format!("{} cases: max relative difference {worst:.2e}", cases.len());
    if worst <= 1e-12 { Ok(detail) } else { Err(detail) }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let lu = |rng: &mut ChaCha8Rng| (rng.random_range((0.1f64).ln()..(10.0f64).ln())).exp();
    let mut worst = 0.0f64;
    let mut params = 0;
    for _ in 0..100 {
        let p = ChainParams {
            k1f: lu(&mut rng),
            k1r: lu(&mut rng),
            k2f: lu(&mut rng),
            k2r: lu(&mut rng),
            km1: [lu(&mut rng), lu(&mut rng), lu(&mut rng), lu(&mut rng)],
            km2: [lu(&mut rng), lu(&mut rng), lu(&mut rng), lu(&mut rng)],
        };
        let x: Vec<f64> = (0..6).map(|_| lu(&mut rng)).collect();
        let model = Model::new(mm_chain(&p));
        let red = plan_reduction(&model, &[1], &x).map_err(|e| e.to_string())?;
        let l = red.schur(&x).map_err(|e| e.to_string())?.l_hat;
        let (m1, m3) = (x[0] * x[1], x[4] * x[5]);
        let forward = -l[(1, 0)] * m1;
        let reverse = -l[(0, 1)] * m3;
        let numeric = forward - reverse;
        let law = chain_reduce_closed_form(&p, x[2], x[3]);
        params = law.parameters().len();
        let closed = law.rate(&x);
        let scale = forward.abs().max(reverse.abs());
        worst = worst.max((numeric - closed).abs() / scale);
    }
    let detail = format!(
        "100 random cases: max relative difference {worst:.2e}; reduced law has {params} parameters (full chain {})",
        ChainParams::NUM_PARAMETERS
    );
    if worst <= 1e-12 && params == 6 { Ok(detail) } else { Err(detail) }
}

fn criterion_6() -> Outcome {
    let cases = suite(100, SEED ^ 6, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 66);
    let mut worst = 0.0f64;
    for (i, c) in cases.iter().enumerate() {
        let split = rng.random_range(1..c.removed.len());
        let (v1, v2) = c.removed.split_at(split);
        let one = plan_reduction(&c.model, &c.removed, &c.x).and_then(|r| r.schur(&c.x));
        let first = plan_reduction(&c.model, v1, &c.x).map_err(|e| format!("case {i}: {e}"))?;
        let stage1 = first.schur(&c.x).map_err(|e| format!("case {i}: {e}"))?.l_hat;
        let two = kron_reduce_matrix(&stage1, first.kept(), v2);
        let one = one.map_err(|e| format!("case {i}: {e}"))?.l_hat;
        worst = worst.max((one.clone() - two).amax() / one.amax());
    }
    let detail = format!("100 cases: max relative difference {worst:.2e}");
    if worst <= 1e-11 { Ok(detail) } else { Err(detail) }
}

struct Surrogate {
    model: Model,
    pre: Vec<f64>,
    x0: Vec<f64>,
    middle: usize,
}

fn surrogate(chain: &FastChain) -> Result<Surrogate, String> {
    let model = Model::new(chain.network());
    let tight = SolverConfig { rtol: 1e-10, atol: 1e-13, t_end: 1e4, ..SolverConfig::default() };
    let pre = relax_to_steady_state(&model, &FastChain::INITIAL_GUESS, &tight).map_err(|e| e.to_string())?;
    let mut x0 = pre.clone();
    x0[0] *= 2.0;
    let middle = parse_complex_ref(model.network(), "X3+X4").map_err(|e| e.to_string())?;
    Ok(Surrogate { model, pre, x0, middle })
}

fn criterion_7() -> Outcome {
    let s = surrogate(&FastChain::default())?;
    let cfg = SolverConfig { t_end: 200.0, ..SolverConfig::default() };
    let red = plan_reduction(&s.model, &[s.middle], &s.pre).map_err(|e| e.to_string())?;
    let all: Vec<usize> = (0..6).collect();
    let r = pulse_experiment(&s.model, &red, &s.pre, &[(0, s.x0[0])], &cfg, &all, 2000)
        .map_err(|e| e.to_string())?;
    // Score the transient window only; the long tail would dilute the error.
    let transient = ComparisonSpec { observed: r.compared.clone(), grid: uniform_grid(20.0, 400), atol: cfg.atol };
    let score = compare(&r.full, &r.reduced, &transient).map_err(|e| e.to_string())?.aggregate;
    let gap = max_gap(r.full.last_state(), r.reduced.last_state());
    let both_steady = r.full.is_converged() && r.reduced.is_converged();
    let detail = format!(
        "aggregate rel. L2 over t in [0,20] = {score:.4} (whole horizon {:.4}); steady-state gap {gap:.2e}; \
         both converged: {both_steady}",
        r.metrics.aggregate
    );
    if score <= 0.05 && gap <= 10.0 * cfg.atol && both_steady { Ok(detail) } else { Err(detail) }
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn criterion_8() -> Outcome {
    let decay = FnDynamics::new(1, |x, _| DVector::from_vec(vec![-x[0]]));
    let t_end = 10.0;
    let mut pts = Vec::new();
    for k in 4..=10 {
        let tol = 10f64.powi(-k);
        let cfg = SolverConfig { rtol: tol, atol: tol, t_end, ..SolverConfig::default() };
        let tr = integrate(&decay, &[1.0], &cfg).map_err(|e| e.to_string())?;
        let err = (tr.last_state()[0] - (-t_end).exp()).abs();
        pts.push(((tr.stats.accepted as f64).ln(), err.ln()));
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let order = -sxy / sxx;
    let detail = format!("error vs. step count over tol 1e-4..1e-10: observed order {order:.2}");
    if order >= 3.5 { Ok(detail) } else { Err(detail) }
}

/// Integer `w` with `w^T Z = 0` and `w_s = 0` for every species in `frozen`.
fn invariants_off(z: &DMatrix<i64>, frozen: &[usize]) -> Vec<Vec<i64>> {
    let rows: Vec<usize> = (0..z.nrows()).filter(|r| !frozen.contains(r)).collect();
    let sub = DMatrix::from_fn(rows.len(), z.ncols(), |i, j| z[(rows[i], j)]);
    left_null_space(&sub)
        .into_iter()
        .map(|w| {
            let mut full = vec![0; z.nrows()];
            for (k, &r) in rows.iter().enumerate() {
                full[r] = w[k];
            }
            full
        })
        .collect()
}

fn drift(tr: &Trajectory, w: &[i64]) -> f64 {
    let dot = |x: &[f64]| x.iter().zip(w).map(|(a, &b)| a * b as f64).sum::<f64>();
    let w0 = dot(&tr.states[0]);
    tr.states.iter().map(|x| (dot(x) - w0).abs()).fold(0.0, f64::max)
}

fn criterion_9() -> Outcome {
    let cfg = SolverConfig { t_end: 50.0, ..SolverConfig::default() };
    let tight = SolverConfig { rtol: 1e-10, atol: 1e-13, t_end: 1e4, ..SolverConfig::default() };
    let p = ChainParams { k1f: 2.0, k1r: 0.5, k2f: 1.5, k2r: 3.0, km1: [1.0, 2.0, 0.5, 1.5], km2: [2.0, 1.0, 0.7, 3.0] };
    let chain = Model::new(mm_chain(&p));
    let closed_fast = Model::new(FastChain::default().network().without_boundary());
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for (model, guess, middle) in [
        (&chain, vec![1.0, 0.8, 1.2, 0.6, 0.9, 1.1], 1),
        (&closed_fast, FastChain::INITIAL_GUESS.to_vec(), 2),
    ] {
        let pre = relax_to_steady_state(model, &guess, &tight).map_err(|e| e.to_string())?;
        let red = plan_reduction(model, &[middle], &pre).map_err(|e| e.to_string())?;
        let all: Vec<usize> = (0..model.num_species()).filter(|&s| !red.is_constant(s)).collect();
        let r: PulseResult = pulse_experiment(model, &red, &pre, &[(0, 2.0 * pre[0])], &cfg, &all, 200)
            .map_err(|e| e.to_string())?;
        for w in model.view().conservation_basis() {
            worst = worst.max(drift(&r.full, &w));
            checked += 1;
        }
        for w in invariants_off(model.view().z(), red.constant_species()) {
            worst = worst.max(drift(&r.reduced, &w));
            checked += 1;
        }
    }
    let detail = format!("{checked} invariant/trajectory pairs: max drift {worst:.2e} (limit {:.0e})", 100.0 * cfg.atol);
    if worst <= 100.0 * cfg.atol && checked > 0 { Ok(detail) } else { Err(detail) }
}

fn criterion_10() -> Outcome {
    let s = surrogate(&FastChain::default())?;
    let n = s.model.network();
    let candidates: Vec<usize> = ["X2", "X3+X4", "X5"]
        .iter()
        .map(|l| parse_complex_ref(n, l).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let cfg = SolverConfig { t_end: 20.0, ..SolverConfig::default() };
    let observed: Vec<usize> = (0..6).collect();
    let setup =
        ScanSetup { model: &s.model, pre_state: &s.pre, x0: &s.x0, config: &cfg, observed: &observed, grid_points: 400 };
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| scan_candidates(&setup, &candidates, ScanBudget::default()))
    };
    let a = run(1).map_err(|e| e.to_string())?;
    let b = run(4).map_err(|e| e.to_string())?;
    let top = a.first().ok_or("empty ranking")?;
    let score = match &top.outcome {
        ScanOutcome::Scored { score, .. } => *score,
        ScanOutcome::Failed { reason } => return Err(reason.clone()),
    };
    let top_label: Vec<String> = top.removed.iter().map(|&c| n.complex_label(c)).collect();
    let detail = format!("{} subsets ranked; top = {top_label:?} (score {score:.4}); identical across thread counts: {}", a.len(), a == b);
    if top.removed == [s.middle] && a == b { Ok(detail) } else { Err(detail) }
}

fn main() -> ExitCode {
    let cases = suite(SUITE_SIZE, SEED, 1);
    let criteria: Vec<Criterion<'_>> = vec![
        ("1 stoichiometry exactness", Duration::from_secs(1), Box::new(criterion_1)),
        ("2 Schur complement properties", Duration::from_secs(30), Box::new(|| criterion_2(&cases))),
        ("3 reduced rhs two-form equivalence", Duration::from_secs(30), Box::new(|| criterion_3(&cases))),
        ("4 dual-path full rhs", Duration::from_secs(30), Box::new(|| criterion_4(&cases))),
        ("5 closed-form chain reduction", Duration::from_secs(5), Box::new(criterion_5)),
        ("6 Schur transitivity", Duration::from_secs(30), Box::new(criterion_6)),
        ("7 timescale-separation quality", Duration::from_secs(10), Box::new(criterion_7)),
        ("8 integrator order", Duration::from_secs(30), Box::new(criterion_8)),
        ("9 conservation drift", Duration::from_secs(30), Box::new(criterion_9)),
        ("10 candidate scan", Duration::from_secs(30), Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (tag, detail) = match outcome {
            Ok(d) if elapsed <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; took {elapsed:.2?}, limit {limit:?}")),
            Err(d) => ("FAIL", d),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("[{tag}] criterion {name} ({elapsed:.2?}): {detail}");
    }
    if failed == 0 {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
