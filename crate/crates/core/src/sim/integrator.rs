//! Dormand-Prince 5(4) with PI step control and a positivity guard.

use nalgebra::DVector;

use super::trajectory::{SolverStats, Status, Trajectory};
use super::{Dynamics, SimError, SolverConfig};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Difference between the fifth- and fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO: f64 = 0.2 - 0.75 * BETA;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
/// Fraction of the real-axis stability interval (about 3.3) used by the cap.
const STABILITY_REACH: f64 = 3.0;
const STEADY_FACTOR: f64 = 10.0;
const STEADY_STREAK: usize = 3;

struct Rhs<'a, D: ?Sized> {
    dynamics: &'a D,
    evals: usize,
}

impl<D: Dynamics + ?Sized> Rhs<'_, D> {
    fn eval(&mut self, x: &[f64], t: f64) -> Result<DVector<f64>, SimError> {
        self.evals += 1;
        self.dynamics.rhs(x, t).map_err(|source| SimError::Rhs { t, source })
    }
}

fn error_norm(err: &DVector<f64>, y0: &[f64], y1: &[f64], cfg: &SolverConfig) -> f64 {
    let n = err.len().max(1) as f64;
    let sum: f64 = err
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let sc = cfg.atol + cfg.rtol * y0[i].abs().max(y1[i].abs());
            (e / sc).powi(2)
        })
        .sum();
    (sum / n).sqrt()
}

fn initial_step<D: Dynamics + ?Sized>(
    rhs: &mut Rhs<'_, D>,
    x: &[f64],
    f0: &DVector<f64>,
    cfg: &SolverConfig,
) -> Result<f64, SimError> {
    let n = x.len().max(1) as f64;
    let sc: Vec<f64> = x.iter().map(|v| cfg.atol + cfg.rtol * v.abs()).collect();
    let norm = |v: &mut dyn Iterator<Item = f64>| (v.map(|a| a * a).sum::<f64>() / n).sqrt();
    let d0 = norm(&mut x.iter().zip(&sc).map(|(a, s)| a / s));
    let d1 = norm(&mut f0.iter().zip(&sc).map(|(a, s)| a / s));
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(cfg.t_end);
    let x1: Vec<f64> = x.iter().zip(f0.iter()).map(|(a, d)| (a + h0 * d).max(0.0)).collect();
    let f1 = rhs.eval(&x1, h0)?;
    let d2 = norm(&mut f1.iter().zip(f0.iter()).zip(&sc).map(|((a, b), s)| (a - b) / s)) / h0;
    let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
    Ok((100.0 * h0).min(h1).min(cfg.t_end).max(cfg.h_min * 2.0))
}

/// Running spectral-radius estimate by finite-difference power iteration,
/// warm-started from the previous direction.
struct SpectralEstimate {
    direction: Vec<f64>,
    rho: f64,
}

impl SpectralEstimate {
    fn new(dim: usize) -> Self {
        // A fixed, non-symmetric start avoids orthogonality with common modes.
        let direction = (0..dim).map(|i| 1.0 + 0.37 * ((i * 7919) % 13) as f64).collect();
        SpectralEstimate { direction, rho: 0.0 }
    }

    fn update<D: Dynamics + ?Sized>(&mut self, rhs: &mut Rhs<'_, D>, x: &[f64], fx: &DVector<f64>, t: f64) {
        let vnorm = self.direction.iter().map(|v| v * v).sum::<f64>().sqrt();
        if vnorm == 0.0 || !vnorm.is_finite() {
            *self = SpectralEstimate::new(x.len());
            return;
        }
        let xnorm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let eps = f64::EPSILON.sqrt() * (1.0 + xnorm) / vnorm;
        let xp: Vec<f64> = x.iter().zip(&self.direction).map(|(a, v)| a + eps * v).collect();
        let Ok(fp) = rhs.eval(&xp, t) else { return };
        let jv: Vec<f64> = fp.iter().zip(fx.iter()).map(|(a, b)| (a - b) / eps).collect();
        let jnorm = jv.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !jnorm.is_finite() {
            return;
        }
        self.rho = jnorm / vnorm;
        if jnorm > 0.0 {
            self.direction = jv.iter().map(|v| v / jnorm).collect();
        }
    }

    fn cap(&self) -> f64 {
        if self.rho > 0.0 { STABILITY_REACH / self.rho } else { f64::INFINITY }
    }
}

/// Integrate `dynamics` from `x0` over `[0, t_end]`, storing every accepted step.
pub fn integrate<D: Dynamics + ?Sized>(
    dynamics: &D,
    x0: &[f64],
    cfg: &SolverConfig,
) -> Result<Trajectory, SimError> {
    cfg.validate()?;
    let dim = dynamics.dim();
    if x0.len() != dim {
        return Err(SimError::Dimension { expected: dim, got: x0.len() });
    }
    if let Some(i) = x0.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(SimError::InvalidInitial { index: i, value: x0[i] });
    }

    let mut rhs = Rhs { dynamics, evals: 0 };
    let mut stats = SolverStats::default();
    let mut t = 0.0;
    let mut x = x0.to_vec();
    let mut f = rhs.eval(&x, t)?;

    let mut out = Trajectory {
        names: dynamics.species_names(),
        times: vec![t],
        states: vec![x.clone()],
        derivatives: vec![f.as_slice().to_vec()],
        status: Status::ReachedHorizon,
        stats,
        rtol: cfg.rtol,
        atol: cfg.atol,
    };

    let mut spectral = SpectralEstimate::new(dim);
    if cfg.stability_cap {
        spectral.update(&mut rhs, &x, &f, t);
    }
    let mut h = match cfg.h_init {
        Some(h) => h,
        None => initial_step(&mut rhs, &x, &f, cfg)?,
    };
    let mut fac_old: f64 = 1e-4;
    let mut last_rejected = false;
    let mut streak = usize::from(f.amax() <= STEADY_FACTOR * cfg.atol);
    let mut steady_since = if streak > 0 { Some(t) } else { None };

    let mut k: Vec<DVector<f64>> = vec![DVector::zeros(dim); 7];
    let mut stage = vec![0.0; dim];

    loop {
        if t >= cfg.t_end {
            break;
        }
        if stats.accepted + stats.rejected >= cfg.max_steps {
            return Err(SimError::MaxStepsExceeded { max_steps: cfg.max_steps, t });
        }
        if cfg.stability_cap {
            h = h.min(spectral.cap());
        }
        let remaining = cfg.t_end - t;
        let last = h >= remaining * (1.0 - 1e-12) || t + h * 1.01 >= cfg.t_end;
        if last {
            h = remaining;
        }

        k[0].copy_from(&f);
        for s in 1..7 {
            for i in 0..dim {
                let mut acc = x[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        acc += h * a * kj[i];
                    }
                }
                stage[i] = acc;
            }
            k[s] = rhs.eval(&stage, t + C[s] * h)?;
        }
        // Stage 7 is evaluated at the fifth-order solution.
        let x_new = stage.clone();
        let mut err = DVector::zeros(dim);
        for (j, kj) in k.iter().enumerate() {
            if E[j] != 0.0 {
                err.axpy(h * E[j], kj, 1.0);
            }
        }
        let en = error_norm(&err, &x, &x_new, cfg);
        if !en.is_finite() {
            stats.rejected += 1;
            h *= 0.5;
            if h < cfg.h_min {
                return Err(SimError::StepTooSmall { t });
            }
            last_rejected = true;
            continue;
        }

        let fac11 = en.powf(EXPO);
        if en <= 1.0 {
            if x_new.iter().any(|&v| v < 0.0) {
                stats.rejected += 1;
                stats.positivity_rejections += 1;
                h *= 0.5;
                if h < cfg.h_min {
                    return Err(SimError::NonPositivity { t });
                }
                last_rejected = true;
                continue;
            }
            let fac = (fac11 / fac_old.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut h_new = h / fac;
            fac_old = en.max(1e-4);
            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;
            stats.accepted += 1;
            t = if last { cfg.t_end } else { t + h };
            x = x_new;
            f = k[6].clone();
            out.times.push(t);
            out.states.push(x.clone());
            out.derivatives.push(f.as_slice().to_vec());

            if f.amax() <= STEADY_FACTOR * cfg.atol {
                if streak == 0 {
                    steady_since = Some(t);
                }
                streak += 1;
            } else {
                streak = 0;
                steady_since = None;
            }
            if cfg.stop_on_steady_state && streak >= STEADY_STREAK {
                break;
            }
            if cfg.stability_cap {
                spectral.update(&mut rhs, &x, &f, t);
            }
            h = h_new;
        } else {
            stats.rejected += 1;
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
            if h < cfg.h_min {
                return Err(SimError::StepTooSmall { t });
            }
            last_rejected = true;
        }
    }

    stats.rhs_evaluations = rhs.evals;
    out.stats = stats;
    out.status = match steady_since {
        Some(ts) if streak >= STEADY_STREAK => Status::ConvergedToSteadyState { t_steady: ts },
        _ => Status::ReachedHorizon,
    };
    Ok(out)
}
