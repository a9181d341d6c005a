use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::integrator::integrate;
use super::trajectory::Trajectory;
use super::{Dynamics, SimError, SolverConfig};
use crate::model::Model;
use crate::reduction::ReducedNetwork;

/// Largest `|rhs|` accepted for a pre-pulse state.
pub const EQUILIBRIUM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonSpec {
    /// Observed species, a row selection of the state.
    pub observed: Vec<usize>,
    pub grid: Vec<f64>,
    /// Floor on the denominator of the relative error.
    pub atol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesMetrics {
    pub species: String,
    pub index: usize,
    pub relative_l2: f64,
    pub max_abs: f64,
    /// `|full - reduced|` at the last grid point.
    pub steady_state_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub species: Vec<SpeciesMetrics>,
    /// Largest relative L2 error over observed species.
    pub aggregate: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompareError {
    #[error("no observed species")]
    NoObserved,
    #[error("observed species index {0} out of range")]
    ObservedOutOfRange(usize),
    #[error("trajectories have different dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("comparison grid point t={t} is not covered by the {which} trajectory")]
    GridNotCovered { t: f64, which: &'static str },
}

/// `n` equally spaced points on `[0, t_end]`.
pub fn uniform_grid(t_end: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect()
}

fn sample(tr: &Trajectory, t: f64, which: &'static str) -> Result<Vec<f64>, CompareError> {
    if let Some(v) = tr.sample(t) {
        return Ok(v);
    }
    // A run stopped at a steady state stays there.
    if tr.is_converged() && t > tr.t_end() {
        return Ok(tr.last_state().to_vec());
    }
    Err(CompareError::GridNotCovered { t, which })
}

pub fn compare(full: &Trajectory, reduced: &Trajectory, spec: &ComparisonSpec) -> Result<Metrics, CompareError> {
    if spec.observed.is_empty() {
        return Err(CompareError::NoObserved);
    }
    if full.dim() != reduced.dim() {
        return Err(CompareError::DimensionMismatch(full.dim(), reduced.dim()));
    }
    if let Some(&i) = spec.observed.iter().find(|&&i| i >= full.dim()) {
        return Err(CompareError::ObservedOutOfRange(i));
    }
    let k = spec.observed.len();
    let mut diff2 = vec![0.0; k];
    let mut norm2 = vec![0.0; k];
    let mut max_abs = vec![0.0f64; k];
    let mut last = vec![0.0; k];
    for &t in &spec.grid {
        let a = sample(full, t, "full")?;
        let b = sample(reduced, t, "reduced")?;
        for (j, &s) in spec.observed.iter().enumerate() {
            let d = a[s] - b[s];
            diff2[j] += d * d;
            norm2[j] += a[s] * a[s];
            max_abs[j] = max_abs[j].max(d.abs());
            last[j] = d.abs();
        }
    }
    let species: Vec<SpeciesMetrics> = spec
        .observed
        .iter()
        .enumerate()
        .map(|(j, &s)| SpeciesMetrics {
            species: full.names[s].clone(),
            index: s,
            relative_l2: diff2[j].sqrt() / norm2[j].sqrt().max(spec.atol),
            max_abs: max_abs[j],
            steady_state_deviation: last[j],
        })
        .collect();
    let aggregate = species.iter().map(|m| m.relative_l2).fold(0.0, f64::max);
    Ok(Metrics { species, aggregate })
}

#[derive(Debug, Clone)]
pub struct PulseResult {
    pub full: Trajectory,
    pub reduced: Trajectory,
    pub metrics: Metrics,
    /// Observed species that the comparison actually used.
    pub compared: Vec<usize>,
}

/// Integrate to a steady state, stopping once it is detected.
pub fn relax_to_steady_state<D: Dynamics + ?Sized>(
    dynamics: &D,
    x0: &[f64],
    config: &SolverConfig,
) -> Result<Vec<f64>, SimError> {
    let cfg = SolverConfig { stop_on_steady_state: true, ..config.clone() };
    let tr = integrate(dynamics, x0, &cfg)?;
    Ok(tr.last_state().to_vec())
}

/// Apply `overrides` to the equilibrium `pre_state` at `t = 0` and compare
/// the full and reduced responses on `grid_points` uniform points. Observed
/// species frozen in the reduced model are left out of the metrics.
pub fn pulse_experiment(
    model: &Model,
    reduced: &ReducedNetwork<'_>,
    pre_state: &[f64],
    overrides: &[(usize, f64)],
    config: &SolverConfig,
    observed: &[usize],
    grid_points: usize,
) -> Result<PulseResult, PulseError> {
    let residual = model.rhs(pre_state, 0.0).map_err(|source| SimError::Rhs { t: 0.0, source })?.amax();
    if !(residual <= EQUILIBRIUM_TOLERANCE) {
        return Err(SimError::NotAtEquilibrium { residual }.into());
    }
    let mut x0 = pre_state.to_vec();
    for &(s, v) in overrides {
        x0[s] = v;
    }
    let full = integrate(model, &x0, config)?;
    let reduced_traj = integrate(reduced, &reduced.pin(&x0), config)?;
    let compared: Vec<usize> = observed.iter().copied().filter(|&s| !reduced.is_constant(s)).collect();
    let spec = ComparisonSpec { observed: compared.clone(), grid: uniform_grid(config.t_end, grid_points), atol: config.atol };
    let metrics = compare(&full, &reduced_traj, &spec)?;
    Ok(PulseResult { full, reduced: reduced_traj, metrics, compared })
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PulseError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Compare(#[from] CompareError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::parse_network;
    use crate::reduction::plan_reduction;

    #[test]
    fn identical_trajectories_have_zero_error() {
        let m = Model::new(parse_network("reaction r: A <-> B ; massaction kf=1 kr=1").unwrap());
        let cfg = SolverConfig { t_end: 5.0, ..Default::default() };
        let tr = integrate(&m, &[1.0, 0.0], &cfg).unwrap();
        let spec = ComparisonSpec { observed: vec![0, 1], grid: uniform_grid(5.0, 50), atol: 1e-9 };
        let metrics = compare(&tr, &tr, &spec).unwrap();
        assert_eq!(metrics.aggregate, 0.0);
        assert!(metrics.species.iter().all(|s| s.max_abs == 0.0));
    }

    #[test]
    fn reversible_pair_relaxes_to_half() {
        let m = Model::new(parse_network("reaction r: A <-> B ; massaction kf=1 kr=1").unwrap());
        let cfg = SolverConfig { t_end: 40.0, ..Default::default() };
        let tr = integrate(&m, &[1.0, 0.0], &cfg).unwrap();
        assert!(tr.is_converged());
        for v in tr.last_state() {
            assert!((v - 0.5).abs() <= cfg.atol);
        }
    }

    #[test]
    fn pulse_needs_equilibrium() {
        let m = Model::new(parse_network("reaction r: A <-> B ; massaction kf=1 kr=1").unwrap());
        let red = plan_reduction(&m, &[], &[1.0, 0.0]).unwrap();
        let err = pulse_experiment(&m, &red, &[1.0, 0.0], &[], &SolverConfig::default(), &[0], 10).unwrap_err();
        assert!(matches!(err, PulseError::Sim(SimError::NotAtEquilibrium { .. })));
    }

    #[test]
    fn grid_outside_trajectory() {
        let m = Model::new(parse_network("reaction r: A <-> B ; massaction kf=1 kr=1").unwrap());
        let tr = integrate(&m, &[1.0, 0.0], &SolverConfig { t_end: 1.0, ..Default::default() }).unwrap();
        let spec = ComparisonSpec { observed: vec![0], grid: vec![0.0, 2.0], atol: 1e-9 };
        assert!(matches!(compare(&tr, &tr, &spec), Err(CompareError::GridNotCovered { .. })));
    }
}
