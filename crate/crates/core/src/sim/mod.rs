//! Integration of full and reduced models and trajectory comparison.

mod compare;
mod integrator;
mod trajectory;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kinetics::{self, KineticsError};
use crate::model::Model;
use crate::reduction::{ReducedNetwork, ReductionError};

pub use compare::{
    compare, pulse_experiment, relax_to_steady_state, uniform_grid, CompareError, ComparisonSpec, Metrics,
    PulseError, PulseResult, SpeciesMetrics, EQUILIBRIUM_TOLERANCE,
};
pub use integrator::integrate;
pub use trajectory::{CsvError, SolverStats, Status, Trajectory};

/// An autonomous-or-not ODE right-hand side over nonnegative states.
pub trait Dynamics: Sync {
    fn dim(&self) -> usize;
    fn rhs(&self, x: &[f64], t: f64) -> Result<DVector<f64>, RhsError>;
    fn species_names(&self) -> Vec<String> {
        (1..=self.dim()).map(|i| format!("x{i}")).collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RhsError {
    #[error(transparent)]
    Kinetics(#[from] KineticsError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

impl Dynamics for Model {
    fn dim(&self) -> usize {
        self.num_species()
    }

    fn rhs(&self, x: &[f64], t: f64) -> Result<DVector<f64>, RhsError> {
        Ok(kinetics::full_rhs(self, x, t)?)
    }

    fn species_names(&self) -> Vec<String> {
        self.network().species().iter().map(|s| s.name.clone()).collect()
    }
}

impl Dynamics for ReducedNetwork<'_> {
    fn dim(&self) -> usize {
        self.model().num_species()
    }

    fn rhs(&self, x: &[f64], t: f64) -> Result<DVector<f64>, RhsError> {
        Ok(self.reduced_rhs(x, t)?)
    }

    fn species_names(&self) -> Vec<String> {
        self.model().species_names()
    }
}

/// Adapter turning a closure into [`Dynamics`].
pub struct FnDynamics<F> {
    dim: usize,
    f: F,
}

impl<F> FnDynamics<F>
where
    F: Fn(&[f64], f64) -> DVector<f64> + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnDynamics { dim, f }
    }
}

impl<F> Dynamics for FnDynamics<F>
where
    F: Fn(&[f64], f64) -> DVector<f64> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn rhs(&self, x: &[f64], t: f64) -> Result<DVector<f64>, RhsError> {
        Ok((self.f)(x, t))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub rtol: f64,
    pub atol: f64,
    /// First step; chosen automatically when absent.
    pub h_init: Option<f64>,
    pub h_min: f64,
    pub t_end: f64,
    pub max_steps: usize,
    /// Stop as soon as a steady state is detected instead of running to `t_end`.
    pub stop_on_steady_state: bool,
    /// Keep steps inside the explicit stability region using a running
    /// estimate of the Jacobian's spectral radius.
    pub stability_cap: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            rtol: 1e-6,
            atol: 1e-9,
            h_init: None,
            h_min: 1e-14,
            t_end: 100.0,
            max_steps: 1_000_000,
            stop_on_steady_state: false,
            stability_cap: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |what: &str| Err(SimError::InvalidConfig(what.to_string()));
        if !(self.rtol > 0.0 && self.rtol.is_finite()) {
            return bad("rtol must be positive");
        }
        if !(self.atol > 0.0 && self.atol.is_finite()) {
            return bad("atol must be positive");
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad("t_end must be positive");
        }
        if !(self.h_min > 0.0) {
            return bad("h_min must be positive");
        }
        if let Some(h) = self.h_init {
            if !(h > self.h_min && h.is_finite()) {
                return bad("h_init must exceed h_min");
            }
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("initial state has {got} components, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("initial value of component {index} is {value}; states must be finite and nonnegative")]
    InvalidInitial { index: usize, value: f64 },
    #[error("step size fell below h_min at t={t:e} while keeping the state nonnegative")]
    NonPositivity { t: f64 },
    #[error("step size fell below h_min at t={t:e} while meeting the error tolerance")]
    StepTooSmall { t: f64 },
    #[error("exceeded {max_steps} steps at t={t:e}")]
    MaxStepsExceeded { max_steps: usize, t: f64 },
    #[error("pre-pulse state is not an equilibrium (max |rhs| = {residual:e})")]
    NotAtEquilibrium { residual: f64 },
    #[error("right-hand side failed at t={t:e}: {source}")]
    Rhs { t: f64, source: RhsError },
}

impl SimError {
    /// The reduction error behind a failed right-hand side, if any.
    pub fn reduction_error(&self) -> Option<&ReductionError> {
        match self {
            SimError::Rhs { source: RhsError::Reduction(e), .. } => Some(e),
            _ => None,
        }
    }
}
