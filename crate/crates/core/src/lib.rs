//! Complex-graph models of reaction networks with general enzyme kinetics,
//! Kron reduction of their weighted Laplacian, and simulation-based
//! comparison of full and reduced models.
//!
//! ```
//! use kronred_core::{parse_network, plan_reduction, Model};
//!
//! let net = parse_network("reaction r1: A <-> B ; massaction kf=1 kr=2\nreaction r2: B <-> C ; massaction kf=3 kr=1").unwrap();
//! let model = Model::new(net);
//! let reduced = plan_reduction(&model, &[1], &[1.0, 1.0, 1.0]).unwrap();
//! assert_eq!(reduced.kept(), &[0, 2]);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod exact;
pub mod kinetics;
pub mod model;
pub mod network;
pub mod reduction;
pub mod sim;
pub mod stoichiometry;
pub mod synth;
mod union_find;

pub use kinetics::{
    full_rhs, laplacian, monomial, monomials, rate, stoichiometric_rhs, AffineGroup, DenominatorSpec, KineticsError,
    LaplacianEval, LawKind, RateLaw,
};
pub use model::Model;
pub use network::{
    parse_complex_ref, parse_network, parse_network_with, BoundaryFlux, BoundaryForm, Complex, JsonError, Network,
    NetworkBuilder, NetworkError, ParseError, ParseOptions, Reaction, Species,
};
pub use reduction::{
    chain_reduce_closed_form, plan_reduction, scan_candidates, ChainParams, ReducedMmLaw, ReducedNetwork,
    ReductionError, ReductionPlan, SchurEval,
};
pub use sim::{
    compare, integrate, pulse_experiment, ComparisonSpec, Dynamics, Metrics, SimError, SolverConfig, Trajectory,
};
pub use stoichiometry::{Edge, StoichiometryView};
pub use union_find::UnionFind;

/// Any error raised by this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error(transparent)]
    Kinetics(#[from] KineticsError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Plan(#[from] reduction::PlanError),
    #[error(transparent)]
    Sim(#[from] SimError),
}
