//! Enzyme-kinetics rate laws and the state-dependent weighted Laplacian.
//!
//! Every directed edge `j` (substrate complex `S_j` to product complex `P_j`)
//! has rate
//!
//! ```text
//! v_j(x) = d_j(x) * k_j * prod_i x_i^{Z[i, S_j]}
//! ```
//!
//! where `d_j` is a product of reciprocal affine groups (`d_j = 1` for mass
//! action). The weighted adjacency puts `a[P_j, S_j] = k_j d_j(x)`, and
//! `L(x) = diag(colsum A) - A`, so `B v(x) = -L(x) m(x)` with `m` the vector of
//! complex monomials. The network dynamics are `x' = Z (v_b - L(x) m(x))`.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::model::Model;
use crate::stoichiometry::Edge;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LawKind {
    MassAction,
    MichaelisMenten,
}

/// One factor `1 + sum_i c_i x_i` of a rate-law denominator.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AffineGroup {
    terms: Vec<(usize, f64)>,
}

impl AffineGroup {
    pub fn new(terms: Vec<(usize, f64)>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[(usize, f64)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().fold(1.0, |acc, &(s, c)| acc + c * x[s])
    }
}

/// `d(x) = 1 / prod_g (1 + sum_i c_{g,i} x_i)`; the empty product is mass action.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DenominatorSpec {
    groups: Vec<AffineGroup>,
}

impl DenominatorSpec {
    pub fn one() -> Self {
        Self::default()
    }

    /// Empty groups are dropped; they contribute a factor of one.
    pub fn new(groups: Vec<AffineGroup>) -> Self {
        Self {
            groups: groups.into_iter().filter(|g| !g.is_empty()).collect(),
        }
    }

    pub fn groups(&self) -> &[AffineGroup] {
        &self.groups
    }

    pub fn is_one(&self) -> bool {
        self.groups.is_empty()
    }

    /// Value of `d(x)`, in `(0, 1]` for nonnegative `x`.
    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        let p: f64 = self.groups.iter().map(|g| g.eval(x)).product();
        1.0 / p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateLaw {
    pub kind: LawKind,
    pub k_forward: f64,
    /// Zero for irreversible reactions.
    pub k_reverse: f64,
    pub denominator: DenominatorSpec,
}

impl RateLaw {
    pub fn new(kind: LawKind, k_forward: f64, k_reverse: f64, denominator: DenominatorSpec) -> Self {
        Self { kind, k_forward, k_reverse, denominator }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KineticsError {
    #[error("non-finite derivative for species {species} ({value})")]
    NonFinite { species: usize, value: f64 },
}

/// `prod_i x_i^{Z[i, complex]}` by integer powers; `0^0 = 1`.
pub fn monomial(model: &Model, complex: usize, x: &[f64]) -> f64 {
    model.network().complexes()[complex]
        .composition()
        .iter()
        .fold(1.0, |acc, &(s, c)| acc * x[s].powi(c as i32))
}

/// Vector of all complex monomials, `Exp(Z^T Ln x)`.
pub fn monomials(model: &Model, x: &[f64]) -> DVector<f64> {
    DVector::from_iterator(
        model.network().num_complexes(),
        (0..model.network().num_complexes()).map(|c| monomial(model, c, x)),
    )
}

/// Edge weight `k_j d_j(x)`.
#[inline]
pub fn edge_weight(model: &Model, edge: &Edge, x: &[f64]) -> f64 {
    let law = &model.network().reactions()[edge.reaction].law;
    edge.rate_constant * law.denominator.eval(x)
}

/// Rate of a single directed edge, `d_j(x) k_j m_{S_j}(x)`.
pub fn rate(model: &Model, edge: &Edge, x: &[f64]) -> f64 {
    edge_weight(model, edge, x) * monomial(model, edge.tail, x)
}

/// Rates of all directed edges, in edge order.
pub fn rates(model: &Model, x: &[f64]) -> DVector<f64> {
    let edges = model.view().edges();
    DVector::from_iterator(edges.len(), edges.iter().map(|e| rate(model, e, x)))
}

/// Net flux of a reaction (forward minus reverse for reversible reactions).
pub fn net_rate(model: &Model, reaction: usize, x: &[f64]) -> f64 {
    model
        .view()
        .edges()
        .iter()
        .filter(|e| e.reaction == reaction)
        .map(|e| if e.reverse { -rate(model, e, x) } else { rate(model, e, x) })
        .sum()
}

/// Weighted adjacency and Laplacian of the complex graph at a state.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianEval {
    pub adjacency: DMatrix<f64>,
    pub laplacian: DMatrix<f64>,
    pub x: Vec<f64>,
}

/// Write `L(x)` into `out` (resized if needed). Column sums are zero up to
/// the rounding of one summation per column.
pub fn laplacian_into(model: &Model, x: &[f64], out: &mut DMatrix<f64>) {
    let c = model.network().num_complexes();
    if out.shape() != (c, c) {
        *out = DMatrix::zeros(c, c);
    } else {
        out.fill(0.0);
    }
    for e in model.view().edges() {
        out[(e.head, e.tail)] -= edge_weight(model, e, x);
    }
    for j in 0..c {
        let mut outflow = 0.0;
        for i in 0..c {
            if i != j {
                outflow -= out[(i, j)];
            }
        }
        out[(j, j)] = outflow;
    }
}

pub fn laplacian(model: &Model, x: &[f64]) -> LaplacianEval {
    let mut l = DMatrix::zeros(0, 0);
    laplacian_into(model, x, &mut l);
    let mut adjacency = -l.clone();
    adjacency.fill_diagonal(0.0);
    LaplacianEval { adjacency, laplacian: l, x: x.to_vec() }
}

fn check_finite(dx: &DVector<f64>) -> Result<(), KineticsError> {
    match dx.iter().position(|v| !v.is_finite()) {
        Some(species) => Err(KineticsError::NonFinite { species, value: dx[species] }),
        None => Ok(()),
    }
}

/// Full-model right-hand side `Z (v_b(x) - L(x) m(x))`.
///
/// `t` is accepted for interface symmetry with time-dependent inputs; the
/// rate laws themselves are autonomous.
pub fn full_rhs(model: &Model, x: &[f64], _t: f64) -> Result<DVector<f64>, KineticsError> {
    let mut l = DMatrix::zeros(0, 0);
    laplacian_into(model, x, &mut l);
    let vb = DVector::from_vec(model.network().boundary_fluxes(x));
    let complex_flux = vb - l * monomials(model, x);
    let dx = model.view().z_f64() * complex_flux;
    check_finite(&dx)?;
    Ok(dx)
}

/// The same right-hand side through the reaction route `S v(x) + Z v_b(x)`.
pub fn stoichiometric_rhs(model: &Model, x: &[f64]) -> DVector<f64> {
    let view = model.view();
    let s = view.s().map(|v| v as f64);
    let vb = DVector::from_vec(model.network().boundary_fluxes(x));
    s * rates(model, x) + view.z_f64() * vb
}
