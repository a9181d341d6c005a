//! Kron reduction of the complex graph.
//!
//! Deleting a set of complexes replaces the Laplacian by its Schur complement
//! `L11 - L12 L22^{-1} L21`, evaluated numerically at every state. Species
//! that occur only in removed complexes are frozen at reference values.

pub mod chain;
mod linalg;
mod plan;
pub mod scan;

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::kinetics::{self, KineticsError};
use crate::model::Model;

pub use chain::{chain_reduce_closed_form, ChainParams, ReducedMmLaw};
pub use plan::{PlanError, ReductionPlan};
pub use scan::{scan_candidates, ScanBudget, ScanEntry, ScanOutcome, ScanSetup};

/// `L22` is declared singular above this 1-norm condition estimate.
pub const CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error("at least one complex must be kept")]
    EmptyKeptSet,
    #[error("complex index {0} out of range")]
    ComplexOutOfRange(usize),
    #[error("complex {0} listed twice for removal")]
    DuplicateRemoval(usize),
    #[error("state has {got} components, expected {expected}")]
    StateDimension { expected: usize, got: usize },
    #[error("reference value of frozen species {species} must be positive and finite, got {value}")]
    InvalidFrozenValue { species: usize, value: f64 },
    #[error("removed block L22 is singular (condition estimate {condition:.3e})")]
    SingularL22 { condition: f64 },
    #[error(transparent)]
    Kinetics(#[from] KineticsError),
}

/// A reduction of a parent model by a fixed set of removed complexes.
#[derive(Debug, Clone)]
pub struct ReducedNetwork<'a> {
    model: &'a Model,
    kept: Vec<usize>,
    removed: Vec<usize>,
    z_hat: DMatrix<i64>,
    z_hat_f64: DMatrix<f64>,
    constant_species: Vec<usize>,
    frozen_values: Vec<(usize, f64)>,
    x_ref: Vec<f64>,
    condition_at_ref: f64,
}

/// Schur complement data at one state.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurEval {
    pub l_hat: DMatrix<f64>,
    pub p_vb: DVector<f64>,
    pub condition_estimate: f64,
    pub x: Vec<f64>,
}

/// Residuals of the auxiliary system with `y2' = 0` imposed.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryReport {
    pub w2: DVector<f64>,
    /// `max |v_b2 - L21 w1 - L22 w2|`.
    pub residual_removed: f64,
    /// `max |(v_b1 - L11 w1 - L12 w2) - (P v_b - L_hat w1)|`.
    pub residual_kept: f64,
    /// Magnitude of the terms entering the residuals.
    pub scale: f64,
}

impl AuxiliaryReport {
    pub fn max_residual(&self) -> f64 {
        self.residual_removed.max(self.residual_kept)
    }
}

fn check_dim(model: &Model, x: &[f64]) -> Result<(), ReductionError> {
    let m = model.num_species();
    if x.len() != m {
        return Err(ReductionError::StateDimension { expected: m, got: x.len() });
    }
    Ok(())
}

/// Plan a reduction deleting `removed`, freezing constant species at `x_ref`
/// and checking that `L22(x_ref)` is nonsingular.
pub fn plan_reduction<'a>(
    model: &'a Model,
    removed: &[usize],
    x_ref: &[f64],
) -> Result<ReducedNetwork<'a>, ReductionError> {
    let c = model.num_complexes();
    check_dim(model, x_ref)?;
    let mut mask = vec![false; c];
    for &r in removed {
        if r >= c {
            return Err(ReductionError::ComplexOutOfRange(r));
        }
        if mask[r] {
            return Err(ReductionError::DuplicateRemoval(r));
        }
        mask[r] = true;
    }
    let kept: Vec<usize> = (0..c).filter(|&i| !mask[i]).collect();
    if kept.is_empty() {
        return Err(ReductionError::EmptyKeptSet);
    }
    let removed: Vec<usize> = (0..c).filter(|&i| mask[i]).collect();
    let z = model.view().z();
    let z_hat = DMatrix::from_fn(z.nrows(), kept.len(), |i, j| z[(i, kept[j])]);
    let constant_species: Vec<usize> =
        (0..z.nrows()).filter(|&i| z_hat.row(i).iter().all(|&v| v == 0)).collect();
    let mut frozen_values = Vec::with_capacity(constant_species.len());
    for &s in &constant_species {
        let value = x_ref[s];
        if !(value > 0.0 && value.is_finite()) {
            return Err(ReductionError::InvalidFrozenValue { species: s, value });
        }
        frozen_values.push((s, value));
    }
    let mut reduced = ReducedNetwork {
        model,
        kept,
        removed,
        z_hat_f64: z_hat.map(|v| v as f64),
        z_hat,
        constant_species,
        frozen_values,
        x_ref: x_ref.to_vec(),
        condition_at_ref: 1.0,
    };
    let at_ref = reduced.schur(x_ref)?;
    reduced.condition_at_ref = at_ref.condition_estimate;
    Ok(reduced)
}

/// Full-model Laplacian in kept/removed order together with its blocks and
/// the factored removed block.
struct Partitioned {
    blocks: linalg::Blocks,
    permuted: DMatrix<f64>,
    factor: linalg::Factored,
    vb1: DVector<f64>,
    vb2: DVector<f64>,
}

impl<'a> ReducedNetwork<'a> {
    pub fn model(&self) -> &'a Model {
        self.model
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn removed(&self) -> &[usize] {
        &self.removed
    }

    /// Kept columns of `Z`, m x c_hat.
    pub fn z_hat(&self) -> &DMatrix<i64> {
        &self.z_hat
    }

    /// Species whose row of `Z_hat` is zero.
    pub fn constant_species(&self) -> &[usize] {
        &self.constant_species
    }

    pub fn is_constant(&self, species: usize) -> bool {
        self.constant_species.binary_search(&species).is_ok()
    }

    pub fn frozen_values(&self) -> &[(usize, f64)] {
        &self.frozen_values
    }

    pub fn reference_state(&self) -> &[f64] {
        &self.x_ref
    }

    /// Condition estimate of `L22` at the reference state.
    pub fn condition_at_reference(&self) -> f64 {
        self.condition_at_ref
    }

    /// Copy of `x` with constant species set to their frozen values.
    pub fn pin(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        for &(s, v) in &self.frozen_values {
            y[s] = v;
        }
        y
    }

    fn partition(&self, x: &[f64]) -> Result<Partitioned, ReductionError> {
        check_dim(self.model, x)?;
        let mut l = DMatrix::zeros(0, 0);
        kinetics::laplacian_into(self.model, x, &mut l);
        let permuted = linalg::permute(&l, &self.kept, &self.removed);
        let blocks = linalg::split(&permuted, self.kept.len());
        let factor = linalg::factor(&blocks.l22);
        if !(factor.condition <= CONDITION_LIMIT) {
            return Err(ReductionError::SingularL22 { condition: factor.condition });
        }
        let vb = self.model.network().boundary_fluxes(x);
        let vb1 = DVector::from_iterator(self.kept.len(), self.kept.iter().map(|&i| vb[i]));
        let vb2 = DVector::from_iterator(self.removed.len(), self.removed.iter().map(|&i| vb[i]));
        Ok(Partitioned { blocks, permuted, factor, vb1, vb2 })
    }

    /// `L_hat(x)`, `P(x) v_b(x)` and the conditioning of `L22(x)`. The state
    /// is used as given; callers pin constant species with [`Self::pin`].
    pub fn schur(&self, x: &[f64]) -> Result<SchurEval, ReductionError> {
        let part = self.partition(x)?;
        let k = self.kept.len();
        let l_hat = linalg::kron_reduce_gth(part.permuted.clone(), k)
            .ok_or(ReductionError::SingularL22 { condition: f64::INFINITY })?;
        let p_vb = linalg::apply_p(&part.blocks, &part.factor, &part.vb1, &part.vb2);
        Ok(SchurEval { l_hat, p_vb, condition_estimate: part.factor.condition, x: x.to_vec() })
    }

    /// `L_hat(x)` through the LU factor of `L22`; used as a cross-check.
    pub fn schur_lu(&self, x: &[f64]) -> Result<DMatrix<f64>, ReductionError> {
        let part = self.partition(x)?;
        Ok(linalg::kron_reduce_lu(&part.blocks, &part.factor))
    }

    fn kept_monomials(&self, x: &[f64]) -> DVector<f64> {
        DVector::from_iterator(self.kept.len(), self.kept.iter().map(|&c| kinetics::monomial(self.model, c, x)))
    }

    /// Reduced right-hand side `Z_hat (P v_b - L_hat m_kept)` at the pinned state.
    pub fn reduced_rhs(&self, x: &[f64], _t: f64) -> Result<DVector<f64>, ReductionError> {
        let x = self.pin(x);
        let eval = self.schur(&x)?;
        let flux = &eval.p_vb - &eval.l_hat * self.kept_monomials(&x);
        let mut dx = &self.z_hat_f64 * flux;
        for &s in &self.constant_species {
            dx[s] = 0.0;
        }
        if let Some(i) = dx.iter().position(|v| !v.is_finite()) {
            return Err(KineticsError::NonFinite { species: i, value: dx[i] }.into());
        }
        Ok(dx)
    }

    /// The same derivative as `Z_hat P (v_b - L m)` over all complexes, at
    /// the pinned state.
    pub fn reduced_rhs_projected(&self, x: &[f64]) -> Result<DVector<f64>, ReductionError> {
        let x = self.pin(x);
        let part = self.partition(&x)?;
        let m = kinetics::monomials(self.model, &x);
        let k = self.kept.len();
        let m1 = DVector::from_iterator(k, self.kept.iter().map(|&i| m[i]));
        let m2 = DVector::from_iterator(self.removed.len(), self.removed.iter().map(|&i| m[i]));
        let b = &part.blocks;
        let y1 = &part.vb1 - &b.l11 * &m1 - &b.l12 * &m2;
        let y2 = &part.vb2 - &b.l21 * &m1 - &b.l22 * &m2;
        Ok(&self.z_hat_f64 * linalg::apply_p(b, &part.factor, &y1, &y2))
    }

    /// Magnitude of the terms summed by either form of the reduced
    /// right-hand side, per species: the larger of
    /// `|Z_hat| (|P v_b| + |L_hat| |m_kept|)` and
    /// `|Z_hat| |P| (|v_b| + |L| |m|)`.
    pub fn rhs_scale(&self, x: &[f64]) -> Result<DVector<f64>, ReductionError> {
        let x = self.pin(x);
        let eval = self.schur(&x)?;
        let m1 = self.kept_monomials(&x);
        let reduced = eval.p_vb.abs() + eval.l_hat.abs() * &m1;

        let part = self.partition(&x)?;
        let m = kinetics::monomials(self.model, &x);
        let m2 = DVector::from_iterator(self.removed.len(), self.removed.iter().map(|&i| m[i]));
        let b = &part.blocks;
        let t1 = part.vb1.abs() + b.l11.abs() * &m1 + b.l12.abs() * &m2;
        let t2 = part.vb2.abs() + b.l21.abs() * &m1 + b.l22.abs() * &m2;
        let n2 = self.removed.len();
        let gain = (&b.l12 * part.factor.solve_mat(&DMatrix::identity(n2, n2))).abs();
        let projected = t1 + gain * t2;
        Ok(self.z_hat_f64.abs() * reduced.sup(&projected))
    }

    /// Solve the auxiliary system for `w2` with `w1 = m_kept(x)` and report
    /// the residuals of both block rows.
    pub fn auxiliary_consistency(&self, x: &[f64]) -> Result<AuxiliaryReport, ReductionError> {
        let x = self.pin(x);
        let part = self.partition(&x)?;
        let b = &part.blocks;
        let w1 = self.kept_monomials(&x);
        let rhs2 = &part.vb2 - &b.l21 * &w1;
        let w2 = part.factor.solve_vec(&rhs2);
        let y2 = &rhs2 - &b.l22 * &w2;
        let y1 = &part.vb1 - &b.l11 * &w1 - &b.l12 * &w2;
        let eval = self.schur(&x)?;
        let y1_reduced = &eval.p_vb - &eval.l_hat * &w1;
        let scale = [
            part.vb1.amax(),
            part.vb2.amax(),
            (b.l11.abs() * w1.abs()).amax(),
            (b.l12.abs() * w2.abs()).amax(),
            (b.l21.abs() * w1.abs()).amax(),
            (b.l22.abs() * w2.abs()).amax(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        Ok(AuxiliaryReport {
            residual_removed: y2.amax(),
            residual_kept: (y1 - y1_reduced).amax(),
            w2,
            scale,
        })
    }

    /// Directed edges of the reduced complex graph as `(tail, head)` pairs of
    /// parent complex indices: `tail -> head` whenever the full graph has a
    /// path between them whose interior vertices are all removed.
    pub fn reduced_edges(&self) -> Vec<(usize, usize)> {
        let c = self.model.num_complexes();
        let mut out_adj = vec![Vec::new(); c];
        for e in self.model.view().edges() {
            out_adj[e.tail].push(e.head);
        }
        let mut is_removed = vec![false; c];
        for &r in &self.removed {
            is_removed[r] = true;
        }
        let mut edges = Vec::new();
        for &s in &self.kept {
            let mut seen = vec![false; c];
            let mut queue = VecDeque::from([s]);
            seen[s] = true;
            let mut heads = Vec::new();
            while let Some(v) = queue.pop_front() {
                for &h in &out_adj[v] {
                    if seen[h] {
                        continue;
                    }
                    seen[h] = true;
                    if is_removed[h] {
                        queue.push_back(h);
                    } else {
                        heads.push(h);
                    }
                }
            }
            heads.sort_unstable();
            edges.extend(heads.into_iter().map(|h| (s, h)));
        }
        edges
    }

    /// Two-stage reduction: remove `further` from this reduction's kept set.
    /// The result is expressed over the parent model.
    pub fn extend(&self, further: &[usize]) -> Result<ReducedNetwork<'a>, ReductionError> {
        let mut all = self.removed.clone();
        for &f in further {
            if !self.kept.contains(&f) {
                return Err(if f >= self.model.num_complexes() {
                    ReductionError::ComplexOutOfRange(f)
                } else {
                    ReductionError::DuplicateRemoval(f)
                });
            }
            all.push(f);
        }
        plan_reduction(self.model, &all, &self.x_ref)
    }
}

/// Schur complement of a kept-order Laplacian `l_hat` (indexed by `kept`)
/// after additionally deleting `further`. Used to compose reductions.
pub fn kron_reduce_matrix(l_hat: &DMatrix<f64>, kept: &[usize], further: &[usize]) -> DMatrix<f64> {
    let keep_local: Vec<usize> = (0..kept.len()).filter(|&i| !further.contains(&kept[i])).collect();
    let drop_local: Vec<usize> = (0..kept.len()).filter(|&i| further.contains(&kept[i])).collect();
    let w = linalg::permute(l_hat, &keep_local, &drop_local);
    linalg::kron_reduce_gth(w, keep_local.len()).unwrap_or_else(|| {
        let blocks = linalg::split(&linalg::permute(l_hat, &keep_local, &drop_local), keep_local.len());
        let f = linalg::factor(&blocks.l22);
        linalg::kron_reduce_lu(&blocks, &f)
    })
}
