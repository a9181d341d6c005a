//! Closed-form reduction of the two-step reversible Michaelis-Menten chain
//! `X1+X2 <-> X3+X4 <-> X5+X6` by deleting `X3+X4`.
//!
//! Eliminating the middle vertex gives the net flux
//! `(k1f k2f x1 x2 - k1r k2r x5 x6) / (k2f p1 + k1r p2)` with the common
//! `(1 + x3/K13 + x4/K14)` and `(1 + x3/K23 + x4/K24)` factors frozen.
//! The denominator is affine in `x1, x2, x5, x6`, so dividing by its constant
//! term leaves a single Michaelis-Menten law with six parameters.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    pub k1f: f64,
    pub k1r: f64,
    pub k2f: f64,
    pub k2r: f64,
    /// Michaelis constants of X1..X4 in the first reaction.
    pub km1: [f64; 4],
    /// Michaelis constants of X3..X6 in the second reaction.
    pub km2: [f64; 4],
}

/// `v = (k3f x1 x2 - k3r x5 x6) / (1 + x1/K31 + x2/K32 + x5/K35 + x6/K36)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedMmLaw {
    pub k3f: f64,
    pub k3r: f64,
    pub km31: f64,
    pub km32: f64,
    pub km35: f64,
    pub km36: f64,
}

impl ReducedMmLaw {
    pub const NUM_PARAMETERS: usize = 6;

    pub fn parameters(&self) -> [f64; Self::NUM_PARAMETERS] {
        [self.k3f, self.k3r, self.km31, self.km32, self.km35, self.km36]
    }

    /// Net forward rate at a six-species state; `x[2]`, `x[3]` are ignored.
    pub fn rate(&self, x: &[f64]) -> f64 {
        let num = self.k3f * x[0] * x[1] - self.k3r * x[4] * x[5];
        let den = 1.0 + x[0] / self.km31 + x[1] / self.km32 + x[4] / self.km35 + x[5] / self.km36;
        num / den
    }
}

impl ChainParams {
    pub const NUM_PARAMETERS: usize = 12;

    pub fn unit() -> Self {
        ChainParams { k1f: 1.0, k1r: 1.0, k2f: 1.0, k2r: 1.0, km1: [1.0; 4], km2: [1.0; 4] }
    }

    /// Net flux through the eliminated middle complex, unnormalized.
    pub fn eliminated_rate(&self, x: &[f64]) -> f64 {
        let p1 = (1.0 + x[0] / self.km1[0] + x[1] / self.km1[1]) * (1.0 + x[2] / self.km1[2] + x[3] / self.km1[3]);
        let p2 = (1.0 + x[2] / self.km2[0] + x[3] / self.km2[1]) * (1.0 + x[4] / self.km2[2] + x[5] / self.km2[3]);
        let num = self.k1f * self.k2f * x[0] * x[1] - self.k1r * self.k2r * x[4] * x[5];
        num / (self.k2f * p1 + self.k1r * p2)
    }
}

/// Reduced law with X3, X4 frozen at `x3`, `x4`.
pub fn chain_reduce_closed_form(p: &ChainParams, x3: f64, x4: f64) -> ReducedMmLaw {
    let a1 = 1.0 + x3 / p.km1[2] + x4 / p.km1[3];
    let a2 = 1.0 + x3 / p.km2[0] + x4 / p.km2[1];
    let left = p.k2f * a1;
    let right = p.k1r * a2;
    let d0 = left + right;
    ReducedMmLaw {
        k3f: p.k1f * p.k2f / d0,
        k3r: p.k1r * p.k2r / d0,
        km31: p.km1[0] * d0 / left,
        km32: p.km1[1] * d0 / left,
        km35: p.km2[2] * d0 / right,
        km36: p.km2[3] * d0 / right,
    }
}
