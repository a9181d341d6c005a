//! JSON form of a reduction: enough to rebuild it exactly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{plan_reduction, ReducedNetwork, ReductionError};
use crate::model::Model;
use crate::network::{parse_complex_ref, NetworkError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionPlan {
    /// Kept complexes by canonical label.
    pub kept: Vec<String>,
    /// Removed complexes by canonical label.
    pub removed: Vec<String>,
    /// Frozen species and their pinned values.
    pub frozen: BTreeMap<String, f64>,
    /// State at which the plan was made.
    pub reference_state: BTreeMap<String, f64>,
    /// Condition estimate of the removed block at the reference state.
    #[serde(default)]
    pub condition_estimate: Option<f64>,
}

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("malformed plan JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("plan complex `{label}`: {source}")]
    Complex { label: String, source: NetworkError },
    #[error(transparent)]
    State(NetworkError),
    #[error("plan does not partition the complexes of this network")]
    Mismatch,
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

impl ReducedNetwork<'_> {
    pub fn to_plan(&self) -> ReductionPlan {
        let n = self.model().network();
        let names = |s: usize| n.species_name(s).to_string();
        ReductionPlan {
            kept: self.kept().iter().map(|&c| n.complex_label(c)).collect(),
            removed: self.removed().iter().map(|&c| n.complex_label(c)).collect(),
            frozen: self.frozen_values().iter().map(|&(s, v)| (names(s), v)).collect(),
            reference_state: self.reference_state().iter().enumerate().map(|(s, &v)| (names(s), v)).collect(),
            condition_estimate: Some(self.condition_at_reference()),
        }
    }
}

impl ReductionPlan {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, PlanError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Rebuild the reduction against `model`.
    pub fn apply<'a>(&self, model: &'a Model) -> Result<ReducedNetwork<'a>, PlanError> {
        let n = model.network();
        let resolve = |label: &String| {
            parse_complex_ref(n, label).map_err(|source| PlanError::Complex { label: label.clone(), source })
        };
        let removed = self.removed.iter().map(resolve).collect::<Result<Vec<_>, _>>()?;
        let mut kept = self.kept.iter().map(resolve).collect::<Result<Vec<_>, _>>()?;
        let x_ref = n
            .state_from_pairs(self.reference_state.iter().map(|(k, &v)| (k.as_str(), v)))
            .map_err(PlanError::State)?;
        let reduced = plan_reduction(model, &removed, &x_ref)?;
        kept.sort_unstable();
        if kept != reduced.kept() {
            return Err(PlanError::Mismatch);
        }
        Ok(reduced)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::parse_network;

    #[test]
    fn plan_round_trip() {
        let m = Model::new(parse_network(crate::synth::MM_CHAIN_UNIT_DSL).unwrap());
        let x = [0.1, 0.2, 0.30000000000000004, 4.0, 5.0, 6.0];
        let red = plan_reduction(&m, &[1], &x).unwrap();
        let plan = red.to_plan();
        assert_eq!(plan.removed, vec!["X3+X4".to_string()]);
        assert_eq!(plan.frozen.get("X3"), Some(&0.30000000000000004));
        let back = ReductionPlan::from_json(&plan.to_json()).unwrap();
        assert_eq!(back, plan);
        let again = back.apply(&m).unwrap();
        assert_eq!(again.frozen_values(), red.frozen_values());
        assert_eq!(again.reference_state(), red.reference_state());
    }
}
