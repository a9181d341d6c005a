//! Brute-force search over complexes to delete, scored by pulse response.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::plan_reduction;
use crate::model::Model;
use crate::sim::{compare, integrate, uniform_grid, ComparisonSpec, SimError, SolverConfig, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanBudget {
    /// Every subset up to this size is tried.
    pub exhaustive_max: usize,
    /// Greedy forward growth continues up to this size.
    pub max_size: usize,
}

impl Default for ScanBudget {
    fn default() -> Self {
        ScanBudget { exhaustive_max: 4, max_size: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ScanOutcome {
    Scored { score: f64, compared: Vec<usize> },
    Failed { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    /// Removed complexes, ascending.
    pub removed: Vec<usize>,
    pub outcome: ScanOutcome,
}

impl ScanEntry {
    pub fn score(&self) -> Option<f64> {
        match self.outcome {
            ScanOutcome::Scored { score, .. } => Some(score),
            ScanOutcome::Failed { .. } => None,
        }
    }
}

/// Inputs shared by every subset evaluation.
pub struct ScanSetup<'a> {
    pub model: &'a Model,
    /// Equilibrium before the pulse; also the reduction reference state.
    pub pre_state: &'a [f64],
    /// Pulsed initial state.
    pub x0: &'a [f64],
    pub config: &'a SolverConfig,
    pub observed: &'a [usize],
    pub grid_points: usize,
}

fn evaluate(setup: &ScanSetup<'_>, full: &Trajectory, removed: &[usize]) -> ScanEntry {
    let outcome = (|| {
        let reduced = plan_reduction(setup.model, removed, setup.pre_state).map_err(|e| e.to_string())?;
        let compared: Vec<usize> = setup.observed.iter().copied().filter(|&s| !reduced.is_constant(s)).collect();
        if compared.is_empty() {
            return Err("every observed species is frozen".to_string());
        }
        let tr = integrate(&reduced, &reduced.pin(setup.x0), setup.config).map_err(|e| e.to_string())?;
        let spec = ComparisonSpec {
            observed: compared.clone(),
            grid: uniform_grid(setup.config.t_end, setup.grid_points),
            atol: setup.config.atol,
        };
        let metrics = compare(full, &tr, &spec).map_err(|e| e.to_string())?;
        Ok(ScanOutcome::Scored { score: metrics.aggregate, compared })
    })();
    ScanEntry {
        removed: removed.to_vec(),
        outcome: outcome.unwrap_or_else(|reason| ScanOutcome::Failed { reason }),
    }
}

fn subsets(items: &[usize], max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[usize], start: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max {
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, i + 1, max, cur, out);
            cur.pop();
        }
    }
    rec(items, 0, max, &mut cur, &mut out);
    out
}

fn order(a: &ScanEntry, b: &ScanEntry) -> std::cmp::Ordering {
    match (a.score(), b.score()) {
        (Some(x), Some(y)) => x.total_cmp(&y).then_with(|| a.removed.cmp(&b.removed)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.removed.len().cmp(&b.removed.len()).then_with(|| a.removed.cmp(&b.removed)),
    }
}

/// Rank subsets of `candidates` by the aggregate error of the reduced pulse
/// response. The full model is integrated once. Subsets up to
/// `budget.exhaustive_max` are enumerated; larger ones grow greedily from the
/// best subset of the largest exhaustive size. Results are sorted by score,
/// then by subset, with failures last.
pub fn scan_candidates(
    setup: &ScanSetup<'_>,
    candidates: &[usize],
    budget: ScanBudget,
) -> Result<Vec<ScanEntry>, SimError> {
    let mut cands: Vec<usize> = candidates.to_vec();
    cands.sort_unstable();
    cands.dedup();
    if cands.is_empty() {
        return Ok(Vec::new());
    }
    let full = integrate(setup.model, setup.x0, setup.config)?;
    let exhaustive = budget.exhaustive_max.min(budget.max_size).min(cands.len());
    let mut entries: Vec<ScanEntry> =
        subsets(&cands, exhaustive).par_iter().map(|s| evaluate(setup, &full, s)).collect();

    let mut size = exhaustive;
    while size < budget.max_size.min(cands.len()) {
        let best = entries
            .iter()
            .filter(|e| e.removed.len() == size && e.score().is_some())
            .min_by(|a, b| order(a, b))
            .map(|e| e.removed.clone());
        let Some(base) = best else { break };
        let grown: Vec<Vec<usize>> = cands
            .iter()
            .filter(|c| !base.contains(c))
            .map(|&c| {
                let mut s = base.clone();
                s.push(c);
                s.sort_unstable();
                s
            })
            .collect();
        let next: Vec<ScanEntry> = grown.par_iter().map(|s| evaluate(setup, &full, s)).collect();
        entries.extend(next);
        size += 1;
    }
    entries.sort_by(order);
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_enumeration() {
        let s = subsets(&[1, 2, 3], 2);
        assert_eq!(s, vec![vec![1], vec![1, 2], vec![1, 3], vec![2], vec![2, 3], vec![3]]);
        assert_eq!(subsets(&[0, 1, 2, 3, 4], 4).len(), 5 + 10 + 10 + 5);
    }

    #[test]
    fn failures_sort_last() {
        let ok = ScanEntry { removed: vec![2], outcome: ScanOutcome::Scored { score: 0.5, compared: vec![] } };
        let bad = ScanEntry { removed: vec![1], outcome: ScanOutcome::Failed { reason: "x".into() } };
        let mut v = vec![bad.clone(), ok.clone()];
        v.sort_by(order);
        assert_eq!(v, vec![ok, bad]);
    }
}
