use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Status {
    /// `|rhs|` stayed below `10 atol` from `t_steady` to the end of the run.
    ConvergedToSteadyState { t_steady: f64 },
    ReachedHorizon,
    Failed { reason: String },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverStats {
    pub accepted: usize,
    pub rejected: usize,
    pub positivity_rejections: usize,
    pub rhs_evaluations: usize,
}

/// Accepted solver states with their derivatives for dense output.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub names: Vec<String>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Right-hand side at each state; used for Hermite interpolation.
    pub derivatives: Vec<Vec<f64>>,
    pub status: Status,
    pub stats: SolverStats,
    pub rtol: f64,
    pub atol: f64,
}

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

impl Trajectory {
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().expect("non-empty trajectory")
    }

    pub fn last_state(&self) -> &[f64] {
        self.states.last().expect("non-empty trajectory")
    }

    pub fn is_converged(&self) -> bool {
        matches!(self.status, Status::ConvergedToSteadyState { .. })
    }

    /// Cubic Hermite interpolation of every component at `t`, or `None`
    /// outside `[t_start, t_end]`.
    pub fn sample(&self, t: f64) -> Option<Vec<f64>> {
        let (t0, t1) = (self.t_start(), self.t_end());
        if !(t >= t0 && t <= t1) {
            return None;
        }
        let i = match self.times.partition_point(|&s| s <= t) {
            0 => 0,
            k if k >= self.times.len() => return Some(self.last_state().to_vec()),
            k => k - 1,
        };
        let (ta, tb) = (self.times[i], self.times[i + 1]);
        let h = tb - ta;
        let s = (t - ta) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let (ya, yb) = (&self.states[i], &self.states[i + 1]);
        let (da, db) = (&self.derivatives[i], &self.derivatives[i + 1]);
        Some(
            (0..self.dim())
                .map(|j| h00 * ya[j] + h10 * h * da[j] + h01 * yb[j] + h11 * h * db[j])
                .collect(),
        )
    }

    /// CSV with header `t,<names>` and 17 significant digits per value.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push('t');
        for n in &self.names {
            out.push(',');
            out.push_str(n);
        }
        out.push('\n');
        for (t, row) in self.times.iter().zip(&self.states) {
            write!(out, "{t:.16e}").unwrap();
            for v in row {
                write!(out, ",{v:.16e}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Parse a CSV written by [`Self::to_csv`]. Derivatives are rebuilt by
    /// finite differences over the grid.
    pub fn from_csv(text: &str) -> Result<Trajectory, CsvError> {
        let err = |line: usize, message: String| CsvError::Format { line, message };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
        let mut cols = header.split(',');
        if cols.next().map(str::trim) != Some("t") {
            return Err(err(1, "header must start with `t`".into()));
        }
        let names: Vec<String> = cols.map(|c| c.trim().to_string()).collect();
        let mut times = Vec::new();
        let mut states = Vec::new();
        for (i, line) in lines {
            let values = line
                .split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|e| err(i + 1, format!("`{v}`: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if values.len() != names.len() + 1 {
                return Err(err(i + 1, format!("expected {} fields, found {}", names.len() + 1, values.len())));
            }
            if let Some(&prev) = times.last() {
                if values[0] <= prev {
                    return Err(err(i + 1, "times must increase".into()));
                }
            }
            times.push(values[0]);
            states.push(values[1..].to_vec());
        }
        if times.is_empty() {
            return Err(err(2, "no data rows".into()));
        }
        let derivatives = finite_differences(&times, &states);
        Ok(Trajectory {
            names,
            times,
            states,
            derivatives,
            status: Status::ReachedHorizon,
            stats: SolverStats::default(),
            rtol: f64::NAN,
            atol: f64::NAN,
        })
    }
}

fn finite_differences(times: &[f64], states: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = times.len();
    let dim = states.first().map_or(0, Vec::len);
    if n < 2 {
        return vec![vec![0.0; dim]; n];
    }
    (0..n)
        .map(|i| {
            let (a, b) = if i == 0 { (0, 1) } else if i == n - 1 { (n - 2, n - 1) } else { (i - 1, i + 1) };
            let dt = times[b] - times[a];
            (0..dim).map(|j| (states[b][j] - states[a][j]) / dt).collect()
        })
        .collect()
}
