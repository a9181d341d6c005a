//! TOML run manifest. Relative paths resolve against the manifest's directory.
//!
//! ```toml
//! network = "fast_chain.crn"
//! out = "out/fast_chain"
//! remove = ["X3+X4"]
//! observed = ["X1", "X2", "X5", "X6"]
//! candidates = ["X2", "X3+X4", "X5"]
//! equilibrate = true
//! grid_points = 400
//!
//! [solver]
//! rtol = 1e-6
//! t_end = 20.0
//!
//! [initial]
//! X1 = 0.2
//!
//! [pulse]
//! X1 = 2.0
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use kronred_core::SolverConfig;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub network: Option<PathBuf>,
    /// Reduction plan JSON; alternative to `remove`.
    pub plan: Option<PathBuf>,
    /// Complexes to delete, by composition.
    pub remove: Option<Vec<String>>,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub seed: u64,
    /// Draw unspecified initial values log-uniformly in [0.1, 10] from `seed`
    /// instead of setting them to 1.
    #[serde(default)]
    pub randomize_initial: bool,
    pub observed: Option<Vec<String>>,
    #[serde(default)]
    pub candidates: Vec<String>,
    /// Relax the initial state to a steady state before applying the pulse.
    #[serde(default)]
    pub equilibrate: bool,
    #[serde(default = "default_grid")]
    pub grid_points: usize,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub initial: BTreeMap<String, f64>,
    /// Multipliers applied at t = 0.
    #[serde(default)]
    pub pulse: BTreeMap<String, f64>,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

fn default_grid() -> usize {
    200
}

impl Default for Manifest {
    fn default() -> Self {
        Manifest {
            network: None,
            plan: None,
            remove: None,
            out: default_out(),
            seed: 0,
            randomize_initial: false,
            observed: None,
            candidates: Vec::new(),
            equilibrate: false,
            grid_points: default_grid(),
            solver: SolverConfig::default(),
            initial: BTreeMap::new(),
            pulse: BTreeMap::new(),
        }
    }
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Manifest, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        let mut m: Manifest =
            toml::from_str(&text).map_err(|source| CliError::Manifest { path: path.to_path_buf(), source })?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(p) = m.network.as_mut() {
            rebase(p);
        }
        if let Some(p) = m.plan.as_mut() {
            rebase(p);
        }
        rebase(&mut m.out);
        Ok(m)
    }
}
