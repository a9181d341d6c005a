use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use kronred_core::reduction::{ReductionPlan, ScanBudget, ScanOutcome, ScanSetup};
use kronred_core::sim::{relax_to_steady_state, uniform_grid};
use kronred_core::synth::random_state;
use kronred_core::{
    compare, integrate, parse_complex_ref, parse_network, plan_reduction, pulse_experiment, scan_candidates,
    ComparisonSpec, Model, Network, ReducedNetwork, SolverConfig, StoichiometryView, Trajectory,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliError;
use crate::manifest::Manifest;

/// Tolerances used when relaxing the initial state before a pulse.
const EQUILIBRATE: SolverConfig = SolverConfig {
    rtol: 1e-10,
    atol: 1e-13,
    h_init: None,
    h_min: 1e-14,
    t_end: 1e4,
    max_steps: 1_000_000,
    stop_on_steady_state: true,
    stability_cap: true,
};

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })
}

/// Read a network in DSL form, or JSON when the extension is `.json`.
pub fn load_network(path: &Path) -> Result<Network, CliError> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        Network::from_json(&text).map_err(|source| CliError::Json { path: path.to_path_buf(), source })
    } else {
        parse_network(&text).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
    }
}

fn resolve_complexes(net: &Network, labels: &[String]) -> Result<Vec<usize>, CliError> {
    labels.iter().map(|l| Ok(parse_complex_ref(net, l)?)).collect()
}

fn resolve_species(net: &Network, names: &[String]) -> Result<Vec<usize>, CliError> {
    names
        .iter()
        .map(|n| {
            net.species_index(n.trim())
                .ok_or_else(|| CliError::input(format!("unknown species `{}`", n.trim())))
        })
        .collect()
}

/// `NAME=value` pairs from the command line.
pub fn parse_assignments(items: &[String]) -> Result<Vec<(String, f64)>, CliError> {
    items
        .iter()
        .map(|item| {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::input(format!("expected NAME=VALUE, got `{item}`")))?;
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| CliError::input(format!("`{}` is not a number", value.trim())))?;
            Ok((name.trim().to_string(), v))
        })
        .collect()
}

fn build_state<'a, I>(net: &Network, base: Vec<f64>, values: I) -> Result<Vec<f64>, CliError>
where
    I: IntoIterator<Item = (&'a String, f64)>,
{
    let mut x = base;
    for (name, v) in values {
        let i = net.species_index(name).ok_or_else(|| CliError::input(format!("unknown species `{name}`")))?;
        if !(v.is_finite() && v >= 0.0) {
            return Err(CliError::input(format!("initial value of {name} must be finite and nonnegative, got {v}")));
        }
        x[i] = v;
    }
    Ok(x)
}

pub fn info(path: &Path) -> Result<String, CliError> {
    let net = load_network(path)?;
    let view = StoichiometryView::new(&net);
    let (_, ell) = view.linkage_classes();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "m={} c={} r={} linkage_classes={}",
        net.num_species(),
        net.num_complexes(),
        net.num_edges(),
        ell
    );
    let _ = writeln!(out, "reactions={}", net.reactions().len());
    let _ = writeln!(out, "rank_S={}", view.rank_s());
    let _ = writeln!(out, "conservation_dim={}", net.num_species() - view.rank_s());
    let _ = writeln!(out, "complexes:");
    for c in 0..net.num_complexes() {
        let _ = writeln!(out, "  {c}: {}", net.complex_label(c));
    }
    Ok(out)
}

/// Reduced graph edges, with opposite pairs merged into `a<->b`.
fn edge_report(net: &Network, edges: &[(usize, usize)]) -> Vec<String> {
    let set: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
    let mut out = Vec::new();
    for &(t, h) in &set {
        let label = |i| net.complex_label(i);
        if set.contains(&(h, t)) {
            if t < h {
                out.push(format!("{}<->{}", label(t), label(h)));
            }
        } else {
            out.push(format!("{}->{}", label(t), label(h)));
        }
    }
    out
}

fn reduction_report(red: &ReducedNetwork<'_>) -> String {
    let net = red.model().network();
    let labels = |v: &[usize]| v.iter().map(|&c| net.complex_label(c)).collect::<Vec<_>>().join(", ");
    let frozen: Vec<String> = red
        .frozen_values()
        .iter()
        .map(|&(s, v)| format!("{}={v}", net.species_name(s)))
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, "kept: {}", labels(red.kept()));
    let _ = writeln!(out, "removed: {}", labels(red.removed()));
    let _ = writeln!(out, "constant species: {}", frozen.join(", "));
    let _ = writeln!(out, "condition estimate: {:.3e}", red.condition_at_reference());
    let _ = writeln!(out, "reduced edges: {}", edge_report(net, &red.reduced_edges()).join(", "));
    out
}

pub struct ReduceRequest {
    pub network: PathBuf,
    pub remove: Vec<String>,
    pub plan: Option<PathBuf>,
    pub init: Vec<(String, f64)>,
    pub out: PathBuf,
}

pub fn reduce(req: &ReduceRequest) -> Result<String, CliError> {
    let model = Model::new(load_network(&req.network)?);
    let net = model.network();
    let red = match &req.plan {
        Some(p) => {
            if !req.remove.is_empty() {
                return Err(CliError::input("give either --remove or --plan, not both"));
            }
            ReductionPlan::from_json(&read(p)?)?.apply(&model)?
        }
        None => {
            if req.remove.is_empty() {
                return Err(CliError::input("nothing to remove: pass --remove or --plan"));
            }
            let removed = resolve_complexes(net, &req.remove)?;
            let x_ref = build_state(net, vec![1.0; net.num_species()], req.init.iter().map(|(k, v)| (k, *v)))?;
            plan_reduction(&model, &removed, &x_ref)?
        }
    };
    let mut report = reduction_report(&red);
    create_dir(&req.out)?;
    let path = req.out.join("plan.json");
    write(&path, &(red.to_plan().to_json() + "\n"))?;
    let _ = writeln!(report, "plan: {}", path.display());
    Ok(report)
}

/// Manifest with command-line overrides applied, plus the loaded model.
pub struct Run {
    pub manifest: Manifest,
    pub model: Model,
}

#[derive(Default)]
pub struct Overrides {
    pub network: Option<PathBuf>,
    pub plan: Option<PathBuf>,
    pub remove: Vec<String>,
    pub out: Option<PathBuf>,
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    pub t_end: Option<f64>,
    pub seed: Option<u64>,
    pub observed: Vec<String>,
    pub init: Vec<(String, f64)>,
}

impl Run {
    pub fn new(manifest: Option<&Path>, o: Overrides) -> Result<Run, CliError> {
        let mut m = match manifest {
            Some(p) => Manifest::load(p)?,
            None => Manifest::default(),
        };
        if o.network.is_some() {
            m.network = o.network;
        }
        if o.plan.is_some() {
            m.plan = o.plan;
        }
        if !o.remove.is_empty() {
            m.remove = Some(o.remove);
        }
        if let Some(out) = o.out {
            m.out = out;
        }
        if let Some(v) = o.rtol {
            m.solver.rtol = v;
        }
        if let Some(v) = o.atol {
            m.solver.atol = v;
        }
        if let Some(v) = o.t_end {
            m.solver.t_end = v;
        }
        if let Some(v) = o.seed {
            m.seed = v;
        }
        if !o.observed.is_empty() {
            m.observed = Some(o.observed);
        }
        m.initial.extend(o.init);
        m.solver.validate()?;
        if m.grid_points < 2 {
            return Err(CliError::input("grid_points must be at least 2"));
        }
        let path = m.network.clone().ok_or_else(|| CliError::input("no network given (--network or manifest)"))?;
        let model = Model::new(load_network(&path)?);
        Ok(Run { manifest: m, model })
    }

    fn initial_state(&self) -> Result<Vec<f64>, CliError> {
        let net = self.model.network();
        let base = if self.manifest.randomize_initial {
            random_state(&mut ChaCha8Rng::seed_from_u64(self.manifest.seed), net.num_species(), 0.1, 10.0)
        } else {
            vec![1.0; net.num_species()]
        };
        build_state(net, base, self.manifest.initial.iter().map(|(k, v)| (k, *v)))
    }

    /// State before the pulse: the initial state, relaxed if requested.
    fn pre_state(&self) -> Result<Vec<f64>, CliError> {
        let x = self.initial_state()?;
        if !self.manifest.equilibrate {
            return Ok(x);
        }
        let cfg = SolverConfig { max_steps: self.manifest.solver.max_steps, ..EQUILIBRATE };
        Ok(relax_to_steady_state(&self.model, &x, &cfg)?)
    }

    fn pulsed(&self, pre: &[f64]) -> Result<Vec<f64>, CliError> {
        let net = self.model.network();
        let mut x = pre.to_vec();
        for (name, &factor) in &self.manifest.pulse {
            let i = net.species_index(name).ok_or_else(|| CliError::input(format!("unknown species `{name}`")))?;
            if !(factor.is_finite() && factor >= 0.0) {
                return Err(CliError::input(format!("pulse factor for {name} must be finite and nonnegative")));
            }
            x[i] *= factor;
        }
        Ok(x)
    }

    fn reduction(&self, pre: &[f64]) -> Result<Option<ReducedNetwork<'_>>, CliError> {
        match (&self.manifest.plan, &self.manifest.remove) {
            (Some(_), Some(_)) => Err(CliError::input("give either a plan or a removal list, not both")),
            (Some(p), None) => Ok(Some(ReductionPlan::from_json(&read(p)?)?.apply(&self.model)?)),
            (None, Some(labels)) => {
                let removed = resolve_complexes(self.model.network(), labels)?;
                Ok(Some(plan_reduction(&self.model, &removed, pre)?))
            }
            (None, None) => Ok(None),
        }
    }

    fn observed(&self) -> Result<Vec<usize>, CliError> {
        match &self.manifest.observed {
            Some(names) => resolve_species(self.model.network(), names),
            None => Ok((0..self.model.num_species()).collect()),
        }
    }

    fn out_dir(&self) -> Result<&Path, CliError> {
        create_dir(&self.manifest.out)?;
        Ok(&self.manifest.out)
    }
}

fn status_line(label: &str, tr: &Trajectory) -> String {
    format!(
        "{label}: {:?}, {} accepted / {} rejected steps, {} rhs evaluations\n",
        tr.status, tr.stats.accepted, tr.stats.rejected, tr.stats.rhs_evaluations
    )
}

pub fn simulate(run: &Run) -> Result<String, CliError> {
    let pre = run.pre_state()?;
    let x0 = run.pulsed(&pre)?;
    let cfg = &run.manifest.solver;
    let full = integrate(&run.model, &x0, cfg)?;
    let reduced = match run.reduction(&pre)? {
        Some(red) => Some(integrate(&red, &red.pin(&x0), cfg)?),
        None => None,
    };
    let dir = run.out_dir()?;
    let mut report = status_line("full", &full);
    write(&dir.join("trajectory.csv"), &full.to_csv())?;
    if let Some(tr) = &reduced {
        report += &status_line("reduced", tr);
        write(&dir.join("reduced_trajectory.csv"), &tr.to_csv())?;
    }
    let _ = writeln!(report, "output: {}", dir.display());
    Ok(report)
}

#[derive(Serialize)]
struct MetricsFile<'a> {
    removed: Vec<String>,
    compared: Vec<String>,
    frozen: Vec<String>,
    t_end: f64,
    grid_points: usize,
    aggregate: f64,
    species: &'a [kronred_core::sim::SpeciesMetrics],
}

/// Value at `t`, holding the last state of a trajectory that stopped early
/// at a steady state.
fn sample_or_hold(tr: &Trajectory, t: f64) -> Option<Vec<f64>> {
    tr.sample(t).or_else(|| (tr.is_converged() && t >= tr.t_end()).then(|| tr.last_state().to_vec()))
}

pub fn compare_cmd(run: &Run) -> Result<String, CliError> {
    let pre = run.pre_state()?;
    let x0 = run.pulsed(&pre)?;
    let red = match run.reduction(&pre)? {
        Some(r) => r,
        None => plan_reduction(&run.model, &[], &pre)?,
    };
    let cfg = &run.manifest.solver;
    let observed = run.observed()?;
    let grid_points = run.manifest.grid_points;
    let (full, reduced, metrics, compared) = if run.manifest.equilibrate {
        let overrides: Vec<(usize, f64)> = x0.iter().copied().enumerate().collect();
        let r = pulse_experiment(&run.model, &red, &pre, &overrides, cfg, &observed, grid_points)?;
        (r.full, r.reduced, r.metrics, r.compared)
    } else {
        let full = integrate(&run.model, &x0, cfg)?;
        let reduced = integrate(&red, &red.pin(&x0), cfg)?;
        let compared: Vec<usize> = observed.iter().copied().filter(|&s| !red.is_constant(s)).collect();
        if compared.is_empty() {
            return Err(CliError::input("every observed species is frozen by the reduction"));
        }
        let spec = ComparisonSpec {
            observed: compared.clone(),
            grid: uniform_grid(cfg.t_end, grid_points),
            atol: cfg.atol,
        };
        let metrics = compare(&full, &reduced, &spec)?;
        (full, reduced, metrics, compared)
    };

    let net = run.model.network();
    let names = |v: &[usize]| v.iter().map(|&s| net.species_name(s).to_string()).collect::<Vec<_>>();
    let frozen: Vec<usize> = observed.iter().copied().filter(|&s| red.is_constant(s)).collect();
    let file = MetricsFile {
        removed: red.removed().iter().map(|&c| net.complex_label(c)).collect(),
        compared: names(&compared),
        frozen: names(&frozen),
        t_end: cfg.t_end,
        grid_points,
        aggregate: metrics.aggregate,
        species: &metrics.species,
    };
    let grid = uniform_grid(cfg.t_end, grid_points);
    let mut plots = Vec::with_capacity(compared.len());
    for &s in &compared {
        let mut csv = String::from("t,full,reduced\n");
        for &t in &grid {
            let (a, b) = match (sample_or_hold(&full, t), sample_or_hold(&reduced, t)) {
                (Some(a), Some(b)) => (a[s], b[s]),
                _ => continue,
            };
            let _ = writeln!(csv, "{t:.16e},{a:.16e},{b:.16e}");
        }
        plots.push((format!("plot_{}.csv", net.species_name(s)), csv));
    }

    let dir = run.out_dir()?;
    write(&dir.join("metrics.json"), &(serde_json::to_string_pretty(&file).expect("metrics serialize") + "\n"))?;
    for (name, csv) in &plots {
        write(&dir.join(name), csv)?;
    }
    let mut report = status_line("full", &full) + &status_line("reduced", &reduced);
    for m in &metrics.species {
        let _ = writeln!(
            report,
            "{}: relative_l2={:.4e} max_abs={:.4e} final_deviation={:.4e}",
            m.species, m.relative_l2, m.max_abs, m.steady_state_deviation
        );
    }
    let _ = writeln!(report, "aggregate={:.6e}", metrics.aggregate);
    let _ = writeln!(report, "output: {}", dir.display());
    Ok(report)
}

#[derive(Serialize)]
struct ScanRecord {
    rank: usize,
    removed: Vec<String>,
    #[serde(flatten)]
    outcome: ScanOutcomeRecord,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ScanOutcomeRecord {
    Scored { score: f64, compared: Vec<String> },
    Failed { reason: String },
}

pub fn scan(run: &Run) -> Result<String, CliError> {
    let net = run.model.network();
    if run.manifest.candidates.is_empty() {
        return Err(CliError::input("scan needs a non-empty `candidates` list"));
    }
    let candidates = resolve_complexes(net, &run.manifest.candidates)?;
    let pre = run.pre_state()?;
    let x0 = run.pulsed(&pre)?;
    let observed = run.observed()?;
    let setup = ScanSetup {
        model: &run.model,
        pre_state: &pre,
        x0: &x0,
        config: &run.manifest.solver,
        observed: &observed,
        grid_points: run.manifest.grid_points,
    };
    let entries = scan_candidates(&setup, &candidates, ScanBudget::default())?;
    let records: Vec<ScanRecord> = entries
        .iter()
        .enumerate()
        .map(|(i, e)| ScanRecord {
            rank: i + 1,
            removed: e.removed.iter().map(|&c| net.complex_label(c)).collect(),
            outcome: match &e.outcome {
                ScanOutcome::Scored { score, compared } => ScanOutcomeRecord::Scored {
                    score: *score,
                    compared: compared.iter().map(|&s| net.species_name(s).to_string()).collect(),
                },
                ScanOutcome::Failed { reason } => ScanOutcomeRecord::Failed { reason: reason.clone() },
            },
        })
        .collect();
    let dir = run.out_dir()?;
    write(&dir.join("scan.json"), &(serde_json::to_string_pretty(&records).expect("scan serializes") + "\n"))?;
    let mut report = String::new();
    for r in &records {
        let what = match &r.outcome {
            ScanOutcomeRecord::Scored { score, .. } => format!("score={score:.6e}"),
            ScanOutcomeRecord::Failed { reason } => format!("failed: {reason}"),
        };
        let _ = writeln!(report, "{:>3}. [{}] {what}", r.rank, r.removed.join(", "));
    }
    let _ = writeln!(report, "output: {}", dir.display());
    Ok(report)
}
