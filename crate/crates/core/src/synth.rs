//! Reference networks and seeded random network generators.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::kinetics::{AffineGroup, DenominatorSpec, LawKind, RateLaw};
use crate::network::{mass_action, BoundaryForm, Network, NetworkBuilder};
use crate::reduction::chain::ChainParams;

/// The five-edge mass-action network with species X1..X4.
pub const BRANCHED_DSL: &str = "\
reaction r1: X1 + 2 X2 <-> X3 ; massaction kf=1 kr=1
reaction r3: X3 -> 2 X1 + X2 ; massaction kf=1
reaction r4: 2 X1 + X2 -> X4 ; massaction kf=1
reaction r5: X3 -> X4 ; massaction kf=1
";

/// Two-step reversible Michaelis-Menten chain with every parameter equal to 1.
pub const MM_CHAIN_UNIT_DSL: &str = "\
reaction r1: X1 + X2 <-> X3 + X4 ; mm kf=1 kr=1 Km(X1)=1 Km(X2)=1 Km(X3)=1 Km(X4)=1
reaction r2: X3 + X4 <-> X5 + X6 ; mm kf=1 kr=1 Km(X3)=1 Km(X4)=1 Km(X5)=1 Km(X6)=1
";

fn mm_law(kf: f64, kr: f64, groups: Vec<Vec<(usize, f64)>>) -> RateLaw {
    let groups = groups.into_iter().map(AffineGroup::new).collect();
    RateLaw::new(LawKind::MichaelisMenten, kf, kr, DenominatorSpec::new(groups))
}

/// The chain `X1+X2 <-> X3+X4 <-> X5+X6` with the given parameters.
pub fn mm_chain(p: &ChainParams) -> Network {
    let mut b = NetworkBuilder::new();
    let x: Vec<usize> = (1..=6).map(|i| b.species(&format!("X{i}")).unwrap()).collect();
    let c1 = b.complex(vec![(x[0], 1), (x[1], 1)]).unwrap();
    let c2 = b.complex(vec![(x[2], 1), (x[3], 1)]).unwrap();
    let c3 = b.complex(vec![(x[4], 1), (x[5], 1)]).unwrap();
    let km1 = p.km1;
    let km2 = p.km2;
    let law1 = mm_law(
        p.k1f,
        p.k1r,
        vec![
            vec![(x[0], 1.0 / km1[0]), (x[1], 1.0 / km1[1])],
            vec![(x[2], 1.0 / km1[2]), (x[3], 1.0 / km1[3])],
        ],
    );
    let law2 = mm_law(
        p.k2f,
        p.k2r,
        vec![
            vec![(x[2], 1.0 / km2[0]), (x[3], 1.0 / km2[1])],
            vec![(x[4], 1.0 / km2[2]), (x[5], 1.0 / km2[3])],
        ],
    );
    b.reaction("r1", c1, c2, true, law1).unwrap();
    b.reaction("r2", c2, c3, true, law2).unwrap();
    b.build().unwrap()
}

/// Open chain `X1 <-> X2 <-> X3+X4 <-> X5 <-> X6` fed at X1 and drained at
/// X6. Both reactions touching `X3+X4` are `separation` times faster.
#[derive(Debug, Clone, PartialEq)]
pub struct FastChain {
    pub k: f64,
    pub separation: f64,
    pub influx: f64,
    pub efflux: f64,
    /// Michaelis constant shared by X1, X2, X5, X6.
    pub km: f64,
    /// Michaelis constant of X3 and X4.
    pub km_middle: f64,
}

impl Default for FastChain {
    fn default() -> Self {
        FastChain { k: 3.0, separation: 100.0, influx: 0.2, efflux: 1.0, km: 2.0, km_middle: 1000.0 }
    }
}

impl FastChain {
    /// Starting point for relaxing to the steady state; `X3` in excess of
    /// `X4` keeps the middle complex a small buffer.
    pub const INITIAL_GUESS: [f64; 6] = [0.2, 0.2, 2.0, 0.1, 0.2, 0.2];

    pub fn network(&self) -> Network {
        let mut b = NetworkBuilder::new();
        let x: Vec<usize> = (1..=6).map(|i| b.species(&format!("X{i}")).unwrap()).collect();
        let c1 = b.complex(vec![(x[0], 1)]).unwrap();
        let c2 = b.complex(vec![(x[1], 1)]).unwrap();
        let mid = b.complex(vec![(x[2], 1), (x[3], 1)]).unwrap();
        let c5 = b.complex(vec![(x[4], 1)]).unwrap();
        let c6 = b.complex(vec![(x[5], 1)]).unwrap();
        let (k, fast, km, kmm) = (self.k, self.k * self.separation, self.km, self.km_middle);
        let g = |s: usize, kk: f64| vec![(s, 1.0 / kk)];
        let mid_group = vec![(x[2], 1.0 / kmm), (x[3], 1.0 / kmm)];
        b.reaction("r1", c1, c2, true, mm_law(k, k, vec![g(x[0], km), g(x[1], km)])).unwrap();
        b.reaction("r2", c2, mid, true, mm_law(fast, fast, vec![g(x[1], km), mid_group.clone()]))
            .unwrap();
        b.reaction("r3", mid, c5, true, mm_law(fast, fast, vec![mid_group, g(x[4], km)])).unwrap();
        b.reaction("r4", c5, c6, true, mm_law(k, k, vec![g(x[4], km), g(x[5], km)])).unwrap();
        b.boundary(c1, BoundaryForm::Constant(self.influx)).unwrap();
        b.boundary(c6, BoundaryForm::Linear { species: x[5], gain: -self.efflux }).unwrap();
        b.build().unwrap()
    }
}

/// Options for [`random_network`].
#[derive(Debug, Clone)]
pub struct GenOptions {
    pub max_species: usize,
    pub max_complexes: usize,
    /// Probability that a reaction is reversible; 1.0 makes every reaction reversible.
    pub reversible: f64,
    /// Probability that a reaction uses a Michaelis-Menten law.
    pub mm: f64,
    /// Probability that a complex carries a boundary flux.
    pub boundary: f64,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions { max_species: 12, max_complexes: 10, reversible: 0.5, mm: 0.5, boundary: 0.0 }
    }
}

fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Random network whose linkage classes each hold at least two complexes.
/// With `reversible = 1.0` every class is strongly connected.
pub fn random_network<R: Rng + ?Sized>(rng: &mut R, opts: &GenOptions) -> Network {
    let m = rng.random_range(2..=opts.max_species.max(2));
    let c = rng.random_range(2..=opts.max_complexes.max(2));
    let mut b = NetworkBuilder::new();
    let names: Vec<String> = (1..=m).map(|i| format!("S{i}")).collect();

    // Distinct compositions over the species pool.
    let mut compositions: Vec<Vec<(usize, u32)>> = Vec::with_capacity(c);
    let mut tries = 0;
    while compositions.len() < c && tries < 1000 {
        tries += 1;
        let size = rng.random_range(1..=2.min(m));
        let mut picks: Vec<usize> = (0..m).collect();
        picks.shuffle(rng);
        let mut comp: Vec<(usize, u32)> = picks[..size].iter().map(|&s| (s, rng.random_range(1..=2))).collect();
        comp.sort();
        if !compositions.contains(&comp) {
            compositions.push(comp);
        }
    }
    let c = compositions.len();

    // Split complexes into linkage classes of size >= 2.
    let mut order: Vec<usize> = (0..c).collect();
    order.shuffle(rng);
    let max_classes = (c / 2).clamp(1, 3);
    let n_classes = rng.random_range(1..=max_classes);
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, &v) in order.iter().enumerate() {
        let slot = if i < 2 * n_classes { i / 2 } else { rng.random_range(0..n_classes) };
        classes[slot].push(v);
    }

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for class in &classes {
        for i in 1..class.len() {
            let j = rng.random_range(0..i);
            let (a, z) = if rng.random_bool(0.5) { (class[i], class[j]) } else { (class[j], class[i]) };
            edges.push((a, z));
        }
        let extra = rng.random_range(0..=class.len() / 2);
        for _ in 0..extra {
            let a = class[rng.random_range(0..class.len())];
            let z = class[rng.random_range(0..class.len())];
            if a != z {
                edges.push((a, z));
            }
        }
    }

    // Intern species and complexes in edge order so numbering follows first use.
    let mut complex_index = vec![usize::MAX; c];
    let mut intern = |b: &mut NetworkBuilder, v: usize| -> usize {
        if complex_index[v] == usize::MAX {
            let terms = compositions[v].iter().map(|&(s, k)| (b.species(&names[s]).unwrap(), k)).collect();
            complex_index[v] = b.complex(terms).unwrap();
        }
        complex_index[v]
    };
    for (i, &(a, z)) in edges.iter().enumerate() {
        let sa = intern(&mut b, a);
        let sz = intern(&mut b, z);
        let reversible = rng.random_bool(opts.reversible.clamp(0.0, 1.0));
        let kf = log_uniform(rng, 0.1, 10.0);
        let kr = if reversible { log_uniform(rng, 0.1, 10.0) } else { 0.0 };
        let law = if rng.random_bool(opts.mm.clamp(0.0, 1.0)) {
            let mut groups = Vec::new();
            for side in [sa, sz] {
                let comp = b.complex_composition(side).unwrap().to_vec();
                groups.push(comp.iter().map(|&(s, n)| (s, f64::from(n) / log_uniform(rng, 0.1, 10.0))).collect());
            }
            if rng.random_bool(0.3) {
                let s = rng.random_range(0..b.num_species());
                groups.push(vec![(s, log_uniform(rng, 0.1, 10.0))]);
            }
            mm_law(kf, kr, groups)
        } else {
            mass_action(kf, kr)
        };
        b.reaction(&format!("r{}", i + 1), sa, sz, reversible, law).unwrap();
    }

    for &ci in complex_index.iter().take(c) {
        if ci != usize::MAX && rng.random_bool(opts.boundary.clamp(0.0, 1.0)) {
            // Linear efflux only from single-species complexes, so the drained
            // species is the one the flux depends on and x stays nonnegative.
            let single = match b.complex_composition(ci) {
                Some(&[(s, 1)]) => Some(s),
                _ => None,
            };
            let form = match single {
                Some(species) if rng.random_bool(0.5) => {
                    BoundaryForm::Linear { species, gain: -log_uniform(rng, 0.01, 1.0) }
                }
                _ => BoundaryForm::Constant(log_uniform(rng, 0.01, 1.0)),
            };
            b.boundary(ci, form).unwrap();
        }
    }
    b.build().unwrap()
}

/// Random removal that keeps at least two complexes in every linkage class.
pub fn random_removal<R: Rng + ?Sized>(rng: &mut R, partition: &[Vec<usize>]) -> Vec<usize> {
    let mut removed = Vec::new();
    for class in partition {
        if class.len() <= 2 {
            continue;
        }
        let k = rng.random_range(0..=class.len() - 2);
        let mut members = class.clone();
        members.shuffle(rng);
        removed.extend_from_slice(&members[..k]);
    }
    removed.sort_unstable();
    removed
}

/// Random strictly positive state, log-uniform in `[lo, hi]`.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, m: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..m).map(|_| log_uniform(rng, lo, hi)).collect()
}
