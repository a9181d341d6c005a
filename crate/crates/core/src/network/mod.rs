//! Reaction network model: species, complexes, reactions and boundary fluxes.
//!
//! A [`Network`] is always built through [`NetworkBuilder`], which enforces the
//! structural invariants (deduplicated complexes, no self-loops, positive rate
//! parameters, one boundary flux per complex). The DSL parser and the JSON
//! loader both go through the builder, so every `Network` in memory is valid.

mod dsl;
mod json;

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

pub use dsl::{parse_complex_ref, parse_network, parse_network_with, to_dsl, ParseError, ParseErrorKind, ParseOptions};
pub use json::{JsonError, NetworkRecord};

use crate::kinetics::{DenominatorSpec, LawKind, RateLaw};

/// Largest stoichiometric coefficient accepted in a complex.
pub const MAX_COEFFICIENT: u32 = 64;

/// Structural validation failures, independent of the input format.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("duplicate species declaration `{0}`")]
    DuplicateSpecies(String),
    #[error("species `{0}` is not declared (strict mode)")]
    UndeclaredSpecies(String),
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("unknown complex `{0}`")]
    UnknownComplex(String),
    #[error("invalid species name `{0}`")]
    InvalidName(String),
    #[error("parameter {name} must be positive, got {value}")]
    NonPositiveParameter { name: String, value: f64 },
    #[error("parameter {name} must be finite, got {value}")]
    NonFiniteParameter { name: String, value: f64 },
    #[error("reaction `{0}`: substrate equals product")]
    SelfLoop(String),
    #[error("duplicate reaction id `{0}`")]
    DuplicateReaction(String),
    #[error("stoichiometric coefficient {0} exceeds the limit of {MAX_COEFFICIENT}")]
    CoefficientTooLarge(u64),
    #[error("stoichiometric coefficient must be at least 1")]
    ZeroCoefficient,
    #[error("empty complex")]
    EmptyComplex,
    #[error("no reactions")]
    NoReactions,
    #[error("complex `{0}` already has a boundary flux")]
    DuplicateBoundary(String),
    #[error("Km({0}) given but `{0}` is on neither side of the reaction")]
    KmSpeciesNotInReaction(String),
    #[error("duplicate term for species `{0}` in a denominator group")]
    DuplicateGroupTerm(String),
    #[error("reversible reaction `{0}` needs kr")]
    MissingReverseConstant(String),
    #[error("irreversible reaction `{0}` must not set kr")]
    UnexpectedReverseConstant(String),
    #[error("complex index {0} out of range")]
    ComplexOutOfRange(usize),
    #[error("species index {0} out of range")]
    SpeciesOutOfRange(usize),
    #[error("complex {0} duplicates an earlier complex")]
    DuplicateComplex(usize),
    #[error("complex `{0}` is not used by any reaction or boundary flux")]
    OrphanComplex(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Species {
    pub name: String,
    pub index: usize,
}

/// A formal sum of species. `composition` is sorted by species index and
/// every coefficient is in `1..=MAX_COEFFICIENT`.
#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    pub index: usize,
    composition: Vec<(usize, u32)>,
}

impl Complex {
    pub fn composition(&self) -> &[(usize, u32)] {
        &self.composition
    }

    pub fn coefficient(&self, species: usize) -> u32 {
        self.composition
            .iter()
            .find(|(s, _)| *s == species)
            .map_or(0, |(_, c)| *c)
    }

    pub fn contains(&self, species: usize) -> bool {
        self.coefficient(species) > 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reaction {
    pub id: String,
    pub substrate: usize,
    pub product: usize,
    pub reversible: bool,
    pub law: RateLaw,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryForm {
    /// Fixed exchange flux (positive = inflow).
    Constant(f64),
    /// Flux `gain * x[species]`.
    Linear { species: usize, gain: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryFlux {
    pub complex: usize,
    pub form: BoundaryForm,
}

impl BoundaryFlux {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self.form {
            BoundaryForm::Constant(v) => v,
            BoundaryForm::Linear { species, gain } => gain * x[species],
        }
    }
}

/// A validated reaction network.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    species: Vec<Species>,
    complexes: Vec<Complex>,
    reactions: Vec<Reaction>,
    boundary: Vec<BoundaryFlux>,
}

impl Network {
    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn complexes(&self) -> &[Complex] {
        &self.complexes
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn boundary(&self) -> &[BoundaryFlux] {
        &self.boundary
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn num_complexes(&self) -> usize {
        self.complexes.len()
    }

    /// Number of directed edges once reversible reactions are expanded.
    pub fn num_edges(&self) -> usize {
        self.reactions
            .iter()
            .map(|r| if r.reversible { 2 } else { 1 })
            .sum()
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    pub fn species_name(&self, index: usize) -> &str {
        &self.species[index].name
    }

    pub fn complex_index(&self, composition: &[(usize, u32)]) -> Option<usize> {
        let canon = canonical_composition(composition.to_vec()).ok()?;
        self.complexes.iter().position(|c| c.composition == canon)
    }

    /// Canonical label used on the command line, e.g. `X1+2 X2`.
    pub fn complex_label(&self, index: usize) -> String {
        self.format_complex(index, "+")
    }

    pub(crate) fn format_complex(&self, index: usize, sep: &str) -> String {
        self.complexes[index]
            .composition
            .iter()
            .map(|&(s, c)| {
                let name = &self.species[s].name;
                if c == 1 {
                    name.clone()
                } else {
                    format!("{c} {name}")
                }
            })
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Boundary flux vector `v_b(x)`, one entry per complex.
    pub fn boundary_fluxes(&self, x: &[f64]) -> Vec<f64> {
        let mut vb = vec![0.0; self.complexes.len()];
        for b in &self.boundary {
            vb[b.complex] += b.eval(x);
        }
        vb
    }

    pub fn has_boundary(&self) -> bool {
        !self.boundary.is_empty()
    }

    /// Copy of this network with all boundary fluxes removed.
    pub fn without_boundary(&self) -> Network {
        Network {
            boundary: Vec::new(),
            ..self.clone()
        }
    }

    /// Build a full state vector from `(name, value)` pairs; every species
    /// must be assigned.
    pub fn state_from_pairs<'a, I>(&self, pairs: I) -> Result<Vec<f64>, NetworkError>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let mut x = vec![f64::NAN; self.species.len()];
        for (name, v) in pairs {
            let i = self
                .species_index(name)
                .ok_or_else(|| NetworkError::UnknownSpecies(name.to_string()))?;
            x[i] = v;
        }
        if let Some(i) = x.iter().position(|v| v.is_nan()) {
            return Err(NetworkError::UnknownSpecies(format!(
                "{} (missing value)",
                self.species[i].name
            )));
        }
        Ok(x)
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&to_dsl(self))
    }
}

fn canonical_composition(mut terms: Vec<(usize, u32)>) -> Result<Vec<(usize, u32)>, NetworkError> {
    if terms.is_empty() {
        return Err(NetworkError::EmptyComplex);
    }
    terms.sort_by_key(|t| t.0);
    let mut out: Vec<(usize, u32)> = Vec::with_capacity(terms.len());
    for (s, c) in terms {
        if c == 0 {
            return Err(NetworkError::ZeroCoefficient);
        }
        match out.last_mut() {
            Some(last) if last.0 == s => last.1 += c,
            _ => out.push((s, c)),
        }
    }
    if let Some(&(_, c)) = out.iter().find(|t| t.1 > MAX_COEFFICIENT) {
        return Err(NetworkError::CoefficientTooLarge(u64::from(c)));
    }
    Ok(out)
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn check_positive(name: &str, value: f64) -> Result<(), NetworkError> {
    if !value.is_finite() {
        return Err(NetworkError::NonFiniteParameter { name: name.into(), value });
    }
    if value <= 0.0 {
        return Err(NetworkError::NonPositiveParameter { name: name.into(), value });
    }
    Ok(())
}

/// Incremental, validating constructor for [`Network`].
#[derive(Debug, Default)]
pub struct NetworkBuilder {
    strict: bool,
    species: Vec<Species>,
    by_name: HashMap<String, usize>,
    declared: HashSet<usize>,
    complexes: Vec<Complex>,
    by_composition: HashMap<Vec<(usize, u32)>, usize>,
    reactions: Vec<Reaction>,
    reaction_ids: HashSet<String>,
    boundary: Vec<BoundaryFlux>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// In strict mode every species must be declared before it is used.
    pub fn strict(strict: bool) -> Self {
        Self { strict, ..Self::default() }
    }

    pub fn declare_species(&mut self, name: &str) -> Result<usize, NetworkError> {
        if !is_identifier(name) {
            return Err(NetworkError::InvalidName(name.into()));
        }
        let idx = self.intern(name);
        if !self.declared.insert(idx) {
            return Err(NetworkError::DuplicateSpecies(name.into()));
        }
        Ok(idx)
    }

    /// Resolve a species reference, creating it on first use unless strict.
    pub fn species(&mut self, name: &str) -> Result<usize, NetworkError> {
        match self.by_name.get(name) {
            Some(&i) if !self.strict || self.declared.contains(&i) => Ok(i),
            _ if self.strict => Err(NetworkError::UndeclaredSpecies(name.into())),
            _ if !is_identifier(name) => Err(NetworkError::InvalidName(name.into())),
            _ => Ok(self.intern(name)),
        }
    }

    fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.by_name.get(name) {
            return i;
        }
        let index = self.species.len();
        self.species.push(Species { name: name.into(), index });
        self.by_name.insert(name.into(), index);
        index
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    /// Existing species index, without creating or strict-checking.
    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    /// Intern a complex; identical compositions map to the same index.
    pub fn complex(&mut self, terms: Vec<(usize, u32)>) -> Result<usize, NetworkError> {
        if let Some(&(s, _)) = terms.iter().find(|t| t.0 >= self.species.len()) {
            return Err(NetworkError::SpeciesOutOfRange(s));
        }
        let canon = canonical_composition(terms)?;
        if let Some(&i) = self.by_composition.get(&canon) {
            return Ok(i);
        }
        let index = self.complexes.len();
        self.by_composition.insert(canon.clone(), index);
        self.complexes.push(Complex { index, composition: canon });
        Ok(index)
    }

    pub fn complex_composition(&self, index: usize) -> Option<&[(usize, u32)]> {
        self.complexes.get(index).map(|c| c.composition.as_slice())
    }

    pub fn reaction(
        &mut self,
        id: &str,
        substrate: usize,
        product: usize,
        reversible: bool,
        law: RateLaw,
    ) -> Result<usize, NetworkError> {
        for c in [substrate, product] {
            if c >= self.complexes.len() {
                return Err(NetworkError::ComplexOutOfRange(c));
            }
        }
        if substrate == product {
            return Err(NetworkError::SelfLoop(id.into()));
        }
        if !self.reaction_ids.insert(id.to_string()) {
            return Err(NetworkError::DuplicateReaction(id.into()));
        }
        check_positive(&format!("kf of `{id}`"), law.k_forward)?;
        if reversible {
            if law.k_reverse == 0.0 {
                return Err(NetworkError::MissingReverseConstant(id.into()));
            }
            check_positive(&format!("kr of `{id}`"), law.k_reverse)?;
        } else if law.k_reverse != 0.0 {
            return Err(NetworkError::UnexpectedReverseConstant(id.into()));
        }
        for group in law.denominator.groups() {
            let mut seen = HashSet::new();
            for &(s, coef) in group.terms() {
                if s >= self.species.len() {
                    return Err(NetworkError::SpeciesOutOfRange(s));
                }
                if !seen.insert(s) {
                    return Err(NetworkError::DuplicateGroupTerm(self.species[s].name.clone()));
                }
                if !coef.is_finite() || coef < 0.0 {
                    return Err(NetworkError::NonPositiveParameter {
                        name: format!("denominator coefficient of `{}`", self.species[s].name),
                        value: coef,
                    });
                }
            }
        }
        self.reactions.push(Reaction { id: id.into(), substrate, product, reversible, law });
        Ok(self.reactions.len() - 1)
    }

    pub fn boundary(&mut self, complex: usize, form: BoundaryForm) -> Result<(), NetworkError> {
        if complex >= self.complexes.len() {
            return Err(NetworkError::ComplexOutOfRange(complex));
        }
        let value = match form {
            BoundaryForm::Constant(v) => v,
            BoundaryForm::Linear { species, gain } => {
                if species >= self.species.len() {
                    return Err(NetworkError::SpeciesOutOfRange(species));
                }
                gain
            }
        };
        if !value.is_finite() {
            return Err(NetworkError::NonFiniteParameter { name: "boundary flux".into(), value });
        }
        if self.boundary.iter().any(|b| b.complex == complex) {
            return Err(NetworkError::DuplicateBoundary(self.label(complex)));
        }
        self.boundary.push(BoundaryFlux { complex, form });
        Ok(())
    }

    fn label(&self, complex: usize) -> String {
        self.complexes[complex]
            .composition
            .iter()
            .map(|&(s, c)| {
                if c == 1 {
                    self.species[s].name.clone()
                } else {
                    format!("{c} {}", self.species[s].name)
                }
            })
            .collect::<Vec<_>>()
            .join("+")
    }

    pub fn build(self) -> Result<Network, NetworkError> {
        if self.reactions.is_empty() {
            return Err(NetworkError::NoReactions);
        }
        let mut used = vec![false; self.complexes.len()];
        for r in &self.reactions {
            used[r.substrate] = true;
            used[r.product] = true;
        }
        for b in &self.boundary {
            used[b.complex] = true;
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(NetworkError::OrphanComplex(self.label(i)));
        }
        Ok(Network {
            species: self.species,
            complexes: self.complexes,
            reactions: self.reactions,
            boundary: self.boundary,
        })
    }
}

/// Convenience constructor for a mass-action law.
pub fn mass_action(kf: f64, kr: f64) -> RateLaw {
    RateLaw::new(LawKind::MassAction, kf, kr, DenominatorSpec::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complexes_are_deduplicated() {
        let mut b = NetworkBuilder::new();
        let x = b.species("X").unwrap();
        let y = b.species("Y").unwrap();
        let c1 = b.complex(vec![(x, 1), (y, 2)]).unwrap();
        let c2 = b.complex(vec![(y, 1), (x, 1), (y, 1)]).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn builder_rejects_bad_input() {
        let mut b = NetworkBuilder::new();
        let x = b.species("X").unwrap();
        assert_eq!(b.complex(vec![(x, 65)]), Err(NetworkError::CoefficientTooLarge(65)));
        assert_eq!(b.complex(vec![(x, 0)]), Err(NetworkError::ZeroCoefficient));
        assert_eq!(b.complex(vec![]), Err(NetworkError::EmptyComplex));
        let c = b.complex(vec![(x, 1)]).unwrap();
        assert!(matches!(
            b.reaction("r", c, c, false, mass_action(1.0, 0.0)),
            Err(NetworkError::SelfLoop(_))
        ));
        assert!(matches!(NetworkBuilder::new().build(), Err(NetworkError::NoReactions)));
    }

    #[test]
    fn strict_mode_requires_declaration() {
        let mut b = NetworkBuilder::strict(true);
        assert!(matches!(b.species("A"), Err(NetworkError::UndeclaredSpecies(_))));
        b.declare_species("A").unwrap();
        assert_eq!(b.species("A"), Ok(0));
        assert!(matches!(b.declare_species("A"), Err(NetworkError::DuplicateSpecies(_))));
    }
}
