//! JSON mirror of [`Network`].

use serde::{Deserialize, Serialize};

use super::{BoundaryForm, Network, NetworkBuilder, NetworkError};
use crate::kinetics::{AffineGroup, DenominatorSpec, LawKind, RateLaw};

/// Serializable form of a network. Species are referenced by name,
/// complexes by index into `complexes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkRecord {
    pub species: Vec<String>,
    /// Each complex as `[species, coefficient]` pairs.
    pub complexes: Vec<Vec<(String, u32)>>,
    pub reactions: Vec<ReactionRecord>,
    #[serde(default)]
    pub boundary: Vec<BoundaryRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReactionRecord {
    pub id: String,
    pub substrate: usize,
    pub product: usize,
    pub reversible: bool,
    pub law: LawRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawRecord {
    pub kind: LawKindRecord,
    pub k_forward: f64,
    #[serde(default)]
    pub k_reverse: f64,
    /// Affine groups as `[species, coefficient]` term lists.
    #[serde(default)]
    pub denominator: Vec<Vec<(String, f64)>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LawKindRecord {
    Massaction,
    Mm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRecord {
    pub complex: usize,
    pub form: BoundaryFormRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryFormRecord {
    Constant(f64),
    Linear { species: String, gain: f64 },
}

impl From<&Network> for NetworkRecord {
    fn from(n: &Network) -> Self {
        let name = |s: usize| n.species_name(s).to_string();
        NetworkRecord {
            species: n.species().iter().map(|s| s.name.clone()).collect(),
            complexes: n
                .complexes()
                .iter()
                .map(|c| c.composition().iter().map(|&(s, k)| (name(s), k)).collect())
                .collect(),
            reactions: n
                .reactions()
                .iter()
                .map(|r| ReactionRecord {
                    id: r.id.clone(),
                    substrate: r.substrate,
                    product: r.product,
                    reversible: r.reversible,
                    law: LawRecord {
                        kind: match r.law.kind {
                            LawKind::MassAction => LawKindRecord::Massaction,
                            LawKind::MichaelisMenten => LawKindRecord::Mm,
                        },
                        k_forward: r.law.k_forward,
                        k_reverse: r.law.k_reverse,
                        denominator: r
                            .law
                            .denominator
                            .groups()
                            .iter()
                            .map(|g| g.terms().iter().map(|&(s, c)| (name(s), c)).collect())
                            .collect(),
                    },
                })
                .collect(),
            boundary: n
                .boundary()
                .iter()
                .map(|b| BoundaryRecord {
                    complex: b.complex,
                    form: match b.form {
                        BoundaryForm::Constant(v) => BoundaryFormRecord::Constant(v),
                        BoundaryForm::Linear { species, gain } => {
                            BoundaryFormRecord::Linear { species: name(species), gain }
                        }
                    },
                })
                .collect(),
        }
    }
}

impl TryFrom<NetworkRecord> for Network {
    type Error = NetworkError;

    fn try_from(rec: NetworkRecord) -> Result<Self, Self::Error> {
        let mut b = NetworkBuilder::strict(true);
        for s in &rec.species {
            b.declare_species(s)?;
        }
        for (i, terms) in rec.complexes.iter().enumerate() {
            let mut resolved = Vec::with_capacity(terms.len());
            for (s, k) in terms {
                resolved.push((b.species(s)?, *k));
            }
            let idx = b.complex(resolved)?;
            if idx != i {
                return Err(NetworkError::DuplicateComplex(i));
            }
        }
        for r in rec.reactions {
            let mut groups = Vec::with_capacity(r.law.denominator.len());
            for g in &r.law.denominator {
                let mut terms = Vec::with_capacity(g.len());
                for (s, c) in g {
                    terms.push((b.species(s)?, *c));
                }
                groups.push(AffineGroup::new(terms));
            }
            let kind = match r.law.kind {
                LawKindRecord::Massaction => LawKind::MassAction,
                LawKindRecord::Mm => LawKind::MichaelisMenten,
            };
            let law = RateLaw::new(kind, r.law.k_forward, r.law.k_reverse, DenominatorSpec::new(groups));
            b.reaction(&r.id, r.substrate, r.product, r.reversible, law)?;
        }
        for bd in rec.boundary {
            let form = match bd.form {
                BoundaryFormRecord::Constant(v) => BoundaryForm::Constant(v),
                BoundaryFormRecord::Linear { species, gain } => {
                    BoundaryForm::Linear { species: b.species(&species)?, gain }
                }
            };
            b.boundary(bd.complex, form)?;
        }
        b.build()
    }
}

impl Network {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&NetworkRecord::from(self)).expect("network record serializes")
    }

    pub fn from_json(text: &str) -> Result<Network, JsonError> {
        let rec: NetworkRecord = serde_json::from_str(text)?;
        Ok(Network::try_from(rec)?)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed network JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::parse_network;

    #[test]
    fn json_round_trip() {
        let n = parse_network(crate::synth::MM_CHAIN_UNIT_DSL).unwrap();
        let back = Network::from_json(&n.to_json()).unwrap();
        assert_eq!(back, n);
    }

    #[test]
    fn json_field_names() {
        let n = parse_network("reaction r: A -> B ; massaction kf=1\nboundary A: constant 2").unwrap();
        let v: serde_json::Value = serde_json::from_str(&n.to_json()).unwrap();
        for key in ["species", "complexes", "reactions", "boundary"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["boundary"][0]["form"]["constant"], 2.0);
    }

    #[test]
    fn json_is_validated() {
        let n = parse_network("reaction r: A -> B ; massaction kf=1").unwrap();
        let mut rec = NetworkRecord::from(&n);
        rec.reactions[0].product = 0;
        assert!(matches!(Network::try_from(rec), Err(NetworkError::SelfLoop(_))));
    }
}
