//! Line-oriented network description language.
//!
//! ```text
//! # comment
//! species X1, X2, X3
//! reaction r1: X1 + 2 X2 <-> X3 ; massaction kf=1 kr=0.5
//! reaction r2: X3 -> X4 ; mm kf=2 Km(X3)=0.1 Km(X4)=1 group(I:0.25)
//! boundary X1 + 2 X2: constant 0.1
//! boundary X4: linear X4 -0.3
//! ```
//!
//! `Km(S)=K` adds the term `n_S/K` (with `n_S` the multiplicity of `S`) to the
//! substrate group when `S` is a substrate species, otherwise to the product
//! group. `group(S:c, ...)` appends an explicit affine group `1 + sum c x_S`.
//! Boundary lines are applied after all reactions, so complexes that only
//! carry a boundary flux are numbered after the reaction complexes.

use std::fmt::Write as _;

use thiserror::Error;

use super::{is_identifier, BoundaryForm, Network, NetworkBuilder, NetworkError, MAX_COEFFICIENT};
use crate::kinetics::{AffineGroup, DenominatorSpec, LawKind, RateLaw};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// Parse failure with a 1-based source position.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Require a `species` declaration for every species used.
    pub strict: bool,
}

pub fn parse_network(source: &str) -> Result<Network, ParseError> {
    parse_network_with(source, ParseOptions::default())
}

pub fn parse_network_with(source: &str, options: ParseOptions) -> Result<Network, ParseError> {
    let mut statements = Vec::new();
    for (i, raw) in source.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("");
        if text.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(i + 1, text);
        statements.push(cur.statement()?);
    }

    let mut builder = NetworkBuilder::strict(options.strict);
    let mut boundaries = Vec::new();
    for stmt in statements {
        match stmt {
            Stmt::Species { line, names } => {
                for (name, col) in names {
                    builder.declare_species(&name).map_err(|e| at(line, col, e))?;
                }
            }
            Stmt::Reaction(r) => add_reaction(&mut builder, r)?,
            Stmt::Boundary(b) => boundaries.push(b),
        }
    }
    for b in boundaries {
        let complex = intern_complex(&mut builder, b.line, &b.complex)?;
        let form = match b.form {
            BoundaryAst::Constant(v) => BoundaryForm::Constant(v),
            BoundaryAst::Linear { species, col, gain } => BoundaryForm::Linear {
                species: builder.species(&species).map_err(|e| at(b.line, col, e))?,
                gain,
            },
        };
        builder.boundary(complex, form).map_err(|e| at(b.line, b.col, e))?;
    }
    builder.build().map_err(|e| at(1, 1, e))
}

fn at(line: usize, column: usize, e: NetworkError) -> ParseError {
    ParseError { line, column, kind: ParseErrorKind::Network(e) }
}

fn intern_complex(builder: &mut NetworkBuilder, line: usize, ast: &ComplexAst) -> Result<usize, ParseError> {
    let mut terms = Vec::with_capacity(ast.terms.len());
    for t in &ast.terms {
        terms.push((builder.species(&t.name).map_err(|e| at(line, t.col, e))?, t.coeff));
    }
    builder.complex(terms).map_err(|e| at(line, ast.col, e))
}

fn add_reaction(builder: &mut NetworkBuilder, r: ReactionAst) -> Result<(), ParseError> {
    let line = r.line;
    let substrate = intern_complex(builder, line, &r.lhs)?;
    let product = intern_complex(builder, line, &r.rhs)?;

    let mut kf = None;
    let mut kr = None;
    let mut substrate_group = Vec::new();
    let mut product_group = Vec::new();
    let mut extra = Vec::new();
    let syntax = |col: usize, msg: String| ParseError { line, column: col, kind: ParseErrorKind::Syntax(msg) };

    for item in r.items {
        match item {
            LawItem::Kf(v, col) => {
                if kf.replace(v).is_some() {
                    return Err(syntax(col, "kf given twice".into()));
                }
            }
            LawItem::Kr(v, col) => {
                if kr.replace(v).is_some() {
                    return Err(syntax(col, "kr given twice".into()));
                }
            }
            LawItem::Km { species, col, value } => {
                if r.kind == LawKind::MassAction {
                    return Err(syntax(col, "massaction laws take no Km terms".into()));
                }
                let s = builder
                    .lookup(&species)
                    .ok_or_else(|| at(line, col, NetworkError::KmSpeciesNotInReaction(species.clone())))?;
                let lhs = builder.complex_composition(substrate).unwrap_or(&[]);
                let rhs = builder.complex_composition(product).unwrap_or(&[]);
                let (group, mult) = if let Some(&(_, n)) = lhs.iter().find(|t| t.0 == s) {
                    (&mut substrate_group, n)
                } else if let Some(&(_, n)) = rhs.iter().find(|t| t.0 == s) {
                    (&mut product_group, n)
                } else {
                    return Err(at(line, col, NetworkError::KmSpeciesNotInReaction(species)));
                };
                group.push((s, f64::from(mult) / value));
            }
            LawItem::Group { terms, col } => {
                if r.kind == LawKind::MassAction {
                    return Err(syntax(col, "massaction laws take no denominator groups".into()));
                }
                let mut g = Vec::with_capacity(terms.len());
                for (name, tcol, coef) in terms {
                    g.push((builder.species(&name).map_err(|e| at(line, tcol, e))?, coef));
                }
                extra.push(AffineGroup::new(g));
            }
        }
    }

    let kf = kf.ok_or_else(|| syntax(r.law_col, "missing kf".into()))?;
    let mut groups = vec![AffineGroup::new(substrate_group), AffineGroup::new(product_group)];
    groups.extend(extra);
    let law = RateLaw::new(r.kind, kf, kr.unwrap_or(0.0), DenominatorSpec::new(groups));
    builder
        .reaction(&r.id, substrate, product, r.reversible, law)
        .map_err(|e| {
            let col = match e {
                NetworkError::SelfLoop(_) => r.rhs.col,
                NetworkError::DuplicateReaction(_) => r.id_col,
                _ => r.law_col,
            };
            at(line, col, e)
        })?;
    Ok(())
}

/// Resolve a complex given by composition text (`"X1+2 X2"`, any term order).
pub fn parse_complex_ref(network: &Network, text: &str) -> Result<usize, NetworkError> {
    let mut cur = Cursor::new(1, text);
    let ast = cur
        .complex()
        .and_then(|c| cur.end().map(|_| c))
        .map_err(|e| NetworkError::UnknownComplex(format!("{text}: {}", e.kind)))?;
    let mut terms = Vec::with_capacity(ast.terms.len());
    for t in &ast.terms {
        let s = network
            .species_index(&t.name)
            .ok_or_else(|| NetworkError::UnknownSpecies(t.name.clone()))?;
        terms.push((s, t.coeff));
    }
    network
        .complex_index(&terms)
        .ok_or_else(|| NetworkError::UnknownComplex(text.trim().to_string()))
}

/// Serialize to canonical DSL text; `parse_network(to_dsl(n)) == n`.
pub fn to_dsl(network: &Network) -> String {
    let mut out = String::new();
    let names: Vec<&str> = network.species().iter().map(|s| s.name.as_str()).collect();
    let _ = writeln!(out, "species {}", names.join(", "));
    for r in network.reactions() {
        let arrow = if r.reversible { "<->" } else { "->" };
        let _ = write!(
            out,
            "reaction {}: {} {} {} ; ",
            r.id,
            network.format_complex(r.substrate, " + "),
            arrow,
            network.format_complex(r.product, " + ")
        );
        let kind = match r.law.kind {
            LawKind::MassAction => "massaction",
            LawKind::MichaelisMenten => "mm",
        };
        let _ = write!(out, "{kind} kf={:?}", r.law.k_forward);
        if r.reversible {
            let _ = write!(out, " kr={:?}", r.law.k_reverse);
        }
        for g in r.law.denominator.groups() {
            let terms: Vec<String> = g
                .terms()
                .iter()
                .map(|&(s, c)| format!("{}:{c:?}", network.species_name(s)))
                .collect();
            let _ = write!(out, " group({})", terms.join(", "));
        }
        out.push('\n');
    }
    for b in network.boundary() {
        let complex = network.format_complex(b.complex, " + ");
        let _ = match b.form {
            BoundaryForm::Constant(v) => writeln!(out, "boundary {complex}: constant {v:?}"),
            BoundaryForm::Linear { species, gain } => {
                writeln!(out, "boundary {complex}: linear {} {gain:?}", network.species_name(species))
            }
        };
    }
    out
}

// ---------------------------------------------------------------------------
// Syntax tree

struct Term {
    coeff: u32,
    name: String,
    col: usize,
}

struct ComplexAst {
    terms: Vec<Term>,
    col: usize,
}

enum LawItem {
    Kf(f64, usize),
    Kr(f64, usize),
    Km { species: String, col: usize, value: f64 },
    Group { terms: Vec<(String, usize, f64)>, col: usize },
}

struct ReactionAst {
    line: usize,
    id: String,
    id_col: usize,
    lhs: ComplexAst,
    rhs: ComplexAst,
    reversible: bool,
    kind: LawKind,
    law_col: usize,
    items: Vec<LawItem>,
}

enum BoundaryAst {
    Constant(f64),
    Linear { species: String, col: usize, gain: f64 },
}

struct BoundaryStmt {
    line: usize,
    col: usize,
    complex: ComplexAst,
    form: BoundaryAst,
}

enum Stmt {
    Species { line: usize, names: Vec<(String, usize)> },
    Reaction(ReactionAst),
    Boundary(BoundaryStmt),
}

// ---------------------------------------------------------------------------
// Scanner

struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        Self { line, text, pos: 0 }
    }

    fn col(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.col(), kind: ParseErrorKind::Syntax(msg.into()) }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    fn end(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let rest = self.rest();
        let n = rest.find(|c: char| !f(c)).unwrap_or(rest.len());
        self.pos += n;
        &rest[..n]
    }

    /// Identifier `[A-Za-z_][A-Za-z0-9_]*`; returns (name, column).
    fn ident(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        self.skip_ws();
        let col = self.col();
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return Err(self.error(format!("expected {what}"))),
        }
        let word = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
        debug_assert!(is_identifier(word));
        Ok((word.to_string(), col))
    }

    fn number(&mut self) -> Result<(f64, usize), ParseError> {
        self.skip_ws();
        let col = self.col();
        let start = self.pos;
        let tok = self.take_while(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'));
        match tok.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok((v, col)),
            _ => {
                self.pos = start;
                Err(self.error("expected a finite number"))
            }
        }
    }

    fn positive(&mut self, name: &str) -> Result<(f64, usize), ParseError> {
        let (v, col) = self.number()?;
        if v <= 0.0 {
            return Err(at(
                self.line,
                col,
                NetworkError::NonPositiveParameter { name: name.into(), value: v },
            ));
        }
        Ok((v, col))
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        let (keyword, _) = self.ident("`species`, `reaction` or `boundary`")?;
        match keyword.as_str() {
            "species" => self.species_stmt(),
            "reaction" => self.reaction_stmt().map(Stmt::Reaction),
            "boundary" => self.boundary_stmt().map(Stmt::Boundary),
            other => Err(ParseError {
                line: self.line,
                column: 1,
                kind: ParseErrorKind::Syntax(format!(
                    "unknown statement `{other}`; expected `species`, `reaction` or `boundary`"
                )),
            }),
        }
    }

    fn species_stmt(&mut self) -> Result<Stmt, ParseError> {
        let mut names = vec![self.ident("species name")?];
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                break;
            }
            self.eat(",");
            names.push(self.ident("species name")?);
        }
        Ok(Stmt::Species { line: self.line, names })
    }

    fn complex(&mut self) -> Result<ComplexAst, ParseError> {
        self.skip_ws();
        let col = self.col();
        let mut terms = Vec::new();
        loop {
            self.skip_ws();
            let coeff_col = self.col();
            let digits = self.take_while(|c| c.is_ascii_digit());
            let coeff = if digits.is_empty() {
                1
            } else {
                let n: u64 = digits.parse().map_err(|_| self.error("invalid coefficient"))?;
                if n == 0 {
                    return Err(at(self.line, coeff_col, NetworkError::ZeroCoefficient));
                }
                if n > u64::from(MAX_COEFFICIENT) {
                    return Err(at(self.line, coeff_col, NetworkError::CoefficientTooLarge(n)));
                }
                n as u32
            };
            let (name, name_col) = self.ident("species name")?;
            terms.push(Term { coeff, name, col: if digits.is_empty() { name_col } else { coeff_col } });
            if !self.eat("+") {
                break;
            }
        }
        Ok(ComplexAst { terms, col })
    }

    fn reaction_stmt(&mut self) -> Result<ReactionAst, ParseError> {
        self.skip_ws();
        let id_col = self.col();
        let id = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_').to_string();
        if id.is_empty() {
            return Err(self.error("expected reaction id"));
        }
        self.expect(":")?;
        let lhs = self.complex()?;
        let reversible = if self.eat("<->") {
            true
        } else if self.eat("->") {
            false
        } else {
            return Err(self.error("expected `->` or `<->`"));
        };
        let rhs = self.complex()?;
        self.expect(";")?;
        let (kind_name, law_col) = self.ident("rate law (`massaction` or `mm`)")?;
        let kind = match kind_name.as_str() {
            "massaction" => LawKind::MassAction,
            "mm" => LawKind::MichaelisMenten,
            other => {
                return Err(ParseError {
                    line: self.line,
                    column: law_col,
                    kind: ParseErrorKind::Syntax(format!("unknown rate law `{other}`")),
                })
            }
        };
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                break;
            }
            let (key, col) = self.ident("law parameter")?;
            let item = match key.as_str() {
                "kf" => {
                    self.expect("=")?;
                    LawItem::Kf(self.positive("kf")?.0, col)
                }
                "kr" => {
                    self.expect("=")?;
                    LawItem::Kr(self.positive("kr")?.0, col)
                }
                "Km" => {
                    self.expect("(")?;
                    let (species, _) = self.ident("species name")?;
                    self.expect(")")?;
                    self.expect("=")?;
                    let (value, _) = self.positive(&format!("Km({species})"))?;
                    LawItem::Km { species, col, value }
                }
                "group" => {
                    self.expect("(")?;
                    let mut terms = Vec::new();
                    if !self.eat(")") {
                        loop {
                            let (name, tcol) = self.ident("species name")?;
                            self.expect(":")?;
                            let (coef, ccol) = self.number()?;
                            if coef < 0.0 {
                                return Err(at(
                                    self.line,
                                    ccol,
                                    NetworkError::NonPositiveParameter {
                                        name: format!("group coefficient of `{name}`"),
                                        value: coef,
                                    },
                                ));
                            }
                            terms.push((name, tcol, coef));
                            if self.eat(")") {
                                break;
                            }
                            self.expect(",")?;
                        }
                    }
                    LawItem::Group { terms, col }
                }
                other => {
                    return Err(ParseError {
                        line: self.line,
                        column: col,
                        kind: ParseErrorKind::Syntax(format!("unknown law parameter `{other}`")),
                    })
                }
            };
            items.push(item);
        }
        Ok(ReactionAst { line: self.line, id, id_col, lhs, rhs, reversible, kind, law_col, items })
    }

    fn boundary_stmt(&mut self) -> Result<BoundaryStmt, ParseError> {
        self.skip_ws();
        let col = self.col();
        let complex = self.complex()?;
        self.expect(":")?;
        let (kind, _) = self.ident("`constant` or `linear`")?;
        let form = match kind.as_str() {
            "constant" => BoundaryAst::Constant(self.number()?.0),
            "linear" => {
                let (species, scol) = self.ident("species name")?;
                BoundaryAst::Linear { species, col: scol, gain: self.number()?.0 }
            }
            other => return Err(self.error(format!("unknown boundary form `{other}`"))),
        };
        self.end()?;
        Ok(BoundaryStmt { line: self.line, col, complex, form })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_reversible_reaction() {
        let n = parse_network("reaction r1: X1 + 2 X2 <-> X3 ; massaction kf=1 kr=1").unwrap();
        assert_eq!(n.num_species(), 3);
        assert_eq!(n.num_complexes(), 2);
        assert_eq!(n.reactions().len(), 1);
        assert!(n.reactions()[0].reversible);
        assert_eq!(n.num_edges(), 2);
    }

    #[test]
    fn branched_network_sizes() {
        let n = parse_network(crate::synth::BRANCHED_DSL).unwrap();
        assert_eq!((n.num_species(), n.num_complexes(), n.num_edges()), (4, 4, 5));
    }

    #[test]
    fn self_loop_is_rejected() {
        let err = parse_network("reaction r1: X1 -> X1 ; massaction kf=1").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Network(NetworkError::SelfLoop("r1".into())));
        assert_eq!((err.line, err.column), (1, 20));
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_network("# header\nreaction r1: A -> B ; massaction kf=0").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(matches!(err.kind, ParseErrorKind::Network(NetworkError::NonPositiveParameter { .. })));
        assert_eq!(err.column, 37);

        let err = parse_network("reaction r1: A => B ; massaction kf=1").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(err.column, 16);
        assert!(err.to_string().starts_with("line 1, column 16:"));
    }

    #[test]
    fn duplicate_species_and_strict_mode() {
        let err = parse_network("species A, B, A\nreaction r: A -> B ; massaction kf=1").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Network(NetworkError::DuplicateSpecies("A".into())));
        assert_eq!(err.column, 15);

        let src = "species A\nreaction r: A -> B ; massaction kf=1";
        assert!(parse_network(src).is_ok());
        let err = parse_network_with(src, ParseOptions { strict: true }).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Network(NetworkError::UndeclaredSpecies("B".into())));
        assert_eq!((err.line, err.column), (2, 18));
    }

    #[test]
    fn reversible_law_needs_kr() {
        let err = parse_network("reaction r: A <-> B ; massaction kf=1").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Network(NetworkError::MissingReverseConstant(_))));
        let err = parse_network("reaction r: A -> B ; massaction kf=1 kr=2").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Network(NetworkError::UnexpectedReverseConstant(_))));
    }

    #[test]
    fn empty_input_has_no_reactions() {
        let err = parse_network("# nothing\nspecies A\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Network(NetworkError::NoReactions));
    }

    #[test]
    fn coefficient_limits() {
        let err = parse_network("reaction r: 65 A -> B ; massaction kf=1").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Network(NetworkError::CoefficientTooLarge(65)));
        assert!(parse_network("reaction r: 64 A -> B ; massaction kf=1").is_ok());
        assert!(parse_network("reaction r: 2A -> B ; massaction kf=1").is_ok());
    }

    #[test]
    fn km_terms_use_multiplicity() {
        let n = parse_network("reaction r: X1 + 3 X2 -> X3 ; mm kf=1 Km(X2)=2 Km(X3)=4 Km(X1)=0.5").unwrap();
        let groups = n.reactions()[0].law.denominator.groups();
        assert_eq!(groups.len(), 2);
        assert_eq!(groups[0].terms(), &[(1, 1.5), (0, 2.0)]);
        assert_eq!(groups[1].terms(), &[(2, 0.25)]);
        let err = parse_network("reaction r: A -> B ; mm kf=1 Km(C)=1").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Network(NetworkError::KmSpeciesNotInReaction(_))));
    }

    #[test]
    fn explicit_groups_may_name_effectors() {
        let n = parse_network("reaction r: A -> B ; mm kf=1 group(I:0.5, A:1)").unwrap();
        assert_eq!(n.species_index("I"), Some(2));
        assert_eq!(n.reactions()[0].law.denominator.groups()[0].terms(), &[(2, 0.5), (0, 1.0)]);
    }

    #[test]
    fn boundary_only_complex_comes_last() {
        let src = "boundary C: constant 1\nreaction r: A -> B ; massaction kf=1";
        let n = parse_network(src).unwrap();
        assert_eq!(n.complex_label(2), "C");
        assert_eq!(n.boundary()[0].complex, 2);
        let err = parse_network("reaction r: A -> B ; massaction kf=1\nboundary A: constant 1\nboundary A: linear A -1")
            .unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Network(NetworkError::DuplicateBoundary(_))));
        assert_eq!(err.line, 3);
    }

    #[test]
    fn complex_references() {
        let n = parse_network(crate::synth::BRANCHED_DSL).unwrap();
        assert_eq!(parse_complex_ref(&n, "X1+2 X2"), Ok(0));
        assert_eq!(parse_complex_ref(&n, "2 X2 + X1"), Ok(0));
        assert_eq!(parse_complex_ref(&n, "X2+2X1"), Ok(2));
        assert_eq!(n.complex_label(2), "2 X1+X2");
        assert!(matches!(parse_complex_ref(&n, "X1"), Err(NetworkError::UnknownComplex(_))));
        assert!(matches!(parse_complex_ref(&n, "Q"), Err(NetworkError::UnknownSpecies(_))));
    }

    #[test]
    fn canonical_text_round_trips() {
        let src = "reaction r1: X1 + 2 X2 <-> X3 ; mm kf=0.1 kr=3e-7 Km(X1)=0.3 Km(X3)=7\n\
                   reaction r2: X3 -> X4 ; massaction kf=2\n\
                   boundary X4: linear X4 -0.25\nboundary X1 + 2 X2: constant 1.5";
        let n = parse_network(src).unwrap();
        let text = to_dsl(&n);
        assert_eq!(parse_network(&text).unwrap(), n);
        assert_eq!(parse_network_with(&text, ParseOptions { strict: true }).unwrap(), n);
    }
}
