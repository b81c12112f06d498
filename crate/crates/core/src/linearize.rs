//! Linear representations `f(x,y) = φ(x) + ψ(y) + c` over abelian groups.
//!
//! The group is recovered from a quasigroup `q` and a base point `e` as the
//! principal loop isotope `x + y = q(R⁻¹x, L⁻¹y)` with `R = q(·,e)`,
//! `L = q(e,·)`. Over that group, with `0` its identity, a linear operation
//! satisfies `q(x,0) = φ(x) + c` and `q(0,y) = ψ(y) + c`, so `φ`, `ψ` and `c`
//! come out of the holomorphism decompositions of the two translations.
//! Every representation is checked by full reconstruction before it is
//! returned.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{as_abelian_group, AbelianGroup, Automorphism, GroupError};
use crate::equations::{
    satisfies, BalancedEquation, CatalogEntry, CatalogKind, Classification, Counterexample, EquationError, Term,
};
use crate::exec::Exec;
use crate::tables::{Element, Mapping, Property, QuasigroupTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Phi,
    Psi,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearizeError {
    #[error("no abelian group at this base point: {0}")]
    NotAbelianGroup(GroupError),
    #[error("{part:?} part of operation {operation} is not affine: {source}")]
    NotAutomorphism {
        part: Part,
        operation: String,
        source: GroupError,
    },
    #[error("reconstruction of operation {operation} differs at ({x}, {y})")]
    Reconstruction { operation: String, x: Element, y: Element },
    #[error("base element {element} out of range for order {order}")]
    BadBaseElement { element: Element, order: usize },
    #[error("order mismatch: expected {expected}, found {found}")]
    OrderMismatch { expected: usize, found: usize },
    #[error("pair-catalog entry {0} needs a second table")]
    MissingSecondTable(String),
    #[error("equation {0} has more than two operation symbols")]
    TooManyOperations(String),
    #[error(transparent)]
    Equation(#[from] EquationError),
}

/// `f(x,y) = φ(x) + ψ(y) + c` over `group`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRep {
    pub group: AbelianGroup,
    pub phi: Automorphism,
    pub psi: Automorphism,
    pub c: Element,
}

impl LinearRep {
    #[inline]
    pub fn apply(&self, x: Element, y: Element) -> Element {
        let g = &self.group;
        g.add(g.add(self.phi.apply(x), self.psi.apply(y)), self.c)
    }

    /// Builds the operation table `φ(x) + ψ(y) + c`.
    pub fn to_table(&self) -> QuasigroupTable {
        QuasigroupTable::from_fn(self.group.order(), |x, y| self.apply(x, y))
            .expect("affine operations with automorphic parts are quasigroups")
    }

    pub fn summary(&self) -> RepSummary {
        RepSummary {
            phi: self.phi.mapping().images().to_vec(),
            psi: self.psi.mapping().images().to_vec(),
            c: self.c,
        }
    }
}

/// Representations of `f` and `g` over one shared group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairLinearRep {
    pub group: AbelianGroup,
    pub rep_f: LinearRep,
    pub rep_g: LinearRep,
}

impl PairLinearRep {
    pub fn slot(&self, s: Slot) -> &Automorphism {
        match s {
            Slot::Phi1 => &self.rep_f.phi,
            Slot::Psi1 => &self.rep_f.psi,
            Slot::Phi2 => &self.rep_g.phi,
            Slot::Psi2 => &self.rep_g.psi,
        }
    }
}

/// Image arrays of a representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepSummary {
    pub phi: Vec<Element>,
    pub psi: Vec<Element>,
    pub c: Element,
}

/// Group description plus one summary per operation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationReport {
    pub canonical: Vec<usize>,
    pub identity: Element,
    pub group_table: Vec<Vec<Element>>,
    pub operations: Vec<RepSummary>,
}

impl RepresentationReport {
    pub fn new(group: &AbelianGroup, reps: &[&LinearRep]) -> Self {
        RepresentationReport {
            canonical: group.canonical_form().to_vec(),
            identity: group.identity(),
            group_table: group.table().rows(),
            operations: reps.iter().map(|r| r.summary()).collect(),
        }
    }
}

/// The principal loop isotope of `q` at `e`, if it is an abelian group.
pub fn derive_group(q: &QuasigroupTable, e: Element) -> Result<AbelianGroup, LinearizeError> {
    if e >= q.order() {
        return Err(LinearizeError::BadBaseElement {
            element: e,
            order: q.order(),
        });
    }
    as_abelian_group(&q.principal_isotope(e)).map_err(LinearizeError::NotAbelianGroup)
}

/// Linear representation of `q` over a given group.
pub fn linearize_over(group: &AbelianGroup, q: &QuasigroupTable, name: &str) -> Result<LinearRep, LinearizeError> {
    if q.order() != group.order() {
        return Err(LinearizeError::OrderMismatch {
            expected: group.order(),
            found: q.order(),
        });
    }
    let zero = group.identity();
    let decompose = |m: Mapping, part| {
        group
            .decompose_holomorphism(&m)
            .map_err(|source| LinearizeError::NotAutomorphism {
                part,
                operation: name.to_string(),
                source,
            })
    };
    let right = decompose(q.right_translation(zero), Part::Phi)?;
    let left = decompose(q.left_translation(zero), Part::Psi)?;
    debug_assert_eq!(right.k, left.k);
    let rep = LinearRep {
        group: group.clone(),
        phi: right.phi,
        psi: left.phi,
        c: q.get(zero, zero),
    };
    let n = q.order();
    for x in 0..n {
        for y in 0..n {
            if rep.apply(x, y) != q.get(x, y) {
                return Err(LinearizeError::Reconstruction {
                    operation: name.to_string(),
                    x,
                    y,
                });
            }
        }
    }
    Ok(rep)
}

pub fn linearize_single(q: &QuasigroupTable, e: Element) -> Result<LinearRep, LinearizeError> {
    let group = derive_group(q, e)?;
    linearize_over(&group, q, "f")
}

/// Linearizes `f` and `g` over the group derived from `f` at `e`.
pub fn linearize_pair(f: &QuasigroupTable, g: &QuasigroupTable, e: Element) -> Result<PairLinearRep, LinearizeError> {
    if f.order() != g.order() {
        return Err(LinearizeError::OrderMismatch {
            expected: f.order(),
            found: g.order(),
        });
    }
    let group = derive_group(f, e)?;
    let rep_f = linearize_over(&group, f, "f")?;
    let rep_g = linearize_over(&group, g, "g")?;
    Ok(PairLinearRep { group, rep_f, rep_g })
}

/// Linearizes every operation of a family over the group derived from the
/// first one.
pub fn linearize_family(ops: &[QuasigroupTable], e: Element) -> Result<(AbelianGroup, Vec<LinearRep>), LinearizeError> {
    let first = ops
        .first()
        .ok_or(LinearizeError::OrderMismatch { expected: 1, found: 0 })?;
    let group = derive_group(first, e)?;
    let reps = ops
        .iter()
        .enumerate()
        .map(|(i, q)| linearize_over(&group, q, &format!("f{}", i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((group, reps))
}

/// One of the four automorphisms `φ₁, ψ₁, φ₂, ψ₂` of a pair representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Slot {
    Phi1,
    Psi1,
    Phi2,
    Psi2,
}

impl Slot {
    fn symbol(self) -> &'static str {
        match self {
            Slot::Phi1 => "φ1",
            Slot::Psi1 => "ψ1",
            Slot::Phi2 => "φ2",
            Slot::Psi2 => "ψ2",
        }
    }
}

/// How a juxtaposed word `AB` of mappings is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// `(AB)x = A(B(x))`.
    RightToLeft,
    /// `(AB)x = B(A(x))`.
    LeftToRight,
}

impl Convention {
    pub const BOTH: [Convention; 2] = [Convention::RightToLeft, Convention::LeftToRight];

    /// The word as a list applied outermost-first.
    fn outer_first(self, word: [Slot; 2]) -> [Slot; 2] {
        match self {
            Convention::RightToLeft => word,
            Convention::LeftToRight => [word[1], word[0]],
        }
    }
}

/// `AB = CD` for slots `A, B, C, D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Relation {
    pub lhs: [Slot; 2],
    pub rhs: [Slot; 2],
}

impl Relation {
    fn key(self) -> ([Slot; 2], [Slot; 2]) {
        if self.lhs <= self.rhs {
            (self.lhs, self.rhs)
        } else {
            (self.rhs, self.lhs)
        }
    }

    fn reversed_words(self) -> Relation {
        Relation {
            lhs: [self.lhs[1], self.lhs[0]],
            rhs: [self.rhs[1], self.rhs[0]],
        }
    }

    fn holds(self, pair: &PairLinearRep, conv: Convention) -> bool {
        let [a, b] = conv.outer_first(self.lhs);
        let [c, d] = conv.outer_first(self.rhs);
        let (a, b, c, d) = (pair.slot(a), pair.slot(b), pair.slot(c), pair.slot(d));
        (0..pair.group.order()).all(|x| a.apply(b.apply(x)) == c.apply(d.apply(x)))
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}={}{}",
            self.lhs[0].symbol(),
            self.lhs[1].symbol(),
            self.rhs[0].symbol(),
            self.rhs[1].symbol()
        )
    }
}

/// Four commutation relations between `φ₁, ψ₁, φ₂, ψ₂`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelationSet {
    relations: [Relation; 4],
}

impl RelationSet {
    pub fn new(relations: [Relation; 4]) -> Self {
        RelationSet { relations }
    }

    pub fn relations(&self) -> &[Relation; 4] {
        &self.relations
    }

    /// Same four relations up to order and orientation.
    pub fn same_as(&self, other: &RelationSet) -> bool {
        let mut a: Vec<_> = self.relations.iter().map(|r| r.key()).collect();
        let mut b: Vec<_> = other.relations.iter().map(|r| r.key()).collect();
        a.sort();
        b.sort();
        a == b
    }

    /// The relations with every word reversed: what the same text means when
    /// read under the other composition convention.
    pub fn reversed(&self) -> RelationSet {
        RelationSet {
            relations: self.relations.map(Relation::reversed_words),
        }
    }
}

impl fmt::Display for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.relations.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse relation set: {0}")]
pub struct RelationParseError(String);

impl FromStr for RelationSet {
    type Err = RelationParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_word = |w: &str| -> Result<[Slot; 2], RelationParseError> {
            let mut slots = Vec::new();
            let mut rest = w.trim();
            while !rest.is_empty() {
                let slot = [Slot::Phi1, Slot::Psi1, Slot::Phi2, Slot::Psi2]
                    .into_iter()
                    .find(|s| rest.starts_with(s.symbol()))
                    .ok_or_else(|| RelationParseError(w.to_string()))?;
                rest = &rest[slot.symbol().len()..];
                slots.push(slot);
            }
            slots.try_into().map_err(|_| RelationParseError(w.to_string()))
        };
        let rels: Vec<Relation> = s
            .split(',')
            .map(|r| {
                let (l, rr) = r.split_once('=').ok_or_else(|| RelationParseError(r.to_string()))?;
                Ok(Relation {
                    lhs: parse_word(l)?,
                    rhs: parse_word(rr)?,
                })
            })
            .collect::<Result<_, RelationParseError>>()?;
        let relations: [Relation; 4] = rels.try_into().map_err(|_| RelationParseError(s.to_string()))?;
        Ok(RelationSet { relations })
    }
}

/// Per-relation outcome under both conventions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub relations: String,
    pub right_to_left: [bool; 4],
    pub left_to_right: [bool; 4],
}

impl RelationCheck {
    pub fn holds(&self, conv: Convention) -> bool {
        match conv {
            Convention::RightToLeft => self.right_to_left.iter().all(|&b| b),
            Convention::LeftToRight => self.left_to_right.iter().all(|&b| b),
        }
    }

    pub fn holding_conventions(&self) -> Vec<Convention> {
        Convention::BOTH.into_iter().filter(|&c| self.holds(c)).collect()
    }
}

pub fn verify_relations(pair: &PairLinearRep, relations: &RelationSet) -> RelationCheck {
    let eval = |conv| relations.relations.map(|r| r.holds(pair, conv));
    RelationCheck {
        relations: relations.to_string(),
        right_to_left: eval(Convention::RightToLeft),
        left_to_right: eval(Convention::LeftToRight),
    }
}

/// Coefficient relations obtained by substituting affine forms into a
/// four-variable equation of depth two.
///
/// The coefficient of a variable is the composite of `φ_h` (left argument) or
/// `ψ_h` (right argument) along its path from the root, outermost first; the
/// first operation symbol is index 1, the second index 2. A linear pair
/// satisfies the equation iff these relations hold and both sides agree at
/// the all-zero assignment.
pub fn derive_relation_set(eq: &BalancedEquation) -> Result<RelationSet, LinearizeError> {
    if eq.ops().len() > 2 {
        return Err(LinearizeError::TooManyOperations(eq.to_string()));
    }
    let slot = |op: &str, left: bool| {
        let second = eq.ops().len() == 2 && eq.ops()[1] == op;
        match (second, left) {
            (false, true) => Slot::Phi1,
            (false, false) => Slot::Psi1,
            (true, true) => Slot::Phi2,
            (true, false) => Slot::Psi2,
        }
    };
    fn words(t: &Term, path: &mut Vec<Slot>, slot: &dyn Fn(&str, bool) -> Slot, out: &mut Vec<(String, Vec<Slot>)>) {
        match t {
            Term::Var(v) => out.push((v.clone(), path.clone())),
            Term::Op { op, left, right } => {
                path.push(slot(op, true));
                words(left, path, slot, out);
                path.pop();
                path.push(slot(op, false));
                words(right, path, slot, out);
                path.pop();
            }
        }
    }
    let (mut lw, mut rw) = (Vec::new(), Vec::new());
    words(eq.lhs(), &mut Vec::new(), &slot, &mut lw);
    words(eq.rhs(), &mut Vec::new(), &slot, &mut rw);
    let shape_err = || LinearizeError::TooManyOperations(eq.to_string());
    let rels: Vec<Relation> = eq
        .vars()
        .iter()
        .map(|v| {
            let l = &lw.iter().find(|(w, _)| w == v).expect("balanced").1;
            let r = &rw.iter().find(|(w, _)| w == v).expect("balanced").1;
            let l: [Slot; 2] = l.clone().try_into().map_err(|_| shape_err())?;
            let r: [Slot; 2] = r.clone().try_into().map_err(|_| shape_err())?;
            Ok(Relation { lhs: l, rhs: r })
        })
        .collect::<Result<_, LinearizeError>>()?;
    let relations: [Relation; 4] = rels.try_into().map_err(|_| shape_err())?;
    Ok(RelationSet { relations })
}

/// Transcribed-versus-derived comparison for one pair-catalog entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationTableCheck {
    pub label: String,
    pub transcribed: String,
    pub derived: String,
    pub matches: Vec<Convention>,
}

/// Re-derives the relation set of every pair entry that stores one.
pub fn relation_table_self_test() -> Vec<RelationTableCheck> {
    crate::equations::pair_catalog()
        .into_iter()
        .filter_map(|e| {
            let stored = e.classification.relations()?.clone();
            let derived = derive_relation_set(&e.equation).expect("catalog equations have depth two");
            let mut matches = Vec::new();
            if stored.same_as(&derived) {
                matches.push(Convention::RightToLeft);
            }
            if stored.reversed().same_as(&derived) {
                matches.push(Convention::LeftToRight);
            }
            Some(RelationTableCheck {
                label: e.label.clone(),
                transcribed: stored.to_string(),
                derived: derived.to_string(),
                matches,
            })
        })
        .collect()
}

/// Constraint on `(φ, ψ)` that a single-operation class imposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SinglePredicate {
    /// `φψ = ψφ`
    Commuting,
    /// `φ = ψ`
    Equal,
    /// `φ² = ψ²`
    EqualSquares,
}

impl SinglePredicate {
    pub fn for_class(c: &Classification) -> Option<Self> {
        match c {
            Classification::Medial => Some(SinglePredicate::Commuting),
            Classification::CommutativeT => Some(SinglePredicate::Equal),
            Classification::Paramedial => Some(SinglePredicate::EqualSquares),
            _ => None,
        }
    }

    pub fn text(self) -> &'static str {
        match self {
            SinglePredicate::Commuting => "φψ=ψφ",
            SinglePredicate::Equal => "φ=ψ",
            SinglePredicate::EqualSquares => "φφ=ψψ",
        }
    }

    pub fn holds(self, rep: &LinearRep) -> bool {
        let (p, s) = (&rep.phi, &rep.psi);
        match self {
            SinglePredicate::Commuting => p.compose(s) == s.compose(p),
            SinglePredicate::Equal => p == s,
            SinglePredicate::EqualSquares => p.compose(p) == s.compose(s),
        }
    }
}

/// Characterisation of the solutions of a single-catalog entry that does not
/// go through the equation itself. `None` for the 4-palindromic entry, which
/// has no such description here.
pub fn single_class_predicate(entry: &CatalogEntry, q: &QuasigroupTable) -> Option<bool> {
    let linear = |p: SinglePredicate| linearize_single(q, 0).map(|r| p.holds(&r)).unwrap_or(false);
    match entry.classification {
        Classification::Trivial => Some(true),
        Classification::Commutativity => Some(q.check_property(Property::Commutative)),
        Classification::Medial => Some(linear(SinglePredicate::Commuting)),
        Classification::Paramedial => Some(linear(SinglePredicate::EqualSquares)),
        Classification::CommutativeT => Some(q.check_property(Property::Commutative) && linear(SinglePredicate::Equal)),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateCheck {
    pub predicate: String,
    pub holds: bool,
}

/// Checks for the algebra `{f, g}` when all four ordered pairs satisfy the
/// entry: every operation has `φᵢ = ψᵢ` and the `φᵢ` commute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperidentityCheck {
    pub hyperidentity: bool,
    pub phi_equals_psi: Vec<bool>,
    pub phis_commute: bool,
}

/// Outcome of checking that an equation's solutions have the promised
/// representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub label: String,
    pub equation: String,
    pub classification: String,
    pub belousov: bool,
    pub satisfied: bool,
    pub counterexample: Option<Counterexample>,
    pub representation: Option<RepresentationReport>,
    pub linearization_error: Option<String>,
    pub predicate: Option<PredicateCheck>,
    pub relations: Option<RelationCheck>,
    pub hyperidentity_check: Option<HyperidentityCheck>,
    pub diagnostics: Vec<String>,
    pub theorem_violation: bool,
}

fn guaranteed_linear(c: &Classification) -> bool {
    matches!(
        c,
        Classification::Medial
            | Classification::Paramedial
            | Classification::CommutativeT
            | Classification::MedialPair(_)
            | Classification::ParamedialPair(_)
            | Classification::LinearPair(_)
    )
}

/// Runs the satisfaction check for `entry` and, when it holds, builds and
/// verifies the representation the entry's class promises.
///
/// A satisfied equation whose promised representation is missing or breaks
/// its relations is flagged as `THEOREM-VIOLATION`.
pub fn check_equation_implies_representation(
    entry: &CatalogEntry,
    f: &QuasigroupTable,
    g: Option<&QuasigroupTable>,
    e: Element,
) -> Result<TheoremReport, LinearizeError> {
    let g = match (entry.kind, g) {
        (CatalogKind::Pair, None) => return Err(LinearizeError::MissingSecondTable(entry.label.clone())),
        (CatalogKind::Pair, Some(g)) => Some(g),
        (CatalogKind::Single, _) => None,
    };
    if let Some(g) = g {
        if g.order() != f.order() {
            return Err(LinearizeError::OrderMismatch {
                expected: f.order(),
                found: g.order(),
            });
        }
    }
    if e >= f.order() {
        return Err(LinearizeError::BadBaseElement {
            element: e,
            order: f.order(),
        });
    }
    let bindings: Vec<(&str, &QuasigroupTable)> = match g {
        Some(g) => vec![("f", f), ("g", g)],
        None => vec![("f", f)],
    };
    let verdict = satisfies(&entry.equation, &bindings)?;
    let mut report = TheoremReport {
        label: entry.label.clone(),
        equation: entry.equation.to_string(),
        classification: entry.classification.name().to_string(),
        belousov: entry.belousov,
        satisfied: verdict.holds(),
        counterexample: verdict.counterexample().cloned(),
        representation: None,
        linearization_error: None,
        predicate: None,
        relations: None,
        hyperidentity_check: None,
        diagnostics: Vec::new(),
        theorem_violation: false,
    };
    if !report.satisfied {
        return Ok(report);
    }
    let promised = guaranteed_linear(&entry.classification);
    let violation = |report: &mut TheoremReport, msg: String| {
        report.diagnostics.push(format!("THEOREM-VIOLATION: {msg}"));
        report.theorem_violation = true;
    };
    match g {
        None => match linearize_single(f, e) {
            Ok(rep) => {
                report.representation = Some(RepresentationReport::new(&rep.group, &[&rep]));
                if let Some(p) = SinglePredicate::for_class(&entry.classification) {
                    let holds = p.holds(&rep);
                    report.predicate = Some(PredicateCheck {
                        predicate: p.text().to_string(),
                        holds,
                    });
                    if !holds {
                        violation(&mut report, format!("representation does not satisfy {}", p.text()));
                    }
                }
            }
            Err(err) => {
                report.linearization_error = Some(err.to_string());
                if promised {
                    violation(&mut report, format!("equation holds but linearization failed: {err}"));
                } else {
                    report
                        .diagnostics
                        .push(format!("no linear representation at base point {e}: {err}"));
                }
            }
        },
        Some(g) => match linearize_pair(f, g, e) {
            Ok(pair) => {
                report.representation = Some(RepresentationReport::new(&pair.group, &[&pair.rep_f, &pair.rep_g]));
                if let Some(rels) = entry.classification.relations() {
                    let check = verify_relations(&pair, rels);
                    if check.holding_conventions().is_empty() {
                        violation(&mut report, format!("relations {rels} fail under both conventions"));
                    }
                    report.relations = Some(check);
                }
                if let Classification::LinearPair(_) = entry.classification {
                    let check = hyperidentity_check(entry, &[f.clone(), g.clone()], &pair)?;
                    if check.hyperidentity && (!check.phis_commute || check.phi_equals_psi.iter().any(|b| !b)) {
                        violation(
                            &mut report,
                            "algebra {f, g} satisfies the equation but φᵢ=ψᵢ or φᵢφⱼ=φⱼφᵢ fails".into(),
                        );
                    }
                    report.hyperidentity_check = Some(check);
                }
            }
            Err(err) => {
                report.linearization_error = Some(err.to_string());
                if promised {
                    violation(
                        &mut report,
                        format!("equation holds but pair linearization failed: {err}"),
                    );
                } else {
                    report
                        .diagnostics
                        .push(format!("no linear representation at base point {e}: {err}"));
                }
            }
        },
    }
    Ok(report)
}

fn hyperidentity_check(
    entry: &CatalogEntry,
    ops: &[QuasigroupTable],
    pair: &PairLinearRep,
) -> Result<HyperidentityCheck, LinearizeError> {
    let mut hyper = true;
    for a in ops {
        for b in ops {
            hyper &= satisfies(&entry.equation, &[("f", a), ("g", b)])?.holds();
        }
    }
    let reps = [&pair.rep_f, &pair.rep_g];
    Ok(HyperidentityCheck {
        hyperidentity: hyper,
        phi_equals_psi: reps.iter().map(|r| r.phi == r.psi).collect(),
        phis_commute: pair.rep_f.phi.compose(&pair.rep_g.phi) == pair.rep_g.phi.compose(&pair.rep_f.phi),
    })
}

/// Report for a family of operations checked against one pair equation as a
/// hyperidentity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub label: String,
    pub hyperidentity: bool,
    pub representation: Option<RepresentationReport>,
    pub phi_equals_psi: Vec<bool>,
    pub phis_commute: bool,
    pub pair_relations_hold: bool,
    pub theorem_violation: bool,
}

/// Checks an algebra `(B; f₁, …, f_k)` against a pair-catalog entry taken
/// as a hyperidentity (every ordered pair of operations, including equal
/// ones, substituted for `(f, g)`).
pub fn check_algebra(
    entry: &CatalogEntry,
    ops: &[QuasigroupTable],
    e: Element,
) -> Result<AlgebraReport, LinearizeError> {
    let mut hyper = true;
    'outer: for a in ops {
        for b in ops {
            if !satisfies(&entry.equation, &[("f", a), ("g", b)])?.holds() {
                hyper = false;
                break 'outer;
            }
        }
    }
    let mut report = AlgebraReport {
        label: entry.label.clone(),
        hyperidentity: hyper,
        representation: None,
        phi_equals_psi: Vec::new(),
        phis_commute: false,
        pair_relations_hold: false,
        theorem_violation: false,
    };
    if !hyper {
        return Ok(report);
    }
    match linearize_family(ops, e) {
        Ok((group, reps)) => {
            report.phi_equals_psi = reps.iter().map(|r| r.phi == r.psi).collect();
            report.phis_commute = reps
                .iter()
                .all(|a| reps.iter().all(|b| a.phi.compose(&b.phi) == b.phi.compose(&a.phi)));
            report.pair_relations_hold = match entry.classification.relations() {
                Some(rels) => reps.iter().all(|a| {
                    reps.iter().all(|b| {
                        let pair = PairLinearRep {
                            group: group.clone(),
                            rep_f: a.clone(),
                            rep_g: b.clone(),
                        };
                        !verify_relations(&pair, rels).holding_conventions().is_empty()
                    })
                }),
                None => true,
            };
            let refs: Vec<&LinearRep> = reps.iter().collect();
            report.representation = Some(RepresentationReport::new(&group, &refs));
            let hyperidentity_ok = match entry.classification {
                Classification::LinearPair(_) => report.phis_commute && report.phi_equals_psi.iter().all(|&b| b),
                _ => true,
            };
            report.theorem_violation = !(hyperidentity_ok && report.pair_relations_hold);
        }
        Err(_) => report.theorem_violation = guaranteed_linear(&entry.classification),
    }
    Ok(report)
}

/// Single-catalog entries whose satisfaction disagrees with
/// [`single_class_predicate`], as `(table index, label)`.
pub fn classification_mismatches(tables: &[QuasigroupTable], exec: Exec) -> Vec<(usize, String)> {
    let catalog = crate::equations::single_catalog();
    let indexed: Vec<(usize, &QuasigroupTable)> = tables.iter().enumerate().collect();
    exec.map(&indexed, |&(i, q)| {
        catalog
            .iter()
            .filter_map(|entry| {
                let expected = single_class_predicate(entry, q)?;
                let got = satisfies(&entry.equation, &[("f", q)]).expect("bound").holds();
                (got != expected).then(|| (i, entry.label.clone()))
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

/// Result of [`pair_theorem_sweep`] for one pair-catalog entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSweepRow {
    pub label: String,
    pub satisfied: usize,
    pub right_to_left: usize,
    pub left_to_right: usize,
    pub violations: usize,
}

/// For every ordered pair of `tables` and every entry with stored relations,
/// counts satisfying pairs, pairs whose relations hold under each
/// convention, and theorem violations.
pub fn pair_theorem_sweep(tables: &[QuasigroupTable], entries: &[CatalogEntry], exec: Exec) -> Vec<PairSweepRow> {
    let pairs: Vec<(usize, usize)> = (0..tables.len())
        .flat_map(|i| (0..tables.len()).map(move |j| (i, j)))
        .collect();
    exec.map(entries, |entry| {
        let rels = entry.classification.relations();
        let mut row = PairSweepRow {
            label: entry.label.clone(),
            satisfied: 0,
            right_to_left: 0,
            left_to_right: 0,
            violations: 0,
        };
        for &(i, j) in &pairs {
            let (f, g) = (&tables[i], &tables[j]);
            if !satisfies(&entry.equation, &[("f", f), ("g", g)])
                .expect("bound")
                .holds()
            {
                continue;
            }
            row.satisfied += 1;
            match (linearize_pair(f, g, 0), rels) {
                (Ok(pair), Some(rels)) => {
                    let check = verify_relations(&pair, rels);
                    let r2l = check.holds(Convention::RightToLeft);
                    let l2r = check.holds(Convention::LeftToRight);
                    row.right_to_left += usize::from(r2l);
                    row.left_to_right += usize::from(l2r);
                    row.violations += usize::from(!r2l && !l2r);
                }
                (Ok(_), None) => {}
                (Err(_), _) => row.violations += usize::from(guaranteed_linear(&entry.classification)),
            }
        }
        row
    })
}
