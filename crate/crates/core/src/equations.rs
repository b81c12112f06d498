//! Balanced functional equations over binary operation symbols.
//!
//! Grammar accepted by [`parse_equation`]:
//!
//! ```text
//! equation := term '=' term
//! term     := IDENT | IDENT '(' term ',' term ')'
//! ```
//!
//! A symbol applied to arguments is an operation symbol, anything else is an
//! object variable. Whitespace is ignored.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::linearize::RelationSet;
use crate::tables::{Element, QuasigroupTable};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Op {
        op: String,
        left: Box<Term>,
        right: Box<Term>,
    },
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn op(op: &str, left: Term, right: Term) -> Term {
        Term::Op {
            op: op.to_string(),
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    fn visit_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(v) => out.push(v),
            Term::Op { left, right, .. } => {
                left.visit_vars(out);
                right.visit_vars(out);
            }
        }
    }

    fn visit_ops<'a>(&'a self, out: &mut Vec<&'a str>) {
        if let Term::Op { op, left, right } = self {
            out.push(op);
            left.visit_ops(out);
            right.visit_ops(out);
        }
    }

    fn rename(&self, map: &BTreeMap<String, String>) -> Term {
        match self {
            Term::Var(v) => Term::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
            Term::Op { op, left, right } => Term::Op {
                op: op.clone(),
                left: Box::new(left.rename(map)),
                right: Box::new(right.rename(map)),
            },
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Op { op, left, right } => write!(f, "{op}({left},{right})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lhs,
    Rhs,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lhs => "left-hand side",
            Side::Rhs => "right-hand side",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquationError {
    #[error("syntax error at position {position}: expected {expected}")]
    SyntaxError { position: usize, expected: &'static str },
    #[error("not balanced: variable {variable} occurs {count} times in the {side}")]
    NotBalanced { variable: String, side: Side, count: usize },
    #[error("symbol {symbol} is used both as a variable and as an operation")]
    AritySurprise { symbol: String },
    #[error("operation symbol {symbol} is not bound to a table")]
    UnboundSymbol { symbol: String },
    #[error("bound tables have different orders ({expected} and {found})")]
    OrderMismatch { expected: usize, found: usize },
    #[error("{assignments} assignments exceed the limit {limit}; force the check to run it anyway")]
    TooExpensive { assignments: u64, limit: u64 },
    #[error("unknown catalog label {0}")]
    UnknownLabel(String),
}

/// An equation `lhs = rhs` in which every variable occurs exactly once per side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedEquation {
    lhs: Term,
    rhs: Term,
    vars: Vec<String>,
    ops: Vec<String>,
}

impl BalancedEquation {
    pub fn new(lhs: Term, rhs: Term) -> Result<Self, EquationError> {
        let (mut lv, mut rv) = (Vec::new(), Vec::new());
        lhs.visit_vars(&mut lv);
        rhs.visit_vars(&mut rv);
        let mut ops_seen = Vec::new();
        lhs.visit_ops(&mut ops_seen);
        rhs.visit_ops(&mut ops_seen);
        if let Some(sym) = lv.iter().chain(&rv).find(|v| ops_seen.contains(v)) {
            return Err(EquationError::AritySurprise {
                symbol: sym.to_string(),
            });
        }
        let vars: Vec<String> = lv.iter().chain(&rv).unique().map(|s| s.to_string()).collect();
        for v in &vars {
            for (side, occ) in [(Side::Lhs, &lv), (Side::Rhs, &rv)] {
                let count = occ.iter().filter(|s| **s == v).count();
                if count != 1 {
                    return Err(EquationError::NotBalanced {
                        variable: v.clone(),
                        side,
                        count,
                    });
                }
            }
        }
        let ops = ops_seen.iter().unique().map(|s| s.to_string()).collect();
        Ok(BalancedEquation { lhs, rhs, vars, ops })
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    /// Variables in order of first appearance in the left-hand side.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Operation symbols in order of first appearance.
    pub fn ops(&self) -> &[String] {
        &self.ops
    }

    /// Renames object variables; names not in `map` are kept.
    pub fn rename_vars(&self, map: &BTreeMap<String, String>) -> Result<Self, EquationError> {
        Self::new(self.lhs.rename(map), self.rhs.rename(map))
    }

    /// True iff every subterm's variable set on either side is the variable
    /// set of some subterm on the other side.
    pub fn is_belousov(&self) -> bool {
        let index = |v: &str| {
            self.vars
                .iter()
                .position(|w| w == v)
                .expect("variable of this equation")
        };
        fn collect(t: &Term, index: &dyn Fn(&str) -> usize, out: &mut Vec<u128>) -> u128 {
            let set = match t {
                Term::Var(v) => 1u128 << index(v),
                Term::Op { left, right, .. } => collect(left, index, out) | collect(right, index, out),
            };
            out.push(set);
            set
        }
        let (mut ls, mut rs) = (Vec::new(), Vec::new());
        collect(&self.lhs, &index, &mut ls);
        collect(&self.rhs, &index, &mut rs);
        ls.iter().all(|s| rs.contains(s)) && rs.iter().all(|s| ls.contains(s))
    }
}

impl fmt::Display for BalancedEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.lhs, self.rhs)
    }
}

pub fn is_belousov(eq: &BalancedEquation) -> bool {
    eq.is_belousov()
}

/// Parses `text` and checks that the result is balanced.
pub fn parse_equation(text: &str) -> Result<BalancedEquation, EquationError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let lhs = p.term()?;
    p.expect(b'=', "'='")?;
    let rhs = p.term()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(EquationError::SyntaxError {
            position: p.pos,
            expected: "end of input",
        });
    }
    BalancedEquation::new(lhs, rhs)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8, what: &'static str) -> Result<(), EquationError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(EquationError::SyntaxError {
                position: self.pos,
                expected: what,
            })
        }
    }

    fn ident(&mut self) -> Result<String, EquationError> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => {}
            _ => {
                return Err(EquationError::SyntaxError {
                    position: start,
                    expected: "identifier",
                })
            }
        }
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn term(&mut self) -> Result<Term, EquationError> {
        let name = self.ident()?;
        if self.peek() != Some(b'(') {
            return Ok(Term::Var(name));
        }
        self.pos += 1;
        let left = self.term()?;
        self.expect(b',', "','")?;
        let right = self.term()?;
        self.expect(b')', "')'")?;
        Ok(Term::Op {
            op: name,
            left: Box::new(left),
            right: Box::new(right),
        })
    }
}

/// One variable assignment that violates an equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// `(variable, value)` in the equation's variable order.
    pub assignment: Vec<(String, Element)>,
    pub lhs: Element,
    pub rhs: Element,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.assignment.iter().map(|(v, x)| format!("{v}={x}")).collect();
        write!(f, "{}: lhs={} rhs={}", a.join(", "), self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails(Counterexample),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(c) => Some(c),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Instr {
    Var(usize),
    Apply(usize),
}

fn compile(t: &Term, vars: &[String], ops: &[String], out: &mut Vec<Instr>) {
    match t {
        Term::Var(v) => out.push(Instr::Var(vars.iter().position(|w| w == v).expect("known variable"))),
        Term::Op { op, left, right } => {
            compile(left, vars, ops, out);
            compile(right, vars, ops, out);
            out.push(Instr::Apply(ops.iter().position(|o| o == op).expect("known operation")));
        }
    }
}

fn eval(code: &[Instr], tables: &[&QuasigroupTable], env: &[Element], stack: &mut Vec<Element>) -> Element {
    stack.clear();
    for ins in code {
        match *ins {
            Instr::Var(i) => stack.push(env[i]),
            Instr::Apply(o) => {
                let b = stack.pop().expect("well-formed term");
                let a = stack.pop().expect("well-formed term");
                stack.push(tables[o].get(a, b));
            }
        }
    }
    stack[0]
}

/// Options for [`satisfies_with`].
#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    /// `None` removes the cost guard.
    pub max_assignments: Option<u64>,
    pub exec: Exec,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            max_assignments: Some(Limits::default().max_assignments),
            exec: Exec::default(),
        }
    }
}

impl CheckOptions {
    pub fn forced() -> Self {
        CheckOptions {
            max_assignments: None,
            ..Self::default()
        }
    }
}

/// Brute-force satisfaction check with the default cost guard.
pub fn satisfies(eq: &BalancedEquation, bindings: &[(&str, &QuasigroupTable)]) -> Result<Verdict, EquationError> {
    satisfies_with(eq, bindings, &CheckOptions::default())
}

/// Checks `eq` for every assignment of elements to variables.
///
/// Assignments are visited in lexicographic order over the variable order of
/// [`BalancedEquation::vars`]; on failure the first violating assignment is
/// returned, independent of the execution strategy.
pub fn satisfies_with(
    eq: &BalancedEquation,
    bindings: &[(&str, &QuasigroupTable)],
    opts: &CheckOptions,
) -> Result<Verdict, EquationError> {
    let tables: Vec<&QuasigroupTable> = eq
        .ops
        .iter()
        .map(|op| {
            bindings
                .iter()
                .find(|(name, _)| name == op)
                .map(|(_, t)| *t)
                .ok_or_else(|| EquationError::UnboundSymbol { symbol: op.clone() })
        })
        .collect::<Result<_, _>>()?;
    let n = match tables.first() {
        Some(t) => t.order(),
        // no operations: both sides are single variables
        None => bindings.first().map_or(1, |(_, t)| t.order()),
    };
    if let Some(t) = tables.iter().find(|t| t.order() != n) {
        return Err(EquationError::OrderMismatch {
            expected: n,
            found: t.order(),
        });
    }
    let k = eq.vars.len();
    let total = (n as u64).saturating_pow(k as u32);
    if let Some(limit) = opts.max_assignments {
        if total > limit {
            return Err(EquationError::TooExpensive {
                assignments: total,
                limit,
            });
        }
    }
    let (mut lc, mut rc) = (Vec::new(), Vec::new());
    compile(&eq.lhs, &eq.vars, &eq.ops, &mut lc);
    compile(&eq.rhs, &eq.vars, &eq.ops, &mut rc);

    let search = |first: &Element| -> Option<Counterexample> {
        let mut env = vec![0; k];
        if k > 0 {
            env[0] = *first;
        }
        let mut stack = Vec::with_capacity(k);
        loop {
            let l = eval(&lc, &tables, &env, &mut stack);
            let r = eval(&rc, &tables, &env, &mut stack);
            if l != r {
                return Some(Counterexample {
                    assignment: eq.vars.iter().cloned().zip(env.iter().copied()).collect(),
                    lhs: l,
                    rhs: r,
                });
            }
            // odometer over env[1..], last variable fastest
            let mut i = k;
            loop {
                if i <= 1 {
                    return None;
                }
                i -= 1;
                env[i] += 1;
                if env[i] < n {
                    break;
                }
                env[i] = 0;
            }
        }
    };
    let firsts: Vec<Element> = if k == 0 { vec![0] } else { (0..n).collect() };
    // small checks are cheaper inline
    let exec = if total < 1 << 14 { Exec::Sequential } else { opts.exec };
    Ok(match exec.find_map_first(&firsts, search) {
        None => Verdict::Holds,
        Some(c) => Verdict::Fails(c),
    })
}

/// Which of the two 24-entry catalogs an entry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CatalogKind {
    Single,
    Pair,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Trivial,
    Commutativity,
    Medial,
    Paramedial,
    Palindromic4,
    CommutativeT,
    Belousov,
    MedialPair(RelationSet),
    ParamedialPair(RelationSet),
    LinearPair(RelationSet),
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::Trivial => "trivial",
            Classification::Commutativity => "commutativity",
            Classification::Medial => "medial",
            Classification::Paramedial => "paramedial",
            Classification::Palindromic4 => "palindromic4",
            Classification::CommutativeT => "commutativeT",
            Classification::Belousov => "belousov",
            Classification::MedialPair(_) => "medialPair",
            Classification::ParamedialPair(_) => "paramedialPair",
            Classification::LinearPair(_) => "linearPair",
        }
    }

    /// The stored commutation relations for pair entries that have them.
    pub fn relations(&self) -> Option<&RelationSet> {
        match self {
            Classification::MedialPair(r) | Classification::ParamedialPair(r) | Classification::LinearPair(r) => {
                Some(r)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub label: String,
    pub kind: CatalogKind,
    pub equation: BalancedEquation,
    /// Right-hand-side variable order, a permutation of `x, y, u, v`.
    pub rhs_permutation: [&'static str; 4],
    pub belousov: bool,
    pub classification: Classification,
}

impl CatalogEntry {
    pub fn rhs_permutation_text(&self) -> String {
        format!("({})", self.rhs_permutation.join(","))
    }
}

const VARS: [&str; 4] = ["x", "y", "u", "v"];

/// Right-hand-side variable order for each tag, transcribed in the order the
/// equations are listed (which is also the lexicographic order of the
/// permutations with `x < y < u < v`).
const LABELS: [(&str, &str); 24] = [
    ("0", "xyuv"),
    ("00", "xyvu"),
    ("1", "xuyv"),
    ("2", "xuvy"),
    ("3", "xvyu"),
    ("4", "xvuy"),
    ("05", "yxuv"),
    ("06", "yxvu"),
    ("5", "yuxv"),
    ("6", "yuvx"),
    ("7", "yvxu"),
    ("8", "yvux"),
    ("9", "uxyv"),
    ("10", "uxvy"),
    ("11", "uyxv"),
    ("12", "uyvx"),
    ("013", "uvxy"),
    ("014", "uvyx"),
    ("13", "vxyu"),
    ("14", "vxuy"),
    ("15", "vyxu"),
    ("16", "vyux"),
    ("015", "vuxy"),
    ("016", "vuyx"),
];

/// Commutation relations attached to the non-Belousov pair equations,
/// transcribed as stated (juxtaposition `AB` read as `A∘B`).
const PAIR_RELATIONS: [(&str, &str); 16] = [
    ("1", "φ1ψ2=ψ2φ1, φ2ψ1=ψ1φ2, ψ1ψ2=ψ2ψ1, φ1φ2=φ2φ1"),
    ("16", "φ1φ2=ψ2ψ1, φ2φ1=ψ1ψ2, φ1ψ2=φ2ψ1, ψ1φ2=ψ2φ1"),
    ("2", "φ1φ2=φ2φ1, φ1ψ2=ψ2ψ1, ψ1φ2=φ2ψ1, ψ1ψ2=ψ2φ1"),
    ("3", "φ1φ2=φ2φ1, φ1ψ2=ψ2φ1, ψ1φ2=ψ2ψ1, ψ1ψ2=φ2ψ1"),
    ("4", "φ1φ2=φ2φ1, φ1ψ2=ψ2ψ1, ψ1φ2=ψ2φ1, ψ1ψ2=φ2ψ1"),
    ("5", "φ1φ2=ψ2φ1, φ1ψ2=φ2φ1, ψ1φ2=φ2ψ1, ψ1ψ2=ψ2ψ1"),
    ("6", "φ1φ2=ψ2ψ1, φ1ψ2=φ2φ1, ψ1φ2=φ2ψ1, ψ1ψ2=ψ2φ1"),
    ("7", "φ1φ2=ψ2φ1, φ1ψ2=φ2φ1, ψ1φ2=ψ2ψ1, ψ1ψ2=φ2ψ1"),
    ("8", "φ1φ2=ψ2ψ1, φ1ψ2=φ2φ1, ψ1φ2=ψ2φ1, ψ1ψ2=φ2ψ1"),
    ("9", "φ1φ2=φ2ψ1, φ1ψ2=ψ2φ1, ψ1φ2=φ2φ1, ψ1ψ2=ψ2ψ1"),
    ("10", "φ1φ2=φ2ψ1, φ1ψ2=ψ2ψ1, ψ1φ2=φ2φ1, ψ1ψ2=ψ2φ1"),
    ("11", "φ1φ2=ψ2φ1, φ1ψ2=φ2ψ1, ψ1φ2=φ2φ1, ψ1ψ2=ψ2ψ1"),
    ("12", "φ1φ2=ψ2ψ1, φ1ψ2=φ2ψ1, ψ1φ2=φ2φ1, ψ1ψ2=ψ2φ1"),
    ("13", "φ1φ2=φ2ψ1, φ1ψ2=ψ2φ1, ψ1φ2=ψ2ψ1, ψ1ψ2=φ2φ1"),
    ("14", "φ1φ2=φ2ψ1, φ1ψ2=ψ2ψ1, ψ1φ2=ψ2φ1, ψ1ψ2=φ2φ1"),
    ("15", "φ1φ2=ψ2φ1, φ1ψ2=φ2ψ1, ψ1φ2=ψ2ψ1, ψ1ψ2=φ2φ1"),
];

const PAIR_BELOUSOV: [&str; 8] = ["0", "00", "05", "06", "013", "014", "015", "016"];

/// The stored relation set for pair tag `tag` (without the `2-` prefix).
pub fn transcribed_relations(tag: &str) -> Option<RelationSet> {
    PAIR_RELATIONS
        .iter()
        .find(|(t, _)| *t == tag)
        .map(|(_, text)| text.parse().expect("transcribed relation sets parse"))
}

fn label_for(perm: &[&str]) -> &'static str {
    let key: String = perm.concat();
    LABELS
        .iter()
        .find(|(_, p)| *p == key)
        .map(|(l, _)| *l)
        .expect("every permutation is labelled")
}

fn build(outer: &str, inner: &str, perm: &[&str]) -> BalancedEquation {
    let v = Term::var;
    let lhs = Term::op(outer, Term::op(inner, v("x"), v("y")), Term::op(inner, v("u"), v("v")));
    let rhs = Term::op(
        inner,
        Term::op(outer, v(perm[0]), v(perm[1])),
        Term::op(outer, v(perm[2]), v(perm[3])),
    );
    BalancedEquation::new(lhs, rhs).expect("catalog equations are balanced")
}

fn to_array(perm: &[&'static str]) -> [&'static str; 4] {
    [perm[0], perm[1], perm[2], perm[3]]
}

/// The 24 equations `f(f(x,y),f(u,v)) = f(f(·,·),f(·,·))`.
pub fn single_catalog() -> Vec<CatalogEntry> {
    VARS.iter()
        .copied()
        .permutations(4)
        .map(|perm| {
            let tag = label_for(&perm);
            let classification = match tag {
                "0" => Classification::Trivial,
                "00" | "05" | "06" | "013" | "014" | "015" => Classification::Commutativity,
                "1" => Classification::Medial,
                "16" => Classification::Paramedial,
                "016" => Classification::Palindromic4,
                _ => Classification::CommutativeT,
            };
            let equation = build("f", "f", &perm);
            CatalogEntry {
                label: format!("1-{tag}"),
                kind: CatalogKind::Single,
                belousov: equation.is_belousov(),
                equation,
                rhs_permutation: to_array(&perm),
                classification,
            }
        })
        .collect()
}

/// The 24 equations `f(g(x,y),g(u,v)) = g(f(·,·),f(·,·))`.
pub fn pair_catalog() -> Vec<CatalogEntry> {
    VARS.iter()
        .copied()
        .permutations(4)
        .map(|perm| {
            let tag = label_for(&perm);
            let classification = if PAIR_BELOUSOV.contains(&tag) {
                Classification::Belousov
            } else {
                let rels = transcribed_relations(tag).expect("every non-Belousov pair entry has relations");
                match tag {
                    "1" => Classification::MedialPair(rels),
                    "16" => Classification::ParamedialPair(rels),
                    _ => Classification::LinearPair(rels),
                }
            };
            CatalogEntry {
                label: format!("2-{tag}"),
                kind: CatalogKind::Pair,
                belousov: PAIR_BELOUSOV.contains(&tag),
                equation: build("f", "g", &perm),
                rhs_permutation: to_array(&perm),
                classification,
            }
        })
        .collect()
}

/// Finds a catalog entry by its tag, e.g. `"1-16"` or `"2-013"`.
pub fn catalog_entry(label: &str) -> Result<CatalogEntry, EquationError> {
    let catalog = if label.starts_with("1-") {
        single_catalog()
    } else if label.starts_with("2-") {
        pair_catalog()
    } else {
        return Err(EquationError::UnknownLabel(label.to_string()));
    };
    catalog
        .into_iter()
        .find(|e| e.label == label)
        .ok_or_else(|| EquationError::UnknownLabel(label.to_string()))
}
