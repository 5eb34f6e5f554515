//! Formula syntax shared by every language of the toolkit.
//!
//! One tree type covers propositional Gödel logic, its modal extension with
//! delta and rational constants, and the announcement languages with and
//! without delta. [`classify`] decides which of those languages a tree
//! belongs to.

mod parser;
mod printer;

use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::TruthValue;

pub use parser::{parse, ParseError};
pub use printer::{print, print_bare};

/// Name of an agent indexing a knowledge operator.
#[derive(
    Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
#[serde(try_from = "String", into = "String")]
pub struct AgentId(String);

impl AgentId {
    /// Accepts non-empty names over `[A-Za-z0-9_]`.
    pub fn new(name: impl Into<String>) -> Option<Self> {
        let name = name.into();
        let ok = !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_');
        ok.then_some(AgentId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for AgentId {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        AgentId::new(s.clone()).ok_or_else(|| format!("invalid agent name `{s}`"))
    }
}

impl From<AgentId> for String {
    fn from(a: AgentId) -> String {
        a.0
    }
}

/// Whether `name` is a legal proposition name (`[a-z][A-Za-z0-9_]*`, not a keyword).
pub fn is_atom_name(name: &str) -> bool {
    let mut bytes = name.bytes();
    matches!(bytes.next(), Some(b'a'..=b'z'))
        && bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_')
        && name != "bot"
        && name != "top"
}

/// A formula tree.
///
/// Sugar (negation, disjunction, biconditional, derived value relations) is
/// never stored; the constructors below expand it into core connectives.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Bottom,
    Atom(String),
    /// Truth constant; the value lies strictly between 0 and 1.
    Constant(TruthValue),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Delta(Box<Formula>),
    Know(AgentId, Box<Formula>),
    /// `[announcement] inner`
    Announce(Box<Formula>, Box<Formula>),
    /// `V(subject) = c`
    ValEq(Box<Formula>, TruthValue),
    /// `V(subject) > c`
    ValGt(Box<Formula>, TruthValue),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    /// `bot -> bot`
    pub fn top() -> Self {
        Formula::implies(Formula::Bottom, Formula::Bottom)
    }

    /// The constant formula for `c`: `bot` for 0, `top` for 1, a constant node otherwise.
    pub fn constant(c: TruthValue) -> Self {
        if c.is_zero() {
            Formula::Bottom
        } else if c.is_one() {
            Formula::top()
        } else {
            Formula::Constant(c)
        }
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// `a -> bot`
    pub fn not(a: Formula) -> Self {
        Formula::implies(a, Formula::Bottom)
    }

    /// `((a -> b) -> b) & ((b -> a) -> a)`
    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::and(
            Formula::implies(Formula::implies(a.clone(), b.clone()), b.clone()),
            Formula::implies(Formula::implies(b, a.clone()), a),
        )
    }

    /// `(a -> b) & (b -> a)`
    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    pub fn delta(a: Formula) -> Self {
        Formula::Delta(Box::new(a))
    }

    pub fn know(agent: AgentId, a: Formula) -> Self {
        Formula::Know(agent, Box::new(a))
    }

    pub fn announce(announcement: Formula, inner: Formula) -> Self {
        Formula::Announce(Box::new(announcement), Box::new(inner))
    }

    pub fn val_eq(subject: Formula, c: TruthValue) -> Self {
        Formula::ValEq(Box::new(subject), c)
    }

    pub fn val_gt(subject: Formula, c: TruthValue) -> Self {
        Formula::ValGt(Box::new(subject), c)
    }

    /// Immediate children, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Bottom | Formula::Atom(_) | Formula::Constant(_) => vec![],
            Formula::And(a, b) | Formula::Implies(a, b) | Formula::Announce(a, b) => vec![a, b],
            Formula::Delta(a)
            | Formula::Know(_, a)
            | Formula::ValEq(a, _)
            | Formula::ValGt(a, _) => {
                vec![a]
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::size)
            .sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::depth)
            .max()
            .unwrap_or(0)
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Formula)) {
        visit(self);
        for c in self.children() {
            c.walk(visit);
        }
    }

    pub fn any_node(&self, pred: impl Fn(&Formula) -> bool) -> bool {
        let mut found = false;
        self.walk(&mut |g| found |= pred(g));
        found
    }

    /// Truth constants and value-formula thresholds occurring in the tree.
    pub fn constants(&self) -> BTreeSet<TruthValue> {
        let mut out = BTreeSet::new();
        self.walk(&mut |g| match g {
            Formula::Constant(c) | Formula::ValEq(_, c) | Formula::ValGt(_, c) => {
                out.insert(c.clone());
            }
            _ => {}
        });
        out
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |g| {
            if let Formula::Atom(p) = g {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn agents(&self) -> BTreeSet<AgentId> {
        let mut out = BTreeSet::new();
        self.walk(&mut |g| {
            if let Formula::Know(a, _) = g {
                out.insert(a.clone());
            }
        });
        out
    }

    pub fn has_announcement(&self) -> bool {
        self.any_node(|g| matches!(g, Formula::Announce(..)))
    }

    pub fn has_value_formula(&self) -> bool {
        self.any_node(|g| matches!(g, Formula::ValEq(..) | Formula::ValGt(..)))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Sub-formula closure: the formula itself plus the closure of each child.
pub fn subformulas(f: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    f.walk(&mut |g| {
        out.insert(g.clone());
    });
    out
}

/// The languages a formula can belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LanguageTag {
    /// Propositional Gödel logic.
    LangG,
    /// Modal Gödel logic with delta and rational constants.
    LangKDeltaQ,
    /// Announcement logic without delta or constants.
    LangFPA,
    /// Announcement logic with delta and rational constants.
    LangFPADeltaQ,
    /// Value formulas of the announcement logic without delta.
    LangFPAValue,
}

/// Every language of which `f` is a well-formed member.
pub fn classify(f: &Formula) -> BTreeSet<LanguageTag> {
    let mut tags = BTreeSet::new();
    if in_g(f) {
        tags.insert(LanguageTag::LangG);
    }
    if in_k_delta_q(f) {
        tags.insert(LanguageTag::LangKDeltaQ);
    }
    if in_fpa(f) {
        tags.insert(LanguageTag::LangFPA);
    }
    if in_fpa_delta_q(f) {
        tags.insert(LanguageTag::LangFPADeltaQ);
    }
    if is_fpa_value_formula(f) {
        tags.insert(LanguageTag::LangFPAValue);
    }
    tags
}

fn in_g(f: &Formula) -> bool {
    match f {
        Formula::Bottom | Formula::Atom(_) => true,
        Formula::And(a, b) | Formula::Implies(a, b) => in_g(a) && in_g(b),
        _ => false,
    }
}

fn in_k_delta_q(f: &Formula) -> bool {
    match f {
        Formula::Bottom | Formula::Atom(_) | Formula::Constant(_) => true,
        Formula::And(a, b) | Formula::Implies(a, b) => in_k_delta_q(a) && in_k_delta_q(b),
        Formula::Delta(a) | Formula::Know(_, a) => in_k_delta_q(a),
        Formula::Announce(..) | Formula::ValEq(..) | Formula::ValGt(..) => false,
    }
}

fn in_fpa(f: &Formula) -> bool {
    match f {
        Formula::Bottom | Formula::Atom(_) => true,
        Formula::And(a, b) | Formula::Implies(a, b) => in_fpa(a) && in_fpa(b),
        Formula::Know(_, a) => in_fpa(a),
        Formula::Announce(l, a) => is_fpa_value_formula(l) && in_fpa(a),
        Formula::Constant(_) | Formula::Delta(_) | Formula::ValEq(..) | Formula::ValGt(..) => false,
    }
}

/// Value formulas of the delta-free announcement language: value atoms over
/// announcement formulas, closed under `&`, `->`, `K`, announcements and `bot`
/// (the latter so that the negated relations `!=`, `<=`, `<` stay inside).
pub fn is_fpa_value_formula(f: &Formula) -> bool {
    match f {
        Formula::Bottom => true,
        Formula::ValEq(s, _) | Formula::ValGt(s, _) => in_fpa(s),
        Formula::And(a, b) | Formula::Implies(a, b) | Formula::Announce(a, b) => {
            is_fpa_value_formula(a) && is_fpa_value_formula(b)
        }
        Formula::Know(_, a) => is_fpa_value_formula(a),
        Formula::Atom(_) | Formula::Constant(_) | Formula::Delta(_) => false,
    }
}

// Value nodes are abbreviations in this language, so they may occur anywhere.
fn in_fpa_delta_q(f: &Formula) -> bool {
    match f {
        Formula::Bottom | Formula::Atom(_) | Formula::Constant(_) => true,
        Formula::And(a, b) | Formula::Implies(a, b) => in_fpa_delta_q(a) && in_fpa_delta_q(b),
        Formula::Delta(a) | Formula::Know(_, a) | Formula::ValEq(a, _) | Formula::ValGt(a, _) => {
            in_fpa_delta_q(a)
        }
        Formula::Announce(l, a) => is_announcement_body(l) && in_fpa_delta_q(a),
    }
}

/// Legal announcement bodies of the delta language: the value-formula grammar
/// extended with `D psi`. Every such body evaluates to 0 or 1.
pub fn is_announcement_body(f: &Formula) -> bool {
    match f {
        Formula::Bottom => true,
        Formula::ValEq(s, _) | Formula::ValGt(s, _) | Formula::Delta(s) => in_fpa_delta_q(s),
        Formula::And(a, b) | Formula::Implies(a, b) | Formula::Announce(a, b) => {
            is_announcement_body(a) && is_announcement_body(b)
        }
        Formula::Know(_, a) => is_announcement_body(a),
        Formula::Atom(_) | Formula::Constant(_) => false,
    }
}

/// Expands value formulas into delta/constant form:
/// `V(s)=c` becomes `D(s <-> c)` and `V(s)>c` becomes `~D(s -> c)`.
pub fn desugar_value(f: &Formula) -> Formula {
    match f {
        Formula::Bottom | Formula::Atom(_) | Formula::Constant(_) => f.clone(),
        Formula::And(a, b) => Formula::and(desugar_value(a), desugar_value(b)),
        Formula::Implies(a, b) => Formula::implies(desugar_value(a), desugar_value(b)),
        Formula::Delta(a) => Formula::delta(desugar_value(a)),
        Formula::Know(ag, a) => Formula::know(ag.clone(), desugar_value(a)),
        Formula::Announce(l, a) => Formula::announce(desugar_value(l), desugar_value(a)),
        Formula::ValEq(s, c) => {
            Formula::delta(Formula::iff(desugar_value(s), Formula::constant(c.clone())))
        }
        Formula::ValGt(s, c) => Formula::not(Formula::delta(Formula::implies(
            desugar_value(s),
            Formula::constant(c.clone()),
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::LanguageTag::*;
    use super::*;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn half() -> TruthValue {
        TruthValue::new(1, 2).unwrap()
    }

    #[test]
    fn subformula_examples() {
        let p = Formula::atom("p");
        assert_eq!(subformulas(&p), BTreeSet::from([p.clone()]));
        let pq = f("p -> q");
        assert_eq!(
            subformulas(&pq),
            BTreeSet::from([p.clone(), f("q"), pq.clone()])
        );
        let lam = Formula::val_eq(f("q"), TruthValue::ONE);
        let ann = Formula::announce(lam.clone(), p.clone());
        assert_eq!(
            subformulas(&ann),
            BTreeSet::from([ann.clone(), lam, f("q"), p])
        );
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify(&f("p -> q")),
            BTreeSet::from([LangG, LangKDeltaQ, LangFPA, LangFPADeltaQ])
        );
        assert_eq!(
            classify(&f("D p")),
            BTreeSet::from([LangKDeltaQ, LangFPADeltaQ])
        );
        let v = classify(&f("V(p)=1/2"));
        assert!(v.contains(&LangFPAValue));
        assert!(!v.contains(&LangFPA));
        assert!(!v.contains(&LangKDeltaQ));
        assert_eq!(
            classify(&f("[V(p)>1/2] K{a} q")),
            BTreeSet::from([LangFPA, LangFPADeltaQ])
        );
        assert_eq!(classify(&f("[D p] q")), BTreeSet::from([LangFPADeltaQ]));
        // a bare atom is not a legal announcement body
        assert!(classify(&f("[p] q")).is_empty());
        assert_eq!(
            classify(&f("#1/2 -> p")),
            BTreeSet::from([LangKDeltaQ, LangFPADeltaQ])
        );
    }

    #[test]
    fn desugar_examples() {
        let c = Formula::Constant(half());
        assert_eq!(
            desugar_value(&Formula::val_eq(f("p"), half())),
            Formula::delta(Formula::and(
                Formula::implies(f("p"), c.clone()),
                Formula::implies(c.clone(), f("p"))
            ))
        );
        assert_eq!(
            desugar_value(&Formula::val_gt(f("p"), half())),
            Formula::implies(Formula::delta(Formula::implies(f("p"), c)), Formula::Bottom)
        );
        let plain = f("K{a} (p & D q) -> #1/3");
        assert_eq!(desugar_value(&plain), plain);
        // endpoints become bot / top
        assert_eq!(
            desugar_value(&f("V(p)>0")),
            Formula::not(Formula::delta(Formula::implies(f("p"), Formula::Bottom)))
        );
        assert_eq!(
            desugar_value(&f("V(p)=1")),
            Formula::delta(Formula::iff(f("p"), Formula::top()))
        );
    }

    #[test]
    fn agent_names() {
        assert!(AgentId::new("a_1").is_some());
        assert!(AgentId::new("").is_none());
        assert!(AgentId::new("a-b").is_none());
        assert!(is_atom_name("p1"));
        assert!(!is_atom_name("P"));
        assert!(!is_atom_name("bot"));
    }
}
