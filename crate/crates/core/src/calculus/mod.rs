//! Axiom schemas of the announcement calculus and a line-by-line proof checker.
//!
//! Schemas are written in the ordinary formula syntax, with declared atom
//! names standing for metavariables:
//!
//! ```
//! use goedel_pal::calculus::{Kind, Schema};
//! let g = Schema::new("G", "phi -> phi & phi", &[("phi", Kind::Formula)]).unwrap();
//! ```

mod file;
mod proof;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{self, TruthValue};
use crate::syntax::{is_announcement_body, parse, AgentId, Formula, ParseError};

pub use file::{parse_proof, ProofParseError};
pub use proof::{
    audit_soundness, check_proof, AuditEntry, AuditReport, CheckOptions, Justification, Proof,
    ProofLine, ProofVerdict, RejectReason,
};

/// What a metavariable ranges over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kind {
    Formula,
    /// Announcement bodies (value formulas and their relatives).
    Body,
    /// Propositional atoms.
    Atom,
    /// Truth constants, with `bot` and `top` standing for 0 and 1.
    Constant,
    /// A constant determined by other constant metavariables.
    ConstOf(ConstOp),
    Agent,
}

/// Side conditions computing one constant from others.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstOp {
    Tnorm(String, String),
    Residuum(String, String),
    Delta(String),
}

impl ConstOp {
    fn args(&self) -> Vec<&str> {
        match self {
            ConstOp::Tnorm(a, b) | ConstOp::Residuum(a, b) => vec![a, b],
            ConstOp::Delta(a) => vec![a],
        }
    }

    fn eval(&self, subst: &Substitution) -> Option<TruthValue> {
        let get = |n: &str| match subst.get(n) {
            Some(Binding::Value(v)) => Some(v.clone()),
            _ => None,
        };
        Some(match self {
            ConstOp::Tnorm(a, b) => algebra::tnorm(&get(a)?, &get(b)?),
            ConstOp::Residuum(a, b) => algebra::residuum(&get(a)?, &get(b)?),
            ConstOp::Delta(a) => algebra::delta(&get(a)?),
        })
    }
}

/// The value assigned to a metavariable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Binding {
    Formula(Formula),
    Agent(AgentId),
    Value(TruthValue),
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::Formula(g) => write!(f, "{}", crate::syntax::print_bare(g)),
            Binding::Agent(a) => write!(f, "{a}"),
            Binding::Value(v) => write!(f, "{v}"),
        }
    }
}

pub type Substitution = BTreeMap<String, Binding>;

/// The value of a constant formula: `bot`, `top` or a truth constant.
pub fn constant_value(f: &Formula) -> Option<TruthValue> {
    match f {
        Formula::Bottom => Some(TruthValue::ZERO),
        Formula::Constant(c) => Some(c.clone()),
        _ if *f == Formula::top() => Some(TruthValue::ONE),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum AgentPat {
    Lit(AgentId),
    Var(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Pattern {
    Bottom,
    Atom(String),
    Constant(TruthValue),
    /// Formula, body or atom metavariable.
    Var(String),
    /// Constant metavariable, including computed ones.
    ConstVar(String),
    And(Box<Pattern>, Box<Pattern>),
    Implies(Box<Pattern>, Box<Pattern>),
    Delta(Box<Pattern>),
    Know(AgentPat, Box<Pattern>),
    Announce(Box<Pattern>, Box<Pattern>),
    ValEq(Box<Pattern>, TruthValue),
    ValGt(Box<Pattern>, TruthValue),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("schema text: {0}")]
    Parse(#[from] ParseError),
    #[error("metavariable `{0}` is declared twice")]
    DuplicateVar(String),
    #[error("metavariable `{0}` is declared but does not occur in the pattern")]
    UnusedVar(String),
    #[error("side condition of `{var}` refers to `{arg}`, which is not a constant metavariable")]
    BadSideCondition { var: String, arg: String },
    #[error("metavariable `{0}` has the wrong kind for its position")]
    Misplaced(String),
    #[error("a schema named `{0}` is already registered")]
    DuplicateSchema(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstantiateError {
    #[error("no value given for `{0}`")]
    Missing(String),
    #[error("`{name}` must be {expected}, got `{found}`")]
    Kind {
        name: String,
        expected: &'static str,
        found: String,
    },
    #[error("side condition on `{name}` fails: expected {expected}, got {found}")]
    SideCondition {
        name: String,
        expected: TruthValue,
        found: TruthValue,
    },
    #[error("`{0}` is not a metavariable of the schema")]
    Unknown(String),
}

/// An axiom schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    name: String,
    text: String,
    vars: Vec<(String, Kind)>,
    pattern: Pattern,
    conjectural: bool,
}

impl Schema {
    pub fn new(name: &str, text: &str, vars: &[(&str, Kind)]) -> Result<Self, SchemaError> {
        let mut decls: BTreeMap<&str, &Kind> = BTreeMap::new();
        for (n, k) in vars {
            if decls.insert(n, k).is_some() {
                return Err(SchemaError::DuplicateVar(n.to_string()));
            }
        }
        for (n, k) in vars {
            if let Kind::ConstOf(op) = k {
                for a in op.args() {
                    if decls.get(a) != Some(&&Kind::Constant) {
                        return Err(SchemaError::BadSideCondition {
                            var: n.to_string(),
                            arg: a.to_string(),
                        });
                    }
                }
            }
        }
        let formula = parse(text)?;
        let pattern = to_pattern(&formula, &decls)?;
        let schema = Schema {
            name: name.to_string(),
            text: text.to_string(),
            vars: vars
                .iter()
                .map(|(n, k)| (n.to_string(), k.clone()))
                .collect(),
            pattern,
            conjectural: false,
        };
        for (n, _) in &schema.vars {
            if !schema.pattern_mentions(n) {
                return Err(SchemaError::UnusedVar(n.clone()));
            }
        }
        Ok(schema)
    }

    pub fn conjectural(mut self) -> Self {
        self.conjectural = true;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn vars(&self) -> &[(String, Kind)] {
        &self.vars
    }

    /// Whether the schema's validity is only conjectured.
    pub fn is_conjectural(&self) -> bool {
        self.conjectural
    }

    pub fn kind(&self, var: &str) -> Option<&Kind> {
        self.vars.iter().find(|(n, _)| n == var).map(|(_, k)| k)
    }

    fn pattern_mentions(&self, var: &str) -> bool {
        fn go(p: &Pattern, v: &str) -> bool {
            match p {
                Pattern::Var(n) | Pattern::ConstVar(n) => n == v,
                Pattern::Bottom | Pattern::Atom(_) | Pattern::Constant(_) => false,
                Pattern::And(a, b) | Pattern::Implies(a, b) | Pattern::Announce(a, b) => {
                    go(a, v) || go(b, v)
                }
                Pattern::Know(ag, a) => matches!(ag, AgentPat::Var(n) if n == v) || go(a, v),
                Pattern::Delta(a) | Pattern::ValEq(a, _) | Pattern::ValGt(a, _) => go(a, v),
            }
        }
        go(&self.pattern, var)
    }
}

fn to_pattern(f: &Formula, decls: &BTreeMap<&str, &Kind>) -> Result<Pattern, SchemaError> {
    let b = |g: &Formula| to_pattern(g, decls).map(Box::new);
    Ok(match f {
        Formula::Bottom => Pattern::Bottom,
        Formula::Atom(n) => match decls.get(n.as_str()) {
            None => Pattern::Atom(n.clone()),
            Some(Kind::Formula | Kind::Body | Kind::Atom) => Pattern::Var(n.clone()),
            Some(Kind::Constant | Kind::ConstOf(_)) => Pattern::ConstVar(n.clone()),
            Some(Kind::Agent) => return Err(SchemaError::Misplaced(n.clone())),
        },
        Formula::Constant(c) => Pattern::Constant(c.clone()),
        Formula::And(x, y) => Pattern::And(b(x)?, b(y)?),
        Formula::Implies(x, y) => Pattern::Implies(b(x)?, b(y)?),
        Formula::Delta(x) => Pattern::Delta(b(x)?),
        Formula::Know(ag, x) => {
            let ap = match decls.get(ag.as_str()) {
                Some(Kind::Agent) => AgentPat::Var(ag.as_str().to_string()),
                Some(_) => return Err(SchemaError::Misplaced(ag.as_str().to_string())),
                None => AgentPat::Lit(ag.clone()),
            };
            Pattern::Know(ap, b(x)?)
        }
        Formula::Announce(x, y) => Pattern::Announce(b(x)?, b(y)?),
        Formula::ValEq(x, c) => Pattern::ValEq(b(x)?, c.clone()),
        Formula::ValGt(x, c) => Pattern::ValGt(b(x)?, c.clone()),
    })
}

fn kind_name(k: &Kind) -> &'static str {
    match k {
        Kind::Formula => "a formula",
        Kind::Body => "an announcement body",
        Kind::Atom => "an atom",
        Kind::Constant | Kind::ConstOf(_) => "a truth constant",
        Kind::Agent => "an agent",
    }
}

/// Converts `b` into the binding shape expected for `kind`, if possible.
/// Rationals become constant formulas, atoms become agent names, constant
/// formulas become values.
pub fn coerce(kind: &Kind, b: &Binding) -> Option<Binding> {
    match (kind, b) {
        (Kind::Formula, Binding::Formula(_)) => Some(b.clone()),
        (Kind::Formula, Binding::Value(v)) => Some(Binding::Formula(Formula::constant(v.clone()))),
        (Kind::Body, Binding::Formula(f)) if is_announcement_body(f) => Some(b.clone()),
        (Kind::Atom, Binding::Formula(Formula::Atom(_))) => Some(b.clone()),
        (Kind::Constant | Kind::ConstOf(_), Binding::Value(_)) => Some(b.clone()),
        (Kind::Constant | Kind::ConstOf(_), Binding::Formula(f)) => {
            constant_value(f).map(Binding::Value)
        }
        (Kind::Agent, Binding::Agent(_)) => Some(b.clone()),
        (Kind::Agent, Binding::Formula(Formula::Atom(n))) => {
            AgentId::new(n.clone()).map(Binding::Agent)
        }
        _ => None,
    }
}

struct Matcher<'s> {
    schema: &'s Schema,
    subst: Substitution,
}

impl Matcher<'_> {
    fn bind(&mut self, name: &str, value: Binding) -> bool {
        match self.subst.get(name) {
            Some(old) => *old == value,
            None => {
                self.subst.insert(name.to_string(), value);
                true
            }
        }
    }

    fn go(&mut self, p: &Pattern, f: &Formula) -> bool {
        match (p, f) {
            (Pattern::Var(n), _) => {
                let kind = self.schema.kind(n).expect("declared");
                match coerce(kind, &Binding::Formula(f.clone())) {
                    Some(b) => self.bind(n, b),
                    None => false,
                }
            }
            (Pattern::ConstVar(n), _) => match constant_value(f) {
                Some(v) => self.bind(n, Binding::Value(v)),
                None => false,
            },
            (Pattern::Bottom, Formula::Bottom) => true,
            (Pattern::Atom(a), Formula::Atom(b)) => a == b,
            (Pattern::Constant(a), Formula::Constant(b)) => a == b,
            (Pattern::And(a, b), Formula::And(x, y))
            | (Pattern::Implies(a, b), Formula::Implies(x, y))
            | (Pattern::Announce(a, b), Formula::Announce(x, y)) => self.go(a, x) && self.go(b, y),
            (Pattern::Delta(a), Formula::Delta(x)) => self.go(a, x),
            (Pattern::Know(ap, a), Formula::Know(ag, x)) => {
                let ok = match ap {
                    AgentPat::Lit(l) => l == ag,
                    AgentPat::Var(n) => self.bind(n, Binding::Agent(ag.clone())),
                };
                ok && self.go(a, x)
            }
            (Pattern::ValEq(a, c), Formula::ValEq(x, d))
            | (Pattern::ValGt(a, c), Formula::ValGt(x, d)) => c == d && self.go(a, x),
            _ => false,
        }
    }
}

fn side_conditions(schema: &Schema, subst: &Substitution) -> Result<(), InstantiateError> {
    for (n, k) in &schema.vars {
        if let Kind::ConstOf(op) = k {
            let expected = op
                .eval(subst)
                .ok_or_else(|| InstantiateError::Missing(op.args()[0].to_string()))?;
            match subst.get(n) {
                Some(Binding::Value(found)) if *found != expected => {
                    return Err(InstantiateError::SideCondition {
                        name: n.clone(),
                        expected,
                        found: found.clone(),
                    })
                }
                _ => {}
            }
        }
    }
    Ok(())
}

/// Matches `f` against the schema. Metavariables are bound left to right in
/// pre-order; repeated occurrences must agree. Side conditions are checked
/// after all bindings are known.
pub fn match_schema(schema: &Schema, f: &Formula) -> Option<Substitution> {
    let mut m = Matcher {
        schema,
        subst: Substitution::new(),
    };
    if !m.go(&schema.pattern, f) {
        return None;
    }
    side_conditions(schema, &m.subst).ok()?;
    Some(m.subst)
}

/// Applies `subst` to the schema pattern. Computed constants may be omitted;
/// if given, they must agree with their side condition.
pub fn instantiate(schema: &Schema, subst: &Substitution) -> Result<Formula, InstantiateError> {
    let mut full = Substitution::new();
    for name in subst.keys() {
        if schema.kind(name).is_none() {
            return Err(InstantiateError::Unknown(name.clone()));
        }
    }
    for (n, k) in &schema.vars {
        if let Some(b) = subst.get(n) {
            let c = coerce(k, b).ok_or_else(|| InstantiateError::Kind {
                name: n.clone(),
                expected: kind_name(k),
                found: b.to_string(),
            })?;
            full.insert(n.clone(), c);
        } else if !matches!(k, Kind::ConstOf(_)) {
            return Err(InstantiateError::Missing(n.clone()));
        }
    }
    side_conditions(schema, &full)?;
    for (n, k) in &schema.vars {
        if let Kind::ConstOf(op) = k {
            let v = op.eval(&full).expect("checked above");
            full.insert(n.clone(), Binding::Value(v));
        }
    }
    Ok(build(&schema.pattern, &full))
}

fn build(p: &Pattern, s: &Substitution) -> Formula {
    let b = |q: &Pattern| build(q, s);
    match p {
        Pattern::Bottom => Formula::Bottom,
        Pattern::Atom(n) => Formula::atom(n.clone()),
        Pattern::Constant(c) => Formula::Constant(c.clone()),
        Pattern::Var(n) => match &s[n] {
            Binding::Formula(f) => f.clone(),
            _ => unreachable!("coerced"),
        },
        Pattern::ConstVar(n) => match &s[n] {
            Binding::Value(v) => Formula::constant(v.clone()),
            _ => unreachable!("coerced"),
        },
        Pattern::And(x, y) => Formula::and(b(x), b(y)),
        Pattern::Implies(x, y) => Formula::implies(b(x), b(y)),
        Pattern::Delta(x) => Formula::delta(b(x)),
        Pattern::Know(ap, x) => {
            let ag = match ap {
                AgentPat::Lit(l) => l.clone(),
                AgentPat::Var(n) => match &s[n] {
                    Binding::Agent(a) => a.clone(),
                    _ => unreachable!("coerced"),
                },
            };
            Formula::know(ag, b(x))
        }
        Pattern::Announce(x, y) => Formula::announce(b(x), b(y)),
        Pattern::ValEq(x, c) => Formula::val_eq(b(x), c.clone()),
        Pattern::ValGt(x, c) => Formula::val_gt(b(x), c.clone()),
    }
}

/// Candidate values for enumerating schema instances.
#[derive(Debug, Clone, Default)]
pub struct InstancePools {
    pub formulas: Vec<Formula>,
    pub bodies: Vec<Formula>,
    pub constants: Vec<TruthValue>,
    pub agents: Vec<AgentId>,
    /// Per-metavariable overrides, e.g. a separate pool for `mu`.
    pub overrides: BTreeMap<String, Vec<Binding>>,
}

impl InstancePools {
    fn candidates(&self, name: &str, kind: &Kind) -> Vec<Binding> {
        if let Some(v) = self.overrides.get(name) {
            return v.iter().filter_map(|b| coerce(kind, b)).collect();
        }
        let fs = |v: &[Formula]| v.iter().cloned().map(Binding::Formula).collect::<Vec<_>>();
        let raw = match kind {
            Kind::Formula | Kind::Atom => fs(&self.formulas),
            Kind::Body => fs(&self.bodies),
            Kind::Constant => self.constants.iter().cloned().map(Binding::Value).collect(),
            Kind::Agent => self.agents.iter().cloned().map(Binding::Agent).collect(),
            Kind::ConstOf(_) => return vec![],
        };
        let mut out: Vec<Binding> = raw.iter().filter_map(|b| coerce(kind, b)).collect();
        out.dedup();
        out
    }
}

impl Schema {
    /// Every instance over the pools, in lexicographic order of the
    /// declared metavariables.
    pub fn instances(&self, pools: &InstancePools) -> Vec<Formula> {
        let free: Vec<(&String, Vec<Binding>)> = self
            .vars
            .iter()
            .filter(|(_, k)| !matches!(k, Kind::ConstOf(_)))
            .map(|(n, k)| (n, pools.candidates(n, k)))
            .collect();
        let mut out = Vec::new();
        let mut subst = Substitution::new();
        fn rec(
            schema: &Schema,
            free: &[(&String, Vec<Binding>)],
            subst: &mut Substitution,
            out: &mut Vec<Formula>,
        ) {
            match free.split_first() {
                None => out.push(instantiate(schema, subst).expect("pool values are coerced")),
                Some(((name, cands), rest)) => {
                    for c in cands {
                        subst.insert((*name).clone(), c.clone());
                        rec(schema, rest, subst, out);
                    }
                    subst.remove(*name);
                }
            }
        }
        rec(self, &free, &mut subst, &mut out);
        out
    }
}

/// A named collection of schemas.
#[derive(Debug, Clone, Default)]
pub struct SchemaDb {
    schemas: Vec<Schema>,
}

impl SchemaDb {
    pub fn empty() -> Self {
        SchemaDb::default()
    }

    /// The full axiom set: the BL+G base with the corrected residuation
    /// pair, the modal axioms, the delta and constant axioms, the two
    /// conjectured modal/delta axioms, and the eight reduction axioms.
    pub fn standard() -> Self {
        use Kind::*;
        let (phi, psi, chi) = (("phi", Formula), ("psi", Formula), ("chi", Formula));
        let (lam, mu, a) = (("lam", Body), ("mu", Body), ("a", Agent));
        let (c, d) = (("c", Constant), ("d", Constant));
        let e = |op| ("e", ConstOf(op));
        let cd = || ("c".to_string(), "d".to_string());
        let s = |n, t, v: &[(&str, Kind)]| Schema::new(n, t, v).expect("built-in schema");
        let schemas = vec![
            s(
                "BL1",
                "(phi -> psi) -> ((psi -> chi) -> (phi -> chi))",
                &[phi.clone(), psi.clone(), chi.clone()],
            ),
            s(
                "BL2",
                "phi & (phi -> psi) -> psi & (psi -> phi)",
                &[phi.clone(), psi.clone()],
            ),
            s(
                "BL3a",
                "(phi & psi -> chi) -> (phi -> (psi -> chi))",
                &[phi.clone(), psi.clone(), chi.clone()],
            ),
            s(
                "BL3b",
                "(phi -> (psi -> chi)) -> (phi & psi -> chi)",
                &[phi.clone(), psi.clone(), chi.clone()],
            ),
            s(
                "BL4",
                "((phi -> psi) -> chi) -> (((psi -> phi) -> chi) -> chi)",
                &[phi.clone(), psi.clone(), chi.clone()],
            ),
            s("BL5", "bot -> phi", std::slice::from_ref(&phi)),
            s("G", "phi -> phi & phi", std::slice::from_ref(&phi)),
            s(
                "K",
                "K{a} (phi -> psi) -> (K{a} phi -> K{a} psi)",
                &[phi.clone(), psi.clone(), a.clone()],
            ),
            s("Z", "~~K{a} phi -> K{a} ~~phi", &[phi.clone(), a.clone()]),
            s(
                "BK1",
                "c & d <-> e",
                &[c.clone(), d.clone(), e(ConstOp::Tnorm(cd().0, cd().1))],
            ),
            s(
                "BK2",
                "(c -> d) <-> e",
                &[c.clone(), d.clone(), e(ConstOp::Residuum(cd().0, cd().1))],
            ),
            s("D1", "D phi | ~D phi", std::slice::from_ref(&phi)),
            s(
                "D2",
                "D (phi | psi) -> D phi | D psi",
                &[phi.clone(), psi.clone()],
            ),
            s("D3", "D phi -> phi", std::slice::from_ref(&phi)),
            s("D4", "D phi -> D D phi", std::slice::from_ref(&phi)),
            s(
                "D5",
                "D (phi -> psi) -> (D phi -> D psi)",
                &[phi.clone(), psi.clone()],
            ),
            s(
                "DC",
                "D c <-> e",
                &[c.clone(), e(ConstOp::Delta("c".into()))],
            ),
            s("KD", "D K{a} phi -> K{a} D phi", &[phi.clone(), a.clone()]).conjectural(),
            s(
                "KC",
                "K{a} (c -> phi) <-> (c -> K{a} phi)",
                &[c.clone(), phi.clone(), a.clone()],
            )
            .conjectural(),
            s(
                "PA1",
                "[lam]bot <-> (lam -> bot)",
                std::slice::from_ref(&lam),
            ),
            s("PA2", "[lam]p <-> (lam -> p)", &[lam.clone(), ("p", Atom)]),
            s(
                "PA3",
                "[lam](phi & psi) <-> ([lam]phi & [lam]psi)",
                &[lam.clone(), phi.clone(), psi.clone()],
            ),
            s(
                "PA4",
                "[lam](phi -> psi) <-> ([lam]phi -> [lam]psi)",
                &[lam.clone(), phi.clone(), psi.clone()],
            ),
            s(
                "PA5",
                "[lam]K{a} phi <-> (lam -> K{a} [lam]phi)",
                &[lam.clone(), phi.clone(), a.clone()],
            ),
            s(
                "PA6",
                "[lam][mu]phi <-> [lam & [lam]mu]phi",
                &[lam.clone(), mu, phi.clone()],
            ),
            s(
                "PA7",
                "[lam]D phi <-> (lam -> D [lam]phi)",
                &[lam.clone(), phi.clone()],
            ),
            s("PA8", "[lam]c <-> (lam -> c)", &[lam, c]),
        ];
        SchemaDb { schemas }
    }

    pub fn register(&mut self, schema: Schema) -> Result<(), SchemaError> {
        if self.get(schema.name()).is_some() {
            return Err(SchemaError::DuplicateSchema(schema.name().to_string()));
        }
        self.schemas.push(schema);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Schema> {
        self.schemas.iter().find(|s| s.name == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Schema> {
        self.schemas.iter()
    }

    pub fn len(&self) -> usize {
        self.schemas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.schemas.is_empty()
    }

    /// The first schema (in database order) matching `f`.
    pub fn find_match(&self, f: &Formula) -> Option<(&Schema, Substitution)> {
        self.schemas
            .iter()
            .find_map(|s| match_schema(s, f).map(|m| (s, m)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn v(s: &str) -> TruthValue {
        s.parse().unwrap()
    }

    #[test]
    fn match_examples() {
        let db = SchemaDb::standard();
        let g = db.get("G").unwrap();
        let m = match_schema(g, &f("(p -> q) -> (p -> q) & (p -> q)")).unwrap();
        assert_eq!(
            m,
            Substitution::from([("phi".into(), Binding::Formula(f("p -> q")))])
        );

        let bk1 = db.get("BK1").unwrap();
        let m = match_schema(bk1, &f("#1/3 & #1/2 <-> #1/3")).unwrap();
        assert_eq!(m["c"], Binding::Value(v("1/3")));
        assert_eq!(m["d"], Binding::Value(v("1/2")));
        assert_eq!(m["e"], Binding::Value(v("1/3")));
        // side condition violated
        assert!(match_schema(bk1, &f("#1/3 & #1/2 <-> #1/2")).is_none());

        assert!(match_schema(db.get("K").unwrap(), &f("p -> q")).is_none());
        // repeated metavariables must agree
        assert!(match_schema(g, &f("p -> q & p")).is_none());
    }

    #[test]
    fn constants_and_endpoints() {
        let db = SchemaDb::standard();
        let dc = db.get("DC").unwrap();
        assert!(match_schema(dc, &f("D #1/2 <-> bot")).is_some());
        assert!(match_schema(dc, &f("D #1/2 <-> top")).is_none());
        assert!(match_schema(dc, &f("D top <-> top")).is_some());
        let bk2 = db.get("BK2").unwrap();
        let m = match_schema(bk2, &f("(#1/3 -> #1/2) <-> top")).unwrap();
        assert_eq!(m["e"], Binding::Value(TruthValue::ONE));
        assert!(match_schema(bk2, &f("(#1/2 -> #1/3) <-> #1/3")).is_some());
    }

    #[test]
    fn kinds_are_enforced() {
        let db = SchemaDb::standard();
        let pa2 = db.get("PA2").unwrap();
        assert!(match_schema(pa2, &f("[V(p)>0]q <-> (V(p)>0 -> q)")).is_some());
        // the announced formula must be an atom
        assert!(match_schema(pa2, &f("[V(p)>0](q & q) <-> (V(p)>0 -> q & q)")).is_none());
        // the announcement must be a body
        assert!(match_schema(pa2, &f("[p]q <-> (p -> q)")).is_none());
    }

    #[test]
    fn match_then_instantiate_is_identity() {
        let db = SchemaDb::standard();
        for s in [
            "[V(p)=1/2 & V(q)>0] K{b} (p -> q) <-> (V(p)=1/2 & V(q)>0 -> K{b} [V(p)=1/2 & V(q)>0](p -> q))",
            "D (p | D q) -> D p | D D q",
            "#1/4 & #2/3 <-> #1/4",
            "K{a} (#1/2 -> p) <-> (#1/2 -> K{a} p)",
        ] {
            let g = f(s);
            let (schema, m) = db.find_match(&g).unwrap_or_else(|| panic!("{s}"));
            assert_eq!(instantiate(schema, &m).unwrap(), g, "{s}");
        }
    }

    #[test]
    fn instantiate_errors() {
        let db = SchemaDb::standard();
        let bk1 = db.get("BK1").unwrap();
        let mut s = Substitution::from([
            ("c".into(), Binding::Value(v("1/3"))),
            ("d".into(), Binding::Formula(f("#1/2"))),
        ]);
        assert_eq!(instantiate(bk1, &s).unwrap(), f("#1/3 & #1/2 <-> #1/3"));
        s.insert("e".into(), Binding::Value(v("1/2")));
        assert!(matches!(
            instantiate(bk1, &s),
            Err(InstantiateError::SideCondition { .. })
        ));
        let pa2 = db.get("PA2").unwrap();
        let s = Substitution::from([
            ("lam".into(), Binding::Formula(f("V(p)>0"))),
            ("p".into(), Binding::Formula(f("p & q"))),
        ]);
        assert!(matches!(
            instantiate(pa2, &s),
            Err(InstantiateError::Kind { .. })
        ));
        assert!(matches!(
            instantiate(pa2, &Substitution::new()),
            Err(InstantiateError::Missing(_))
        ));
        let s = Substitution::from([("zeta".into(), Binding::Formula(f("p")))]);
        assert!(matches!(
            instantiate(pa2, &s),
            Err(InstantiateError::Unknown(_))
        ));
    }

    #[test]
    fn schema_construction_errors() {
        assert!(matches!(
            Schema::new(
                "X",
                "phi -> phi",
                &[("phi", Kind::Formula), ("psi", Kind::Formula)]
            ),
            Err(SchemaError::UnusedVar(_))
        ));
        assert!(matches!(
            Schema::new(
                "X",
                "e",
                &[("e", Kind::ConstOf(ConstOp::Delta("c".into())))]
            ),
            Err(SchemaError::BadSideCondition { .. })
        ));
        assert!(matches!(
            Schema::new("X", "K{phi} p", &[("phi", Kind::Formula)]),
            Err(SchemaError::Misplaced(_))
        ));
        let mut db = SchemaDb::standard();
        let g = db.get("G").unwrap().clone();
        assert!(matches!(
            db.register(g),
            Err(SchemaError::DuplicateSchema(_))
        ));
        assert_eq!(db.iter().filter(|s| s.is_conjectural()).count(), 2);
    }

    #[test]
    fn instances() {
        let db = SchemaDb::standard();
        let pools = InstancePools {
            formulas: vec![f("p"), f("q"), f("D p"), f("#1/2")],
            bodies: vec![f("V(p)>0")],
            constants: vec![TruthValue::ZERO, v("1/2"), TruthValue::ONE],
            agents: vec![AgentId::new("a").unwrap()],
            overrides: BTreeMap::new(),
        };
        assert_eq!(db.get("BL1").unwrap().instances(&pools).len(), 64);
        assert_eq!(db.get("PA2").unwrap().instances(&pools).len(), 2);
        assert_eq!(db.get("BK1").unwrap().instances(&pools).len(), 9);
        assert_eq!(db.get("PA8").unwrap().instances(&pools).len(), 3);
    }
}
