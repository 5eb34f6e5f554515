//! Announcement elimination.
//!
//! [`translate`] pushes announcements inward with one rewrite per head
//! constructor of the announced formula until none remain, and expands value
//! formulas into delta/constant form. [`complexity`] is the measure that
//! strictly decreases under every announcement rewrite, which is what makes
//! the recursion terminate; [`translate_trace`] records each rewrite together
//! with the measure before and after.

use std::fmt;

use crate::syntax::{desugar_value, subformulas, Formula};

/// Complexity measure on formulas. Value formulas are measured through their
/// delta/constant expansion.
pub fn complexity(f: &Formula) -> u128 {
    measure(f).value
}

/// A complexity value and whether value formulas had to be expanded first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Measure {
    pub value: u128,
    pub desugared: bool,
}

pub fn measure(f: &Formula) -> Measure {
    let desugared = f.has_value_formula();
    let value = if desugared {
        raw_complexity(&desugar_value(f))
    } else {
        raw_complexity(f)
    };
    Measure { value, desugared }
}

fn raw_complexity(f: &Formula) -> u128 {
    match f {
        Formula::Bottom | Formula::Atom(_) | Formula::Constant(_) => 1,
        Formula::And(a, b) | Formula::Implies(a, b) => 1 + raw_complexity(a).max(raw_complexity(b)),
        Formula::Know(_, a) | Formula::Delta(a) => 1 + raw_complexity(a),
        Formula::Announce(l, a) => (4 + raw_complexity(l)).saturating_mul(raw_complexity(a)),
        Formula::ValEq(..) | Formula::ValGt(..) => raw_complexity(&desugar_value(f)),
    }
}

/// The rewrite clauses of the translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// `[l]bot` to `l -> bot`
    Pa1,
    /// `[l]p` to `l -> p`
    Pa2,
    /// `[l](a & b)` to `[l]a & [l]b`
    Pa3,
    /// `[l](a -> b)` to `[l]a -> [l]b`
    Pa4,
    /// `[l]K a` to `l -> K [l]a`
    Pa5,
    /// `[l][m]a` to `[l & [l]m]a`
    Pa6,
    /// `[l]D a` to `l -> D [l]a`
    Pa7,
    /// `[l]c` to `l -> c`
    Pa8,
    /// `V(a)=c` to `D(a <-> c)`
    ValEq,
    /// `V(a)>c` to `~D(a -> c)`
    ValGt,
}

impl Rule {
    pub fn is_announcement(self) -> bool {
        !matches!(self, Rule::ValEq | Rule::ValGt)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Pa1 => "PA1",
            Rule::Pa2 => "PA2",
            Rule::Pa3 => "PA3",
            Rule::Pa4 => "PA4",
            Rule::Pa5 => "PA5",
            Rule::Pa6 => "PA6",
            Rule::Pa7 => "PA7",
            Rule::Pa8 => "PA8",
            Rule::ValEq => "VAL=",
            Rule::ValGt => "VAL>",
        };
        f.write_str(s)
    }
}

/// One rewrite of a redex during translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub rule: Rule,
    pub before: Formula,
    pub after: Formula,
    pub complexity_before: u128,
    pub complexity_after: u128,
}

impl ReductionStep {
    /// Announcement rewrites strictly decrease the measure; value expansions
    /// must not increase it.
    pub fn respects_measure(&self) -> bool {
        if self.rule.is_announcement() {
            self.complexity_after < self.complexity_before
        } else {
            self.complexity_after <= self.complexity_before
        }
    }
}

impl fmt::Display for ReductionStep {
    /// Tab-separated: rule, measure before, measure after, before, after.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}",
            self.rule, self.complexity_before, self.complexity_after, self.before, self.after
        )
    }
}

/// Rewrites `[announcement] inner` by the clause selected from the head of
/// `inner` after value expansion.
pub fn rewrite_announcement(announcement: &Formula, inner: &Formula) -> (Rule, Formula) {
    let l = announcement.clone();
    let ann = |g: &Formula| Formula::announce(l.clone(), g.clone());
    match desugar_value(inner) {
        Formula::Bottom => (Rule::Pa1, Formula::implies(l, Formula::Bottom)),
        p @ Formula::Atom(_) => (Rule::Pa2, Formula::implies(l, p)),
        Formula::And(a, b) => (Rule::Pa3, Formula::and(ann(&a), ann(&b))),
        Formula::Implies(a, b) => (Rule::Pa4, Formula::implies(ann(&a), ann(&b))),
        Formula::Know(ag, a) => (
            Rule::Pa5,
            Formula::implies(l.clone(), Formula::know(ag, ann(&a))),
        ),
        Formula::Announce(m, a) => (
            Rule::Pa6,
            Formula::announce(Formula::and(l.clone(), ann(&m)), *a),
        ),
        Formula::Delta(a) => (
            Rule::Pa7,
            Formula::implies(l.clone(), Formula::delta(ann(&a))),
        ),
        c @ Formula::Constant(_) => (Rule::Pa8, Formula::implies(l, c)),
        Formula::ValEq(..) | Formula::ValGt(..) => unreachable!("value formulas were expanded"),
    }
}

/// If `f` is a redex (an announcement or a value formula), its rewrite.
fn rewrite_redex(f: &Formula) -> Option<(Rule, Formula)> {
    match f {
        Formula::Announce(l, a) => Some(rewrite_announcement(l, a)),
        Formula::ValEq(..) => Some((Rule::ValEq, desugar_value_head(f))),
        Formula::ValGt(..) => Some((Rule::ValGt, desugar_value_head(f))),
        _ => None,
    }
}

// Expands only the outermost value node; the subject is left for the recursion.
fn desugar_value_head(f: &Formula) -> Formula {
    match f {
        Formula::ValEq(s, c) => {
            Formula::delta(Formula::iff((**s).clone(), Formula::constant(c.clone())))
        }
        Formula::ValGt(s, c) => Formula::not(Formula::delta(Formula::implies(
            (**s).clone(),
            Formula::constant(c.clone()),
        ))),
        _ => f.clone(),
    }
}

/// Eliminates all announcements and value formulas.
pub fn translate(f: &Formula) -> Formula {
    run(f, &mut None)
}

/// The sequence of rewrites performed by [`translate`], in order.
pub fn translate_trace(f: &Formula) -> Vec<ReductionStep> {
    let mut steps = Vec::new();
    run(f, &mut Some(&mut steps));
    steps
}

fn run(f: &Formula, trace: &mut Option<&mut Vec<ReductionStep>>) -> Formula {
    if let Some((rule, after)) = rewrite_redex(f) {
        if let Some(steps) = trace.as_deref_mut() {
            steps.push(ReductionStep {
                rule,
                complexity_before: complexity(f),
                complexity_after: complexity(&after),
                before: f.clone(),
                after: after.clone(),
            });
        }
        return run(&after, trace);
    }
    match f {
        Formula::Bottom | Formula::Atom(_) | Formula::Constant(_) => f.clone(),
        Formula::And(a, b) => {
            let a = run(a, trace);
            Formula::and(a, run(b, trace))
        }
        Formula::Implies(a, b) => {
            let a = run(a, trace);
            Formula::implies(a, run(b, trace))
        }
        Formula::Delta(a) => Formula::delta(run(a, trace)),
        Formula::Know(ag, a) => Formula::know(ag.clone(), run(a, trace)),
        Formula::Announce(..) | Formula::ValEq(..) | Formula::ValGt(..) => unreachable!(),
    }
}

/// Applies `step` at the first pre-order occurrence of its `before` formula.
pub fn apply_step(current: &Formula, step: &ReductionStep) -> Option<Formula> {
    fn go(f: &Formula, step: &ReductionStep, done: &mut bool) -> Formula {
        if *done {
            return f.clone();
        }
        if *f == step.before {
            *done = true;
            return step.after.clone();
        }
        match f {
            Formula::Bottom | Formula::Atom(_) | Formula::Constant(_) => f.clone(),
            Formula::And(a, b) => {
                let a = go(a, step, done);
                Formula::and(a, go(b, step, done))
            }
            Formula::Implies(a, b) => {
                let a = go(a, step, done);
                Formula::implies(a, go(b, step, done))
            }
            Formula::Announce(a, b) => {
                let a = go(a, step, done);
                Formula::announce(a, go(b, step, done))
            }
            Formula::Delta(a) => Formula::delta(go(a, step, done)),
            Formula::Know(ag, a) => Formula::know(ag.clone(), go(a, step, done)),
            Formula::ValEq(a, c) => Formula::val_eq(go(a, step, done), c.clone()),
            Formula::ValGt(a, c) => Formula::val_gt(go(a, step, done), c.clone()),
        }
    }
    let mut done = false;
    let out = go(current, step, &mut done);
    done.then_some(out)
}

/// Replays a trace from `f`; the result equals `translate(f)` for a trace
/// produced by [`translate_trace`].
pub fn replay(f: &Formula, steps: &[ReductionStep]) -> Option<Formula> {
    steps
        .iter()
        .try_fold(f.clone(), |cur, s| apply_step(&cur, s))
}

/// The inequalities of the measure lemma.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    /// `c(f) >= c(g)` for every subformula `g`.
    Subformula,
    /// `c([l]p) > c(l -> p)`
    Atom,
    /// `c([l]c) > c(l -> c)`
    Constant,
    /// `c([l]bot) > c(l -> bot)`
    Bottom,
    /// `c([l](a -> b)) > c([l]a -> [l]b)`
    Implies,
    /// `c([l](a & b)) > c([l]a & [l]b)`
    And,
    /// `c([l]K a) > c(l -> K [l]a)`
    Know,
    /// `c([l]D a) > c(l -> D [l]a)`
    Delta,
    /// `c([l][m]a) > c([l & [l]m]a)`
    Compose,
    /// `c(l) >= 4` for announcement bodies built from value formulas.
    BodyBound,
}

impl Property {
    pub fn label(self) -> &'static str {
        match self {
            Property::Subformula => "(i)",
            Property::Atom => "(ii)",
            Property::Constant => "(iii)",
            Property::Bottom => "(iv)",
            Property::Implies => "(v)",
            Property::And => "(vi)",
            Property::Know => "(vii)",
            Property::Delta => "(viii)",
            Property::Compose => "(ix)",
            Property::BodyBound => "(body)",
        }
    }

    fn strict(self) -> bool {
        !matches!(self, Property::Subformula | Property::BodyBound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureCheck {
    pub property: Property,
    pub subject: Formula,
    pub lhs: u128,
    pub rhs: u128,
    pub holds: bool,
}

impl fmt::Display for MeasureCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.property.strict() { ">" } else { ">=" };
        let mark = if self.holds { "ok" } else { "FAIL" };
        write!(
            f,
            "{:<7} {} {rel} {}  {mark}  {}",
            self.property.label(),
            self.lhs,
            self.rhs,
            self.subject
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureReport {
    /// Whether value formulas were expanded before measuring.
    pub desugared: bool,
    pub checks: Vec<MeasureCheck>,
}

impl MeasureReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &MeasureCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

fn check(property: Property, subject: &Formula, lhs: u128, rhs: u128) -> MeasureCheck {
    let holds = if property.strict() {
        lhs > rhs
    } else {
        lhs >= rhs
    };
    MeasureCheck {
        property,
        subject: subject.clone(),
        lhs,
        rhs,
        holds,
    }
}

fn is_constant_formula(f: &Formula) -> bool {
    matches!(f, Formula::Bottom | Formula::Constant(_)) || *f == Formula::top()
}

/// Bodies whose leaves are value formulas, before or after expansion.
fn value_built(f: &Formula) -> bool {
    match f {
        Formula::ValEq(..) | Formula::ValGt(..) => true,
        // D((s -> k) & (k -> s))
        Formula::Delta(inner) => match &**inner {
            Formula::And(x, y) => match (&**x, &**y) {
                (Formula::Implies(s, k), Formula::Implies(k2, s2)) => {
                    s == s2 && k == k2 && is_constant_formula(k)
                }
                _ => false,
            },
            _ => false,
        },
        Formula::Implies(a, b) if **b == Formula::Bottom => match &**a {
            // ~D(s -> k)
            Formula::Delta(inner) => {
                matches!(&**inner, Formula::Implies(_, k) if is_constant_formula(k))
                    || value_built(a)
            }
            _ => value_built(a),
        },
        Formula::And(a, b) | Formula::Implies(a, b) | Formula::Announce(a, b) => {
            value_built(a) && value_built(b)
        }
        Formula::Know(_, a) => value_built(a),
        _ => false,
    }
}

/// Evaluates every applicable measure inequality for `f`: (i) against all
/// subformulas, and the rewrite inequality for each announcement inside `f`.
pub fn check_measure_properties(f: &Formula) -> MeasureReport {
    let total = complexity(f);
    let mut checks = Vec::new();
    for g in subformulas(f) {
        checks.push(check(Property::Subformula, &g, total, complexity(&g)));
    }
    f.walk(&mut |g| {
        if let Formula::Announce(l, inner) = g {
            let (rule, after) = rewrite_announcement(l, inner);
            let property = match rule {
                Rule::Pa1 => Property::Bottom,
                Rule::Pa2 => Property::Atom,
                Rule::Pa3 => Property::And,
                Rule::Pa4 => Property::Implies,
                Rule::Pa5 => Property::Know,
                Rule::Pa6 => Property::Compose,
                Rule::Pa7 => Property::Delta,
                Rule::Pa8 => Property::Constant,
                Rule::ValEq | Rule::ValGt => unreachable!(),
            };
            checks.push(check(property, g, complexity(g), complexity(&after)));
            if value_built(l) {
                checks.push(check(Property::BodyBound, l, complexity(l), 4));
            }
        }
    });
    MeasureReport {
        desugared: f.has_value_formula(),
        checks,
    }
}
