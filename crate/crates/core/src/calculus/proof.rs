use std::fmt;

use crate::checker::{check_consequence, check_validity, CheckError, ModelSpaceParams, Verdict};
use crate::syntax::{AgentId, Formula};

use super::{instantiate, match_schema, InstantiateError, SchemaDb, Substitution};

/// How a proof line was obtained. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Premise(usize),
    /// Without a substitution the checker infers one by matching.
    Axiom {
        schema: String,
        substitution: Option<Substitution>,
    },
    /// `ModusPonens(i, j)`: line `j` is `line i -> this line`.
    ModusPonens(usize, usize),
    DeltaNecessitation(usize),
    KNecessitation(usize, AgentId),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Premise(k) => write!(f, "premise {k}"),
            Justification::Axiom {
                schema,
                substitution,
            } => {
                write!(f, "axiom {schema}")?;
                if let Some(s) = substitution {
                    let parts: Vec<String> = s.iter().map(|(k, v)| format!("{k} := {v}")).collect();
                    write!(f, " {{{}}}", parts.join(", "))?;
                }
                Ok(())
            }
            Justification::ModusPonens(i, j) => write!(f, "mp {i} {j}"),
            Justification::DeltaNecessitation(i) => write!(f, "dnec {i}"),
            Justification::KNecessitation(i, a) => write!(f, "knec {i} {a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Proof {
    pub premises: Vec<Formula>,
    pub lines: Vec<ProofLine>,
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.premises.is_empty() {
            writeln!(f, "premises:")?;
            for p in &self.premises {
                writeln!(f, "{}", crate::syntax::print_bare(p))?;
            }
        }
        for (i, l) in self.lines.iter().enumerate() {
            writeln!(
                f,
                "{}. {} ; {}",
                i + 1,
                crate::syntax::print_bare(&l.formula),
                l.justification
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckOptions {
    /// Restrict delta necessitation to lines that do not depend on premises.
    pub strict_delta_nec: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    /// A cited line is not an earlier line.
    BadLineReference(usize),
    NoSuchPremise(usize),
    PremiseMismatch(usize),
    UnknownSchema(String),
    BadSubstitution(InstantiateError),
    NotAnInstance(String),
    /// The cited major premise is not `minor -> this line`.
    ModusPonensMismatch,
    NecessitationMismatch,
    /// Necessitation applied to a line depending on premises.
    TaintedNecessitation(usize),
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::BadLineReference(i) => write!(f, "line {i} is not an earlier line"),
            RejectReason::NoSuchPremise(k) => write!(f, "there is no premise {k}"),
            RejectReason::PremiseMismatch(k) => write!(f, "formula differs from premise {k}"),
            RejectReason::UnknownSchema(s) => write!(f, "unknown schema `{s}`"),
            RejectReason::BadSubstitution(e) => write!(f, "bad substitution: {e}"),
            RejectReason::NotAnInstance(s) => write!(f, "formula is not an instance of `{s}`"),
            RejectReason::ModusPonensMismatch => write!(
                f,
                "major premise is not an implication from the minor premise to this line"
            ),
            RejectReason::NecessitationMismatch => {
                write!(f, "formula is not the necessitation of the cited line")
            }
            RejectReason::TaintedNecessitation(i) => write!(f, "line {i} depends on premises"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofVerdict {
    Accepted,
    Rejected { line: usize, reason: RejectReason },
}

impl ProofVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, ProofVerdict::Accepted)
    }
}

impl fmt::Display for ProofVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofVerdict::Accepted => write!(f, "accepted"),
            ProofVerdict::Rejected { line, reason } => {
                write!(f, "rejected at line {line}: {reason}")
            }
        }
    }
}

/// For each line, whether its derivation uses a premise. Lines past the
/// first ill-formed citation are treated as tainted.
pub fn premise_taint(proof: &Proof) -> Vec<bool> {
    let mut taint: Vec<bool> = Vec::with_capacity(proof.lines.len());
    for l in &proof.lines {
        let t = |i: usize| taint.get(i.wrapping_sub(1)).copied().unwrap_or(true);
        let v = match &l.justification {
            Justification::Premise(_) => true,
            Justification::Axiom { .. } => false,
            Justification::ModusPonens(i, j) => t(*i) || t(*j),
            Justification::DeltaNecessitation(i) | Justification::KNecessitation(i, _) => t(*i),
        };
        taint.push(v);
    }
    taint
}

fn check_line(
    proof: &Proof,
    n: usize,
    db: &SchemaDb,
    options: CheckOptions,
    taint: &[bool],
) -> Result<(), RejectReason> {
    let line = &proof.lines[n - 1];
    let earlier = |i: usize| {
        if i >= 1 && i < n {
            Ok(&proof.lines[i - 1].formula)
        } else {
            Err(RejectReason::BadLineReference(i))
        }
    };
    match &line.justification {
        Justification::Premise(k) => {
            let p = k
                .checked_sub(1)
                .and_then(|i| proof.premises.get(i))
                .ok_or(RejectReason::NoSuchPremise(*k))?;
            if *p != line.formula {
                return Err(RejectReason::PremiseMismatch(*k));
            }
        }
        Justification::Axiom {
            schema,
            substitution,
        } => {
            let s = db
                .get(schema)
                .ok_or_else(|| RejectReason::UnknownSchema(schema.clone()))?;
            match substitution {
                Some(sub) => {
                    let inst = instantiate(s, sub).map_err(RejectReason::BadSubstitution)?;
                    if inst != line.formula {
                        return Err(RejectReason::NotAnInstance(schema.clone()));
                    }
                }
                None => {
                    match_schema(s, &line.formula)
                        .ok_or_else(|| RejectReason::NotAnInstance(schema.clone()))?;
                }
            }
        }
        Justification::ModusPonens(i, j) => {
            let minor = earlier(*i)?;
            let major = earlier(*j)?;
            match major {
                Formula::Implies(a, b) if **a == *minor && **b == line.formula => {}
                _ => return Err(RejectReason::ModusPonensMismatch),
            }
        }
        Justification::DeltaNecessitation(i) => {
            let g = earlier(*i)?;
            if line.formula != Formula::delta(g.clone()) {
                return Err(RejectReason::NecessitationMismatch);
            }
            if options.strict_delta_nec && taint[i - 1] {
                return Err(RejectReason::TaintedNecessitation(*i));
            }
        }
        Justification::KNecessitation(i, a) => {
            let g = earlier(*i)?;
            if line.formula != Formula::know(a.clone(), g.clone()) {
                return Err(RejectReason::NecessitationMismatch);
            }
            if taint[i - 1] {
                return Err(RejectReason::TaintedNecessitation(*i));
            }
        }
    }
    Ok(())
}

/// Checks every line in order and reports the first failure.
pub fn check_proof(proof: &Proof, db: &SchemaDb, options: CheckOptions) -> ProofVerdict {
    let taint = premise_taint(proof);
    for n in 1..=proof.lines.len() {
        if let Err(reason) = check_line(proof, n, db, options, &taint) {
            return ProofVerdict::Rejected { line: n, reason };
        }
    }
    ProofVerdict::Accepted
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditEntry {
    pub line: usize,
    /// Whether the line was checked as a consequence of the premises rather
    /// than for validity.
    pub uses_premises: bool,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn counterexamples(&self) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(|e| !e.verdict.is_valid())
    }

    pub fn is_sound(&self) -> bool {
        self.counterexamples().next().is_none()
    }
}

/// Checks each line semantically: premise-free lines for validity, the
/// others as local consequences of the premises.
pub fn audit_soundness(
    proof: &Proof,
    params: &ModelSpaceParams,
) -> Result<AuditReport, CheckError> {
    let taint = premise_taint(proof);
    let mut entries = Vec::with_capacity(proof.lines.len());
    for (i, l) in proof.lines.iter().enumerate() {
        let verdict = if taint[i] {
            check_consequence(&proof.premises, &l.formula, params)?
        } else {
            check_validity(&l.formula, params)?
        };
        entries.push(AuditEntry {
            line: i + 1,
            uses_premises: taint[i],
            verdict,
        });
    }
    Ok(AuditReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{Binding, Kind, Schema};
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn line(s: &str, j: Justification) -> ProofLine {
        ProofLine {
            formula: f(s),
            justification: j,
        }
    }

    fn mp_proof() -> Proof {
        Proof {
            premises: vec![f("p"), f("p -> q")],
            lines: vec![
                line("p", Justification::Premise(1)),
                line("p -> q", Justification::Premise(2)),
                line("q", Justification::ModusPonens(1, 2)),
                line(
                    "bot -> p",
                    Justification::Axiom {
                        schema: "BL5".into(),
                        substitution: None,
                    },
                ),
                line(
                    "K{a} (bot -> p)",
                    Justification::KNecessitation(4, AgentId::new("a").unwrap()),
                ),
                line("D q", Justification::DeltaNecessitation(3)),
            ],
        }
    }

    #[test]
    fn accepts_and_rejects() {
        let db = SchemaDb::standard();
        let p = mp_proof();
        assert_eq!(
            check_proof(&p, &db, CheckOptions::default()),
            ProofVerdict::Accepted
        );
        assert_eq!(
            premise_taint(&p),
            vec![true, true, true, false, false, true]
        );
        // strict mode forbids delta necessitation of premise-dependent lines
        assert_eq!(
            check_proof(
                &p,
                &db,
                CheckOptions {
                    strict_delta_nec: true
                }
            ),
            ProofVerdict::Rejected {
                line: 6,
                reason: RejectReason::TaintedNecessitation(3)
            }
        );

        let mut bad = p.clone();
        bad.lines[2].justification = Justification::ModusPonens(2, 1);
        assert_eq!(
            check_proof(&bad, &db, CheckOptions::default()),
            ProofVerdict::Rejected {
                line: 3,
                reason: RejectReason::ModusPonensMismatch
            }
        );
        let mut bad = p.clone();
        bad.lines[4] = line(
            "K{a} q",
            Justification::KNecessitation(3, AgentId::new("a").unwrap()),
        );
        assert_eq!(
            check_proof(&bad, &db, CheckOptions::default()),
            ProofVerdict::Rejected {
                line: 5,
                reason: RejectReason::TaintedNecessitation(3)
            }
        );
        let mut bad = p.clone();
        bad.lines[2].justification = Justification::ModusPonens(1, 3);
        assert_eq!(
            check_proof(&bad, &db, CheckOptions::default()),
            ProofVerdict::Rejected {
                line: 3,
                reason: RejectReason::BadLineReference(3)
            }
        );
    }

    #[test]
    fn explicit_substitutions() {
        let db = SchemaDb::standard();
        let sub = Substitution::from([
            ("lam".into(), Binding::Formula(f("V(p)>0"))),
            ("p".into(), Binding::Formula(f("q"))),
        ]);
        let proof = Proof {
            premises: vec![],
            lines: vec![line(
                "[V(p)>0]q <-> (V(p)>0 -> q)",
                Justification::Axiom {
                    schema: "PA2".into(),
                    substitution: Some(sub.clone()),
                },
            )],
        };
        assert!(check_proof(&proof, &db, CheckOptions::default()).is_accepted());
        let mut wrong = sub;
        wrong.insert("p".into(), Binding::Formula(f("p")));
        let proof = Proof {
            lines: vec![line(
                "[V(p)>0]q <-> (V(p)>0 -> q)",
                Justification::Axiom {
                    schema: "PA2".into(),
                    substitution: Some(wrong),
                },
            )],
            ..proof
        };
        assert_eq!(
            check_proof(&proof, &db, CheckOptions::default()),
            ProofVerdict::Rejected {
                line: 1,
                reason: RejectReason::NotAnInstance("PA2".into())
            }
        );
    }

    #[test]
    fn insertion_preserves_acceptance() {
        let db = SchemaDb::standard();
        let p = mp_proof();
        let mut q = p.clone();
        q.lines.insert(
            0,
            line(
                "bot -> q",
                Justification::Axiom {
                    schema: "BL5".into(),
                    substitution: None,
                },
            ),
        );
        for l in q.lines.iter_mut().skip(1) {
            l.justification = match &l.justification {
                Justification::ModusPonens(i, j) => Justification::ModusPonens(i + 1, j + 1),
                Justification::DeltaNecessitation(i) => Justification::DeltaNecessitation(i + 1),
                Justification::KNecessitation(i, a) => {
                    Justification::KNecessitation(i + 1, a.clone())
                }
                j => j.clone(),
            };
        }
        assert!(check_proof(&q, &db, CheckOptions::default()).is_accepted());
    }

    #[test]
    fn audit() {
        let params = ModelSpaceParams::exhaustive(
            2,
            vec![
                crate::algebra::TruthValue::ZERO,
                "1/2".parse().unwrap(),
                crate::algebra::TruthValue::ONE,
            ],
            vec![AgentId::new("a").unwrap()],
            vec!["p".into(), "q".into()],
        );
        let report = audit_soundness(&mp_proof(), &params).unwrap();
        assert_eq!(report.entries.len(), 6);
        assert!(report.is_sound());
        assert!(audit_soundness(&Proof::default(), &params)
            .unwrap()
            .entries
            .is_empty());

        let mut db = SchemaDb::standard();
        db.register(Schema::new("FAKE", "phi -> D phi", &[("phi", Kind::Formula)]).unwrap())
            .unwrap();
        let fake = Proof {
            premises: vec![],
            lines: vec![line(
                "p -> D p",
                Justification::Axiom {
                    schema: "FAKE".into(),
                    substitution: None,
                },
            )],
        };
        assert!(check_proof(&fake, &db, CheckOptions::default()).is_accepted());
        let report = audit_soundness(&fake, &params).unwrap();
        let bad = report.counterexamples().next().unwrap();
        let w = bad.verdict.witness().unwrap();
        let at = w.model.world_index(&w.world).unwrap();
        assert_eq!(w.model.value(at, "p"), Some(&"1/2".parse().unwrap()));
    }
}
