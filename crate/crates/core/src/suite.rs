//! The built-in verification suite.
//!
//! Each criterion is a self-contained check with pinned parameters (model
//! spaces, seeds, sample sizes and time limits). [`run`] executes one,
//! [`run_all`] executes all ten in order.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use crate::algebra::{delta, join, residuum, tnorm, TruthValue};
use crate::calculus::{
    audit_soundness, check_proof, parse_proof, Binding, CheckOptions, InstancePools, Kind,
    ProofVerdict, Schema, SchemaDb,
};
use crate::checker::gen::{FormulaGen, GenConfig};
use crate::checker::{
    check_equivalence, check_validity, CheckError, Mode, ModelSpace, ModelSpaceParams, Verdict,
};
use crate::reduction::{check_measure_properties, translate, translate_trace, ReductionStep};
use crate::syntax::{classify, parse, AgentId, Formula, LanguageTag};

/// Seed shared by every randomized criterion.
pub const SEED: u64 = 0x5eed_2024;

pub const ALGEBRA_LIMIT: Duration = Duration::from_secs(1);
pub const REDUCTION_SUITE_LIMIT: Duration = Duration::from_secs(120);
pub const MEASURE_LIMIT: Duration = Duration::from_secs(10);
pub const REFUTATION_LIMIT: Duration = Duration::from_secs(1);

pub const RESTRICTION_TRIPLES: usize = 1000;
pub const MEASURE_FORMULAS: usize = 10_000;
pub const MEASURE_DEPTH: usize = 6;
pub const TRANSLATION_FORMULAS: usize = 1000;
pub const TRANSLATION_DEPTH: usize = 5;
pub const TRANSLATION_MODELS: u64 = 100;
pub const BOOLEAN_FORMULAS: usize = 500;

pub const GOLDEN_PA2: &str = include_str!("../data/golden/pa2.proof");
pub const GOLDEN_MP: &str = include_str!("../data/golden/mp.proof");

/// Mutated variants of the golden proofs. Each starts with `// reject: N`.
pub const MUTATIONS: [(&str, &str); 20] = [
    (
        "01-mp-swapped-3",
        include_str!("../data/golden/mutations/01-mp-swapped-3.proof"),
    ),
    (
        "02-mp-swapped-5",
        include_str!("../data/golden/mutations/02-mp-swapped-5.proof"),
    ),
    (
        "03-g-wrong-subst",
        include_str!("../data/golden/mutations/03-g-wrong-subst.proof"),
    ),
    (
        "04-bl5-wrong-subst",
        include_str!("../data/golden/mutations/04-bl5-wrong-subst.proof"),
    ),
    (
        "05-knec-tainted-mp",
        include_str!("../data/golden/mutations/05-knec-tainted-mp.proof"),
    ),
    (
        "06-knec-tainted-chain",
        include_str!("../data/golden/mutations/06-knec-tainted-chain.proof"),
    ),
    (
        "07-premise-mismatch",
        include_str!("../data/golden/mutations/07-premise-mismatch.proof"),
    ),
    (
        "08-premise-missing",
        include_str!("../data/golden/mutations/08-premise-missing.proof"),
    ),
    (
        "09-mp-self-reference",
        include_str!("../data/golden/mutations/09-mp-self-reference.proof"),
    ),
    (
        "10-mp-forward-reference",
        include_str!("../data/golden/mutations/10-mp-forward-reference.proof"),
    ),
    (
        "11-dnec-wrong-line",
        include_str!("../data/golden/mutations/11-dnec-wrong-line.proof"),
    ),
    (
        "12-unknown-schema",
        include_str!("../data/golden/mutations/12-unknown-schema.proof"),
    ),
    (
        "13-knec-wrong-agent",
        include_str!("../data/golden/mutations/13-knec-wrong-agent.proof"),
    ),
    (
        "14-mp-wrong-conclusion",
        include_str!("../data/golden/mutations/14-mp-wrong-conclusion.proof"),
    ),
    (
        "15-stray-metavariable",
        include_str!("../data/golden/mutations/15-stray-metavariable.proof"),
    ),
    (
        "16-missing-metavariable",
        include_str!("../data/golden/mutations/16-missing-metavariable.proof"),
    ),
    (
        "17-pa2-wrong-subst",
        include_str!("../data/golden/mutations/17-pa2-wrong-subst.proof"),
    ),
    (
        "18-pa2-non-body",
        include_str!("../data/golden/mutations/18-pa2-non-body.proof"),
    ),
    (
        "19-knec-wrong-line",
        include_str!("../data/golden/mutations/19-knec-wrong-line.proof"),
    ),
    (
        "20-wrong-schema",
        include_str!("../data/golden/mutations/20-wrong-schema.proof"),
    ),
];

pub const TITLES: [&str; 10] = [
    "algebra tables",
    "reduction axioms valid",
    "value formulas match delta forms",
    "announcement sentences and restriction composition",
    "complexity measure properties",
    "translation eliminates announcements",
    "value formulas are boolean",
    "proof checker golden files and mutations",
    "axiom database sound",
    "non-theorems refuted",
];

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    /// Names of the refuted items, for criteria that sweep named schemas.
    pub failing: Vec<String>,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:>2}  {}  {:<52} {:>9.3}s  {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

fn v(s: &str) -> TruthValue {
    s.parse().expect("literal")
}

fn f(s: &str) -> Formula {
    parse(s).expect("literal")
}

fn agent_a() -> AgentId {
    AgentId::new("a").expect("literal")
}

/// Exhaustive suite: up to 2 worlds, chain {0, 1/3, 1/2, 1}, agent `a`,
/// atoms `p`, `q` (65600 models).
pub fn exhaustive_params() -> ModelSpaceParams {
    ModelSpaceParams::exhaustive(
        2,
        vec![TruthValue::ZERO, v("1/3"), v("1/2"), TruthValue::ONE],
        vec![agent_a()],
        vec!["p".into(), "q".into()],
    )
}

/// Chain {0, 1/2, 1}, up to 2 worlds, agent `a`, atoms `p`, `q`.
pub fn small_params() -> ModelSpaceParams {
    ModelSpaceParams::exhaustive(
        2,
        vec![TruthValue::ZERO, v("1/2"), TruthValue::ONE],
        vec![agent_a()],
        vec!["p".into(), "q".into()],
    )
}

pub fn run(id: usize) -> Outcome {
    let start = Instant::now();
    let mut failing = Vec::new();
    let result = match id {
        1 => algebra_tables(),
        2 => reduction_axioms(),
        3 => value_formulas(),
        4 => announcement_sentences(),
        5 => measure_properties(),
        6 => translation(),
        7 => boolean_values(),
        8 => proofs(),
        9 => axiom_soundness(&mut failing),
        10 => non_theorems(),
        _ => Err(format!("no criterion {id}")),
    };
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    let limit = match id {
        1 => Some(ALGEBRA_LIMIT),
        2 => Some(REDUCTION_SUITE_LIMIT),
        5 => Some(MEASURE_LIMIT),
        _ => None,
    };
    if let Some(limit) = limit {
        if elapsed > limit {
            passed = false;
            detail = format!("{detail}; took longer than {}s", limit.as_secs());
        }
    }
    let title = TITLES.get(id.wrapping_sub(1)).copied().unwrap_or("?");
    Outcome {
        id,
        title,
        passed,
        detail,
        elapsed,
        failing,
    }
}

pub fn run_all() -> Vec<Outcome> {
    (1..=10).map(run).collect()
}

type Check = Result<String, String>;

fn check_err(e: CheckError) -> String {
    format!("checker error: {e}")
}

// Values are k/4; the reference operations work on the numerators.
fn algebra_tables() -> Check {
    let q = |k: u64| TruthValue::new(k, 4).expect("in range");
    let mut checked = 0;
    for a in 0..=4u64 {
        if delta(&q(a)) != q(if a == 4 { 4 } else { 0 }) {
            return Err(format!("delta({})", q(a)));
        }
        for b in 0..=4u64 {
            let expect = [
                ("tnorm", tnorm(&q(a), &q(b)), q(a.min(b))),
                (
                    "residuum",
                    residuum(&q(a), &q(b)),
                    q(if a <= b { 4 } else { b }),
                ),
                ("join", join(&q(a), &q(b)), q(a.max(b))),
            ];
            for (name, got, want) in expect {
                if got != want {
                    return Err(format!(
                        "{name}({}, {}) = {got}, expected {want}",
                        q(a),
                        q(b)
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} binary entries and 5 delta entries agree"
    ))
}

fn instance_sweep(
    db: &SchemaDb,
    names: &[&str],
    pools: &InstancePools,
    params: &ModelSpaceParams,
) -> Result<(usize, Vec<String>), String> {
    let mut failures = Vec::new();
    let mut count = 0;
    for name in names {
        let schema = db
            .get(name)
            .ok_or_else(|| format!("missing schema {name}"))?;
        for inst in schema.instances(pools) {
            count += 1;
            if let Verdict::Refuted(w) = check_validity(&inst, params).map_err(check_err)? {
                failures.push(format!(
                    "{name}: {inst} fails at {} (value {})",
                    w.world, w.value
                ));
            }
        }
    }
    Ok((count, failures))
}

fn reduction_axioms() -> Check {
    let db = SchemaDb::standard();
    let pools = InstancePools {
        formulas: ["p", "q", "p -> q", "D p", "#1/3"].map(f).to_vec(),
        bodies: ["V(p)=1/2", "V(p)>0", "V(p)>1/2 & V(q)=1"].map(f).to_vec(),
        constants: vec![v("1/3")],
        agents: vec![agent_a()],
        overrides: BTreeMap::from([("mu".to_string(), vec![Binding::Formula(f("V(q)>0"))])]),
    };
    let names = ["PA1", "PA2", "PA3", "PA4", "PA5", "PA6", "PA7", "PA8"];
    let (count, failures) = instance_sweep(&db, &names, &pools, &exhaustive_params())?;
    if failures.is_empty() {
        Ok(format!("{count} instances valid on 65600 models"))
    } else {
        Err(format!(
            "{} of {count} instances refuted; first: {}",
            failures.len(),
            failures[0]
        ))
    }
}

fn value_formulas() -> Check {
    let params = exhaustive_params();
    let mut count = 0;
    for s in ["p", "p -> q", "K{a} p"] {
        let psi = f(s);
        for c in ["0", "1/3", "1/2", "1"] {
            let c = v(c);
            let k = Formula::constant(c.clone());
            let pairs = [
                (
                    Formula::val_eq(psi.clone(), c.clone()),
                    Formula::delta(Formula::and(
                        Formula::implies(psi.clone(), k.clone()),
                        Formula::implies(k.clone(), psi.clone()),
                    )),
                ),
                (
                    Formula::val_gt(psi.clone(), c.clone()),
                    Formula::implies(
                        Formula::delta(Formula::implies(psi.clone(), k.clone())),
                        Formula::Bottom,
                    ),
                ),
            ];
            for (lhs, rhs) in pairs {
                count += 1;
                if let Verdict::Refuted(w) =
                    check_equivalence(&lhs, &rhs, &params).map_err(check_err)?
                {
                    return Err(format!(
                        "{lhs} differs from {rhs} at {}: {} vs {}",
                        w.world,
                        w.value,
                        w.other.map(|o| o.to_string()).unwrap_or_default()
                    ));
                }
            }
        }
    }
    Ok(format!("{count} equivalences hold with exact values"))
}

fn announcement_sentences() -> Check {
    let params = exhaustive_params();
    let lambdas = ["V(p)=1/2", "V(p)>0", "V(p)>1/2 & V(q)=1"].map(f);
    let phis = ["p", "q", "p -> q", "K{a} q"].map(f);
    let atoms = ["p", "q"].map(f);
    let mu = f("V(q)>0");
    let a = agent_a();
    let ann = |l: &Formula, x: &Formula| Formula::announce(l.clone(), x.clone());
    let mut sentences = Vec::new();
    for l in &lambdas {
        for p in &atoms {
            sentences.push(Formula::iff(
                ann(l, p),
                Formula::implies(l.clone(), p.clone()),
            ));
        }
        sentences.push(Formula::iff(
            ann(l, &Formula::Bottom),
            Formula::implies(l.clone(), Formula::Bottom),
        ));
        for x in &phis {
            for y in &phis {
                let and = Formula::and(x.clone(), y.clone());
                let imp = Formula::implies(x.clone(), y.clone());
                sentences.push(Formula::iff(
                    ann(l, &and),
                    Formula::and(ann(l, x), ann(l, y)),
                ));
                sentences.push(Formula::iff(
                    ann(l, &imp),
                    Formula::implies(ann(l, x), ann(l, y)),
                ));
            }
            sentences.push(Formula::iff(
                ann(l, &Formula::know(a.clone(), x.clone())),
                Formula::implies(l.clone(), Formula::know(a.clone(), ann(l, x))),
            ));
            sentences.push(Formula::iff(
                ann(l, &ann(&mu, x)),
                ann(&Formula::and(l.clone(), ann(l, &mu)), x),
            ));
        }
    }
    for s in &sentences {
        if let Verdict::Refuted(w) = check_validity(s, &params).map_err(check_err)? {
            return Err(format!("{s} fails at {} (value {})", w.world, w.value));
        }
    }

    let space = ModelSpace::new(
        ModelSpaceParams::exhaustive(
            4,
            vec![TruthValue::ZERO, v("1/3"), v("1/2"), TruthValue::ONE],
            vec![agent_a(), AgentId::new("b").expect("literal")],
            vec!["p".into(), "q".into()],
        )
        .with_mode(Mode::Random {
            samples: RESTRICTION_TRIPLES as u64,
            seed: SEED,
        }),
    )
    .map_err(check_err)?;
    let mut cfg = GenConfig::standard();
    cfg.agents.push(AgentId::new("b").expect("literal"));
    let mut gen = FormulaGen::new(cfg, SEED);
    let mut nonempty = 0;
    for (i, m) in space.models().enumerate() {
        let l = gen.value_formula(3);
        let mu = gen.value_formula(3);
        let joint = Formula::and(l.clone(), Formula::announce(l.clone(), mu.clone()));
        let one = m.restrict(&joint).map_err(|e| e.to_string())?;
        let two = m
            .restrict(&l)
            .and_then(|r| r.restrict(&mu))
            .map_err(|e| e.to_string())?;
        if one.surviving() != two.surviving() || one.to_model() != two.to_model() {
            return Err(format!("triple {i}: M|({joint}) differs from (M|{l})|{mu}"));
        }
        nonempty += usize::from(!one.is_empty());
    }
    Ok(format!(
        "{} sentences valid on 65600 models; {RESTRICTION_TRIPLES} restriction triples agree ({nonempty} non-empty)",
        sentences.len()
    ))
}

fn measure_properties() -> Check {
    let mut cfg = GenConfig::standard();
    cfg.desugar_bodies = true;
    let mut gen = FormulaGen::new(cfg, SEED);
    let (mut checks, mut with_announcements) = (0, 0);
    for _ in 0..MEASURE_FORMULAS {
        let g = gen.formula(MEASURE_DEPTH);
        let report = check_measure_properties(&g);
        if let Some(bad) = report.violations().next() {
            return Err(format!("{g}: {bad}"));
        }
        checks += report.checks.len();
        with_announcements += usize::from(g.has_announcement());
    }
    Ok(format!(
        "{checks} inequalities hold over {MEASURE_FORMULAS} formulas ({with_announcements} with announcements)"
    ))
}

fn translation() -> Check {
    let mut cfg = GenConfig::standard();
    cfg.constants = vec![v("1/2")];
    cfg.thresholds = vec![TruthValue::ZERO, v("1/2"), TruthValue::ONE];
    let mut gen = FormulaGen::new(cfg, SEED);
    let mut steps = 0;
    for i in 0..TRANSLATION_FORMULAS {
        let g = gen.formula(TRANSLATION_DEPTH);
        let t = translate(&g);
        if t.has_announcement() || t.has_value_formula() {
            return Err(format!(
                "{g}: translation still has announcements or value formulas"
            ));
        }
        if !classify(&t).contains(&LanguageTag::LangKDeltaQ) {
            return Err(format!(
                "{g}: translation is not in the modal delta language"
            ));
        }
        let trace = translate_trace(&g);
        if let Some(s) = trace.iter().find(|s| !ReductionStep::respects_measure(s)) {
            return Err(format!("{g}: step {s} does not decrease the measure"));
        }
        steps += trace.len();
        let params = small_params().with_mode(Mode::Random {
            samples: TRANSLATION_MODELS,
            seed: SEED + i as u64,
        });
        if let Verdict::Refuted(w) = check_equivalence(&g, &t, &params).map_err(check_err)? {
            return Err(format!(
                "{g}: translation differs at {} ({} vs {:?})",
                w.world, w.value, w.other
            ));
        }
    }
    Ok(format!("{TRANSLATION_FORMULAS} formulas translated ({steps} rewrite steps), all equivalent on {TRANSLATION_MODELS} models each"))
}

fn boolean_values() -> Check {
    let mut gen = FormulaGen::new(GenConfig::standard(), SEED);
    let a = agent_a();
    let lambdas: Vec<Formula> = (0..BOOLEAN_FORMULAS)
        .map(|i| match i % 3 {
            0 => Formula::know(a.clone(), gen.body(3)),
            1 => Formula::announce(gen.body(3), gen.body(3)),
            _ => gen.body(4),
        })
        .collect();
    let space = ModelSpace::new(exhaustive_params()).map_err(check_err)?;
    let hit = space
        .find_first(|m| {
            for l in &lambdas {
                let vals = m.evaluate_all(l)?;
                if let Some((w, x)) = vals
                    .into_iter()
                    .enumerate()
                    .find(|(_, x)| !x.is_zero() && !x.is_one())
                {
                    return Ok(Some((l.clone(), w, x)));
                }
            }
            Ok(None)
        })
        .map_err(check_err)?;
    match hit {
        None => Ok(format!(
            "{BOOLEAN_FORMULAS} bodies take values in {{0, 1}} on {} models",
            space.count()
        )),
        Some((i, m, (l, w, x))) => Err(format!(
            "{l} has value {x} at {} of model #{i}",
            m.worlds()[w]
        )),
    }
}

fn expected_reject_line(text: &str) -> Option<usize> {
    text.lines()
        .next()?
        .strip_prefix("// reject:")?
        .trim()
        .parse()
        .ok()
}

fn proofs() -> Check {
    let db = SchemaDb::standard();
    let opts = CheckOptions::default();
    let params = exhaustive_params();
    for (name, text) in [("pa2", GOLDEN_PA2), ("mp", GOLDEN_MP)] {
        let p = parse_proof(text).map_err(|e| format!("{name}: {e}"))?;
        let verdict = check_proof(&p, &db, opts);
        if !verdict.is_accepted() {
            return Err(format!("golden proof {name} {verdict}"));
        }
        let report = audit_soundness(&p, &params).map_err(check_err)?;
        let refuted = report.counterexamples().next().map(|e| e.line);
        if let Some(line) = refuted {
            return Err(format!("golden proof {name}: audit refutes line {line}"));
        }
    }
    for (name, text) in MUTATIONS {
        let want = expected_reject_line(text).ok_or_else(|| format!("{name}: no expected line"))?;
        let p = parse_proof(text).map_err(|e| format!("{name}: {e}"))?;
        match check_proof(&p, &db, opts) {
            ProofVerdict::Rejected { line, .. } if line == want => {}
            other => {
                return Err(format!(
                    "{name}: expected rejection at line {want}, got {other}"
                ))
            }
        }
    }
    let mut fake_db = SchemaDb::standard();
    fake_db
        .register(Schema::new("FAKE", "phi -> D phi", &[("phi", Kind::Formula)]).expect("literal"))
        .map_err(|e| e.to_string())?;
    let fake = parse_proof("1. p -> D p ; axiom FAKE {phi := p}").expect("literal");
    if !check_proof(&fake, &fake_db, opts).is_accepted() {
        return Err("planted schema instance not accepted".into());
    }
    let report = audit_soundness(&fake, &params).map_err(check_err)?;
    let witness = report
        .counterexamples()
        .next()
        .and_then(|e| e.verdict.witness())
        .ok_or("audit found no counterexample for p -> D p")?;
    Ok(format!(
        "2 golden proofs accepted and audited; 20 mutations rejected at the expected lines; p -> D p refuted at {} (value {})",
        witness.world, witness.value
    ))
}

fn axiom_soundness(failing: &mut Vec<String>) -> Check {
    let db = SchemaDb::standard();
    let pools = InstancePools {
        formulas: ["p", "q", "D p", "#1/2"].map(f).to_vec(),
        bodies: vec![f("V(p)>0")],
        constants: vec![TruthValue::ZERO, v("1/2"), TruthValue::ONE],
        agents: vec![agent_a()],
        overrides: BTreeMap::new(),
    };
    let names: Vec<&str> = db.iter().map(Schema::name).collect();
    let (count, failures) = instance_sweep(&db, &names, &pools, &exhaustive_params())?;
    if failures.is_empty() {
        Ok(format!(
            "{count} instances of {} schemas valid on 65600 models",
            names.len()
        ))
    } else {
        let mut schemas: Vec<&str> = failures
            .iter()
            .filter_map(|s| s.split(':').next())
            .collect();
        schemas.dedup();
        failing.extend(schemas.iter().map(|s| s.to_string()));
        Err(format!(
            "{} of {count} instances refuted (schemas: {}); first: {}",
            failures.len(),
            schemas.join(", "),
            failures[0]
        ))
    }
}

/// Formulas expected to be refuted, with the model space used for them.
pub fn non_theorem_cases() -> (Vec<Formula>, ModelSpaceParams) {
    let params = ModelSpaceParams::exhaustive(
        1,
        vec![TruthValue::ZERO, v("1/2"), TruthValue::ONE],
        vec![agent_a()],
        vec!["p".into()],
    );
    (["p | ~p", "~~p -> p", "D p <-> p"].map(f).to_vec(), params)
}

fn non_theorems() -> Check {
    let (cases, params) = non_theorem_cases();
    let mut out = Vec::new();
    for g in &cases {
        let start = Instant::now();
        let first = check_validity(g, &params).map_err(check_err)?;
        let elapsed = start.elapsed();
        let w = first.witness().ok_or_else(|| format!("{g} not refuted"))?;
        if elapsed > REFUTATION_LIMIT {
            return Err(format!(
                "{g}: refutation took {:.3}s",
                elapsed.as_secs_f64()
            ));
        }
        let again = check_validity(g, &params).map_err(check_err)?;
        if again != first {
            return Err(format!("{g}: witness not reproducible"));
        }
        let value = w.model.evaluate(&w.world, g).map_err(|e| e.to_string())?;
        if value != w.value || value.is_one() {
            return Err(format!("{g}: witness re-evaluates to {value}"));
        }
        out.push(format!(
            "{} (value {})",
            crate::syntax::print_bare(g),
            w.value
        ));
    }
    Ok(format!("refuted: {}", out.join("; ")))
}
