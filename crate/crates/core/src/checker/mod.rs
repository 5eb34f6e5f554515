//! Validity and equivalence search over finite families of models.
//!
//! A [`ModelSpace`] fixes a maximum world count, a finite chain of truth
//! values, the agents and the atoms. Exhaustive mode walks every model of
//! the space in a fixed order; random mode draws a reproducible sample.
//! Because the Gödel operations only ever select values already present, a
//! chain containing 0, 1 and every constant of the formula is closed under
//! evaluation, so refutations found here are genuine countermodels.
//! Validity on a finite space is evidence for, not a proof of, validity on
//! `[0,1]`.

pub mod gen;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::TruthValue;
use crate::model::{EvalError, KripkeModel};
use crate::syntax::{AgentId, Formula};

/// Default cap on the number of models an exhaustive check may visit.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Maximum number of fresh midpoints added next to injected constants.
pub const FRESH_VALUE_CAP: usize = 4;

const CHUNK: u128 = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("exhaustive search would visit {count} models, over the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u64 },
    #[error("invalid model-space parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Random { samples: u64, seed: u64 },
}

/// Description of a finite family of models.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpaceParams {
    pub max_worlds: usize,
    pub chain: Vec<TruthValue>,
    pub agents: Vec<AgentId>,
    pub atoms: Vec<String>,
    pub mode: Mode,
    #[serde(default = "default_budget")]
    pub budget: u64,
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

impl ModelSpaceParams {
    pub fn exhaustive(
        max_worlds: usize,
        chain: Vec<TruthValue>,
        agents: Vec<AgentId>,
        atoms: Vec<String>,
    ) -> Self {
        ModelSpaceParams {
            max_worlds,
            chain,
            agents,
            atoms,
            mode: Mode::Exhaustive,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn from_json(text: &str) -> Result<Self, CheckError> {
        serde_json::from_str(text).map_err(|e| CheckError::InvalidParams(e.to_string()))
    }
}

/// A validated model space.
#[derive(Debug, Clone)]
pub struct ModelSpace {
    params: ModelSpaceParams,
    worlds: Vec<Vec<String>>,
}

impl ModelSpace {
    pub fn new(mut params: ModelSpaceParams) -> Result<Self, CheckError> {
        let bad = |m: &str| Err(CheckError::InvalidParams(m.to_string()));
        if params.max_worlds == 0 {
            return bad("max_worlds must be positive");
        }
        if params.agents.is_empty() {
            return bad("at least one agent is required");
        }
        if params.atoms.is_empty() {
            return bad("at least one atom is required");
        }
        if let Some(a) = params
            .atoms
            .iter()
            .find(|a| !crate::syntax::is_atom_name(a))
        {
            return Err(CheckError::InvalidParams(format!(
                "invalid atom name `{a}`"
            )));
        }
        params.chain.sort();
        params.chain.dedup();
        params.atoms.sort();
        params.atoms.dedup();
        params.agents.sort();
        params.agents.dedup();
        if params.chain.first() != Some(&TruthValue::ZERO)
            || params.chain.last() != Some(&TruthValue::ONE)
        {
            return bad("the chain must contain 0 and 1");
        }
        let worlds = (1..=params.max_worlds)
            .map(|n| (1..=n).map(|i| format!("w{i}")).collect())
            .collect();
        let space = ModelSpace { params, worlds };
        if space.params.mode == Mode::Exhaustive && space.count() > space.params.budget as u128 {
            return Err(CheckError::BudgetExceeded {
                count: space.count(),
                budget: space.params.budget,
            });
        }
        Ok(space)
    }

    /// The space obtained after adding `constants` (and a few fresh midpoints
    /// next to each newly added value) to the chain.
    pub fn for_constants<'a>(
        params: &ModelSpaceParams,
        constants: impl IntoIterator<Item = &'a TruthValue>,
    ) -> Result<Self, CheckError> {
        let mut p = params.clone();
        p.chain = extend_chain(&params.chain, constants);
        ModelSpace::new(p)
    }

    pub fn params(&self) -> &ModelSpaceParams {
        &self.params
    }

    pub fn chain(&self) -> &[TruthValue] {
        &self.params.chain
    }

    fn digits(&self, n: usize) -> u32 {
        (self.params.agents.len() * n * n + n * self.params.atoms.len()) as u32
    }

    fn count_with(&self, n: usize) -> u128 {
        (self.params.chain.len() as u128).saturating_pow(self.digits(n))
    }

    /// Number of models in the exhaustive enumeration.
    pub fn count(&self) -> u128 {
        (1..=self.params.max_worlds).fold(0u128, |acc, n| acc.saturating_add(self.count_with(n)))
    }

    /// Number of models this space yields in its configured mode.
    pub fn len(&self) -> u128 {
        match self.params.mode {
            Mode::Exhaustive => self.count(),
            Mode::Random { samples, .. } => samples as u128,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn template(&self, n: usize) -> KripkeModel {
        KripkeModel::new(self.worlds[n - 1].clone(), self.params.agents.clone())
            .expect("generated names are distinct")
    }

    /// Writes the model with the given digits (most significant first) into `m`.
    fn fill(&self, m: &mut KripkeModel, digits: impl IntoIterator<Item = usize>) {
        let n = m.worlds().len();
        let chain = &self.params.chain;
        let mut it = digits.into_iter();
        for a in 0..self.params.agents.len() {
            for i in 0..n {
                for j in 0..n {
                    m.set_access(a, i, j, chain[it.next().unwrap()].clone());
                }
            }
        }
        for w in 0..n {
            for p in &self.params.atoms {
                m.set_value(w, p, chain[it.next().unwrap()].clone())
                    .expect("atom names validated");
            }
        }
    }

    fn decode(&self, index: u128) -> (usize, Vec<usize>) {
        let base = self.params.chain.len() as u128;
        let mut rest = index;
        for n in 1..=self.params.max_worlds {
            let c = self.count_with(n);
            if rest < c {
                let k = self.digits(n) as usize;
                let mut digits = vec![0; k];
                for d in digits.iter_mut().rev() {
                    *d = (rest % base) as usize;
                    rest /= base;
                }
                return (n, digits);
            }
            rest -= c;
        }
        panic!("model index {index} out of range");
    }

    /// The exhaustive-order model with the given index.
    pub fn model(&self, index: u128) -> KripkeModel {
        let (n, digits) = self.decode(index);
        let mut m = self.template(n);
        self.fill(&mut m, digits);
        m
    }

    fn random_models(&self, samples: u64, seed: u64) -> Vec<KripkeModel> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = self.params.chain.len();
        (0..samples)
            .map(|_| {
                let n = rng.gen_range(1..=self.params.max_worlds);
                let k = self.digits(n) as usize;
                let digits: Vec<usize> = (0..k).map(|_| rng.gen_range(0..base)).collect();
                let mut m = self.template(n);
                self.fill(&mut m, digits);
                m
            })
            .collect()
    }

    /// Every model of the space, in deterministic order.
    pub fn models(&self) -> Box<dyn Iterator<Item = KripkeModel> + '_> {
        match self.params.mode {
            Mode::Exhaustive => Box::new((0..self.count()).map(move |i| self.model(i))),
            Mode::Random { samples, seed } => {
                Box::new(self.random_models(samples, seed).into_iter())
            }
        }
    }

    /// Runs `probe` on every model and returns the first hit in enumeration
    /// order, with its model index. Work is split into chunks processed in
    /// parallel; the reported hit does not depend on scheduling.
    pub fn find_first<T, F>(&self, probe: F) -> Result<Option<(u128, KripkeModel, T)>, CheckError>
    where
        T: Send,
        F: Fn(&KripkeModel) -> Result<Option<T>, CheckError> + Sync,
    {
        match self.params.mode {
            Mode::Exhaustive => {
                let total = self.count();
                let chunks = total.div_ceil(CHUNK);
                let hit = (0..chunks as u64).into_par_iter().find_map_first(|c| {
                    let start = c as u128 * CHUNK;
                    let end = (start + CHUNK).min(total);
                    self.scan_range(start, end, &probe).transpose()
                });
                hit.transpose()
            }
            Mode::Random { samples, seed } => {
                let models = self.random_models(samples, seed);
                let hit =
                    models
                        .into_par_iter()
                        .enumerate()
                        .find_map_first(|(i, m)| match probe(&m) {
                            Ok(Some(t)) => Some(Ok((i as u128, m, t))),
                            Ok(None) => None,
                            Err(e) => Some(Err(e)),
                        });
                hit.transpose()
            }
        }
    }

    fn scan_range<T, F>(
        &self,
        start: u128,
        end: u128,
        probe: &F,
    ) -> Result<Option<(u128, KripkeModel, T)>, CheckError>
    where
        F: Fn(&KripkeModel) -> Result<Option<T>, CheckError>,
    {
        let mut current: Option<(usize, KripkeModel)> = None;
        for index in start..end {
            let (n, digits) = self.decode(index);
            let m = match &mut current {
                Some((cn, m)) if *cn == n => m,
                _ => &mut current.insert((n, self.template(n))).1,
            };
            self.fill(m, digits);
            if let Some(t) = probe(m)? {
                return Ok(Some((index, m.clone(), t)));
            }
        }
        Ok(None)
    }
}

/// `chain` plus `constants`, plus fresh midpoints between each newly added
/// value and its neighbours (at most [`FRESH_VALUE_CAP`] of them).
pub fn extend_chain<'a>(
    chain: &[TruthValue],
    constants: impl IntoIterator<Item = &'a TruthValue>,
) -> Vec<TruthValue> {
    let mut out: Vec<TruthValue> = chain.to_vec();
    out.sort();
    out.dedup();
    let added: Vec<TruthValue> = constants
        .into_iter()
        .filter(|c| out.binary_search(c).is_err())
        .cloned()
        .collect();
    if added.is_empty() {
        return out;
    }
    out.extend(added.iter().cloned());
    out.sort();
    out.dedup();
    let mut fresh = Vec::new();
    for pair in out.windows(2) {
        if fresh.len() == FRESH_VALUE_CAP {
            break;
        }
        if added.contains(&pair[0]) || added.contains(&pair[1]) {
            fresh.push(pair[0].midpoint(&pair[1]));
        }
    }
    out.extend(fresh);
    out.sort();
    out.dedup();
    out
}

/// A refuting model and world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// Position of the model in the enumeration.
    pub index: u128,
    pub model: KripkeModel,
    pub world: String,
    /// Value of the checked formula at `world`.
    pub value: TruthValue,
    /// For equivalence checks, the value of the second formula.
    pub other: Option<TruthValue>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "model #{} at world {}: value {}",
            self.index, self.world, self.value
        )?;
        if let Some(o) = &self.other {
            write!(f, " vs {o}")?;
        }
        write!(f, "\n{}", self.model.to_json())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// No refutation among `models` models.
    Valid {
        models: u128,
    },
    Refuted(Box<Witness>),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Valid { .. } => None,
            Verdict::Refuted(w) => Some(w),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid { models } => write!(f, "valid on suite ({models} models)"),
            Verdict::Refuted(w) => write!(f, "refuted: {w}"),
        }
    }
}

// (world, value, other value)
type Found = (usize, TruthValue, Option<TruthValue>);

fn verdict(space: &ModelSpace, hit: Option<(u128, KripkeModel, Found)>) -> Verdict {
    match hit {
        None => Verdict::Valid {
            models: space.len(),
        },
        Some((index, model, (w, value, other))) => Verdict::Refuted(Box::new(Witness {
            index,
            world: model.worlds()[w].clone(),
            model,
            value,
            other,
        })),
    }
}

/// Whether `f` takes value 1 at every world of every model of the space.
pub fn check_validity(f: &Formula, params: &ModelSpaceParams) -> Result<Verdict, CheckError> {
    let space = ModelSpace::for_constants(params, &f.constants())?;
    check_validity_in(f, &space)
}

pub fn check_validity_in(f: &Formula, space: &ModelSpace) -> Result<Verdict, CheckError> {
    let hit = space.find_first(|m| {
        let vals = m.evaluate_all(f)?;
        Ok(vals
            .into_iter()
            .enumerate()
            .find(|(_, v)| !v.is_one())
            .map(|(w, v)| (w, v, None)))
    })?;
    Ok(verdict(space, hit))
}

/// Whether `f` and `g` take the same value at every world of every model.
pub fn check_equivalence(
    f: &Formula,
    g: &Formula,
    params: &ModelSpaceParams,
) -> Result<Verdict, CheckError> {
    let mut constants = f.constants();
    constants.extend(g.constants());
    let space = ModelSpace::for_constants(params, &constants)?;
    check_equivalence_in(f, g, &space)
}

pub fn check_equivalence_in(
    f: &Formula,
    g: &Formula,
    space: &ModelSpace,
) -> Result<Verdict, CheckError> {
    let hit = space.find_first(|m| {
        let (a, b) = (m.evaluate_all(f)?, m.evaluate_all(g)?);
        Ok(a.into_iter()
            .zip(b)
            .enumerate()
            .find(|(_, (x, y))| x != y)
            .map(|(w, (x, y))| (w, x, Some(y))))
    })?;
    Ok(verdict(space, hit))
}

/// Local consequence: at every world where all `premises` take value 1,
/// `f` takes value 1 too.
pub fn check_consequence(
    premises: &[Formula],
    f: &Formula,
    params: &ModelSpaceParams,
) -> Result<Verdict, CheckError> {
    let mut constants = f.constants();
    for p in premises {
        constants.extend(p.constants());
    }
    let space = ModelSpace::for_constants(params, &constants)?;
    let hit = space.find_first(|m| {
        let mut hold = vec![true; m.worlds().len()];
        for p in premises {
            for (h, v) in hold.iter_mut().zip(m.evaluate_all(p)?) {
                *h &= v.is_one();
            }
        }
        let vals = m.evaluate_all(f)?;
        Ok(vals
            .into_iter()
            .enumerate()
            .find(|(w, v)| hold[*w] && !v.is_one())
            .map(|(w, v)| (w, v, None)))
    })?;
    Ok(verdict(&space, hit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn v(s: &str) -> TruthValue {
        s.parse().unwrap()
    }

    fn chain(s: &[&str]) -> Vec<TruthValue> {
        s.iter().map(|x| v(x)).collect()
    }

    fn a() -> Vec<AgentId> {
        vec![AgentId::new("a").unwrap()]
    }

    fn atoms(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn counts() {
        let s = ModelSpace::new(ModelSpaceParams::exhaustive(
            1,
            chain(&["0", "1"]),
            a(),
            atoms(&["p"]),
        ))
        .unwrap();
        assert_eq!(s.count(), 4);
        assert_eq!(s.models().count(), 4);
        let s = ModelSpace::new(ModelSpaceParams::exhaustive(
            2,
            chain(&["0", "1/2", "1"]),
            a(),
            atoms(&["p", "q"]),
        ))
        .unwrap();
        // one-world models: 3 access values times 3^2 valuations
        assert_eq!(s.count(), 6561 + 27);
    }

    #[test]
    fn enumeration_is_complete_and_duplicate_free() {
        let s = ModelSpace::new(ModelSpaceParams::exhaustive(
            2,
            chain(&["0", "1/2", "1"]),
            a(),
            atoms(&["p"]),
        ))
        .unwrap();
        let all: Vec<String> = s.models().map(|m| m.to_json()).collect();
        let distinct: std::collections::BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(all.len() as u128, s.count());
        assert_eq!(distinct.len(), all.len());
        // the chunked scan visits models in the same order
        let mut seen = Vec::new();
        let seen_ref = std::sync::Mutex::new(&mut seen);
        s.find_first::<(), _>(|m| {
            seen_ref.lock().unwrap().push(m.to_json());
            Ok(None)
        })
        .unwrap();
        assert_eq!(seen.len(), all.len());
    }

    #[test]
    fn random_mode_is_reproducible() {
        let p = ModelSpaceParams::exhaustive(2, chain(&["0", "1/2", "1"]), a(), atoms(&["p", "q"]))
            .with_mode(Mode::Random {
                samples: 50,
                seed: 7,
            });
        let s = ModelSpace::new(p.clone()).unwrap();
        let x: Vec<_> = s.models().collect();
        let y: Vec<_> = ModelSpace::new(p).unwrap().models().collect();
        assert_eq!(x.len(), 50);
        assert_eq!(x, y);
    }

    #[test]
    fn budget() {
        let p = ModelSpaceParams::exhaustive(3, chain(&["0", "1/2", "1"]), a(), atoms(&["p", "q"]));
        match ModelSpace::new(p.clone()) {
            Err(CheckError::BudgetExceeded { count, budget }) => {
                assert_eq!(count, 3u128.pow(15) + 3u128.pow(8) + 3u128.pow(3));
                assert_eq!(budget, DEFAULT_BUDGET);
            }
            other => panic!("{other:?}"),
        }
        // random sampling is not subject to the budget
        assert!(ModelSpace::new(p.with_mode(Mode::Random {
            samples: 10,
            seed: 1
        }))
        .is_ok());
    }

    #[test]
    fn invalid_params() {
        assert!(ModelSpace::new(ModelSpaceParams::exhaustive(
            1,
            chain(&["0", "1/2"]),
            a(),
            atoms(&["p"])
        ))
        .is_err());
        assert!(ModelSpace::new(ModelSpaceParams::exhaustive(
            0,
            chain(&["0", "1"]),
            a(),
            atoms(&["p"])
        ))
        .is_err());
        assert!(ModelSpace::new(ModelSpaceParams::exhaustive(
            1,
            chain(&["0", "1"]),
            vec![],
            atoms(&["p"])
        ))
        .is_err());
        assert!(ModelSpace::new(ModelSpaceParams::exhaustive(
            1,
            chain(&["0", "1"]),
            a(),
            atoms(&["P"])
        ))
        .is_err());
    }

    #[test]
    fn validity_examples() {
        let p = ModelSpaceParams::exhaustive(2, chain(&["0", "1/2", "1"]), a(), atoms(&["p", "q"]));
        let pa3 = parse("[V(p)>0](p & q) <-> ([V(p)>0]p & [V(p)>0]q)").unwrap();
        assert!(check_validity(&pa3, &p).unwrap().is_valid());
        assert!(check_validity(&parse("top").unwrap(), &p)
            .unwrap()
            .is_valid());

        let em = parse("p | ~p").unwrap();
        let verdict = check_validity(&em, &p).unwrap();
        let w = verdict.witness().expect("excluded middle fails");
        let at = w.model.world_index(&w.world).unwrap();
        assert_eq!(w.model.value(at, "p"), Some(&v("1/2")));
        assert_eq!(w.model.evaluate(&w.world, &em).unwrap(), w.value);
    }

    #[test]
    fn equivalence_examples() {
        let p = ModelSpaceParams::exhaustive(2, chain(&["0", "1/2", "1"]), a(), atoms(&["p"]));
        let (f, g) = (parse("V(p)=1/2").unwrap(), parse("D (p <-> #1/2)").unwrap());
        assert!(check_equivalence(&f, &g, &p).unwrap().is_valid());
        assert!(check_equivalence(&g, &f, &p).unwrap().is_valid());
        let h = parse("p").unwrap();
        let r = check_equivalence(&f, &h, &p).unwrap();
        let w = r.witness().unwrap();
        assert_eq!(w.model.evaluate(&w.world, &f).unwrap(), w.value);
        assert_eq!(Some(w.model.evaluate(&w.world, &h).unwrap()), w.other);
        assert!(!check_equivalence(&h, &f, &p).unwrap().is_valid());
    }

    #[test]
    fn first_witness_is_deterministic() {
        let p = ModelSpaceParams::exhaustive(2, chain(&["0", "1/2", "1"]), a(), atoms(&["p", "q"]));
        let f = parse("K{a} p -> q").unwrap();
        let w = check_validity(&f, &p).unwrap().witness().unwrap().clone();
        let space = ModelSpace::new(p).unwrap();
        let first = (0..space.count())
            .find(|&i| !space.model(i).globally_valid(&f).unwrap())
            .unwrap();
        assert_eq!(w.index, first);
    }

    #[test]
    fn constants_are_injected() {
        let c = extend_chain(&chain(&["0", "1"]), &[v("1/3")]);
        assert_eq!(c, chain(&["0", "1/6", "1/3", "2/3", "1"]));
        assert_eq!(
            extend_chain(&chain(&["0", "1/3", "1"]), &[v("1/3")]),
            chain(&["0", "1/3", "1"])
        );
        // V(p)>1/3 needs a value strictly above 1/3 and below 1 to be refuted as V(p)=1
        let p = ModelSpaceParams::exhaustive(1, chain(&["0", "1"]), a(), atoms(&["p"]));
        let f = parse("V(p)>1/3 -> V(p)=1").unwrap();
        assert!(!check_validity(&f, &p).unwrap().is_valid());
    }

    #[test]
    fn consequence() {
        let p = ModelSpaceParams::exhaustive(2, chain(&["0", "1/2", "1"]), a(), atoms(&["p", "q"]));
        let prem = [parse("p").unwrap(), parse("p -> q").unwrap()];
        assert!(check_consequence(&prem, &parse("q").unwrap(), &p)
            .unwrap()
            .is_valid());
        assert!(check_consequence(&prem, &parse("D p").unwrap(), &p)
            .unwrap()
            .is_valid());
        // local consequence does not license necessitation
        assert!(!check_consequence(&prem, &parse("K{a} p").unwrap(), &p)
            .unwrap()
            .is_valid());
    }

    #[test]
    fn params_json() {
        let p = ModelSpaceParams::from_json(
            r#"{"max_worlds":2,"chain":["0","1/2","1"],"agents":["a"],"atoms":["p"],"mode":{"random":{"samples":5,"seed":3}}}"#,
        )
        .unwrap();
        assert_eq!(
            p.mode,
            Mode::Random {
                samples: 5,
                seed: 3
            }
        );
        assert_eq!(p.budget, DEFAULT_BUDGET);
        let q = ModelSpaceParams::from_json(
            r#"{"max_worlds":1,"chain":["0","1"],"agents":["a"],"atoms":["p"],"mode":"exhaustive","budget":10}"#,
        )
        .unwrap();
        assert_eq!(q.mode, Mode::Exhaustive);
        assert!(ModelSpaceParams::from_json(r#"{"max_worlds":1}"#).is_err());
    }
}
