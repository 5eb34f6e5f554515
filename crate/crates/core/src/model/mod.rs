//! Finite multi-agent Gödel-Kripke models and their evaluation.
//!
//! Evaluation is bottom-up over a *domain*, a sorted list of world indices.
//! Each subformula is evaluated once at every world of the domain, so the
//! cost is linear in the formula size times the square of the domain size.
//! An announcement narrows the domain to the worlds where its body takes
//! value 1; the restricted model never needs to be materialized.

mod json;

use std::collections::BTreeMap;

use smallvec::SmallVec;
use thiserror::Error;

use crate::algebra::{delta, residuum, tnorm, TruthValue};
use crate::syntax::{is_announcement_body, AgentId, Formula};

pub use json::ModelFileError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(AgentId),
    #[error("atom `{atom}` has no value at world `{world}` and the model has no default")]
    MissingValuation { world: String, atom: String },
    #[error("`{0}` is not a legal announcement body")]
    NotAnnouncementBody(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a model needs at least one world")]
    NoWorlds,
    #[error("a model needs at least one agent")]
    NoAgents,
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
    #[error("duplicate agent `{0}`")]
    DuplicateAgent(AgentId),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(AgentId),
    #[error("invalid atom name `{0}`")]
    InvalidAtom(String),
}

pub(crate) type Values = SmallVec<[TruthValue; 4]>;
type Domain = SmallVec<[usize; 4]>;

/// A finite Gödel-Kripke model `(W, {r_a}, e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    worlds: Vec<String>,
    agents: Vec<AgentId>,
    /// Row-major `|W| x |W|` accessibility matrix per agent.
    access: Vec<Vec<TruthValue>>,
    /// Per-atom values indexed by world.
    valuation: BTreeMap<String, Vec<Option<TruthValue>>>,
    default: Option<TruthValue>,
}

impl KripkeModel {
    /// A model with all accessibility degrees 0 and an empty valuation.
    pub fn new(worlds: Vec<String>, agents: Vec<AgentId>) -> Result<Self, ModelError> {
        if worlds.is_empty() {
            return Err(ModelError::NoWorlds);
        }
        if agents.is_empty() {
            return Err(ModelError::NoAgents);
        }
        for (i, w) in worlds.iter().enumerate() {
            if worlds[..i].contains(w) {
                return Err(ModelError::DuplicateWorld(w.clone()));
            }
        }
        for (i, a) in agents.iter().enumerate() {
            if agents[..i].contains(a) {
                return Err(ModelError::DuplicateAgent(a.clone()));
            }
        }
        let n = worlds.len();
        Ok(KripkeModel {
            access: vec![vec![TruthValue::ZERO; n * n]; agents.len()],
            worlds,
            agents,
            valuation: BTreeMap::new(),
            default: None,
        })
    }

    /// Sets the value used for atoms without an explicit valuation.
    pub fn with_default(mut self, default: Option<TruthValue>) -> Self {
        self.default = default;
        self
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn agents(&self) -> &[AgentId] {
        &self.agents
    }

    pub fn default_value(&self) -> Option<&TruthValue> {
        self.default.as_ref()
    }

    /// Atoms with at least one explicit value.
    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.valuation.keys().map(String::as_str)
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn agent_index(&self, agent: &AgentId) -> Option<usize> {
        self.agents.iter().position(|a| a == agent)
    }

    pub fn access(&self, agent: usize, from: usize, to: usize) -> &TruthValue {
        &self.access[agent][from * self.worlds.len() + to]
    }

    pub fn set_access(&mut self, agent: usize, from: usize, to: usize, v: TruthValue) {
        let n = self.worlds.len();
        self.access[agent][from * n + to] = v;
    }

    /// Explicit value of `atom` at `world`, if any.
    pub fn value(&self, world: usize, atom: &str) -> Option<&TruthValue> {
        self.valuation.get(atom).and_then(|vs| vs[world].as_ref())
    }

    pub fn set_value(&mut self, world: usize, atom: &str, v: TruthValue) -> Result<(), ModelError> {
        let n = self.worlds.len();
        match self.valuation.get_mut(atom) {
            Some(vs) => vs[world] = Some(v),
            None => {
                if !crate::syntax::is_atom_name(atom) {
                    return Err(ModelError::InvalidAtom(atom.to_string()));
                }
                let mut vs = vec![None; n];
                vs[world] = Some(v);
                self.valuation.insert(atom.to_string(), vs);
            }
        }
        Ok(())
    }

    fn all_worlds(&self) -> Domain {
        (0..self.worlds.len()).collect()
    }

    /// `e'(w, f)` at the named world.
    pub fn evaluate(&self, world: &str, f: &Formula) -> Result<TruthValue, EvalError> {
        let w = self
            .world_index(world)
            .ok_or_else(|| EvalError::UnknownWorld(world.to_string()))?;
        Ok(self.evaluate_all(f)?.swap_remove(w))
    }

    /// `e'(w, f)` for every world, in world order.
    pub fn evaluate_all(&self, f: &Formula) -> Result<Vec<TruthValue>, EvalError> {
        Ok(self.eval_on(&self.all_worlds(), f)?.into_vec())
    }

    /// `(M, w) |= f`: the value at `world` is exactly 1.
    pub fn locally_valid(&self, world: &str, f: &Formula) -> Result<bool, EvalError> {
        Ok(self.evaluate(world, f)?.is_one())
    }

    /// `M |= f`: the value is 1 at every world.
    pub fn globally_valid(&self, f: &Formula) -> Result<bool, EvalError> {
        Ok(self.evaluate_all(f)?.iter().all(TruthValue::is_one))
    }

    /// The model restricted to the worlds where `announcement` takes value 1.
    pub fn restrict(&self, announcement: &Formula) -> Result<RestrictedModel<'_>, EvalError> {
        RestrictedModel::full(self).restrict(announcement)
    }

    pub(crate) fn eval_on(&self, dom: &[usize], f: &Formula) -> Result<Values, EvalError> {
        Ok(match f {
            Formula::Bottom => dom.iter().map(|_| TruthValue::ZERO).collect(),
            Formula::Constant(c) => dom.iter().map(|_| c.clone()).collect(),
            Formula::Atom(p) => {
                let vs = self.valuation.get(p);
                dom.iter()
                    .map(|&w| {
                        vs.and_then(|vs| vs[w].as_ref())
                            .or(self.default.as_ref())
                            .cloned()
                            .ok_or_else(|| EvalError::MissingValuation {
                                world: self.worlds[w].clone(),
                                atom: p.clone(),
                            })
                    })
                    .collect::<Result<_, _>>()?
            }
            Formula::And(a, b) => {
                let (x, y) = (self.eval_on(dom, a)?, self.eval_on(dom, b)?);
                x.iter().zip(&y).map(|(x, y)| tnorm(x, y)).collect()
            }
            Formula::Implies(a, b) => {
                let (x, y) = (self.eval_on(dom, a)?, self.eval_on(dom, b)?);
                x.iter().zip(&y).map(|(x, y)| residuum(x, y)).collect()
            }
            Formula::Delta(a) => self.eval_on(dom, a)?.iter().map(delta).collect(),
            Formula::Know(agent, a) => {
                let ai = self
                    .agent_index(agent)
                    .ok_or_else(|| EvalError::UnknownAgent(agent.clone()))?;
                let inner = self.eval_on(dom, a)?;
                let n = self.worlds.len();
                let row = &self.access[ai];
                dom.iter()
                    .map(|&w| {
                        // min over an empty domain is 1
                        let mut acc = TruthValue::ONE;
                        for (&v, val) in dom.iter().zip(&inner) {
                            let r = residuum(&row[w * n + v], val);
                            if r < acc {
                                acc = r;
                                if acc.is_zero() {
                                    break;
                                }
                            }
                        }
                        acc
                    })
                    .collect()
            }
            Formula::Announce(l, a) => {
                let lv = self.eval_on(dom, l)?;
                let sub: Domain = dom
                    .iter()
                    .zip(&lv)
                    .filter(|(_, v)| v.is_one())
                    .map(|(&w, _)| w)
                    .collect();
                if sub.is_empty() {
                    dom.iter().map(|_| TruthValue::ONE).collect()
                } else {
                    let mut inner = self.eval_on(&sub, a)?.into_iter();
                    lv.iter()
                        .map(|v| {
                            if v.is_one() {
                                inner.next().expect("one value per survivor")
                            } else {
                                TruthValue::ONE
                            }
                        })
                        .collect()
                }
            }
            Formula::ValEq(s, c) => self
                .eval_on(dom, s)?
                .iter()
                .map(|v| TruthValue::from_bool(v == c))
                .collect(),
            Formula::ValGt(s, c) => self
                .eval_on(dom, s)?
                .iter()
                .map(|v| TruthValue::from_bool(v > c))
                .collect(),
        })
    }
}

/// A model restricted to a subset of the worlds of a base model.
///
/// Accessibility and valuation are inherited from the base model; only the
/// domain shrinks. The domain may be empty.
#[derive(Debug, Clone)]
pub struct RestrictedModel<'a> {
    base: &'a KripkeModel,
    surviving: Vec<usize>,
}

impl<'a> RestrictedModel<'a> {
    /// The trivial restriction keeping every world.
    pub fn full(base: &'a KripkeModel) -> Self {
        RestrictedModel {
            base,
            surviving: (0..base.worlds.len()).collect(),
        }
    }

    pub fn base(&self) -> &'a KripkeModel {
        self.base
    }

    /// Indices (into the base model) of the surviving worlds.
    pub fn surviving(&self) -> &[usize] {
        &self.surviving
    }

    pub fn surviving_names(&self) -> Vec<&'a str> {
        self.surviving
            .iter()
            .map(|&w| self.base.worlds[w].as_str())
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.surviving.is_empty()
    }

    /// Restricts further by `announcement`, evaluated inside this model.
    pub fn restrict(&self, announcement: &Formula) -> Result<RestrictedModel<'a>, EvalError> {
        if !is_announcement_body(announcement) {
            return Err(EvalError::NotAnnouncementBody(announcement.to_string()));
        }
        let vals = self.base.eval_on(&self.surviving, announcement)?;
        let surviving = self
            .surviving
            .iter()
            .zip(&vals)
            .filter(|(_, v)| v.is_one())
            .map(|(&w, _)| w)
            .collect();
        Ok(RestrictedModel {
            base: self.base,
            surviving,
        })
    }

    /// Value at a surviving world, computed inside the restricted model.
    pub fn evaluate(&self, world: &str, f: &Formula) -> Result<TruthValue, EvalError> {
        let pos = self
            .surviving
            .iter()
            .position(|&w| self.base.worlds[w] == world)
            .ok_or_else(|| EvalError::UnknownWorld(world.to_string()))?;
        Ok(self.base.eval_on(&self.surviving, f)?.swap_remove(pos))
    }

    /// Values at every surviving world, in order.
    pub fn evaluate_all(&self, f: &Formula) -> Result<Vec<TruthValue>, EvalError> {
        Ok(self.base.eval_on(&self.surviving, f)?.into_vec())
    }

    /// Materializes the restriction as a standalone model (possibly with no worlds).
    pub fn to_model(&self) -> KripkeModel {
        let b = self.base;
        let n = b.worlds.len();
        let access = b
            .access
            .iter()
            .map(|row| {
                let mut out = Vec::with_capacity(self.surviving.len().pow(2));
                for &w in &self.surviving {
                    for &v in &self.surviving {
                        out.push(row[w * n + v].clone());
                    }
                }
                out
            })
            .collect();
        let valuation = b
            .valuation
            .iter()
            .map(|(p, vs)| {
                (
                    p.clone(),
                    self.surviving.iter().map(|&w| vs[w].clone()).collect(),
                )
            })
            .collect();
        KripkeModel {
            worlds: self
                .surviving
                .iter()
                .map(|&w| b.worlds[w].clone())
                .collect(),
            agents: b.agents.clone(),
            access,
            valuation,
            default: b.default.clone(),
        }
    }
}
