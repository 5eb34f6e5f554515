//! JSON model files.
//!
//! ```json
//! { "worlds": ["w1", "w2"],
//!   "agents": ["a"],
//!   "default": "0",
//!   "valuation": { "w1": { "p": "1/2" } },
//!   "access": { "a": [["w1", "w2", "7/10"]] } }
//! ```
//!
//! Unlisted access pairs are 0. `default` is optional.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{KripkeModel, ModelError};
use crate::algebra::{TruthValue, ValueError};
use crate::syntax::AgentId;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{context}: {source}")]
    Value {
        context: String,
        #[source]
        source: ValueError,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid agent name `{0}`")]
    InvalidAgent(String),
    #[error("duplicate access triple for agent `{agent}` from `{from}` to `{to}`")]
    DuplicateAccess {
        agent: String,
        from: String,
        to: String,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    worlds: Vec<String>,
    agents: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    default: Option<String>,
    #[serde(default)]
    valuation: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    access: BTreeMap<String, Vec<(String, String, String)>>,
}

fn value(raw: &str, context: impl FnOnce() -> String) -> Result<TruthValue, ModelFileError> {
    raw.parse().map_err(|source| ModelFileError::Value {
        context: context(),
        source,
    })
}

impl KripkeModel {
    pub fn from_json(text: &str) -> Result<Self, ModelFileError> {
        let file: ModelFile = serde_json::from_str(text)?;
        let agents = file
            .agents
            .iter()
            .map(|a| AgentId::new(a.clone()).ok_or_else(|| ModelFileError::InvalidAgent(a.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let default = match &file.default {
            Some(d) => Some(value(d, || "default".to_string())?),
            None => None,
        };
        let mut m = KripkeModel::new(file.worlds.clone(), agents)?.with_default(default);
        for (world, vals) in &file.valuation {
            let w = m
                .world_index(world)
                .ok_or_else(|| ModelError::UnknownWorld(world.clone()))?;
            for (atom, raw) in vals {
                let v = value(raw, || format!("valuation of `{atom}` at `{world}`"))?;
                m.set_value(w, atom, v)?;
            }
        }
        for (agent, triples) in &file.access {
            let id = AgentId::new(agent.clone())
                .ok_or_else(|| ModelFileError::InvalidAgent(agent.clone()))?;
            let a = m.agent_index(&id).ok_or(ModelError::UnknownAgent(id))?;
            let mut seen = BTreeSet::new();
            for (from, to, raw) in triples {
                let i = m
                    .world_index(from)
                    .ok_or_else(|| ModelError::UnknownWorld(from.clone()))?;
                let j = m
                    .world_index(to)
                    .ok_or_else(|| ModelError::UnknownWorld(to.clone()))?;
                if !seen.insert((i, j)) {
                    return Err(ModelFileError::DuplicateAccess {
                        agent: agent.clone(),
                        from: from.clone(),
                        to: to.clone(),
                    });
                }
                let v = value(raw, || {
                    format!("access of `{agent}` from `{from}` to `{to}`")
                })?;
                m.set_access(a, i, j, v);
            }
        }
        Ok(m)
    }

    /// Serializes in the model file format. Zero access degrees are omitted.
    pub fn to_json(&self) -> String {
        let n = self.worlds.len();
        let valuation = self
            .worlds
            .iter()
            .enumerate()
            .map(|(w, name)| {
                let vals = self
                    .valuation
                    .iter()
                    .filter_map(|(p, vs)| vs[w].as_ref().map(|v| (p.clone(), v.to_string())))
                    .collect();
                (name.clone(), vals)
            })
            .collect();
        let access = self
            .agents
            .iter()
            .zip(&self.access)
            .map(|(a, row)| {
                let mut triples = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        let r = &row[i * n + j];
                        if !r.is_zero() {
                            triples.push((
                                self.worlds[i].clone(),
                                self.worlds[j].clone(),
                                r.to_string(),
                            ));
                        }
                    }
                }
                (a.to_string(), triples)
            })
            .collect();
        let file = ModelFile {
            worlds: self.worlds.clone(),
            agents: self.agents.iter().map(ToString::to_string).collect(),
            default: self.default.as_ref().map(ToString::to_string),
            valuation,
            access,
        };
        serde_json::to_string_pretty(&file).expect("model files always serialize")
    }
}
