use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Quiver, RationalFunction, VertexId};
use crate::error::{Error, Result};

/// A quiver with one cluster variable per vertex.
///
/// Variables live in the field of rational functions in the initial
/// variables, one per vertex, named `x_<id>` (`x_{<id>}` for negative ids).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    quiver: Quiver,
    names: Vec<String>,
    vars: BTreeMap<VertexId, RationalFunction>,
}

pub fn variable_name(id: VertexId) -> String {
    if id < 0 {
        format!("x_{{{id}}}")
    } else {
        format!("x_{id}")
    }
}

impl Seed {
    /// The initial seed: vertex `k` carries the variable `x_k`.
    pub fn initial(quiver: Quiver) -> Self {
        let mut ids: Vec<VertexId> = quiver.vertex_ids().collect();
        ids.sort();
        let n = ids.len();
        let names = ids.iter().map(|&id| variable_name(id)).collect();
        let vars = ids
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, RationalFunction::var(n, i)))
            .collect();
        Self {
            quiver,
            names,
            vars,
        }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn variable(&self, k: VertexId) -> Option<&RationalFunction> {
        self.vars.get(&k)
    }

    pub fn variables(&self) -> impl Iterator<Item = (VertexId, &RationalFunction)> {
        self.vars.iter().map(|(k, v)| (*k, v))
    }

    pub fn render(&self, f: &RationalFunction) -> String {
        f.to_string_with(&self.names)
    }

    /// Products of the neighbours of `k` over outgoing and incoming arrows.
    pub fn exchange_monomials(&self, k: VertexId) -> (RationalFunction, RationalFunction) {
        let n = self.names.len();
        let mut out = RationalFunction::one(n);
        let mut inc = RationalFunction::one(n);
        for a in self.quiver.arrows() {
            if a.src == k {
                out = out.mul(&self.vars[&a.tgt]);
            } else if a.tgt == k {
                inc = inc.mul(&self.vars[&a.src]);
            }
        }
        (out, inc)
    }

    pub fn mutate(&self, k: VertexId) -> Result<Seed> {
        let quiver = self.quiver.mutate(k)?;
        let (out, inc) = self.exchange_monomials(k);
        let new = out.add(&inc).div(&self.vars[&k])?;
        let mut vars = self.vars.clone();
        vars.insert(k, new);
        Ok(Seed {
            quiver,
            names: self.names.clone(),
            vars,
        })
    }

    pub fn to_json(&self) -> SeedJson {
        SeedJson {
            quiver: self.quiver.clone(),
            variables: self
                .vars
                .iter()
                .zip(&self.names)
                .map(|((&vertex, value), name)| VariableJson {
                    vertex,
                    name: name.clone(),
                    value: self.render(value),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &SeedJson) -> Result<Seed> {
        let mut ids: Vec<VertexId> = j.quiver.vertex_ids().collect();
        ids.sort();
        let listed: Vec<VertexId> = j.variables.iter().map(|v| v.vertex).collect();
        if listed != ids {
            return Err(Error::Parse(
                "seed must list one variable per vertex, sorted by vertex id".into(),
            ));
        }
        let names: Vec<String> = j.variables.iter().map(|v| v.name.clone()).collect();
        let vars = j
            .variables
            .iter()
            .map(|v| Ok((v.vertex, RationalFunction::parse(&v.value, &names)?)))
            .collect::<Result<_>>()?;
        Ok(Seed {
            quiver: j.quiver.clone(),
            names,
            vars,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeedJson {
    pub quiver: Quiver,
    pub variables: Vec<VariableJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableJson {
    pub vertex: VertexId,
    pub name: String,
    pub value: String,
}
