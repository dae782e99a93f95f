//! A seed being mutated step by step, with the history needed to rebuild it.

use serde::{Deserialize, Serialize};

use dimerbfz::quiver::{variable_name, Quiver, Seed, SeedJson, VertexId};

use crate::input::{Cell, CellSpec, Loaded};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Cell(CellSpec),
    Quiver(Quiver),
}

#[derive(Debug, Clone)]
pub struct Session {
    origin: Origin,
    cell: Option<Cell>,
    initial: Seed,
    seed: Seed,
    history: Vec<VertexId>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionJson {
    pub origin: Origin,
    pub history: Vec<VertexId>,
    pub seed: SeedJson,
}

/// `x'_k`, the name shown for a freshly exchanged variable.
pub fn primed(k: VertexId) -> String {
    let name = variable_name(k);
    format!("x'{}", &name[1..])
}

impl Session {
    pub fn new(loaded: Loaded) -> Self {
        let origin = match &loaded.spec {
            Some(spec) => Origin::Cell(spec.clone()),
            None => Origin::Quiver(loaded.quiver.clone()),
        };
        // Mutation returns canonical arrow order, so start from it too.
        let initial = Seed::initial(loaded.quiver.canonical());
        Session {
            origin,
            cell: loaded.cell,
            seed: initial.clone(),
            initial,
            history: Vec::new(),
        }
    }

    pub fn from_origin(origin: Origin) -> Result<Self, CliError> {
        let loaded = match &origin {
            Origin::Cell(spec) => {
                let cell = spec.build()?;
                Loaded {
                    quiver: cell.bfz.quiver().clone(),
                    cell: Some(cell),
                    spec: Some(spec.clone()),
                }
            }
            Origin::Quiver(q) => Loaded {
                quiver: q.clone(),
                cell: None,
                spec: None,
            },
        };
        Ok(Session::new(loaded))
    }

    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    pub fn initial(&self) -> &Seed {
        &self.initial
    }

    pub fn history(&self) -> &[VertexId] {
        &self.history
    }

    pub fn cell(&self) -> Option<&Cell> {
        self.cell.as_ref()
    }

    pub fn mutate(&self, k: VertexId) -> Result<Session, dimerbfz::Error> {
        let seed = self.seed.mutate(k)?;
        let mut history = self.history.clone();
        history.push(k);
        Ok(Session {
            seed,
            history,
            ..self.clone()
        })
    }

    pub fn reset(&self) -> Session {
        Session {
            seed: self.initial.clone(),
            history: Vec::new(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> SessionJson {
        SessionJson {
            origin: self.origin.clone(),
            history: self.history.clone(),
            seed: self.seed.to_json(),
        }
    }

    /// Rebuilds the session by replaying the history and checks the stored seed.
    pub fn from_json(j: &SessionJson) -> Result<Session, CliError> {
        let mut s = Session::from_origin(j.origin.clone())?;
        for &k in &j.history {
            s = s.mutate(k)?;
        }
        let stored = Seed::from_json(&j.seed)?;
        let same = stored.quiver() == s.seed.quiver()
            && stored.variables().count() == s.seed.variables().count()
            && stored
                .variables()
                .all(|(v, f)| s.seed.variable(v).is_some_and(|g| g.equals(f)));
        if !same {
            return Err(CliError::Input("stored seed does not match the replayed history".into()));
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::CellSpec;

    fn example() -> Session {
        let spec: CellSpec = serde_json::from_value(serde_json::json!({
            "cartan": "A3", "u": "3 2 1 2 3", "v": "", "interleave": "00000", "frozen_arrows": "boundary"
        }))
        .unwrap();
        Session::from_origin(Origin::Cell(spec)).unwrap()
    }

    #[test]
    fn primed_names() {
        assert_eq!(primed(2), "x'_2");
        assert_eq!(primed(-3), "x'_{-3}");
    }

    #[test]
    fn json_replays_history() {
        let s = example().mutate(2).unwrap().mutate(-1).unwrap();
        let back = Session::from_json(&s.to_json()).unwrap();
        assert_eq!(back.history(), [2, -1]);
        assert_eq!(back.seed().quiver(), s.seed().quiver());
        assert_eq!(back.reset().seed().quiver(), s.initial().quiver());
    }

    #[test]
    fn frozen_vertex_is_refused() {
        assert!(matches!(example().mutate(3), Err(dimerbfz::Error::FrozenVertex(3))));
    }
}
