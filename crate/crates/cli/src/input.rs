//! Where a quiver comes from: build arguments or a JSON file.

use std::path::Path;

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use dimerbfz::bfz::{build_bfz_quiver_with, BfzQuiver, BfzQuiverJson, FrozenArrows, Interleaving, ShuffledWord};
use dimerbfz::cartan::{GeneralizedCartanMatrix, WeylWord};
use dimerbfz::cylinder::{branch_decompose, enumerate_faces, layout, CylinderLayout, Face};
use dimerbfz::potential::{superpotential, Potential, PotentialJson};
use dimerbfz::quiver::Quiver;

use crate::CliError;

/// A double Bruhat cell given on the command line.
#[derive(Debug, Clone, Args)]
pub struct CellArgs {
    /// Cartan type such as A3, D4, E6, or a JSON matrix like [[2,-1],[-1,2]].
    #[arg(long = "type", value_name = "TYPE")]
    pub cartan: Option<String>,
    /// Reduced word for u, letters separated by spaces.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub u: String,
    /// Reduced word for v.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub v: String,
    /// Shuffle of u and v as 0/1 digits (0 takes from u); default is u then v.
    #[arg(long)]
    pub interleave: Option<String>,
    /// Whether frozen last occurrences on adjacent strings are joined.
    #[arg(long, default_value = "boundary", value_name = "omit|boundary")]
    pub frozen_arrows: FrozenArrows,
}

/// Build arguments or a quiver file.
#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    #[command(flatten)]
    pub cell: CellArgs,
    /// Read the quiver from a JSON file (the `build --format json` output, or a bare quiver).
    #[arg(long, value_name = "FILE", conflicts_with = "cartan")]
    pub quiver: Option<std::path::PathBuf>,
}

/// Build parameters in a form that can be stored and replayed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSpec {
    pub cartan: Value,
    pub u: String,
    pub v: String,
    pub interleave: String,
    pub frozen_arrows: FrozenArrows,
}

/// A quiver together with whatever cylinder data is available for it.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub quiver: Quiver,
    pub cell: Option<Cell>,
    pub spec: Option<CellSpec>,
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub gcm: GeneralizedCartanMatrix,
    pub bfz: BfzQuiver,
    pub layout: CylinderLayout,
}

impl Cell {
    pub fn faces(&self) -> dimerbfz::Result<Vec<Face>> {
        enumerate_faces(self.bfz.quiver(), &self.layout)
    }
}

pub fn cartan_json(g: &GeneralizedCartanMatrix) -> Value {
    match g.name() {
        Some(n) => Value::String(n.to_string()),
        None => serde_json::to_value(g.entries()).unwrap(),
    }
}

fn parse_cartan(v: &Value) -> Result<GeneralizedCartanMatrix, CliError> {
    let text = match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    Ok(text.parse()?)
}

fn interleave_string(i: &Interleaving) -> String {
    i.0.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl CellArgs {
    pub fn spec(&self) -> Result<CellSpec, CliError> {
        let cartan = self
            .cartan
            .as_deref()
            .ok_or_else(|| CliError::Input("give --type or --quiver".into()))?;
        let cartan = if cartan.trim_start().starts_with('[') {
            serde_json::from_str(cartan).map_err(|e| CliError::Input(format!("matrix: {e}")))?
        } else {
            Value::String(cartan.to_string())
        };
        let (u, v): (WeylWord, WeylWord) = (self.u.parse()?, self.v.parse()?);
        let interleave = match &self.interleave {
            Some(s) => s.parse::<Interleaving>()?,
            None => Interleaving::u_first(u.len(), v.len()),
        };
        Ok(CellSpec {
            cartan,
            u: u.to_string(),
            v: v.to_string(),
            interleave: interleave_string(&interleave),
            frozen_arrows: self.frozen_arrows,
        })
    }
}

impl CellSpec {
    pub fn build(&self) -> Result<Cell, CliError> {
        let gcm = parse_cartan(&self.cartan)?;
        let (u, v): (WeylWord, WeylWord) = (self.u.parse()?, self.v.parse()?);
        let il: Interleaving = self.interleave.parse()?;
        let word = ShuffledWord::new(&gcm, &u, &v, &il)?;
        let bfz = build_bfz_quiver_with(&gcm, &word, self.frozen_arrows)?;
        let layout = layout(&bfz, &branch_decompose(&gcm.dynkin())?)?;
        Ok(Cell { gcm, bfz, layout })
    }
}

/// The `build --format json` document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellFile {
    pub cartan: Value,
    #[serde(flatten, default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<CellFileSpec>,
    pub quiver: BfzQuiverJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<dimerbfz::cylinder::LayoutJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellFileSpec {
    pub u: String,
    pub v: String,
    pub interleave: String,
    pub frozen_arrows: FrozenArrows,
}

impl CellFile {
    pub fn new(spec: &CellSpec, cell: &Cell) -> Self {
        CellFile {
            cartan: spec.cartan.clone(),
            spec: Some(CellFileSpec {
                u: spec.u.clone(),
                v: spec.v.clone(),
                interleave: spec.interleave.clone(),
                frozen_arrows: spec.frozen_arrows,
            }),
            quiver: cell.bfz.to_json(),
            layout: Some(cell.layout.to_json()),
        }
    }
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Reads either a cell document (with `cartan`) or a bare quiver.
pub fn load_file(path: &Path) -> Result<Loaded, CliError> {
    let value = read_json(path)?;
    if value.get("cartan").is_some() {
        let file: CellFile = serde_json::from_value(value).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let gcm = parse_cartan(&file.cartan)?;
        let bfz = BfzQuiver::from_json(&gcm, &file.quiver)?;
        let layout = layout(&bfz, &branch_decompose(&gcm.dynkin())?)?;
        // A hand-edited quiver no longer matches its cell, so keep only the quiver.
        let spec = file
            .spec
            .map(|s| CellSpec {
                cartan: file.cartan.clone(),
                u: s.u,
                v: s.v,
                interleave: s.interleave,
                frozen_arrows: s.frozen_arrows,
            })
            .filter(|s| s.build().is_ok_and(|c| c.bfz.quiver() == bfz.quiver()));
        Ok(Loaded {
            quiver: bfz.quiver().clone(),
            cell: Some(Cell { gcm, bfz, layout }),
            spec,
        })
    } else {
        let quiver: Quiver =
            serde_json::from_value(value).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Ok(Loaded {
            quiver,
            cell: None,
            spec: None,
        })
    }
}

impl SourceArgs {
    pub fn load(&self) -> Result<Loaded, CliError> {
        match &self.quiver {
            Some(path) => load_file(path),
            None => {
                let spec = self.cell.spec()?;
                let cell = spec.build()?;
                Ok(Loaded {
                    quiver: cell.bfz.quiver().clone(),
                    cell: Some(cell),
                    spec: Some(spec),
                })
            }
        }
    }
}

/// The potential from `--potential`, else the superpotential of the faces.
pub fn potential(loaded: &Loaded, file: Option<&Path>) -> Result<(Potential, Vec<Face>), CliError> {
    let faces = match &loaded.cell {
        Some(c) => c.faces()?,
        None => Vec::new(),
    };
    let s = match file {
        Some(path) => {
            let j: PotentialJson = serde_json::from_value(read_json(path)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Potential::from_json(&loaded.quiver, &j)?
        }
        None if loaded.cell.is_some() => superpotential(&loaded.quiver, &faces)?,
        None => return Err(CliError::Input("a bare quiver needs --potential".into())),
    };
    Ok((s, faces))
}
