//! Batch runs over many double Bruhat cells.
//!
//! An [`Instance`] bundles everything derived from one shuffled word. The
//! sweep drivers fan instances out through [`Execution`]; when the sweep
//! itself is parallel the per-instance work stays sequential so rayon is
//! not asked to nest.

use serde::Serialize;

use crate::bfz::{build_bfz_quiver_with, BfzQuiver, FrozenArrows, Interleaving, ShuffledWord};
use crate::cartan::{GeneralizedCartanMatrix, WeylWord};
use crate::cylinder::{branch_decompose, check_dimer_with, enumerate_faces, layout, CylinderLayout, DimerReport, Face};
use crate::error::Result;
use crate::exec::Execution;
use crate::potential::{rigidity_check, superpotential, Potential, RigidityOptions, RigidityReport};

#[derive(Debug, Clone)]
pub struct Instance {
    pub gcm: GeneralizedCartanMatrix,
    pub quiver: BfzQuiver,
    pub layout: CylinderLayout,
    pub faces: Vec<Face>,
    pub potential: Potential,
}

impl Instance {
    pub fn build(gcm: &GeneralizedCartanMatrix, word: &ShuffledWord, frozen: FrozenArrows) -> Result<Self> {
        let quiver = build_bfz_quiver_with(gcm, word, frozen)?;
        let layout = layout(&quiver, &branch_decompose(&gcm.dynkin())?)?;
        let faces = enumerate_faces(quiver.quiver(), &layout)?;
        let potential = superpotential(quiver.quiver(), &faces)?;
        Ok(Self {
            gcm: gcm.clone(),
            quiver,
            layout,
            faces,
            potential,
        })
    }

    /// The cell for `(u, e)`.
    pub fn for_u(gcm: &GeneralizedCartanMatrix, u: &WeylWord, frozen: FrozenArrows) -> Result<Self> {
        let v = WeylWord::identity();
        let word = ShuffledWord::new(gcm, u, &v, &Interleaving::u_first(u.len(), 0))?;
        Self::build(gcm, &word, frozen)
    }

    pub fn word(&self) -> &ShuffledWord {
        self.quiver.word().expect("instances are built from a word")
    }

    pub fn dimer(&self, exec: Execution) -> DimerReport {
        check_dimer_with(self.quiver.quiver(), &self.layout, exec)
    }

    pub fn rigidity(&self, opts: &RigidityOptions) -> Result<RigidityReport> {
        rigidity_check(self.quiver.quiver(), Some(&self.layout), &self.faces, &self.potential, opts)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceSummary {
    pub cartan: String,
    pub u: String,
    pub vertices: usize,
    pub arrows: usize,
    pub faces: usize,
    pub dimer: bool,
    pub rigid: bool,
    pub cycles: usize,
    pub oracle_only: usize,
    pub multi_sheet: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SweepReport {
    pub instances: Vec<InstanceSummary>,
    pub errors: Vec<String>,
}

impl SweepReport {
    pub fn all_dimer(&self) -> bool {
        self.errors.is_empty() && self.instances.iter().all(|i| i.dimer)
    }

    pub fn all_rigid(&self) -> bool {
        self.errors.is_empty() && self.instances.iter().all(|i| i.rigid)
    }

    pub fn cycles(&self) -> usize {
        self.instances.iter().map(|i| i.cycles).sum()
    }
}

fn summarize(gcm: &GeneralizedCartanMatrix, u: &WeylWord, frozen: FrozenArrows, inner: Execution) -> Result<InstanceSummary> {
    let inst = Instance::for_u(gcm, u, frozen)?;
    let dimer = inst.dimer(inner).passes();
    let opts = RigidityOptions {
        exec: inner,
        ..RigidityOptions::default()
    };
    let r = inst.rigidity(&opts)?;
    Ok(InstanceSummary {
        cartan: gcm.name().unwrap_or("custom").to_string(),
        u: u.to_string(),
        vertices: inst.quiver.quiver().vertices().len(),
        arrows: inst.quiver.quiver().arrows().len(),
        faces: inst.faces.len(),
        dimer,
        rigid: r.verdict.rigid,
        cycles: r.verdict.cycles_total,
        oracle_only: r.verdict.oracle_only,
        multi_sheet: r.verdict.multi_sheet,
    })
}

/// Builds, checks and certifies the cell `(u, e)` for every word.
pub fn sweep(gcm: &GeneralizedCartanMatrix, words: &[WeylWord], frozen: FrozenArrows, exec: Execution) -> SweepReport {
    let inner = if exec.is_parallel() { Execution::Sequential } else { exec };
    let mut report = SweepReport::default();
    for (u, r) in words.iter().zip(exec.map(words, |u| summarize(gcm, u, frozen, inner))) {
        match r {
            Ok(s) => report.instances.push(s),
            Err(e) => report.errors.push(format!("{u}: {e}")),
        }
    }
    report
}
