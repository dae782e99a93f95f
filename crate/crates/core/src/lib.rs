//! BFZ quivers of double Bruhat cells, realized as dimer models on the
//! cylinder over a Dynkin diagram, with machine-checked rigidity
//! certificates for their superpotentials.
//!
//! The pipeline runs [`cartan`] → [`bfz`] → [`cylinder`] → [`potential`]:
//! build a Cartan matrix and a shuffled reduced word, construct the quiver,
//! lay it out on strings and sheets, trace faces, and certify that every
//! cycle lies in the Jacobian ideal of the superpotential. [`quiver`] holds
//! the quiver and seed mutation used throughout.

pub mod bfz;
pub mod cartan;
pub mod cylinder;
pub mod error;
pub mod exec;
pub mod potential;
pub mod quiver;
pub mod sweep;

pub use error::{Error, Result};
pub use exec::Execution;
