//! Numerical workbench for SU(d)-covariant valence-bond-solid quasi-exact
//! codes: Knill-Laflamme analysis with canonical recovery, transfer-matrix
//! contraction of the VBS code, and quasi-universality accounting.

pub mod cli;
pub mod error;
pub mod linalg;
pub mod qec;
pub mod quantum_ops;
pub mod quasi;
pub mod sampling;
pub mod su_algebra;
pub mod vbs;

pub use error::{QxError, Result};
