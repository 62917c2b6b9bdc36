//! Decomposition of finite-dimensional unitary representations into irreducible
//! components, Clebsch-Gordan coefficient extraction, and tomographic state
//! analysis.
//!
//! The core pipeline reduces a unitary representation of a finite group or of
//! SU(2) (given as a tensor product of spins) by diagonalizing two generic
//! commuting density matrices built from the representation itself ("adapted
//! states"). The change of basis it produces — the Clebsch-Gordan matrix —
//! block-diagonalizes every representation matrix simultaneously, revealing the
//! multiplicities and dimensions of the irreducible constituents.
//!
//! Modules:
//! - [`numerics`]: complex dense matrices, Hermitian eigendecomposition with a
//!   deterministic phase convention, eigenvalue clustering, tolerances.
//! - [`groups`]: Cayley tables, regular representations, SU(2) generators and
//!   tensor products.
//! - [`states`]: generic adapted density matrices (complex and real variants).
//! - [`smily`]: the eight-step reduction algorithm and its verification.
//! - [`cg`]: Clebsch-Gordan matrices/tables for spin systems and the
//!   ladder-operator oracle.
//! - [`tomography`]: smeared characters, group/spin tomograms, oscillator and
//!   classical (Radon) tomograms with numerical oracles.
//! - [`cli`]: the command-line front end used by the `repdecomp` binary.

pub mod cg;
pub mod cli;
pub mod groups;
pub mod numerics;
pub mod smily;
pub mod states;
pub mod tomography;

pub use numerics::{CMatrix, TolerancePolicy};
