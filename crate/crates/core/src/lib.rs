//! Numerical core for bipartite non-entangling unitaries and measurement
//! schemes on finite-dimensional spaces `H1 ⊗ H2`.
//!
//! The crate is `no_std` (it needs `alloc`). Index convention throughout:
//! component `i·d2 + j` of a bipartite vector is the amplitude on
//! `e_i ⊗ f_j`.

#![no_std]

extern crate alloc;

pub mod bipartite;
pub mod classifier;
pub mod dynamics;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod matrix;
pub mod measurement;
pub mod random;

pub use error::{Error, Result};
pub use matrix::{adjoint, tensor_product, ComplexMatrix, Tolerance, C64};
pub use random::RngSeed;
