//! Exact computation with relative Rota-Baxter operators on finite-dimensional
//! Leibniz algebras over the rationals: axiom checking, the graded Lie bracket
//! controlling these operators, their cohomology, and linear/formal/order-n
//! deformation theory with obstruction classes.
//!
//! Everything is computed over arbitrary-precision rationals; all dimension
//! counts are exact rank decisions, never tolerance calls.

pub mod cohomology;
pub mod deformation;
pub mod fixtures;
pub mod graded_lie;
pub mod leibniz;
pub mod linalg;
pub mod rota_baxter;

pub use linalg::{Matrix, Rat};
