//! Exact computations with semilinear representations of finite groups over Galois
//! extensions `L/K`: classification through characters, Schur indices, and the
//! supporting number theory.

pub mod characters;
pub mod classify;
pub mod cohomology;
pub mod cyclotomic;
pub mod error;
pub mod expr;
pub mod field;
pub mod groups;
pub mod finite;
pub mod linalg;
pub mod local_global;
pub mod quadratic;
pub mod report;
pub mod schur;
pub mod semilinear;
pub mod skew_ring;
pub mod surjection;
pub mod tower;

pub use error::{Error, Result};
