//! Degreewise associated primes, Hilbert polynomials and grades for graded
//! modules whose components are finitely presented over `F_p` or `F_p[u]`.

pub mod asymptotics;
pub mod base_ring;
pub mod error;
pub mod expr;
pub mod fpmod;
pub mod functors;
pub mod graded;
pub mod linalg;
pub mod problem;
pub mod rees;

pub use error::{Error, Result, ValidationIssue};
