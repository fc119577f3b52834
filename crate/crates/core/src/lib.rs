//! Quasimorphisms, Aut-invariant word norms and autocommutator length on
//! free groups and graph products of cyclic groups.
//!
//! Everything is exact: words are freely reduced letter sequences, values
//! of quasimorphisms are rationals, and every search result comes with a
//! witness that can be replayed through the basic operations.

pub mod automorphisms;
pub mod error;
pub mod graphprod;
pub mod norms;
pub mod notation;
pub mod quasimorphisms;
pub mod verify;
pub mod whitehead;
pub mod words;

pub use automorphisms::{AutoWitness, Automorphism, Homomorphism, Side};
pub use error::{Error, Result};
pub use graphprod::{GPWord, JoinDecomposition, VertexGraph};
pub use norms::{AclSearch, Factor, NormResult, NormValue};
pub use quasimorphisms::{Quasimorphism, Rational};
pub use words::{CyclicWord, Letter, Word};
