//! Majorana and Quon diagrams: IR, evaluators, rewrites, circuit and tensor
//! compilation, structural classification, network factories and Ising
//! applications.

pub mod classify;
pub mod compile;
pub mod error;
pub mod factory;
pub mod gaussian_eval;
pub mod ising;
pub mod majorana_ir;
pub mod pfaffian;
pub mod quon;
pub mod rewrite;

pub use error::{QuonError, Result};
pub use majorana_ir::{Element, MajoranaDiagram, Orientation};
pub use num_complex::Complex64;
