//! Exact computations for generalized Kac-Moody algebras, their diagram
//! automorphisms, orbit Lie algebras and twining characters.

pub mod automorphism;
pub mod cartan;
pub mod characters;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod fold;
pub mod genauto;
pub mod linalg;
pub mod oracle;
pub mod rational;
pub mod series;
pub mod specfile;
pub mod verify;
pub mod weight;
pub mod weyl;

pub use error::{Error, Result};
