pub mod calculus;
pub mod dense;
pub mod error;
pub mod experiments;
pub mod fit;
pub mod genfunc;
pub mod krylov;
pub mod lattice;
pub mod normest;
pub mod operators;
pub mod transfer;
pub(crate) mod transforms;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
