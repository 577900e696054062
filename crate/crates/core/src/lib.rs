//! Generalized Yang-Baxter equation toolkit: dense complex linear algebra,
//! residual checks, the block-form solution families, gauge equivalence,
//! braid group representations and zero-pattern search.

pub mod blocks;
pub mod braid;
pub mod cli;
pub mod eigen;
pub mod equivalence;
pub mod error;
pub mod linalg;
pub mod lsq;
pub mod registry;
pub mod search;
pub mod yang_baxter;

pub use error::{GybeError, Result};
pub use linalg::{c, cis, Complex, ComplexMatrix, Tolerance};
pub use yang_baxter::{check_gybe, gybe_residual, CheckReport, GybeSignature, RMatrix};
