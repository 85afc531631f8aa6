//! Exact characteristic polynomials over commutative rings.
//!
//! [`berkowitz`] computes `det(xI - A)` without divisions, and with it the
//! determinant, adjugate and inverse. [`clow`] provides brute-force
//! combinatorial oracles (clow sequences, cycle covers, principal minors)
//! and [`identities`] bundles randomized cross-checks between them.

pub mod berkowitz;
pub mod clow;
pub mod error;
pub mod identities;
pub mod matrix;
pub mod matrix_file;
pub mod random;
pub mod ring;

pub use berkowitz::{
    adjoint, adjoint_poly, build_toeplitz_column, char_poly, depth_report, determinant,
    expand_toeplitz, inverse, CoefficientVector, DepthReport, MatrixPolynomial, Mode,
    ToeplitzColumn,
};
pub use clow::{Clow, ClowSequence, DEFAULT_ENUM_CAP};
pub use error::{Error, Result};
pub use identities::{run_check, Check, VerificationReport};
pub use matrix::{chain_product, tree_product, BlockDecomposition, Matrix, TreeProduct};
pub use ring::{RingElement, RingSpec};
