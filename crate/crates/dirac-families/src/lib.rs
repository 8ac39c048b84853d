//! Exact-arithmetic engine for algebraic families of Harish-Chandra pairs.
//!
//! The crate builds the one-parameter families `g_(n) = k ⊕ tⁿ·p` of Lie
//! algebras attached to a real reductive group over the polynomial ring
//! `R = Q(i)[t]`, together with their Clifford algebras, spin modules and
//! algebraic Dirac operators, and computes Dirac cohomology and
//! infinitesimal characters of weight-ladder module families — entirely in
//! exact Gaussian-rational arithmetic.
//!
//! Start with the runnable examples, one per capability:
//!
//! ```bash
//! cargo run -p dirac-families --example deformation_family
//! cargo run -p dirac-families --example dirac_square
//! cargo run -p dirac-families --example harish_chandra
//! cargo run -p dirac-families --example spin_module
//! cargo run -p dirac-families --example ladder_cohomology
//! cargo run -p dirac-families --example vogan
//! cargo run -p dirac-families --example verma_ladder
//! cargo run -p dirac-families --example localization
//! ```
//!
//! The thin `dirac-families` binary exposes the same operations as batch
//! subcommands over JSON files; see the README.

pub mod bipoly;
pub mod clifford;
pub mod cli;
pub mod dirac;
pub mod json;
pub mod lie;
pub mod localize;
pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod sl2;
pub mod ue;

pub use clifford::{CliffordElement, SoOperator, SpinVector};
pub use dirac::{AElement, CohomologyReport, LadderModule, VoganReport, WeightSet};
pub use lie::{BasisElement, CartanData, Kind, LieFamily, QuadraticSpaceFamily, RhoData};
pub use matrix::{LaurentMatrix, PolyMatrix, QuotientDecomposition, SnfResult};
pub use poly::{Laurent, Poly};
pub use scalar::Scalar;
pub use ue::{HcImage, InfinitesimalCharacter, UeElement, VermaModule};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd of two zero polynomials")]
    GcdOfZeros,
    #[error("inexact polynomial division")]
    InexactDivision,
    #[error("vector is not in the span of the given basis")]
    NotInSpan,
    #[error("cannot parse scalar: {0}")]
    ParseScalar(String),
    #[error("cannot parse expression: {0}")]
    ParseExpr(String),
    #[error("family invariant violated: {0}")]
    InvalidFamily(String),
    #[error("cartan data required for this operation")]
    MissingCartan,
    #[error("form entry on p×p not divisible by r²: {0}")]
    NonDivisibleFormEntry(String),
    #[error("form is degenerate: {0}")]
    DegenerateForm(String),
    #[error("adjoint action of the Cartan is not diagonal on the chosen basis: {0}")]
    AdjointNotDiagonal(String),
    #[error("operator is not antisymmetric for the form")]
    NotAntisymmetric,
    #[error("result is not Weyl-group invariant (element not central, or wrong Weyl data)")]
    NotWeylInvariant,
    #[error("isotropic split does not cover the quadratic space")]
    MissingIsotropicSplit,
    #[error("spin action is not diagonal on the monomial basis: {0}")]
    SpinActionNotDiagonal(String),
    #[error("Cartan subalgebra is not theta-fixed (h must equal t)")]
    CartanNotThetaFixed,
    #[error("Verma truncation window exceeded (degree {0})")]
    TruncationExceeded(usize),
    #[error("Casimir scalar not divisible by r²: {0}")]
    CasimirScalarNotDivisible(String),
    #[error("ladder module invariant violated: {0}")]
    InvalidLadder(String),
    #[error("weight {0} outside the ladder's weight range")]
    WeightOutsideRange(i64),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("Dirac cohomology is zero; nothing to check")]
    EmptyCohomology,
    #[error("no infinitesimal character exists with respect to the Cartan subfamily")]
    NoInfinitesimalCharacter,
    #[error("operation requires an sl2-shaped family: {0}")]
    NotSl2Shaped(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
