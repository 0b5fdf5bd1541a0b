//! Heckman-Opdam polynomials on the fundamental alcove of an affine Weyl group,
//! the associated heat kernel and heat semigroup, and the Segal-Bargmann
//! (holomorphic heat) transform with its spectral inner product.
//!
//! The crate is organized around a small number of immutable value types:
//!
//! * [`rootsys::RootSystem`] - rank <= 2 crystallographic root systems (plus the
//!   nonreduced BC types) with explicit Weyl groups, weight lattice and alcove
//!   geometry;
//! * [`trigpoly::TrigPoly`] - sparse trigonometric polynomials indexed by the
//!   weight lattice;
//! * [`jacobi::JacobiBasis`] - the orthogonal basis of Heckman-Opdam polynomials
//!   up to a norm shell, built by weighted Gram-Schmidt over orbit sums;
//! * [`heat::HeatKernelEvaluator`] - the spectral heat kernel on the alcove with
//!   truncation-tail control;
//! * [`bargmann`] - the holomorphic heat transform and the Hilbert space `H_t`.
//!
//! Everything is desk scale: supported root systems are A1, BC1, A2, B2, G2 and
//! BC2, and polynomial shells stay in the low tens. All operations are pure
//! functions on immutable data and safe to use across threads.

pub mod bargmann;
pub mod check;
pub mod cherednik;
pub mod heat;
pub mod innerprod;
pub mod io;
pub mod jacobi;
pub mod oracle;
pub mod rootsys;
pub mod trigpoly;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown root system label `{0}`")]
    UnknownSystem(String),
    #[error("negative multiplicity {value} for length class `{class}`")]
    NegativeMultiplicity { class: String, value: f64 },
    #[error("expected {expected} multiplicity value(s) for {system}, got {got}")]
    MultiplicityCount {
        system: String,
        expected: usize,
        got: usize,
    },
    #[error("weight {0:?} is not dominant")]
    NotDominant([i32; 2]),
    #[error("operands belong to different root systems")]
    SystemMismatch,
    #[error("alcove folding did not converge (geometry bug)")]
    FoldIterationCap,
    #[error("exact backend requires even integer multiplicities, got {0} for class `{1}`")]
    ExactBackendOddMultiplicity(f64, String),
    #[error("Gram matrix numerically singular at weight {0:?}; increase quadrature resolution")]
    GramSingular([i32; 2]),
    #[error("gamma formula degenerate at this multiplicity; use value_at_zero instead")]
    DegenerateMultiplicity,
    #[error("operand is not W-invariant")]
    NotWInvariant,
    #[error("time parameter must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("time parameter must be nonnegative, got {0}")]
    NegativeTime(f64),
    #[error("sampled function grid does not match (resolution or root system)")]
    GridMismatch,
    #[error("truncation tail bound {bound:e} exceeds requested tolerance {eps:e}; enlarge the basis shell")]
    TailBoundExceeded { bound: f64, eps: f64 },
    #[error("transform times differ: {0} vs {1}")]
    TimeMismatch(f64, f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
