use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("generator count {0} outside the supported range")]
    GeneratorCount(usize),

    #[error("grade {grade} out of range for m = {m}")]
    GradeOutOfRange { grade: usize, m: usize },

    #[error("the Clifford map is not invertible for odd m = {m}")]
    UnsupportedRepresentation { m: usize },

    #[error("zero norm")]
    ZeroNorm,

    #[error("dθ-degree {degree} exceeds truncation {limit}")]
    TruncationOverflow { degree: usize, limit: usize },

    #[error("polynomial degree {degree} exceeds limit {limit}")]
    PolynomialDegreeOverflow { degree: usize, limit: usize },

    #[error("form is not closed (residual {residual:e})")]
    NotClosed { residual: f64 },

    #[error("expected a form of degree {expected}, found a term of degree {found}")]
    FormDegree { expected: usize, found: usize },

    #[error("expected an even form, found an odd term")]
    OddParity,

    #[error("singular matrix")]
    Singular,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("base vector is not in the kernel of ω₀ (residual {residual:e})")]
    NotInKernel { residual: f64 },

    #[error("time {t} outside [{t0}, {t1}]")]
    OutsideDomain { t: f64, t0: f64, t1: f64 },

    #[error("superfield is not hermitean")]
    NotHermitean,

    #[error("probabilities outside the ellipsoid (Δ_ellipsoid = {delta:e})")]
    OutsideCone { delta: f64 },

    #[error("state is not normalized ((Φ,Φ) = {norm})")]
    NotNormalized { norm: f64 },

    #[error("system does not have constant coefficients")]
    NonConstant,

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
