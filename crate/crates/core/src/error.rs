use thiserror::Error;

/// Errors raised by the algebra kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("generator `{name}` has negative degree {degree}")]
    NegativeDegree { name: String, degree: i64 },
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("polynomial is not homogeneous")]
    Inhomogeneous,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("nilpotency certificates require an odd-degree derivation (got degree {0})")]
    EvenDegree(i32),
    #[error("derivation does not strictly lower form order on `{0}`")]
    NotLocallyNilpotent(String),
    #[error("form is not closed: {0}")]
    NotClosed(String),
    #[error("base algebra has generator `{0}` of nonzero degree")]
    NotAffineBase(String),
    #[error("closed 0-form with nonzero constant term has no primitive")]
    ConstantObstruction,
    #[error("form is not basic: {0}")]
    NotBasic(String),
    #[error("internal consistency failure: {0}")]
    NotClosedInternal(String),
    #[error("derivation is not vertical: {0}")]
    NotVertical(String),
    #[error("coefficient table is not symmetric at {0}")]
    NotSymmetric(String),
    #[error("subspace is not an ideal: {0}")]
    NotIdeal(String),
    #[error("not a splitting: {0}")]
    NotSplitting(String),
    #[error("input is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("homological vector field is not compatible with the symplectic form: {0}")]
    NotCompatible(String),
    #[error("master equation fails: {0}")]
    MasterEquationFailed(String),
    #[error("pairing matrix is singular")]
    SingularPairing,
    #[error("action is not a Lie algebra homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("conjugation identity fails on `{0}`")]
    ConjugationFailed(String),
    #[error("form is not invariant: {0}")]
    NotInvariant(String),
    #[error("extension is not equivariantly closed: {0}")]
    NotEquivariantlyClosed(String),
    #[error("base algebra is not a tangent algebra: {0}")]
    BaseNotTangent(String),
    #[error("homological vector field is not nilpotent: {0}")]
    NotNilpotent(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
