use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("modulus is not irreducible over F_{p}: {modulus}")]
    Reducible { p: u8, modulus: String },
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("degree {sub} does not divide degree {sup}")]
    NotDivisible { sub: u32, sup: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("field does not contain F4")]
    NoCubeRootOfUnity,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("polynomials use different variables")]
    VariableMismatch,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("forms r and s have a common zero")]
    CommonZero,
    #[error("dualizing sheaf is nontrivial (twist {twist})")]
    OmegaNontrivial { twist: i64 },
    #[error("non-integral solution: {0}")]
    NonIntegral(String),
    #[error("singular system")]
    Singular,
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
