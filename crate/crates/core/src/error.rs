use thiserror::Error;

/// Errors raised by the exact-arithmetic layers and the verification suites.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("prime mismatch: {left} vs {right}")]
    PrimeMismatch { left: u32, right: u32 },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u32),

    #[error("division by zero")]
    DivisionByZero,

    #[error("the quadratic character is undefined at 0")]
    SigmaOfZero,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("matrix is singular")]
    Singular,

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("matrix is not symplectic: entry ({row}, {col}) of g^T J g is {got}, expected {expected}")]
    NotSymplectic {
        row: usize,
        col: usize,
        got: u32,
        expected: u32,
    },

    #[error("Lagrangians are not transverse (L + M != V)")]
    NotTransverse,

    #[error("no Lagrangian is transverse to both arguments")]
    NoCommonTransverse,

    #[error("incompatible equivariance: {0}")]
    IncompatibleEquivariance(String),

    #[error("det(g - I) = 0: g lies on the non-generic locus; use the trace definition")]
    NonGeneric,

    #[error("bilinear form is degenerate or not symmetric")]
    BadBilinearForm,

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
