use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("singular matrix: |det| = {det:e} is at or below 1e-14")]
    SingularMatrix { det: f64 },
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("beta = {re}+{im}i is not in the elliptic range [-4, 0)")]
    NotElliptic { re: f64, im: f64 },
    #[error("transformation is projectively the identity")]
    IsIdentity,
    #[error("generator is parabolic (|beta| <= tol); axis distance undefined")]
    ParabolicGenerator,
    #[error("lambda must avoid 0 and +-1")]
    DegenerateLambda,
    #[error("invalid rotation k = {k}, order = {order}: need order >= 2, 1 <= k < order, gcd(k, order) = 1")]
    InvalidRotation { k: u32, order: u32 },
    #[error("sin^2(theta) = {0} is outside [0, 1]")]
    InvalidSin2(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
