use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial must be nonconstant")]
    Constant,
    #[error("the zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("resultant is zero (the polynomials share a root)")]
    ZeroResultant,
    #[error("depth is undefined for weight 0")]
    EmptyResolution,
    #[error("S = {s_joint} is smaller than max(s1, s2) = {max_s}")]
    JointBelowGuaranteed { s_joint: u64, max_s: u64 },
    #[error("tree depth {depth} cannot hold a resolution with {terms} terms")]
    TreeTooShallow { depth: u32, terms: usize },
    #[error("weight functions live on different trees")]
    ShapeMismatch,
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}
