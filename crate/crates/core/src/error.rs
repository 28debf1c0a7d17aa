use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid characteristic {p}: {reason}")]
    InvalidCharacteristic { p: u64, reason: &'static str },

    #[error("extension degree must be at least 1")]
    InvalidDegree,

    #[error("field of order {p}^{k} is larger than the supported limit")]
    FieldTooLarge { p: u64, k: u32 },

    #[error("modulus is not irreducible over F_{p}")]
    ReducibleModulus { p: u64 },

    #[error("operands live in different fields ({0})")]
    FieldMismatch(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("the zero function has no divisor")]
    ZeroFunction,

    #[error("exponent n must be positive")]
    ZeroExponent,

    #[error("map {0} is inseparable (its derivative vanishes identically)")]
    Inseparable(String),

    #[error("map {0} is constant")]
    ConstantMap(String),

    #[error("irregular singularity at {place}: ord(a1) = {ord_a1}, ord(a2) = {ord_a2}")]
    IrregularSingularity { place: String, ord_a1: i64, ord_a2: i64 },

    #[error("{what} needs {needed}, above the guard {limit}")]
    GuardExceeded { what: String, needed: u64, limit: u64 },

    #[error("a point of degree {degree} is needed but the extension bound is {bound}")]
    ExtensionBound { degree: u32, bound: u32 },

    #[error("operation requires a prime field")]
    NotPrimeField,

    #[error("not a solution of the operator: {0}")]
    NotASolution(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("violated assumptions: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Assumptions(Vec<Violation>),

    #[error("pullback verification failed: {0}")]
    Pullback(PullbackFailure),
}

impl Error {
    pub fn guard(what: impl Into<String>, needed: u64, limit: u64) -> Self {
        Error::GuardExceeded { what: what.into(), needed, limit }
    }
}

/// A violated standing assumption on a correspondence.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("g and h are defined over different fields")]
    FieldMismatch,

    #[error("assumption (c): deg g = {deg_g} differs from deg h = {deg_h}")]
    DegreeMismatch { deg_g: usize, deg_h: usize },

    #[error("{map} is not a separable nonconstant map")]
    NotSeparable { map: &'static str },

    #[error("{map} is wildly ramified at {place} (e = {e})")]
    Wild { map: &'static str, place: String, e: u32 },

    #[error("assumption (a): g^-1(S) = {g_pre:?} differs from h^-1(S) = {h_pre:?}")]
    PreimageMismatch { g_pre: Vec<String>, h_pre: Vec<String> },

    #[error("phi is not a solution of the operator")]
    NotASolution,

    #[error("the correspondence is not adapted to the operator")]
    NotAdapted,

    #[error("g and h share the left factor found by subcover search: h = g o {mobius}")]
    NotDisjoint { mobius: String },
}

/// A failed check while verifying a pulled-back correspondence.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PullbackFailure {
    #[error("the component does not divide the pulled-back curve of correspondence")]
    ComponentNotFactor,

    #[error("the component does not vanish on (g~, h~)")]
    ComponentNotVanishing,

    #[error("the diagram does not commute: {0}")]
    DiagramNotCommuting(&'static str),

    #[error("(g~, h~) is not adapted to the pulled-back operator")]
    NotAdapted,
}
