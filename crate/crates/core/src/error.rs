use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("carrier mismatch: {left} vs {right}")]
    CarrierMismatch { left: usize, right: usize },

    #[error("carrier size {0} is outside 1..={max}", max = crate::pinj::MAX_N)]
    CarrierSize(usize),

    #[error("point {point} is outside 1..={n}")]
    PointOutOfRange { point: usize, n: usize },

    #[error("point {0} occurs more than once")]
    DuplicatePoint(usize),

    #[error("map is not injective: value {0} is hit twice")]
    NotInjective(usize),

    #[error("exponent must be at least 1")]
    ZeroExponent,

    #[error("point {0} is not in the sandwich domain A")]
    PointNotInA(usize),

    #[error("a chain needs at least one point")]
    EmptyChain,

    #[error("invalid sandwich context: {0}")]
    InvalidContext(String),

    #[error("{what} refused for n = {n}: the configured bound is {bound}")]
    BoundExceeded { what: &'static str, n: usize, bound: usize },

    #[error("element is not an idempotent of the variant")]
    NotIdempotent,

    #[error("the sandwich element itself has an empty factorization")]
    EmptyFactorization,

    #[error("sandwich element is a permutation; the variant is isomorphic to IS_n itself")]
    PermutationSandwich,

    #[error("set is not closed under the sandwich product")]
    NotClosed,

    #[error("a subsemigroup must be nonempty")]
    EmptySemigroup,

    #[error("subsemigroup is not nilpotent")]
    NotNilpotent,

    #[error("invalid strict order: {0}")]
    InvalidOrder(String),

    #[error("invalid ordered A-partition: {0}")]
    InvalidPartition(String),

    #[error("block count {k} is outside 1..={max}")]
    BlockCountOutOfRange { k: usize, max: usize },

    #[error("order does not lie in Ord_{0}")]
    NotInOrd(usize),

    #[error("no ordered A-partition into {0} blocks refines this order")]
    NoPartition(usize),

    #[error("subsemigroup is not a maximal nilpotent subsemigroup of degree {0}")]
    NotMaximal(usize),

    #[error("semigroup of size {size} exceeds the isomorphism search bound {bound}")]
    SearchTooLarge { size: usize, bound: usize },

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("cannot export {what} as {format}")]
    UnsupportedExport { what: &'static str, format: &'static str },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
