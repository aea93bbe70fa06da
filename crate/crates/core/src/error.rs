use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a stratum must contain at least one branch")]
    EmptyStratum,

    #[error("branch {member} is outside 1..={r}")]
    BranchOutOfRange { member: u32, r: u32 },

    #[error("branch count {r} must lie in 1..={max}")]
    BranchCount { r: u32, max: u32 },

    #[error("relative dimension d = {d} is smaller than the branch count r = {r}")]
    DimensionTooSmall { d: i32, r: u32 },

    #[error("classes live on different configurations (r = {left} vs r = {right})")]
    MismatchedBranchCount { left: u32, right: u32 },

    #[error("characteristic {0} is neither 0 nor a prime")]
    CompositeCharacteristic(u32),

    #[error("index violation: {0}")]
    Index(String),

    #[error("filtration precondition violated: {0}")]
    Filtration(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("invalid character datum: {0}")]
    Character(String),

    #[error("malformed serialized value: {0}")]
    Malformed(String),
}
