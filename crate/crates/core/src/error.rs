use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported coefficient ring: {0}")]
    UnsupportedRing(String),
    #[error("invalid ring descriptor: {0}")]
    InvalidRing(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("polynomial input is not homogeneous: {0}")]
    NonHomogeneousInput(String),

    #[error("multiplication table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("element 0 is not a two-sided identity")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("group of order {order} exceeds the configured bound {bound}")]
    GroupTooLarge { order: usize, bound: usize },

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("invalid subgroup for this construction: {0}")]
    InvalidSubgroup(String),
    #[error("subgroup is not elementary abelian")]
    NotElementaryAbelian,
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("lattices live over different coefficient rings")]
    RingMismatch,
    #[error("lattices live over different groups")]
    GroupMismatch,
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("cohomology class is zero")]
    ZeroClass,
    #[error("cochain in degree {0} is not a cocycle")]
    NotACocycle(i64),

    #[error("resolution strategy {0} is unavailable here")]
    StrategyUnavailable(String),
    #[error("requested degree {requested} exceeds the computed range (cap {cap})")]
    CapExceeded { requested: i64, cap: usize },
    #[error("Tate degree {0} is outside the computed range")]
    RangeExceeded(i64),
    #[error("chain map lifting failed in degree {0}")]
    LiftFailed(usize),
    #[error("classes live on different resolutions")]
    ResolutionMismatch,
    #[error("degree cap too small: {0}")]
    CapTooSmall(String),
    #[error("presentation missing: {0}")]
    PresentationMissing(String),
    #[error("subsets belong to different spectrum models")]
    ModelMismatch,
    #[error("computation too large: {0}")]
    TooLarge(String),

    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
