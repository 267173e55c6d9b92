use thiserror::Error;

/// Errors produced by group construction, map building, and classification.
#[derive(Debug, Error)]
pub enum Error {
    #[error("images of length {len} are not a bijection of 0..{len}")]
    NotABijection { len: usize },
    #[error("point {point} is out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("cycle notation parse error: {0}")]
    CycleParse(String),
    #[error("closure exceeded the cap of {cap} elements")]
    ClosureCap { cap: usize },
    #[error("search cap exceeded: group order {order} > cap {cap}")]
    SearchCap { order: usize, cap: usize },
    #[error("element does not belong to the group")]
    NotAMember,
    #[error("not a valid subgroup: {0}")]
    NotASubgroup(String),
    #[error("subgroup is not normal in the group")]
    NotNormal,
    #[error("Sylow {p}-subgroup search failed: reached order {reached}, wanted {wanted}")]
    SylowSearch { p: u64, reached: usize, wanted: usize },
    #[error("invalid parameters for {family}: {reason}")]
    FamilyParams { family: &'static str, reason: String },
    #[error("relation check failed while constructing {family}: {relation}")]
    RelationFailed { family: &'static str, relation: String },
    #[error("triple entry is not an involution")]
    NotAnInvolution,
    #[error("triple does not generate the group")]
    NotGenerating,
    #[error("all three triple entries are equal")]
    AllEqual,
    #[error("regular maps require the second and third entries to commute")]
    NonCommutingRegular,
    #[error("ill-formed flag system: the map needs 4|E| = {expected} flags but the group supplies {found}")]
    IllFormedFlags { expected: usize, found: usize },
    #[error("unknown group spec '{0}'")]
    BadGroupSpec(String),
    #[error("unknown map kind '{0}' (expected rev, birev, or reg)")]
    BadMapKind(String),
    #[error("cannot parse word '{word}': {reason}")]
    BadWord { word: String, reason: String },
    #[error("unknown label '{0}'")]
    UnknownLabel(String),
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("sweep configuration rejected: {0}")]
    BadSweepConfig(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
