use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants named `*Violation`, `InconsistencyDetected`, `ClassificationGap`,
/// `NonConstantIntersection` and `MismatchWithBruteForce` describe states that
/// the underlying theory rules out. Seeing one means a bug, not bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("group order {order} exceeds the configured cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("automorphism group exceeds the configured cap of {cap} elements")]
    AutTooLarge { cap: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("set is not invariant under the given automorphisms")]
    NotInvariant,
    #[error("connection set is not inverse-closed: inverse of {0} is missing")]
    NotInverseClosed(usize),
    #[error("connection set contains the identity")]
    ContainsIdentity,
    #[error("connection set is empty")]
    Empty,
    #[error("element {0} is out of range")]
    ElementOutOfRange(usize),
    #[error("connection set does not generate the group")]
    NotGenerating,
    #[error("connection set is not transitive")]
    NotTransitive,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("coset intersection sizes are not constant: {0}")]
    NonConstantIntersection(String),
    #[error("subgroup is not a proper normal invariant subgroup")]
    NotInLattice,
    #[error("connection set meets the kernel; the quotient would contain the identity")]
    ConnectionMeetsKernel,
    #[error("product graph would have {vertices} vertices, over the cap of {cap}")]
    ProductTooLarge { vertices: usize, cap: usize },
    #[error("graph with {vertices} vertices exceeds the cap of {cap}")]
    GraphTooLarge { vertices: usize, cap: usize },
    #[error("Cayley graph is not connected")]
    NotConnected,
    #[error("Cayley graph is not normal edge-transitive")]
    NotNormalEdgeTransitive,
    #[error("internal inconsistency: {0}")]
    InconsistencyDetected(String),
    #[error("transitive-set structure violated: {0}")]
    StructureViolation(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("predicted stabilizer disagrees with brute force: {0}")]
    MismatchWithBruteForce(String),
    #[error("transitive set matches no known family: {0}")]
    ClassificationGap(String),
    #[error("enumeration parameter {value} exceeds the cap {cap}")]
    CapExceeded { value: usize, cap: usize },
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
