use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuonError {
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("diagram is not closed")]
    NotClosed,
    #[error("oracle limit exceeded: {0} Majoranas")]
    OracleTooLarge(usize),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("numerical instability: {0}")]
    NumericalInstability(String),
    #[error("element {0} is not a scattering")]
    NotAScattering(usize),
    #[error("singular angle")]
    SingularAngle,
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),
    #[error("diagram has open intervals")]
    HasOpenIntervals,
    #[error("no enclosing loop for hole {0}")]
    NoEnclosingLoop(usize),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("bit length mismatch: expected {expected}, got {got}")]
    BitLengthMismatch { expected: usize, got: usize },
    #[error("two-qubit gate on non-adjacent qubits {0} and {1}")]
    NonAdjacentTwoQubitGate(usize, usize),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("too many legs: {0}")]
    TooManyLegs(usize),
    #[error("unknown generator: {0}")]
    UnknownGenerator(String),
    #[error("interval mismatch: {0}")]
    IntervalMismatch(String),
    #[error("rank too large: {0}")]
    RankTooLarge(usize),
    #[error("not a matchgate: {0}")]
    NotMatchgate(String),
    #[error("untagged tensor {0}")]
    UntaggedTensor(usize),
    #[error("stretch path crosses a hole")]
    PathCrossesHole,
    #[error("invalid segment: {0}")]
    InvalidSegment(String),
    #[error("region occupied: {0}")]
    RegionOccupied(String),
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("too many transformed scatterings: {0} > {1}")]
    TooManyTransformed(usize, usize),
    #[error("non-planar input: {0}")]
    NonPlanarInput(String),
    #[error("too many sites: {0}")]
    TooManySites(usize),
    #[error("singular star-triangle input")]
    Singular,
    #[error("invalid angle: {0}")]
    InvalidAngle(String),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
}

pub type Result<T> = std::result::Result<T, QuonError>;
