use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("multiplication table is empty")]
    EmptyTable,

    #[error("multiplication table row {row} has length {len}, expected {size}")]
    RaggedTable { row: usize, len: usize, size: usize },

    #[error("table entry mult({x},{y}) = {value} is out of range for size {size}")]
    EntryOutOfRange { x: usize, y: usize, value: usize, size: usize },

    #[error("not idempotent: mult({x},{x}) = {product}")]
    NotIdempotent { x: usize, product: usize },

    #[error("not associative at ({x},{y},{z}): (xy)z = {left}, x(yz) = {right}")]
    NotAssociative { x: usize, y: usize, z: usize, left: usize, right: usize },

    #[error("band of size {requested} exceeds the supported maximum {max}")]
    SizeOverflow { requested: u128, max: usize },

    #[error("{what} = {value} is outside the supported range {range}")]
    ParameterOutOfRange { what: &'static str, value: usize, range: &'static str },

    #[error("label list has {got} entries for a band of size {size}")]
    LabelCount { got: usize, size: usize },

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("operation requires degree >= {min}, got {got}")]
    DegreeTooSmall { min: usize, got: usize },

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("{what} index {index} is out of range {lo}..={hi}")]
    IndexOutOfRange { what: &'static str, index: usize, lo: usize, hi: usize },

    #[error("tuple {tuple:?} has length {len}, expected {expected}")]
    TupleLength { tuple: Vec<usize>, len: usize, expected: usize },

    #[error("tuple {tuple:?} contains an element outside 0..{size}")]
    ElementOutOfRange { tuple: Vec<usize>, size: usize },

    #[error("input chain is not a reduced cycle")]
    NotAReducedCycle,

    #[error("cochain is not a cocycle: coboundary is nonzero at {tuple:?}")]
    NotACocycle { tuple: Vec<usize> },

    #[error("cochain is not cyclic at {tuple:?}")]
    NotCyclic { tuple: Vec<usize> },

    #[error("trace cocycles are only defined in even degree, got {0}")]
    OddTraceDegree(usize),

    #[error("linear system is infeasible")]
    Infeasible,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("budget exceeded: {needed} sparse entries needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("normalization left a nonzero residual at {tuple:?}")]
    NonZeroResidual { tuple: Vec<usize> },

    #[error("input is not {what}: nonzero at {tuple:?}")]
    NotNormalized { what: &'static str, tuple: Vec<usize> },

    #[error("{stage} did not reach its target set: value {value} survives at {tuple:?}")]
    StageStalled { stage: &'static str, tuple: Vec<usize>, value: String },

    #[error("parse error: {0}")]
    Parse(String),
}
