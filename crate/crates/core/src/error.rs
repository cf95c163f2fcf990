use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {0} out of range for a graph on {1} vertices")]
    VertexOutOfRange(usize, usize),

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("arc {0}->{1} does not lie on an edge of the base graph")]
    ArcNotOnEdge(usize, usize),

    #[error("vertex {0} has incident free edges; exact out-neighborhood is undefined")]
    FreeEdge(usize),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("coloring is not proper: edge {{{0}, {1}}} is monochromatic")]
    ImproperColoring(usize, usize),

    #[error("coloring covers {got} vertices, graph has {expected}")]
    ColoringLength { expected: usize, got: usize },

    #[error("color class {0} is not independent")]
    DependentColorClass(u32),

    #[error("multi-coloring is not {h}-local at vertex {vertex}: out-neighborhood uses {used} colors")]
    NotLocal { vertex: usize, h: usize, used: usize },

    #[error("set {0:?} is not independent")]
    NotIndependent(Vec<usize>),

    #[error("enumeration exceeded the limit of {0} items")]
    LimitExceeded(usize),

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("column generation did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("work budget exhausted")]
    BudgetExhausted,

    #[error("orientation cover has a gap: {0}")]
    CoverGap(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
