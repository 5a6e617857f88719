use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),

    #[error("{{{0}, {1}}} is not an edge of the graph")]
    NotAnEdge(usize, usize),

    #[error("{{{0}, {1}}} is a tree edge")]
    TreeEdge(usize, usize),

    #[error("not a maximal spanning forest: {0}")]
    NotSpanning(String),

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
