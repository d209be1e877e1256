use std::io;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("no connected graph after {attempts} draws")]
    GenerationFailure { attempts: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },

    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error(
        "eigensolver did not converge: eigenvalue {index} after {iterations} iterations \
         (off-diagonal residual {residual:e})"
    )]
    NoConvergence {
        index: usize,
        iterations: usize,
        residual: f64,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("vertex {vertex}: all neighbor coherence weights are zero")]
    DegenerateProposal { vertex: usize },

    #[error("vertex {vertex}: coherence is zero, acceptance ratio undefined")]
    DegenerateCoherence { vertex: usize },

    #[error("oracle limited to {cap} vertices, graph has {n}")]
    OracleTooLarge { n: usize, cap: usize },

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
