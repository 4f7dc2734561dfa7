use thiserror::Error;

/// Invalid parameters for the closed-form model math.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{what} is undefined at {value}")]
    Domain { what: &'static str, value: f64 },
    #[error("invalid {param}: {value} (must be {requirement})")]
    InvalidParameter {
        param: &'static str,
        value: f64,
        requirement: &'static str,
    },
}

/// Which line of a weight matrix failed the stochasticity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Row,
    Column,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::Row => f.write_str("row"),
            Axis::Column => f.write_str("column"),
        }
    }
}

/// A weight matrix that cannot serve as the communication network.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("weight matrix is empty")]
    Empty,
    #[error("weight matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("weight [{row}][{col}] = {value} is negative or not finite")]
    InvalidWeight { row: usize, col: usize, value: f64 },
    #[error("assumption 1a (doubly stochastic) violated: {axis} {index} sums to {sum}")]
    NotDoublyStochastic { axis: Axis, index: usize, sum: f64 },
    #[error("assumption 1b (positive diagonal) violated: agent {index} has zero self-weight")]
    ZeroDiagonal { index: usize },
    #[error("assumption 1c (connected graph) violated: agent {unreachable} cannot exchange beliefs with agent 0")]
    Disconnected { unreachable: usize },
    #[error("{what} dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
}

/// A scenario that cannot be simulated.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid scenario: {0}")]
    Invalid(String),
}
