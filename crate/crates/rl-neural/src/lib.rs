//! Deep Q-learning building blocks: a small fully-connected Q-network
//! trained by plain SGD on the TD target, and a uniform experience
//! replay buffer.
//!
//! The network is written out longhand (no autodiff): forward passes
//! cache per-layer activations and the backward pass produces a flat
//! gradient vector. TD targets are computed from the current weights
//! before the step and treated as constants, matching the replay-based
//! formulation without a separate target network.

mod buffer;
mod io;
mod mlp;

pub use buffer::{ReplayBuffer, Transition};
pub use io::FORMAT_VERSION;
pub use mlp::{Activation, Mlp};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NeuralError {
    #[error("layer sizes need at least input and output, got {0} entries")]
    TooFewLayers(usize),
    #[error("layer size must be nonzero")]
    ZeroWidth,
    #[error("input has {got} values, network expects {expected}")]
    InputDimMismatch { got: usize, expected: usize },
    #[error("action index {got} out of range ({actions} outputs)")]
    BadAction { got: usize, actions: usize },
    #[error("parameter vector has {got} values, network has {expected}")]
    ParamCountMismatch { got: usize, expected: usize },
    #[error("empty batch")]
    EmptyBatch,
    #[error("non-finite value detected: {context}")]
    NonFinite { context: String },
    #[error("bad magic bytes; not a network weights file")]
    BadMagic,
    #[error("format version {found}, expected {expected}")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("checksum mismatch; payload corrupted")]
    ChecksumMismatch,
    #[error("corrupted payload: {0}")]
    Corrupted(&'static str),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for NeuralError {
    fn from(e: std::io::Error) -> Self {
        NeuralError::Io(e.to_string())
    }
}
