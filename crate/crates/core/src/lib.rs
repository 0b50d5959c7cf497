#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classify;
pub mod derived;
pub mod linalg;
pub mod module;
pub mod resolve;
pub mod ring;
pub mod sample;
pub mod squaring;

use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("window underflow: {0}")]
    WindowUnderflow(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("resource limit: {0}")]
    Resource(String),
}
