//! File formats, configuration and command-line pipeline around
//! [`emtagger_core`].
//!
//! The binary drives six stages over a working directory:
//!
//! ```text
//! preprocess -> train -> recommend / evaluate
//!                  \-> sweep (validation split)
//! baseline (LDA)
//! ```

pub mod bundle;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod jsonl;
pub mod stemmer;

pub use error::{AppError, AppResult};
