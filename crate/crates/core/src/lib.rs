//! Exact symbolic engine for unramified spherical functions on spherical varieties.

pub mod error;
pub mod exact;

pub use error::{Error, Result};
pub mod cli;
pub mod cone;
pub mod datum;
pub mod engine;
pub mod fixtures;
pub mod padic;
pub mod par;
pub mod rankone;
pub mod roots;
