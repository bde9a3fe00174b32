//! Syntactic diagrams, grammar recognition by neighbourhood covers, the
//! site of correct diagrams and presheaf semantics over it.

pub mod chain;
pub mod cover;
pub mod diagram;
pub mod dot;
pub mod embedding;
pub mod error;
pub mod fixtures;
pub mod grammar;
pub mod io;
pub mod report;
pub mod semantics;
pub mod site;

pub use error::{Error, Result};
