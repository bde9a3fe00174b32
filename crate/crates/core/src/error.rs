use thiserror::Error;

use crate::report::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown node id `{0}`")]
    UnknownNode(String),
    #[error("unknown object id `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism id `{0}`")]
    UnknownMorphism(String),
    #[error("embeddings are not composable: {0}")]
    NotComposable(String),
    #[error("not a chain: {0}")]
    NotAChain(String),
    #[error("cannot encode an empty string as a chain")]
    EmptyChain,
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("grammar shape must be `chain` to recognize strings")]
    NotAChainGrammar,
    #[error("{what} has {found} arrows, above the bound of {bound}")]
    SizeBound {
        what: String,
        found: usize,
        bound: usize,
    },
    #[error("invalid input:\n{0}")]
    Invalid(ValidationReport),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
