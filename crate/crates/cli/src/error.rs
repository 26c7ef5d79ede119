//! One error domain for the command line: core failures pass through, and
//! usage problems carry a plain message. Every variant maps to exit code 1.

use quarkcap_core::boolfn::BoolFnError;
use quarkcap_core::constructs::ConstructError;
use quarkcap_core::gating::GatingError;
use quarkcap_core::netsim::NetError;
use quarkcap_core::rational::ParseRatError;
use quarkcap_core::threshold::ThresholdError;
use quarkcap_core::transformer::TransformerError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Bool(#[from] BoolFnError),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
    #[error(transparent)]
    Gating(#[from] GatingError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Transformer(#[from] TransformerError),
    #[error(transparent)]
    Rational(#[from] ParseRatError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn domain(message: impl Into<String>) -> Self {
        CliError::Domain(message.into())
    }
}
