use thiserror::Error;

use crate::canon::CanonMode;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("malformed point run `{run}` at byte {offset}")]
    Malformed { run: String, offset: usize },
    #[error("point label base must be A-Z, got `{0}`")]
    BadBase(char),
    #[error("subscript must be a nonempty digit string, got `{0}`")]
    BadSubscript(String),
    #[error("expected a single point label, got `{0}`")]
    NotSingle(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("illegal character {ch:?} at {line}:{column}")]
pub struct LexError {
    pub ch: char,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("documents were canonicalized with different modes ({pred:?} vs {reference:?})")]
    ModeMismatch { pred: CanonMode, reference: CanonMode },
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("corpus mixes domains; filter to one domain")]
    MixedDomains,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("weight `{name}` must be finite and nonnegative, got {value}")]
    NegativeWeight { name: String, value: f64 },
    #[error("lambda1 and lambda2 are both zero")]
    ZeroLambda,
    #[error("category weights are all zero for the {0} domain")]
    ZeroOmega(String),
    #[error("unknown category `{0}` in omega")]
    UnknownCategory(String),
    #[error("invalid config: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RewardError {
    #[error("invalid reference: {}", .0.join("; "))]
    BadReference(Vec<String>),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: duplicate id `{id}` (first seen on line {first})")]
    DuplicateId { id: String, line: usize, first: usize },
}
