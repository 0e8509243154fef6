//! Parser, canonicalizer, validator, metrics and reward for a geometry
//! formal language covering plane and solid diagrams.
//!
//! ```
//! use geoformal::{canonicalize, parse_document, CanonMode, Domain};
//!
//! let a = parse_document("line C B A", Domain::Plane);
//! let b = parse_document("line A B C", Domain::Plane);
//! let mode = CanonMode::default();
//! assert_eq!(canonicalize(&a.document, mode), canonicalize(&b.document, mode));
//! ```

pub mod ast;
pub mod canon;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod label;
pub mod lexer;
pub mod metrics;
pub mod parser;
pub mod render;
pub mod reward;
pub mod scalar;
pub mod validator;

pub use ast::{Dialect, Document, Domain, SemanticClause, SolidKind};
pub use canon::{canonicalize, CanonMode, CanonicalDocument, Category, PerCategory};
pub use corpus::{read_jsonl, CorpusRecord};
pub use error::{ConfigError, CorpusError, LabelError, LexError, MetricsError, RewardError};
pub use label::PointLabel;
pub use metrics::{category_prf, match_pair, score_corpus, score_matches, Aggregation, Counts, MatchResult};
pub use parser::{parse_document, Diagnostic, Parsed};
pub use render::render;
pub use reward::{format_reward, geometric_reward, total_reward, GeoMetric};
pub use scalar::Scalar;
pub use validator::{check_format, check_text, CheckReport, LintFinding, Rule, Severity};

/// Double-precision report, the default everywhere.
pub type CorpusReport = metrics::CorpusReport<f64>;
pub type Prf = metrics::Prf<f64>;
pub type RewardConfig = reward::RewardConfig<f64>;
pub type RewardConfigOverride = reward::RewardConfigOverride<f64>;
pub type RewardBreakdown = reward::RewardBreakdown<f64>;

pub type CorpusReportF32 = metrics::CorpusReport<f32>;
pub type PrfF32 = metrics::Prf<f32>;
pub type RewardConfigF32 = reward::RewardConfig<f32>;
pub type RewardBreakdownF32 = reward::RewardBreakdown<f32>;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
