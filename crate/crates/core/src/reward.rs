//! The verifiable reward: `R = λ1·R_fmt + λ2·R_geo`, where `R_fmt` is the
//! binary format indicator and `R_geo` the ω-weighted per-category
//! precision against a reference.
//!
//! `R_geo` only looks at precision, so a prediction that drops primitives
//! but gets the remaining ones right still earns `R_geo = 1`. The format
//! term and group-relative training are what push towards completeness.
//! [`GeoMetric::F1`] swaps precision for F1 when recall should count.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ast::Domain;
use crate::canon::{canonicalize, CanonMode, CanonicalDocument, Category};
use crate::error::{ConfigError, RewardError};
use crate::metrics::{unit_pr, Counts};
use crate::parser::parse_document;
use crate::scalar::{harmonic, Scalar};
use crate::validator::{check_consistency, check_format, Severity};

/// Per-category score that `R_geo` weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeoMetric {
    #[default]
    Precision,
    /// Extension: F1 in place of precision.
    F1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, bound = "S: Scalar")]
pub struct RewardConfig<S> {
    pub lambda1: S,
    pub lambda2: S,
    /// Category weights. Empty means uniform over the domain's categories;
    /// otherwise unlisted categories weigh 0.
    pub omega: BTreeMap<Category, S>,
    pub mode: CanonMode,
    pub geo_metric: GeoMetric,
}

impl<S: Scalar> Default for RewardConfig<S> {
    fn default() -> Self {
        RewardConfig {
            lambda1: S::lit(0.2),
            lambda2: S::lit(0.8),
            omega: BTreeMap::new(),
            mode: CanonMode::default(),
            geo_metric: GeoMetric::Precision,
        }
    }
}

fn check_weight<S: Scalar>(name: &str, value: S) -> Result<(), ConfigError> {
    if value.is_finite() && value >= S::zero() {
        Ok(())
    } else {
        Err(ConfigError::NegativeWeight {
            name: name.to_string(),
            value: value.to_f64().unwrap_or(f64::NAN),
        })
    }
}

impl<S: Scalar> RewardConfig<S> {
    /// Parse `{"lambda1", "lambda2", "omega", "mode", "geo_metric"}`; every
    /// field is optional.
    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        let value: Value = serde_json::from_str(text).map_err(|e| ConfigError::Malformed(e.to_string()))?;
        Self::from_json_value(value)
    }

    pub fn from_json_value(value: Value) -> Result<Self, ConfigError> {
        if let Some(omega) = value.get("omega").and_then(Value::as_object) {
            if let Some(bad) = omega.keys().find(|k| Category::from_name(k).is_none()) {
                return Err(ConfigError::UnknownCategory(bad.clone()));
            }
        }
        let cfg: Self = serde_json::from_value(value).map_err(|e| ConfigError::Malformed(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Every weight finite and nonnegative, and λ not all zero.
    pub fn validate(&self) -> Result<(), ConfigError> {
        check_weight("lambda1", self.lambda1)?;
        check_weight("lambda2", self.lambda2)?;
        if self.lambda1 + self.lambda2 == S::zero() {
            return Err(ConfigError::ZeroLambda);
        }
        for (c, &w) in &self.omega {
            check_weight(&format!("omega.{}", c.name()), w)?;
        }
        Ok(())
    }

    /// λ scaled to sum to 1 and ω spelled out over the domain's active
    /// categories, scaled to sum to 1. Weights for inactive categories are
    /// dropped.
    pub fn normalized(&self, domain: Domain) -> Result<Self, ConfigError> {
        self.validate()?;
        let lsum = self.lambda1 + self.lambda2;
        let active = Category::active(domain);
        let raw: Vec<(Category, S)> = active
            .iter()
            .map(|&c| {
                let w = if self.omega.is_empty() {
                    S::one()
                } else {
                    self.omega.get(&c).copied().unwrap_or_else(S::zero)
                };
                (c, w)
            })
            .collect();
        let wsum = raw.iter().fold(S::zero(), |a, &(_, w)| a + w);
        if wsum == S::zero() {
            return Err(ConfigError::ZeroOmega(domain.to_string()));
        }
        Ok(RewardConfig {
            lambda1: self.lambda1 / lsum,
            lambda2: self.lambda2 / lsum,
            omega: raw.into_iter().map(|(c, w)| (c, w / wsum)).collect(),
            mode: self.mode,
            geo_metric: self.geo_metric,
        })
    }
}

/// Partial config; present fields replace those of a base config.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, bound = "S: Scalar")]
pub struct RewardConfigOverride<S> {
    pub lambda1: Option<S>,
    pub lambda2: Option<S>,
    pub omega: Option<BTreeMap<Category, S>>,
    pub mode: Option<CanonMode>,
    pub geo_metric: Option<GeoMetric>,
}

impl<S: Scalar> RewardConfigOverride<S> {
    pub fn apply(&self, base: &RewardConfig<S>) -> RewardConfig<S> {
        RewardConfig {
            lambda1: self.lambda1.unwrap_or(base.lambda1),
            lambda2: self.lambda2.unwrap_or(base.lambda2),
            omega: self.omega.clone().unwrap_or_else(|| base.omega.clone()),
            mode: self.mode.unwrap_or(base.mode),
            geo_metric: self.geo_metric.unwrap_or(base.geo_metric),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct RewardBreakdown<S> {
    pub domain: Domain,
    pub r_fmt: S,
    pub r_geo: S,
    pub total: S,
    /// Active categories only.
    pub per_category_precision: BTreeMap<Category, S>,
    /// The normalized config the reward was computed under.
    pub config_echo: RewardConfig<S>,
}

/// 1 if the text is format-compliant for the domain, else 0.
pub fn format_reward<S: Scalar>(text: &str, domain: Domain) -> S {
    if check_format(text, domain).is_compliant {
        S::one()
    } else {
        S::zero()
    }
}

/// Precision of one category, with 1 for an empty prediction against an
/// empty reference and 0 against a nonempty one.
pub fn category_precision<S: Scalar>(counts: Counts) -> S {
    unit_pr::<S>(counts.tp, counts.pred, counts.reference).0
}

fn counts(pred: &CanonicalDocument, reference: &CanonicalDocument, c: Category) -> Counts {
    let (p, r) = (pred.get(c), reference.get(c));
    Counts::new(p.intersection(r).count(), p.len(), r.len())
}

fn category_score<S: Scalar>(k: Counts, metric: GeoMetric) -> S {
    let (p, r) = unit_pr::<S>(k.tp, k.pred, k.reference);
    match metric {
        GeoMetric::Precision => p,
        GeoMetric::F1 => harmonic(p, r),
    }
}

/// ω-weighted mean of per-category scores over the reference's domain.
/// Missing ω means uniform. Computed as `Σ ω·p / Σ ω`, so a perfect
/// prediction scores exactly 1 under any weights.
pub fn geometric_reward<S: Scalar>(pred: &CanonicalDocument, reference: &CanonicalDocument, cfg: &RewardConfig<S>) -> S {
    let mut num = S::zero();
    let mut den = S::zero();
    for &c in Category::active(reference.domain) {
        let w = if cfg.omega.is_empty() {
            S::one()
        } else {
            cfg.omega.get(&c).copied().unwrap_or_else(S::zero)
        };
        num = num + w * category_score::<S>(counts(pred, reference, c), cfg.geo_metric);
        den = den + w;
    }
    if den == S::zero() {
        S::zero()
    } else {
        num / den
    }
}

/// Reasons a reference cannot serve as ground truth: parse diagnostics
/// and consistency errors.
pub fn reference_problems(ref_text: &str, domain: Domain) -> Vec<String> {
    let parsed = parse_document(ref_text, domain);
    let mut problems: Vec<String> = parsed
        .diagnostics
        .iter()
        .map(|d| format!("{}:{}: {}", d.line, d.column, d.message))
        .collect();
    problems.extend(
        check_consistency(&parsed.document)
            .into_iter()
            .filter(|f| f.severity == Severity::Error)
            .map(|f| f.to_string()),
    );
    problems
}

/// Full reward of a prediction against a reference. Statements of the
/// prediction that do not parse are dropped before matching.
pub fn total_reward<S: Scalar>(
    text: &str,
    ref_text: &str,
    domain: Domain,
    cfg: &RewardConfig<S>,
) -> Result<RewardBreakdown<S>, RewardError> {
    let cfg = cfg.normalized(domain)?;
    let problems = reference_problems(ref_text, domain);
    if !problems.is_empty() {
        return Err(RewardError::BadReference(problems));
    }
    let reference = canonicalize(&parse_document(ref_text, domain).document, cfg.mode);
    let pred = canonicalize(&parse_document(text, domain).document, cfg.mode);

    let r_fmt: S = format_reward(text, domain);
    let r_geo = geometric_reward(&pred, &reference, &cfg);
    let total = (cfg.lambda1 * r_fmt + cfg.lambda2 * r_geo) / (cfg.lambda1 + cfg.lambda2);
    let per_category_precision = Category::active(domain)
        .iter()
        .map(|&c| (c, category_precision::<S>(counts(&pred, &reference, c))))
        .collect();
    Ok(RewardBreakdown {
        domain,
        r_fmt,
        r_geo,
        total,
        per_category_precision,
        config_echo: cfg,
    })
}
