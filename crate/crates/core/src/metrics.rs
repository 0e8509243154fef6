//! Set-matching evaluation: per-category precision/recall/F1, Sample
//! Accuracy, Perfect Parsing Rate, solid-type accuracy and Overall Score.
//!
//! All percentages are in `[0, 100]` and generic over the float type.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::ast::Domain;
use crate::canon::{CanonicalDocument, Category, PerCategory};
use crate::error::MetricsError;
use crate::scalar::{harmonic, ratio, round1, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Counts {
    pub tp: usize,
    pub pred: usize,
    #[serde(rename = "ref")]
    pub reference: usize,
}

impl Counts {
    pub fn new(tp: usize, pred: usize, reference: usize) -> Self {
        debug_assert!(tp <= pred.min(reference));
        Counts { tp, pred, reference }
    }

    /// Predicted set equals the reference set.
    pub fn exact(&self) -> bool {
        self.tp == self.pred && self.tp == self.reference
    }
}

impl std::ops::AddAssign for Counts {
    fn add_assign(&mut self, rhs: Self) {
        self.tp += rhs.tp;
        self.pred += rhs.pred;
        self.reference += rhs.reference;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchResult {
    pub counts: PerCategory<Counts>,
    pub solid_type_match: bool,
}

impl MatchResult {
    /// Every active category matches exactly.
    pub fn is_perfect(&self, domain: Domain) -> bool {
        Category::active(domain).iter().all(|&c| self.counts[c].exact())
    }
}

/// Compare two canonical documents category by category.
pub fn match_pair(pred: &CanonicalDocument, reference: &CanonicalDocument) -> Result<MatchResult, MetricsError> {
    if pred.mode != reference.mode {
        return Err(MetricsError::ModeMismatch {
            pred: pred.mode,
            reference: reference.mode,
        });
    }
    let counts = PerCategory::from_fn(|c| {
        let (p, r) = (pred.get(c), reference.get(c));
        Counts::new(p.intersection(r).count(), p.len(), r.len())
    });
    Ok(MatchResult {
        counts,
        solid_type_match: pred.solid_kinds == reference.solid_kinds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf<S> {
    pub p: S,
    pub r: S,
    pub f1: S,
}

/// Precision, recall and F1 in percent. An empty side scores 100 against
/// an empty side and 0 against a nonempty one.
pub fn category_prf<S: Scalar>(tp: usize, pred: usize, reference: usize) -> Prf<S> {
    let (p, r) = unit_pr::<S>(tp, pred, reference);
    let h = S::hundred();
    Prf {
        p: p * h,
        r: r * h,
        f1: harmonic(p, r) * h,
    }
}

/// Precision and recall as fractions with the vacuous-agreement convention.
pub fn unit_pr<S: Scalar>(tp: usize, pred: usize, reference: usize) -> (S, S) {
    let both_empty = pred == 0 && reference == 0;
    let empty = if both_empty { S::one() } else { S::zero() };
    (ratio(tp, pred, empty), ratio(tp, reference, empty))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregation {
    /// Sum counts over the corpus, then compute ratios.
    #[default]
    Micro,
    /// Average per-sample ratios.
    Macro,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusReport<S> {
    pub domain: Domain,
    pub samples: usize,
    pub aggregation: Aggregation,
    /// `None` for categories not scored in this domain.
    pub categories: PerCategory<Option<Prf<S>>>,
    pub sample_accuracy: PerCategory<Option<S>>,
    pub ppr: S,
    /// Solid-type accuracy; solid domain only.
    pub solids_acc: Option<S>,
    pub overall: S,
    /// Raw summed counts, for audit.
    pub totals: PerCategory<Counts>,
}

/// Score already-matched samples of one domain.
pub fn score_matches<S: Scalar>(
    domain: Domain,
    matches: &[MatchResult],
    aggregation: Aggregation,
) -> Result<CorpusReport<S>, MetricsError> {
    if matches.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }
    let n = matches.len();
    let active = Category::active(domain);
    let pct = |k: usize| S::from_count(k) / S::from_count(n) * S::hundred();

    let mut totals = PerCategory::<Counts>::default();
    for m in matches {
        for c in Category::ALL {
            totals[c] += m.counts[c];
        }
    }

    let categories = PerCategory::from_fn(|c| {
        if !active.contains(&c) {
            return None;
        }
        Some(match aggregation {
            Aggregation::Micro => category_prf(totals[c].tp, totals[c].pred, totals[c].reference),
            Aggregation::Macro => {
                let mut acc = Prf {
                    p: S::zero(),
                    r: S::zero(),
                    f1: S::zero(),
                };
                for m in matches {
                    let k = m.counts[c];
                    let prf: Prf<S> = category_prf(k.tp, k.pred, k.reference);
                    acc.p = acc.p + prf.p;
                    acc.r = acc.r + prf.r;
                    acc.f1 = acc.f1 + prf.f1;
                }
                let count = S::from_count(n);
                Prf {
                    p: acc.p / count,
                    r: acc.r / count,
                    f1: acc.f1 / count,
                }
            }
        })
    });

    let sample_accuracy = PerCategory::from_fn(|c| {
        active
            .contains(&c)
            .then(|| pct(matches.iter().filter(|m| m.counts[c].exact()).count()))
    });
    let ppr = pct(matches.iter().filter(|m| m.is_perfect(domain)).count());
    let solids_acc = (domain == Domain::Solid).then(|| pct(matches.iter().filter(|m| m.solid_type_match).count()));

    let mut parts: Vec<S> = Vec::new();
    for &c in active {
        if c == Category::Solids {
            parts.push(solids_acc.unwrap());
        } else {
            parts.push(categories[c].unwrap().f1);
        }
    }
    let overall = parts.iter().fold(S::zero(), |a, &b| a + b) / S::from_count(parts.len());

    Ok(CorpusReport {
        domain,
        samples: n,
        aggregation,
        categories,
        sample_accuracy,
        ppr,
        solids_acc,
        overall,
        totals,
    })
}

/// Match and score `(prediction, reference)` pairs of one domain.
pub fn score_corpus<S: Scalar>(
    domain: Domain,
    pairs: &[(CanonicalDocument, CanonicalDocument)],
    aggregation: Aggregation,
) -> Result<CorpusReport<S>, MetricsError> {
    if pairs.iter().any(|(p, r)| p.domain != domain || r.domain != domain) {
        return Err(MetricsError::MixedDomains);
    }
    let matches = pairs
        .iter()
        .map(|(p, r)| match_pair(p, r))
        .collect::<Result<Vec<_>, _>>()?;
    score_matches(domain, &matches, aggregation)
}

/// Mean of category scores, the Overall Score of a report.
pub fn overall_score<S: Scalar>(scores: &[S]) -> S {
    scores.iter().fold(S::zero(), |a, &b| a + b) / S::from_count(scores.len())
}

impl<S: Scalar> CorpusReport<S> {
    /// Fixed-key JSON with one-decimal percentages.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("domain".into(), json!(self.domain));
        obj.insert("samples".into(), json!(self.samples));
        obj.insert("aggregation".into(), json!(self.aggregation));
        for c in Category::ALL {
            let v = match &self.categories[c] {
                Some(prf) => {
                    let mut m = Map::new();
                    m.insert("p".into(), json!(round1(prf.p)));
                    m.insert("r".into(), json!(round1(prf.r)));
                    m.insert("f1".into(), json!(round1(prf.f1)));
                    if c == Category::Solids {
                        if let Some(acc) = self.solids_acc {
                            m.insert("acc".into(), json!(round1(acc)));
                        }
                    }
                    Value::Object(m)
                }
                None => Value::Null,
            };
            obj.insert(c.name().into(), v);
        }
        let mut sa = Map::new();
        for c in Category::ALL {
            sa.insert(
                c.name().into(),
                self.sample_accuracy[c].map_or(Value::Null, |v| json!(round1(v))),
            );
        }
        obj.insert("sa".into(), Value::Object(sa));
        obj.insert("ppr".into(), json!(round1(self.ppr)));
        obj.insert("overall".into(), json!(round1(self.overall)));
        Value::Object(obj)
    }

    /// Aligned text table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} corpus, {} samples ({} average)",
            self.domain,
            self.samples,
            match self.aggregation {
                Aggregation::Micro => "micro",
                Aggregation::Macro => "macro",
            }
        );
        let _ = writeln!(out, "{:<10} {:>6} {:>6} {:>6} {:>6}", "category", "P", "R", "F1", "SA");
        for &c in Category::active(self.domain) {
            let prf = self.categories[c].unwrap();
            let _ = writeln!(
                out,
                "{:<10} {:>6.1} {:>6.1} {:>6.1} {:>6.1}",
                c.name(),
                round1(prf.p),
                round1(prf.r),
                round1(prf.f1),
                round1(self.sample_accuracy[c].unwrap())
            );
        }
        if let Some(acc) = self.solids_acc {
            let _ = writeln!(out, "{:<10} {:>6.1}", "solid acc", round1(acc));
        }
        let _ = writeln!(out, "{:<10} {:>6.1}", "PPR", round1(self.ppr));
        let _ = writeln!(out, "{:<10} {:>6.1}", "overall", round1(self.overall));
        out
    }
}
