//! JSONL corpora of `(prediction, reference)` pairs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ast::Domain;
use crate::canon::{canonicalize, CanonMode};
use crate::error::{CorpusError, MetricsError};
use crate::metrics::{match_pair, score_matches, Aggregation, CorpusReport, MatchResult};
use crate::scalar::Scalar;
use crate::parser::parse_document;

/// One line of a corpus file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusRecord {
    pub id: String,
    pub prediction: String,
    pub reference: String,
    pub domain: Domain,
}

/// Parse JSONL text. Blank lines are skipped; line numbers are 1-based.
pub fn read_jsonl(text: &str) -> Result<Vec<CorpusRecord>, CorpusError> {
    let mut records = Vec::new();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let record: CorpusRecord = serde_json::from_str(raw).map_err(|e| CorpusError::Malformed {
            line,
            message: e.to_string(),
        })?;
        if let Some(&first) = seen.get(&record.id) {
            return Err(CorpusError::DuplicateId { id: record.id, line, first });
        }
        seen.insert(record.id.clone(), line);
        records.push(record);
    }
    Ok(records)
}

pub fn write_jsonl(records: &[CorpusRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("record serializes") + "\n")
        .collect()
}

/// Parse, canonicalize and match one record. Prediction statements that
/// fail to parse are dropped, so garbage scores as an empty document.
pub fn match_record(record: &CorpusRecord, mode: CanonMode) -> Result<MatchResult, MetricsError> {
    let pred = canonicalize(&parse_document(&record.prediction, record.domain).document, mode);
    let reference = canonicalize(&parse_document(&record.reference, record.domain).document, mode);
    match_pair(&pred, &reference)
}

/// Score records that all belong to `domain`.
pub fn score_records<S: Scalar>(
    records: &[CorpusRecord],
    domain: Domain,
    aggregation: Aggregation,
    mode: CanonMode,
) -> Result<CorpusReport<S>, MetricsError> {
    if records.iter().any(|r| r.domain != domain) {
        return Err(MetricsError::MixedDomains);
    }
    let matches = records
        .iter()
        .map(|r| match_record(r, mode))
        .collect::<Result<Vec<_>, _>>()?;
    score_matches(domain, &matches, aggregation)
}

/// Domains present, in first-seen order.
pub fn domains(records: &[CorpusRecord]) -> Vec<Domain> {
    let mut out = Vec::new();
    for r in records {
        if !out.contains(&r.domain) {
            out.push(r.domain);
        }
    }
    out
}
