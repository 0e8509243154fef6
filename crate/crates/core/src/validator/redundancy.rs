use std::collections::BTreeSet;

use super::{on_one_line, LintFinding, Rule, Severity, Subject};
use crate::ast::{Document, Segment, SemanticClause};
use crate::canon::{self, CanonMode};
use crate::label::PointLabel;
use crate::lexer::Section;

fn is_contiguous_subrun(short: &[PointLabel], long: &[PointLabel]) -> bool {
    if short.len() >= long.len() {
        return false;
    }
    let rev: Vec<PointLabel> = short.iter().rev().cloned().collect();
    long.windows(short.len()).any(|w| w == short || w == rev.as_slice())
}

/// `{vertex, arm}` lies along `seg`: either it is the segment itself or a
/// declared line carries all four points.
fn supports(doc: &Document, seg: &Segment, vertex: &PointLabel, arm: &PointLabel) -> bool {
    let same = Segment(vertex.clone(), arm.clone()).normalized() == seg.normalized();
    same || on_one_line(doc, [&seg.0, &seg.1, vertex, arm])
}

fn same_carrier(doc: &Document, a: &Segment, b: &Segment) -> bool {
    a.normalized() == b.normalized() || on_one_line(doc, [&a.0, &a.1, &b.0, &b.1])
}

pub fn lint_redundancy(doc: &Document) -> Vec<LintFinding> {
    let mut out = Vec::new();
    let warn = |section, index, rule, message| {
        LintFinding::on(doc, rule, Severity::Warning, Some(Subject { section, index }), message)
    };

    for (i, short) in doc.lines.iter().enumerate() {
        if let Some(long) = doc.lines.iter().find(|l| is_contiguous_subrun(&short.points, &l.points)) {
            out.push(warn(
                Section::Lines,
                i,
                Rule::SplitLine,
                format!("`{}` is part of `{}`; list the full line once", canon::line_key(short), canon::line_key(long)),
            ));
        }
    }

    let plane_sets: Vec<BTreeSet<&PointLabel>> = doc.planes.iter().map(|p| p.points.iter().collect()).collect();
    for (i, set) in plane_sets.iter().enumerate() {
        if let Some(j) = plane_sets.iter().position(|other| set.len() < other.len() && set.is_subset(other)) {
            let mode = CanonMode::default();
            out.push(warn(
                Section::Planes,
                i,
                Rule::NonMaximalPlane,
                format!(
                    "`{}` is contained in `{}`; planes must list every point on them",
                    canon::plane_key(&doc.planes[i], mode),
                    canon::plane_key(&doc.planes[j], mode)
                ),
            ));
        }
    }

    let perps: Vec<(usize, &Segment, &Segment, Option<&PointLabel>)> = doc
        .semantics
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match c {
            SemanticClause::Perp { first, second, foot } => Some((i, first, second, foot.as_ref())),
            _ => None,
        })
        .collect();

    for (i, clause) in doc.semantics.iter().enumerate() {
        let SemanticClause::AngleMeasure { points, value } = clause else {
            continue;
        };
        if !value.is_integer(90) {
            continue;
        }
        let [a, vertex, c] = points;
        let duplicated = perps.iter().any(|(_, s, t, foot)| {
            let at_vertex = match foot {
                Some(f) => *f == vertex,
                None => s.contains(vertex) && t.contains(vertex),
            };
            at_vertex
                && ((supports(doc, s, vertex, a) && supports(doc, t, vertex, c))
                    || (supports(doc, s, vertex, c) && supports(doc, t, vertex, a)))
        });
        if duplicated {
            out.push(warn(
                Section::Semantics,
                i,
                Rule::RightAngleDuplication,
                format!(
                    "`{}` restates a perpendicular clause at {vertex}",
                    canon::semantic_key(clause, CanonMode::default())
                ),
            ));
        }
    }

    for (x, &(i, s1, t1, _)) in perps.iter().enumerate() {
        for &(j, s2, t2, _) in &perps[x + 1..] {
            let key_i = canon::semantic_key(&doc.semantics[i], CanonMode::default());
            let key_j = canon::semantic_key(&doc.semantics[j], CanonMode::default());
            if key_i == key_j {
                continue;
            }
            let collapsible = (same_carrier(doc, s1, s2) && same_carrier(doc, t1, t2))
                || (same_carrier(doc, s1, t2) && same_carrier(doc, t1, s2));
            if collapsible {
                out.push(warn(
                    Section::Semantics,
                    j,
                    Rule::CollinearPerp,
                    format!("`{key_j}` and `{key_i}` describe one perpendicularity along a declared line"),
                ));
            }
        }
    }

    out
}
