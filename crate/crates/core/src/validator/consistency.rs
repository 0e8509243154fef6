use std::collections::{BTreeMap, BTreeSet};

use super::{LintFinding, Rule, Severity, Subject};
use crate::ast::{Document, SemanticClause};
use crate::canon::{self, CanonMode};
use crate::label::PointLabel;
use crate::lexer::Section;

pub fn check_consistency(doc: &Document) -> Vec<LintFinding> {
    let mut out = Vec::new();

    let mut reported: BTreeSet<&PointLabel> = BTreeSet::new();
    for (section, index, p) in doc.referenced_points() {
        if !doc.points.contains(p) && reported.insert(p) {
            out.push(LintFinding::on(
                doc,
                Rule::UndeclaredPoint,
                Severity::Error,
                Some(Subject { section, index }),
                format!("point {p} is used in {section} but never declared"),
            ));
        }
    }

    for (index, line) in doc.lines.iter().enumerate() {
        if line.points.len() < 2 {
            out.push(LintFinding::on(
                doc,
                Rule::LineArity,
                Severity::Error,
                Some(Subject { section: Section::Lines, index }),
                format!("line has {} point(s); at least 2 are required", line.points.len()),
            ));
        }
    }
    for (index, plane) in doc.planes.iter().enumerate() {
        if plane.points.len() < 3 {
            out.push(LintFinding::on(
                doc,
                Rule::PlaneArity,
                Severity::Error,
                Some(Subject { section: Section::Planes, index }),
                format!("plane has {} point(s); at least 3 labeled points are required", plane.points.len()),
            ));
        }
    }

    let mode = CanonMode::default();
    let keyed: Vec<(Section, Vec<String>)> = vec![
        (Section::Lines, doc.lines.iter().map(canon::line_key).collect()),
        (Section::Circles, doc.circles.iter().map(canon::circle_key).collect()),
        (Section::Planes, doc.planes.iter().map(|p| canon::plane_key(p, mode)).collect()),
        (Section::Solids, doc.solids.iter().map(|s| canon::solid_key(s, mode)).collect()),
        (Section::Semantics, doc.semantics.iter().map(|c| canon::semantic_key(c, mode)).collect()),
    ];
    for (section, keys) in &keyed {
        let mut first_seen: BTreeMap<&str, usize> = BTreeMap::new();
        for (index, key) in keys.iter().enumerate() {
            if let Some(&first) = first_seen.get(key.as_str()) {
                out.push(LintFinding::on(
                    doc,
                    Rule::DuplicatePrimitive,
                    Severity::Error,
                    Some(Subject { section: *section, index }),
                    format!("`{key}` duplicates {section} entry {}", first + 1),
                ));
            } else {
                first_seen.insert(key, index);
            }
        }
    }

    for (index, clause) in doc.semantics.iter().enumerate() {
        let SemanticClause::Perp {
            first,
            second,
            foot: Some(foot),
        } = clause
        else {
            continue;
        };
        for seg in [first, second] {
            let carriers: Vec<_> = doc
                .lines
                .iter()
                .filter(|l| l.points.contains(&seg.0) && l.points.contains(&seg.1))
                .collect();
            if !carriers.is_empty() && !carriers.iter().any(|l| l.points.contains(foot)) {
                out.push(LintFinding::on(
                    doc,
                    Rule::PerpFoot,
                    Severity::Error,
                    Some(Subject {
                        section: Section::Semantics,
                        index,
                    }),
                    format!("foot {foot} is not on the declared line through {}", seg.normalized()),
                ));
            }
        }
    }

    out
}
