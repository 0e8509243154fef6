use std::fmt::Write;

use crate::ast::{run, Dialect, Document, SegmentRhs, SemanticClause, Solid};
use crate::label::PointLabel;
use crate::lexer::Section;

fn spaced(labels: impl IntoIterator<Item = impl ToString>) -> String {
    labels.into_iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn render_solid(solid: &Solid) -> String {
    let body = solid.groups.iter().map(|g| run(g)).collect::<Vec<_>>().join("-");
    format!("solid {} {}", solid.kind.name(), body)
}

pub fn render_clause(clause: &SemanticClause) -> String {
    match clause {
        SemanticClause::SegmentEq { lhs, rhs } => match rhs {
            SegmentRhs::Segment(s) => format!("{lhs} = {s}"),
            SegmentRhs::Value(v) => format!("{lhs} = {v}"),
        },
        SemanticClause::AngleMeasure { points, value } => {
            format!("m \\angle {} = {}", run(points), value)
        }
        SemanticClause::ArcMeasure { points, value } => {
            format!("m \\widehat {} = {}", run(points), value)
        }
        SemanticClause::Perp { first, second, foot } => match foot {
            Some(f) => format!("{first} \\perp {second} on {f}"),
            None => format!("{first} \\perp {second}"),
        },
        SemanticClause::Parallel { first, second } => format!("{first} \\parallel {second}"),
    }
}

fn section_lines(doc: &Document, section: Section) -> Vec<String> {
    match section {
        Section::Points => {
            if doc.points.is_empty() {
                Vec::new()
            } else {
                let labels: Vec<String> = doc.points.iter().map(PointLabel::to_string).collect();
                vec![format!("[{}]", labels.join(", "))]
            }
        }
        Section::Lines => doc
            .lines
            .iter()
            .map(|l| match &l.name {
                Some(name) => format!("line {name} lineson {}", spaced(&l.points)),
                None => format!("line {}", spaced(&l.points)),
            })
            .collect(),
        Section::Circles => doc
            .circles
            .iter()
            .map(|c| {
                if c.on_points.is_empty() {
                    format!("\\odot {}", c.center)
                } else {
                    format!("\\odot {} lieson {}", c.center, spaced(&c.on_points))
                }
            })
            .collect(),
        Section::Planes => doc
            .planes
            .iter()
            .map(|p| format!("plane {}", spaced(&p.points)))
            .collect(),
        Section::Solids => doc.solids.iter().map(render_solid).collect(),
        Section::Semantics => doc.semantics.iter().map(render_clause).collect(),
    }
}

/// Deterministic serialization. The tagged dialect always carries the full
/// tag set of the document's domain; planes and solids present in a plane
/// document are still emitted.
pub fn render(doc: &Document, dialect: Dialect) -> String {
    let mut sections: Vec<Section> = doc.domain.sections().to_vec();
    for (extra, present) in [
        (Section::Planes, !doc.planes.is_empty()),
        (Section::Solids, !doc.solids.is_empty()),
    ] {
        if present && !sections.contains(&extra) {
            let at = sections.len() - 1;
            sections.insert(at, extra);
        }
    }
    let mut out = String::new();
    for section in sections {
        let body = section_lines(doc, section);
        match dialect {
            Dialect::Tagged => {
                let _ = writeln!(out, "<{}>", section.tag());
                for line in body {
                    let _ = writeln!(out, "{line}");
                }
                let _ = writeln!(out, "</{}>", section.tag());
            }
            Dialect::Headed => {
                let _ = writeln!(out, "**{}:**", section.header());
                for line in body {
                    let _ = writeln!(out, "{line}");
                }
            }
        }
    }
    out
}
