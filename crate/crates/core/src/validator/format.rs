use std::collections::BTreeSet;

use serde::Serialize;

use super::{Rule, Severity};
use crate::ast::Domain;
use crate::lexer::{lex, Section, TokenKind};
use crate::parser::parse_document;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormatDiagnostic {
    pub rule: Rule,
    pub severity: Severity,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Outcome of the tag-structure check behind the format reward.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormatReport {
    pub is_compliant: bool,
    pub missing_tags: Vec<Section>,
    pub malformed_statements: usize,
    pub diagnostics: Vec<FormatDiagnostic>,
}

/// Compliant iff every required tag of the domain is opened and closed
/// exactly once without nesting, nothing sits outside the tags, and every
/// statement parses as the type its section calls for. Section order only
/// warns.
pub fn check_format(text: &str, domain: Domain) -> FormatReport {
    let required = domain.sections();
    let mut diagnostics = Vec::new();
    let mut malformed = 0usize;
    let error = |diagnostics: &mut Vec<FormatDiagnostic>, rule, line, column, message: String| {
        diagnostics.push(FormatDiagnostic {
            rule,
            severity: Severity::Error,
            line,
            column,
            message,
        });
    };

    let mut completed: Vec<Section> = Vec::new();
    let mut broken: BTreeSet<Section> = BTreeSet::new();
    let mut open: Option<Section> = None;
    for tok in lex(text).tokens {
        match &tok.kind {
            TokenKind::TagOpen(name) => {
                let Some(section) = Section::from_tag(name).filter(|s| required.contains(s)) else {
                    malformed += 1;
                    error(&mut diagnostics, Rule::Format, tok.line, tok.column, format!("unexpected tag <{name}> for a {domain} document"));
                    continue;
                };
                if let Some(outer) = open {
                    broken.insert(outer);
                    broken.insert(section);
                    error(&mut diagnostics, Rule::Format, tok.line, tok.column, format!("<{section}> opened inside <{outer}>"));
                }
                open = Some(section);
            }
            TokenKind::TagClose(name) => {
                let Some(section) = Section::from_tag(name).filter(|s| required.contains(s)) else {
                    malformed += 1;
                    error(&mut diagnostics, Rule::Format, tok.line, tok.column, format!("unexpected tag </{name}> for a {domain} document"));
                    continue;
                };
                if open == Some(section) {
                    completed.push(section);
                } else {
                    broken.insert(section);
                    if let Some(outer) = open {
                        broken.insert(outer);
                    }
                    error(&mut diagnostics, Rule::Format, tok.line, tok.column, format!("</{section}> does not close an open <{section}>"));
                }
                open = None;
            }
            TokenKind::Header(section) => {
                malformed += 1;
                error(&mut diagnostics, Rule::Format, tok.line, tok.column, format!("header `{}:` used instead of <{}> tags", section.header(), section.tag()));
            }
            _ => {}
        }
    }
    if let Some(section) = open {
        broken.insert(section);
    }

    let mut missing_tags = Vec::new();
    for &section in required {
        let count = completed.iter().filter(|&&s| s == section).count();
        if count != 1 || broken.contains(&section) {
            missing_tags.push(section);
            let what = if count > 1 { "appears more than once" } else { "is missing or not properly closed" };
            error(&mut diagnostics, Rule::Format, 0, 0, format!("<{section}> {what}"));
        }
    }

    let expected_order: Vec<Section> = required.iter().copied().filter(|s| completed.contains(s)).collect();
    let mut seen = Vec::new();
    for s in &completed {
        if !seen.contains(s) {
            seen.push(*s);
        }
    }
    if missing_tags.is_empty() && seen != expected_order {
        diagnostics.push(FormatDiagnostic {
            rule: Rule::SectionOrder,
            severity: Severity::Warning,
            line: 0,
            column: 0,
            message: format!(
                "sections appear as {}; expected {}",
                seen.iter().map(|s| s.tag()).collect::<Vec<_>>().join(", "),
                expected_order.iter().map(|s| s.tag()).collect::<Vec<_>>().join(", ")
            ),
        });
    }

    let parsed = parse_document(text, domain);
    for stmt in &parsed.statements {
        if stmt.section.is_none() && stmt.ok {
            malformed += 1;
            error(&mut diagnostics, Rule::Format, stmt.span.line, stmt.span.column, "statement outside any section".to_string());
        } else if !stmt.ok {
            malformed += 1;
        }
    }
    for d in &parsed.diagnostics {
        if d.kind == crate::parser::DiagnosticKind::UnknownTag {
            // already counted above
            continue;
        }
        error(&mut diagnostics, Rule::for_diagnostic(d.kind), d.line, d.column, d.message.clone());
    }

    diagnostics.sort_by_key(|d| (d.line, d.column));
    FormatReport {
        is_compliant: missing_tags.is_empty() && malformed == 0,
        missing_tags,
        malformed_statements: malformed,
        diagnostics,
    }
}
