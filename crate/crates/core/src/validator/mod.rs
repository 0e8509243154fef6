//! Reference-free checks: tag/format compliance, internal consistency and
//! redundancy lints.

mod consistency;
mod format;
mod redundancy;

use std::fmt;

use serde::{Serialize, Serializer};

pub use consistency::check_consistency;
pub use format::{check_format, FormatDiagnostic, FormatReport};
pub use redundancy::lint_redundancy;

use crate::ast::{Document, Domain, Span};
use crate::lexer::Section;
use crate::parser::{parse_document, DiagnosticKind};

/// Ordered so that `Error > Warning`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// The fixed rule registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Format,
    SectionOrder,
    Syntax,
    LineArity,
    PlaneArity,
    UndeclaredPoint,
    DuplicatePrimitive,
    PerpFoot,
    SplitLine,
    NonMaximalPlane,
    RightAngleDuplication,
    CollinearPerp,
}

impl Rule {
    pub const ALL: [Rule; 12] = [
        Rule::Format,
        Rule::SectionOrder,
        Rule::Syntax,
        Rule::LineArity,
        Rule::PlaneArity,
        Rule::UndeclaredPoint,
        Rule::DuplicatePrimitive,
        Rule::PerpFoot,
        Rule::SplitLine,
        Rule::NonMaximalPlane,
        Rule::RightAngleDuplication,
        Rule::CollinearPerp,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::Format => "format",
            Rule::SectionOrder => "section-order",
            Rule::Syntax => "syntax",
            Rule::LineArity => "line-arity",
            Rule::PlaneArity => "plane-arity",
            Rule::UndeclaredPoint => "undeclared-point",
            Rule::DuplicatePrimitive => "duplicate-primitive",
            Rule::PerpFoot => "perp-foot",
            Rule::SplitLine => "split-line",
            Rule::NonMaximalPlane => "non-maximal-plane",
            Rule::RightAngleDuplication => "right-angle-duplication",
            Rule::CollinearPerp => "collinear-perp",
        }
    }

    pub fn from_id(id: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.id() == id)
    }

    pub(crate) fn for_diagnostic(kind: DiagnosticKind) -> Rule {
        match kind {
            DiagnosticKind::LineArity => Rule::LineArity,
            DiagnosticKind::PlaneArity => Rule::PlaneArity,
            DiagnosticKind::UnknownTag | DiagnosticKind::SectionMismatch => Rule::Format,
            _ => Rule::Syntax,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.id())
    }
}

/// Statement a finding is about: the `index`-th entry of a section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subject {
    pub section: Section,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LintFinding {
    pub rule: Rule,
    pub severity: Severity,
    #[serde(skip)]
    pub subject: Option<Subject>,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl LintFinding {
    pub(crate) fn on(doc: &Document, rule: Rule, severity: Severity, subject: Option<Subject>, message: String) -> Self {
        let span = subject.and_then(|s| doc.span_of(s.section, s.index));
        LintFinding::at(rule, severity, subject, span, message)
    }

    pub(crate) fn at(rule: Rule, severity: Severity, subject: Option<Subject>, span: Option<Span>, message: String) -> Self {
        LintFinding {
            rule,
            severity,
            subject,
            line: span.map(|s| s.line),
            column: span.map(|s| s.column),
            message,
        }
    }
}

impl fmt::Display for LintFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let (Some(l), Some(c)) = (self.line, self.column) {
            write!(f, "{l}:{c}: ")?;
        }
        write!(f, "{}[{}]: {}", self.severity, self.rule, self.message)
    }
}

/// All checks over raw text: format structure, per-statement parse errors,
/// consistency and redundancy.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub format: FormatReport,
    pub findings: Vec<LintFinding>,
}

impl CheckReport {
    pub fn errors(&self) -> usize {
        self.findings.iter().filter(|f| f.severity == Severity::Error).count()
    }

    pub fn warnings(&self) -> usize {
        self.findings.iter().filter(|f| f.severity == Severity::Warning).count()
    }
}

pub fn check_text(text: &str, domain: Domain) -> CheckReport {
    let format = check_format(text, domain);
    let parsed = parse_document(text, domain);
    let mut findings: Vec<LintFinding> = format
        .diagnostics
        .iter()
        .map(|d| {
            LintFinding::at(
                d.rule,
                d.severity,
                None,
                (d.line > 0).then_some(Span {
                    line: d.line,
                    column: d.column,
                }),
                d.message.clone(),
            )
        })
        .collect();
    findings.extend(check_consistency(&parsed.document));
    findings.extend(lint_redundancy(&parsed.document));
    findings.sort_by(|a, b| {
        (a.line, a.column, std::cmp::Reverse(a.severity), a.rule)
            .cmp(&(b.line, b.column, std::cmp::Reverse(b.severity), b.rule))
    });
    CheckReport { format, findings }
}

/// Collinearity is only ever what declared lines say.
pub(crate) fn on_one_line<'a>(doc: &Document, points: impl IntoIterator<Item = &'a crate::label::PointLabel> + Clone) -> bool {
    doc.lines
        .iter()
        .any(|l| points.clone().into_iter().all(|p| l.points.contains(p)))
}
