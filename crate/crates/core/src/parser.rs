//! Statement parser for both surface dialects.
//!
//! Parsing never fails as a whole: each statement either lands in the
//! [`Document`] or produces one [`Diagnostic`] and is dropped.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::ast::{
    Circle, Dialect, Document, Domain, Line, Plane, Segment, SegmentRhs, SemanticClause, Solid,
    SolidKind, Span,
};
use crate::expr::Expr;
use crate::label::{split_point_run, PointLabel};
use crate::lexer::{lex, Keyword, Section, Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticKind {
    IllegalCharacter,
    MalformedPointRun,
    Syntax,
    LineArity,
    PlaneArity,
    DuplicatePoint,
    InvalidSolid,
    CenterOnRim,
    SectionMismatch,
    UnknownTag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

/// One non-blank statement of the source, whether or not it parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatementInfo {
    pub span: Span,
    /// Enclosing section, if any.
    pub section: Option<Section>,
    /// Section the statement belongs to by its form, when recognized.
    pub kind: Option<Section>,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub document: Document,
    pub diagnostics: Vec<Diagnostic>,
    pub statements: Vec<StatementInfo>,
}

impl Parsed {
    pub fn is_clean(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

#[allow(clippy::large_enum_variant)]
enum Stmt {
    Points(Vec<PointLabel>),
    Line(Line),
    Circle(Circle),
    Plane(Plane),
    Solid(Solid),
    Semantic(SemanticClause),
}

impl Stmt {
    fn section(&self) -> Section {
        match self {
            Stmt::Points(_) => Section::Points,
            Stmt::Line(_) => Section::Lines,
            Stmt::Circle(_) => Section::Circles,
            Stmt::Plane(_) => Section::Planes,
            Stmt::Solid(_) => Section::Solids,
            Stmt::Semantic(_) => Section::Semantics,
        }
    }
}

struct StmtError {
    line: usize,
    column: usize,
    kind: DiagnosticKind,
    message: String,
    /// Statement form, when it was recognized before the error.
    form: Option<Section>,
}

type StmtResult<T> = Result<T, StmtError>;

/// Parse a document in either dialect.
pub fn parse_document(text: &str, domain: Domain) -> Parsed {
    let lexed = lex(text);
    let mut doc = Document::new(domain);
    let mut diagnostics = Vec::new();
    let mut statements = Vec::new();

    let mut section: Option<Section> = None;
    let mut saw_tag = false;
    let mut saw_header = false;
    let mut current: Vec<&Token> = Vec::new();

    let lex_error_lines: BTreeSet<usize> = lexed.errors.iter().map(|e| e.line).collect();
    for err in &lexed.errors {
        diagnostics.push(Diagnostic {
            line: err.line,
            column: err.column,
            kind: DiagnosticKind::IllegalCharacter,
            message: format!("illegal character {:?}", err.ch),
        });
    }
    let flush = |current: &mut Vec<&Token>,
                     section: Option<Section>,
                     doc: &mut Document,
                     diagnostics: &mut Vec<Diagnostic>,
                     statements: &mut Vec<StatementInfo>| {
        if current.is_empty() {
            return;
        }
        let toks = std::mem::take(current);
        let span = Span {
            line: toks[0].line,
            column: toks[0].column,
        };
        if lex_error_lines.contains(&span.line) {
            statements.push(StatementInfo {
                span,
                section,
                kind: None,
                ok: false,
            });
            return;
        }
        match parse_statement(&toks, section) {
            Ok(None) => {}
            Ok(Some(stmt)) => {
                let kind = stmt.section();
                let mismatch = section.is_some_and(|s| s != kind);
                if mismatch {
                    diagnostics.push(Diagnostic {
                        line: span.line,
                        column: span.column,
                        kind: DiagnosticKind::SectionMismatch,
                        message: format!(
                            "{} statement inside the {} section",
                            kind,
                            section.unwrap()
                        ),
                    });
                }
                statements.push(StatementInfo {
                    span,
                    section,
                    kind: Some(kind),
                    ok: !mismatch,
                });
                add_statement(doc, stmt, span);
            }
            Err(e) => {
                diagnostics.push(Diagnostic {
                    line: e.line,
                    column: e.column,
                    kind: e.kind,
                    message: e.message,
                });
                statements.push(StatementInfo {
                    span,
                    section,
                    kind: e.form,
                    ok: false,
                });
            }
        }
    };

    for tok in &lexed.tokens {
        match &tok.kind {
            TokenKind::Newline => flush(&mut current, section, &mut doc, &mut diagnostics, &mut statements),
            TokenKind::TagOpen(name) | TokenKind::TagClose(name) => {
                flush(&mut current, section, &mut doc, &mut diagnostics, &mut statements);
                saw_tag = true;
                let known = Section::from_tag(name);
                if known.is_none() {
                    diagnostics.push(Diagnostic {
                        line: tok.line,
                        column: tok.column,
                        kind: DiagnosticKind::UnknownTag,
                        message: format!("unknown tag <{name}>"),
                    });
                }
                section = match tok.kind {
                    TokenKind::TagOpen(_) => known,
                    _ => None,
                };
            }
            TokenKind::Header(s) => {
                flush(&mut current, section, &mut doc, &mut diagnostics, &mut statements);
                saw_header = true;
                section = Some(*s);
            }
            _ => current.push(tok),
        }
    }
    flush(&mut current, section, &mut doc, &mut diagnostics, &mut statements);
    // illegal characters on lines that carried no statement (e.g. between tags)
    for err in &lexed.errors {
        if !statements.iter().any(|s| s.span.line == err.line) {
            statements.push(StatementInfo {
                span: Span {
                    line: err.line,
                    column: err.column,
                },
                section: None,
                kind: None,
                ok: false,
            });
        }
    }

    doc.dialect = if saw_header && !saw_tag {
        Dialect::Headed
    } else {
        Dialect::Tagged
    };
    Parsed {
        document: doc,
        diagnostics,
        statements,
    }
}

fn add_statement(doc: &mut Document, stmt: Stmt, span: Span) {
    match stmt {
        Stmt::Points(ps) => {
            for p in ps {
                if doc.points.insert(p.clone()) {
                    doc.source.points.push((p, span));
                }
            }
        }
        Stmt::Line(l) => {
            doc.lines.push(l);
            doc.source.lines.push(span);
        }
        Stmt::Circle(c) => {
            doc.circles.push(c);
            doc.source.circles.push(span);
        }
        Stmt::Plane(p) => {
            doc.planes.push(p);
            doc.source.planes.push(span);
        }
        Stmt::Solid(s) => {
            doc.solids.push(s);
            doc.source.solids.push(span);
        }
        Stmt::Semantic(c) => {
            doc.semantics.push(c);
            doc.source.semantics.push(span);
        }
    }
}

struct Cursor<'a> {
    toks: &'a [&'a Token],
    pos: usize,
    form: Option<Section>,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a TokenKind> {
        self.toks.get(self.pos).map(|t| &t.kind)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos).copied();
        self.pos += 1;
        t
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos).or(self.toks.last()) {
            Some(t) => (t.line, t.column),
            None => (0, 0),
        }
    }

    fn error(&self, kind: DiagnosticKind, message: impl Into<String>) -> StmtError {
        let (line, column) = self.here();
        StmtError {
            line,
            column,
            kind,
            message: message.into(),
            form: self.form,
        }
    }

    fn expected(&self, what: &str) -> StmtError {
        let found = match self.peek() {
            Some(k) => describe(k),
            None => "end of statement".to_string(),
        };
        self.error(DiagnosticKind::Syntax, format!("expected {what}, found {found}"))
    }

    fn expect_end(&self) -> StmtResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.expected("end of statement"))
        }
    }

    fn eat_kw(&mut self, kw: Keyword) -> bool {
        if self.peek() == Some(&TokenKind::Kw(kw)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Labels carried by the next token, if it is a label word.
    fn label_token(&mut self) -> StmtResult<Option<Vec<PointLabel>>> {
        let raw = match self.peek() {
            Some(TokenKind::Ident(w)) if w.starts_with(|c: char| c.is_ascii_uppercase()) && !has_lower(w) => w,
            Some(TokenKind::PointRun(w)) => w,
            _ => return Ok(None),
        };
        match split_point_run(raw) {
            Ok(labels) => {
                self.pos += 1;
                Ok(Some(labels))
            }
            Err(e) => Err(self.error(DiagnosticKind::MalformedPointRun, e.to_string())),
        }
    }

    /// Consume consecutive label words.
    fn labels(&mut self) -> StmtResult<Vec<PointLabel>> {
        let mut out = Vec::new();
        while let Some(ls) = self.label_token()? {
            out.extend(ls);
        }
        Ok(out)
    }

    fn single_label(&mut self, what: &str) -> StmtResult<PointLabel> {
        let (line, column) = self.here();
        match self.label_token()? {
            Some(mut ls) if ls.len() == 1 => Ok(ls.pop().unwrap()),
            Some(_) => Err(StmtError {
                line,
                column,
                kind: DiagnosticKind::Syntax,
                message: format!("expected a single point label for {what}"),
                form: self.form,
            }),
            None => Err(self.expected(what)),
        }
    }

    fn segment(&mut self) -> StmtResult<Segment> {
        let (line, column) = self.here();
        let ls = self.labels()?;
        if ls.len() != 2 {
            return Err(StmtError {
                line,
                column,
                kind: DiagnosticKind::Syntax,
                message: format!("expected a segment of two points, found {} points", ls.len()),
                form: self.form,
            });
        }
        if ls[0] == ls[1] {
            return Err(StmtError {
                line,
                column,
                kind: DiagnosticKind::DuplicatePoint,
                message: format!("segment repeats point {}", ls[0]),
                form: self.form,
            });
        }
        Ok(Segment(ls[0].clone(), ls[1].clone()))
    }
}

fn has_lower(w: &str) -> bool {
    w.chars().any(|c| c.is_ascii_lowercase())
}

fn describe(kind: &TokenKind) -> String {
    match kind {
        TokenKind::Kw(k) => format!("`{}`", k.as_str()),
        TokenKind::Cmd(c) => format!("`\\{c}`"),
        TokenKind::Ident(w) | TokenKind::PointRun(w) | TokenKind::Number(w) => format!("`{w}`"),
        TokenKind::Eq => "`=`".into(),
        TokenKind::Dash => "`-`".into(),
        TokenKind::LBracket => "`[`".into(),
        TokenKind::RBracket => "`]`".into(),
        TokenKind::Comma => "`,`".into(),
        TokenKind::Expr(e) => format!("expression `{e}`"),
        TokenKind::TagOpen(t) => format!("<{t}>"),
        TokenKind::TagClose(t) => format!("</{t}>"),
        TokenKind::Header(s) => format!("header {}", s.header()),
        TokenKind::Newline => "end of line".into(),
    }
}

fn duplicate(points: &[PointLabel]) -> Option<&PointLabel> {
    let mut seen = BTreeSet::new();
    points.iter().find(|p| !seen.insert(*p))
}

fn parse_statement(toks: &[&Token], section: Option<Section>) -> StmtResult<Option<Stmt>> {
    let mut c = Cursor {
        toks,
        pos: 0,
        form: None,
    };
    let first = c.peek().expect("statements are nonempty");
    let stmt = match first {
        TokenKind::Ident(w) if w == "None" && toks.len() == 1 => return Ok(None),
        TokenKind::Kw(Keyword::Point) => {
            c.form = Some(Section::Points);
            c.bump();
            let p = c.single_label("a point label")?;
            c.expect_end()?;
            Stmt::Points(vec![p])
        }
        TokenKind::LBracket => {
            c.form = Some(Section::Points);
            c.bump();
            let ps = point_list(&mut c, true)?;
            c.expect_end()?;
            Stmt::Points(ps)
        }
        TokenKind::Kw(Keyword::Line) => {
            c.form = Some(Section::Lines);
            c.bump();
            Stmt::Line(line_stmt(&mut c)?)
        }
        TokenKind::Cmd(cmd) if cmd == "odot" => {
            c.form = Some(Section::Circles);
            c.bump();
            Stmt::Circle(circle_stmt(&mut c)?)
        }
        TokenKind::Kw(Keyword::Plane) => {
            c.form = Some(Section::Planes);
            c.bump();
            let (line, column) = c.here();
            let points = c.labels()?;
            c.expect_end()?;
            if points.len() < 3 {
                return Err(StmtError {
                    line,
                    column,
                    kind: DiagnosticKind::PlaneArity,
                    message: format!("plane needs at least 3 points, found {}", points.len()),
                    form: c.form,
                });
            }
            if let Some(p) = duplicate(&points) {
                return Err(c.error(DiagnosticKind::DuplicatePoint, format!("plane repeats point {p}")));
            }
            Stmt::Plane(Plane { points })
        }
        TokenKind::Kw(Keyword::Solid) => {
            c.form = Some(Section::Solids);
            c.bump();
            Stmt::Solid(solid_stmt(&mut c)?)
        }
        TokenKind::Ident(w) if SolidKind::from_name(w).is_some() => {
            c.form = Some(Section::Solids);
            Stmt::Solid(solid_stmt(&mut c)?)
        }
        TokenKind::Kw(Keyword::M) => {
            c.form = Some(Section::Semantics);
            c.bump();
            Stmt::Semantic(measure_stmt(&mut c)?)
        }
        TokenKind::Ident(_) | TokenKind::PointRun(_) => {
            if section == Some(Section::Points) && is_bare_point_list(toks) {
                c.form = Some(Section::Points);
                let ps = point_list(&mut c, false)?;
                Stmt::Points(ps)
            } else {
                c.form = Some(Section::Semantics);
                Stmt::Semantic(segment_stmt(&mut c)?)
            }
        }
        _ => return Err(c.expected("a statement")),
    };
    Ok(Some(stmt))
}

fn is_bare_point_list(toks: &[&Token]) -> bool {
    toks.iter().all(|t| match &t.kind {
        TokenKind::Ident(w) => !has_lower(w),
        TokenKind::PointRun(_) | TokenKind::Comma => true,
        _ => false,
    })
}

fn point_list(c: &mut Cursor<'_>, bracketed: bool) -> StmtResult<Vec<PointLabel>> {
    let mut out = Vec::new();
    loop {
        match c.peek() {
            Some(TokenKind::RBracket) if bracketed => {
                c.bump();
                return Ok(out);
            }
            None if !bracketed => return Ok(out),
            Some(TokenKind::Comma) => {
                c.bump();
            }
            _ => match c.label_token()? {
                Some(ls) => out.extend(ls),
                None => {
                    return Err(c.expected(if bracketed { "a point label or `]`" } else { "a point label" }))
                }
            },
        }
    }
}

fn line_stmt(c: &mut Cursor<'_>) -> StmtResult<Line> {
    let mut name = None;
    match c.peek() {
        Some(TokenKind::Ident(w)) if !w.starts_with(|ch: char| ch.is_ascii_uppercase()) => {
            name = Some(w.clone());
            c.bump();
        }
        Some(TokenKind::Kw(Keyword::M)) => {
            name = Some("m".to_string());
            c.bump();
        }
        _ => {}
    }
    if name.is_some() && !c.eat_kw(Keyword::Lineson) {
        return Err(c.expected("`lineson`"));
    }
    let (line, column) = c.here();
    let points = c.labels()?;
    c.expect_end()?;
    if points.len() < 2 {
        return Err(StmtError {
            line,
            column,
            kind: DiagnosticKind::LineArity,
            message: format!("line needs at least 2 points, found {}", points.len()),
            form: c.form,
        });
    }
    if let Some(p) = duplicate(&points) {
        return Err(c.error(DiagnosticKind::DuplicatePoint, format!("line repeats point {p}")));
    }
    Ok(Line { points, name })
}

fn circle_stmt(c: &mut Cursor<'_>) -> StmtResult<Circle> {
    let center = c.single_label("the circle center")?;
    let mut on_points = BTreeSet::new();
    if c.eat_kw(Keyword::Lieson) {
        on_points.extend(c.labels()?);
    }
    c.expect_end()?;
    if on_points.contains(&center) {
        return Err(c.error(
            DiagnosticKind::CenterOnRim,
            format!("circle center {center} is listed on its own rim"),
        ));
    }
    Ok(Circle { center, on_points })
}

fn solid_stmt(c: &mut Cursor<'_>) -> StmtResult<Solid> {
    let kind = match c.peek() {
        Some(TokenKind::Ident(w)) => match SolidKind::from_name(w) {
            Some(k) => k,
            None => {
                return Err(c.error(
                    DiagnosticKind::InvalidSolid,
                    format!("unknown solid category `{w}`"),
                ))
            }
        },
        _ => return Err(c.expected("a solid category")),
    };
    c.bump();
    let (line, column) = c.here();
    let mut groups = vec![c.labels()?];
    while c.peek() == Some(&TokenKind::Dash) {
        c.bump();
        groups.push(c.labels()?);
    }
    c.expect_end()?;
    if groups.len() > 2 || groups.iter().any(Vec::is_empty) {
        return Err(StmtError {
            line,
            column,
            kind: DiagnosticKind::InvalidSolid,
            message: format!("{} expects one or two nonempty vertex groups", kind.name()),
            form: c.form,
        });
    }
    kind.validate_groups(&groups).map_err(|message| StmtError {
        line,
        column,
        kind: DiagnosticKind::InvalidSolid,
        message,
        form: c.form,
    })?;
    Ok(Solid { kind, groups })
}

fn measure_stmt(c: &mut Cursor<'_>) -> StmtResult<SemanticClause> {
    let cmd = match c.peek() {
        Some(TokenKind::Cmd(cmd)) if cmd == "angle" || cmd == "widehat" => cmd.clone(),
        _ => return Err(c.expected("`\\angle` or `\\widehat`")),
    };
    c.bump();
    let (line, column) = c.here();
    let points = c.labels()?;
    let value = expr_rhs(c)?;
    let arity = if cmd == "angle" { 3 } else { 2 };
    if points.len() != arity {
        return Err(StmtError {
            line,
            column,
            kind: DiagnosticKind::Syntax,
            message: format!("\\{cmd} takes {arity} points, found {}", points.len()),
            form: c.form,
        });
    }
    if let Some(p) = duplicate(&points) {
        return Err(c.error(DiagnosticKind::DuplicatePoint, format!("\\{cmd} repeats point {p}")));
    }
    let value = match value {
        SegmentRhs::Value(v) => v,
        SegmentRhs::Segment(s) => Expr::parse(&s.to_string()),
    };
    Ok(if arity == 3 {
        SemanticClause::AngleMeasure {
            points: [points[0].clone(), points[1].clone(), points[2].clone()],
            value,
        }
    } else {
        SemanticClause::ArcMeasure {
            points: [points[0].clone(), points[1].clone()],
            value,
        }
    })
}

/// `=` followed by an expression; a bare two-point run becomes a segment.
fn expr_rhs(c: &mut Cursor<'_>) -> StmtResult<SegmentRhs> {
    if c.peek() != Some(&TokenKind::Eq) {
        return Err(c.expected("`=`"));
    }
    c.bump();
    let raw = match c.peek() {
        Some(TokenKind::Expr(raw)) if !raw.is_empty() => raw.clone(),
        _ => return Err(c.expected("a value after `=`")),
    };
    c.bump();
    c.expect_end()?;
    if let Ok(ls) = split_point_run(&raw) {
        if ls.len() == 2 && ls[0] != ls[1] {
            return Ok(SegmentRhs::Segment(Segment(ls[0].clone(), ls[1].clone())));
        }
    }
    Ok(SegmentRhs::Value(Expr::parse(&raw)))
}

fn segment_stmt(c: &mut Cursor<'_>) -> StmtResult<SemanticClause> {
    let first = c.segment()?;
    match c.peek() {
        Some(TokenKind::Eq) => {
            let rhs = expr_rhs(c)?;
            Ok(SemanticClause::SegmentEq { lhs: first, rhs })
        }
        Some(TokenKind::Cmd(cmd)) if cmd == "perp" => {
            c.bump();
            c.eat_kw(Keyword::To);
            let second = c.segment()?;
            let foot = if c.eat_kw(Keyword::On) {
                Some(c.single_label("the foot point")?)
            } else {
                None
            };
            c.expect_end()?;
            Ok(SemanticClause::Perp { first, second, foot })
        }
        Some(TokenKind::Cmd(cmd)) if cmd == "parallel" => {
            c.bump();
            let second = c.segment()?;
            c.expect_end()?;
            Ok(SemanticClause::Parallel { first, second })
        }
        _ => Err(c.expected("`=`, `\\perp` or `\\parallel`")),
    }
}
