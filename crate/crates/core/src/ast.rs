use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::expr::Expr;
use crate::label::{join_run, PointLabel};
use crate::lexer::Section;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Plane,
    Solid,
}

impl Domain {
    /// Sections a tagged document of this domain must carry.
    pub fn sections(self) -> &'static [Section] {
        match self {
            Domain::Plane => &[
                Section::Points,
                Section::Lines,
                Section::Circles,
                Section::Semantics,
            ],
            Domain::Solid => &[
                Section::Points,
                Section::Lines,
                Section::Circles,
                Section::Planes,
                Section::Solids,
                Section::Semantics,
            ],
        }
    }

    /// Guess the domain from raw text: any planes/solids section makes it solid.
    pub fn detect(text: &str) -> Domain {
        let lexed = crate::lexer::lex(text);
        let solid = lexed.tokens.iter().any(|t| match &t.kind {
            crate::lexer::TokenKind::TagOpen(n) | crate::lexer::TokenKind::TagClose(n) => {
                n == "planes" || n == "solids"
            }
            crate::lexer::TokenKind::Header(s) => matches!(s, Section::Planes | Section::Solids),
            crate::lexer::TokenKind::Kw(crate::lexer::Keyword::Solid)
            | crate::lexer::TokenKind::Kw(crate::lexer::Keyword::Plane) => true,
            _ => false,
        });
        if solid {
            Domain::Solid
        } else {
            Domain::Plane
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::Plane => "plane",
            Domain::Solid => "solid",
        })
    }
}

impl FromStr for Domain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plane" => Ok(Domain::Plane),
            "solid" => Ok(Domain::Solid),
            other => Err(format!("unknown domain `{other}` (expected plane or solid)")),
        }
    }
}

/// Surface syntax of a document: `<points>` tags or `**Points:**` headers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    #[default]
    Tagged,
    Headed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Line {
    pub points: Vec<PointLabel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl Line {
    pub fn new(points: Vec<PointLabel>) -> Self {
        Line { points, name: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Circle {
    pub center: PointLabel,
    pub on_points: BTreeSet<PointLabel>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Plane {
    pub points: Vec<PointLabel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SolidKind {
    Cube,
    Prism,
    Pyramid,
    Frustum,
    Cylinder,
    Cone,
    FrustumCone,
    Spheroid,
}

impl SolidKind {
    pub const ALL: [SolidKind; 8] = [
        SolidKind::Cube,
        SolidKind::Prism,
        SolidKind::Pyramid,
        SolidKind::Frustum,
        SolidKind::Cylinder,
        SolidKind::Cone,
        SolidKind::FrustumCone,
        SolidKind::Spheroid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolidKind::Cube => "Cube",
            SolidKind::Prism => "Prism",
            SolidKind::Pyramid => "Pyramid",
            SolidKind::Frustum => "Frustum",
            SolidKind::Cylinder => "Cylinder",
            SolidKind::Cone => "Cone",
            SolidKind::FrustumCone => "FrustumCone",
            SolidKind::Spheroid => "Spheroid",
        }
    }

    /// Accepts the `Spheriod` spelling as well.
    pub fn from_name(name: &str) -> Option<SolidKind> {
        if name == "Spheriod" {
            return Some(SolidKind::Spheroid);
        }
        SolidKind::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Checks the group shape for this kind.
    pub fn validate_groups(self, groups: &[Vec<PointLabel>]) -> Result<(), String> {
        let lens: Vec<usize> = groups.iter().map(Vec::len).collect();
        let ok = match self {
            SolidKind::Cube | SolidKind::Prism | SolidKind::Frustum => {
                lens.len() == 2 && lens[0] == lens[1] && lens[0] >= 3
            }
            SolidKind::Pyramid => lens.len() == 2 && lens[0] == 1 && lens[1] >= 3,
            SolidKind::Cone => lens == [1, 2],
            SolidKind::Cylinder | SolidKind::FrustumCone => {
                lens.len() == 2 && lens.iter().all(|&n| n == 1 || n == 2)
            }
            SolidKind::Spheroid => {
                (lens.len() == 1 && lens[0] == 1) || (lens.len() == 2 && lens[0] == 1 && lens[1] >= 1)
            }
        };
        if !ok {
            return Err(format!("{} does not accept vertex groups of sizes {:?}", self.name(), lens));
        }
        let mut seen = BTreeSet::new();
        for p in groups.iter().flatten() {
            if !seen.insert(p) {
                return Err(format!("{} repeats point {}", self.name(), p));
            }
        }
        Ok(())
    }
}

impl fmt::Display for SolidKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Solid {
    pub kind: SolidKind,
    pub groups: Vec<Vec<PointLabel>>,
}

impl Solid {
    pub fn points(&self) -> impl Iterator<Item = &PointLabel> {
        self.groups.iter().flatten()
    }
}

/// Ordered endpoint pair, written `AB`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Segment(pub PointLabel, pub PointLabel);

impl Segment {
    /// Endpoints in label order.
    pub fn normalized(&self) -> Segment {
        if self.1 < self.0 {
            Segment(self.1.clone(), self.0.clone())
        } else {
            self.clone()
        }
    }

    pub fn contains(&self, p: &PointLabel) -> bool {
        &self.0 == p || &self.1 == p
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum SegmentRhs {
    Segment(Segment),
    Value(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SemanticClause {
    SegmentEq {
        lhs: Segment,
        rhs: SegmentRhs,
    },
    AngleMeasure {
        points: [PointLabel; 3],
        value: Expr,
    },
    ArcMeasure {
        points: [PointLabel; 2],
        value: Expr,
    },
    Perp {
        first: Segment,
        second: Segment,
        #[serde(skip_serializing_if = "Option::is_none")]
        foot: Option<PointLabel>,
    },
    Parallel {
        first: Segment,
        second: Segment,
    },
}

impl SemanticClause {
    pub fn points(&self) -> Vec<&PointLabel> {
        match self {
            SemanticClause::SegmentEq { lhs, rhs } => {
                let mut v = vec![&lhs.0, &lhs.1];
                if let SegmentRhs::Segment(s) = rhs {
                    v.extend([&s.0, &s.1]);
                }
                v
            }
            SemanticClause::AngleMeasure { points, .. } => points.iter().collect(),
            SemanticClause::ArcMeasure { points, .. } => points.iter().collect(),
            SemanticClause::Perp { first, second, foot } => {
                let mut v = vec![&first.0, &first.1, &second.0, &second.1];
                v.extend(foot.iter());
                v
            }
            SemanticClause::Parallel { first, second } => vec![&first.0, &first.1, &second.0, &second.1],
        }
    }
}

/// Source position of a statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

/// Statement positions, parallel to the document's lists. Empty for
/// documents built in code.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceMap {
    pub points: Vec<(PointLabel, Span)>,
    pub lines: Vec<Span>,
    pub circles: Vec<Span>,
    pub planes: Vec<Span>,
    pub solids: Vec<Span>,
    pub semantics: Vec<Span>,
}

/// A parsed formal description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Document {
    pub domain: Domain,
    pub dialect: Dialect,
    pub points: BTreeSet<PointLabel>,
    pub lines: Vec<Line>,
    pub circles: Vec<Circle>,
    pub planes: Vec<Plane>,
    pub solids: Vec<Solid>,
    pub semantics: Vec<SemanticClause>,
    #[serde(skip)]
    pub source: SourceMap,
}

impl Document {
    pub fn new(domain: Domain) -> Self {
        Document {
            domain,
            dialect: Dialect::Tagged,
            points: BTreeSet::new(),
            lines: Vec::new(),
            circles: Vec::new(),
            planes: Vec::new(),
            solids: Vec::new(),
            semantics: Vec::new(),
            source: SourceMap::default(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
            && self.lines.is_empty()
            && self.circles.is_empty()
            && self.planes.is_empty()
            && self.solids.is_empty()
            && self.semantics.is_empty()
    }

    /// Every label referenced by a primitive or clause, with the section
    /// that references it.
    pub fn referenced_points(&self) -> Vec<(Section, usize, &PointLabel)> {
        let mut out = Vec::new();
        for (i, l) in self.lines.iter().enumerate() {
            out.extend(l.points.iter().map(|p| (Section::Lines, i, p)));
        }
        for (i, c) in self.circles.iter().enumerate() {
            out.push((Section::Circles, i, &c.center));
            out.extend(c.on_points.iter().map(|p| (Section::Circles, i, p)));
        }
        for (i, pl) in self.planes.iter().enumerate() {
            out.extend(pl.points.iter().map(|p| (Section::Planes, i, p)));
        }
        for (i, s) in self.solids.iter().enumerate() {
            out.extend(s.points().map(|p| (Section::Solids, i, p)));
        }
        for (i, c) in self.semantics.iter().enumerate() {
            out.extend(c.points().into_iter().map(|p| (Section::Semantics, i, p)));
        }
        out
    }

    /// Position of the `index`-th statement of a section, if known.
    pub fn span_of(&self, section: Section, index: usize) -> Option<Span> {
        let spans = match section {
            Section::Points => return None,
            Section::Lines => &self.source.lines,
            Section::Circles => &self.source.circles,
            Section::Planes => &self.source.planes,
            Section::Solids => &self.source.solids,
            Section::Semantics => &self.source.semantics,
        };
        spans.get(index).copied()
    }
}

pub(crate) fn run(labels: &[PointLabel]) -> String {
    join_run(labels)
}
