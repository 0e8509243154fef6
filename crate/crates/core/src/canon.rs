//! Canonical keys: each primitive is reduced to one representative of its
//! symmetry class, rendered as the statement text that produces it.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::ast::{
    run, Circle, Document, Domain, Line, Plane, Segment, SegmentRhs, SemanticClause, Solid,
    SolidKind,
};
use crate::label::PointLabel;
use crate::lexer::Section;

/// Flags that change which symmetry classes are identified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CanonMode {
    /// Planes and pyramid bases compare as cycles (rotation and reflection)
    /// instead of unordered point sets.
    pub strict_cyclic: bool,
    /// Arc endpoints keep their written order.
    pub ordered_arcs: bool,
}

/// Primitive categories scored by the metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Points,
    Lines,
    Circles,
    Planes,
    Solids,
    Semantics,
}

impl Category {
    pub const ALL: [Category; 6] = [
        Category::Points,
        Category::Lines,
        Category::Circles,
        Category::Planes,
        Category::Solids,
        Category::Semantics,
    ];

    pub fn name(self) -> &'static str {
        self.section().tag()
    }

    pub fn section(self) -> Section {
        match self {
            Category::Points => Section::Points,
            Category::Lines => Section::Lines,
            Category::Circles => Section::Circles,
            Category::Planes => Section::Planes,
            Category::Solids => Section::Solids,
            Category::Semantics => Section::Semantics,
        }
    }

    pub fn from_name(name: &str) -> Option<Category> {
        Category::ALL.into_iter().find(|c| c.name() == name)
    }

    /// Categories scored for a domain. Solid diagrams are scored on their
    /// structure; plane diagrams on their semantic clauses.
    pub fn active(domain: Domain) -> &'static [Category] {
        match domain {
            Domain::Plane => &[
                Category::Points,
                Category::Lines,
                Category::Circles,
                Category::Semantics,
            ],
            Domain::Solid => &[
                Category::Points,
                Category::Lines,
                Category::Circles,
                Category::Planes,
                Category::Solids,
            ],
        }
    }
}

/// A value for each category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PerCategory<T> {
    pub points: T,
    pub lines: T,
    pub circles: T,
    pub planes: T,
    pub solids: T,
    pub semantics: T,
}

impl<T> PerCategory<T> {
    pub fn from_fn(mut f: impl FnMut(Category) -> T) -> Self {
        PerCategory {
            points: f(Category::Points),
            lines: f(Category::Lines),
            circles: f(Category::Circles),
            planes: f(Category::Planes),
            solids: f(Category::Solids),
            semantics: f(Category::Semantics),
        }
    }

    pub fn get(&self, c: Category) -> &T {
        match c {
            Category::Points => &self.points,
            Category::Lines => &self.lines,
            Category::Circles => &self.circles,
            Category::Planes => &self.planes,
            Category::Solids => &self.solids,
            Category::Semantics => &self.semantics,
        }
    }

    pub fn get_mut(&mut self, c: Category) -> &mut T {
        match c {
            Category::Points => &mut self.points,
            Category::Lines => &mut self.lines,
            Category::Circles => &mut self.circles,
            Category::Planes => &mut self.planes,
            Category::Solids => &mut self.solids,
            Category::Semantics => &mut self.semantics,
        }
    }
}

impl<T> std::ops::Index<Category> for PerCategory<T> {
    type Output = T;

    fn index(&self, c: Category) -> &T {
        self.get(c)
    }
}

impl<T> std::ops::IndexMut<Category> for PerCategory<T> {
    fn index_mut(&mut self, c: Category) -> &mut T {
        self.get_mut(c)
    }
}

/// Per-category sets of canonical keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalDocument {
    pub domain: Domain,
    pub mode: CanonMode,
    pub keys: PerCategory<BTreeSet<String>>,
    /// Sorted kinds of the distinct solids.
    pub solid_kinds: Vec<SolidKind>,
}

impl CanonicalDocument {
    pub fn empty(domain: Domain, mode: CanonMode) -> Self {
        CanonicalDocument {
            domain,
            mode,
            keys: PerCategory::default(),
            solid_kinds: Vec::new(),
        }
    }

    pub fn get(&self, c: Category) -> &BTreeSet<String> {
        &self.keys[c]
    }

    pub fn len(&self) -> usize {
        Category::ALL.iter().map(|&c| self.keys[c].len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Tagged rendering of the keys; parses back to the same document.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for &section in self.domain.sections() {
            let category = Category::ALL.into_iter().find(|c| c.section() == section).unwrap();
            out.push_str(&format!("<{}>\n", section.tag()));
            let keys = &self.keys[category];
            if category == Category::Points {
                if !keys.is_empty() {
                    out.push_str(&format!("[{}]\n", keys.iter().cloned().collect::<Vec<_>>().join(", ")));
                }
            } else {
                for k in keys {
                    out.push_str(k);
                    out.push('\n');
                }
            }
            out.push_str(&format!("</{}>\n", section.tag()));
        }
        out
    }
}

/// Canonicalize with the given mode.
pub fn canonicalize(doc: &Document, mode: CanonMode) -> CanonicalDocument {
    let mut out = CanonicalDocument::empty(doc.domain, mode);
    out.keys.points = doc.points.iter().map(ToString::to_string).collect();
    out.keys.lines = doc.lines.iter().map(line_key).collect();
    out.keys.circles = doc.circles.iter().map(circle_key).collect();
    out.keys.planes = doc.planes.iter().map(|p| plane_key(p, mode)).collect();
    let mut solids: Vec<(SolidKind, String)> = doc.solids.iter().map(|s| (s.kind, solid_key(s, mode))).collect();
    solids.sort();
    solids.dedup();
    out.solid_kinds = solids.iter().map(|(k, _)| *k).collect();
    out.keys.solids = solids.into_iter().map(|(_, k)| k).collect();
    out.keys.semantics = doc.semantics.iter().map(|c| semantic_key(c, mode)).collect();
    out
}

fn spaced(labels: &[PointLabel]) -> String {
    labels.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Smaller of the sequence and its reversal.
pub fn reversal_min(points: &[PointLabel]) -> Vec<PointLabel> {
    let rev: Vec<PointLabel> = points.iter().rev().cloned().collect();
    if rev.as_slice() < points {
        rev
    } else {
        points.to_vec()
    }
}

/// Index maps of the dihedral group acting on an n-cycle: rotations then
/// reflections. `perm[i]` is the source index placed at position `i`.
pub fn dihedral_perms(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(2 * n);
    for r in 0..n {
        out.push((0..n).map(|i| (i + r) % n).collect());
    }
    for r in 0..n {
        out.push((0..n).map(|i| (r + n - i) % n).collect());
    }
    out
}

fn apply(perm: &[usize], seq: &[PointLabel]) -> Vec<PointLabel> {
    perm.iter().map(|&i| seq[i].clone()).collect()
}

/// Lexicographically least image of a cycle under rotation and reflection.
pub fn dihedral_min(seq: &[PointLabel]) -> Vec<PointLabel> {
    dihedral_perms(seq.len())
        .iter()
        .map(|p| apply(p, seq))
        .min()
        .unwrap_or_default()
}

fn sorted(seq: &[PointLabel]) -> Vec<PointLabel> {
    let mut v = seq.to_vec();
    v.sort();
    v
}

pub fn line_key(line: &Line) -> String {
    format!("line {}", spaced(&reversal_min(&line.points)))
}

pub fn circle_key(circle: &Circle) -> String {
    if circle.on_points.is_empty() {
        return format!("\\odot {}", circle.center);
    }
    let on: Vec<PointLabel> = circle.on_points.iter().cloned().collect();
    format!("\\odot {} lieson {}", circle.center, spaced(&on))
}

fn face(seq: &[PointLabel], mode: CanonMode) -> Vec<PointLabel> {
    if mode.strict_cyclic {
        dihedral_min(seq)
    } else {
        sorted(seq)
    }
}

pub fn plane_key(plane: &Plane, mode: CanonMode) -> String {
    format!("plane {}", spaced(&face(&plane.points, mode)))
}

pub fn solid_key(solid: &Solid, mode: CanonMode) -> String {
    let g = &solid.groups;
    let groups: Vec<Vec<PointLabel>> = match solid.kind {
        SolidKind::Cube | SolidKind::Prism | SolidKind::Frustum if g.len() == 2 && g[0].len() == g[1].len() => {
            // rotate/reflect both faces together so vertex i stays paired with i
            dihedral_perms(g[0].len())
                .iter()
                .map(|p| vec![apply(p, &g[0]), apply(p, &g[1])])
                .min()
                .unwrap()
        }
        SolidKind::Pyramid if g.len() == 2 => vec![g[0].clone(), face(&g[1], mode)],
        SolidKind::Cylinder | SolidKind::FrustumCone => {
            let mut pairs: Vec<Vec<PointLabel>> = g.iter().map(|p| sorted(p)).collect();
            pairs.sort();
            pairs
        }
        SolidKind::Spheroid if g.len() == 2 => vec![g[0].clone(), sorted(&g[1])],
        _ => g.clone(),
    };
    let body = groups.iter().map(|grp| run(grp)).collect::<Vec<_>>().join("-");
    format!("solid {} {}", solid.kind.name(), body)
}

pub fn semantic_key(clause: &SemanticClause, mode: CanonMode) -> String {
    match clause {
        SemanticClause::SegmentEq { lhs, rhs } => match rhs {
            SegmentRhs::Segment(other) => {
                let mut sides = [lhs.normalized(), other.normalized()];
                sides.sort();
                format!("{} = {}", sides[0], sides[1])
            }
            SegmentRhs::Value(v) => format!("{} = {}", lhs.normalized(), v.canonical()),
        },
        SemanticClause::AngleMeasure { points, value } => {
            let (a, c) = if points[2] < points[0] {
                (&points[2], &points[0])
            } else {
                (&points[0], &points[2])
            };
            format!("m \\angle {}{}{} = {}", a, points[1], c, value.canonical())
        }
        SemanticClause::ArcMeasure { points, value } => {
            let seg = Segment(points[0].clone(), points[1].clone());
            let seg = if mode.ordered_arcs { seg } else { seg.normalized() };
            format!("m \\widehat {} = {}", seg, value.canonical())
        }
        SemanticClause::Perp { first, second, foot } => {
            let mut segs = [first.normalized(), second.normalized()];
            segs.sort();
            match foot {
                Some(f) => format!("{} \\perp {} on {}", segs[0], segs[1], f),
                None => format!("{} \\perp {}", segs[0], segs[1]),
            }
        }
        SemanticClause::Parallel { first, second } => {
            let mut segs = [first.normalized(), second.normalized()];
            segs.sort();
            format!("{} \\parallel {}", segs[0], segs[1])
        }
    }
}
