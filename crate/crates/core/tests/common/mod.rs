//! Test-side oracles: random primitives, a brute-force orbit enumerator
//! built from symmetry generators, and set matching by orbit comparison.
#![allow(dead_code)]

pub mod suites;

use std::collections::{BTreeSet, VecDeque};

use geoformal::canon::{canonicalize, CanonMode, Category};
use geoformal::label::{join_run, PointLabel};
use geoformal::parser::parse_document;
use geoformal::Domain;
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Line,
    Circle,
    Plane,
    Cube,
    Prism,
    Frustum,
    Pyramid,
    Cylinder,
    Cone,
    FrustumCone,
    Spheroid,
    Angle,
    Arc,
    SegEq,
    SegVal,
    Perp,
    Parallel,
}

impl Kind {
    pub const ALL: [Kind; 17] = [
        Kind::Line,
        Kind::Circle,
        Kind::Plane,
        Kind::Cube,
        Kind::Prism,
        Kind::Frustum,
        Kind::Pyramid,
        Kind::Cylinder,
        Kind::Cone,
        Kind::FrustumCone,
        Kind::Spheroid,
        Kind::Angle,
        Kind::Arc,
        Kind::SegEq,
        Kind::SegVal,
        Kind::Perp,
        Kind::Parallel,
    ];

    pub fn category(self) -> Category {
        match self {
            Kind::Line => Category::Lines,
            Kind::Circle => Category::Circles,
            Kind::Plane => Category::Planes,
            Kind::Cube
            | Kind::Prism
            | Kind::Frustum
            | Kind::Pyramid
            | Kind::Cylinder
            | Kind::Cone
            | Kind::FrustumCone
            | Kind::Spheroid => Category::Solids,
            _ => Category::Semantics,
        }
    }

    fn solid_name(self) -> &'static str {
        match self {
            Kind::Cube => "Cube",
            Kind::Prism => "Prism",
            Kind::Frustum => "Frustum",
            Kind::Pyramid => "Pyramid",
            Kind::Cylinder => "Cylinder",
            Kind::Cone => "Cone",
            Kind::FrustumCone => "FrustumCone",
            Kind::Spheroid => "Spheroid",
            _ => unreachable!(),
        }
    }
}

pub type Groups = Vec<Vec<PointLabel>>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Shape {
    pub kind: Kind,
    pub groups: Groups,
    pub value: Option<String>,
}

impl Shape {
    pub fn text(&self) -> String {
        let g = &self.groups;
        let spaced = |v: &[PointLabel]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
        let run = |v: &[PointLabel]| join_run(v);
        match self.kind {
            Kind::Line => format!("line {}", spaced(&g[0])),
            Kind::Circle => format!("\\odot {} lieson {}", g[0][0], spaced(&g[1])),
            Kind::Plane => format!("plane {}", spaced(&g[0])),
            Kind::Angle => format!("m \\angle {} = {}", run(&g[0]), self.value.as_deref().unwrap()),
            Kind::Arc => format!("m \\widehat {} = {}", run(&g[0]), self.value.as_deref().unwrap()),
            Kind::SegEq => format!("{} = {}", run(&g[0]), run(&g[1])),
            Kind::SegVal => format!("{} = {}", run(&g[0]), self.value.as_deref().unwrap()),
            Kind::Perp => format!("{} \\perp {} on {}", run(&g[0]), run(&g[1]), g[2][0]),
            Kind::Parallel => format!("{} \\parallel {}", run(&g[0]), run(&g[1])),
            k => format!(
                "solid {} {}",
                k.solid_name(),
                g.iter().map(|v| run(v)).collect::<Vec<_>>().join("-")
            ),
        }
    }

    pub fn labels(&self) -> Vec<PointLabel> {
        self.groups.iter().flatten().cloned().collect()
    }

    /// Same layout with the flattened labels replaced in order.
    pub fn with_labels(&self, labels: &[PointLabel]) -> Shape {
        let mut it = labels.iter().cloned();
        let groups = self
            .groups
            .iter()
            .map(|g| g.iter().map(|_| it.next().unwrap()).collect())
            .collect();
        Shape {
            kind: self.kind,
            groups,
            value: self.value.clone(),
        }
    }
}

/// A pool of `n` distinct labels mixing primes and subscripts.
pub fn label_pool(n: usize) -> Vec<PointLabel> {
    let mut out = Vec::new();
    'outer: for variant in 0..4 {
        for c in 'A'..='Z' {
            if out.len() == n {
                break 'outer;
            }
            let text = match variant {
                0 => c.to_string(),
                1 => format!("{c}'"),
                2 => format!("{c}_{{1}}"),
                _ => format!("{c}''_{{12}}"),
            };
            out.push(text.parse().unwrap());
        }
    }
    assert_eq!(out.len(), n);
    out
}

fn pick(rng: &mut impl Rng, pool: &[PointLabel], n: usize) -> Vec<PointLabel> {
    let mut v = pool.to_vec();
    v.shuffle(rng);
    v.truncate(n);
    v
}

/// A random well-formed primitive of `kind` over distinct labels from
/// `pool`. `max_set` bounds set-like groups (circles, planes, bases).
pub fn random_shape(rng: &mut impl Rng, kind: Kind, pool: &[PointLabel], max_set: usize) -> Shape {
    let values = ["30", "45", "2x + 5", "90", "3.5", "\\sqrt{3}", "12"];
    let mut value = None;
    let groups: Groups = match kind {
        Kind::Line => {
            let n = rng.gen_range(2..=5);
            vec![pick(rng, pool, n)]
        }
        Kind::Circle => {
            let n = rng.gen_range(1..=max_set);
            let v = pick(rng, pool, n + 1);
            vec![v[..1].to_vec(), v[1..].to_vec()]
        }
        Kind::Plane => {
            let n = rng.gen_range(3..=max_set.max(3));
            vec![pick(rng, pool, n)]
        }
        Kind::Cube | Kind::Prism | Kind::Frustum => {
            let n = if kind == Kind::Cube { 4 } else { rng.gen_range(3..=max_set.max(3)) };
            let v = pick(rng, pool, 2 * n);
            vec![v[..n].to_vec(), v[n..].to_vec()]
        }
        Kind::Pyramid => {
            let n = rng.gen_range(3..=max_set.max(3));
            let v = pick(rng, pool, n + 1);
            vec![v[..1].to_vec(), v[1..].to_vec()]
        }
        Kind::Cylinder | Kind::FrustumCone => {
            let (a, b) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let v = pick(rng, pool, a + b);
            vec![v[..a].to_vec(), v[a..].to_vec()]
        }
        Kind::Cone => {
            let v = pick(rng, pool, 3);
            vec![v[..1].to_vec(), v[1..].to_vec()]
        }
        Kind::Spheroid => {
            let n = rng.gen_range(0..=max_set);
            let v = pick(rng, pool, n + 1);
            if n == 0 {
                vec![v]
            } else {
                vec![v[..1].to_vec(), v[1..].to_vec()]
            }
        }
        Kind::Angle => {
            value = Some(values.choose(rng).unwrap().to_string());
            vec![pick(rng, pool, 3)]
        }
        Kind::Arc => {
            value = Some(values.choose(rng).unwrap().to_string());
            vec![pick(rng, pool, 2)]
        }
        Kind::SegVal => {
            value = Some(values.choose(rng).unwrap().to_string());
            vec![pick(rng, pool, 2)]
        }
        Kind::SegEq | Kind::Parallel => {
            let v = pick(rng, pool, 4);
            vec![v[..2].to_vec(), v[2..].to_vec()]
        }
        Kind::Perp => {
            let v = pick(rng, pool, 5);
            vec![v[..2].to_vec(), v[2..4].to_vec(), v[4..].to_vec()]
        }
    };
    Shape { kind, groups, value }
}

type Gen = Box<dyn Fn(&Groups) -> Groups>;

fn reverse(i: usize) -> Gen {
    Box::new(move |g| {
        let mut g = g.clone();
        g[i].reverse();
        g
    })
}

fn rotate(i: usize) -> Gen {
    Box::new(move |g| {
        let mut g = g.clone();
        if !g[i].is_empty() {
            g[i].rotate_left(1);
        }
        g
    })
}

fn swap_first(i: usize) -> Gen {
    Box::new(move |g| {
        let mut g = g.clone();
        if g[i].len() >= 2 {
            g[i].swap(0, 1);
        }
        g
    })
}

fn swap_groups(i: usize, j: usize) -> Gen {
    Box::new(move |g| {
        let mut g = g.clone();
        g.swap(i, j);
        g
    })
}

fn joint(f: fn(&mut Vec<PointLabel>)) -> Gen {
    Box::new(move |g| {
        let mut g = g.clone();
        f(&mut g[0]);
        f(&mut g[1]);
        g
    })
}

/// Generators of the symmetry group of each primitive kind.
pub fn generators(kind: Kind, mode: CanonMode) -> Vec<Gen> {
    // rotations plus a transposition generate every permutation
    let any_order = |i| vec![rotate(i), swap_first(i)];
    let cyclic = |i| vec![rotate(i), reverse(i)];
    match kind {
        Kind::Line | Kind::Angle | Kind::SegVal => vec![reverse(0)],
        Kind::Circle => any_order(1),
        Kind::Plane if mode.strict_cyclic => cyclic(0),
        Kind::Plane => any_order(0),
        Kind::Cube | Kind::Prism | Kind::Frustum => vec![joint(|v| v.rotate_left(1)), joint(|v| v.reverse())],
        Kind::Pyramid if mode.strict_cyclic => cyclic(1),
        Kind::Pyramid => any_order(1),
        Kind::Cylinder | Kind::FrustumCone => vec![reverse(0), reverse(1), swap_groups(0, 1)],
        Kind::Cone => vec![],
        Kind::Spheroid => any_order(1),
        Kind::Arc if mode.ordered_arcs => vec![],
        Kind::Arc => vec![reverse(0)],
        Kind::SegEq | Kind::Parallel | Kind::Perp => vec![reverse(0), reverse(1), swap_groups(0, 1)],
    }
}

/// Every shape reachable from `shape` under the kind's symmetry group.
pub fn orbit(shape: &Shape, mode: CanonMode) -> BTreeSet<Shape> {
    let gens = if shape.kind == Kind::Spheroid && shape.groups.len() == 1 {
        vec![]
    } else {
        generators(shape.kind, mode)
    };
    let mut seen: BTreeSet<Groups> = BTreeSet::new();
    let mut queue = VecDeque::from([shape.groups.clone()]);
    seen.insert(shape.groups.clone());
    while let Some(g) = queue.pop_front() {
        for f in &gens {
            let next = f(&g);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.into_iter()
        .map(|groups| Shape {
            kind: shape.kind,
            groups,
            value: shape.value.clone(),
        })
        .collect()
}

/// Brute-force equivalence: same kind, same value, and one is in the
/// other's orbit.
pub fn equivalent(a: &Shape, b: &Shape, mode: CanonMode) -> bool {
    a.kind == b.kind && value_eq(a, b) && orbit(a, mode).iter().any(|s| s.groups == b.groups)
}

fn value_eq(a: &Shape, b: &Shape) -> bool {
    let strip = |s: &Option<String>| s.as_ref().map(|v| v.split_whitespace().collect::<String>());
    strip(&a.value) == strip(&b.value)
}

/// Canonical key the library assigns to a single statement.
pub fn library_key(text: &str, category: Category, mode: CanonMode) -> String {
    let parsed = parse_document(text, Domain::Solid);
    assert!(parsed.diagnostics.is_empty(), "{text}: {:?}", parsed.diagnostics);
    let canon = canonicalize(&parsed.document, mode);
    let keys = canon.get(category);
    assert_eq!(keys.len(), 1, "{text} -> {keys:?}");
    keys.iter().next().unwrap().clone()
}

/// Number of distinct equivalence classes in `shapes`.
pub fn distinct(shapes: &[Shape], mode: CanonMode) -> Vec<Shape> {
    let mut reps: Vec<Shape> = Vec::new();
    for s in shapes {
        if !reps.iter().any(|r| equivalent(r, s, mode)) {
            reps.push(s.clone());
        }
    }
    reps
}

/// `(tp, pred, ref)` by pairwise orbit comparison.
pub fn brute_counts(pred: &[Shape], reference: &[Shape], mode: CanonMode) -> (usize, usize, usize) {
    let p = distinct(pred, mode);
    let r = distinct(reference, mode);
    let tp = p.iter().filter(|a| r.iter().any(|b| equivalent(a, b, mode))).count();
    (tp, p.len(), r.len())
}

/// A randomly generated, valid document: declared points cover every
/// label used and no two primitives are equivalent.
#[derive(Debug, Clone)]
pub struct RandomDoc {
    pub domain: Domain,
    pub points: Vec<PointLabel>,
    pub shapes: Vec<Shape>,
}

impl RandomDoc {
    /// Tagged text with each statement under its section.
    pub fn text(&self) -> String {
        let mut out = String::new();
        for &section in self.domain.sections() {
            let tag = section.tag();
            out.push_str(&format!("<{tag}>\n"));
            if tag == "points" && !self.points.is_empty() {
                let list: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
                out.push_str(&format!("[{}]\n", list.join(", ")));
            }
            for s in &self.shapes {
                if s.kind.category().section() == section {
                    out.push_str(&s.text());
                    out.push('\n');
                }
            }
            out.push_str(&format!("</{tag}>\n"));
        }
        out
    }

    pub fn relabeled(&self, map: &dyn Fn(&PointLabel) -> PointLabel) -> RandomDoc {
        RandomDoc {
            domain: self.domain,
            points: self.points.iter().map(map).collect(),
            shapes: self
                .shapes
                .iter()
                .map(|s| s.with_labels(&s.labels().iter().map(map).collect::<Vec<_>>()))
                .collect(),
        }
    }
}

pub fn kinds_for(domain: Domain) -> &'static [Kind] {
    match domain {
        Domain::Plane => &[
            Kind::Line,
            Kind::Circle,
            Kind::Angle,
            Kind::Arc,
            Kind::SegEq,
            Kind::SegVal,
            Kind::Parallel,
        ],
        Domain::Solid => &[
            Kind::Line,
            Kind::Circle,
            Kind::Plane,
            Kind::Cube,
            Kind::Prism,
            Kind::Frustum,
            Kind::Pyramid,
            Kind::Cylinder,
            Kind::Cone,
            Kind::FrustumCone,
            Kind::Spheroid,
        ],
    }
}

pub fn random_doc(rng: &mut impl Rng, domain: Domain, max_shapes: usize, pool: &[PointLabel]) -> RandomDoc {
    let n = rng.gen_range(0..=max_shapes);
    let kinds = kinds_for(domain);
    let mut shapes = Vec::new();
    for _ in 0..n {
        let kind = *kinds.choose(rng).unwrap();
        shapes.push(random_shape(rng, kind, pool, 4));
    }
    let shapes = distinct(&shapes, CanonMode::default());
    let mut points: Vec<PointLabel> = shapes.iter().flat_map(Shape::labels).collect();
    points.sort();
    points.dedup();
    RandomDoc { domain, points, shapes }
}
