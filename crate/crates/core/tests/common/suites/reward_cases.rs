use std::collections::BTreeMap;

use geoformal::reward::total_reward;
use geoformal::RewardConfig;
use geoformal::{Category, Domain};

pub const P_POINTS: &str = "[A, B, C, D, E, O]";
pub const P_LINES: &str = "line A B C\nline C D\nline D E";
pub const P_CIRCLES: &str = "\\odot O lieson A D";
pub const P_SEMS: &str = "AB = 5\nm \\angle ABD = 40\nCD \\perp DE on D\nAB \\parallel DE";

pub const S_POINTS: &str = "[A, B, C, D, P]";
pub const S_LINES: &str = "line P A\nline P B\nline P C\nline P D\nline A B";
pub const S_PLANES: &str = "plane P A B\nplane A B C D";
pub const S_SOLIDS: &str = "solid Pyramid P-ABCD";

pub fn section(tag: &str, body: &str) -> String {
    if body.is_empty() {
        format!("<{tag}>\n</{tag}>\n")
    } else {
        format!("<{tag}>\n{body}\n</{tag}>\n")
    }
}

pub fn plane(points: &str, lines: &str, circles: &str, sems: &str) -> String {
    [("points", points), ("lines", lines), ("circles", circles), ("semantics", sems)]
        .iter()
        .map(|(t, b)| section(t, b))
        .collect()
}

pub fn solid(points: &str, lines: &str, circles: &str, planes: &str, solids: &str, sems: &str) -> String {
    [
        ("points", points),
        ("lines", lines),
        ("circles", circles),
        ("planes", planes),
        ("solids", solids),
        ("semantics", sems),
    ]
    .iter()
    .map(|(t, b)| section(t, b))
    .collect()
}

pub fn plane_ref() -> String {
    plane(P_POINTS, P_LINES, P_CIRCLES, P_SEMS)
}

pub fn solid_ref() -> String {
    solid(S_POINTS, S_LINES, "", S_PLANES, S_SOLIDS, "")
}

pub struct Case {
    name: &'static str,
    domain: Domain,
    pred: String,
    r_fmt: f64,
    /// Precision per active category, in `Category::active` order.
    precision: Vec<f64>,
}

fn p(name: &'static str, pred: String, r_fmt: f64, precision: [f64; 4]) -> Case {
    Case {
        name,
        domain: Domain::Plane,
        pred,
        r_fmt,
        precision: precision.to_vec(),
    }
}

fn s(name: &'static str, pred: String, r_fmt: f64, precision: [f64; 5]) -> Case {
    Case {
        name,
        domain: Domain::Solid,
        pred,
        r_fmt,
        precision: precision.to_vec(),
    }
}

/// Hand-computed: each precision is tp / |distinct predicted| for that
/// category, 1 for empty-vs-empty and 0 for empty-vs-nonempty.
pub fn cases() -> Vec<Case> {
    vec![
        p("identical", plane_ref(), 1.0, [1.0, 1.0, 1.0, 1.0]),
        p("empty", plane("", "", "", ""), 1.0, [0.0, 0.0, 0.0, 0.0]),
        p("points only", plane(P_POINTS, "", "", ""), 1.0, [1.0, 0.0, 0.0, 0.0]),
        p("lines reversed", plane(P_POINTS, "line C B A\nline D C\nline E D", P_CIRCLES, P_SEMS), 1.0, [1.0; 4]),
        p("one wrong line", plane(P_POINTS, "line A B C\nline C D\nline D F", P_CIRCLES, P_SEMS), 1.0, [1.0, 2.0 / 3.0, 1.0, 1.0]),
        p("extra line", plane(P_POINTS, &format!("{P_LINES}\nline A E"), P_CIRCLES, P_SEMS), 1.0, [1.0, 0.75, 1.0, 1.0]),
        p("duplicate line", plane(P_POINTS, &format!("{P_LINES}\nline C B A"), P_CIRCLES, P_SEMS), 1.0, [1.0; 4]),
        p("split line", plane(P_POINTS, "line A B\nline B C\nline C D\nline D E", P_CIRCLES, P_SEMS), 1.0, [1.0, 0.5, 1.0, 1.0]),
        p("rim reordered", plane(P_POINTS, P_LINES, "\\odot O lieson D A", P_SEMS), 1.0, [1.0; 4]),
        p("wrong center", plane(P_POINTS, P_LINES, "\\odot A lieson O D", P_SEMS), 1.0, [1.0, 1.0, 0.0, 1.0]),
        p("extra circle", plane(P_POINTS, P_LINES, "\\odot O lieson A D\n\\odot O lieson B", P_SEMS), 1.0, [1.0, 1.0, 0.5, 1.0]),
        p("no circle", plane(P_POINTS, P_LINES, "", P_SEMS), 1.0, [1.0, 1.0, 0.0, 1.0]),
        p(
            "clauses rewritten",
            plane(P_POINTS, P_LINES, P_CIRCLES, "BA = 5\nm \\angle DBA = 40\nED \\perp DC on D\nED \\parallel BA"),
            1.0,
            [1.0; 4],
        ),
        p(
            "wrong length",
            plane(P_POINTS, P_LINES, P_CIRCLES, "AB = 6\nm \\angle ABD = 40\nCD \\perp DE on D\nAB \\parallel DE"),
            1.0,
            [1.0, 1.0, 1.0, 0.75],
        ),
        p("extra clause", plane(P_POINTS, P_LINES, P_CIRCLES, &format!("{P_SEMS}\nAB = DE")), 1.0, [1.0, 1.0, 1.0, 0.8]),
        p("one clause", plane(P_POINTS, P_LINES, P_CIRCLES, "AB = 5"), 1.0, [1.0; 4]),
        p(
            "wrong foot",
            plane(P_POINTS, P_LINES, P_CIRCLES, "AB = 5\nm \\angle ABD = 40\nCD \\perp DE on C\nAB \\parallel DE"),
            1.0,
            [1.0, 1.0, 1.0, 0.75],
        ),
        p(
            "numerically equal value",
            plane(P_POINTS, P_LINES, P_CIRCLES, "AB = 5.0\nm \\angle ABD = 40.00\nCD \\perp DE on D\nAB \\parallel DE"),
            1.0,
            [1.0; 4],
        ),
        p("missing point", plane("[A, B, C, D, E]", P_LINES, P_CIRCLES, P_SEMS), 1.0, [1.0; 4]),
        p("extra point", plane("[A, B, C, D, E, O, F]", P_LINES, P_CIRCLES, P_SEMS), 1.0, [6.0 / 7.0, 1.0, 1.0, 1.0]),
        p("wrong points", plane("[X, Y]", P_LINES, P_CIRCLES, P_SEMS), 1.0, [0.0, 1.0, 1.0, 1.0]),
        p(
            "headed dialect",
            format!("**Points:**\n{P_POINTS}\n**Lines:**\n{P_LINES}\n**Circles:**\n{P_CIRCLES}\n**Semantic Clauses:**\n{P_SEMS}\n"),
            0.0,
            [1.0; 4],
        ),
        p("unclosed last tag", plane_ref().replace("</semantics>", ""), 0.0, [1.0; 4]),
        p("statement outside tags", format!("line X Y\n{}", plane_ref()), 0.0, [1.0, 0.75, 1.0, 1.0]),
        p("degenerate line", plane(P_POINTS, &format!("{P_LINES}\nline A"), P_CIRCLES, P_SEMS), 0.0, [1.0; 4]),
        p("illegal character", plane(P_POINTS, "line A B C #\nline C D\nline D E", P_CIRCLES, P_SEMS), 0.0, [1.0; 4]),
        p("circle under lines", plane(P_POINTS, &format!("{P_LINES}\n{P_CIRCLES}"), "", P_SEMS), 0.0, [1.0; 4]),
        p("extra arc", plane(P_POINTS, P_LINES, P_CIRCLES, &format!("{P_SEMS}\nm \\widehat AD = 90")), 1.0, [1.0, 1.0, 1.0, 0.8]),
        p(
            "two wrong clauses",
            plane(
                P_POINTS,
                P_LINES,
                P_CIRCLES,
                "AB = 5\nm \\angle ABD = 40\nCD \\perp DE on D\nAB = CD\nAB \\parallel CD",
            ),
            1.0,
            [1.0, 1.0, 1.0, 0.6],
        ),
        p(
            "mixed",
            plane("[A, B, C]", "line A B C\nline A D", "\\odot O lieson A", "AB = 5\nAB \\parallel ED"),
            1.0,
            [1.0, 0.5, 0.0, 1.0],
        ),
        s("identical", solid_ref(), 1.0, [1.0; 5]),
        s("empty", solid("", "", "", "", "", ""), 1.0, [0.0, 0.0, 1.0, 0.0, 0.0]),
        s("base reordered", solid(S_POINTS, S_LINES, "", S_PLANES, "solid Pyramid P-ACBD", ""), 1.0, [1.0; 5]),
        s("planes reordered", solid(S_POINTS, S_LINES, "", "plane B A P\nplane D C B A", S_SOLIDS, ""), 1.0, [1.0; 5]),
        s("non-maximal plane", solid(S_POINTS, S_LINES, "", "plane P A B\nplane A B C", S_SOLIDS, ""), 1.0, [1.0, 1.0, 1.0, 0.5, 1.0]),
        s("wrong kind", solid(S_POINTS, S_LINES, "", S_PLANES, "solid Cone P-AB", ""), 1.0, [1.0, 1.0, 1.0, 1.0, 0.0]),
        s("spurious circle", solid(S_POINTS, S_LINES, "\\odot P lieson A", S_PLANES, S_SOLIDS, ""), 1.0, [1.0, 1.0, 0.0, 1.0, 1.0]),
        s("some lines", solid(S_POINTS, "line A P\nline B P\nline C D", "", S_PLANES, S_SOLIDS, ""), 1.0, [1.0, 2.0 / 3.0, 1.0, 1.0, 1.0]),
        s(
            "duplicate solid",
            solid(S_POINTS, S_LINES, "", S_PLANES, "solid Pyramid P-ABCD\nsolid Pyramid P-DCBA", ""),
            1.0,
            [1.0; 5],
        ),
        s(
            "headed dialect",
            format!("**Points:**\n{S_POINTS}\n**Lines:**\n{S_LINES}\n**Circles:**\nNone\n**Planes:**\n{S_PLANES}\n**Structure:**\n{S_SOLIDS}\n"),
            0.0,
            [1.0; 5],
        ),
        s("unscored clauses", solid(S_POINTS, S_LINES, "", S_PLANES, S_SOLIDS, "PA = 3"), 1.0, [1.0; 5]),
        s("missing semantics tag", solid_ref().replace("<semantics>\n</semantics>\n", ""), 0.0, [1.0; 5]),
        s("extra point", solid("[A, B, C, D, P, Q]", S_LINES, "", S_PLANES, S_SOLIDS, ""), 1.0, [5.0 / 6.0, 1.0, 1.0, 1.0, 1.0]),
        s("smaller pyramid", solid(S_POINTS, S_LINES, "", S_PLANES, "solid Pyramid P-ABC", ""), 1.0, [1.0, 1.0, 1.0, 1.0, 0.0]),
        s(
            "extra plane",
            solid(S_POINTS, S_LINES, "", &format!("{S_PLANES}\nplane P B C"), S_SOLIDS, ""),
            1.0,
            [1.0, 1.0, 1.0, 2.0 / 3.0, 1.0],
        ),
        s("wrong lines", solid(S_POINTS, "line A C\nline B D", "", S_PLANES, S_SOLIDS, ""), 1.0, [1.0, 0.0, 1.0, 1.0, 1.0]),
        s(
            "lines reversed",
            solid(S_POINTS, "line A P\nline B P\nline C P\nline D P\nline B A", "", S_PLANES, S_SOLIDS, ""),
            1.0,
            [1.0; 5],
        ),
        s("solid without keyword", solid(S_POINTS, S_LINES, "", S_PLANES, "Pyramid P-ABCD", ""), 1.0, [1.0; 5]),
        s(
            "mixed",
            solid(S_POINTS, "line P A\nline A C", "", "plane A B C D", "solid Cube ABCD-EFGH", ""),
            1.0,
            [1.0, 0.5, 1.0, 1.0, 0.0],
        ),
        s(
            "section twice",
            solid(S_POINTS, S_LINES, "", S_PLANES, S_SOLIDS, "") + "<planes>\n</planes>\n",
            0.0,
            [1.0; 5],
        ),
    ]
}

pub fn configs() -> Vec<(&'static str, RewardConfig)> {
    let omega = |pairs: &[(Category, f64)]| pairs.iter().copied().collect::<BTreeMap<_, _>>();
    vec![
        ("default", RewardConfig::default()),
        (
            "format only",
            RewardConfig {
                lambda1: 1.0,
                lambda2: 0.0,
                ..RewardConfig::default()
            },
        ),
        (
            "geometry only",
            RewardConfig {
                lambda1: 0.0,
                lambda2: 1.0,
                ..RewardConfig::default()
            },
        ),
        (
            "unnormalized weights",
            RewardConfig {
                lambda1: 3.0,
                lambda2: 1.0,
                omega: omega(&[
                    (Category::Points, 1.0),
                    (Category::Lines, 2.0),
                    (Category::Circles, 0.0),
                    (Category::Planes, 1.0),
                    (Category::Solids, 5.0),
                    (Category::Semantics, 3.0),
                ]),
                ..RewardConfig::default()
            },
        ),
        (
            "lines only",
            RewardConfig {
                lambda1: 0.5,
                lambda2: 0.5,
                omega: omega(&[(Category::Lines, 1.0)]),
                ..RewardConfig::default()
            },
        ),
    ]
}

/// `λ1·r_fmt + λ2·Σ ω_k·p_k` with λ and the active ω scaled to sum to 1.
pub fn expected_total(case: &Case, cfg: &RewardConfig) -> f64 {
    let l = cfg.lambda1 + cfg.lambda2;
    let active = Category::active(case.domain);
    let weights: Vec<f64> = active
        .iter()
        .map(|c| if cfg.omega.is_empty() { 1.0 } else { cfg.omega.get(c).copied().unwrap_or(0.0) })
        .collect();
    let wsum: f64 = weights.iter().sum();
    let r_geo: f64 = weights.iter().zip(&case.precision).map(|(w, p)| w / wsum * p).sum();
    cfg.lambda1 / l * case.r_fmt + cfg.lambda2 / l * r_geo
}

pub fn run() -> String {
    let cases = cases();
    assert_eq!(cases.len(), 50);
    for case in &cases {
        let reference = if case.domain == Domain::Plane { plane_ref() } else { solid_ref() };
        for (cname, cfg) in configs() {
            let b = total_reward(&case.pred, &reference, case.domain, &cfg).unwrap();
            assert_eq!(b.r_fmt, case.r_fmt, "{}: r_fmt", case.name);
            for (c, want) in Category::active(case.domain).iter().zip(&case.precision) {
                let got = b.per_category_precision[c];
                assert!((got - want).abs() <= 1e-15, "{} / {c:?}: {got} != {want}", case.name);
            }
            let want = expected_total(case, &cfg);
            assert!((b.total - want).abs() <= 1e-12, "{} under {cname}: {} != {want}", case.name, b.total);
            assert!((0.0..=1.0).contains(&b.total));
            let recombined = b.config_echo.lambda1 * b.r_fmt + b.config_echo.lambda2 * b.r_geo;
            assert!((b.total - recombined).abs() <= 1e-12);
        }
    }
    for (_, cfg) in configs() {
        for (domain, reference) in [(Domain::Plane, plane_ref()), (Domain::Solid, solid_ref())] {
            assert_eq!(total_reward(&reference, &reference, domain, &cfg).unwrap().total, 1.0);
        }
    }
    format!("{} pairs x {} configs within 1e-12", cases.len(), configs().len())
}
