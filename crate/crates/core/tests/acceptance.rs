//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! All fact checks are exact booleans. Sampled checks require zero disagreements over at least
//! the pinned number of cases.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;

use cspace::carrier::Carrier;
use cspace::classify::{classify_point, is_rigid_path, is_rigid_space};
use cspace::construct::{check_cmap, flexible_part, hat, is_finer, CMap, EdgeImage};
use cspace::corpus::{self, line_point, Hysteron};
use cspace::kind::EdgeKind;
use cspace::membership::Space;
use cspace::path::{CanonicalPath, Step, Token};
use cspace::rat::Rat;
use cspace::reach::{reach_relation, reachable, unavoidable_point, Mode};
use cspace::space::{GraphPresentation, Point, SpaceExpr};
use rand::Rng;

use common::props::{self, square_sample, CASES};
use common::*;

/// Allowed disagreements in any sampled comparison.
const TOLERANCE: usize = 0;
/// Minimum sample for the product predicates.
const PRODUCT_SAMPLES: usize = 200;
/// Minimum sample for "behaves like" comparisons between two structures.
const BEHAVIOUR_SAMPLES: usize = 300;

/// Criteria expected to fail, with the reason recorded alongside.
const KNOWN_FAILURES: &[(&str, &str)] = &[(
    "4",
    "the diagonal projects to controlled paths of both factors, so it is controlled in the product and in its hat",
)];

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn sp(e: SpaceExpr) -> Space {
    Space::new(e).unwrap()
}

fn controlled(s: &Space, p: &CanonicalPath) -> bool {
    s.is_controlled(p).unwrap()
}

/// Membership of `a` and `b` compared on sampled paths of their common carrier, plus the
/// deterministic finer-than check in both directions.
fn same_paths(a: &SpaceExpr, b: &SpaceExpr, seed: u64) -> Result<usize, String> {
    ensure!(is_finer(a, b).map_err(|e| e.to_string())?, "first structure is not finer than the second");
    ensure!(is_finer(b, a).map_err(|e| e.to_string())?, "second structure is not finer than the first");
    let (sa, sb) = (sp(a.clone()), sp(b.clone()));
    let mut rng = rng(seed);
    let mut bad = 0;
    let mut first = None;
    for i in 0..BEHAVIOUR_SAMPLES {
        let p = match (&sa.carrier, i % 4) {
            (Carrier::Graph(g), 0) => {
                let e = g.edges()[rng.gen_range(0..g.edges().len())].id.clone();
                forward_full(&mut rng, &sa.carrier, &e, GRID)
            }
            _ => random_path(&mut rng, &sa.carrier, GRID, 4),
        };
        if controlled(&sa, &p) != controlled(&sb, &p) {
            bad += 1;
            first.get_or_insert(p);
        }
    }
    ensure!(bad <= TOLERANCE, "{bad} disagreements, first on {}", first.unwrap());
    Ok(BEHAVIOUR_SAMPLES)
}

fn grid_points(edge: &str, den: i64) -> Vec<Point> {
    (1..den).map(|k| Point::on(edge, r(k, den))).collect()
}

fn c1a() -> Outcome {
    let s = sp(corpus::c_interval());
    let c = &s.carrier;
    let v0 = pt("v0");
    ensure!(controlled(&s, &run(c, "e0", r(0, 1), r(1, 1))), "full run rejected");
    ensure!(!controlled(&s, &run(c, "e0", r(0, 1), r(1, 2))), "half run accepted");
    let paused = walk(c, &v0, &[Some(("e0", r(0, 1), r(1, 2))), None, Some(("e0", r(1, 2), r(1, 1)))]);
    ensure!(controlled(&s, &paused), "mid-pause run rejected");
    Ok("full run accepted, half run rejected, mid-pause run accepted".into())
}

fn c1b() -> Outcome {
    let s = sp(corpus::c_interval());
    for x in grid_points("e0", 8) {
        let c = classify_point(&s, &x).unwrap();
        ensure!(c.critical && !c.flexible, "{x} is not a critical non-flexible point");
    }
    let c0 = classify_point(&s, &pt("v0")).unwrap();
    ensure!(c0.future_critical && c0.flexible, "0 is not future-critical and flexible");
    let c1 = classify_point(&s, &pt("v1")).unwrap();
    ensure!(c1.past_critical && c1.flexible, "1 is not past-critical and flexible");
    Ok("interior critical, 0 future-critical flexible, 1 past-critical flexible".into())
}

fn c1c() -> Outcome {
    let (lo, hi) = (-1, 3);
    let expr = corpus::c_line_window(lo, hi).unwrap();
    let s = sp(expr.clone());
    let c = &s.carrier;
    let den = 4 * (hi - lo);
    let mut runs = 0;
    for a in 0..=den {
        for b in 0..=den {
            if a == b {
                continue;
            }
            let (ta, tb) = (r(a, den), r(b, den));
            let p = run(c, "line", ta, tb);
            let unit = b - a == 4 && a % 4 == 0;
            let rigid = controlled(&s, &p) && is_rigid_path(&s, &p).unwrap();
            ensure!(rigid == unit, "run {ta} -> {tb}: rigid {rigid}, unit jump {unit}");
            runs += 1;
        }
    }
    for k in 0..=den {
        let x = Point::on("line", r(k, den));
        let cl = classify_point(&s, &x).unwrap();
        ensure!(cl.critical, "{x} not critical");
        if k % 4 == 0 {
            let level = lo + k / 4;
            ensure!(level == hi || cl.future_critical, "integer {level} not future-critical");
            ensure!(level == lo || cl.past_critical, "integer {level} not past-critical");
        }
    }
    let ordered = GraphPresentation::new().edge("line", "xm1", "x3", EdgeKind::Directed).into_expr();
    same_paths(&hat(&expr).unwrap(), &ordered, 31)?;
    let fl = sp(flexible_part(&expr).unwrap());
    for k in 0..=den {
        let x = Point::on("line", r(k, den));
        let integer = k % 4 == 0;
        ensure!(fl.is_flexible_point(&x).unwrap() == integer, "flexible part at {x}");
    }
    let mut rng = rng(32);
    for _ in 0..BEHAVIOUR_SAMPLES {
        let p = random_path(&mut rng, c, GRID, 4);
        ensure!(p.is_trivial() || !controlled(&fl, &p), "flexible part accepts {p}");
    }
    let half = line_point(lo, hi, r(1, 2));
    ensure!(!fl.is_flexible_point(&half).unwrap(), "1/2 flexible in the flexible part");
    Ok(format!("{runs} runs classified; all points critical; hat ordered; flexible part discrete"))
}

fn c1d() -> Outcome {
    let s = sp(corpus::window_2_3e());
    let c = &s.carrier;
    let h = r(1, 2);
    let (zero, one) = (r(0, 1), r(1, 1));
    let short = walk(c, &Point::on("e0", h), &[Some(("e0", h, one)), Some(("e1", zero, h))]);
    ensure!(!controlled(&s, &short), "image [1/2, 3/2] accepted");
    let long = walk(c, &Point::on("e0", h), &[Some(("e0", h, one)), Some(("e1", zero, one)), Some(("e2", zero, h))]);
    ensure!(controlled(&s, &long), "image [1/2, 5/2] rejected");
    ensure!(classify_point(&s, &pt("v1")).unwrap().future_critical, "1 not future-critical");
    for x in grid_points("e1", 8) {
        let cl = classify_point(&s, &x).unwrap();
        ensure!(cl.critical && !cl.flexible, "{x} is not critical non-flexible");
    }
    ensure!(classify_point(&s, &pt("v2")).unwrap().past_critical, "2 not past-critical");
    Ok("[1/2,3/2] rejected, [1/2,5/2] accepted, 1 future-critical, ]1,2[ critical, 2 past-critical".into())
}

/// Monotone run in the two-jump interval between coordinates `a < b` of `[0, 1]`.
fn two_jump_run(c: &Carrier, a: Rat, b: Rat, pause: bool) -> CanonicalPath {
    let h = r(1, 2);
    let local = |x: Rat| if x <= h && !(x == h && a >= h) { ("e0", x / h) } else { ("e1", (x - h) / h) };
    let mut tokens = Vec::new();
    let mut push = |s: Step| {
        tokens.push(Token::Move(s));
        if pause {
            tokens.push(Token::Pause);
        }
    };
    if a < h && b > h {
        push(Step::seg("e0", a / h, Rat::ONE));
        push(Step::seg("e1", Rat::ZERO, (b - h) / h));
    } else {
        let (e, ta) = local(a);
        let tb = if e == "e0" { b / h } else { (b - h) / h };
        push(Step::seg(e, ta, tb));
    }
    let (e, ta) = local(a);
    CanonicalPath::build(c, &Point::on(e, ta), tokens).unwrap()
}

fn c1e() -> Outcome {
    let s = sp(corpus::two_jump());
    let c = &s.carrier;
    let mut n = 0;
    let allowed = [(r(0, 1), r(1, 2)), (r(1, 2), r(1, 1)), (r(0, 1), r(1, 1))];
    for a in 0..=8 {
        for b in a + 1..=8 {
            for pause in [false, true] {
                let (ra, rb) = (r(a, 8), r(b, 8));
                let p = two_jump_run(c, ra, rb, pause);
                let want = allowed.contains(&(ra, rb));
                ensure!(controlled(&s, &p) == want, "image [{ra}, {rb}]: expected {want}");
                n += 1;
            }
        }
    }
    Ok(format!("{n} monotone runs; accepted images exactly [0,1/2], [1/2,1], [0,1]"))
}

fn mirror_step(s: &Step) -> Step {
    match s {
        Step::Edge(seg) => Step::seg(&seg.edge, Rat::ONE - seg.from, Rat::ONE - seg.to),
        Step::Tuple(_) => unreachable!(),
    }
}

fn mirror_point(p: &Point) -> Point {
    match p {
        Point::Vertex(v) if v == "v0" => Point::v("v1"),
        Point::Vertex(_) => Point::v("v0"),
        Point::EdgePoint(e, t) => Point::on(e, Rat::ONE - *t),
        other => other.clone(),
    }
}

fn c1f() -> Outcome {
    let minus = corpus::delayed_minus();
    let s = sp(minus.clone());
    let c = &s.carrier;
    let full = run(c, "e0", r(0, 1), r(1, 1));
    ensure!(!controlled(&s, &full), "undelayed run accepted");
    ensure!(controlled(&s, &full.with_pause_at(0)), "delayed run rejected");
    ensure!(is_finer(&minus, &corpus::c_interval()).unwrap(), "not finer than the one-jump interval");
    let plus_op = SpaceExpr::opposite(corpus::delayed_plus());
    let op = sp(plus_op.clone());
    let mut rng = rng(33);
    let mut n = 0;
    let mut yes = 0;
    while n < BEHAVIOUR_SAMPLES {
        let p = if n % 3 == 0 { forward_full(&mut rng, c, "e0", GRID) } else { random_path(&mut rng, c, GRID, 4) };
        let tokens = p
            .tokens()
            .into_iter()
            .map(|t| match t {
                Token::Move(s) => Token::Move(mirror_step(&s)),
                Token::Pause => Token::Pause,
            })
            .collect();
        let q = CanonicalPath::build(c, &mirror_point(&p.start), tokens).unwrap();
        let a = controlled(&s, &p);
        ensure!(a == controlled(&op, &q), "reversion disagrees on {p}");
        yes += a as usize;
        n += 1;
    }
    ensure!(yes > 0, "no controlled sample");
    let mut vs = BTreeMap::new();
    vs.insert("v0".to_string(), pt("v1"));
    vs.insert("v1".to_string(), pt("v0"));
    let mut es = BTreeMap::new();
    es.insert("e0".to_string(), EdgeImage::Trace(vec![Step::seg("e0", Rat::ONE, Rat::ZERO)]));
    let r_map = CMap::Graph { vertices: vs, edges: es };
    ensure!(check_cmap(&r_map, &minus, &plus_op).unwrap(), "reversion is not a c-map");
    ensure!(check_cmap(&r_map, &plus_op, &minus).unwrap(), "inverse reversion is not a c-map");
    Ok(format!("delay required; finer than cI; reversion agrees on {n} paths ({yes} controlled)"))
}

fn c1g() -> Outcome {
    let expr = corpus::reversible_one_jump();
    let s = sp(expr.clone());
    let c = &s.carrier;
    ensure!(controlled(&s, &run(c, "e0", r(0, 1), r(1, 1))), "forward run rejected");
    ensure!(controlled(&s, &run(c, "e0", r(1, 1), r(0, 1))), "backward run rejected");
    for (a, b) in [(r(0, 1), r(1, 2)), (r(1, 2), r(1, 1)), (r(1, 1), r(1, 2)), (r(1, 2), r(0, 1))] {
        ensure!(!controlled(&s, &run(c, "e0", a, b)), "half run {a} -> {b} accepted");
    }
    same_paths(&hat(&expr).unwrap(), &corpus::natural_interval(), 34)?;
    Ok("full runs accepted, half runs rejected, hat behaves as the natural interval".into())
}

fn base_loop_pred(p: &CanonicalPath) -> bool {
    let base = Point::v("v0");
    p.start == base && p.end == base && p.steps().all(|s| matches!(s, Step::Edge(x) if x.from < x.to))
}

fn c1h() -> Outcome {
    let expr = corpus::c_circle();
    let s = sp(expr.clone());
    let c = &s.carrier;
    let mut rng = rng(35);
    let (mut n, mut yes) = (0, 0);
    while n < BEHAVIOUR_SAMPLES {
        let p = match n % 3 {
            0 => {
                let a = forward_full(&mut rng, c, "e0", GRID);
                let b = forward_full(&mut rng, c, "e0", GRID);
                a.concat(&b).unwrap()
            }
            _ => random_path(&mut rng, c, GRID, 4),
        };
        let got = controlled(&s, &p);
        ensure!(got == base_loop_pred(&p), "{p}: engine {got}");
        yes += got as usize;
        n += 1;
    }
    for x in grid_points("e0", 8).into_iter().chain([pt("v0")]) {
        ensure!(classify_point(&s, &x).unwrap().critical, "{x} not critical");
    }
    let b = classify_point(&s, &pt("v0")).unwrap();
    ensure!(b.past_critical && b.future_critical, "base not past- and future-critical");
    ensure!(is_rigid_space(&expr).unwrap(), "not rigid");
    let rel = reach_relation(&s, Mode::D).unwrap();
    ensure!(rel.matrix.iter().flatten().all(|&x| x), "d-reach is not all-pairs");
    same_paths(&hat(&expr).unwrap(), &corpus::d_circle(), 36)?;
    Ok(format!("{n} sampled paths ({yes} base loops); rigid; hat = directed circle; d-reach all-pairs"))
}

fn c1i() -> Outcome {
    let expr = corpus::n_stop_circle(3).unwrap();
    let s = sp(expr.clone());
    let c = &s.carrier;
    for k in 0..3 {
        let p = run(c, "e0", r(k, 3), r(k + 1, 3));
        ensure!(controlled(&s, &p) && is_rigid_path(&s, &p).unwrap(), "run {k}/3 -> {}/3 is not a rigid generator", k + 1);
        let q = run(c, "e0", r(2 * k, 6), r(2 * k + 1, 6));
        ensure!(!controlled(&s, &q), "a run of length 1/6 is controlled");
    }
    let two = run(c, "e0", r(0, 1), r(2, 3));
    ensure!(controlled(&s, &two) && !is_rigid_path(&s, &two).unwrap(), "a run of length 2/3 is rigid");
    ensure!(is_rigid_space(&expr).unwrap(), "not rigid");
    Ok("minimal generators have length 1/3; rigid".into())
}

fn product_check(expr: SpaceExpr, pred: fn(&CanonicalPath) -> bool, seed: u64) -> Result<(usize, usize), String> {
    let s = sp(expr);
    let mut rng = rng(seed);
    let (mut yes, mut bad) = (0, 0);
    let mut first = None;
    for _ in 0..PRODUCT_SAMPLES {
        let p = square_sample(&mut rng, &s.carrier);
        let got = controlled(&s, &p);
        if got != pred(&p) {
            bad += 1;
            first.get_or_insert(p);
        }
        yes += got as usize;
    }
    ensure!(bad <= TOLERANCE, "{bad} disagreements, first on {}", first.unwrap());
    let n = PRODUCT_SAMPLES;
    ensure!(yes > 0 && yes < n, "sample is not mixed: {yes}/{n} controlled");
    Ok((n, yes))
}

fn c1j() -> Outcome {
    let (n, yes) = product_check(corpus::c_square(), square_pred, 37)?;
    let s = sp(corpus::c_square());
    let coord = |k: i64| if k == 0 { pt("v0") } else if k == 4 { pt("v1") } else { Point::on("e0", r(k, 4)) };
    let mut flex = 0;
    for i in 0..=4 {
        for j in 0..=4 {
            let x = Point::pair(coord(i), coord(j));
            let f = s.is_flexible_point(&x).unwrap();
            ensure!(f == ((i == 0 || i == 4) && (j == 0 || j == 4)), "{x}: flexible {f}");
            flex += f as usize;
        }
    }
    ensure!(flex == 4, "{flex} flexible points");
    Ok(format!("predicate matches on {n} paths ({yes} controlled); exactly four flexible points"))
}

fn c1k() -> Outcome {
    let (n, yes) = product_check(corpus::hybrid_square(), hybrid_pred, 38)?;
    Ok(format!("predicate matches on {n} paths ({yes} controlled)"))
}

fn c1l() -> Outcome {
    let s = sp(corpus::crossing_square());
    let (p1, p2) = (pt("p00"), pt("p10"));
    ensure!(!reachable(&s, &p1, &p2, Mode::C).unwrap().reachable, "c-reachable");
    let d = reachable(&s, &p1, &p2, Mode::D).unwrap();
    ensure!(d.reachable, "not d-reachable");
    let w = d.witness.unwrap();
    Ok(format!("c-reach false; d-reach true via {w}"))
}

fn c1m() -> Outcome {
    let expr = corpus::siphon();
    let s = sp(expr.clone());
    ensure!(classify_point(&s, &pt("v1")).unwrap().future_critical, "1 not future-critical");
    ensure!(classify_point(&s, &pt("v0")).unwrap().past_critical, "0 not past-critical");
    for x in grid_points("e0", 8).into_iter().chain([pt("v0"), pt("v1")]) {
        ensure!(!classify_point(&s, &x).unwrap().critical, "{x} critical");
    }
    same_paths(&flexible_part(&expr).unwrap(), &corpus::d_interval(), 39)?;
    same_paths(&hat(&expr).unwrap(), &corpus::natural_interval(), 40)?;
    let osc = sp(corpus::siphon_osc());
    ensure!(classify_point(&osc, &pt("v1")).unwrap().future_critical, "oscillating: 1 not future-critical");
    ensure!(!classify_point(&osc, &pt("v0")).unwrap().past_critical, "oscillating: 0 past-critical");
    let down = run(&osc.carrier, "e0", r(4, 5), r(3, 10));
    ensure!(controlled(&osc, &down), "decreasing run 4/5 -> 3/10 rejected");
    ensure!(!controlled(&s, &down), "siphon accepts the decreasing run 4/5 -> 3/10");
    let from_top = run(&osc.carrier, "e0", r(1, 1), r(3, 10));
    ensure!(!controlled(&osc, &from_top), "a run leaving 1 stops at 3/10");
    Ok("siphon: 1 future-, 0 past-critical, none critical, Fl directed, hat natural; oscillating: 1 future-critical, 0 not past-critical, 4/5 -> 3/10 accepted".into())
}

/// Heat to T2, switch on, cool to T1, switch off, cool to 0.
fn hysteron_steps() -> Vec<Step> {
    let (z, o) = (Rat::ZERO, Rat::ONE);
    vec![
        Step::seg("x0a", z, o),
        Step::seg("x0b", z, o),
        Step::seg("up", z, o),
        Step::seg("x1a", o, z),
        Step::seg("down", z, o),
        Step::seg("x0a", o, z),
    ]
}

fn c1n() -> Outcome {
    let h = Hysteron::new(r(1, 1), r(3, 2), r(2, 1)).unwrap();
    let s = sp(h.space());
    let c = &s.carrier;
    let steps = hysteron_steps();
    let forward = CanonicalPath::build(c, &pt("off0"), steps.iter().cloned().map(Token::Move).collect()).unwrap();
    ensure!(controlled(&s, &forward), "hysteron trajectory rejected");
    ensure!(!controlled(&s, &forward.reverse()), "reversed hysteron trajectory accepted");
    let heat = walk(c, &h.point(0, r(1, 2)).unwrap(), &[Some(("x0a", r(1, 2), r(1, 1))), Some(("x0b", r(0, 1), r(1, 1)))]);
    let jump = walk(c, &pt("offT2"), &[Some(("up", r(0, 1), r(1, 1)))]);
    let hj = heat.concat(&jump).unwrap();
    ensure!(controlled(&s, &hj), "heating then switching rejected");
    ensure!(!controlled(&s, &hj.reverse()), "reversed switching accepted");

    let two = sp(corpus::two_controller(r(1, 1), r(2, 1), r(1, 1), r(2, 1)).unwrap());
    let tc = &two.carrier;
    let mut tokens: Vec<Token> =
        steps.iter().map(|s| Token::Move(Step::Tuple(vec![Some(s.clone()), None]))).collect();
    tokens.extend(steps.iter().map(|s| Token::Move(Step::Tuple(vec![None, Some(s.clone())]))));
    let start = Point::pair(pt("off0"), pt("off0"));
    let seq = CanonicalPath::build(tc, &start, tokens).unwrap();
    ensure!(controlled(&two, &seq), "two-controller trajectory rejected");
    ensure!(!controlled(&two, &seq.reverse()), "reversed two-controller trajectory accepted");
    let both = cspace::path::pair(tc, &forward, &forward).unwrap();
    ensure!(controlled(&two, &both), "simultaneous two-controller trajectory rejected");
    Ok("narrative trajectories accepted, reversals rejected".into())
}

fn c1o() -> Outcome {
    let s = sp(corpus::dual_carriageway());
    let (x, y) = (pt("v0"), Point::on("x3", r(1, 2)));
    ensure!(unavoidable_point(&s, &x, &y, &pt("v2"), Mode::D).unwrap(), "2 avoidable on the way to (1/2)_3");
    ensure!(unavoidable_point(&s, &x, &y, &pt("v1"), Mode::D).unwrap(), "1 avoidable on the way to (1/2)_3");
    ensure!(!unavoidable_point(&s, &x, &pt("v1"), &pt("v2"), Mode::D).unwrap(), "2 unavoidable on the way to 1");
    Ok("2 is unavoidable from 0 to (1/2)_3".into())
}

fn c1p() -> Outcome {
    let expr = SpaceExpr::exclude(corpus::siphon(), vec![pt("v1")]);
    let s = sp(expr);
    let c = &s.carrier;
    ensure!(!controlled(&s, &run(c, "e0", r(1, 2), r(1, 1))), "run ending at 1 accepted");
    let through = walk(c, &Point::on("e0", r(1, 2)), &[Some(("e0", r(1, 2), r(1, 1))), Some(("e0", r(1, 1), r(0, 1)))]);
    ensure!(controlled(&s, &through), "pass-through jump rejected");
    let cl = classify_point(&s, &pt("v1")).unwrap();
    ensure!(cl.critical && !cl.flexible, "1 is not critical non-flexible");
    Ok("ending at 1 rejected; passing through 1 accepted; 1 critical non-flexible".into())
}

fn prop(name: &str, r: Result<usize, String>) -> Result<usize, String> {
    match r {
        Ok(n) if n >= CASES => Ok(n),
        Ok(n) => Err(format!("{name}: only {n} cases")),
        Err(e) => Err(format!("{name}: {e}")),
    }
}

fn c2() -> Outcome {
    let counts = [
        prop("axioms", props::axiom_closure(101))?,
        prop("opposite", props::opposite_involution(102))?,
        prop("hat", props::hat_laws(103))?,
        prop("product", props::product_law(104))?,
        prop("reach", props::reach_preorder(105))?,
        prop("finer", props::finer_laws(106))?,
        prop("canonical", props::canonical_invariants(107))?,
    ];
    Ok(format!("seven suites, minimum {} cases each", counts.iter().min().unwrap()))
}

fn c3() -> Outcome {
    let mut total = 0;
    let models = graph_models();
    for (i, (name, expr)) in models.iter().enumerate() {
        let (n, _, _) = props::oracle_agreement(name, expr, 200 + i as u64)?;
        total += n;
    }
    Ok(format!("{} models, {total} paths, full agreement", models.len()))
}

fn c4() -> Outcome {
    let prod = SpaceExpr::product(corpus::c_interval(), corpus::two_jump());
    let directed_j = GraphPresentation::new()
        .edge("e0", "v0", "v1", EdgeKind::Directed)
        .edge("e1", "v1", "v2", EdgeKind::Directed)
        .into_expr();
    let square = sp(SpaceExpr::product(corpus::d_interval(), directed_j));
    let h = sp(hat(&prod).map_err(|e| format!("hat of the product: {e}"))?);
    let c = &square.carrier;
    let a = run(c.factor(0).unwrap(), "e0", r(0, 1), r(1, 1));
    let b = walk(c.factor(1).unwrap(), &pt("v0"), &[Some(("e0", r(0, 1), r(1, 1))), Some(("e1", r(0, 1), r(1, 1)))]);
    let diagonal = cspace::path::pair(c, &a, &b).unwrap();
    ensure!(controlled(&square, &diagonal), "diagonal not controlled in the directed square");
    let in_hat = controlled(&h, &diagonal);
    let in_prod = controlled(&sp(prod), &diagonal);
    ensure!(!in_hat, "diagonal is controlled in the hat of the product (controlled in the product itself: {in_prod})");
    Ok("diagonal separates the two structures".into())
}

fn main() -> ExitCode {
    let criteria: &[(&str, &str, fn() -> Outcome)] = &[
        ("1a", "one-jump interval membership", c1a),
        ("1b", "one-jump interval criticality", c1b),
        ("1c", "stepping line window", c1c),
        ("1d", "window with a jump over ]1,2[", c1d),
        ("1e", "two-jump interval images", c1e),
        ("1f", "delayed intervals", c1f),
        ("1g", "reversible one-jump interval", c1g),
        ("1h", "one-jump circle", c1h),
        ("1i", "three-stop circle", c1i),
        ("1j", "one-jump square", c1j),
        ("1k", "hybrid square", c1k),
        ("1l", "crossing square reachability", c1l),
        ("1m", "siphon structures", c1m),
        ("1n", "hysteron and two-controller", c1n),
        ("1o", "dual carriageway", c1o),
        ("1p", "excluded endpoint siphon", c1p),
        ("2", "property suites", c2),
        ("3", "oracle equivalence", c3),
        ("4", "hat of a product strictly finer than the directed square", c4),
    ];
    let mut unexpected = 0;
    for (id, what, check) in criteria {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {id} {what}: {detail}"),
            Err(detail) => match KNOWN_FAILURES.iter().find(|(k, _)| k == id) {
                Some((_, why)) => println!("FAIL {id} {what}: {detail} [known: {why}]"),
                None => {
                    println!("FAIL {id} {what}: {detail}");
                    unexpected += 1;
                }
            },
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
