//! Seeded property checks shared by the property tests and the acceptance run.
//! Each returns the number of cases checked or a description of the first violation.

use cspace::carrier::Carrier;
use cspace::construct::{hat, is_finer};
use cspace::error::Error;
use cspace::kind::EdgeKind;
use cspace::membership::{parse_controlled, Parse, Space};
use cspace::oracle::brute_force_controlled;
use cspace::path::CanonicalPath;
use cspace::rat::Rat;
use cspace::reach::{in_mode, reach_relation, reachable, Mode};
use cspace::space::{GraphPresentation, SpaceExpr};
use cspace::track::{canonicalize, to_track, Track};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::*;

pub const CASES: usize = 500;
pub const ORACLE_DEPTH: usize = 5;

type Check = Result<usize, String>;

fn fail<T: std::fmt::Display>(what: &str, detail: T) -> String {
    format!("{what}: {detail}")
}

/// Random path, occasionally a full forward run on some edge of a graph carrier.
fn sample(rng: &mut ChaCha8Rng, carrier: &Carrier, moves: usize) -> CanonicalPath {
    if let Carrier::Graph(g) = carrier {
        if rng.gen_bool(0.2) {
            let e = g.edges().choose(rng).unwrap().id.clone();
            return forward_full(rng, carrier, &e, GRID);
        }
    }
    random_path(rng, carrier, GRID, moves)
}

/// Controlled paths found by sampling, trivial ones included.
fn pool(rng: &mut ChaCha8Rng, space: &Space, tries: usize) -> Vec<CanonicalPath> {
    let mut out = Vec::new();
    for _ in 0..tries {
        let p = sample(rng, &space.carrier, 3);
        if space.is_controlled(&p).unwrap() {
            out.push(p);
        }
    }
    out
}

/// Flexible endpoints, concatenation closure and pause insertion, each on `CASES` cases at least.
pub fn axiom_closure(seed: u64) -> Check {
    let mut rng = rng(seed);
    let (mut c0, mut c1, mut c2) = (0, 0, 0);
    let models = all_models();
    while c0 < CASES || c1 < CASES || c2 < CASES {
        for (name, expr) in &models {
            let space = Space::new(expr.clone()).unwrap();
            let ps = pool(&mut rng, &space, 60);
            for p in &ps {
                for x in [&p.start, &p.end] {
                    if !space.is_flexible_point(x).unwrap() {
                        return Err(fail(name, format!("controlled {p} has a non-flexible endpoint {x}")));
                    }
                }
                c0 += 1;
                let k = rng.gen_range(0..=p.tokens().len());
                let q = p.with_pause_at(k);
                if !space.is_controlled(&q).unwrap() {
                    return Err(fail(name, format!("pause insertion {p} -> {q}")));
                }
                c2 += 1;
                let next: Vec<&CanonicalPath> = ps.iter().filter(|b| b.start == p.end).collect();
                if let Some(b) = next.choose(&mut rng) {
                    let ab = p.concat(b).unwrap();
                    if !space.is_controlled(&ab).unwrap() {
                        return Err(fail(name, format!("concatenation {p} + {b}")));
                    }
                    c1 += 1;
                }
            }
        }
    }
    Ok(c0.min(c1).min(c2))
}

/// Membership in the opposite is membership of the reversed path, and reversal is an involution.
pub fn opposite_involution(seed: u64) -> Check {
    let mut rng = rng(seed);
    let models = all_models();
    let mut n = 0;
    while n < CASES {
        for (name, expr) in &models {
            let x = Space::new(expr.clone()).unwrap();
            let op = Space::new(SpaceExpr::opposite(expr.clone())).unwrap();
            let opop = Space::new(SpaceExpr::opposite(SpaceExpr::opposite(expr.clone()))).unwrap();
            for _ in 0..10 {
                let p = sample(&mut rng, &x.carrier, 4);
                let rp = p.reverse();
                if rp.reverse() != p {
                    return Err(fail(name, format!("reverse is not an involution on {p}")));
                }
                let a = x.is_controlled(&p).unwrap();
                if op.is_controlled(&p).unwrap() != x.is_controlled(&rp).unwrap() {
                    return Err(fail(name, format!("opposite law fails on {p}")));
                }
                if opop.is_controlled(&p).unwrap() != a {
                    return Err(fail(name, format!("double opposite differs on {p}")));
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

/// hat(hat X) = hat X, X is finer than hat X, and hat X is closed under restriction.
pub fn hat_laws(seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut spaces = Vec::new();
    for (name, expr) in all_models() {
        match hat(&expr) {
            Ok(h) => {
                let hh = hat(&h).map_err(|e| fail(name, format!("hat of hat: {e}")))?;
                spaces.push((name, Space::new(expr).unwrap(), Space::new(h).unwrap(), Space::new(hh).unwrap()));
            }
            Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(fail(name, e)),
        }
    }
    let (mut idem, mut restr) = (0, 0);
    while idem < CASES || restr < CASES {
        for (name, x, h, hh) in &spaces {
            for _ in 0..10 {
                let p = sample(&mut rng, &x.carrier, 4);
                let in_h = h.is_controlled(&p).unwrap();
                if hh.is_controlled(&p).unwrap() != in_h {
                    return Err(fail(name, format!("hat is not idempotent on {p}")));
                }
                if x.is_controlled(&p).unwrap() && !in_h {
                    return Err(fail(name, format!("{p} is lost by hat")));
                }
                idem += 1;
                if in_h && !p.is_trivial() {
                    let len = p.tokens().len() as i64;
                    let a = rng.gen_range(0..=4 * len);
                    let b = rng.gen_range(a..=4 * len);
                    let q = p.portion(&h.carrier, Rat::new(a, 4), Rat::new(b, 4)).unwrap();
                    if !h.is_controlled(&q).unwrap() {
                        return Err(fail(name, format!("restriction {q} of {p} not controlled")));
                    }
                    restr += 1;
                }
            }
        }
    }
    Ok(idem.min(restr))
}

/// Product membership against the hand-coded square predicates and the projection law.
pub fn product_law(seed: u64) -> Check {
    let mut rng = rng(seed);
    let sq = Space::new(cspace::corpus::c_square()).unwrap();
    let hy = Space::new(cspace::corpus::hybrid_square()).unwrap();
    let (mut n_sq, mut n_hy, mut n_proj) = (0, 0, 0);
    let (mut yes_sq, mut yes_hy) = (0, 0);
    for _ in 0..CASES {
        let p = square_sample(&mut rng, &sq.carrier);
        let got = sq.is_controlled(&p).unwrap();
        if got != square_pred(&p) {
            return Err(fail("c_square", format!("{p}: engine {got}")));
        }
        n_sq += 1;
        yes_sq += got as usize;
        let p = square_sample(&mut rng, &hy.carrier);
        let got = hy.is_controlled(&p).unwrap();
        if got != hybrid_pred(&p) {
            return Err(fail("hybrid_square", format!("{p}: engine {got}")));
        }
        n_hy += 1;
        yes_hy += got as usize;
    }
    if yes_sq == 0 || yes_sq == n_sq || yes_hy == 0 || yes_hy == n_hy {
        return Err(format!("degenerate sample: {yes_sq}/{n_sq} and {yes_hy}/{n_hy} controlled"));
    }
    let one = Rat::ONE;
    let two = Rat::int(2);
    let prods = [cspace::corpus::c_torus(2).unwrap(), cspace::corpus::two_controller(one, two, one, two).unwrap()];
    while n_proj < CASES {
        for expr in &prods {
            let SpaceExpr::Product(a, b) = expr else { unreachable!() };
            let (s, sa, sb) =
                (Space::new(expr.clone()).unwrap(), Space::new((**a).clone()).unwrap(), Space::new((**b).clone()).unwrap());
            let p = random_path(&mut rng, &s.carrier, GRID, 3);
            let want = sa.is_controlled(&p.project(0).unwrap()).unwrap() && sb.is_controlled(&p.project(1).unwrap()).unwrap();
            if s.is_controlled(&p).unwrap() != want {
                return Err(fail("projection law", &p));
            }
            n_proj += 1;
        }
    }
    Ok(n_sq.min(n_hy).min(n_proj))
}

/// Square paths: half the factors are controlled-looking full runs.
pub fn square_sample(rng: &mut ChaCha8Rng, carrier: &Carrier) -> CanonicalPath {
    let Carrier::Product(a, b) = carrier else { panic!("not a product") };
    let factor = |c: &Carrier, rng: &mut ChaCha8Rng| match rng.gen_range(0..3) {
        0 => forward_full(rng, c, "e0", GRID),
        1 => CanonicalPath::trivial(c.normalize_point(&pt(["v0", "v1"].choose(rng).unwrap())).unwrap()),
        _ => random_path(rng, c, GRID, 3),
    };
    let pa = factor(a, rng);
    let pb = factor(b, rng);
    combine(rng, carrier, &pa, &pb)
}

/// Reach relations are preorders, and pointwise queries agree with them.
pub fn reach_preorder(seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut n = 0;
    for (name, expr) in all_models() {
        let space = Space::new(expr).unwrap();
        for mode in [Mode::C, Mode::D] {
            let rel = match reach_relation(&space, mode) {
                Ok(r) => r,
                Err(Error::Unsupported(_)) => continue,
                Err(e) => return Err(fail(name, e)),
            };
            let m = &rel.matrix;
            let k = m.len();
            for i in 0..k {
                if !m[i][i] {
                    return Err(fail(name, format!("{mode:?} relation not reflexive at {}", rel.nodes[i])));
                }
                for j in 0..k {
                    if !m[i][j] {
                        continue;
                    }
                    for l in 0..k {
                        if m[j][l] && !m[i][l] {
                            return Err(fail(
                                name,
                                format!("{mode:?} relation not transitive: {} {} {}", rel.nodes[i], rel.nodes[j], rel.nodes[l]),
                            ));
                        }
                        n += 1;
                    }
                }
            }
            let target = in_mode(&space, mode).unwrap();
            for _ in 0..20 {
                let x = rel.nodes.choose(&mut rng).unwrap();
                let y = rel.nodes.choose(&mut rng).unwrap();
                let got = reachable(&space, x, y, mode).unwrap();
                if got.reachable != rel.get(x, y).unwrap() {
                    return Err(fail(name, format!("{mode:?} query {x} -> {y} disagrees with the relation")));
                }
                if let Some(w) = &got.witness {
                    if w.start != target.point(x).unwrap() || w.end != target.point(y).unwrap() || !target.is_controlled(w).unwrap() {
                        return Err(fail(name, format!("bad witness {w} for {x} -> {y}")));
                    }
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

fn edge_kinds() -> Vec<EdgeKind> {
    use EdgeKind::*;
    vec![
        Natural,
        Directed,
        OneJump,
        NStop(2),
        NStop(3),
        NStop(4),
        DelayedMinus,
        DelayedPlus,
        ReversibleOneJump,
        Siphon,
        SiphonOsc,
        Still,
        DiscreteC,
    ]
}

/// The finer-than relation is reflexive and transitive.
pub fn finer_laws(_seed: u64) -> Check {
    let spaces: Vec<(String, SpaceExpr)> = edge_kinds()
        .into_iter()
        .map(|k| (k.to_string(), GraphPresentation::new().edge("e0", "v0", "v1", k).into_expr()))
        .collect();
    let k = spaces.len();
    let mut m = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            m[i][j] = is_finer(&spaces[i].1, &spaces[j].1).map_err(|e| fail(&spaces[i].0, e))?;
        }
    }
    let mut n = 0;
    for (name, expr) in all_models() {
        if !is_finer(&expr, &expr).map_err(|e| fail(name, e))? {
            return Err(fail(name, "not finer than itself"));
        }
        n += 1;
    }
    for i in 0..k {
        if !m[i][i] {
            return Err(fail(&spaces[i].0, "not finer than itself"));
        }
        for j in 0..k {
            for l in 0..k {
                if m[i][j] && m[j][l] && !m[i][l] {
                    return Err(format!("finer is not transitive on {}, {}, {}", spaces[i].0, spaces[j].0, spaces[l].0));
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

/// Canonical forms are invariant under retiming, idempotent, and commute with projection.
pub fn canonical_invariants(seed: u64) -> Check {
    let mut rng = rng(seed);
    let models = all_models();
    let mut n = 0;
    while n < CASES {
        for (name, expr) in &models {
            let space = Space::new(expr.clone()).unwrap();
            let c = &space.carrier;
            let p = random_path(&mut rng, c, GRID, 4);
            let track = match to_track(&p, c) {
                Ok(t) => t,
                Err(Error::Unsupported(_)) => continue,
                Err(e) => return Err(fail(name, e)),
            };
            if canonicalize(&track, c).unwrap() != p {
                return Err(fail(name, format!("canonicalize(to_track({p})) differs")));
            }
            let mut t = Rat::ZERO;
            let retimed = Track::new(
                track
                    .breakpoints
                    .iter()
                    .map(|(_, q)| {
                        t = t + Rat::new(rng.gen_range(1..=7), rng.gen_range(1..=5));
                        (t, q.clone())
                    })
                    .collect(),
            );
            if canonicalize(&retimed, c).unwrap() != p {
                return Err(fail(name, format!("retiming changes the canonical form of {p}")));
            }
            if let Carrier::Product(a, b) = c {
                for (i, f) in [a, b].into_iter().enumerate() {
                    let direct = canonicalize(&track.project(i).unwrap(), f).unwrap();
                    if direct != p.project(i).unwrap() {
                        return Err(fail(name, format!("projection {i} does not commute on {p}")));
                    }
                }
            }
            n += 1;
        }
    }
    Ok(n)
}

/// Engine against brute force on one graph model: `CASES` compared paths whose parse fits in
/// the oracle depth. Returns (compared, controlled, skipped).
pub fn oracle_agreement(name: &str, expr: &SpaceExpr, seed: u64) -> Result<(usize, usize, usize), String> {
    let space = Space::new(expr.clone()).unwrap();
    let mut rng = rng(seed);
    let (mut compared, mut yes, mut skipped) = (0, 0, 0);
    while compared < CASES {
        let p = random_path(&mut rng, &space.carrier, GRID, 4);
        let parse = parse_controlled(expr, &p).unwrap();
        if let Parse::Controlled(d) = &parse {
            if d.instances.len() > ORACLE_DEPTH {
                skipped += 1;
                continue;
            }
        }
        let brute = brute_force_controlled(expr, &p, ORACLE_DEPTH, GRID as u32).map_err(|e| fail(name, e))?;
        if parse.is_controlled() != brute {
            return Err(fail(name, format!("engine {} vs brute force {brute} on {p}", parse.is_controlled())));
        }
        compared += 1;
        yes += brute as usize;
    }
    Ok((compared, yes, skipped))
}
