#![allow(dead_code)]

pub mod props;

use std::sync::Arc;

use cspace::carrier::{Carrier, NormGraph};
use cspace::corpus;
use cspace::path::{pair, CanonicalPath, Step, Token};
use cspace::rat::Rat;
use cspace::space::{Point, SpaceExpr};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const GRID: i64 = 8;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r(p: i64, q: i64) -> Rat {
    Rat::new(p, q)
}

pub fn pt(s: &str) -> Point {
    s.parse().unwrap()
}

/// Path from `start` through the given steps, pauses written as `None`.
pub fn walk(carrier: &Carrier, start: &Point, steps: &[Option<(&str, Rat, Rat)>]) -> CanonicalPath {
    let tokens = steps
        .iter()
        .map(|s| match s {
            Some((e, a, b)) => Token::Move(Step::seg(e, *a, *b)),
            None => Token::Pause,
        })
        .collect();
    CanonicalPath::build(carrier, start, tokens).unwrap()
}

pub fn run(carrier: &Carrier, edge: &str, a: Rat, b: Rat) -> CanonicalPath {
    walk(carrier, &Point::on(edge, a), &[Some((edge, a, b))])
}

fn grid_param(rng: &mut ChaCha8Rng, grid: i64) -> Rat {
    if rng.gen_bool(0.5) {
        Rat::int(rng.gen_range(0..=1))
    } else {
        Rat::new(rng.gen_range(0..=grid), grid)
    }
}

fn random_point(rng: &mut ChaCha8Rng, g: &NormGraph, grid: i64) -> Point {
    if rng.gen_bool(0.5) || g.edges().is_empty() {
        Point::v(g.vertices().choose(rng).unwrap())
    } else {
        let e = g.edges().choose(rng).unwrap();
        g.point_at(&e.id, grid_param(rng, grid)).unwrap()
    }
}

/// Random tokens in a graph carrier, at most `moves` steps, parameters on the grid `1/grid`.
pub fn graph_tokens(rng: &mut ChaCha8Rng, g: &NormGraph, grid: i64, moves: usize) -> (Point, Vec<Token>) {
    let start = g.normalize_point(&random_point(rng, g, grid)).unwrap();
    let mut cur = start.clone();
    let mut tokens = Vec::new();
    let n = rng.gen_range(0..=moves);
    let mut made = 0;
    while made < n {
        if rng.gen_bool(0.2) {
            tokens.push(Token::Pause);
        }
        let opts = g.positions(&cur);
        let Some((e, t)) = opts.choose(rng).cloned() else { break };
        let mut to = grid_param(rng, grid);
        if to == t {
            to = if t == Rat::ZERO { Rat::ONE } else { Rat::ZERO };
        }
        tokens.push(Token::Move(Step::seg(&e, t, to)));
        cur = g.point_at(&e, to).unwrap();
        made += 1;
    }
    if rng.gen_bool(0.15) {
        tokens.push(Token::Pause);
    }
    (start, tokens)
}

pub fn random_graph_path(rng: &mut ChaCha8Rng, g: &NormGraph, grid: i64, moves: usize) -> CanonicalPath {
    let (start, tokens) = graph_tokens(rng, g, grid, moves);
    let carrier = Carrier::Graph(Arc::new(g.clone()));
    CanonicalPath::build(&carrier, &start, tokens).unwrap()
}

/// A forward run over the whole of `edge`, cut at random grid points with random pauses.
pub fn forward_full(rng: &mut ChaCha8Rng, carrier: &Carrier, edge: &str, grid: i64) -> CanonicalPath {
    let mut cuts: Vec<i64> = (1..grid).filter(|_| rng.gen_bool(0.2)).collect();
    cuts.push(grid);
    let mut tokens = Vec::new();
    let mut prev = 0;
    for c in cuts {
        if rng.gen_bool(0.3) {
            tokens.push(Token::Pause);
        }
        tokens.push(Token::Move(Step::seg(edge, Rat::new(prev, grid), Rat::new(c, grid))));
        prev = c;
    }
    if rng.gen_bool(0.3) {
        tokens.push(Token::Pause);
    }
    CanonicalPath::build(carrier, &Point::on(edge, Rat::ZERO), tokens).unwrap()
}

/// Random path in a graph carrier or a binary product of graph carriers.
pub fn random_path(rng: &mut ChaCha8Rng, carrier: &Carrier, grid: i64, moves: usize) -> CanonicalPath {
    match carrier {
        Carrier::Graph(g) => random_graph_path(rng, g, grid, moves),
        Carrier::Product(a, b) => {
            let pa = random_path(rng, a, grid, moves);
            let pb = random_path(rng, b, grid, moves);
            combine(rng, carrier, &pa, &pb)
        }
    }
}

/// A product path with the given projections: lockstep or a random interleaving.
pub fn combine(rng: &mut ChaCha8Rng, carrier: &Carrier, pa: &CanonicalPath, pb: &CanonicalPath) -> CanonicalPath {
    if rng.gen_bool(0.5) {
        return pair(carrier, pa, pb).unwrap();
    }
    let (mut ta, mut tb) = (pa.tokens(), pb.tokens());
    ta.reverse();
    tb.reverse();
    let mut tokens = Vec::new();
    while !ta.is_empty() || !tb.is_empty() {
        let left = tb.is_empty() || (!ta.is_empty() && rng.gen_bool(0.5));
        let t = if left { ta.pop().unwrap() } else { tb.pop().unwrap() };
        tokens.push(match t {
            Token::Pause => Token::Pause,
            Token::Move(s) if left => Token::Move(Step::Tuple(vec![Some(s), None])),
            Token::Move(s) => Token::Move(Step::Tuple(vec![None, Some(s)])),
        });
    }
    CanonicalPath::build(carrier, &Point::pair(pa.start.clone(), pb.start.clone()), tokens).unwrap()
}

fn forward_only(p: &CanonicalPath) -> bool {
    p.steps().all(|s| matches!(s, Step::Edge(seg) if seg.from < seg.to))
}

/// Hand-coded membership in the one-jump interval `e0: v0 -> v1`.
pub fn one_jump_pred(p: &CanonicalPath) -> bool {
    if p.is_trivial() {
        return p.start == Point::v("v0") || p.start == Point::v("v1");
    }
    forward_only(p) && p.start == Point::v("v0") && p.end == Point::v("v1")
}

/// Hand-coded membership in the directed interval.
pub fn directed_pred(p: &CanonicalPath) -> bool {
    forward_only(p)
}

pub fn square_pred(p: &CanonicalPath) -> bool {
    one_jump_pred(&p.project(0).unwrap()) && one_jump_pred(&p.project(1).unwrap())
}

pub fn hybrid_pred(p: &CanonicalPath) -> bool {
    one_jump_pred(&p.project(0).unwrap()) && directed_pred(&p.project(1).unwrap())
}

/// Corpus models whose presentation is a finite graph.
pub fn graph_models() -> Vec<(&'static str, SpaceExpr)> {
    let one = Rat::ONE;
    let two = Rat::int(2);
    vec![
        ("natural_interval", corpus::natural_interval()),
        ("d_interval", corpus::d_interval()),
        ("c_interval", corpus::c_interval()),
        ("two_jump", corpus::two_jump()),
        ("delayed_minus", corpus::delayed_minus()),
        ("delayed_plus", corpus::delayed_plus()),
        ("reversible_one_jump", corpus::reversible_one_jump()),
        ("c_line_window", corpus::c_line_window(-1, 3).unwrap()),
        ("window_2_3e", corpus::window_2_3e()),
        ("d_circle", corpus::d_circle()),
        ("c_circle", corpus::c_circle()),
        ("n_stop_circle", corpus::n_stop_circle(3).unwrap()),
        ("crossing_square", corpus::crossing_square()),
        ("hysteron", corpus::hysteron(one, Rat::new(3, 2), two).unwrap()),
        ("dual_controller", corpus::dual_controller(one, two, Rat::int(3), Rat::int(4)).unwrap()),
        ("siphon", corpus::siphon()),
        ("siphon_osc", corpus::siphon_osc()),
        ("dual_carriageway", corpus::dual_carriageway()),
    ]
}

/// Every corpus model, products included.
pub fn all_models() -> Vec<(&'static str, SpaceExpr)> {
    let mut out = graph_models();
    let one = Rat::ONE;
    let two = Rat::int(2);
    out.push(("c_square", corpus::c_square()));
    out.push(("hybrid_square", corpus::hybrid_square()));
    out.push(("c_torus", corpus::c_torus(2).unwrap()));
    out.push(("two_controller", corpus::two_controller(one, two, one, two).unwrap()));
    out
}
