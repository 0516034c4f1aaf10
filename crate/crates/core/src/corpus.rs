//! Named models.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::kind::EdgeKind;
use crate::rat::Rat;
use crate::space::{GraphPresentation, Point, RigidTrace, Segment, SpaceExpr};

pub const NAMES: &[&str] = &[
    "natural_interval",
    "d_interval",
    "c_interval",
    "two_jump",
    "delayed_minus",
    "delayed_plus",
    "reversible_one_jump",
    "c_line_window",
    "window_2_3e",
    "d_circle",
    "c_circle",
    "n_stop_circle",
    "c_square",
    "hybrid_square",
    "crossing_square",
    "c_torus",
    "hysteron",
    "dual_controller",
    "two_controller",
    "siphon",
    "siphon_osc",
    "dual_carriageway",
];

pub type Params = BTreeMap<String, String>;

fn rat_param(params: &Params, key: &str, default: Rat) -> Result<Rat> {
    match params.get(key) {
        Some(v) => v.parse().map_err(|_| Error::Invalid(format!("parameter {key}={v} is not a rational"))),
        None => Ok(default),
    }
}

fn int_param(params: &Params, key: &str, default: i64) -> Result<i64> {
    match params.get(key) {
        Some(v) => v.parse().map_err(|_| Error::Invalid(format!("parameter {key}={v} is not an integer"))),
        None => Ok(default),
    }
}

fn single(kind: EdgeKind) -> SpaceExpr {
    GraphPresentation::new().edge("e0", "v0", "v1", kind).into_expr()
}

pub fn natural_interval() -> SpaceExpr {
    single(EdgeKind::Natural)
}

pub fn d_interval() -> SpaceExpr {
    single(EdgeKind::Directed)
}

pub fn c_interval() -> SpaceExpr {
    single(EdgeKind::OneJump)
}

/// Two one-jump edges `v0 -e0-> v1 -e1-> v2`; `v1` is the midpoint anchor.
pub fn two_jump() -> SpaceExpr {
    GraphPresentation::new()
        .edge("e0", "v0", "v1", EdgeKind::OneJump)
        .edge("e1", "v1", "v2", EdgeKind::OneJump)
        .into_expr()
}

pub fn delayed_minus() -> SpaceExpr {
    single(EdgeKind::DelayedMinus)
}

pub fn delayed_plus() -> SpaceExpr {
    single(EdgeKind::DelayedPlus)
}

pub fn reversible_one_jump() -> SpaceExpr {
    single(EdgeKind::ReversibleOneJump)
}

pub fn siphon() -> SpaceExpr {
    single(EdgeKind::Siphon)
}

pub fn siphon_osc() -> SpaceExpr {
    single(EdgeKind::SiphonOsc)
}

fn level_name(prefix: &str, k: i64) -> String {
    if k < 0 {
        format!("{prefix}m{}", -k)
    } else {
        format!("{prefix}{k}")
    }
}

/// The window `[lo, hi]` of the stepping line: one edge `line` with a stop at every integer.
pub fn c_line_window(lo: i64, hi: i64) -> Result<SpaceExpr> {
    if hi <= lo {
        return Err(Error::Invalid(format!("empty window [{lo}, {hi}]")));
    }
    let n = u32::try_from(hi - lo).map_err(|_| Error::Invalid("window too wide".into()))?;
    Ok(GraphPresentation::new()
        .edge("line", &level_name("x", lo), &level_name("x", hi), EdgeKind::NStop(n))
        .into_expr())
}

/// The point with coordinate `x` in `c_line_window(lo, hi)`.
pub fn line_point(lo: i64, hi: i64, x: Rat) -> Point {
    Point::on("line", (x - Rat::int(lo)) / Rat::int(hi - lo))
}

/// `[0, 3]`: directed, then a jump over `[1, 2]`, then directed.
pub fn window_2_3e() -> SpaceExpr {
    GraphPresentation::new()
        .edge("e0", "v0", "v1", EdgeKind::Directed)
        .edge("e1", "v1", "v2", EdgeKind::OneJump)
        .edge("e2", "v2", "v3", EdgeKind::Directed)
        .into_expr()
}

pub fn d_circle() -> SpaceExpr {
    SpaceExpr::quotient(d_interval(), vec![vec![Point::v("v0"), Point::v("v1")]])
}

/// One-jump interval with its endpoints identified; the base point is `v0`.
pub fn c_circle() -> SpaceExpr {
    SpaceExpr::quotient(c_interval(), vec![vec![Point::v("v0"), Point::v("v1")]])
}

pub fn n_stop_circle(n: u32) -> Result<SpaceExpr> {
    if n == 0 {
        return Err(Error::Invalid("n_stop_circle needs n >= 1".into()));
    }
    Ok(SpaceExpr::quotient(single(EdgeKind::NStop(n)), vec![vec![Point::v("v0"), Point::v("v1")]]))
}

pub fn c_square() -> SpaceExpr {
    SpaceExpr::product(c_interval(), c_interval())
}

pub fn hybrid_square() -> SpaceExpr {
    SpaceExpr::product(c_interval(), d_interval())
}

/// Square generated by its two diagonals, which cross at the centre `m`.
///
/// Corners: `p00` (the corner called p' in the tests), `p10` (p''), `p01`, `p11`. The
/// diagonals run `p00 -> m -> p11` and `p01 -> m -> p10`.
pub fn crossing_square() -> SpaceExpr {
    let full = |e: &str| Segment::new(e, Rat::ZERO, Rat::ONE);
    GraphPresentation::new()
        .edge("d1a", "p00", "m", EdgeKind::DiscreteC)
        .edge("d1b", "m", "p11", EdgeKind::DiscreteC)
        .edge("d2a", "p01", "m", EdgeKind::DiscreteC)
        .edge("d2b", "m", "p10", EdgeKind::DiscreteC)
        .generator(RigidTrace::new(vec![full("d1a"), full("d1b")]))
        .generator(RigidTrace::new(vec![full("d2a"), full("d2b")]))
        .into_expr()
}

/// `n`-fold power of the one-jump circle, nested to the left.
pub fn c_torus(n: u32) -> Result<SpaceExpr> {
    if n == 0 {
        return Err(Error::Invalid("c_torus needs n >= 1".into()));
    }
    let mut t = c_circle();
    for _ in 1..n {
        t = SpaceExpr::product(t, c_circle());
    }
    Ok(t)
}

/// Thresholds of a reacting controller.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hysteron {
    pub t1: Rat,
    pub t0: Rat,
    pub t2: Rat,
    /// Right end of the truncated upper branch.
    pub w: Rat,
}

impl Hysteron {
    pub fn new(t1: Rat, t0: Rat, t2: Rat) -> Result<Hysteron> {
        Hysteron::with_window(t1, t0, t2, t2 + (t2 - t1))
    }

    pub fn with_window(t1: Rat, t0: Rat, t2: Rat, w: Rat) -> Result<Hysteron> {
        if !(Rat::ZERO < t1 && t1 <= t0 && t0 <= t2 && t1 < t2 && t2 < w) {
            return Err(Error::Invalid(format!("hysteron needs 0 < T1 <= T0 <= T2 < W, got {t1}, {t0}, {t2}, {w}")));
        }
        Ok(Hysteron { t1, t0, t2, w })
    }

    /// Lower branch `[0, T2]` (off), upper branch `[T1, W]` (on), jump up at T2, down at T1.
    pub fn presentation(&self) -> GraphPresentation {
        GraphPresentation::new()
            .edge("x0a", "off0", "offT1", EdgeKind::Natural)
            .edge("x0b", "offT1", "offT2", EdgeKind::Natural)
            .edge("x1a", "onT1", "onT2", EdgeKind::Natural)
            .edge("x1b", "onT2", "onW", EdgeKind::Natural)
            .edge("up", "offT2", "onT2", EdgeKind::OneJump)
            .edge("down", "onT1", "offT1", EdgeKind::OneJump)
    }

    pub fn space(&self) -> SpaceExpr {
        self.presentation().into_expr()
    }

    /// The point at temperature `x` on level 0 (off) or 1 (on).
    pub fn point(&self, level: u8, x: Rat) -> Result<Point> {
        let pieces: [(&str, Rat, Rat); 2] = match level {
            0 => [("x0a", Rat::ZERO, self.t1), ("x0b", self.t1, self.t2)],
            1 => [("x1a", self.t1, self.t2), ("x1b", self.t2, self.w)],
            _ => return Err(Error::Invalid(format!("hysteron level {level}"))),
        };
        for (e, a, b) in pieces {
            if a <= x && x <= b {
                return Ok(Point::on(e, (x - a) / (b - a)));
            }
        }
        Err(Error::OutsideSupport(format!("temperature {x} on level {level}")))
    }
}

pub fn hysteron(t1: Rat, t0: Rat, t2: Rat) -> Result<SpaceExpr> {
    Ok(Hysteron::new(t1, t0, t2)?.space())
}

/// Heating below, cooling above; tolerance intervals `[T1, T1']` and `[T2', T2]`.
pub fn dual_controller(t1: Rat, t1p: Rat, t2p: Rat, t2: Rat) -> Result<SpaceExpr> {
    if !(t1 < t1p && t1p < t2p && t2p < t2) {
        return Err(Error::Invalid(format!(
            "dual controller needs disjoint tolerance intervals T1 < T1' < T2' < T2, got {t1}, {t1p}, {t2p}, {t2}"
        )));
    }
    Ok(GraphPresentation::new()
        .edge("h_a", "hL", "hT1", EdgeKind::Natural)
        .edge("h_b", "hT1", "hT1p", EdgeKind::Natural)
        .edge("o_a", "oT1", "oT1p", EdgeKind::Natural)
        .edge("o_b", "oT1p", "oT2p", EdgeKind::Natural)
        .edge("o_c", "oT2p", "oT2", EdgeKind::Natural)
        .edge("c_a", "cT2p", "cT2", EdgeKind::Natural)
        .edge("c_b", "cT2", "cR", EdgeKind::Natural)
        .edge("heat_on", "oT1", "hT1", EdgeKind::OneJump)
        .edge("heat_off", "hT1p", "oT1p", EdgeKind::OneJump)
        .edge("cool_on", "oT2", "cT2", EdgeKind::OneJump)
        .edge("cool_off", "cT2p", "oT2p", EdgeKind::OneJump)
        .into_expr())
}

/// Two independent reacting controllers.
pub fn two_controller(x1: Rat, x2: Rat, y1: Rat, y2: Rat) -> Result<SpaceExpr> {
    let x = Hysteron::new(x1, x1, x2)?;
    let y = Hysteron::new(y1, y1, y2)?;
    Ok(SpaceExpr::product(x.space(), y.space()))
}

/// Display level `s + 2t` of a point of the two-controller product.
pub fn two_controller_level(p: &Point) -> Option<i64> {
    let level = |p: &Point| -> Option<i64> {
        match p {
            Point::Vertex(v) if v.starts_with("off") => Some(0),
            Point::Vertex(v) if v.starts_with("on") => Some(1),
            Point::EdgePoint(e, _) if e.starts_with("x0") => Some(0),
            Point::EdgePoint(e, _) if e.starts_with("x1") => Some(1),
            _ => None,
        }
    };
    match p {
        Point::Tuple(ps) if ps.len() == 2 => Some(level(&ps[0])? + 2 * level(&ps[1])?),
        _ => None,
    }
}

/// A road `0 - 1 = 2 - 3` whose middle section has one carriageway each way.
pub fn dual_carriageway() -> SpaceExpr {
    let x1 = GraphPresentation::new().edge("x1", "v0", "v1", EdgeKind::Natural).into_expr();
    let x2 = GraphPresentation::new().edge("x2", "v1b", "v2", EdgeKind::Directed).into_expr();
    let x3 = GraphPresentation::new().edge("x3", "v2c", "v1c", EdgeKind::Directed).into_expr();
    let x4 = GraphPresentation::new().edge("x4", "v2d", "v3", EdgeKind::Natural).into_expr();
    let sum = SpaceExpr::sum(SpaceExpr::sum(x1, x2), SpaceExpr::sum(x3, x4));
    SpaceExpr::quotient(
        sum,
        vec![
            vec![Point::v("v1"), Point::v("v1b"), Point::v("v1c")],
            vec![Point::v("v2"), Point::v("v2c"), Point::v("v2d")],
        ],
    )
}

/// Builds a named model. Rational parameters accept `p/q`, integers and decimals.
pub fn build(name: &str, params: &Params) -> Result<SpaceExpr> {
    let known: &[&str] = match name {
        "c_line_window" => &["lo", "hi"],
        "n_stop_circle" | "c_torus" => &["n"],
        "hysteron" => &["t1", "t0", "t2", "w"],
        "dual_controller" => &["t1", "t1p", "t2p", "t2"],
        "two_controller" => &["x1", "x2", "y1", "y2"],
        _ => &[],
    };
    for k in params.keys() {
        if !known.contains(&k.as_str()) {
            return Err(Error::Invalid(format!("model {name} has no parameter {k}")));
        }
    }
    let r = |k: &str, d: i64| rat_param(params, k, Rat::int(d));
    let small = |k: &str, d: i64| -> Result<u32> {
        u32::try_from(int_param(params, k, d)?).map_err(|_| Error::Invalid(format!("parameter {k} must be >= 0")))
    };
    match name {
        "natural_interval" => Ok(natural_interval()),
        "d_interval" => Ok(d_interval()),
        "c_interval" => Ok(c_interval()),
        "two_jump" => Ok(two_jump()),
        "delayed_minus" => Ok(delayed_minus()),
        "delayed_plus" => Ok(delayed_plus()),
        "reversible_one_jump" => Ok(reversible_one_jump()),
        "c_line_window" => c_line_window(int_param(params, "lo", -1)?, int_param(params, "hi", 3)?),
        "window_2_3e" => Ok(window_2_3e()),
        "d_circle" => Ok(d_circle()),
        "c_circle" => Ok(c_circle()),
        "n_stop_circle" => n_stop_circle(small("n", 3)?),
        "c_square" => Ok(c_square()),
        "hybrid_square" => Ok(hybrid_square()),
        "crossing_square" => Ok(crossing_square()),
        "c_torus" => c_torus(small("n", 2)?),
        "hysteron" => {
            let (t1, t0, t2) = (r("t1", 1)?, r("t0", 2)?, r("t2", 3)?);
            let w = rat_param(params, "w", t2 + (t2 - t1))?;
            Ok(Hysteron::with_window(t1, t0, t2, w)?.space())
        }
        "dual_controller" => dual_controller(r("t1", 1)?, r("t1p", 2)?, r("t2p", 3)?, r("t2", 4)?),
        "two_controller" => two_controller(r("x1", 1)?, r("x2", 2)?, r("y1", 1)?, r("y2", 2)?),
        "siphon" => Ok(siphon()),
        "siphon_osc" => Ok(siphon_osc()),
        "dual_carriageway" => Ok(dual_carriageway()),
        other => Err(Error::Unknown(format!("model {other}"))),
    }
}
