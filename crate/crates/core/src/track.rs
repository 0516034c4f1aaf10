//! Raw tracks: timed breakpoints joined by linear motion.

use crate::carrier::{Carrier, NormGraph};
use crate::error::{Error, Result};
use crate::path::{CanonicalPath, Step, Token};
use crate::rat::Rat;
use crate::space::{Point, Segment};

/// Breakpoints `(time, point)`. An endpoint parameter written as `edge@0` or `edge@1` pins the
/// vertex to that edge, which is how loops and parallel edges are told apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Track {
    pub breakpoints: Vec<(Rat, Point)>,
}

impl Track {
    pub fn new(breakpoints: Vec<(Rat, Point)>) -> Track {
        Track { breakpoints }
    }

    /// Breakpoints at times `0, 1, 2, ...`.
    pub fn through(points: Vec<Point>) -> Track {
        Track { breakpoints: points.into_iter().enumerate().map(|(i, p)| (Rat::int(i as i64), p)).collect() }
    }

    pub fn project(&self, i: usize) -> Result<Track> {
        let mut out = Vec::with_capacity(self.breakpoints.len());
        for (t, p) in &self.breakpoints {
            match p.unclassed() {
                Point::Tuple(ps) if i < ps.len() => out.push((*t, ps[i].clone())),
                Point::Tuple(_) => return Err(Error::Invalid(format!("factor index {i} out of range"))),
                _ => return Err(Error::Precondition("projection needs a product track".into())),
            }
        }
        Ok(Track { breakpoints: out })
    }

    /// Retimes the breakpoints by an increasing map.
    pub fn retimed(&self, f: impl Fn(Rat) -> Rat) -> Track {
        Track { breakpoints: self.breakpoints.iter().map(|(t, p)| (f(*t), p.clone())).collect() }
    }
}

/// Candidate `(edge, t)` positions for a raw point: `pinned` keeps only what the point spells out.
fn raw_positions(g: &NormGraph, p: &Point, pinned: bool) -> Result<Vec<(String, Rat)>> {
    match p.unclassed() {
        Point::EdgePoint(e, t) => {
            if !g.has_edge(e) || !t.in_unit() {
                return Err(Error::PathOutsideSupport(format!("{p} is not on the carrier")));
            }
            if pinned || t.is_interior() {
                Ok(vec![(e.clone(), *t)])
            } else {
                Ok(g.positions(&g.normalize_point(p)?))
            }
        }
        Point::Vertex(_) => {
            let n = g.normalize_point(p).map_err(|e| Error::PathOutsideSupport(e.to_string()))?;
            Ok(g.positions(&n))
        }
        _ => Err(Error::PathOutsideSupport(format!("{p} is not a graph point"))),
    }
}

fn is_pin(p: &Point) -> Option<(&str, Rat)> {
    match p.unclassed() {
        Point::EdgePoint(e, t) => Some((e, *t)),
        _ => None,
    }
}

fn graph_motion(g: &NormGraph, p: &Point, q: &Point) -> Result<Option<Segment>> {
    let np = g.normalize_point(p).map_err(|e| Error::PathOutsideSupport(e.to_string()))?;
    let nq = g.normalize_point(q).map_err(|e| Error::PathOutsideSupport(e.to_string()))?;
    let loop_pins = match (is_pin(p), is_pin(q)) {
        (Some((e1, t1)), Some((e2, t2))) => e1 == e2 && t1 != t2,
        _ => false,
    };
    if np == nq && !loop_pins {
        return Ok(None);
    }
    for (pin_p, pin_q) in [(true, true), (true, false), (false, true), (false, false)] {
        let ps = raw_positions(g, p, pin_p)?;
        let qs = raw_positions(g, q, pin_q)?;
        let mut cands = Vec::new();
        for (e1, t1) in &ps {
            for (e2, t2) in &qs {
                if e1 == e2 && t1 != t2 {
                    cands.push(Segment::new(e1, *t1, *t2));
                }
            }
        }
        cands.sort();
        cands.dedup();
        match cands.len() {
            0 => continue,
            1 => return Ok(cands.pop()),
            _ => {
                return Err(Error::Invalid(format!(
                    "motion from {p} to {q} is ambiguous; pin the edge with EDGE@0 or EDGE@1"
                )))
            }
        }
    }
    Err(Error::PathOutsideSupport(format!("no edge joins {p} and {q}")))
}

/// Motion between two consecutive breakpoints; `None` when nothing moves.
pub fn motion(carrier: &Carrier, p: &Point, q: &Point) -> Result<Option<Step>> {
    match carrier {
        Carrier::Graph(g) => Ok(graph_motion(g, p, q)?.map(Step::Edge)),
        Carrier::Product(a, b) => {
            let (Point::Tuple(ps), Point::Tuple(qs)) = (p.unclassed(), q.unclassed()) else {
                return Err(Error::PathOutsideSupport(format!("{p} -> {q} is not a motion of pairs")));
            };
            if ps.len() != 2 || qs.len() != 2 {
                return Err(Error::PathOutsideSupport(format!("{p} -> {q}: wrong tuple arity")));
            }
            let m0 = motion(a, &ps[0], &qs[0])?;
            let m1 = motion(b, &ps[1], &qs[1])?;
            if m0.is_none() && m1.is_none() {
                Ok(None)
            } else {
                Ok(Some(Step::Tuple(vec![m0, m1])))
            }
        }
    }
}

/// Canonical form of a track.
pub fn canonicalize(track: &Track, carrier: &Carrier) -> Result<CanonicalPath> {
    let bps = &track.breakpoints;
    let Some((_, first)) = bps.first() else {
        return Err(Error::Invalid("empty track".into()));
    };
    for w in bps.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::NonMonotone(format!("breakpoint times {} then {}", w[0].0, w[1].0)));
        }
    }
    let mut tokens = Vec::new();
    for w in bps.windows(2) {
        tokens.push(match motion(carrier, &w[0].1, &w[1].1)? {
            Some(s) => Token::Move(s),
            None => Token::Pause,
        });
    }
    CanonicalPath::build(carrier, first, tokens)
}

fn start_pin(step: &Step, prev: &Point) -> Point {
    match (step, prev) {
        (Step::Edge(s), _) => Point::EdgePoint(s.edge.clone(), s.from),
        (Step::Tuple(cs), Point::Tuple(ps)) => Point::Tuple(
            cs.iter().zip(ps).map(|(c, p)| c.as_ref().map_or_else(|| p.clone(), |s| start_pin(s, p))).collect(),
        ),
        _ => prev.clone(),
    }
}

fn end_pin(step: &Step, prev: &Point) -> Point {
    match (step, prev) {
        (Step::Edge(s), _) => Point::EdgePoint(s.edge.clone(), s.to),
        (Step::Tuple(cs), Point::Tuple(ps)) => Point::Tuple(
            cs.iter().zip(ps).map(|(c, p)| c.as_ref().map_or_else(|| p.clone(), |s| end_pin(s, p))).collect(),
        ),
        _ => prev.clone(),
    }
}

/// A track realizing the path, one time unit per token, with edge-pinned breakpoints.
///
/// Some junctions on loops cannot be written with single-point breakpoints (arriving through
/// one end and leaving through the other); such paths are rejected as unsupported.
pub fn to_track(path: &CanonicalPath, carrier: &Carrier) -> Result<Track> {
    let mut pts = vec![path.start.clone()];
    let mut prev_motion: Option<Option<Step>> = None;
    for t in path.tokens() {
        let last = pts.last().unwrap().clone();
        match t {
            Token::Pause => {
                pts.push(last);
                prev_motion = Some(None);
            }
            Token::Move(s) => {
                let keep_end = end_pin(&s, &last);
                if motion(carrier, &last, &keep_end).ok().flatten().as_ref() == Some(&s) {
                    pts.push(keep_end);
                } else {
                    let pin = start_pin(&s, &last);
                    let end = end_pin(&s, &pin);
                    let n = pts.len();
                    let before_ok = match (&prev_motion, n) {
                        (Some(pm), n) if n >= 2 => motion(carrier, &pts[n - 2], &pin).ok().as_ref() == Some(pm),
                        _ => true,
                    };
                    let own_ok = motion(carrier, &pin, &end).ok().flatten().as_ref() == Some(&s);
                    if !(before_ok && own_ok) {
                        return Err(Error::Unsupported(format!("junction at {last} cannot be written as a track")));
                    }
                    pts[n - 1] = pin;
                    pts.push(end);
                }
                prev_motion = Some(Some(s));
            }
        }
    }
    Ok(Track::through(pts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::normalize_graph;
    use crate::kind::EdgeKind;
    use crate::path::Item;
    use crate::space::{GraphPresentation, SpaceExpr};
    use std::sync::Arc;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn interval() -> Carrier {
        let g = GraphPresentation::new().edge("e", "a", "b", EdgeKind::OneJump).into_expr();
        Carrier::of(&g).unwrap()
    }

    #[test]
    fn two_steps_merge_into_one_run() {
        let c = interval();
        let t = Track::through(vec![Point::v("a"), Point::on("e", r(1, 2)), Point::v("b")]);
        let p = canonicalize(&t, &c).unwrap();
        assert_eq!(p.items, vec![Item::Run(vec![Step::seg("e", Rat::ZERO, Rat::ONE)])]);
        assert_eq!(p.end, Point::v("b"));
    }

    #[test]
    fn dwell_becomes_pause() {
        let c = interval();
        let t = Track::new(vec![
            (Rat::ZERO, Point::v("a")),
            (r(1, 4), Point::on("e", r(1, 2))),
            (r(1, 2), Point::on("e", r(1, 2))),
            (Rat::ONE, Point::v("b")),
        ]);
        let p = canonicalize(&t, &c).unwrap();
        assert_eq!(
            p.items,
            vec![
                Item::Run(vec![Step::seg("e", Rat::ZERO, r(1, 2))]),
                Item::Pause,
                Item::Run(vec![Step::seg("e", r(1, 2), Rat::ONE)]),
            ]
        );
    }

    #[test]
    fn constant_track_is_trivial() {
        let c = interval();
        let t = Track::through(vec![Point::v("a"), Point::v("a")]);
        assert!(canonicalize(&t, &c).unwrap().is_trivial());
    }

    #[test]
    fn times_must_increase() {
        let c = interval();
        let t = Track::new(vec![(Rat::ONE, Point::v("a")), (Rat::ONE, Point::v("b"))]);
        assert!(matches!(canonicalize(&t, &c), Err(Error::NonMonotone(_))));
    }

    #[test]
    fn loops_need_pins() {
        let q = SpaceExpr::quotient(
            GraphPresentation::new().edge("e", "a", "b", EdgeKind::OneJump).into_expr(),
            vec![vec![Point::v("a"), Point::v("b")]],
        );
        let c = Carrier::Graph(Arc::new(normalize_graph(&q).unwrap()));
        let t = Track::through(vec![Point::on("e", Rat::ZERO), Point::on("e", Rat::ONE)]);
        let p = canonicalize(&t, &c).unwrap();
        assert_eq!(p.steps().count(), 1);
        assert_eq!(p.start, p.end);
        let back = canonicalize(&to_track(&p, &c).unwrap(), &c).unwrap();
        assert_eq!(back, p);
        let unpinned = Track::through(vec![Point::v("a"), Point::on("e", r(1, 2))]);
        assert!(canonicalize(&unpinned, &c).is_err());
    }

    #[test]
    fn product_projection_of_constant_coordinate() {
        let c = Carrier::Product(Box::new(interval()), Box::new(interval()));
        let t = Track::through(vec![
            Point::pair(Point::v("a"), Point::v("a")),
            Point::pair(Point::v("b"), Point::v("a")),
        ]);
        let p = canonicalize(&t, &c).unwrap();
        let second = p.project(1).unwrap();
        assert!(second.is_trivial());
        assert_eq!(second.start, Point::v("a"));
    }
}
