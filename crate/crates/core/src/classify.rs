//! Flexible, critical and rigid points and paths.

use serde::Serialize;

use crate::carrier::{normalize_graph, Carrier};
use crate::cells::{cut_tree, positions, refine_tokens, CutTree};
use crate::error::{Error, Result};
use crate::kind::EdgeKind;
use crate::membership::{GraphEngine, Space};
use crate::path::{portion_of_tokens, CanonicalPath, Step, Token};
use crate::rat::Rat;
use crate::reach::{split_product, Abstraction};
use crate::space::{Point, SpaceExpr};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PointClassification {
    pub flexible: bool,
    pub critical: bool,
    pub future_critical: bool,
    pub past_critical: bool,
    pub has_path_through: bool,
    pub has_path_starting: bool,
    pub has_path_ending: bool,
    pub has_flexible_through: bool,
    pub has_flexible_starting: bool,
    pub has_flexible_ending: bool,
}

impl PointClassification {
    fn finish(mut self) -> PointClassification {
        self.critical = self.has_path_through && !self.has_flexible_through;
        self.future_critical = self.has_path_starting && !self.has_flexible_starting;
        self.past_critical = self.has_path_ending && !self.has_flexible_ending;
        self
    }
}

fn require_controlled(space: &Space, p: &CanonicalPath) -> Result<()> {
    if !space.is_controlled(p)? {
        return Err(Error::Precondition(format!("path {p} is not controlled")));
    }
    Ok(())
}

fn refined(space: &Space, p: &CanonicalPath) -> Result<Vec<Token>> {
    let tree = cut_tree(space, &[p], &[])?;
    Ok(refine_tokens(&p.tokens(), &tree))
}

/// Every portion of the path is controlled.
pub fn is_flexible_path(space: &Space, p: &CanonicalPath) -> Result<bool> {
    require_controlled(space, p)?;
    flexible_unchecked(space, p)
}

fn flexible_unchecked(space: &Space, p: &CanonicalPath) -> Result<bool> {
    if let Some((a, b)) = split_product(&space.expr) {
        return Ok(flexible_unchecked(&Space::new(a)?, &p.project(0)?)?
            && flexible_unchecked(&Space::new(b)?, &p.project(1)?)?);
    }
    let tokens = refined(space, p)?;
    let mut pos = positions(tokens.len());
    for k in 0..tokens.len() {
        let k0 = Rat::int(k as i64);
        pos.push(k0 + Rat::new(1, 3));
        pos.push(k0 + Rat::new(2, 3));
    }
    pos.sort();
    for (i, &u) in pos.iter().enumerate() {
        for &v in &pos[i..] {
            let part = portion_of_tokens(&space.carrier, &p.start, &tokens, u, v)?;
            if !space.is_controlled(&part)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Both portions at the token-time position `cut` are controlled.
pub fn is_splittable(space: &Space, p: &CanonicalPath, cut: Rat) -> Result<bool> {
    require_controlled(space, p)?;
    let tokens = p.tokens();
    let n = Rat::int(tokens.len() as i64);
    if cut < Rat::ZERO || cut > n {
        return Err(Error::Precondition(format!("cut {cut} outside [0, {n}]")));
    }
    let a = portion_of_tokens(&space.carrier, &p.start, &tokens, Rat::ZERO, cut)?;
    let b = portion_of_tokens(&space.carrier, &p.start, &tokens, cut, n)?;
    Ok(space.is_controlled(&a)? && space.is_controlled(&b)?)
}

/// No interior cut splits the path into two nonconstant controlled portions.
pub fn is_rigid_path(space: &Space, p: &CanonicalPath) -> Result<bool> {
    require_controlled(space, p)?;
    if p.is_trivial() {
        return Err(Error::Precondition("rigidity of a constant path".into()));
    }
    let tokens = refined(space, p)?;
    let n = Rat::int(tokens.len() as i64);
    for u in positions(tokens.len()) {
        if u == Rat::ZERO || u == n {
            continue;
        }
        let a = portion_of_tokens(&space.carrier, &p.start, &tokens, Rat::ZERO, u)?;
        let b = portion_of_tokens(&space.carrier, &p.start, &tokens, u, n)?;
        if !a.is_trivial() && !b.is_trivial() && space.is_controlled(&a)? && space.is_controlled(&b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Graph presentations only: no flexible motion and every generator rigid.
pub fn is_rigid_space(expr: &SpaceExpr) -> Result<bool> {
    let g = match expr {
        SpaceExpr::Graph(_) | SpaceExpr::Sum(..) | SpaceExpr::Quotient { .. } => normalize_graph(expr)?,
        _ => return Err(Error::Precondition("rigidity is decided for graph presentations".into())),
    };
    let fragment_kind = |k: &EdgeKind| {
        matches!(k, EdgeKind::Natural | EdgeKind::Directed | EdgeKind::Siphon | EdgeKind::SiphonOsc)
    };
    if g.edges().iter().any(|e| fragment_kind(&e.kind)) || !g.pres.fragments.is_empty() {
        return Ok(false);
    }
    let space = Space::new(expr.clone())?;
    let engine = GraphEngine::from_expr(expr)?;
    let carrier = Carrier::Graph(engine.graph.clone());
    for r in &engine.rigid {
        let start = engine.graph.seg_start(&r.trace.steps[0])?;
        let tokens = r.trace.steps.iter().map(|s| Token::Move(Step::Edge(s.clone()))).collect::<Vec<_>>();
        let mut w = CanonicalPath::build(&carrier, &start, tokens)?;
        for i in r.trace.pause_indices().into_iter().rev() {
            w = w.with_pause_at(i);
        }
        if !space.is_controlled(&w)? || !is_rigid_path(&space, &w)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Short moves from and into `x`, one per adjacent cell.
fn tiny_moves(space: &Space, x: &Point) -> Result<(Vec<CanonicalPath>, Vec<CanonicalPath>)> {
    let Carrier::Graph(g) = &space.carrier else { unreachable!() };
    let CutTree::Graph(cuts) = cut_tree(space, &[], std::slice::from_ref(x))? else { unreachable!() };
    let (mut outs, mut ins) = (Vec::new(), Vec::new());
    for (e, t) in g.positions(x) {
        let Some(cs) = cuts.get(&e) else { continue };
        let next = cs.iter().find(|&&c| c > t);
        let prev = cs.iter().rev().find(|&&c| c < t);
        for n in next.into_iter().chain(prev) {
            let m = t.mid(*n);
            outs.push(CanonicalPath::build(&space.carrier, x, vec![Token::Move(Step::seg(&e, t, m))])?);
            let mp = g.point_at(&e, m)?;
            ins.push(CanonicalPath::build(&space.carrier, &mp, vec![Token::Move(Step::seg(&e, m, t))])?);
        }
    }
    Ok((outs, ins))
}

fn any_flexible(space: &Space, ps: &[CanonicalPath]) -> Result<bool> {
    for p in ps {
        if space.is_controlled(p)? && flexible_unchecked(space, p)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn classify_graph(space: &Space, x: &Point) -> Result<PointClassification> {
    let abs = Abstraction::new(space, std::slice::from_ref(x))?;
    let xi = abs.node(x)?;
    let free: Vec<usize> = (0..abs.nodes.len()).filter(|&i| !abs.banned(i)).collect();
    let can_start = abs.closure(&free, false);
    let can_finish = abs.closure(&free, true);
    let mut c = PointClassification { flexible: space.is_flexible_point(x)?, ..Default::default() };
    if !abs.banned(xi) {
        c.has_path_starting = abs.out_of(xi).iter().any(|&t| can_finish[abs.transitions[t].to]);
        c.has_path_ending = abs.into_node(xi).iter().any(|&t| can_start[abs.transitions[t].from]);
    }
    for (t, tr) in abs.transitions.iter().enumerate() {
        if can_start[tr.from] && can_finish[tr.to] && abs.touches(t, x)? {
            c.has_path_through = true;
            break;
        }
    }
    let (outs, ins) = tiny_moves(space, x)?;
    c.has_flexible_starting = any_flexible(space, &outs)?;
    c.has_flexible_ending = any_flexible(space, &ins)?;
    c.has_flexible_through = c.has_flexible_starting || c.has_flexible_ending;
    Ok(c)
}

fn combine(a: bool, fa: bool, b: bool, fb: bool) -> bool {
    (a || fa) && (b || fb) && (a || b)
}

fn raw_classify(space: &Space, x: &Point) -> Result<PointClassification> {
    let x = space.point(x)?;
    let Some((ea, eb)) = split_product(&space.expr) else {
        if !matches!(space.carrier, Carrier::Graph(_)) {
            return Err(Error::Unsupported("classification under a wrapper of a product".into()));
        }
        return classify_graph(space, &x);
    };
    let Point::Tuple(xs) = &x else { unreachable!() };
    let a = raw_classify(&Space::new(ea)?, &xs[0])?;
    let b = raw_classify(&Space::new(eb)?, &xs[1])?;
    let (fa, fb) = (a.flexible, b.flexible);
    Ok(PointClassification {
        flexible: fa && fb,
        has_path_through: combine(a.has_path_through, fa, b.has_path_through, fb),
        has_path_starting: combine(a.has_path_starting, fa, b.has_path_starting, fb),
        has_path_ending: combine(a.has_path_ending, fa, b.has_path_ending, fb),
        has_flexible_through: combine(a.has_flexible_through, fa, b.has_flexible_through, fb),
        has_flexible_starting: combine(a.has_flexible_starting, fa, b.has_flexible_starting, fb),
        has_flexible_ending: combine(a.has_flexible_ending, fa, b.has_flexible_ending, fb),
        ..Default::default()
    })
}

pub fn classify_point(space: &Space, x: &Point) -> Result<PointClassification> {
    Ok(raw_classify(space, x)?.finish())
}

/// Whether `x` is flexible or lies on some nonconstant controlled path.
pub fn is_covered(space: &Space, x: &Point) -> Result<bool> {
    let c = raw_classify(space, x)?;
    Ok(c.flexible || c.has_path_through)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn class(e: SpaceExpr, p: &str) -> PointClassification {
        let s = Space::new(e).unwrap();
        classify_point(&s, &p.parse().unwrap()).unwrap()
    }

    fn run(s: &Space, start: &str, steps: &[(&str, Rat, Rat)]) -> CanonicalPath {
        let tokens = steps.iter().map(|(e, a, b)| Token::Move(Step::seg(e, *a, *b))).collect();
        CanonicalPath::build(&s.carrier, &start.parse().unwrap(), tokens).unwrap()
    }

    #[test]
    fn interval_points() {
        let mid = class(corpus::c_interval(), "e0@1/2");
        assert!(mid.critical && !mid.flexible && !mid.future_critical && !mid.past_critical);
        let zero = class(corpus::c_interval(), "v0");
        assert!(zero.flexible && zero.future_critical && !zero.past_critical);
        let one = class(corpus::c_interval(), "v1");
        assert!(one.flexible && one.past_critical && !one.future_critical);
    }

    #[test]
    fn siphon_points() {
        let one = class(corpus::siphon(), "v1");
        assert!(one.future_critical && !one.critical && !one.past_critical);
        let zero = class(corpus::siphon(), "v0");
        assert!(zero.past_critical && !zero.critical && !zero.future_critical);
        let half = class(corpus::siphon(), "e0@1/2");
        assert!(!half.critical && !half.future_critical && !half.past_critical);
        let osc = class(corpus::siphon_osc(), "v1");
        assert!(osc.future_critical);
        let osc0 = class(corpus::siphon_osc(), "v0");
        assert!(!osc0.past_critical);
    }

    #[test]
    fn window_points() {
        assert!(class(corpus::window_2_3e(), "v1").future_critical);
        let inner = class(corpus::window_2_3e(), "e1@1/2");
        assert!(inner.critical && !inner.flexible);
        assert!(class(corpus::window_2_3e(), "v2").past_critical);
    }

    #[test]
    fn circle_points() {
        let base = class(corpus::c_circle(), "v0");
        assert!(base.flexible && base.future_critical && base.past_critical && base.critical);
        assert!(class(corpus::c_circle(), "e0@1/3").critical);
        assert!(is_rigid_space(&corpus::c_circle()).unwrap());
        assert!(is_rigid_space(&corpus::n_stop_circle(3).unwrap()).unwrap());
        assert!(!is_rigid_space(&corpus::siphon()).unwrap());
    }

    #[test]
    fn square_has_four_flexible_corners() {
        let s = Space::new(corpus::c_square()).unwrap();
        let mut n = 0;
        for a in ["v0", "e0@1/2", "v1"] {
            for b in ["v0", "e0@1/3", "v1"] {
                let p: Point = format!("({a};{b})").parse().unwrap();
                if classify_point(&s, &p).unwrap().flexible {
                    n += 1;
                }
            }
        }
        assert_eq!(n, 4);
    }

    #[test]
    fn paths() {
        let h = Rat::HALF;
        let d = Space::new(corpus::d_interval()).unwrap();
        assert!(is_flexible_path(&d, &run(&d, "e0@1/4", &[("e0", Rat::new(1, 4), Rat::new(3, 4))])).unwrap());
        assert!(!is_rigid_path(&d, &run(&d, "v0", &[("e0", Rat::ZERO, Rat::ONE)])).unwrap());
        let c = Space::new(corpus::c_interval()).unwrap();
        let full = run(&c, "v0", &[("e0", Rat::ZERO, Rat::ONE)]);
        assert!(!is_flexible_path(&c, &full).unwrap());
        assert!(is_rigid_path(&c, &full).unwrap());
        assert!(!is_splittable(&c, &full, h).unwrap());
        let sip = Space::new(corpus::siphon()).unwrap();
        assert!(is_flexible_path(&sip, &run(&sip, "e0@1/5", &[("e0", Rat::new(1, 5), Rat::new(9, 10))])).unwrap());
        let j = Space::new(corpus::two_jump()).unwrap();
        let both = run(&j, "v0", &[("e0", Rat::ZERO, Rat::ONE), ("e1", Rat::ZERO, Rat::ONE)]);
        assert!(is_splittable(&j, &both, Rat::ONE).unwrap());
        let w = Space::new(corpus::c_line_window(-1, 3).unwrap()).unwrap();
        let two = run(&w, "line@1/4", &[("line", Rat::new(1, 4), Rat::new(3, 4))]);
        assert!(!is_rigid_path(&w, &two).unwrap());
        let one = run(&w, "line@1/4", &[("line", Rat::new(1, 4), Rat::new(2, 4))]);
        assert!(is_rigid_path(&w, &one).unwrap());
        assert!(is_flexible_path(&c, &CanonicalPath::trivial(Point::on("e0", h))).is_err());
    }
}
