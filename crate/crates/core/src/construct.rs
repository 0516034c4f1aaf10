//! Space transformers: generated d-space, flexible part, discrete functors, reversal,
//! reshaping checks and affine maps.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::carrier::{normalize_graph, Carrier, NormGraph};
use crate::cells::{cut_tree, with_midpoints, CutTree, Params};
use crate::classify::is_covered;
use crate::error::{Error, Result};
use crate::kind::{kind_flexible_points, EdgeKind, FlexiblePoints, FragDir, Fragment};
use crate::membership::{GraphEngine, Space};
use crate::path::{portion_of_tokens, CanonicalPath, Step, Token};
use crate::rat::Rat;
use crate::reach::{split_product, Abstraction};
use crate::space::{Dir, EdgeFragment, GraphPresentation, Point, PredicateSpace, RegionPiece, Segment, SpaceExpr};

pub fn product(a: SpaceExpr, b: SpaceExpr) -> SpaceExpr {
    SpaceExpr::product(a, b)
}

pub fn sum(a: SpaceExpr, b: SpaceExpr) -> Result<SpaceExpr> {
    let s = SpaceExpr::sum(a, b);
    normalize_graph(&s)?;
    Ok(s)
}

pub fn quotient(base: SpaceExpr, classes: Vec<Vec<Point>>) -> Result<SpaceExpr> {
    let q = SpaceExpr::quotient(base, classes);
    normalize_graph(&q)?;
    Ok(q)
}

pub fn subspace(base: SpaceExpr, region: Vec<RegionPiece>) -> Result<SpaceExpr> {
    let s = SpaceExpr::subspace(base, region);
    Space::new(s.clone())?;
    Ok(s)
}

pub fn opposite(base: SpaceExpr) -> SpaceExpr {
    match base {
        SpaceExpr::Opposite(inner) => *inner,
        other => SpaceExpr::opposite(other),
    }
}

pub fn exclude_endpoints(base: SpaceExpr, points: Vec<Point>) -> SpaceExpr {
    if points.is_empty() {
        return base;
    }
    SpaceExpr::exclude(base, points)
}

fn is_graph_like(e: &SpaceExpr) -> bool {
    matches!(e, SpaceExpr::Graph(_) | SpaceExpr::Sum(..) | SpaceExpr::Quotient { .. })
}

/// Applies a rewrite to every presentation below sums and quotients.
fn map_graphs(e: &SpaceExpr, f: &mut dyn FnMut(&GraphPresentation) -> Result<GraphPresentation>) -> Result<SpaceExpr> {
    Ok(match e {
        SpaceExpr::Graph(g) => SpaceExpr::Graph(f(g)?),
        SpaceExpr::Sum(a, b) => SpaceExpr::sum(map_graphs(a, f)?, map_graphs(b, f)?),
        SpaceExpr::Quotient { base, classes } => SpaceExpr::quotient(map_graphs(base, f)?, classes.clone()),
        other => return Err(Error::Unsupported(format!("{} inside a graph expression", other.op_name()))),
    })
}

fn isolated(g: &GraphPresentation) -> Vec<Point> {
    g.vertices
        .iter()
        .filter(|v| !g.edges.iter().any(|e| &e.from == *v || &e.to == *v))
        .map(|v| Point::Vertex(v.clone()))
        .collect()
}

fn step_fragment(s: &Segment) -> EdgeFragment {
    let dir = match s.dir() {
        Dir::Forward => FragDir::Forward,
        Dir::Backward => FragDir::Backward,
    };
    EdgeFragment { edge: s.edge.clone(), fragment: Fragment::closed(dir, s.lo(), s.hi()) }
}

fn hat_graph(g: &GraphPresentation) -> Result<GraphPresentation> {
    let mut out = g.clone();
    for e in &mut out.edges {
        e.kind = e.kind.hat();
    }
    for t in &g.generators {
        out.fragments.extend(t.steps.iter().map(step_fragment));
    }
    out.generators.clear();
    out.excluded.clear();
    out.flexible.extend(isolated(g));
    Ok(out)
}

fn is_d_presentation(e: &SpaceExpr) -> Result<bool> {
    if !is_graph_like(e) {
        return Ok(false);
    }
    let g = normalize_graph(e)?;
    Ok(g.edges().iter().all(|e| e.kind.is_directed_space_kind())
        && g.pres.generators.is_empty()
        && g.pres.excluded.is_empty())
}

fn all_covered(space: &Space) -> Result<bool> {
    if let Some((a, b)) = split_product(&space.expr) {
        return Ok(all_covered(&Space::new(a)?)? && all_covered(&Space::new(b)?)?);
    }
    let abs = Abstraction::new(space, &[])?;
    for p in &abs.nodes {
        if !is_covered(space, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The generated d-space.
pub fn hat(e: &SpaceExpr) -> Result<SpaceExpr> {
    match e {
        SpaceExpr::Graph(_) | SpaceExpr::Sum(..) | SpaceExpr::Quotient { .. } => map_graphs(e, &mut hat_graph),
        SpaceExpr::Opposite(b) => Ok(SpaceExpr::opposite(hat(b)?)),
        SpaceExpr::Product(a, b) => {
            for f in [a, b] {
                if !all_covered(&Space::new((**f).clone())?)? {
                    return Err(Error::Unsupported(
                        "generated d-space of a product with a factor point on no controlled path".into(),
                    ));
                }
            }
            Ok(SpaceExpr::product(hat(a)?, hat(b)?))
        }
        SpaceExpr::Subspace { base, region } => {
            if !is_graph_like(base) {
                return Err(Error::Unsupported("generated d-space of a subspace of a non-graph expression".into()));
            }
            let space = Space::new(e.clone())?;
            let Some(g) = space.carrier.graph() else { unreachable!() };
            let engine = GraphEngine::new(Arc::new(g.clone()))?;
            let crate::membership::Node::Subspace { region: reg, .. } = &space.node else { unreachable!() };
            let mut pres = g.pres.clone();
            for edge in &mut pres.edges {
                edge.kind = EdgeKind::Still;
            }
            pres.generators.clear();
            pres.excluded.clear();
            pres.flexible.clear();
            pres.fragments = engine
                .fragments
                .iter()
                .map(|f| EdgeFragment { edge: f.edge.clone(), fragment: f.fragment.clone() })
                .collect();
            let carrier = Carrier::Graph(engine.graph.clone());
            for r in &engine.rigid {
                let start = g.seg_start(&r.trace.steps[0])?;
                let tokens = r.trace.steps.iter().map(|s| Token::Move(Step::Edge(s.clone()))).collect();
                let w = CanonicalPath::build(&carrier, &start, tokens)?;
                if reg.contains_path(g, &w) {
                    pres.fragments.extend(r.trace.steps.iter().map(step_fragment));
                }
            }
            Ok(SpaceExpr::subspace(SpaceExpr::Graph(pres), region.clone()))
        }
        SpaceExpr::ExcludeEndpoints { base, .. } => hat(base),
        SpaceExpr::Predicate(p) => {
            if is_d_presentation(&p.base)? {
                Ok(e.clone())
            } else {
                Err(Error::Unsupported("generated d-space of a predicate over a non-d-space".into()))
            }
        }
        SpaceExpr::Meet(..) => Err(Error::Unsupported("generated d-space of a meet".into())),
    }
}

fn param_point(g: &GraphPresentation, edge: &str, t: Rat) -> Result<Point> {
    let e = g.find_edge(edge).ok_or_else(|| Error::Unknown(format!("edge {edge}")))?;
    Ok(if t == Rat::ZERO {
        Point::Vertex(e.from.clone())
    } else if t == Rat::ONE {
        Point::Vertex(e.to.clone())
    } else {
        Point::EdgePoint(edge.to_string(), t)
    })
}

fn with_predicate(inner: SpaceExpr, absorbing: Vec<Point>, avoid: Vec<Point>) -> SpaceExpr {
    if absorbing.is_empty() && avoid.is_empty() {
        return inner;
    }
    match inner {
        SpaceExpr::Predicate(mut p) => {
            p.absorbing.extend(absorbing);
            p.avoid.extend(avoid);
            SpaceExpr::Predicate(p)
        }
        other => SpaceExpr::Predicate(PredicateSpace { base: Box::new(other), absorbing, avoid }),
    }
}

/// The flexible part: the same carrier with only the flexible paths controlled.
pub fn flexible_part(e: &SpaceExpr) -> Result<SpaceExpr> {
    match e {
        SpaceExpr::Graph(_) | SpaceExpr::Sum(..) | SpaceExpr::Quotient { .. } => {
            let mut absorbing = Vec::new();
            let mut avoid = Vec::new();
            let inner = map_graphs(e, &mut |g| {
                let mut out = g.clone();
                for edge in &mut out.edges {
                    let k = edge.kind.flexible();
                    if k == EdgeKind::DiscreteC {
                        if let FlexiblePoints::Finite(ts) = kind_flexible_points(&edge.kind) {
                            for t in ts {
                                out.flexible.push(param_point(g, &edge.id, t)?);
                            }
                        }
                    }
                    if edge.kind == EdgeKind::SiphonOsc {
                        absorbing.push(Point::Vertex(edge.to.clone()));
                    }
                    edge.kind = k;
                }
                for t in &g.generators {
                    let (a, b) = (&t.steps[0], t.steps.last().unwrap());
                    out.flexible.push(param_point(g, &a.edge, a.from)?);
                    out.flexible.push(param_point(g, &b.edge, b.to)?);
                }
                out.generators.clear();
                avoid.extend(out.excluded.drain(..));
                Ok(out)
            })?;
            Ok(with_predicate(inner, absorbing, avoid))
        }
        SpaceExpr::Product(a, b) => Ok(SpaceExpr::product(flexible_part(a)?, flexible_part(b)?)),
        SpaceExpr::Opposite(b) => Ok(SpaceExpr::opposite(flexible_part(b)?)),
        SpaceExpr::Subspace { base, region } => Ok(SpaceExpr::subspace(flexible_part(base)?, region.clone())),
        SpaceExpr::ExcludeEndpoints { base, points } => Ok(with_predicate(flexible_part(base)?, vec![], points.clone())),
        SpaceExpr::Predicate(p) => Ok(with_predicate(flexible_part(&p.base)?, p.absorbing.clone(), p.avoid.clone())),
        SpaceExpr::Meet(a, b) => Ok(SpaceExpr::meet(flexible_part(a)?, flexible_part(b)?)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Functor {
    /// Only trivial loops.
    D,
    /// Every path.
    DPrime,
    /// Nothing.
    Dc,
}

impl std::str::FromStr for Functor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Functor> {
        match s {
            "D" | "d" => Ok(Functor::D),
            "Dprime" | "dprime" | "D'" => Ok(Functor::DPrime),
            "Dc" | "dc" => Ok(Functor::Dc),
            _ => Err(Error::Parse(format!("unknown functor {s:?}"))),
        }
    }
}

/// Discrete, indiscrete and empty structures on the support of `e`.
pub fn functor(e: &SpaceExpr, which: Functor) -> Result<SpaceExpr> {
    match e {
        SpaceExpr::Graph(_) | SpaceExpr::Sum(..) | SpaceExpr::Quotient { .. } => map_graphs(e, &mut |g| {
            let mut out = GraphPresentation { vertices: g.vertices.clone(), edges: g.edges.clone(), ..Default::default() };
            for edge in &mut out.edges {
                edge.kind = match which {
                    Functor::D => EdgeKind::Still,
                    Functor::DPrime => EdgeKind::Natural,
                    Functor::Dc => EdgeKind::DiscreteC,
                };
            }
            if which != Functor::Dc {
                out.flexible = isolated(g);
            }
            Ok(out)
        }),
        SpaceExpr::Product(a, b) => Ok(SpaceExpr::product(functor(a, which)?, functor(b, which)?)),
        SpaceExpr::Opposite(b) => functor(b, which),
        SpaceExpr::Subspace { base, region } => Ok(SpaceExpr::subspace(functor(base, which)?, region.clone())),
        SpaceExpr::ExcludeEndpoints { base, .. } => functor(base, which),
        SpaceExpr::Predicate(p) => functor(&p.base, which),
        SpaceExpr::Meet(a, _) => functor(a, which),
    }
}

/// Adds the reverse of every generator.
pub fn reversible_closure(e: &SpaceExpr) -> Result<SpaceExpr> {
    match e {
        SpaceExpr::Graph(_) | SpaceExpr::Sum(..) | SpaceExpr::Quotient { .. } => map_graphs(e, &mut |g| {
            let engine = GraphEngine::new(Arc::new(NormGraph::from_presentation(g.clone())?))?;
            let mut out = g.clone();
            for r in &engine.rigid {
                let rev = r.trace.reversed();
                if !out.generators.contains(&rev) {
                    out.generators.push(rev);
                }
            }
            for f in &engine.fragments {
                let rev = EdgeFragment { edge: f.edge.clone(), fragment: f.fragment.reversed() };
                if !out.fragments.contains(&rev) {
                    out.fragments.push(rev);
                }
            }
            Ok(out)
        }),
        SpaceExpr::Opposite(b) => Ok(SpaceExpr::opposite(reversible_closure(b)?)),
        other => Err(Error::Unsupported(format!("reversible closure of a {}", other.op_name()))),
    }
}

/// Paths controlled together with their reverses.
pub fn reversible_part(e: &SpaceExpr) -> SpaceExpr {
    SpaceExpr::meet(e.clone(), SpaceExpr::opposite(e.clone()))
}

fn has_no_paths(space: &Space) -> Result<bool> {
    if let Some((a, b)) = split_product(&space.expr) {
        return Ok(has_no_paths(&Space::new(a)?)? || has_no_paths(&Space::new(b)?)?);
    }
    let abs = Abstraction::new(space, &[])?;
    for p in &abs.nodes {
        if space.is_flexible_point(p)? {
            return Ok(false);
        }
    }
    Ok(abs.transitions.is_empty())
}

fn graph_cuts(space: &Space) -> Result<crate::membership::Cuts> {
    match cut_tree(space, &[], &[])? {
        CutTree::Graph(c) => Ok(c),
        CutTree::Product(..) => Err(Error::Unsupported("graph cuts of a product".into())),
    }
}

/// Node candidates: the union of cut sets with cell midpoints and thirds.
fn representatives(g: &NormGraph, cut_sets: &[crate::membership::Cuts], extra: &Params) -> Result<Vec<Point>> {
    let mut params = Params::new();
    for cuts in cut_sets {
        for (e, ps) in cuts {
            params.entry(e.clone()).or_default().extend(ps.iter().copied());
        }
    }
    for (e, ps) in extra {
        params.entry(e.clone()).or_default().extend(ps.iter().copied());
    }
    let mut out = Vec::new();
    for (e, ps) in params {
        let sorted = with_midpoints(&ps);
        for w in sorted.windows(2) {
            let d = w[1] - w[0];
            out.push(g.point_at(&e, w[0] + d * Rat::new(1, 3))?);
            out.push(g.point_at(&e, w[0] + d * Rat::new(2, 3))?);
        }
        for t in sorted {
            out.push(g.point_at(&e, t)?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn mentions_exclusion(e: &SpaceExpr) -> bool {
    match e {
        SpaceExpr::ExcludeEndpoints { .. } | SpaceExpr::Meet(..) => true,
        SpaceExpr::Graph(g) => !g.excluded.is_empty(),
        SpaceExpr::Product(a, b) | SpaceExpr::Sum(a, b) => mentions_exclusion(a) || mentions_exclusion(b),
        SpaceExpr::Quotient { base, .. } | SpaceExpr::Subspace { base, .. } | SpaceExpr::Opposite(base) => {
            mentions_exclusion(base)
        }
        SpaceExpr::Predicate(p) => mentions_exclusion(&p.base),
    }
}

fn finer(s1: &Space, s2: &Space) -> Result<bool> {
    match (split_product(&s1.expr), split_product(&s2.expr)) {
        (Some((a, b)), Some((c, d))) => {
            let (a, b) = (Space::new(a)?, Space::new(b)?);
            if has_no_paths(&a)? || has_no_paths(&b)? {
                return Ok(true);
            }
            Ok(finer(&a, &Space::new(c)?)? && finer(&b, &Space::new(d)?)?)
        }
        (None, None) => {
            let Some(g) = s1.carrier.graph() else {
                return Err(Error::Unsupported("reshaping checks under wrappers of products".into()));
            };
            if mentions_exclusion(&s1.expr) || mentions_exclusion(&s2.expr) {
                return Err(Error::Unsupported("reshaping checks with excluded endpoints or meets".into()));
            }
            let extra = representatives(g, &[graph_cuts(s1)?, graph_cuts(s2)?], &Params::new())?;
            let abs = Abstraction::new(s1, &extra)?;
            for p in &abs.nodes {
                if s1.is_flexible_point(p)? && !s2.is_flexible_point(p)? {
                    return Ok(false);
                }
            }
            for t in &abs.transitions {
                if !s2.is_controlled(&t.witness)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Err(Error::Unsupported("reshaping checks under wrappers of products".into())),
    }
}

/// Whether every controlled path of `x1` is controlled in `x2` (same support).
pub fn is_finer(x1: &SpaceExpr, x2: &SpaceExpr) -> Result<bool> {
    let s1 = Space::new(x1.clone())?;
    let s2 = Space::new(x2.clone())?;
    if !s1.carrier.same_geometry(&s2.carrier) {
        return Err(Error::Invalid("the two structures have different supports".into()));
    }
    finer(&s1, &s2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeImage {
    /// Affine onto the steps, each taking an equal share of the edge.
    Trace(Vec<Step>),
    Point(Point),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CMap {
    Identity,
    Projection(usize),
    Graph { vertices: BTreeMap<String, Point>, edges: BTreeMap<String, EdgeImage> },
}

fn step_start(c: &Carrier, s: &Step) -> Result<Point> {
    match (c, s) {
        (Carrier::Graph(g), Step::Edge(seg)) => g.point_at(&seg.edge, seg.from),
        (Carrier::Product(a, b), Step::Tuple(xs)) if xs.len() == 2 => {
            let (Some(x), Some(y)) = (&xs[0], &xs[1]) else {
                return Err(Error::Invalid(format!("image step {s} leaves a coordinate unspecified")));
            };
            Ok(Point::Tuple(vec![step_start(a, x)?, step_start(b, y)?]))
        }
        _ => Err(Error::Invalid(format!("image step {s} does not fit the target"))),
    }
}

struct Affine<'a> {
    src: &'a NormGraph,
    dst: &'a Carrier,
    vertices: BTreeMap<String, Point>,
    edges: &'a BTreeMap<String, EdgeImage>,
}

impl Affine<'_> {
    fn new<'a>(
        src: &'a NormGraph,
        dst: &'a Carrier,
        vertices: &BTreeMap<String, Point>,
        edges: &'a BTreeMap<String, EdgeImage>,
    ) -> Result<Affine<'a>> {
        let mut vs = BTreeMap::new();
        for (v, p) in vertices {
            let rep = src.resolve_vertex(v).ok_or_else(|| Error::Unknown(format!("vertex {v}")))?.to_string();
            let img = dst.normalize_point(p)?;
            if let Some(prev) = vs.insert(rep.clone(), img.clone()) {
                if prev != img {
                    return Err(Error::Invalid(format!("vertex {rep} has two images {prev} and {img}")));
                }
            }
        }
        for v in src.vertices() {
            if !vs.contains_key(v) {
                return Err(Error::Invalid(format!("vertex {v} has no image")));
            }
        }
        let f = Affine { src, dst, vertices: vs, edges };
        for e in src.edges() {
            let img = edges.get(&e.id).ok_or_else(|| Error::Invalid(format!("edge {} has no image", e.id)))?;
            let (a, b) = (f.edge_point(&e.id, img, Rat::ZERO)?, f.edge_point(&e.id, img, Rat::ONE)?);
            if a != f.vertices[&e.from] || b != f.vertices[&e.to] {
                return Err(Error::Invalid(format!("the image of edge {} does not join the images of its ends", e.id)));
            }
        }
        Ok(f)
    }

    fn tokens(img: &EdgeImage) -> Vec<Token> {
        match img {
            EdgeImage::Trace(steps) => steps.iter().cloned().map(Token::Move).collect(),
            EdgeImage::Point(_) => vec![],
        }
    }

    fn trace_start(&self, edge: &str, img: &EdgeImage) -> Result<Point> {
        match img {
            EdgeImage::Trace(steps) => {
                let first = steps.first().ok_or_else(|| Error::Invalid(format!("edge {edge} maps to an empty trace")))?;
                step_start(self.dst, first)
            }
            EdgeImage::Point(p) => self.dst.normalize_point(p),
        }
    }

    fn edge_point(&self, edge: &str, img: &EdgeImage, t: Rat) -> Result<Point> {
        match img {
            EdgeImage::Point(p) => self.dst.normalize_point(p),
            EdgeImage::Trace(steps) => {
                let k = Rat::int(steps.len() as i64);
                let start = self.trace_start(edge, img)?;
                Ok(portion_of_tokens(self.dst, &start, &Self::tokens(img), t * k, t * k)?.start)
            }
        }
    }

    fn point(&self, p: &Point) -> Result<Point> {
        match self.src.normalize_point(p)? {
            Point::Vertex(v) => Ok(self.vertices[&v].clone()),
            Point::EdgePoint(e, t) => self.edge_point(&e, &self.edges[&e], t),
            other => Err(Error::Invalid(format!("{other} is not a graph point"))),
        }
    }

    fn segment(&self, s: &Segment) -> Result<Vec<Token>> {
        let img = &self.edges[&s.edge];
        let EdgeImage::Trace(steps) = img else { return Ok(vec![Token::Pause]) };
        let k = Rat::int(steps.len() as i64);
        let start = self.trace_start(&s.edge, img)?;
        let (u, v) = (s.lo() * k, s.hi() * k);
        let part = portion_of_tokens(self.dst, &start, &Self::tokens(img), u, v)?;
        let part = if s.dir() == Dir::Forward { part } else { part.reverse() };
        Ok(part.tokens())
    }

    fn path(&self, p: &CanonicalPath) -> Result<CanonicalPath> {
        let mut tokens = Vec::new();
        for t in p.tokens() {
            match t {
                Token::Pause => tokens.push(Token::Pause),
                Token::Move(Step::Edge(s)) => tokens.extend(self.segment(&s)?),
                Token::Move(_) => return Err(Error::Invalid("graph map applied to a product path".into())),
            }
        }
        CanonicalPath::build(self.dst, &self.point(&p.start)?, tokens)
    }

    /// Source parameters where the image crosses a cut of the target.
    fn pullback(&self, target: &CutTree) -> Params {
        let mut out = Params::new();
        for (e, img) in self.edges {
            let EdgeImage::Trace(steps) = img else { continue };
            let k = Rat::int(steps.len() as i64);
            for (i, s) in steps.iter().enumerate() {
                let i = Rat::int(i as i64);
                out.entry(e.clone()).or_default().insert(i / k);
                if let (Step::Edge(seg), CutTree::Graph(cuts)) = (s, target) {
                    for &c in cuts.get(&seg.edge).into_iter().flatten() {
                        if seg.lo() < c && c < seg.hi() {
                            out.entry(e.clone()).or_default().insert((i + (c - seg.from) / (seg.to - seg.from)) / k);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Whether the map sends controlled paths of `x` to controlled paths of `y`.
pub fn check_cmap(map: &CMap, x: &SpaceExpr, y: &SpaceExpr) -> Result<bool> {
    match map {
        CMap::Identity => is_finer(x, y),
        CMap::Projection(i) => {
            let (a, b) = split_product(x).ok_or_else(|| Error::Precondition("projection from a non-product".into()))?;
            let (chosen, other) = match i {
                0 => (a, b),
                1 => (b, a),
                _ => return Err(Error::Invalid(format!("projection index {i} out of range"))),
            };
            let (sc, sy) = (Space::new(chosen)?, Space::new(y.clone())?);
            if !sc.carrier.same_geometry(&sy.carrier) {
                return Err(Error::Invalid("the projection target is not the chosen factor".into()));
            }
            if has_no_paths(&Space::new(other)?)? {
                return Ok(true);
            }
            finer(&sc, &sy)
        }
        CMap::Graph { vertices, edges } => {
            let sx = Space::new(x.clone())?;
            let sy = Space::new(y.clone())?;
            let Some(g) = sx.carrier.graph() else {
                return Err(Error::Unsupported("affine maps out of products".into()));
            };
            let f = Affine::new(g, &sy.carrier, vertices, edges)?;
            let target = cut_tree(&sy, &[], &[])?;
            let extra = representatives(g, &[graph_cuts(&sx)?], &f.pullback(&target))?;
            let abs = Abstraction::new(&sx, &extra)?;
            for p in &abs.nodes {
                if sx.is_flexible_point(p)? && !sy.is_flexible_point(&f.point(p)?)? {
                    return Ok(false);
                }
            }
            for t in &abs.transitions {
                if !sy.is_controlled(&f.path(&t.witness)?)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Edge ids of a graph-like expression, for building identity-shaped maps.
pub fn edge_ids(e: &SpaceExpr) -> Result<BTreeSet<String>> {
    Ok(normalize_graph(e)?.edges().iter().map(|e| e.id.clone()).collect())
}
