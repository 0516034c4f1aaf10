//! Finite cell decompositions: every question asked about a space is constant on the open
//! cells between its anchors, so a handful of representative parameters per cell suffices.

use std::collections::{BTreeMap, BTreeSet};

use crate::carrier::Carrier;
use crate::error::{Error, Result};
use crate::membership::{Cuts, Node, Space};
use crate::path::{CanonicalPath, Step, Token};
use crate::rat::Rat;
use crate::space::Point;

pub type Params = BTreeMap<String, BTreeSet<Rat>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutTree {
    Graph(Cuts),
    Product(Box<CutTree>, Box<CutTree>),
}

fn add_point(p: &Point, out: &mut Params) {
    if let Point::EdgePoint(e, t) = p {
        out.entry(e.clone()).or_default().insert(*t);
    }
}

/// Anchors of every engine plus the points named by wrappers (graph-like nodes).
pub fn node_params(node: &Node, out: &mut Params) -> Result<()> {
    match node {
        Node::Graph(engine) => {
            for e in engine.graph.edges() {
                out.entry(e.id.clone()).or_default().extend(engine.anchors(&e.id));
            }
        }
        Node::Opposite(b) => node_params(b, out)?,
        Node::Subspace { base, region, .. } => {
            node_params(base, out)?;
            for (e, ps) in region.params() {
                out.entry(e).or_default().extend(ps);
            }
        }
        Node::Exclude { base, points } => {
            node_params(base, out)?;
            points.iter().for_each(|p| add_point(p, out));
        }
        Node::Predicate { base, absorbing, avoid } => {
            node_params(base, out)?;
            absorbing.iter().chain(avoid).for_each(|p| add_point(p, out));
        }
        Node::Meet(a, b) => {
            node_params(a, out)?;
            node_params(b, out)?;
        }
        Node::Product(..) => return Err(Error::Unsupported("product below a graph-level wrapper".into())),
    }
    Ok(())
}

/// Sorted parameters with the midpoint of every gap inserted.
pub fn with_midpoints(params: &BTreeSet<Rat>) -> Vec<Rat> {
    let sorted: Vec<Rat> = params.iter().copied().collect();
    let mut out = Vec::with_capacity(sorted.len() * 2);
    for (i, &c) in sorted.iter().enumerate() {
        if i > 0 {
            out.push(sorted[i - 1].mid(c));
        }
        out.push(c);
    }
    out
}

/// Per-leaf parameters visited by a path.
fn path_params(path: &CanonicalPath, carrier: &Carrier) -> Result<Vec<Params>> {
    match carrier {
        Carrier::Graph(_) => {
            let mut out = Params::new();
            add_point(&path.start, &mut out);
            for s in path.steps() {
                if let Step::Edge(s) = s {
                    out.entry(s.edge.clone()).or_default().extend([s.from, s.to]);
                }
            }
            Ok(vec![out])
        }
        Carrier::Product(a, b) => {
            let mut v = path_params(&path.project(0)?, a)?;
            v.extend(path_params(&path.project(1)?, b)?);
            Ok(v)
        }
    }
}

fn point_params(p: &Point, carrier: &Carrier) -> Vec<Params> {
    match (carrier, p) {
        (Carrier::Graph(_), _) => {
            let mut out = Params::new();
            add_point(p, &mut out);
            vec![out]
        }
        (Carrier::Product(a, b), Point::Tuple(ps)) if ps.len() == 2 => {
            let mut v = point_params(&ps[0], a);
            v.extend(point_params(&ps[1], b));
            v
        }
        (Carrier::Product(a, b), _) => {
            let mut v = point_params(&Point::Tuple(vec![]), a);
            v.extend(point_params(&Point::Tuple(vec![]), b));
            v
        }
    }
}

fn build_tree(node: &Node, carrier: &Carrier, extra: &mut std::vec::IntoIter<Params>) -> Result<CutTree> {
    match (node, carrier) {
        (Node::Product(a, b), Carrier::Product(ca, cb)) => {
            Ok(CutTree::Product(Box::new(build_tree(a, ca, extra)?), Box::new(build_tree(b, cb, extra)?)))
        }
        (Node::Opposite(b), _) => build_tree(b, carrier, extra),
        (_, Carrier::Graph(g)) => {
            let mut params = Params::new();
            node_params(node, &mut params)?;
            if let Some(x) = extra.next() {
                for (e, ps) in x {
                    params.entry(e).or_default().extend(ps);
                }
            }
            let mut cuts = Cuts::new();
            for e in g.edges() {
                let mut ps = params.remove(&e.id).unwrap_or_default();
                ps.extend([Rat::ZERO, Rat::ONE]);
                cuts.insert(e.id.clone(), with_midpoints(&ps));
            }
            Ok(CutTree::Graph(cuts))
        }
        _ => Err(Error::Unsupported("wrapper around a product".into())),
    }
}

fn merge_leaf_params(parts: Vec<Vec<Params>>) -> Vec<Params> {
    let mut out: Vec<Params> = Vec::new();
    for part in parts {
        for (i, p) in part.into_iter().enumerate() {
            if out.len() <= i {
                out.push(Params::new());
            }
            for (e, ps) in p {
                out[i].entry(e).or_default().extend(ps);
            }
        }
    }
    out
}

/// Cells of a space, refined by the parameters of some paths and points.
pub fn cut_tree(space: &Space, paths: &[&CanonicalPath], points: &[Point]) -> Result<CutTree> {
    let mut parts = Vec::new();
    for p in paths {
        parts.push(path_params(p, &space.carrier)?);
    }
    for p in points {
        parts.push(point_params(p, &space.carrier));
    }
    let leaves = merge_leaf_params(parts);
    let mut it = leaves.into_iter();
    build_tree(&space.node, &space.carrier, &mut it)
}

/// Fractions in `(0, 1)` at which some leaf of the step crosses a cut.
fn crossings(step: &Step, tree: &CutTree, out: &mut BTreeSet<Rat>) {
    match (step, tree) {
        (Step::Edge(s), CutTree::Graph(cuts)) => {
            if let Some(cs) = cuts.get(&s.edge) {
                for &c in cs {
                    if s.lo() < c && c < s.hi() {
                        out.insert((c - s.from) / (s.to - s.from));
                    }
                }
            }
        }
        (Step::Tuple(xs), CutTree::Product(a, b)) => {
            for (x, t) in xs.iter().zip([a.as_ref(), b.as_ref()]) {
                if let Some(x) = x {
                    crossings(x, t, out);
                }
            }
        }
        _ => {}
    }
}

/// Splits every step where a coordinate crosses a cut.
pub fn refine_tokens(tokens: &[Token], tree: &CutTree) -> Vec<Token> {
    let mut out = Vec::new();
    for t in tokens {
        match t {
            Token::Pause => out.push(Token::Pause),
            Token::Move(s) => {
                let mut fs = BTreeSet::new();
                crossings(s, tree, &mut fs);
                let mut prev = Rat::ZERO;
                for f in fs.into_iter().chain([Rat::ONE]) {
                    out.push(Token::Move(s.sub(prev, f)));
                    prev = f;
                }
            }
        }
    }
    out
}

/// Representative token-time positions: boundaries and token midpoints.
pub fn positions(n_tokens: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(2 * n_tokens + 1);
    for k in 0..n_tokens {
        out.push(Rat::int(k as i64));
        out.push(Rat::int(k as i64) + Rat::HALF);
    }
    out.push(Rat::int(n_tokens as i64));
    out
}
