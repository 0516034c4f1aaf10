//! Underlying 1-complexes of space expressions.
//!
//! Graphs, sums and vertex quotients all normalize to a single [`NormGraph`]; products keep
//! their factors apart.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::space::{Edge, EdgeFragment, GraphPresentation, Point, RigidTrace, Segment, SpaceExpr};

/// A graph presentation with vertex aliases resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormGraph {
    pub pres: GraphPresentation,
    alias: BTreeMap<String, String>,
    index: HashMap<String, usize>,
}

impl NormGraph {
    fn build(pres: GraphPresentation, alias: BTreeMap<String, String>) -> Result<NormGraph> {
        let mut index = HashMap::new();
        let verts: BTreeSet<&str> = pres.vertices.iter().map(String::as_str).collect();
        if verts.len() != pres.vertices.len() {
            return Err(Error::Invalid("duplicate vertex id".into()));
        }
        for (i, e) in pres.edges.iter().enumerate() {
            if index.insert(e.id.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate edge id {}", e.id)));
            }
            if verts.contains(e.id.as_str()) {
                return Err(Error::Invalid(format!("id {} names both a vertex and an edge", e.id)));
            }
            for v in [&e.from, &e.to] {
                if !verts.contains(v.as_str()) {
                    return Err(Error::Unknown(format!("vertex {v} of edge {}", e.id)));
                }
            }
            e.kind.check_params()?;
        }
        Ok(NormGraph { pres, alias, index })
    }

    pub fn from_presentation(pres: GraphPresentation) -> Result<NormGraph> {
        NormGraph::build(pres, BTreeMap::new())
    }

    pub fn edges(&self) -> &[Edge] {
        &self.pres.edges
    }

    pub fn vertices(&self) -> &[String] {
        &self.pres.vertices
    }

    pub fn edge(&self, id: &str) -> Result<&Edge> {
        self.index
            .get(id)
            .map(|&i| &self.pres.edges[i])
            .ok_or_else(|| Error::Unknown(format!("edge {id}")))
    }

    pub fn has_edge(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn resolve_vertex(&self, v: &str) -> Option<&str> {
        let v = self.alias.get(v).map(String::as_str).unwrap_or(v);
        self.pres.vertices.iter().find(|x| *x == v).map(String::as_str)
    }

    /// The point at parameter `t` of `edge`, with endpoints turned into vertices.
    pub fn point_at(&self, edge: &str, t: Rat) -> Result<Point> {
        let e = self.edge(edge)?;
        if !t.in_unit() {
            return Err(Error::OutsideSupport(format!("{edge}@{t}")));
        }
        Ok(if t == Rat::ZERO {
            Point::Vertex(e.from.clone())
        } else if t == Rat::ONE {
            Point::Vertex(e.to.clone())
        } else {
            Point::EdgePoint(edge.to_string(), t)
        })
    }

    pub fn seg_start(&self, s: &Segment) -> Result<Point> {
        self.point_at(&s.edge, s.from)
    }

    pub fn seg_end(&self, s: &Segment) -> Result<Point> {
        self.point_at(&s.edge, s.to)
    }

    pub fn normalize_point(&self, p: &Point) -> Result<Point> {
        match p {
            Point::Class(inner) => self.normalize_point(inner),
            Point::Vertex(v) => self
                .resolve_vertex(v)
                .map(Point::v)
                .ok_or_else(|| Error::OutsideSupport(format!("unknown vertex {v}"))),
            Point::EdgePoint(e, t) => {
                if !self.has_edge(e) {
                    return Err(Error::OutsideSupport(format!("unknown edge {e}")));
                }
                self.point_at(e, *t)
            }
            Point::Tuple(_) => Err(Error::OutsideSupport(format!("tuple point {p} in a graph carrier"))),
        }
    }

    /// Every `(edge, t)` at which the (normalized) point sits.
    pub fn positions(&self, p: &Point) -> Vec<(String, Rat)> {
        match p {
            Point::Vertex(v) => {
                let mut out = Vec::new();
                for e in &self.pres.edges {
                    if &e.from == v {
                        out.push((e.id.clone(), Rat::ZERO));
                    }
                    if &e.to == v {
                        out.push((e.id.clone(), Rat::ONE));
                    }
                }
                out
            }
            Point::EdgePoint(e, t) => vec![(e.clone(), *t)],
            _ => vec![],
        }
    }

    /// Whether the normalized point lies on the segment.
    pub fn segment_touches(&self, s: &Segment, p: &Point) -> bool {
        self.positions(p).iter().any(|(e, t)| *e == s.edge && s.contains_param(*t))
    }

    pub fn same_geometry(&self, other: &NormGraph) -> bool {
        let va: BTreeSet<_> = self.pres.vertices.iter().collect();
        let vb: BTreeSet<_> = other.pres.vertices.iter().collect();
        let ea: BTreeSet<_> = self.pres.edges.iter().map(|e| (&e.id, &e.from, &e.to)).collect();
        let eb: BTreeSet<_> = other.pres.edges.iter().map(|e| (&e.id, &e.from, &e.to)).collect();
        va == vb && ea == eb
    }
}

/// Carrier of a space expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Carrier {
    Graph(Arc<NormGraph>),
    Product(Box<Carrier>, Box<Carrier>),
}

impl Carrier {
    pub fn of(expr: &SpaceExpr) -> Result<Carrier> {
        match expr {
            SpaceExpr::Graph(_) | SpaceExpr::Sum(..) | SpaceExpr::Quotient { .. } => {
                Ok(Carrier::Graph(Arc::new(normalize_graph(expr)?)))
            }
            SpaceExpr::Product(a, b) => Ok(Carrier::Product(Box::new(Carrier::of(a)?), Box::new(Carrier::of(b)?))),
            SpaceExpr::Opposite(b) => Carrier::of(b),
            SpaceExpr::Subspace { base, .. } | SpaceExpr::ExcludeEndpoints { base, .. } => Carrier::of(base),
            SpaceExpr::Predicate(p) => Carrier::of(&p.base),
            SpaceExpr::Meet(a, b) => {
                let ca = Carrier::of(a)?;
                let cb = Carrier::of(b)?;
                if !ca.same_geometry(&cb) {
                    return Err(Error::Invalid("meet of structures on different carriers".into()));
                }
                Ok(ca)
            }
        }
    }

    pub fn graph(&self) -> Option<&NormGraph> {
        match self {
            Carrier::Graph(g) => Some(g),
            Carrier::Product(..) => None,
        }
    }

    pub fn factor(&self, i: usize) -> Result<&Carrier> {
        match (self, i) {
            (Carrier::Product(a, _), 0) => Ok(a),
            (Carrier::Product(_, b), 1) => Ok(b),
            (Carrier::Product(..), _) => Err(Error::Invalid(format!("factor index {i} out of range"))),
            (Carrier::Graph(_), _) => Err(Error::Precondition("projection needs a product".into())),
        }
    }

    pub fn normalize_point(&self, p: &Point) -> Result<Point> {
        match (self, p) {
            (_, Point::Class(inner)) => self.normalize_point(inner),
            (Carrier::Graph(g), _) => g.normalize_point(p),
            (Carrier::Product(a, b), Point::Tuple(ps)) if ps.len() == 2 => {
                Ok(Point::Tuple(vec![a.normalize_point(&ps[0])?, b.normalize_point(&ps[1])?]))
            }
            (Carrier::Product(..), _) => Err(Error::OutsideSupport(format!("point {p} is not a pair"))),
        }
    }

    pub fn same_geometry(&self, other: &Carrier) -> bool {
        match (self, other) {
            (Carrier::Graph(a), Carrier::Graph(b)) => a.same_geometry(b),
            (Carrier::Product(a1, b1), Carrier::Product(a2, b2)) => a1.same_geometry(a2) && b1.same_geometry(b2),
            _ => false,
        }
    }
}

/// Normalizes a graph, sum or quotient into one presentation.
pub fn normalize_graph(expr: &SpaceExpr) -> Result<NormGraph> {
    match expr {
        SpaceExpr::Graph(g) => NormGraph::from_presentation(g.clone()),
        SpaceExpr::Sum(a, b) => {
            let na = normalize_graph(a)?;
            let nb = normalize_graph(b)?;
            sum_graphs(na, nb)
        }
        SpaceExpr::Quotient { base, classes } => {
            let nb = normalize_graph(base)?;
            identify(nb, classes)
        }
        other => Err(Error::Unsupported(format!(
            "{} operand where a graph, sum or quotient is required",
            other.op_name()
        ))),
    }
}

fn sum_graphs(a: NormGraph, b: NormGraph) -> Result<NormGraph> {
    let ids_a: BTreeSet<&String> = a.pres.vertices.iter().chain(a.pres.edges.iter().map(|e| &e.id)).collect();
    for id in b.pres.vertices.iter().chain(b.pres.edges.iter().map(|e| &e.id)) {
        if ids_a.contains(id) {
            return Err(Error::Invalid(format!("sum operands share the id {id}")));
        }
    }
    let mut pres = a.pres;
    let other = b.pres;
    pres.vertices.extend(other.vertices);
    pres.edges.extend(other.edges);
    pres.generators.extend(other.generators);
    pres.fragments.extend(other.fragments);
    pres.flexible.extend(other.flexible);
    pres.excluded.extend(other.excluded);
    let mut alias = a.alias;
    alias.extend(b.alias);
    NormGraph::build(pres, alias)
}

fn identify(base: NormGraph, classes: &[Vec<Point>]) -> Result<NormGraph> {
    // union-find over vertex names, representative = first member seen
    let mut parent: BTreeMap<String, String> = BTreeMap::new();
    fn find(parent: &BTreeMap<String, String>, v: &str) -> String {
        let mut cur = v.to_string();
        while let Some(p) = parent.get(&cur) {
            if *p == cur {
                break;
            }
            cur = p.clone();
        }
        cur
    }
    for class in classes {
        let mut members = Vec::new();
        for p in class {
            match base.normalize_point(p)? {
                Point::Vertex(v) => members.push(v),
                other => {
                    return Err(Error::Unsupported(format!(
                        "quotient identifies the non-vertex point {other}; only vertices can be identified"
                    )))
                }
            }
        }
        let Some(first) = members.first() else { continue };
        let rep = find(&parent, first);
        for m in &members[1..] {
            let r = find(&parent, m);
            if r != rep {
                parent.insert(r, rep.clone());
            }
        }
    }
    let map = |v: &str| find(&parent, v);
    let mut pres = base.pres;
    pres.vertices.retain(|v| map(v) == *v);
    for e in &mut pres.edges {
        e.from = map(&e.from);
        e.to = map(&e.to);
    }
    let remap = |p: &Point| match p {
        Point::Vertex(v) => Point::Vertex(map(v)),
        other => other.clone(),
    };
    pres.flexible = pres.flexible.iter().map(remap).collect();
    pres.excluded = pres.excluded.iter().map(remap).collect();
    let mut alias: BTreeMap<String, String> = base.alias.iter().map(|(k, v)| (k.clone(), map(v))).collect();
    for v in parent.keys() {
        alias.insert(v.clone(), map(v));
    }
    NormGraph::build(pres, alias)
}

/// Start and end points of a generator trace.
pub fn trace_points(g: &NormGraph, t: &RigidTrace) -> Result<(Point, Point)> {
    let first = t.steps.first().ok_or_else(|| Error::Invalid("empty generator trace".into()))?;
    let last = t.steps.last().unwrap();
    Ok((g.seg_start(first)?, g.seg_end(last)?))
}

/// Fragments pinned to a given edge.
pub fn edge_fragments<'a>(g: &'a NormGraph, edge: &'a str) -> impl Iterator<Item = &'a EdgeFragment> + 'a {
    g.pres.fragments.iter().filter(move |f| f.edge == edge)
}
