//! Space expressions, graph presentations and points.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kind::{EdgeKind, Fragment};
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    Forward,
    Backward,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Forward => Dir::Backward,
            Dir::Backward => Dir::Forward,
        }
    }
}

/// Monotone motion along one edge, between two parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub edge: String,
    pub from: Rat,
    pub to: Rat,
}

impl Segment {
    pub fn new(edge: &str, from: Rat, to: Rat) -> Segment {
        Segment { edge: edge.to_string(), from, to }
    }

    pub fn dir(&self) -> Dir {
        if self.from <= self.to {
            Dir::Forward
        } else {
            Dir::Backward
        }
    }

    pub fn len(&self) -> Rat {
        (self.to - self.from).abs()
    }

    pub fn lo(&self) -> Rat {
        self.from.min(self.to)
    }

    pub fn hi(&self) -> Rat {
        self.from.max(self.to)
    }

    pub fn reversed(&self) -> Segment {
        Segment { edge: self.edge.clone(), from: self.to, to: self.from }
    }

    /// Parameter reached after the fraction `f` of the segment.
    pub fn at(&self, f: Rat) -> Rat {
        self.from.lerp(self.to, f)
    }

    pub fn sub(&self, f0: Rat, f1: Rat) -> Segment {
        Segment { edge: self.edge.clone(), from: self.at(f0), to: self.at(f1) }
    }

    /// Whether `next` continues this segment on the same edge in the same direction.
    pub fn continues_with(&self, next: &Segment) -> bool {
        self.edge == next.edge && self.to == next.from && self.dir() == next.dir()
    }

    pub fn contains_param(&self, t: Rat) -> bool {
        self.lo() <= t && t <= self.hi()
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}->{}", self.edge, self.from, self.to)
    }
}

/// Where a rigid generator insists on a dwell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PausePos {
    Start,
    End,
    /// Between step `i - 1` and step `i`.
    Boundary(usize),
}

impl PausePos {
    /// Step-boundary index in `0..=steps`.
    pub fn index(&self, steps: usize) -> usize {
        match self {
            PausePos::Start => 0,
            PausePos::End => steps,
            PausePos::Boundary(i) => *i,
        }
    }

    pub fn from_index(i: usize, steps: usize) -> PausePos {
        if i == 0 {
            PausePos::Start
        } else if i == steps {
            PausePos::End
        } else {
            PausePos::Boundary(i)
        }
    }
}

/// A finite generator given by its trace of edge segments.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RigidTrace {
    pub steps: Vec<Segment>,
    pub required_pauses: BTreeSet<PausePos>,
}

impl RigidTrace {
    pub fn new(steps: Vec<Segment>) -> RigidTrace {
        RigidTrace { steps, required_pauses: BTreeSet::new() }
    }

    pub fn with_pause(mut self, p: PausePos) -> RigidTrace {
        self.required_pauses.insert(p);
        self
    }

    /// Step-boundary indices carrying a required pause.
    pub fn pause_indices(&self) -> BTreeSet<usize> {
        self.required_pauses.iter().map(|p| p.index(self.steps.len())).collect()
    }

    pub fn reversed(&self) -> RigidTrace {
        let n = self.steps.len();
        RigidTrace {
            steps: self.steps.iter().rev().map(Segment::reversed).collect(),
            required_pauses: self.required_pauses.iter().map(|p| PausePos::from_index(n - p.index(n), n)).collect(),
        }
    }
}

/// A fragment family pinned to an edge of a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeFragment {
    pub edge: String,
    pub fragment: Fragment,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub from: String,
    pub to: String,
    pub kind: EdgeKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphPresentation {
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
    pub generators: Vec<RigidTrace>,
    pub fragments: Vec<EdgeFragment>,
    pub flexible: Vec<Point>,
    pub excluded: Vec<Point>,
}

impl GraphPresentation {
    pub fn new() -> GraphPresentation {
        GraphPresentation::default()
    }

    pub fn vertex(mut self, v: &str) -> Self {
        if !self.vertices.iter().any(|x| x == v) {
            self.vertices.push(v.to_string());
        }
        self
    }

    /// Adds an edge, declaring its endpoints if needed.
    pub fn edge(self, id: &str, from: &str, to: &str, kind: EdgeKind) -> Self {
        let mut g = self.vertex(from).vertex(to);
        g.edges.push(Edge { id: id.into(), from: from.into(), to: to.into(), kind });
        g
    }

    pub fn generator(mut self, g: RigidTrace) -> Self {
        self.generators.push(g);
        self
    }

    pub fn fragment(mut self, edge: &str, fragment: Fragment) -> Self {
        self.fragments.push(EdgeFragment { edge: edge.into(), fragment });
        self
    }

    pub fn flexible_point(mut self, p: Point) -> Self {
        self.flexible.push(p);
        self
    }

    pub fn exclude(mut self, p: Point) -> Self {
        self.excluded.push(p);
        self
    }

    pub fn find_edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vertices.iter().any(|x| x == v)
    }

    pub fn into_expr(self) -> SpaceExpr {
        SpaceExpr::Graph(self)
    }
}

/// A point of a carrier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Vertex(String),
    /// Position `t` along an edge, measured in the edge orientation.
    EdgePoint(String, Rat),
    Tuple(Vec<Point>),
    Class(Box<Point>),
}

impl Point {
    pub fn v(name: &str) -> Point {
        Point::Vertex(name.to_string())
    }

    pub fn on(edge: &str, t: Rat) -> Point {
        Point::EdgePoint(edge.to_string(), t)
    }

    pub fn pair(a: Point, b: Point) -> Point {
        Point::Tuple(vec![a, b])
    }

    /// Strips `Class` wrappers.
    pub fn unclassed(&self) -> &Point {
        match self {
            Point::Class(p) => p.unclassed(),
            p => p,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Vertex(v) => write!(f, "v:{v}"),
            Point::EdgePoint(e, t) => write!(f, "{e}@{t}"),
            Point::Tuple(ps) => {
                f.write_str("(")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            Point::Class(p) => write!(f, "[{p}]"),
        }
    }
}

fn split_top_level(s: &str, sep: char) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse(format!("unbalanced brackets in {s}")));
                }
            }
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced brackets in {s}")));
    }
    parts.push(&s[start..]);
    Ok(parts)
}

fn valid_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\'' | '+'))
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Point> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let parts = split_top_level(inner, ';')?;
            if parts.len() < 2 {
                return Err(Error::Parse(format!("tuple needs at least two coordinates: {s}")));
            }
            return Ok(Point::Tuple(parts.into_iter().map(str::parse).collect::<Result<_>>()?));
        }
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            return Ok(Point::Class(Box::new(inner.parse()?)));
        }
        if let Some(name) = s.strip_prefix("v:") {
            if !valid_ident(name) {
                return Err(Error::Parse(format!("bad vertex name {name:?}")));
            }
            return Ok(Point::v(name));
        }
        if let Some((e, t)) = s.split_once('@') {
            if !valid_ident(e) {
                return Err(Error::Parse(format!("bad edge name {e:?}")));
            }
            return Ok(Point::EdgePoint(e.to_string(), t.parse()?));
        }
        if valid_ident(s) {
            return Ok(Point::v(s));
        }
        Err(Error::Parse(format!("cannot parse point {s:?}")))
    }
}

/// Part of a subspace region.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RegionPiece {
    /// The closed sub-segment `lo..=hi` of an edge.
    Edge { edge: String, lo: Rat, hi: Rat },
    Vertex(String),
}

impl RegionPiece {
    pub fn whole(edge: &str) -> RegionPiece {
        RegionPiece::Edge { edge: edge.into(), lo: Rat::ZERO, hi: Rat::ONE }
    }
}

/// A base structure with path predicates: paths may never touch `avoid`, and may touch
/// `absorbing` only once all motion is over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateSpace {
    pub base: Box<SpaceExpr>,
    pub absorbing: Vec<Point>,
    pub avoid: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceExpr {
    Graph(GraphPresentation),
    Product(Box<SpaceExpr>, Box<SpaceExpr>),
    Sum(Box<SpaceExpr>, Box<SpaceExpr>),
    /// Identifies the points of each class with its first member.
    Quotient { base: Box<SpaceExpr>, classes: Vec<Vec<Point>> },
    Subspace { base: Box<SpaceExpr>, region: Vec<RegionPiece> },
    Opposite(Box<SpaceExpr>),
    /// Drops the controlled paths having an endpoint in `points`.
    ExcludeEndpoints { base: Box<SpaceExpr>, points: Vec<Point> },
    Predicate(PredicateSpace),
    /// Paths controlled in both operands (same carrier).
    Meet(Box<SpaceExpr>, Box<SpaceExpr>),
}

impl SpaceExpr {
    pub fn product(a: SpaceExpr, b: SpaceExpr) -> SpaceExpr {
        SpaceExpr::Product(Box::new(a), Box::new(b))
    }

    pub fn sum(a: SpaceExpr, b: SpaceExpr) -> SpaceExpr {
        SpaceExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn quotient(base: SpaceExpr, classes: Vec<Vec<Point>>) -> SpaceExpr {
        SpaceExpr::Quotient { base: Box::new(base), classes }
    }

    pub fn subspace(base: SpaceExpr, region: Vec<RegionPiece>) -> SpaceExpr {
        SpaceExpr::Subspace { base: Box::new(base), region }
    }

    pub fn opposite(base: SpaceExpr) -> SpaceExpr {
        SpaceExpr::Opposite(Box::new(base))
    }

    pub fn exclude(base: SpaceExpr, points: Vec<Point>) -> SpaceExpr {
        SpaceExpr::ExcludeEndpoints { base: Box::new(base), points }
    }

    pub fn meet(a: SpaceExpr, b: SpaceExpr) -> SpaceExpr {
        SpaceExpr::Meet(Box::new(a), Box::new(b))
    }

    pub fn op_name(&self) -> &'static str {
        match self {
            SpaceExpr::Graph(_) => "graph",
            SpaceExpr::Product(..) => "product",
            SpaceExpr::Sum(..) => "sum",
            SpaceExpr::Quotient { .. } => "quotient",
            SpaceExpr::Subspace { .. } => "subspace",
            SpaceExpr::Opposite(_) => "opposite",
            SpaceExpr::ExcludeEndpoints { .. } => "exclude",
            SpaceExpr::Predicate(_) => "predicate",
            SpaceExpr::Meet(..) => "meet",
        }
    }

    /// Number of leaf factors of the carrier.
    pub fn arity(&self) -> usize {
        match self {
            SpaceExpr::Product(a, b) => a.arity() + b.arity(),
            SpaceExpr::Opposite(b) => b.arity(),
            SpaceExpr::Subspace { base, .. } | SpaceExpr::ExcludeEndpoints { base, .. } => base.arity(),
            SpaceExpr::Predicate(p) => p.base.arity(),
            SpaceExpr::Meet(a, _) => a.arity(),
            _ => 1,
        }
    }
}
