//! Deciding whether a canonical path is controlled.
//!
//! On a graph the question is a factorization problem: cut the path into atoms at every anchor
//! and every path breakpoint (plus cell midpoints), then run a left-to-right dynamic program
//! in which rigid generators match exact atom sequences and fragments swallow same-direction
//! stretches of a single edge. Wrappers and products reduce to the graph case.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::carrier::{normalize_graph, Carrier, NormGraph};
use crate::error::{Error, Result};
use crate::kind::{kind_flexible_points, kind_generators, kind_anchors, Fragment};
use crate::path::{advance, CanonicalPath, Step, Token};
use crate::rat::Rat;
use crate::space::{Point, PredicateSpace, RegionPiece, RigidTrace, Segment, SpaceExpr};

/// Where a generator came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Kind(String),
    Explicit(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidGen {
    pub trace: RigidTrace,
    pub origin: Origin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FragmentGen {
    pub edge: String,
    pub fragment: Fragment,
    pub origin: Origin,
}

/// Per-edge sorted parameters.
pub type Cuts = BTreeMap<String, Vec<Rat>>;

/// Generator tables of a normalized graph.
#[derive(Clone, Debug)]
pub struct GraphEngine {
    pub graph: Arc<NormGraph>,
    pub rigid: Vec<RigidGen>,
    pub fragments: Vec<FragmentGen>,
    pub overrides: BTreeSet<Point>,
    pub excluded: BTreeSet<Point>,
    static_cuts: BTreeMap<String, BTreeSet<Rat>>,
}

/// One matched generator instance, in atom positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub label: String,
    pub rigid: bool,
    pub from: usize,
    pub to: usize,
    pub path: CanonicalPath,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub instances: Vec<Instance>,
    /// Atom positions carrying a pause.
    pub pauses: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    /// Atom position reached by the longest partial match.
    pub position: usize,
    pub at: Point,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parse {
    Controlled(Decomposition),
    Failed(Failure),
}

impl Parse {
    pub fn is_controlled(&self) -> bool {
        matches!(self, Parse::Controlled(_))
    }
}

/// A path cut into atoms.
#[derive(Clone, Debug)]
pub struct Atoms {
    pub atoms: Vec<Segment>,
    /// `pause[i]`: a pause sits at position `i` (before atom `i`).
    pub pause: Vec<bool>,
    pub points: Vec<Point>,
}

fn split_segment(s: &Segment, cuts: &[Rat]) -> Vec<Segment> {
    let (lo, hi) = (s.lo(), s.hi());
    let mut inner: Vec<Rat> = cuts.iter().copied().filter(|&c| lo < c && c < hi).collect();
    if s.from > s.to {
        inner.reverse();
    }
    let mut out = Vec::with_capacity(inner.len() + 1);
    let mut cur = s.from;
    for c in inner {
        out.push(Segment::new(&s.edge, cur, c));
        cur = c;
    }
    out.push(Segment::new(&s.edge, cur, s.to));
    out
}

pub fn trace_label(t: &RigidTrace) -> String {
    let steps: Vec<String> = t.steps.iter().map(|s| s.to_string()).collect();
    let mut label = steps.join(" ");
    for p in &t.required_pauses {
        label.push_str(&format!(" +pause@{}", p.index(t.steps.len())));
    }
    label
}

impl GraphEngine {
    pub fn new(graph: Arc<NormGraph>) -> Result<GraphEngine> {
        let mut rigid = Vec::new();
        let mut fragments = Vec::new();
        let mut cuts: BTreeMap<String, BTreeSet<Rat>> = BTreeMap::new();
        for e in graph.edges() {
            let fam = kind_generators(&e.kind, &e.id)?;
            rigid.extend(fam.rigid.into_iter().map(|trace| RigidGen { trace, origin: Origin::Kind(e.id.clone()) }));
            for f in fam.fragments {
                fragments.push(FragmentGen { edge: e.id.clone(), fragment: f, origin: Origin::Kind(e.id.clone()) });
            }
            cuts.entry(e.id.clone()).or_default().extend(kind_anchors(&e.kind));
        }
        for (i, t) in graph.pres.generators.iter().enumerate() {
            if t.steps.is_empty() {
                return Err(Error::Invalid("empty generator trace".into()));
            }
            for s in &t.steps {
                graph.edge(&s.edge)?;
                if s.from == s.to || !s.from.in_unit() || !s.to.in_unit() {
                    return Err(Error::Invalid(format!("bad generator step {s}")));
                }
            }
            for w in t.steps.windows(2) {
                if graph.seg_end(&w[0])? != graph.seg_start(&w[1])? {
                    return Err(Error::Invalid(format!("generator steps {} and {} are not consecutive", w[0], w[1])));
                }
            }
            rigid.push(RigidGen { trace: t.clone(), origin: Origin::Explicit(i) });
        }
        for (i, f) in graph.pres.fragments.iter().enumerate() {
            graph.edge(&f.edge)?;
            fragments.push(FragmentGen { edge: f.edge.clone(), fragment: f.fragment.clone(), origin: Origin::Explicit(i) });
        }
        for g in &rigid {
            for s in &g.trace.steps {
                cuts.entry(s.edge.clone()).or_default().extend([s.from, s.to]);
            }
        }
        for f in &fragments {
            cuts.entry(f.edge.clone()).or_default().extend([f.fragment.lo, f.fragment.hi]);
        }
        let mut overrides = BTreeSet::new();
        for p in &graph.pres.flexible {
            overrides.insert(graph.normalize_point(p)?);
        }
        let mut excluded = BTreeSet::new();
        for p in &graph.pres.excluded {
            excluded.insert(graph.normalize_point(p)?);
        }
        for p in overrides.iter().chain(&excluded) {
            if let Point::EdgePoint(e, t) = p {
                cuts.entry(e.clone()).or_default().insert(*t);
            }
        }
        Ok(GraphEngine { graph, rigid, fragments, overrides, excluded, static_cuts: cuts })
    }

    pub fn from_expr(expr: &SpaceExpr) -> Result<GraphEngine> {
        GraphEngine::new(Arc::new(normalize_graph(expr)?))
    }

    /// Static anchors on one edge.
    pub fn anchors(&self, edge: &str) -> Vec<Rat> {
        self.static_cuts.get(edge).map(|s| s.iter().copied().collect()).unwrap_or_else(|| vec![Rat::ZERO, Rat::ONE])
    }

    /// Anchors plus extra parameters, with the midpoints of all resulting cells.
    pub fn cells(&self, extra: &BTreeMap<String, BTreeSet<Rat>>) -> Cuts {
        let mut out = Cuts::new();
        for e in self.graph.edges() {
            let mut base: BTreeSet<Rat> = self.anchors(&e.id).into_iter().collect();
            if let Some(x) = extra.get(&e.id) {
                base.extend(x.iter().copied());
            }
            let sorted: Vec<Rat> = base.into_iter().collect();
            let mut with_mid = Vec::with_capacity(sorted.len() * 2);
            for (i, &c) in sorted.iter().enumerate() {
                if i > 0 {
                    with_mid.push(sorted[i - 1].mid(c));
                }
                with_mid.push(c);
            }
            out.insert(e.id.clone(), with_mid);
        }
        out
    }

    /// Whether the trivial loop at the normalized point `p` is controlled.
    pub fn is_flexible(&self, p: &Point) -> bool {
        if self.excluded.contains(p) {
            return false;
        }
        if self.overrides.contains(p) {
            return true;
        }
        for (e, t) in self.graph.positions(p) {
            let Ok(edge) = self.graph.edge(&e) else { continue };
            if kind_flexible_points(&edge.kind).contains(t) {
                return true;
            }
            if self.fragments.iter().any(|f| f.edge == e && f.fragment.has_run_through(t)) {
                return true;
            }
        }
        self.rigid.iter().any(|g| {
            let (Some(a), Some(b)) = (g.trace.steps.first(), g.trace.steps.last()) else { return false };
            self.graph.seg_start(a).ok().as_ref() == Some(p) || self.graph.seg_end(b).ok().as_ref() == Some(p)
        })
    }

    /// Breakpoint parameters of a graph path, per edge.
    pub fn path_params(path: &CanonicalPath) -> BTreeMap<String, BTreeSet<Rat>> {
        let mut out: BTreeMap<String, BTreeSet<Rat>> = BTreeMap::new();
        for s in path.steps() {
            if let Step::Edge(s) = s {
                out.entry(s.edge.clone()).or_default().extend([s.from, s.to]);
            }
        }
        if let Point::EdgePoint(e, t) = &path.start {
            out.entry(e.clone()).or_default().insert(*t);
        }
        out
    }

    pub fn atomize(&self, path: &CanonicalPath, cuts: &Cuts) -> Result<Atoms> {
        let mut atoms = Vec::new();
        let mut pause = vec![false];
        let mut points = vec![path.start.clone()];
        for t in path.tokens() {
            match t {
                Token::Pause => *pause.last_mut().unwrap() = true,
                Token::Move(Step::Edge(s)) => {
                    let c = cuts.get(&s.edge).ok_or_else(|| Error::PathOutsideSupport(format!("unknown edge {}", s.edge)))?;
                    for a in split_segment(&s, c) {
                        points.push(self.graph.seg_end(&a)?);
                        atoms.push(a);
                        pause.push(false);
                    }
                }
                Token::Move(Step::Tuple(_)) => {
                    return Err(Error::PathOutsideSupport("product path in a graph space".into()));
                }
            }
        }
        Ok(Atoms { atoms, pause, points })
    }

    fn trace_atoms(&self, t: &RigidTrace, cuts: &Cuts) -> (Vec<Segment>, Vec<usize>) {
        let mut atoms = Vec::new();
        let mut offsets = vec![0];
        for s in &t.steps {
            atoms.extend(split_segment(s, cuts.get(&s.edge).map(Vec::as_slice).unwrap_or(&[])));
            offsets.push(atoms.len());
        }
        let pauses = t.pause_indices().into_iter().map(|i| offsets[i]).collect();
        (atoms, pauses)
    }

    fn instance_path(&self, at: &Atoms, from: usize, to: usize) -> CanonicalPath {
        let mut tokens = Vec::new();
        for i in from..to {
            if i > from && at.pause[i] {
                tokens.push(Token::Pause);
            }
            tokens.push(Token::Move(Step::Edge(at.atoms[i].clone())));
        }
        CanonicalPath::from_tokens(at.points[from].clone(), at.points[to].clone(), tokens)
    }

    /// Decides membership and returns a minimal decomposition or the furthest failure.
    pub fn parse(&self, path: &CanonicalPath) -> Result<Parse> {
        let carrier = Carrier::Graph(self.graph.clone());
        path.check(&carrier)?;
        let cuts = self.cells(&GraphEngine::path_params(path));
        let at = self.atomize(path, &cuts)?;
        let n = at.atoms.len();
        if n == 0 {
            if self.is_flexible(&path.start) {
                return Ok(Parse::Controlled(Decomposition { instances: vec![], pauses: pause_positions(&at) }));
            }
            return Ok(Parse::Failed(Failure {
                position: 0,
                at: path.start.clone(),
                reason: "trivial loop at a non-flexible point".into(),
            }));
        }
        let traces: Vec<(Vec<Segment>, Vec<usize>)> = self.rigid.iter().map(|g| self.trace_atoms(&g.trace, &cuts)).collect();
        // best[j] = (instance count, predecessor, label, rigid)
        let mut best: Vec<Option<(usize, usize, String, bool)>> = vec![None; n + 1];
        best[0] = Some((0, 0, String::new(), false));
        let mut furthest = 0usize;
        for i in 0..n {
            let Some((cost, ..)) = best[i] else { continue };
            furthest = furthest.max(i);
            let offer = |j: usize, label: String, rigid: bool, best: &mut Vec<Option<(usize, usize, String, bool)>>| {
                if best[j].as_ref().map_or(true, |b| b.0 > cost + 1) {
                    best[j] = Some((cost + 1, i, label, rigid));
                }
            };
            for (g, (tatoms, tpauses)) in self.rigid.iter().zip(&traces) {
                let mut k = 0;
                while k < tatoms.len() && i + k < n && at.atoms[i + k] == tatoms[k] {
                    k += 1;
                }
                furthest = furthest.max(i + k);
                if k == tatoms.len() && tpauses.iter().all(|&o| at.pause[i + o]) {
                    offer(i + k, trace_label(&g.trace), true, &mut best);
                }
            }
            let first = &at.atoms[i];
            for f in self.fragments.iter().filter(|f| f.edge == first.edge) {
                let mut j = i;
                while j < n && (j == i || at.atoms[j - 1].continues_with(&at.atoms[j])) {
                    if !f.fragment.admits_run(first.from, at.atoms[j].to) {
                        break;
                    }
                    j += 1;
                    furthest = furthest.max(j);
                    offer(j, format!("fragment {}", first.edge), false, &mut best);
                }
            }
        }
        if best[n].is_none() {
            return Ok(Parse::Failed(Failure {
                position: furthest,
                at: at.points[furthest].clone(),
                reason: "no generator instance continues the path".into(),
            }));
        }
        for (p, what) in [(&path.start, "starts"), (&path.end, "ends")] {
            if self.excluded.contains(p) {
                let position = if what == "starts" { 0 } else { n };
                return Ok(Parse::Failed(Failure {
                    position,
                    at: p.clone(),
                    reason: format!("path {what} at an excluded point"),
                }));
            }
        }
        let mut instances = Vec::new();
        let mut j = n;
        while j > 0 {
            let (_, i, label, rigid) = best[j].clone().unwrap();
            instances.push(Instance { label, rigid, from: i, to: j, path: self.instance_path(&at, i, j) });
            j = i;
        }
        instances.reverse();
        Ok(Parse::Controlled(Decomposition { instances, pauses: pause_positions(&at) }))
    }
}

fn pause_positions(at: &Atoms) -> Vec<usize> {
    at.pause.iter().enumerate().filter(|(_, &p)| p).map(|(i, _)| i).collect()
}

/// Token-time positions at which a path sits at the normalized point `p`.
pub fn touch_times(carrier: &Carrier, path: &CanonicalPath, p: &Point) -> Result<Vec<Rat>> {
    let mut out = Vec::new();
    let tokens = path.tokens();
    if tokens.is_empty() && &path.start == p {
        out.push(Rat::ZERO);
    }
    let mut cur = path.start.clone();
    for (k, t) in tokens.iter().enumerate() {
        let k0 = Rat::int(k as i64);
        match t {
            Token::Pause => {
                if &cur == p {
                    out.extend([k0, k0 + Rat::ONE]);
                }
            }
            Token::Move(s) => {
                for f in step_hits(carrier, &cur, s, p)? {
                    out.push(k0 + f);
                }
                cur = advance(carrier, &cur, s)?;
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Fractions of a step at which it sits at `p`; `None` means everywhere.
fn hits(carrier: &Carrier, cur: &Point, step: &Step, p: &Point) -> Result<Option<Vec<Rat>>> {
    match (carrier, step) {
        (Carrier::Graph(g), Step::Edge(s)) => {
            let mut fs: Vec<Rat> = g
                .positions(p)
                .into_iter()
                .filter(|(e, t)| *e == s.edge && s.contains_param(*t))
                .map(|(_, t)| (t - s.from) / (s.to - s.from))
                .collect();
            fs.sort();
            fs.dedup();
            Ok(Some(fs))
        }
        (Carrier::Product(a, b), Step::Tuple(cs)) => {
            let (Point::Tuple(cur), Point::Tuple(ps)) = (cur, p) else {
                return Ok(Some(vec![]));
            };
            let mut acc: Option<Vec<Rat>> = None;
            for (i, fac) in [a.as_ref(), b.as_ref()].into_iter().enumerate() {
                let h = match &cs[i] {
                    None => {
                        if cur[i] == ps[i] {
                            None
                        } else {
                            Some(vec![])
                        }
                    }
                    Some(s) => hits(fac, &cur[i], s, &ps[i])?,
                };
                acc = match (acc, h) {
                    (None, h) => h,
                    (a, None) => a,
                    (Some(x), Some(y)) => Some(x.into_iter().filter(|f| y.contains(f)).collect()),
                };
            }
            Ok(acc)
        }
        _ => Err(Error::PathOutsideSupport(format!("step {step} does not fit the carrier"))),
    }
}

fn step_hits(carrier: &Carrier, cur: &Point, step: &Step, p: &Point) -> Result<Vec<Rat>> {
    Ok(hits(carrier, cur, step, p)?.unwrap_or_else(|| vec![Rat::ZERO, Rat::ONE]))
}

/// Closed intervals of a region per edge, plus isolated vertices.
#[derive(Clone, Debug, Default)]
pub struct Region {
    pub intervals: BTreeMap<String, Vec<(Rat, Rat)>>,
    pub vertices: BTreeSet<String>,
}

impl Region {
    pub fn new(g: &NormGraph, pieces: &[RegionPiece]) -> Result<Region> {
        let mut r = Region::default();
        for piece in pieces {
            match piece {
                RegionPiece::Edge { edge, lo, hi } => {
                    g.edge(edge)?;
                    if !(lo.in_unit() && hi.in_unit() && lo <= hi) {
                        return Err(Error::Invalid(format!("bad region piece {edge} {lo}..{hi}")));
                    }
                    r.intervals.entry(edge.clone()).or_default().push((*lo, *hi));
                }
                RegionPiece::Vertex(v) => {
                    let Point::Vertex(v) = g.normalize_point(&Point::v(v))? else { unreachable!() };
                    r.vertices.insert(v);
                }
            }
        }
        for ivs in r.intervals.values_mut() {
            ivs.sort();
            let mut merged: Vec<(Rat, Rat)> = Vec::new();
            for (lo, hi) in ivs.drain(..) {
                match merged.last_mut() {
                    Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                    _ => merged.push((lo, hi)),
                }
            }
            *ivs = merged;
        }
        Ok(r)
    }

    pub fn covers(&self, edge: &str, lo: Rat, hi: Rat) -> bool {
        self.intervals.get(edge).is_some_and(|ivs| ivs.iter().any(|&(a, b)| a <= lo && hi <= b))
    }

    pub fn contains_point(&self, g: &NormGraph, p: &Point) -> bool {
        if let Point::Vertex(v) = p {
            if self.vertices.contains(v) {
                return true;
            }
        }
        g.positions(p).iter().any(|(e, t)| self.covers(e, *t, *t))
    }

    pub fn contains_path(&self, g: &NormGraph, path: &CanonicalPath) -> bool {
        self.contains_point(g, &path.start)
            && path.steps().all(|s| match s {
                Step::Edge(s) => self.covers(&s.edge, s.lo(), s.hi()),
                Step::Tuple(_) => false,
            })
    }

    /// Boundary parameters, per edge.
    pub fn params(&self) -> BTreeMap<String, BTreeSet<Rat>> {
        self.intervals
            .iter()
            .map(|(e, ivs)| (e.clone(), ivs.iter().flat_map(|&(a, b)| [a, b]).collect()))
            .collect()
    }
}

/// A space expression prepared for queries.
#[derive(Clone, Debug)]
pub enum Node {
    Graph(Arc<GraphEngine>),
    Product(Box<Node>, Box<Node>),
    Opposite(Box<Node>),
    Subspace { base: Box<Node>, region: Region, graph: Arc<NormGraph> },
    Exclude { base: Box<Node>, points: BTreeSet<Point> },
    Predicate { base: Box<Node>, absorbing: Vec<Point>, avoid: Vec<Point> },
    Meet(Box<Node>, Box<Node>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub controlled: bool,
    /// Factorization found (or failure) in the underlying graph, where there is one.
    pub parse: Option<Parse>,
    pub factors: Vec<Verdict>,
    /// Why a wrapper rejected the path.
    pub reason: Option<String>,
}

impl Verdict {
    fn rejected(mut base: Verdict, reason: String) -> Verdict {
        base.controlled = false;
        base.reason = Some(reason);
        base
    }
}

#[derive(Clone, Debug)]
pub struct Space {
    pub expr: SpaceExpr,
    pub carrier: Carrier,
    pub node: Node,
}

fn compile(expr: &SpaceExpr, carrier: &Carrier) -> Result<Node> {
    Ok(match expr {
        SpaceExpr::Graph(_) | SpaceExpr::Sum(..) | SpaceExpr::Quotient { .. } => {
            let g = carrier.graph().expect("graph carrier").clone();
            Node::Graph(Arc::new(GraphEngine::new(Arc::new(g))?))
        }
        SpaceExpr::Product(a, b) => Node::Product(
            Box::new(compile(a, carrier.factor(0)?)?),
            Box::new(compile(b, carrier.factor(1)?)?),
        ),
        SpaceExpr::Opposite(b) => Node::Opposite(Box::new(compile(b, carrier)?)),
        SpaceExpr::Subspace { base, region } => {
            let Some(g) = carrier.graph() else {
                return Err(Error::Unsupported("subspaces of products".into()));
            };
            Node::Subspace {
                base: Box::new(compile(base, carrier)?),
                region: Region::new(g, region)?,
                graph: Arc::new(g.clone()),
            }
        }
        SpaceExpr::ExcludeEndpoints { base, points } => Node::Exclude {
            base: Box::new(compile(base, carrier)?),
            points: points.iter().map(|p| carrier.normalize_point(p)).collect::<Result<_>>()?,
        },
        SpaceExpr::Predicate(PredicateSpace { base, absorbing, avoid }) => Node::Predicate {
            base: Box::new(compile(base, carrier)?),
            absorbing: absorbing.iter().map(|p| carrier.normalize_point(p)).collect::<Result<_>>()?,
            avoid: avoid.iter().map(|p| carrier.normalize_point(p)).collect::<Result<_>>()?,
        },
        SpaceExpr::Meet(a, b) => Node::Meet(Box::new(compile(a, carrier)?), Box::new(compile(b, carrier)?)),
    })
}

impl Space {
    pub fn new(expr: SpaceExpr) -> Result<Space> {
        let carrier = Carrier::of(&expr)?;
        let node = compile(&expr, &carrier)?;
        Ok(Space { expr, carrier, node })
    }

    pub fn verdict(&self, path: &CanonicalPath) -> Result<Verdict> {
        path.check(&self.carrier)?;
        verdict(&self.node, &self.carrier, path)
    }

    pub fn is_controlled(&self, path: &CanonicalPath) -> Result<bool> {
        Ok(self.verdict(path)?.controlled)
    }

    pub fn is_flexible_point(&self, x: &Point) -> Result<bool> {
        let x = self.carrier.normalize_point(x)?;
        self.is_controlled(&CanonicalPath::trivial(x))
    }

    pub fn point(&self, x: &Point) -> Result<Point> {
        self.carrier.normalize_point(x)
    }
}

fn verdict(node: &Node, carrier: &Carrier, path: &CanonicalPath) -> Result<Verdict> {
    match node {
        Node::Graph(engine) => {
            let parse = engine.parse(path)?;
            Ok(Verdict { controlled: parse.is_controlled(), parse: Some(parse), factors: vec![], reason: None })
        }
        Node::Product(a, b) => {
            let va = verdict(a, carrier.factor(0)?, &path.project(0)?)?;
            let vb = verdict(b, carrier.factor(1)?, &path.project(1)?)?;
            let controlled = va.controlled && vb.controlled;
            Ok(Verdict { controlled, parse: None, factors: vec![va, vb], reason: None })
        }
        Node::Opposite(b) => verdict(b, carrier, &path.reverse()),
        Node::Subspace { base, region, graph } => {
            let v = verdict(base, carrier, path)?;
            if v.controlled && !region.contains_path(graph, path) {
                return Ok(Verdict::rejected(v, "path leaves the subspace region".into()));
            }
            Ok(v)
        }
        Node::Exclude { base, points } => {
            let v = verdict(base, carrier, path)?;
            if v.controlled && (points.contains(&path.start) || points.contains(&path.end)) {
                return Ok(Verdict::rejected(v, "path has an endpoint in the excluded set".into()));
            }
            Ok(v)
        }
        Node::Predicate { base, absorbing, avoid } => {
            let v = verdict(base, carrier, path)?;
            if !v.controlled {
                return Ok(v);
            }
            for p in avoid {
                if !touch_times(carrier, path, p)?.is_empty() {
                    return Ok(Verdict::rejected(v, format!("path touches the avoided point {p}")));
                }
            }
            let tokens = path.tokens();
            if let Some(last) = tokens.iter().rposition(|t| matches!(t, Token::Move(_))) {
                let settle = Rat::int(last as i64 + 1);
                for p in absorbing {
                    if touch_times(carrier, path, p)?.iter().any(|&t| t < settle) {
                        return Ok(Verdict::rejected(v, format!("path moves on after reaching {p}")));
                    }
                }
            }
            Ok(v)
        }
        Node::Meet(a, b) => {
            let va = verdict(a, carrier, path)?;
            if !va.controlled {
                return Ok(va);
            }
            let vb = verdict(b, carrier, path)?;
            Ok(Verdict { controlled: vb.controlled, parse: va.parse, factors: vec![], reason: vb.reason })
        }
    }
}

/// One-shot membership test.
pub fn is_controlled(space: &SpaceExpr, path: &CanonicalPath) -> Result<bool> {
    Space::new(space.clone())?.is_controlled(path)
}

/// One-shot parse; graph-like spaces only.
pub fn parse_controlled(space: &SpaceExpr, path: &CanonicalPath) -> Result<Parse> {
    let s = Space::new(space.clone())?;
    let v = s.verdict(path)?;
    match (v.parse, v.reason) {
        (Some(Parse::Controlled(_)), Some(reason)) => Ok(Parse::Failed(Failure {
            position: 0,
            at: path.start.clone(),
            reason,
        })),
        (Some(p), _) => Ok(p),
        (None, _) => Err(Error::Unsupported("decompositions are reported for graph-like spaces only".into())),
    }
}
