//! Reachability through a finite abstraction: nodes are cell representatives, transitions are
//! single generator instances whose witnesses begin and end at nodes.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::carrier::Carrier;
use crate::cells::{cut_tree, CutTree};
use crate::error::{Error, Result};
use crate::membership::{touch_times, GraphEngine, Node, Space};
use crate::path::{pair, CanonicalPath, Step, Token};
use crate::rat::Rat;
use crate::space::{PausePos, Point, SpaceExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    C,
    D,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "c" => Ok(Mode::C),
            "d" => Ok(Mode::D),
            _ => Err(Error::Parse(format!("unknown mode {s:?} (expected c or d)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    pub witness: CanonicalPath,
}

/// Finite transition system of a graph-like space.
#[derive(Clone, Debug)]
pub struct Abstraction {
    pub carrier: Carrier,
    pub nodes: Vec<Point>,
    index: BTreeMap<Point, usize>,
    pub transitions: Vec<Transition>,
    /// Points no path may start or end at.
    pub bans: BTreeSet<Point>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

/// The two factors of a product expression, pushing opposites inside.
pub fn split_product(expr: &SpaceExpr) -> Option<(SpaceExpr, SpaceExpr)> {
    match expr {
        SpaceExpr::Product(a, b) => Some(((**a).clone(), (**b).clone())),
        SpaceExpr::Opposite(e) => {
            let (a, b) = split_product(e)?;
            Some((SpaceExpr::Opposite(Box::new(a)), SpaceExpr::Opposite(Box::new(b))))
        }
        _ => None,
    }
}

fn rigid_witness(engine: &GraphEngine, trace: &crate::space::RigidTrace) -> Result<CanonicalPath> {
    let carrier = Carrier::Graph(engine.graph.clone());
    let pauses = trace.pause_indices();
    let mut tokens = Vec::new();
    for (i, s) in trace.steps.iter().enumerate() {
        if pauses.contains(&i) {
            tokens.push(Token::Pause);
        }
        tokens.push(Token::Move(Step::Edge(s.clone())));
    }
    if trace.required_pauses.contains(&PausePos::End) {
        tokens.push(Token::Pause);
    }
    let start = engine.graph.seg_start(&trace.steps[0])?;
    CanonicalPath::build(&carrier, &start, tokens)
}

fn raw(node: &Node, carrier: &Carrier, cuts: &crate::membership::Cuts) -> Result<(Vec<CanonicalPath>, BTreeSet<Point>)> {
    match node {
        Node::Graph(engine) => {
            let mut out = Vec::new();
            for g in &engine.rigid {
                out.push(rigid_witness(engine, &g.trace)?);
            }
            for f in &engine.fragments {
                let Some(ps) = cuts.get(&f.edge) else { continue };
                for &a in ps {
                    for &b in ps {
                        if f.fragment.admits_run(a, b) {
                            let start = engine.graph.point_at(&f.edge, a)?;
                            out.push(CanonicalPath::build(carrier, &start, vec![Token::Move(Step::seg(&f.edge, a, b))])?);
                        }
                    }
                }
            }
            Ok((out, engine.excluded.clone()))
        }
        Node::Opposite(b) => {
            let (ws, bans) = raw(b, carrier, cuts)?;
            Ok((ws.iter().map(CanonicalPath::reverse).collect(), bans))
        }
        Node::Subspace { base, region, graph } => {
            let (ws, bans) = raw(base, carrier, cuts)?;
            Ok((ws.into_iter().filter(|w| region.contains_path(graph, w)).collect(), bans))
        }
        Node::Exclude { base, points } => {
            let (ws, mut bans) = raw(base, carrier, cuts)?;
            bans.extend(points.iter().cloned());
            Ok((ws, bans))
        }
        Node::Predicate { base, absorbing, avoid } => {
            let (ws, bans) = raw(base, carrier, cuts)?;
            let mut keep = Vec::new();
            'w: for w in ws {
                for p in avoid {
                    if !touch_times(carrier, &w, p)?.is_empty() {
                        continue 'w;
                    }
                }
                let tokens = w.tokens();
                let last = tokens.iter().rposition(|t| matches!(t, Token::Move(_))).unwrap_or(0);
                let settle = Rat::int(last as i64 + 1);
                for p in absorbing {
                    if touch_times(carrier, &w, p)?.iter().any(|&t| t < settle) {
                        continue 'w;
                    }
                }
                keep.push(w);
            }
            Ok((keep, bans))
        }
        Node::Meet(..) => Err(Error::Unsupported("reachability in a meet of spaces".into())),
        Node::Product(..) => Err(Error::Unsupported("wrapper around a product".into())),
    }
}

impl Abstraction {
    /// Abstraction of a graph-like space; `extra` points become nodes.
    pub fn new(space: &Space, extra: &[Point]) -> Result<Abstraction> {
        let Carrier::Graph(g) = &space.carrier else {
            return Err(Error::Unsupported("abstraction of a product".into()));
        };
        let extra: Vec<Point> = extra.iter().map(|p| space.point(p)).collect::<Result<_>>()?;
        let CutTree::Graph(cuts) = cut_tree(space, &[], &extra)? else {
            return Err(Error::Unsupported("abstraction of a product".into()));
        };
        let mut node_set = BTreeSet::new();
        for v in g.vertices() {
            node_set.insert(Point::Vertex(v.clone()));
        }
        for (e, ps) in &cuts {
            for &t in ps {
                node_set.insert(g.point_at(e, t)?);
            }
        }
        let nodes: Vec<Point> = node_set.into_iter().collect();
        let index: BTreeMap<Point, usize> = nodes.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let (ws, bans) = raw(&space.node, &space.carrier, &cuts)?;
        let mut transitions = Vec::new();
        let mut seen = BTreeSet::new();
        for w in ws {
            let key = w.to_string();
            if !seen.insert(key) {
                continue;
            }
            let (Some(&from), Some(&to)) = (index.get(&w.start), index.get(&w.end)) else {
                return Err(Error::Invalid(format!("transition {w} does not join nodes")));
            };
            transitions.push(Transition { from, to, witness: w });
        }
        let first_edge = |t: &Transition| t.witness.steps().next().map(|s| s.to_string()).unwrap_or_default();
        transitions.sort_by(|a, b| (a.from, first_edge(a), a.to).cmp(&(b.from, first_edge(b), b.to)));
        let mut out = vec![Vec::new(); nodes.len()];
        let mut inn = vec![Vec::new(); nodes.len()];
        for (i, t) in transitions.iter().enumerate() {
            out[t.from].push(i);
            inn[t.to].push(i);
        }
        Ok(Abstraction { carrier: space.carrier.clone(), nodes, index, transitions, bans, out, inn })
    }

    pub fn node(&self, p: &Point) -> Result<usize> {
        let p = self.carrier.normalize_point(p)?;
        self.index.get(&p).copied().ok_or_else(|| Error::Invalid(format!("{p} is not a node of the abstraction")))
    }

    pub fn banned(&self, i: usize) -> bool {
        self.bans.contains(&self.nodes[i])
    }

    pub fn touches(&self, t: usize, p: &Point) -> Result<bool> {
        Ok(!touch_times(&self.carrier, &self.transitions[t].witness, p)?.is_empty())
    }

    /// Fewest transitions (at least one) from `x` to `y`, skipping rejected transitions.
    pub fn shortest(&self, x: usize, y: usize, skip: &dyn Fn(usize) -> bool) -> Option<Vec<usize>> {
        let mut prev: Vec<Option<usize>> = vec![None; self.nodes.len()];
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::new();
        for &t in &self.out[x] {
            if skip(t) {
                continue;
            }
            let to = self.transitions[t].to;
            if !seen[to] {
                seen[to] = true;
                prev[to] = Some(t);
                queue.push_back(to);
            }
        }
        while let Some(u) = queue.pop_front() {
            if u == y {
                let mut chain = Vec::new();
                let mut cur = y;
                loop {
                    let t = prev[cur].unwrap();
                    chain.push(t);
                    cur = self.transitions[t].from;
                    if cur == x {
                        break;
                    }
                }
                chain.reverse();
                return Some(chain);
            }
            for &t in &self.out[u] {
                if skip(t) {
                    continue;
                }
                let to = self.transitions[t].to;
                if !seen[to] {
                    seen[to] = true;
                    prev[to] = Some(t);
                    queue.push_back(to);
                }
            }
        }
        None
    }

    /// Nodes reachable from `seeds` with zero or more transitions (backwards when `reverse`).
    pub fn closure(&self, seeds: &[usize], reverse: bool) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack: Vec<usize> = seeds.to_vec();
        for &s in seeds {
            seen[s] = true;
        }
        while let Some(u) = stack.pop() {
            let edges = if reverse { &self.inn[u] } else { &self.out[u] };
            for &t in edges {
                let v = if reverse { self.transitions[t].from } else { self.transitions[t].to };
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    pub fn witness(&self, chain: &[usize]) -> Result<CanonicalPath> {
        let mut it = chain.iter();
        let mut w = self.transitions[*it.next().expect("nonempty chain")].witness.clone();
        for &t in it {
            w = w.concat(&self.transitions[t].witness)?;
        }
        Ok(w)
    }

    pub fn out_of(&self, i: usize) -> &[usize] {
        &self.out[i]
    }

    pub fn into_node(&self, i: usize) -> &[usize] {
        &self.inn[i]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reach {
    pub reachable: bool,
    pub witness: Option<CanonicalPath>,
}

/// The space whose controlled paths a mode quantifies over.
pub fn in_mode(space: &Space, mode: Mode) -> Result<Space> {
    match mode {
        Mode::C => Ok(space.clone()),
        Mode::D => Space::new(crate::construct::hat(&space.expr)?),
    }
}

fn tuple2(p: &Point) -> Result<(&Point, &Point)> {
    match p {
        Point::Tuple(ps) if ps.len() == 2 => Ok((&ps[0], &ps[1])),
        _ => Err(Error::Invalid(format!("{p} is not a point of a product"))),
    }
}

/// A controlled path from `x` to `y` with the fewest generator instances; the trivial path
/// counts when `x = y` is flexible.
pub fn exists_path(space: &Space, x: &Point, y: &Point) -> Result<Option<CanonicalPath>> {
    let x = space.point(x)?;
    let y = space.point(y)?;
    if let Some((a, b)) = split_product(&space.expr) {
        let ((x0, x1), (y0, y1)) = (tuple2(&x)?, tuple2(&y)?);
        let Some(pa) = exists_path(&Space::new(a)?, x0, y0)? else { return Ok(None) };
        let Some(pb) = exists_path(&Space::new(b)?, x1, y1)? else { return Ok(None) };
        return Ok(Some(pair(&space.carrier, &pa, &pb)?));
    }
    if x == y && space.is_flexible_point(&x)? {
        return Ok(Some(CanonicalPath::trivial(x)));
    }
    let abs = Abstraction::new(space, &[x.clone(), y.clone()])?;
    let (xi, yi) = (abs.node(&x)?, abs.node(&y)?);
    if abs.banned(xi) || abs.banned(yi) {
        return Ok(None);
    }
    match abs.shortest(xi, yi, &|_| false) {
        Some(chain) => Ok(Some(abs.witness(&chain)?)),
        None => Ok(None),
    }
}

/// Reachability in the given mode; every point reaches itself.
pub fn reachable(space: &Space, x: &Point, y: &Point, mode: Mode) -> Result<Reach> {
    let s = in_mode(space, mode)?;
    let witness = exists_path(&s, x, y)?;
    let same = s.point(x)? == s.point(y)?;
    Ok(Reach { reachable: same || witness.is_some(), witness })
}

pub fn c_reachable(space: &Space, x: &Point, y: &Point) -> Result<Reach> {
    reachable(space, x, y, Mode::C)
}

pub fn d_reachable(space: &Space, x: &Point, y: &Point) -> Result<Reach> {
    reachable(space, x, y, Mode::D)
}

/// Whether every path of the mode from `x` to `y` passes through `p`.
pub fn unavoidable_point(space: &Space, x: &Point, y: &Point, p: &Point, mode: Mode) -> Result<bool> {
    if !reachable(space, x, y, mode)?.reachable {
        return Err(Error::Precondition(format!("{y} is not reachable from {x}")));
    }
    let s = in_mode(space, mode)?;
    let (x, y, p) = (s.point(x)?, s.point(y)?, s.point(p)?);
    if p == x || p == y {
        return Ok(true);
    }
    if x == y {
        return Ok(false);
    }
    if split_product(&s.expr).is_some() {
        return Err(Error::Unsupported("unavoidable points in products".into()));
    }
    let abs = Abstraction::new(&s, &[x.clone(), y.clone(), p.clone()])?;
    let touching: Vec<bool> = (0..abs.transitions.len()).map(|t| abs.touches(t, &p)).collect::<Result<_>>()?;
    let (xi, yi) = (abs.node(&x)?, abs.node(&y)?);
    Ok(abs.shortest(xi, yi, &|t| touching[t]).is_none())
}

/// A preorder on finitely many representative points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub nodes: Vec<Point>,
    pub matrix: Vec<Vec<bool>>,
}

impl Relation {
    pub fn index(&self, p: &Point) -> Option<usize> {
        self.nodes.iter().position(|q| q == p)
    }

    pub fn get(&self, x: &Point, y: &Point) -> Option<bool> {
        Some(self.matrix[self.index(x)?][self.index(y)?])
    }
}

fn path_matrix(space: &Space) -> Result<Relation> {
    if let Some((a, b)) = split_product(&space.expr) {
        let ra = path_matrix(&Space::new(a)?)?;
        let rb = path_matrix(&Space::new(b)?)?;
        let mut nodes = Vec::new();
        for p in &ra.nodes {
            for q in &rb.nodes {
                nodes.push(Point::Tuple(vec![p.clone(), q.clone()]));
            }
        }
        let nb = rb.nodes.len();
        let n = nodes.len();
        let mut matrix = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                matrix[i][j] = ra.matrix[i / nb][j / nb] && rb.matrix[i % nb][j % nb];
            }
        }
        return Ok(Relation { nodes, matrix });
    }
    let abs = Abstraction::new(space, &[])?;
    let n = abs.nodes.len();
    let mut matrix = vec![vec![false; n]; n];
    for i in 0..n {
        if abs.banned(i) {
            continue;
        }
        let seeds: Vec<usize> = abs.out_of(i).iter().map(|&t| abs.transitions[t].to).collect();
        let seen = abs.closure(&seeds, false);
        for j in 0..n {
            matrix[i][j] = seen[j] && !abs.banned(j);
        }
        if space.is_flexible_point(&abs.nodes[i])? {
            matrix[i][i] = true;
        }
    }
    Ok(Relation { nodes: abs.nodes, matrix })
}

/// Reachability preorder over the representative points of the mode's space.
pub fn reach_relation(space: &Space, mode: Mode) -> Result<Relation> {
    let s = in_mode(space, mode)?;
    let mut r = path_matrix(&s)?;
    for i in 0..r.nodes.len() {
        r.matrix[i][i] = true;
    }
    Ok(r)
}
