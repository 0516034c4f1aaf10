//! Exhaustive reference decision procedure.
//!
//! Enumerates concatenations of at most `depth` generator instances, where fragment families
//! are instantiated explicitly as runs between points of a parameter grid, and compares each
//! concatenation with the target path up to inserted pauses. Slow and bounded, and shares
//! nothing with the factorization engine beyond the kind tables.

use std::collections::{BTreeMap, BTreeSet};

use crate::carrier::{normalize_graph, Carrier, NormGraph};
use crate::error::{Error, Result};
use crate::kind::{kind_generators, EdgeKind};
use crate::path::{CanonicalPath, Step, Token};
use crate::rat::Rat;
use crate::space::{Point, Segment, SpaceExpr};

const MAX_DEPTH: usize = 8;
const MAX_GRID: u32 = 64;
const MAX_NODES: usize = 2_000_000;

struct Candidate {
    atoms: Vec<Segment>,
    /// Offsets (in atoms) where the instance insists on a pause.
    pauses: Vec<usize>,
}

fn split(s: &Segment, cuts: &BTreeSet<Rat>) -> Vec<Segment> {
    let mut pts: Vec<Rat> = cuts.iter().copied().filter(|&c| s.lo() < c && c < s.hi()).collect();
    if s.from > s.to {
        pts.reverse();
    }
    let mut out = Vec::new();
    let mut cur = s.from;
    for p in pts {
        out.push(Segment::new(&s.edge, cur, p));
        cur = p;
    }
    out.push(Segment::new(&s.edge, cur, s.to));
    out
}

/// Brute-force membership in a graph-like space or a binary product of such.
pub fn brute_force_controlled(space: &SpaceExpr, path: &CanonicalPath, depth: usize, grid: u32) -> Result<bool> {
    if depth > MAX_DEPTH || grid == 0 || grid > MAX_GRID {
        return Err(Error::ResourceBound(format!(
            "depth {depth} / grid {grid} outside the limits {MAX_DEPTH} / 1..={MAX_GRID}"
        )));
    }
    match space {
        SpaceExpr::Product(a, b) => {
            Ok(brute_force_controlled(a, &path.project(0)?, depth, grid)?
                && brute_force_controlled(b, &path.project(1)?, depth, grid)?)
        }
        SpaceExpr::Graph(_) | SpaceExpr::Sum(..) | SpaceExpr::Quotient { .. } => {
            let g = normalize_graph(space)?;
            path.check(&Carrier::Graph(std::sync::Arc::new(g.clone())))?;
            graph_brute_force(&g, path, depth, grid)
        }
        other => Err(Error::Unsupported(format!("brute force over a {} expression", other.op_name()))),
    }
}

fn graph_brute_force(g: &NormGraph, path: &CanonicalPath, depth: usize, grid: u32) -> Result<bool> {
    let mut rigid = Vec::new();
    let mut fragments = Vec::new();
    for e in g.edges() {
        let fam = kind_generators(&e.kind, &e.id)?;
        rigid.extend(fam.rigid);
        fragments.extend(fam.fragments.into_iter().map(|f| (e.id.clone(), f)));
    }
    rigid.extend(g.pres.generators.iter().cloned());
    fragments.extend(g.pres.fragments.iter().map(|f| (f.edge.clone(), f.fragment.clone())));

    // grid points, path breakpoints and generator parameters on every edge
    let mut cuts: BTreeMap<String, BTreeSet<Rat>> = BTreeMap::new();
    for e in g.edges() {
        let c = cuts.entry(e.id.clone()).or_default();
        c.extend((0..=grid as i64).map(|i| Rat::new(i, grid as i64)));
    }
    for s in path.steps() {
        if let Step::Edge(s) = s {
            cuts.entry(s.edge.clone()).or_default().extend([s.from, s.to]);
        }
    }
    if let Point::EdgePoint(e, t) = &path.start {
        cuts.entry(e.clone()).or_default().insert(*t);
    }
    for t in &rigid {
        for s in &t.steps {
            cuts.entry(s.edge.clone()).or_default().extend([s.from, s.to]);
        }
    }
    for (e, f) in &fragments {
        cuts.entry(e.clone()).or_default().extend([f.lo, f.hi]);
    }

    let mut cands: Vec<Candidate> = Vec::new();
    for t in &rigid {
        let mut atoms = Vec::new();
        let mut offsets = vec![0];
        for s in &t.steps {
            atoms.extend(split(s, &cuts[&s.edge]));
            offsets.push(atoms.len());
        }
        let pauses = t.pause_indices().into_iter().map(|i| offsets[i]).collect();
        cands.push(Candidate { atoms, pauses });
    }
    for (e, f) in &fragments {
        let pts: Vec<Rat> = cuts[e].iter().copied().collect();
        for &a in &pts {
            for &b in &pts {
                if f.admits_run(a, b) {
                    cands.push(Candidate { atoms: split(&Segment::new(e, a, b), &cuts[e]), pauses: vec![] });
                }
            }
        }
    }

    // target atoms and pause flags
    let mut atoms: Vec<Segment> = Vec::new();
    let mut pause = vec![false];
    for t in path.tokens() {
        match t {
            Token::Pause => *pause.last_mut().unwrap() = true,
            Token::Move(Step::Edge(s)) => {
                for a in split(&s, &cuts[&s.edge]) {
                    atoms.push(a);
                    pause.push(false);
                }
            }
            Token::Move(Step::Tuple(_)) => return Err(Error::PathOutsideSupport("product path in a graph".into())),
        }
    }

    let excluded: BTreeSet<Point> = g.pres.excluded.iter().map(|p| g.normalize_point(p)).collect::<Result<_>>()?;
    if atoms.is_empty() {
        return Ok(!excluded.contains(&path.start) && brute_flexible(g, &path.start, &cands)?);
    }
    if excluded.contains(&path.start) || excluded.contains(&path.end) {
        return Ok(false);
    }
    let mut nodes = 0usize;
    dfs(&atoms, &pause, &cands, 0, depth, &mut nodes)
}

fn dfs(atoms: &[Segment], pause: &[bool], cands: &[Candidate], pos: usize, left: usize, nodes: &mut usize) -> Result<bool> {
    *nodes += 1;
    if *nodes > MAX_NODES {
        return Err(Error::ResourceBound(format!("more than {MAX_NODES} search nodes")));
    }
    if pos == atoms.len() {
        return Ok(true);
    }
    if left == 0 {
        return Ok(false);
    }
    for c in cands {
        let end = pos + c.atoms.len();
        if end <= atoms.len()
            && atoms[pos..end] == c.atoms[..]
            && c.pauses.iter().all(|&o| pause[pos + o])
            && dfs(atoms, pause, cands, end, left - 1, nodes)?
        {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Trivial loop controlled: declared flexible, on a still edge, or an endpoint of an instance.
fn brute_flexible(g: &NormGraph, p: &Point, cands: &[Candidate]) -> Result<bool> {
    for q in &g.pres.flexible {
        if &g.normalize_point(q)? == p {
            return Ok(true);
        }
    }
    for (e, _) in g.positions(p) {
        if g.edge(&e)?.kind == EdgeKind::Still {
            return Ok(true);
        }
    }
    for c in cands {
        let (Some(a), Some(b)) = (c.atoms.first(), c.atoms.last()) else { continue };
        if &g.seg_start(a)? == p || &g.seg_end(b)? == p {
            return Ok(true);
        }
    }
    Ok(false)
}
