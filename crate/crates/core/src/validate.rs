//! Report-style checks of the structural invariants of space expressions.

use std::collections::BTreeSet;

use crate::carrier::Carrier;
use crate::rat::Rat;
use crate::space::{GraphPresentation, PausePos, Point, RegionPiece, SpaceExpr};

fn graph(g: &GraphPresentation, at: &str, out: &mut Vec<String>) {
    let mut vs = BTreeSet::new();
    for v in &g.vertices {
        if !vs.insert(v.as_str()) {
            out.push(format!("{at}: duplicate vertex id {v}"));
        }
    }
    let mut es = BTreeSet::new();
    for e in &g.edges {
        if !es.insert(e.id.as_str()) {
            out.push(format!("{at}: duplicate edge id {}", e.id));
        }
        if vs.contains(e.id.as_str()) {
            out.push(format!("{at}: id {} names both a vertex and an edge", e.id));
        }
        for v in [&e.from, &e.to] {
            if !vs.contains(v.as_str()) {
                out.push(format!("{at}: edge {} uses the undeclared vertex {v}", e.id));
            }
        }
        if let Err(err) = e.kind.check_params() {
            out.push(format!("{at}: edge {}: {}", e.id, err.message()));
        }
    }
    let end = |edge: &str, t: Rat| -> Option<Point> {
        let e = g.find_edge(edge)?;
        Some(if t == Rat::ZERO {
            Point::Vertex(e.from.clone())
        } else if t == Rat::ONE {
            Point::Vertex(e.to.clone())
        } else {
            Point::EdgePoint(edge.to_string(), t)
        })
    };
    for (i, t) in g.generators.iter().enumerate() {
        let at = format!("{at}: generator {i}");
        if t.steps.is_empty() {
            out.push(format!("{at} is empty"));
            continue;
        }
        for s in &t.steps {
            if !es.contains(s.edge.as_str()) {
                out.push(format!("{at} uses the undeclared edge {}", s.edge));
            }
            if s.from == s.to {
                out.push(format!("{at} has the constant step {s}"));
            }
            if !s.from.in_unit() || !s.to.in_unit() {
                out.push(format!("{at} has the step {s} outside [0, 1]"));
            }
        }
        for w in t.steps.windows(2) {
            let (a, b) = (end(&w[0].edge, w[0].to), end(&w[1].edge, w[1].from));
            if a.is_some() && b.is_some() && a != b {
                out.push(format!("{at}: steps {} and {} are not consecutive", w[0], w[1]));
            }
        }
        for p in &t.required_pauses {
            if let PausePos::Boundary(k) = p {
                if *k == 0 || *k >= t.steps.len() {
                    out.push(format!("{at}: pause position {k} is not an interior step boundary"));
                }
            }
        }
    }
    for f in &g.fragments {
        if !es.contains(f.edge.as_str()) {
            out.push(format!("{at}: fragment on the undeclared edge {}", f.edge));
        }
        let fr = &f.fragment;
        if fr.lo >= fr.hi || !fr.lo.in_unit() || !fr.hi.in_unit() {
            out.push(format!("{at}: fragment on {} has the bad range {}..{}", f.edge, fr.lo, fr.hi));
        }
    }
    let mut seen = BTreeSet::new();
    for (what, ps) in [("flexible", &g.flexible), ("excluded", &g.excluded)] {
        for p in ps {
            match p {
                Point::Vertex(v) if !vs.contains(v.as_str()) => {
                    out.push(format!("{at}: {what} point {p} is not a declared vertex"))
                }
                Point::EdgePoint(e, t) => {
                    if !es.contains(e.as_str()) {
                        out.push(format!("{at}: {what} point {p} is on an undeclared edge"));
                    } else if !t.is_interior() {
                        out.push(format!("{at}: {what} point {p} must have an interior parameter"));
                    }
                }
                Point::Tuple(_) | Point::Class(_) => out.push(format!("{at}: {what} point {p} is not a graph point")),
                _ => {}
            }
        }
    }
    for p in &g.flexible {
        seen.insert(p);
    }
    for p in &g.excluded {
        if seen.contains(p) {
            out.push(format!("{at}: {p} is both a flexible override and an excluded endpoint"));
        }
    }
}

fn ids(e: &SpaceExpr, out: &mut Vec<String>) {
    match e {
        SpaceExpr::Graph(g) => {
            out.extend(g.vertices.iter().cloned());
            out.extend(g.edges.iter().map(|e| e.id.clone()));
        }
        SpaceExpr::Sum(a, b) => {
            ids(a, out);
            ids(b, out);
        }
        SpaceExpr::Quotient { base, .. } => ids(base, out),
        _ => {}
    }
}

fn points_in(carrier: &Carrier, ps: &[Point], what: &str, at: &str, out: &mut Vec<String>) {
    for p in ps {
        if let Err(e) = carrier.normalize_point(p) {
            out.push(format!("{at}: {what} point {p}: {}", e.message()));
        }
    }
}

fn walk(e: &SpaceExpr, at: &str, out: &mut Vec<String>) {
    let before = out.len();
    let here = if at.is_empty() { e.op_name().to_string() } else { format!("{at}.{}", e.op_name()) };
    match e {
        SpaceExpr::Graph(g) => graph(g, &here, out),
        SpaceExpr::Product(a, b) => {
            walk(a, &format!("{here}[0]"), out);
            walk(b, &format!("{here}[1]"), out);
        }
        SpaceExpr::Sum(a, b) => {
            walk(a, &format!("{here}[0]"), out);
            walk(b, &format!("{here}[1]"), out);
            if out.len() == before {
                let (mut ia, mut ib) = (Vec::new(), Vec::new());
                ids(a, &mut ia);
                ids(b, &mut ib);
                let sa: BTreeSet<_> = ia.into_iter().collect();
                for id in ib {
                    if sa.contains(&id) {
                        out.push(format!("{here}: both operands use the id {id}"));
                    }
                }
            }
        }
        SpaceExpr::Quotient { base, classes } => {
            walk(base, &here, out);
            if out.len() == before {
                if let Ok(c) = Carrier::of(base) {
                    for class in classes {
                        for p in class {
                            match c.normalize_point(p) {
                                Ok(Point::Vertex(_)) => {}
                                Ok(q) => out.push(format!("{here}: only vertices can be identified, not {q}")),
                                Err(err) => out.push(format!("{here}: class member {p}: {}", err.message())),
                            }
                        }
                    }
                }
            }
        }
        SpaceExpr::Subspace { base, region } => {
            walk(base, &here, out);
            if out.len() == before {
                match Carrier::of(base) {
                    Ok(Carrier::Graph(g)) => {
                        for r in region {
                            match r {
                                RegionPiece::Edge { edge, lo, hi } => {
                                    if !g.has_edge(edge) {
                                        out.push(format!("{here}: region uses the unknown edge {edge}"));
                                    }
                                    if lo > hi || !lo.in_unit() || !hi.in_unit() {
                                        out.push(format!("{here}: region segment {edge} {lo}..{hi} is malformed"));
                                    }
                                }
                                RegionPiece::Vertex(v) => {
                                    if g.resolve_vertex(v).is_none() {
                                        out.push(format!("{here}: region uses the unknown vertex {v}"));
                                    }
                                }
                            }
                        }
                    }
                    Ok(Carrier::Product(..)) => out.push(format!("{here}: regions are supported in graph carriers only")),
                    Err(err) => out.push(format!("{here}: {}", err.message())),
                }
            }
        }
        SpaceExpr::Opposite(b) => walk(b, &here, out),
        SpaceExpr::ExcludeEndpoints { base, points } => {
            walk(base, &here, out);
            if out.len() == before {
                if let Ok(c) = Carrier::of(base) {
                    points_in(&c, points, "excluded", &here, out);
                }
            }
        }
        SpaceExpr::Predicate(p) => {
            walk(&p.base, &here, out);
            if out.len() == before {
                if let Ok(c) = Carrier::of(&p.base) {
                    points_in(&c, &p.absorbing, "absorbing", &here, out);
                    points_in(&c, &p.avoid, "avoided", &here, out);
                }
            }
        }
        SpaceExpr::Meet(a, b) => {
            walk(a, &format!("{here}[0]"), out);
            walk(b, &format!("{here}[1]"), out);
            if out.len() == before {
                if let (Ok(ca), Ok(cb)) = (Carrier::of(a), Carrier::of(b)) {
                    if !ca.same_geometry(&cb) {
                        out.push(format!("{here}: operands have different supports"));
                    }
                }
            }
        }
    }
}

/// Violations of the structural invariants; empty iff the expression is valid.
pub fn validate(e: &SpaceExpr) -> Vec<String> {
    let mut out = Vec::new();
    walk(e, "", &mut out);
    out
}
