//! JSON documents for models, paths, tracks and query results.
//!
//! Rationals travel as `"p/q"` strings and points in their textual syntax. Objects are built
//! through [`serde_json::Value`], whose maps keep keys sorted.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::kind::{EdgeKind, Fragment};
use crate::membership::{Parse, Verdict};
use crate::path::{CanonicalPath, Item, Step};
use crate::rat::Rat;
use crate::space::{
    Dir, Edge, EdgeFragment, GraphPresentation, PausePos, Point, PredicateSpace, RegionPiece, RigidTrace, Segment,
    SpaceExpr,
};
use crate::track::Track;

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

fn string(v: &Value, key: &str) -> Result<String> {
    field(v, key)?.as_str().map(str::to_string).ok_or_else(|| bad(format!("field {key:?} must be a string")))
}

fn rat_of(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) if n.is_i64() => Ok(Rat::int(n.as_i64().unwrap())),
        _ => Err(bad(format!("expected a rational, got {v}"))),
    }
}

fn rat(v: &Value, key: &str) -> Result<Rat> {
    rat_of(field(v, key)?)
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    match v.get(key) {
        Some(Value::Array(a)) => Ok(a),
        Some(_) => Err(bad(format!("field {key:?} must be an array"))),
        None => Err(bad(format!("missing field {key:?}"))),
    }
}

fn opt_array<'a>(v: &'a Value, key: &str) -> Result<&'a [Value]> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(&[]),
        Some(Value::Array(a)) => Ok(a),
        Some(_) => Err(bad(format!("field {key:?} must be an array"))),
    }
}

pub fn point_to_json(p: &Point) -> Value {
    Value::String(p.to_string())
}

pub fn point_from_json(v: &Value) -> Result<Point> {
    v.as_str().ok_or_else(|| bad(format!("expected a point string, got {v}")))?.parse()
}

fn points(v: &Value, key: &str) -> Result<Vec<Point>> {
    opt_array(v, key)?.iter().map(point_from_json).collect()
}

fn dir_name(d: Dir) -> &'static str {
    match d {
        Dir::Forward => "forward",
        Dir::Backward => "backward",
    }
}

pub fn segment_to_json(s: &Segment) -> Value {
    json!({"edge": s.edge, "dir": dir_name(s.dir()), "from": s.from.to_string(), "to": s.to.to_string()})
}

pub fn segment_from_json(v: &Value) -> Result<Segment> {
    let s = Segment::new(&string(v, "edge")?, rat(v, "from")?, rat(v, "to")?);
    if let Some(d) = v.get("dir") {
        let d = d.as_str().ok_or_else(|| bad("dir must be a string"))?;
        let expected = match d {
            "forward" => Dir::Forward,
            "backward" => Dir::Backward,
            other => return Err(bad(format!("unknown direction {other:?}"))),
        };
        if s.from != s.to && s.dir() != expected {
            return Err(bad(format!("step {s} is not {d}")));
        }
    }
    Ok(s)
}

pub fn step_to_json(s: &Step) -> Value {
    match s {
        Step::Edge(seg) => segment_to_json(seg),
        Step::Tuple(xs) => json!({"tuple": xs.iter().map(|x| x.as_ref().map_or(Value::Null, step_to_json)).collect::<Vec<_>>()}),
    }
}

pub fn step_from_json(v: &Value) -> Result<Step> {
    if let Some(t) = v.get("tuple") {
        let xs = t.as_array().ok_or_else(|| bad("tuple must be an array"))?;
        return Ok(Step::Tuple(
            xs.iter().map(|x| if x.is_null() { Ok(None) } else { step_from_json(x).map(Some) }).collect::<Result<_>>()?,
        ));
    }
    Ok(Step::Edge(segment_from_json(v)?))
}

fn trace_to_json(t: &RigidTrace) -> Value {
    let pauses: Vec<Value> = t
        .required_pauses
        .iter()
        .map(|p| match p {
            PausePos::Start => json!("start"),
            PausePos::End => json!("end"),
            PausePos::Boundary(i) => json!(i),
        })
        .collect();
    json!({"steps": t.steps.iter().map(segment_to_json).collect::<Vec<_>>(), "pauses": pauses})
}

fn trace_from_json(v: &Value) -> Result<RigidTrace> {
    let steps = array(v, "steps")?.iter().map(segment_from_json).collect::<Result<Vec<_>>>()?;
    let mut t = RigidTrace::new(steps);
    for p in opt_array(v, "pauses")? {
        let pos = match p {
            Value::String(s) if s == "start" => PausePos::Start,
            Value::String(s) if s == "end" => PausePos::End,
            Value::Number(n) => PausePos::from_index(
                n.as_u64().ok_or_else(|| bad("pause index must be a natural number"))? as usize,
                t.steps.len(),
            ),
            _ => return Err(bad(format!("bad pause position {p}"))),
        };
        t.required_pauses.insert(pos);
    }
    Ok(t)
}

fn edge_to_json(e: &Edge) -> Value {
    let mut params = Map::new();
    if let Some(n) = e.kind.param_n() {
        params.insert("n".into(), json!(n));
    }
    json!({"id": e.id, "from": e.from, "to": e.to, "kind": e.kind.name(), "params": params})
}

fn edge_from_json(v: &Value) -> Result<Edge> {
    let n = match v.get("params").and_then(|p| p.get("n")) {
        None => None,
        Some(n) => Some(
            n.as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| bad("parameter n must be a natural number"))?,
        ),
    };
    Ok(Edge {
        id: string(v, "id")?,
        from: string(v, "from")?,
        to: string(v, "to")?,
        kind: EdgeKind::from_parts(&string(v, "kind")?, n)?,
    })
}

fn graph_to_json(g: &GraphPresentation) -> Value {
    let fragments: Vec<Value> = g
        .fragments
        .iter()
        .map(|f| {
            let mut v = serde_json::to_value(&f.fragment).expect("fragment serializes");
            v["edge"] = json!(f.edge);
            v
        })
        .collect();
    json!({
        "vertices": g.vertices,
        "edges": g.edges.iter().map(edge_to_json).collect::<Vec<_>>(),
        "generators": g.generators.iter().map(trace_to_json).collect::<Vec<_>>(),
        "fragments": fragments,
        "flexible": g.flexible.iter().map(point_to_json).collect::<Vec<_>>(),
        "excluded": g.excluded.iter().map(point_to_json).collect::<Vec<_>>(),
    })
}

fn graph_from_json(v: &Value) -> Result<GraphPresentation> {
    let mut g = GraphPresentation::new();
    for x in opt_array(v, "vertices")? {
        g.vertices.push(x.as_str().ok_or_else(|| bad("vertex ids must be strings"))?.to_string());
    }
    for e in array(v, "edges")? {
        let e = edge_from_json(e)?;
        for w in [&e.from, &e.to] {
            if !g.vertices.contains(w) {
                g.vertices.push(w.clone());
            }
        }
        g.edges.push(e);
    }
    g.generators = opt_array(v, "generators")?.iter().map(trace_from_json).collect::<Result<_>>()?;
    for f in opt_array(v, "fragments")? {
        let fragment: Fragment = serde_json::from_value(f.clone()).map_err(|e| bad(format!("bad fragment: {e}")))?;
        g.fragments.push(EdgeFragment { edge: string(f, "edge")?, fragment });
    }
    g.flexible = points(v, "flexible")?;
    g.excluded = points(v, "excluded")?;
    Ok(g)
}

fn region_to_json(r: &RegionPiece) -> Value {
    match r {
        RegionPiece::Edge { edge, lo, hi } => json!({"edge": edge, "lo": lo.to_string(), "hi": hi.to_string()}),
        RegionPiece::Vertex(v) => json!({"vertex": v}),
    }
}

fn region_from_json(v: &Value) -> Result<RegionPiece> {
    if let Some(x) = v.get("vertex") {
        return Ok(RegionPiece::Vertex(x.as_str().ok_or_else(|| bad("vertex must be a string"))?.into()));
    }
    let edge = string(v, "edge")?;
    let lo = v.get("lo").map(rat_of).transpose()?.unwrap_or(Rat::ZERO);
    let hi = v.get("hi").map(rat_of).transpose()?.unwrap_or(Rat::ONE);
    Ok(RegionPiece::Edge { edge, lo, hi })
}

pub fn space_to_json(e: &SpaceExpr) -> Value {
    let op = |name: &str, args: Vec<&SpaceExpr>, extra: Value| {
        let mut m = Map::new();
        m.insert("op".into(), json!(name));
        m.insert("args".into(), Value::Array(args.into_iter().map(space_to_json).collect()));
        if let Value::Object(x) = extra {
            m.extend(x);
        }
        json!({"expr": m})
    };
    let pts = |ps: &[Point]| ps.iter().map(point_to_json).collect::<Vec<_>>();
    match e {
        SpaceExpr::Graph(g) => json!({"graph": graph_to_json(g)}),
        SpaceExpr::Product(a, b) => op("product", vec![a, b], json!({})),
        SpaceExpr::Sum(a, b) => op("sum", vec![a, b], json!({})),
        SpaceExpr::Meet(a, b) => op("meet", vec![a, b], json!({})),
        SpaceExpr::Opposite(b) => op("opposite", vec![b], json!({})),
        SpaceExpr::Quotient { base, classes } => op(
            "quotient",
            vec![base],
            json!({"classes": classes.iter().map(|c| pts(c)).collect::<Vec<_>>()}),
        ),
        SpaceExpr::Subspace { base, region } => {
            op("subspace", vec![base], json!({"region": region.iter().map(region_to_json).collect::<Vec<_>>()}))
        }
        SpaceExpr::ExcludeEndpoints { base, points } => op("exclude", vec![base], json!({"points": pts(points)})),
        SpaceExpr::Predicate(p) => op(
            "predicate",
            vec![&p.base],
            json!({"absorbing": pts(&p.absorbing), "avoid": pts(&p.avoid)}),
        ),
    }
}

pub fn space_from_json(v: &Value) -> Result<SpaceExpr> {
    if let Some(g) = v.get("graph") {
        return Ok(SpaceExpr::Graph(graph_from_json(g)?));
    }
    let x = v.get("expr").ok_or_else(|| bad("a model needs a \"graph\" or an \"expr\" object"))?;
    let op = string(x, "op")?;
    let args = array(x, "args")?.iter().map(space_from_json).collect::<Result<Vec<_>>>()?;
    let want = match op.as_str() {
        "product" | "sum" | "meet" => 2,
        "opposite" | "quotient" | "subspace" | "exclude" | "predicate" => 1,
        other => return Err(Error::Unknown(format!("operation {other}"))),
    };
    if args.len() != want {
        return Err(bad(format!("{op} takes {want} argument(s), got {}", args.len())));
    }
    let mut it = args.into_iter();
    let mut next = || Box::new(it.next().unwrap());
    Ok(match op.as_str() {
        "product" => SpaceExpr::Product(next(), next()),
        "sum" => SpaceExpr::Sum(next(), next()),
        "meet" => SpaceExpr::Meet(next(), next()),
        "opposite" => SpaceExpr::Opposite(next()),
        "quotient" => SpaceExpr::Quotient {
            base: next(),
            classes: array(x, "classes")?
                .iter()
                .map(|c| c.as_array().ok_or_else(|| bad("classes must be arrays"))?.iter().map(point_from_json).collect())
                .collect::<Result<_>>()?,
        },
        "subspace" => SpaceExpr::Subspace {
            base: next(),
            region: array(x, "region")?.iter().map(region_from_json).collect::<Result<_>>()?,
        },
        "exclude" => SpaceExpr::ExcludeEndpoints { base: next(), points: points(x, "points")? },
        _ => SpaceExpr::Predicate(PredicateSpace {
            base: next(),
            absorbing: points(x, "absorbing")?,
            avoid: points(x, "avoid")?,
        }),
    })
}

pub fn path_to_json(p: &CanonicalPath) -> Value {
    let items: Vec<Value> = p
        .items
        .iter()
        .map(|it| match it {
            Item::Pause => json!({"pause": true}),
            Item::Run(steps) => json!({"run": steps.iter().map(step_to_json).collect::<Vec<_>>()}),
        })
        .collect();
    json!({"start": p.start.to_string(), "end": p.end.to_string(), "items": items})
}

/// A path document in either form, before it is checked against a carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathDoc {
    Track(Track),
    Items { start: Point, items: Vec<Item> },
}

pub fn path_doc_from_json(v: &Value) -> Result<PathDoc> {
    if let Some(t) = v.get("track") {
        let bps = t.as_array().ok_or_else(|| bad("track must be an array"))?;
        let bps = bps
            .iter()
            .map(|b| Ok((rat(b, "t")?, point_from_json(field(b, "at")?)?)))
            .collect::<Result<Vec<_>>>()?;
        return Ok(PathDoc::Track(Track::new(bps)));
    }
    let start = point_from_json(field(v, "start")?)?;
    let mut items = Vec::new();
    for it in opt_array(v, "items")? {
        if it.get("pause").is_some() {
            items.push(Item::Pause);
        } else {
            let steps = array(it, "run")?.iter().map(step_from_json).collect::<Result<_>>()?;
            items.push(Item::Run(steps));
        }
    }
    Ok(PathDoc::Items { start, items })
}

pub fn track_to_json(t: &Track) -> Value {
    json!({"track": t.breakpoints.iter().map(|(t, p)| json!({"t": t.to_string(), "at": p.to_string()})).collect::<Vec<_>>()})
}

fn parse_to_json(p: &Parse) -> Map<String, Value> {
    let mut m = Map::new();
    match p {
        Parse::Controlled(d) => {
            let inst: Vec<Value> = d
                .instances
                .iter()
                .map(|i| json!({"generator": i.label, "rigid": i.rigid, "from": i.from, "to": i.to, "path": path_to_json(&i.path)}))
                .collect();
            m.insert("decomposition".into(), Value::Array(inst));
        }
        Parse::Failed(f) => {
            m.insert("failure".into(), json!({"position": f.position, "at": f.at.to_string(), "reason": f.reason}));
        }
    }
    m
}

pub fn verdict_to_json(v: &Verdict) -> Value {
    let mut m = Map::new();
    m.insert("controlled".into(), json!(v.controlled));
    if let Some(p) = &v.parse {
        m.extend(parse_to_json(p));
    }
    if !v.factors.is_empty() {
        m.insert("factors".into(), Value::Array(v.factors.iter().map(verdict_to_json).collect()));
    }
    if let Some(r) = &v.reason {
        m.insert("reason".into(), json!(r));
    }
    Value::Object(m)
}

pub fn error_to_json(e: &Error) -> Value {
    json!({"error": {"kind": e.kind(), "message": e.message()}})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn corpus_round_trips() {
        for name in corpus::NAMES {
            let e = corpus::build(name, &Default::default()).unwrap();
            let v = space_to_json(&e);
            let text = serde_json::to_string(&v).unwrap();
            let back = space_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back, e, "{name}");
        }
    }

    #[test]
    fn path_documents() {
        let v: Value = serde_json::from_str(
            r#"{"start":"v:v0","items":[{"pause":true},{"run":[{"edge":"e0","dir":"forward","from":"0","to":"1/2"},{"edge":"e0","from":"1/2","to":"1"}]}]}"#,
        )
        .unwrap();
        let PathDoc::Items { start, items } = path_doc_from_json(&v).unwrap() else { panic!() };
        assert_eq!(start, Point::v("v0"));
        assert_eq!(items.len(), 2);
        let bad_dir: Value =
            serde_json::from_str(r#"{"start":"v:v0","items":[{"run":[{"edge":"e0","dir":"backward","from":"0","to":"1"}]}]}"#)
                .unwrap();
        assert!(path_doc_from_json(&bad_dir).is_err());
        let t: Value = serde_json::from_str(r#"{"track":[{"t":"0","at":"v:v0"},{"t":"1","at":"e0@1/2"}]}"#).unwrap();
        assert!(matches!(path_doc_from_json(&t).unwrap(), PathDoc::Track(_)));
    }
}
