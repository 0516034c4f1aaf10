//! Command-line front end. Every invocation prints one JSON document on stdout.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::classify::classify_point;
use crate::construct::{self, Functor};
use crate::corpus;
use crate::error::{Error, Result};
use crate::json::{self, PathDoc};
use crate::membership::Space;
use crate::path::CanonicalPath;
use crate::reach::{reach_relation, reachable, unavoidable_point, Mode};
use crate::space::{Point, SpaceExpr};
use crate::track::canonicalize;
use crate::validate::validate;

#[derive(Parser, Debug)]
#[command(name = "cspace", version, about = "Queries and constructions on finitely presented controlled spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Export a model of the built-in corpus.
    Build {
        #[arg(long)]
        corpus: String,
        /// Model parameter as KEY=VALUE; repeatable.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Report structural problems of a model file.
    Validate {
        #[arg(long)]
        space: PathBuf,
    },
    /// Decide whether a path is controlled and show its factorization.
    CheckPath {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        path: PathBuf,
    },
    /// Classify a point.
    Classify {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        point: String,
    },
    /// Reachability between two points, or the whole relation with --relation.
    Reach {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
        #[arg(long, default_value = "c")]
        mode: String,
        /// Also decide whether every path passes through this point.
        #[arg(long)]
        via: Option<String>,
        #[arg(long)]
        relation: bool,
    },
    /// Apply a construction to a model.
    Transform {
        #[arg(long)]
        space: PathBuf,
        /// hat, flexible-part, opposite, reversible-closure, reversible-part, exclude:P,..., D, Dprime or Dc
        #[arg(long)]
        op: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cartesian product of two models.
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Identify vertices: classes separated by ';', members by '='.
    Quotient {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        identify: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn read_json(p: &Path) -> Result<Value> {
    let text = fs::read_to_string(p).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))
}

fn read_space(p: &Path) -> Result<SpaceExpr> {
    json::space_from_json(&read_json(p)?)
}

fn read_path(p: &Path, space: &Space) -> Result<CanonicalPath> {
    match json::path_doc_from_json(&read_json(p)?)? {
        PathDoc::Track(t) => canonicalize(&t, &space.carrier),
        PathDoc::Items { start, items } => CanonicalPath::from_items(&space.carrier, &start, items),
    }
}

fn emit_model(e: &SpaceExpr, output: &Option<PathBuf>) -> Result<Value> {
    let doc = json::space_to_json(e);
    match output {
        None => Ok(doc),
        Some(p) => {
            let text = serde_json::to_string_pretty(&doc).expect("json renders") + "\n";
            fs::write(p, text).map_err(|e| Error::Invalid(format!("cannot write {}: {e}", p.display())))?;
            Ok(json!({"written": p.display().to_string(), "op": e.op_name()}))
        }
    }
}

fn point(s: &str) -> Result<Point> {
    s.parse()
}

fn transform(e: &SpaceExpr, op: &str) -> Result<SpaceExpr> {
    if let Some(rest) = op.strip_prefix("exclude:") {
        let pts = rest.split(',').filter(|s| !s.trim().is_empty()).map(point).collect::<Result<Vec<_>>>()?;
        return Ok(construct::exclude_endpoints(e.clone(), pts));
    }
    match op {
        "hat" => construct::hat(e),
        "flexible-part" => construct::flexible_part(e),
        "opposite" => Ok(construct::opposite(e.clone())),
        "reversible-closure" => construct::reversible_closure(e),
        "reversible-part" => Ok(construct::reversible_part(e)),
        "D" | "Dprime" | "Dc" => construct::functor(e, op.parse::<Functor>()?),
        other => Err(Error::Unknown(format!("transform {other}"))),
    }
}

fn execute(cmd: Command) -> Result<Value> {
    match cmd {
        Command::Build { corpus: name, params, output } => {
            let mut ps = corpus::Params::new();
            for kv in params {
                let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("parameter {kv:?} is not KEY=VALUE")))?;
                ps.insert(k.trim().to_string(), v.trim().to_string());
            }
            emit_model(&corpus::build(&name, &ps)?, &output)
        }
        Command::Validate { space } => {
            let v = validate(&read_space(&space)?);
            Ok(json!({"valid": v.is_empty(), "violations": v}))
        }
        Command::CheckPath { space, path } => {
            let s = Space::new(read_space(&space)?)?;
            let p = read_path(&path, &s)?;
            let mut out = json::verdict_to_json(&s.verdict(&p)?);
            out["path"] = json::path_to_json(&p);
            Ok(out)
        }
        Command::Classify { space, point: p } => {
            let s = Space::new(read_space(&space)?)?;
            let x = point(&p)?;
            let c = classify_point(&s, &x)?;
            let mut out = serde_json::to_value(c).expect("classification serializes");
            out["point"] = json!(s.point(&x)?.to_string());
            Ok(out)
        }
        Command::Reach { space, from, to, mode, via, relation } => {
            let s = Space::new(read_space(&space)?)?;
            let mode: Mode = mode.parse()?;
            if relation {
                let r = reach_relation(&s, mode)?;
                return Ok(json!({
                    "mode": mode,
                    "nodes": r.nodes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "matrix": r.matrix,
                }));
            }
            let (Some(from), Some(to)) = (from, to) else {
                return Err(Error::Parse("reach needs --from and --to, or --relation".into()));
            };
            let (x, y) = (point(&from)?, point(&to)?);
            let r = reachable(&s, &x, &y, mode)?;
            let mut out = json!({
                "mode": mode,
                "reachable": r.reachable,
                "witness": r.witness.as_ref().map_or(Value::Null, json::path_to_json),
            });
            if let Some(v) = via {
                let p = point(&v)?;
                out["via"] = json!(s.point(&p)?.to_string());
                out["via_unavoidable"] = if r.reachable { json!(unavoidable_point(&s, &x, &y, &p, mode)?) } else { Value::Null };
            }
            Ok(out)
        }
        Command::Transform { space, op, output } => {
            let e = transform(&read_space(&space)?, &op)?;
            Space::new(e.clone())?;
            emit_model(&e, &output)
        }
        Command::Product { a, b, output } => {
            let e = construct::product(read_space(&a)?, read_space(&b)?);
            Space::new(e.clone())?;
            emit_model(&e, &output)
        }
        Command::Quotient { space, identify, output } => {
            let classes = identify
                .split(';')
                .filter(|c| !c.trim().is_empty())
                .map(|c| c.split('=').map(point).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let e = construct::quotient(read_space(&space)?, classes)?;
            emit_model(&e, &output)
        }
    }
}

/// Runs one invocation; returns the exit code and the JSON text for stdout.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (0, e.to_string());
            }
            let v = json!({"error": {"kind": "usage", "message": e.to_string().trim()}});
            return (2, v.to_string());
        }
    };
    match execute(cli.command) {
        Ok(v) => (0, v.to_string()),
        Err(e) => (if e.is_unsupported() { 3 } else { 2 }, json::error_to_json(&e).to_string()),
    }
}
