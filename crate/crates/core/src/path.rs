//! Canonical paths: pauses and maximal monotone runs, up to reparametrisation.

use std::fmt;

use crate::carrier::Carrier;
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::space::{Point, Segment};

/// One piece of linear motion. In a product every coordinate either moves along an edge
/// segment or stays put (`None`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Edge(Segment),
    Tuple(Vec<Option<Step>>),
}

impl Step {
    pub fn seg(edge: &str, from: Rat, to: Rat) -> Step {
        Step::Edge(Segment::new(edge, from, to))
    }

    pub fn as_segment(&self) -> Option<&Segment> {
        match self {
            Step::Edge(s) => Some(s),
            Step::Tuple(_) => None,
        }
    }

    pub fn reversed(&self) -> Step {
        match self {
            Step::Edge(s) => Step::Edge(s.reversed()),
            Step::Tuple(cs) => Step::Tuple(cs.iter().map(|c| c.as_ref().map(Step::reversed)).collect()),
        }
    }

    /// The portion between the fractions `f0 < f1` of this step.
    pub fn sub(&self, f0: Rat, f1: Rat) -> Step {
        match self {
            Step::Edge(s) => Step::Edge(s.sub(f0, f1)),
            Step::Tuple(cs) => Step::Tuple(cs.iter().map(|c| c.as_ref().map(|s| s.sub(f0, f1))).collect()),
        }
    }

    /// Lengths of the leaf coordinates, `None` where stationary.
    pub fn leaf_lengths(&self) -> Vec<Option<Rat>> {
        let mut out = Vec::new();
        self.collect_lengths(&mut out);
        out
    }

    fn collect_lengths(&self, out: &mut Vec<Option<Rat>>) {
        match self {
            Step::Edge(s) => out.push(Some(s.len())),
            Step::Tuple(cs) => {
                for c in cs {
                    match c {
                        Some(s) => s.collect_lengths(out),
                        None => out.push(None),
                    }
                }
            }
        }
    }

    fn geometric_merge(&self, next: &Step) -> Option<Step> {
        match (self, next) {
            (Step::Edge(a), Step::Edge(b)) if a.continues_with(b) => {
                Some(Step::Edge(Segment { edge: a.edge.clone(), from: a.from, to: b.to }))
            }
            (Step::Tuple(xs), Step::Tuple(ys)) if xs.len() == ys.len() => {
                let mut out = Vec::with_capacity(xs.len());
                for (x, y) in xs.iter().zip(ys) {
                    match (x, y) {
                        (None, None) => out.push(None),
                        (Some(x), Some(y)) => out.push(Some(x.geometric_merge(y)?)),
                        _ => return None,
                    }
                }
                Some(Step::Tuple(out))
            }
            _ => None,
        }
    }

    /// Merges `self` followed by `next` into one linear piece, if they form one.
    pub fn merge(&self, next: &Step) -> Option<Step> {
        let merged = self.geometric_merge(next)?;
        let la = self.leaf_lengths();
        let lb = next.leaf_lengths();
        let mut ratio = None;
        for (a, b) in la.iter().zip(&lb) {
            if let (Some(a), Some(b)) = (a, b) {
                let r = *b / *a;
                match ratio {
                    None => ratio = Some(r),
                    Some(q) if q != r => return None,
                    _ => {}
                }
            }
        }
        Some(merged)
    }

    /// Immediate backtracking on some edge.
    pub fn reverses_into(&self, next: &Step) -> bool {
        match (self, next) {
            (Step::Edge(a), Step::Edge(b)) => a.edge == b.edge && a.dir() != b.dir(),
            (Step::Tuple(xs), Step::Tuple(ys)) => xs.iter().zip(ys).any(|(x, y)| match (x, y) {
                (Some(x), Some(y)) => x.reverses_into(y),
                _ => false,
            }),
            _ => false,
        }
    }

    pub fn project(&self, i: usize) -> Result<Option<Step>> {
        match self {
            Step::Tuple(cs) => cs
                .get(i)
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("factor index {i} out of range"))),
            Step::Edge(_) => Err(Error::Precondition("projection needs a product path".into())),
        }
    }

    fn is_valid(&self) -> bool {
        match self {
            Step::Edge(s) => s.from != s.to,
            Step::Tuple(cs) => cs.iter().any(Option::is_some) && cs.iter().flatten().all(Step::is_valid),
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Edge(s) => write!(f, "{s}"),
            Step::Tuple(cs) => {
                f.write_str("(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    match c {
                        Some(s) => write!(f, "{s}")?,
                        None => f.write_str("-")?,
                    }
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Item {
    Pause,
    Run(Vec<Step>),
}

/// Flat view of a path: one token per pause or step.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Token {
    Pause,
    Move(Step),
}

/// Where the (normalized) point `cur` goes under `step`.
pub fn advance(carrier: &Carrier, cur: &Point, step: &Step) -> Result<Point> {
    match (carrier, step) {
        (Carrier::Graph(g), Step::Edge(s)) => {
            let start = g.seg_start(s).map_err(|e| Error::PathOutsideSupport(e.to_string()))?;
            if &start != cur {
                return Err(Error::PathOutsideSupport(format!("step {s} does not start at {cur}")));
            }
            g.seg_end(s).map_err(|e| Error::PathOutsideSupport(e.to_string()))
        }
        (Carrier::Product(a, b), Step::Tuple(cs)) if cs.len() == 2 => {
            let Point::Tuple(ps) = cur else {
                return Err(Error::PathOutsideSupport(format!("{cur} is not a pair")));
            };
            let mut out = Vec::with_capacity(2);
            for (i, fac) in [a.as_ref(), b.as_ref()].into_iter().enumerate() {
                out.push(match &cs[i] {
                    Some(s) => advance(fac, &ps[i], s)?,
                    None => ps[i].clone(),
                });
            }
            Ok(Point::Tuple(out))
        }
        _ => Err(Error::PathOutsideSupport(format!("step {step} does not fit the carrier"))),
    }
}

/// A path in reparametrisation-normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalPath {
    pub start: Point,
    pub end: Point,
    pub items: Vec<Item>,
}

impl CanonicalPath {
    pub fn trivial(p: Point) -> CanonicalPath {
        CanonicalPath { start: p.clone(), end: p, items: vec![] }
    }

    /// Normal form of a token sequence whose endpoints are already known.
    pub fn from_tokens(start: Point, end: Point, tokens: Vec<Token>) -> CanonicalPath {
        let mut merged: Vec<Token> = Vec::with_capacity(tokens.len());
        for t in tokens {
            match (&t, merged.last_mut()) {
                (Token::Pause, Some(Token::Pause)) => {}
                (Token::Move(s), Some(Token::Move(prev))) => match prev.merge(s) {
                    Some(m) => *prev = m,
                    None => merged.push(t),
                },
                _ => merged.push(t),
            }
        }
        if !merged.iter().any(|t| matches!(t, Token::Move(_))) {
            return CanonicalPath { start, end, items: vec![] };
        }
        let mut items = Vec::new();
        for t in merged {
            match t {
                Token::Pause => items.push(Item::Pause),
                Token::Move(s) => match items.last_mut() {
                    Some(Item::Run(run)) if !run.last().unwrap().reverses_into(&s) => run.push(s),
                    _ => items.push(Item::Run(vec![s])),
                },
            }
        }
        CanonicalPath { start, end, items }
    }

    /// Checks continuity against the carrier and normalizes.
    pub fn build(carrier: &Carrier, start: &Point, tokens: Vec<Token>) -> Result<CanonicalPath> {
        let start = carrier.normalize_point(start).map_err(|e| Error::PathOutsideSupport(e.to_string()))?;
        let mut cur = start.clone();
        for t in &tokens {
            if let Token::Move(s) = t {
                if !s.is_valid() {
                    return Err(Error::Invalid(format!("degenerate step {s}")));
                }
                cur = advance(carrier, &cur, s)?;
            }
        }
        Ok(CanonicalPath::from_tokens(start, cur, tokens))
    }

    pub fn from_items(carrier: &Carrier, start: &Point, items: Vec<Item>) -> Result<CanonicalPath> {
        let mut tokens = Vec::new();
        for it in items {
            match it {
                Item::Pause => tokens.push(Token::Pause),
                Item::Run(steps) => {
                    if steps.is_empty() {
                        return Err(Error::Invalid("empty run".into()));
                    }
                    tokens.extend(steps.into_iter().map(Token::Move));
                }
            }
        }
        CanonicalPath::build(carrier, start, tokens)
    }

    /// Re-checks that the stored form is continuous in the carrier.
    pub fn check(&self, carrier: &Carrier) -> Result<()> {
        let rebuilt = CanonicalPath::build(carrier, &self.start, self.tokens())?;
        if rebuilt.end != self.end {
            return Err(Error::PathOutsideSupport(format!("path ends at {} not {}", rebuilt.end, self.end)));
        }
        Ok(())
    }

    pub fn tokens(&self) -> Vec<Token> {
        let mut out = Vec::new();
        for it in &self.items {
            match it {
                Item::Pause => out.push(Token::Pause),
                Item::Run(steps) => out.extend(steps.iter().cloned().map(Token::Move)),
            }
        }
        out
    }

    pub fn steps(&self) -> impl Iterator<Item = &Step> {
        self.items.iter().flat_map(|it| match it {
            Item::Run(steps) => steps.as_slice(),
            Item::Pause => &[],
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.items.is_empty()
    }

    pub fn reverse(&self) -> CanonicalPath {
        let tokens = self
            .tokens()
            .into_iter()
            .rev()
            .map(|t| match t {
                Token::Pause => Token::Pause,
                Token::Move(s) => Token::Move(s.reversed()),
            })
            .collect();
        CanonicalPath::from_tokens(self.end.clone(), self.start.clone(), tokens)
    }

    /// Concatenation; a trivial operand contributes a dwell.
    pub fn concat(&self, other: &CanonicalPath) -> Result<CanonicalPath> {
        if self.end != other.start {
            return Err(Error::Precondition(format!(
                "paths are not consecutive: {} then {}",
                self.end, other.start
            )));
        }
        let mut tokens = self.tokens();
        if self.is_trivial() {
            tokens.push(Token::Pause);
        }
        if other.is_trivial() {
            tokens.push(Token::Pause);
        }
        tokens.extend(other.tokens());
        Ok(CanonicalPath::from_tokens(self.start.clone(), other.end.clone(), tokens))
    }

    pub fn with_pause_at(&self, token_index: usize) -> CanonicalPath {
        let mut tokens = self.tokens();
        let i = token_index.min(tokens.len());
        tokens.insert(i, Token::Pause);
        CanonicalPath::from_tokens(self.start.clone(), self.end.clone(), tokens)
    }

    pub fn project(&self, i: usize) -> Result<CanonicalPath> {
        let pick = |p: &Point| match p {
            Point::Tuple(ps) => ps.get(i).cloned().ok_or_else(|| Error::Invalid(format!("factor index {i} out of range"))),
            _ => Err(Error::Precondition("projection needs a product path".into())),
        };
        let start = pick(&self.start)?;
        let end = pick(&self.end)?;
        let mut tokens = Vec::new();
        for t in self.tokens() {
            tokens.push(match t {
                Token::Pause => Token::Pause,
                Token::Move(s) => match s.project(i)? {
                    Some(s) => Token::Move(s),
                    None => Token::Pause,
                },
            });
        }
        Ok(CanonicalPath::from_tokens(start, end, tokens))
    }

    /// Points at the token boundaries, `tokens().len() + 1` of them.
    pub fn boundary_points(&self, carrier: &Carrier) -> Result<Vec<Point>> {
        let mut out = vec![self.start.clone()];
        let mut cur = self.start.clone();
        for t in self.tokens() {
            if let Token::Move(s) = t {
                cur = advance(carrier, &cur, &s)?;
            }
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// The portion between token-time positions `u <= v`; token `k` occupies `[k, k + 1]`.
    pub fn portion(&self, carrier: &Carrier, u: Rat, v: Rat) -> Result<CanonicalPath> {
        portion_of_tokens(carrier, &self.start, &self.tokens(), u, v)
    }
}

/// Portion of an arbitrary token list starting at `start`, in token time.
pub fn portion_of_tokens(carrier: &Carrier, start: &Point, tokens: &[Token], u: Rat, v: Rat) -> Result<CanonicalPath> {
    let n = Rat::int(tokens.len() as i64);
    if u > v || u < Rat::ZERO || v > n {
        return Err(Error::Precondition(format!("invalid portion {u}..{v} of a path with {n} tokens")));
    }
    let mut cur = start.clone();
    let mut first: Option<Point> = None;
    let mut out = Vec::new();
    for (k, t) in tokens.iter().enumerate() {
        let k0 = Rat::int(k as i64);
        let k1 = k0 + Rat::ONE;
        let a = u.max(k0);
        let b = v.min(k1);
        if first.is_none() && u <= k0 {
            first = Some(cur.clone());
        }
        match t {
            Token::Pause => {
                if a < b {
                    if first.is_none() {
                        first = Some(cur.clone());
                    }
                    out.push(Token::Pause);
                }
            }
            Token::Move(s) => {
                if first.is_none() && u < k1 {
                    // u strictly inside this step
                    first = Some(advance(carrier, &cur, &s.sub(Rat::ZERO, u - k0))?);
                }
                if a < b {
                    out.push(Token::Move(s.sub(a - k0, b - k0)));
                }
                cur = advance(carrier, &cur, s)?;
            }
        }
    }
    let first = first.unwrap_or(cur);
    CanonicalPath::build(carrier, &first, out)
}

impl fmt::Display for CanonicalPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.start)?;
        for (i, it) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match it {
                Item::Pause => f.write_str("Pause")?,
                Item::Run(steps) => {
                    f.write_str("Run ")?;
                    for (j, s) in steps.iter().enumerate() {
                        if j > 0 {
                            f.write_str(" ")?;
                        }
                        write!(f, "{s}")?;
                    }
                }
            }
        }
        f.write_str("]")
    }
}

fn stretch(tokens: Vec<Token>, n: usize) -> Vec<Token> {
    let extra = n - tokens.len();
    if extra == 0 {
        return tokens;
    }
    let Some(k) = tokens.iter().position(|t| matches!(t, Token::Move(_))) else {
        let mut t = tokens;
        t.resize(n, Token::Pause);
        return t;
    };
    let mut out = tokens[..k].to_vec();
    let Token::Move(s) = &tokens[k] else { unreachable!() };
    let parts = Rat::int(extra as i64 + 1);
    for i in 0..=extra {
        let f0 = Rat::int(i as i64) / parts;
        let f1 = Rat::int(i as i64 + 1) / parts;
        out.push(Token::Move(s.sub(f0, f1)));
    }
    out.extend_from_slice(&tokens[k + 1..]);
    out
}

/// A path in a product whose projections are `a` and `b`, moving both coordinates in lockstep.
pub fn pair(carrier: &Carrier, a: &CanonicalPath, b: &CanonicalPath) -> Result<CanonicalPath> {
    let (ta, tb) = (a.tokens(), b.tokens());
    let n = ta.len().max(tb.len());
    let (ta, tb) = (stretch(ta, n), stretch(tb, n));
    let tokens = ta
        .into_iter()
        .zip(tb)
        .map(|(x, y)| match (x, y) {
            (Token::Pause, Token::Pause) => Token::Pause,
            (x, y) => {
                let leaf = |t: Token| match t {
                    Token::Move(s) => Some(s),
                    Token::Pause => None,
                };
                Token::Move(Step::Tuple(vec![leaf(x), leaf(y)]))
            }
        })
        .collect();
    CanonicalPath::build(carrier, &Point::Tuple(vec![a.start.clone(), b.start.clone()]), tokens)
}
