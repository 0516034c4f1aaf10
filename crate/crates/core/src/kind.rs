//! The edge-kind catalogue.
//!
//! Every edge of a graph presentation is an oriented copy of `[0, 1]` carrying one of the
//! interval structures below. A kind contributes a finite list of rigid generators, a list of
//! restriction-closed fragments (families of monotone sub-runs) and a set of flexible points.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::space::{Dir, PausePos, RigidTrace, Segment};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    /// Euclidean interval: every path is controlled.
    Natural,
    /// Ordered interval: increasing paths.
    Directed,
    /// One-jump interval: surjective increasing paths and trivial loops at the ends.
    OneJump,
    /// Stops at the anchors `k/n`; each run between consecutive anchors is a jump.
    NStop(u32),
    /// Full forward jump which must dwell first.
    DelayedMinus,
    /// Full forward jump which must dwell at the end.
    DelayedPlus,
    /// Full jumps in both directions.
    ReversibleOneJump,
    /// Increasing paths plus the full reversion `1 -> 0`.
    Siphon,
    /// Like [`EdgeKind::Siphon`], and decreasing runs may also start below 1.
    SiphonOsc,
    /// Trivial loops everywhere, no motion.
    Still,
    /// Nothing at all: no motion, not even trivial loops.
    DiscreteC,
}

impl EdgeKind {
    pub fn name(&self) -> &'static str {
        match self {
            EdgeKind::Natural => "Natural",
            EdgeKind::Directed => "Directed",
            EdgeKind::OneJump => "OneJump",
            EdgeKind::NStop(_) => "NStop",
            EdgeKind::DelayedMinus => "DelayedMinus",
            EdgeKind::DelayedPlus => "DelayedPlus",
            EdgeKind::ReversibleOneJump => "ReversibleOneJump",
            EdgeKind::Siphon => "Siphon",
            EdgeKind::SiphonOsc => "SiphonOsc",
            EdgeKind::Still => "Still",
            EdgeKind::DiscreteC => "DiscreteC",
        }
    }

    /// Builds a kind from its name and optional `n` parameter (NStop only).
    pub fn from_parts(name: &str, n: Option<u32>) -> Result<EdgeKind> {
        let kind = match name {
            "Natural" => EdgeKind::Natural,
            "Directed" => EdgeKind::Directed,
            "OneJump" => EdgeKind::OneJump,
            "NStop" => EdgeKind::NStop(n.ok_or_else(|| Error::Invalid("NStop requires parameter n".into()))?),
            "DelayedMinus" => EdgeKind::DelayedMinus,
            "DelayedPlus" => EdgeKind::DelayedPlus,
            "ReversibleOneJump" => EdgeKind::ReversibleOneJump,
            "Siphon" => EdgeKind::Siphon,
            "SiphonOsc" => EdgeKind::SiphonOsc,
            "Still" => EdgeKind::Still,
            "DiscreteC" => EdgeKind::DiscreteC,
            other => return Err(Error::Unknown(format!("edge kind {other}"))),
        };
        Ok(kind)
    }

    pub fn param_n(&self) -> Option<u32> {
        match self {
            EdgeKind::NStop(n) => Some(*n),
            _ => None,
        }
    }

    pub fn check_params(&self) -> Result<()> {
        match self {
            EdgeKind::NStop(0) => Err(Error::Invalid("NStop requires n >= 1".into())),
            _ => Ok(()),
        }
    }

    /// Kinds whose structure is already a d-structure.
    pub fn is_directed_space_kind(&self) -> bool {
        matches!(self, EdgeKind::Natural | EdgeKind::Directed | EdgeKind::Still)
    }

    /// Kind of the generated d-space on this edge.
    pub fn hat(&self) -> EdgeKind {
        match self {
            EdgeKind::OneJump | EdgeKind::NStop(_) | EdgeKind::DelayedMinus | EdgeKind::DelayedPlus => {
                EdgeKind::Directed
            }
            EdgeKind::ReversibleOneJump | EdgeKind::Siphon | EdgeKind::SiphonOsc => EdgeKind::Natural,
            EdgeKind::Natural | EdgeKind::Directed | EdgeKind::Still => *self,
            EdgeKind::DiscreteC => EdgeKind::Still,
        }
    }

    /// Kind carrying the flexible fragment of this edge. Kinds whose flexible part is a finite
    /// set of points map to [`EdgeKind::DiscreteC`]; their points must be re-added as overrides.
    pub fn flexible(&self) -> EdgeKind {
        match self {
            EdgeKind::Natural | EdgeKind::SiphonOsc => EdgeKind::Natural,
            EdgeKind::Directed | EdgeKind::Siphon => EdgeKind::Directed,
            EdgeKind::Still => EdgeKind::Still,
            _ => EdgeKind::DiscreteC,
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeKind::NStop(n) => write!(f, "NStop({n})"),
            k => f.write_str(k.name()),
        }
    }
}

impl FromStr for EdgeKind {
    type Err = Error;

    /// Accepts `Name` or `NStop(n)`.
    fn from_str(s: &str) -> Result<EdgeKind> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("NStop(").and_then(|r| r.strip_suffix(')')) {
            let n = rest.trim().parse().map_err(|_| Error::Parse(format!("bad NStop parameter in {s}")))?;
            return EdgeKind::from_parts("NStop", Some(n));
        }
        EdgeKind::from_parts(s, None)
    }
}

/// Directions in which a fragment may be run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FragDir {
    Forward,
    Backward,
    Both,
}

impl FragDir {
    pub fn admits(&self, dir: Dir) -> bool {
        matches!(
            (self, dir),
            (FragDir::Both, _) | (FragDir::Forward, Dir::Forward) | (FragDir::Backward, Dir::Backward)
        )
    }

    pub fn reversed(&self) -> FragDir {
        match self {
            FragDir::Forward => FragDir::Backward,
            FragDir::Backward => FragDir::Forward,
            FragDir::Both => FragDir::Both,
        }
    }
}

/// A restriction-closed family: every monotone run in an admitted direction whose image lies
/// in the interval `lo..hi` (ends open or closed as flagged).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fragment {
    pub dir: FragDir,
    pub lo: Rat,
    pub hi: Rat,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub lo_open: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub hi_open: bool,
}

impl Fragment {
    pub fn closed(dir: FragDir, lo: Rat, hi: Rat) -> Fragment {
        Fragment { dir, lo, hi, lo_open: false, hi_open: false }
    }

    pub fn full(dir: FragDir) -> Fragment {
        Fragment::closed(dir, Rat::ZERO, Rat::ONE)
    }

    pub fn contains_point(&self, t: Rat) -> bool {
        let above = if self.lo_open { t > self.lo } else { t >= self.lo };
        let below = if self.hi_open { t < self.hi } else { t <= self.hi };
        above && below
    }

    /// Whether the run `from -> to` belongs to this family.
    pub fn admits_run(&self, from: Rat, to: Rat) -> bool {
        if from == to {
            return false;
        }
        let dir = if from < to { Dir::Forward } else { Dir::Backward };
        self.dir.admits(dir) && self.contains_point(from.min(to)) && self.contains_point(from.max(to))
    }

    /// Whether some nontrivial run of the family passes through `t`.
    pub fn has_run_through(&self, t: Rat) -> bool {
        self.lo < self.hi && self.contains_point(t)
    }

    pub fn reversed(&self) -> Fragment {
        Fragment { dir: self.dir.reversed(), ..self.clone() }
    }
}

/// Generators contributed by one edge (or the flexible fragment of one edge).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorFamily {
    pub rigid: Vec<RigidTrace>,
    pub fragments: Vec<Fragment>,
    /// Positions a flexible path may only occupy at its very end.
    pub absorbing: Vec<Rat>,
}

/// Flexible points of a kind on its edge, as parameters in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlexiblePoints {
    All,
    Finite(Vec<Rat>),
}

impl FlexiblePoints {
    pub fn contains(&self, t: Rat) -> bool {
        match self {
            FlexiblePoints::All => true,
            FlexiblePoints::Finite(ts) => ts.contains(&t),
        }
    }
}

fn full_run(edge: &str, dir: Dir) -> Segment {
    match dir {
        Dir::Forward => Segment::new(edge, Rat::ZERO, Rat::ONE),
        Dir::Backward => Segment::new(edge, Rat::ONE, Rat::ZERO),
    }
}

/// Generator family of `kind` on the edge `edge`.
pub fn kind_generators(kind: &EdgeKind, edge: &str) -> Result<GeneratorFamily> {
    kind.check_params()?;
    let jump = |dir| RigidTrace::new(vec![full_run(edge, dir)]);
    let fam = match kind {
        EdgeKind::Natural => GeneratorFamily { fragments: vec![Fragment::full(FragDir::Both)], ..Default::default() },
        EdgeKind::Directed => GeneratorFamily { fragments: vec![Fragment::full(FragDir::Forward)], ..Default::default() },
        EdgeKind::OneJump => GeneratorFamily { rigid: vec![jump(Dir::Forward)], ..Default::default() },
        EdgeKind::NStop(n) => {
            let n = *n as i64;
            let rigid = (0..n)
                .map(|k| RigidTrace::new(vec![Segment::new(edge, Rat::new(k, n), Rat::new(k + 1, n))]))
                .collect();
            GeneratorFamily { rigid, ..Default::default() }
        }
        EdgeKind::DelayedMinus => GeneratorFamily {
            rigid: vec![jump(Dir::Forward).with_pause(PausePos::Start)],
            ..Default::default()
        },
        EdgeKind::DelayedPlus => GeneratorFamily {
            rigid: vec![jump(Dir::Forward).with_pause(PausePos::End)],
            ..Default::default()
        },
        EdgeKind::ReversibleOneJump => {
            GeneratorFamily { rigid: vec![jump(Dir::Forward), jump(Dir::Backward)], ..Default::default() }
        }
        EdgeKind::Siphon => GeneratorFamily {
            rigid: vec![jump(Dir::Backward)],
            fragments: vec![Fragment::full(FragDir::Forward)],
            ..Default::default()
        },
        EdgeKind::SiphonOsc => GeneratorFamily {
            rigid: vec![jump(Dir::Backward)],
            fragments: vec![
                Fragment::full(FragDir::Forward),
                Fragment { hi_open: true, ..Fragment::full(FragDir::Backward) },
            ],
            ..Default::default()
        },
        EdgeKind::Still | EdgeKind::DiscreteC => GeneratorFamily::default(),
    };
    Ok(fam)
}

pub fn kind_flexible_points(kind: &EdgeKind) -> FlexiblePoints {
    match kind {
        EdgeKind::Natural | EdgeKind::Directed | EdgeKind::Siphon | EdgeKind::SiphonOsc | EdgeKind::Still => {
            FlexiblePoints::All
        }
        EdgeKind::OneJump | EdgeKind::DelayedMinus | EdgeKind::DelayedPlus | EdgeKind::ReversibleOneJump => {
            FlexiblePoints::Finite(vec![Rat::ZERO, Rat::ONE])
        }
        EdgeKind::NStop(n) => {
            let n = (*n).max(1) as i64;
            FlexiblePoints::Finite((0..=n).map(|k| Rat::new(k, n)).collect())
        }
        EdgeKind::DiscreteC => FlexiblePoints::Finite(vec![]),
    }
}

/// The restriction-closed family of flexible paths inside one edge.
pub fn kind_flexible_fragment(kind: &EdgeKind) -> GeneratorFamily {
    match kind {
        EdgeKind::Natural => GeneratorFamily { fragments: vec![Fragment::full(FragDir::Both)], ..Default::default() },
        EdgeKind::Directed | EdgeKind::Siphon => {
            GeneratorFamily { fragments: vec![Fragment::full(FragDir::Forward)], ..Default::default() }
        }
        EdgeKind::SiphonOsc => GeneratorFamily {
            fragments: vec![
                Fragment::full(FragDir::Forward),
                Fragment { hi_open: true, ..Fragment::full(FragDir::Backward) },
            ],
            absorbing: vec![Rat::ONE],
            ..Default::default()
        },
        _ => GeneratorFamily::default(),
    }
}

/// Parameters at which generator instances of this kind may start or end.
pub fn kind_anchors(kind: &EdgeKind) -> Vec<Rat> {
    match kind {
        EdgeKind::NStop(n) => {
            let n = (*n).max(1) as i64;
            (0..=n).map(|k| Rat::new(k, n)).collect()
        }
        _ => vec![Rat::ZERO, Rat::ONE],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL: [EdgeKind; 11] = [
        EdgeKind::Natural,
        EdgeKind::Directed,
        EdgeKind::OneJump,
        EdgeKind::NStop(3),
        EdgeKind::DelayedMinus,
        EdgeKind::DelayedPlus,
        EdgeKind::ReversibleOneJump,
        EdgeKind::Siphon,
        EdgeKind::SiphonOsc,
        EdgeKind::Still,
        EdgeKind::DiscreteC,
    ];

    #[test]
    fn one_jump_has_single_full_forward_generator() {
        let fam = kind_generators(&EdgeKind::OneJump, "e").unwrap();
        assert_eq!(fam.rigid.len(), 1);
        assert_eq!(fam.rigid[0].steps, vec![Segment::new("e", Rat::ZERO, Rat::ONE)]);
        assert!(fam.fragments.is_empty());
    }

    #[test]
    fn n_stop_generators_have_length_one_over_n() {
        let fam = kind_generators(&EdgeKind::NStop(3), "e").unwrap();
        assert_eq!(fam.rigid.len(), 3);
        for g in &fam.rigid {
            let s = &g.steps[0];
            assert_eq!((s.to - s.from).abs(), Rat::new(1, 3));
        }
        assert!(kind_generators(&EdgeKind::NStop(0), "e").is_err());
    }

    #[test]
    fn directed_fragment_covers_forward_sub_runs() {
        let fam = kind_generators(&EdgeKind::Directed, "e").unwrap();
        assert!(fam.rigid.is_empty());
        let f = &fam.fragments[0];
        assert!(f.admits_run(Rat::new(1, 4), Rat::new(3, 4)));
        assert!(!f.admits_run(Rat::new(3, 4), Rat::new(1, 4)));
    }

    #[test]
    fn flexible_point_sets() {
        assert_eq!(kind_flexible_points(&EdgeKind::OneJump), FlexiblePoints::Finite(vec![Rat::ZERO, Rat::ONE]));
        assert_eq!(
            kind_flexible_points(&EdgeKind::NStop(4)),
            FlexiblePoints::Finite(vec![Rat::ZERO, Rat::new(1, 4), Rat::HALF, Rat::new(3, 4), Rat::ONE])
        );
        assert_eq!(kind_flexible_points(&EdgeKind::Siphon), FlexiblePoints::All);
        assert_eq!(kind_flexible_points(&EdgeKind::DiscreteC), FlexiblePoints::Finite(vec![]));
    }

    #[test]
    fn flexible_fragments() {
        assert_eq!(kind_flexible_fragment(&EdgeKind::OneJump), GeneratorFamily::default());
        let siphon = kind_flexible_fragment(&EdgeKind::Siphon);
        assert_eq!(siphon.fragments, vec![Fragment::full(FragDir::Forward)]);
        let osc = kind_flexible_fragment(&EdgeKind::SiphonOsc);
        assert_eq!(osc.absorbing, vec![Rat::ONE]);
        assert!(osc.fragments.iter().any(|f| f.admits_run(Rat::new(9, 10), Rat::new(3, 10))));
        assert!(!osc.fragments.iter().any(|f| f.admits_run(Rat::ONE, Rat::new(3, 10))));
    }

    #[test]
    fn flexible_points_are_generator_endpoints_or_fragment_points() {
        let probes: Vec<Rat> = (0..=12).map(|k| Rat::new(k, 12)).collect();
        for kind in ALL {
            let fam = kind_generators(&kind, "e").unwrap();
            let flex = kind_flexible_points(&kind);
            for &t in &probes {
                let from_gen = fam.rigid.iter().any(|g| {
                    g.steps.first().map(|s| s.from) == Some(t) || g.steps.last().map(|s| s.to) == Some(t)
                });
                let from_frag = fam.fragments.iter().any(|f| f.has_run_through(t));
                let expected = from_gen || from_frag || kind == EdgeKind::Still;
                assert_eq!(flex.contains(t), expected, "{kind} at {t}");
            }
        }
    }

    #[test]
    fn fragments_are_closed_under_sub_runs() {
        let probes: Vec<Rat> = (0..=8).map(|k| Rat::new(k, 8)).collect();
        for kind in ALL {
            for f in kind_generators(&kind, "e").unwrap().fragments {
                for &a in &probes {
                    for &b in &probes {
                        if !f.admits_run(a, b) {
                            continue;
                        }
                        for &c in &probes {
                            for &d in &probes {
                                let inside = a.min(b) <= c.min(d) && c.max(d) <= a.max(b);
                                let same_dir = (c < d) == (a < b);
                                if c != d && inside && same_dir {
                                    assert!(f.admits_run(c, d), "{kind}: {a}->{b} ⊇ {c}->{d}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in ALL {
            assert_eq!(kind.to_string().parse::<EdgeKind>().unwrap(), kind);
        }
    }
}
