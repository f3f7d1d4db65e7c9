use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use super::SphereSide;
use crate::morse::{GapIndex, LevelProfile, MorsePresentation, StrandIncidence};
use crate::Side;

/// Facts about the link that the presentation cannot show.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReportFlags {
    pub knot: bool,
    pub prime: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Claim {
    Incompressible,
    IncompressibleOn(Side),
    WeaklyIncompressible,
    AtMostOneDisk(Side),
    NoHeightOneDisk(Side),
    /// Ladder rank, then the potentially alternating counts above and below.
    DisjointIrreducibleBound {
        rank: usize,
        above: usize,
        below: usize,
    },
}

impl Claim {
    /// Whether the claim excludes compressing disks on `side`.
    pub fn rules_out(self, side: Side) -> bool {
        match self {
            Claim::Incompressible => true,
            Claim::IncompressibleOn(s) => s == side,
            _ => false,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Claim::Incompressible => f.write_str("incompressible"),
            Claim::IncompressibleOn(side) => write!(f, "incompressible {}", side.as_str()),
            Claim::WeaklyIncompressible => f.write_str("weakly incompressible"),
            Claim::AtMostOneDisk(side) => write!(f, "at most one compressing disk {}", side.as_str()),
            Claim::NoHeightOneDisk(side) => write!(f, "no compressing disk of height 1 {}", side.as_str()),
            Claim::DisjointIrreducibleBound { rank, above, below } => write!(
                f,
                "at most {rank} disjoint irreducible compressing disks ({above} above, {below} below)"
            ),
        }
    }
}

impl Serialize for Claim {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The result a verdict rests on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Wu,
    KnotOrPrime,
    SideDominance,
    SecondThinnest,
    Sandwich,
    Turbulent,
    OnePotentiallyAlternating,
    StrandThroughA1,
    DisjointBound,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Wu => "Wu",
            Tag::KnotOrPrime => "knot or prime, w1 = w0 + 2",
            Tag::SideDominance => "not compressible on that side",
            Tag::SecondThinnest => "second thinnest",
            Tag::Sandwich => "thinnest between incompressible spheres",
            Tag::Turbulent => "turbulent region",
            Tag::OnePotentiallyAlternating => "one potentially alternating sphere",
            Tag::StrandThroughA1 => "strand crossing A_1",
            Tag::DisjointBound => "at most n disjoint nonparallel irreducible",
        }
    }
}

impl Serialize for Tag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub claim: Claim,
    pub tag: Tag,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.claim, self.tag.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereReport {
    pub gap: GapIndex,
    pub width: usize,
    pub rank: usize,
    pub potentially_alternating_above: Vec<GapIndex>,
    pub potentially_alternating_below: Vec<GapIndex>,
    pub verdicts: Vec<Verdict>,
}

impl SphereReport {
    pub fn has(&self, claim: Claim) -> bool {
        self.verdicts.iter().any(|v| v.claim == claim)
    }

    fn add(&mut self, claim: Claim, tag: Tag) {
        let v = Verdict { claim, tag };
        if !self.verdicts.contains(&v) {
            self.verdicts.push(v);
        }
    }

    fn pa(&self, side: Side) -> &[GapIndex] {
        match side {
            Side::Above => &self.potentially_alternating_above,
            Side::Below => &self.potentially_alternating_below,
        }
    }
}

fn dominates(profile: &LevelProfile, g: GapIndex, side: Side) -> bool {
    let w = profile.gaps[g].count;
    profile
        .gaps_toward(g, side)
        .into_iter()
        .all(|s| profile.gaps[s].count >= w)
}

/// Thin gaps strictly between `lo` and `hi` of minimal width.
fn thinnest_between(profile: &LevelProfile, lo: GapIndex, hi: GapIndex) -> Vec<GapIndex> {
    let inside: Vec<GapIndex> = (lo + 1..hi).filter(|&g| profile.is_thin(g)).collect();
    let Some(min) = inside.iter().map(|&g| profile.gaps[g].count).min() else {
        return Vec::new();
    };
    inside.into_iter().filter(|&g| profile.gaps[g].count == min).collect()
}

fn position(reports: &[SphereReport], g: GapIndex) -> usize {
    reports.iter().position(|r| r.gap == g).expect("thin gap")
}

/// Every verdict the width data supports, one report per thin gap in
/// order.
pub fn sphere_report(pres: &MorsePresentation, flags: ReportFlags) -> Vec<SphereReport> {
    let profile = pres.profile();
    let ladder = profile.ladder.values();
    let mut reports: Vec<SphereReport> = profile
        .thin_gaps()
        .into_iter()
        .map(|g| SphereReport {
            gap: g,
            width: profile.gaps[g].count,
            rank: profile.rank(g).expect("thin"),
            potentially_alternating_above: super::potentially_alternating(&profile, g, Side::Above).expect("thin"),
            potentially_alternating_below: super::potentially_alternating(&profile, g, Side::Below).expect("thin"),
            verdicts: Vec::new(),
        })
        .collect();

    let knot_case = (flags.knot || flags.prime) && ladder.len() >= 2 && ladder[1] == ladder[0] + 2;
    for r in &mut reports {
        if r.rank == 0 {
            r.add(Claim::Incompressible, Tag::Wu);
        }
        if r.rank == 1 && knot_case {
            r.add(Claim::Incompressible, Tag::KnotOrPrime);
        }
        for side in [Side::Above, Side::Below] {
            if dominates(&profile, r.gap, side) {
                r.add(Claim::IncompressibleOn(side), Tag::SideDominance);
            }
        }
        if r.rank == 1 {
            r.add(Claim::WeaklyIncompressible, Tag::SecondThinnest);
        }
    }

    // sandwiches between spheres already known incompressible on the inner side
    let closed_above: Vec<GapIndex> = reports
        .iter()
        .filter(|r| r.verdicts.iter().any(|v| v.claim.rules_out(Side::Above)))
        .map(|r| r.gap)
        .collect();
    let closed_below: Vec<GapIndex> = reports
        .iter()
        .filter(|r| r.verdicts.iter().any(|v| v.claim.rules_out(Side::Below)))
        .map(|r| r.gap)
        .collect();
    let mut sandwiched = BTreeSet::new();
    for &i in &closed_above {
        for &k in closed_below.iter().filter(|&&k| k > i) {
            sandwiched.extend(thinnest_between(&profile, i, k));
        }
    }
    for g in sandwiched {
        let x = position(&reports, g);
        reports[x].add(Claim::WeaklyIncompressible, Tag::Sandwich);
    }

    let incidence = StrandIncidence::of(pres);
    let gap_count = profile.gaps.len();
    let mut calmed = BTreeSet::new();
    for lo in 0..gap_count {
        for hi in lo + 2..gap_count {
            if incidence.turbulent(lo, hi) == Ok(true) {
                calmed.extend(thinnest_between(&profile, lo, hi));
            }
        }
    }
    for g in calmed {
        let x = position(&reports, g);
        reports[x].add(Claim::WeaklyIncompressible, Tag::Turbulent);
    }

    for r in &mut reports {
        for side in [Side::Above, Side::Below] {
            if r.pa(side).len() <= 1 {
                r.add(Claim::AtMostOneDisk(side), Tag::OnePotentiallyAlternating);
            }
            if let Some(&a1) = r.pa(side).first() {
                let ctx = SphereSide::new(pres, &profile, r.gap, side).expect("thin");
                let range = ctx.events_between(r.gap, a1);
                let blocked = ctx
                    .region
                    .strands
                    .iter()
                    .any(|s| s.crosses(a1) && s.critical_events.iter().any(|e| range.contains(e)));
                if blocked {
                    r.add(Claim::NoHeightOneDisk(side), Tag::StrandThroughA1);
                }
            }
        }
        let bound = Claim::DisjointIrreducibleBound {
            rank: r.rank,
            above: r.potentially_alternating_above.len(),
            below: r.potentially_alternating_below.len(),
        };
        r.add(bound, Tag::DisjointBound);
    }
    reports
}
