use std::collections::{BTreeMap, BTreeSet};

use serde::{Serialize, Serializer};

use super::report::{sphere_report, Claim, ReportFlags};
use super::{disk_height, CertError, CertFamily, CertIssue, DiskCertificate, SphereSide};
use crate::morse::{GapIndex, LevelProfile, MorsePresentation};
use crate::Side;

/// The structural fact a finding contradicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    HeightUndefined,
    HeightDeterminesStrands,
    SameHeightMustIntersect,
    DisjointBound,
    NoDiskOfHeight,
    HeightOneIrreducible,
    StrandThroughA1,
    AlternatingBelowAll,
    AlternatingDecreasing,
    IncompressibleSide,
    AtMostOneDisk,
    InteriorsIntersect,
    InteriorsNested,
    NestingDirection,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::HeightUndefined => "no height fits",
            Rule::HeightDeterminesStrands => "height determines the short ball",
            Rule::SameHeightMustIntersect => "same height must intersect",
            Rule::DisjointBound => "at most n disjoint nonparallel irreducible",
            Rule::NoDiskOfHeight => "does not have a compressing disk of height j",
            Rule::HeightOneIrreducible => "height 1 disks are irreducible",
            Rule::StrandThroughA1 => "does not have a compressing disk of height 1",
            Rule::AlternatingBelowAll => "lower than the widths of all level spheres",
            Rule::AlternatingDecreasing => "monotone decreasing",
            Rule::IncompressibleSide => "not compressible on that side",
            Rule::AtMostOneDisk => "at most one compressing disk on that side",
            Rule::InteriorsIntersect => "interior disks intersect",
            Rule::InteriorsNested => "interior disks are nested",
            Rule::NestingDirection => "nests inside iff w(A_l) < w(A_u)",
        }
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub rule: Rule,
    /// Family indices of the certificates involved.
    pub certificates: Vec<usize>,
    pub detail: String,
}

impl std::fmt::Display for Finding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] certificates {:?}: {}",
            self.rule.tag(),
            self.certificates,
            self.detail
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub sphere: GapIndex,
    pub side: Side,
    /// Height of each certificate, by family index.
    pub heights: BTreeMap<usize, Option<usize>>,
    pub violations: Vec<Finding>,
    pub warnings: Vec<Finding>,
}

impl FamilyReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn cert_error(index: usize) -> impl Fn(CertIssue) -> CertError {
    move |issue| CertError::Certificate { index, issue }
}

/// Audits certificates that share one sphere and side.
pub fn check_family(family: &CertFamily, pres: &MorsePresentation) -> Result<FamilyReport, CertError> {
    let Some(first) = family.certificates.first() else {
        return Err(CertError::MixedSphereOrSide);
    };
    if family
        .certificates
        .iter()
        .any(|c| c.sphere != first.sphere || c.side != first.side)
    {
        return Err(CertError::MixedSphereOrSide);
    }
    let profile = pres.profile();
    let members: Vec<usize> = (0..family.len()).collect();
    check_group(family, &members, pres, &profile, ReportFlags::default())
}

fn check_group(
    family: &CertFamily,
    members: &[usize],
    pres: &MorsePresentation,
    profile: &LevelProfile,
    flags: ReportFlags,
) -> Result<FamilyReport, CertError> {
    let head = &family.certificates[members[0]];
    let (sphere, side) = (head.sphere, head.side);
    let ctx = SphereSide::new(pres, profile, sphere, side).map_err(cert_error(members[0]))?;
    for &i in members {
        ctx.validate(&family.certificates[i]).map_err(cert_error(i))?;
    }
    let cert = |i: usize| &family.certificates[i];
    let heights: BTreeMap<usize, Option<usize>> =
        members.iter().map(|&i| (i, disk_height(cert(i), &ctx).ok())).collect();
    // height 1 disks are irreducible whatever the certificate says
    let irreducible = |i: usize| cert(i).irreducible == Some(true) || heights[&i] == Some(1);

    let mut violations = Vec::new();
    let mut warnings = Vec::new();
    let push = |out: &mut Vec<Finding>, rule, certificates: Vec<usize>, detail: String| {
        out.push(Finding {
            rule,
            certificates,
            detail,
        })
    };

    let report = sphere_report(pres, flags)
        .into_iter()
        .find(|r| r.gap == sphere)
        .expect("sphere is thin");
    if let Some(v) = report.verdicts.iter().find(|v| v.claim.rules_out(side)) {
        push(
            &mut violations,
            Rule::IncompressibleSide,
            members.to_vec(),
            format!("the sphere is {} ({})", v.claim, v.tag.as_str()),
        );
    }

    for &i in members {
        let c = cert(i);
        let Some(h) = heights[&i] else {
            push(
                &mut violations,
                Rule::HeightUndefined,
                vec![i],
                format!(
                    "strands {:?} meet every one of the {} potentially alternating spheres",
                    c.strands,
                    ctx.potentially_alternating.len()
                ),
            );
            continue;
        };
        if h == 1 && c.irreducible == Some(false) {
            push(
                &mut violations,
                Rule::HeightOneIrreducible,
                vec![i],
                "certificate of height 1 is marked reducible".into(),
            );
        }
        if h == 1 && report.verdicts.iter().any(|v| v.claim == Claim::NoHeightOneDisk(side)) {
            push(
                &mut violations,
                Rule::StrandThroughA1,
                vec![i],
                "a strand with a critical point before A_1 also crosses A_1".into(),
            );
        }
        // alternating spheres for this disk
        let alternating = ctx.alternating_for(&c.strands);
        let widths: Vec<usize> = alternating.iter().map(|&g| profile.gaps[g].count).collect();
        for (&g, &w) in alternating.iter().zip(&widths) {
            let lower: Vec<GapIndex> = std::iter::once(sphere)
                .chain(profile.gaps_toward(sphere, side).into_iter().take_while(|&x| x != g))
                .collect();
            if let Some(&s) = lower.iter().find(|&&s| profile.gaps[s].count <= w) {
                push(
                    &mut violations,
                    Rule::AlternatingBelowAll,
                    vec![i],
                    format!(
                        "alternating gap {g} has width {w} but gap {s} nearer the sphere has {}",
                        profile.gaps[s].count
                    ),
                );
            }
        }
        if widths.windows(2).any(|p| p[1] >= p[0]) {
            push(
                &mut violations,
                Rule::AlternatingDecreasing,
                vec![i],
                format!("alternating gaps {alternating:?} have widths {widths:?}"),
            );
        }
    }

    for (x, &i) in members.iter().enumerate() {
        for &j in &members[x + 1..] {
            let (Some(hi), Some(hj)) = (heights[&i], heights[&j]) else {
                continue;
            };
            if !(irreducible(i) && irreducible(j)) {
                continue;
            }
            let (si, sj) = (&cert(i).strands, &cert(j).strands);
            if hi == hj && si != sj {
                push(
                    &mut violations,
                    Rule::HeightDeterminesStrands,
                    vec![i, j],
                    format!("both have height {hi} but short balls {si:?} and {sj:?}"),
                );
            }
            if hi != hj && !si.is_disjoint(sj) {
                push(
                    &mut violations,
                    Rule::HeightDeterminesStrands,
                    vec![i, j],
                    format!("heights {hi} and {hj} but the short balls share strands"),
                );
            }
            if hi == hj && family.disks_disjoint(i, j) {
                push(
                    &mut violations,
                    Rule::SameHeightMustIntersect,
                    vec![i, j],
                    format!("both have height {hi} and are asserted disjoint"),
                );
            }
        }
    }

    let n = ctx.potentially_alternating.len();
    let pool: Vec<usize> = members.iter().copied().filter(|&i| irreducible(i)).collect();
    let clique = max_clique(&pool, |i, j| family.disks_disjoint(i, j));
    if clique.len() > n {
        push(
            &mut violations,
            Rule::DisjointBound,
            clique.clone(),
            format!(
                "{} pairwise disjoint irreducible disks but only {n} potentially alternating spheres {}",
                clique.len(),
                side.as_str()
            ),
        );
    }

    for &k in members {
        let Some(hk) = heights[&k] else { continue };
        if !irreducible(k) {
            continue;
        }
        for j in 1..hk {
            let (lo, hi) = (ctx.a(j - 1).expect("j <= k"), ctx.a(j).expect("j < height <= k"));
            if !ctx.has_critical_between(&cert(k).strands, lo, hi) {
                continue;
            }
            for &other in members {
                if other != k && heights[&other] == Some(j) && irreducible(other) {
                    push(
                        &mut violations,
                        Rule::NoDiskOfHeight,
                        vec![k, other],
                        format!(
                            "height {hk} short ball has critical points between A_{} and A_{j}",
                            j - 1
                        ),
                    );
                }
            }
        }
    }

    if n <= 1 && members.len() > 1 {
        push(
            &mut warnings,
            Rule::AtMostOneDisk,
            members.to_vec(),
            format!(
                "{} certificates on a side with {n} potentially alternating sphere(s); they must be parallel",
                members.len()
            ),
        );
    }

    Ok(FamilyReport {
        sphere,
        side,
        heights,
        violations,
        warnings,
    })
}

/// Largest set of pool members that are pairwise adjacent.
fn max_clique(pool: &[usize], adjacent: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    fn grow(
        chosen: &mut Vec<usize>,
        candidates: &[usize],
        adjacent: &dyn Fn(usize, usize) -> bool,
        best: &mut Vec<usize>,
    ) {
        if chosen.len() > best.len() {
            *best = chosen.clone();
        }
        for (x, &v) in candidates.iter().enumerate() {
            if chosen.len() + candidates.len() - x <= best.len() {
                return;
            }
            let next: Vec<usize> = candidates[x + 1..]
                .iter()
                .copied()
                .filter(|&u| adjacent(v, u))
                .collect();
            chosen.push(v);
            grow(chosen, &next, adjacent, best);
            chosen.pop();
        }
    }
    let mut best = Vec::new();
    grow(&mut Vec::new(), pool, &adjacent, &mut best);
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStatus {
    Consistent,
    Inconsistent,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub up: usize,
    pub low: usize,
    pub status: PairStatus,
    /// Nearest alternating gap above for the upper disk.
    pub a_u: Option<GapIndex>,
    /// Nearest alternating gap below for the lower disk.
    pub a_l: Option<GapIndex>,
    pub violations: Vec<Finding>,
}

/// Audits a disk above and a disk below the same sphere whose boundaries are
/// asserted disjoint.
pub fn check_strong_pair(
    family: &CertFamily,
    up: usize,
    low: usize,
    pres: &MorsePresentation,
) -> Result<PairReport, CertError> {
    let profile = pres.profile();
    pair_report(family, up, low, pres, &profile)
}

fn pair_report(
    family: &CertFamily,
    up: usize,
    low: usize,
    pres: &MorsePresentation,
    profile: &LevelProfile,
) -> Result<PairReport, CertError> {
    let (u, l) = (&family.certificates[up], &family.certificates[low]);
    if u.side != Side::Above || l.side != Side::Below || u.sphere != l.sphere {
        return Err(CertError::WrongSides);
    }
    if !family.boundaries_disjoint(up, low) {
        return Err(CertError::MissingAssertion(up, low));
    }
    let above = SphereSide::new(pres, profile, u.sphere, Side::Above).map_err(cert_error(up))?;
    let below = SphereSide::new(pres, profile, l.sphere, Side::Below).map_err(cert_error(low))?;
    above.validate(u).map_err(cert_error(up))?;
    below.validate(l).map_err(cert_error(low))?;
    let a_u = above.alternating_for(&u.strands).first().copied();
    let a_l = below.alternating_for(&l.strands).first().copied();

    let mut violations = Vec::new();
    let mut push = |rule, detail: String| {
        violations.push(Finding {
            rule,
            certificates: vec![up, low],
            detail,
        })
    };
    let (iu, il) = (&u.int_punctures, &l.int_punctures);
    if iu.is_disjoint(il) {
        push(
            Rule::InteriorsIntersect,
            format!("interior punctures {iu:?} and {il:?} are disjoint"),
        );
    } else if !iu.is_subset(il) && !il.is_subset(iu) {
        push(
            Rule::InteriorsNested,
            format!("interior punctures {iu:?} and {il:?} are not nested"),
        );
    }
    let (Some(gu), Some(gl)) = (a_u, a_l) else {
        let status = if violations.is_empty() {
            PairStatus::NotApplicable
        } else {
            PairStatus::Inconsistent
        };
        return Ok(PairReport {
            up,
            low,
            status,
            a_u,
            a_l,
            violations,
        });
    };
    let (wu, wl) = (profile.gaps[gu].count, profile.gaps[gl].count);
    let nested_in = |inner: &BTreeSet<usize>, outer: &BTreeSet<usize>| inner.is_subset(outer);
    if wu == wl {
        push(
            Rule::NestingDirection,
            format!("w(A_u) = w(A_l) = {wu} leaves no consistent nesting direction"),
        );
    } else if wl < wu && !nested_in(iu, il) {
        push(
            Rule::NestingDirection,
            format!("w(A_l) = {wl} < w(A_u) = {wu}, so the upper interior must lie inside the lower"),
        );
    } else if wu < wl && !nested_in(il, iu) {
        push(
            Rule::NestingDirection,
            format!("w(A_u) = {wu} < w(A_l) = {wl}, so the lower interior must lie inside the upper"),
        );
    }
    let status = if violations.is_empty() {
        PairStatus::Consistent
    } else {
        PairStatus::Inconsistent
    };
    Ok(PairReport {
        up,
        low,
        status,
        a_u,
        a_l,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub families: Vec<FamilyReport>,
    pub pairs: Vec<PairReport>,
}

impl AuditReport {
    pub fn violations(&self) -> impl Iterator<Item = &Finding> {
        self.families
            .iter()
            .flat_map(|f| &f.violations)
            .chain(self.pairs.iter().flat_map(|p| &p.violations))
    }

    pub fn violation_count(&self) -> usize {
        self.violations().count()
    }

    pub fn is_clean(&self) -> bool {
        self.violation_count() == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("audit serializes")
    }
}

/// Groups certificates by sphere and side, checks each group, and checks
/// every above/below pair with disjoint boundaries as a strong pair.
pub fn audit(family: &CertFamily, pres: &MorsePresentation, flags: ReportFlags) -> Result<AuditReport, CertError> {
    let profile = pres.profile();
    let mut groups: BTreeMap<(GapIndex, Side), Vec<usize>> = BTreeMap::new();
    for (i, c) in family.certificates.iter().enumerate() {
        groups.entry((c.sphere, c.side)).or_default().push(i);
    }
    let families = groups
        .values()
        .map(|members| check_group(family, members, pres, &profile, flags))
        .collect::<Result<Vec<_>, _>>()?;
    let mut pairs = Vec::new();
    for (up, u) in family.certificates.iter().enumerate() {
        for (low, l) in family.certificates.iter().enumerate() {
            if is_strong_candidate(family, u, l, up, low) {
                pairs.push(pair_report(family, up, low, pres, &profile)?);
            }
        }
    }
    Ok(AuditReport { families, pairs })
}

fn is_strong_candidate(family: &CertFamily, u: &DiskCertificate, l: &DiskCertificate, up: usize, low: usize) -> bool {
    u.side == Side::Above && l.side == Side::Below && u.sphere == l.sphere && family.boundaries_disjoint(up, low)
}
