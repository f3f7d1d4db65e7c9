//! Compressing-disk certificates for thin level spheres.
//!
//! Disks themselves cannot be computed from a presentation. A certificate
//! records what a user claims about one (which strands its short ball holds,
//! which punctures the interior disk encloses, whether it is irreducible)
//! and the audits here check those claims against what the width data
//! forces. A clean audit proves nothing about existence.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::morse::{potentially_alternating, GapIndex, LevelProfile, MorsePresentation, ProfileError, RegionStrands};
use crate::Side;

mod family;
mod report;

pub use family::{
    audit, check_family, check_strong_pair, AuditReport, FamilyReport, Finding, PairReport, PairStatus, Rule,
};
pub use report::{sphere_report, Claim, ReportFlags, SphereReport, Tag, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskCertificate {
    pub sphere: GapIndex,
    pub side: Side,
    /// Region strand ids in the short ball.
    pub strands: BTreeSet<usize>,
    /// Indices of the punctures of the sphere inside the interior disk.
    #[serde(default)]
    pub int_punctures: BTreeSet<usize>,
    /// `None` when the certificate makes no claim.
    #[serde(default)]
    pub irreducible: Option<bool>,
    #[serde(default)]
    pub vertical: Option<bool>,
}

/// Certificates plus pairwise geometric assertions, by index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertFamily {
    pub certificates: Vec<DiskCertificate>,
    #[serde(default)]
    pub disjoint_disks: Vec<[usize; 2]>,
    #[serde(default)]
    pub disjoint_boundaries: Vec<[usize; 2]>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FamilyJson {
    Family(CertFamily),
    Bare(Vec<DiskCertificate>),
}

impl CertFamily {
    /// Accepts the family object or a bare array of certificates.
    pub fn from_json(text: &str) -> Result<Self, CertError> {
        let family = match serde_json::from_str::<FamilyJson>(text).map_err(|e| CertError::Json(e.to_string()))? {
            FamilyJson::Family(f) => f,
            FamilyJson::Bare(certificates) => CertFamily {
                certificates,
                ..CertFamily::default()
            },
        };
        for &pair in family.disjoint_disks.iter().chain(&family.disjoint_boundaries) {
            let [i, j] = pair;
            if i == j || i >= family.certificates.len() || j >= family.certificates.len() {
                return Err(CertError::BadPair {
                    pair,
                    len: family.certificates.len(),
                });
            }
        }
        Ok(family)
    }

    pub fn len(&self) -> usize {
        self.certificates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.certificates.is_empty()
    }

    /// Assertions are symmetric: `[i, j]` also asserts `[j, i]`.
    pub fn disks_disjoint(&self, i: usize, j: usize) -> bool {
        self.disjoint_disks.iter().any(|&p| p == [i, j] || p == [j, i])
    }

    pub fn boundaries_disjoint(&self, i: usize, j: usize) -> bool {
        self.disjoint_disks
            .iter()
            .chain(&self.disjoint_boundaries)
            .any(|&p| p == [i, j] || p == [j, i])
    }
}

/// What is wrong with a single certificate.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertIssue {
    #[error("gap {0} is not a thin gap")]
    NotThin(GapIndex),
    #[error("no strands listed")]
    EmptyStrands,
    #[error("lists every strand on its side")]
    AllStrands,
    #[error("strand {strand} does not exist (the region has {count})")]
    UnknownStrand { strand: usize, count: usize },
    #[error("puncture {puncture} does not exist (the sphere has {count})")]
    UnknownPuncture { puncture: usize, count: usize },
    #[error("encloses {0} punctures, an odd number")]
    OddInteriorPunctures(usize),
    #[error("its strands meet the outermost potentially alternating sphere, so no height fits")]
    NoValidHeight,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("invalid certificate JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("certificate {index}: {issue}")]
    Certificate { index: usize, issue: CertIssue },
    #[error("assertion {pair:?} does not name two distinct certificates of {len}")]
    BadPair { pair: [usize; 2], len: usize },
    #[error("certificates lie on different spheres or sides")]
    MixedSphereOrSide,
    #[error("a strong pair needs one certificate above and one below the same sphere")]
    WrongSides,
    #[error("certificates {0} and {1} are not asserted to have disjoint boundaries")]
    MissingAssertion(usize, usize),
}

/// One side of a thin sphere with everything the audits look up.
#[derive(Clone, Debug)]
pub struct SphereSide<'a> {
    pub profile: &'a LevelProfile,
    pub sphere: GapIndex,
    pub side: Side,
    pub region: RegionStrands,
    /// A_1, ..., A_k nearest first.
    pub potentially_alternating: Vec<GapIndex>,
}

impl<'a> SphereSide<'a> {
    pub fn new(
        pres: &MorsePresentation,
        profile: &'a LevelProfile,
        sphere: GapIndex,
        side: Side,
    ) -> Result<Self, CertIssue> {
        let pa = potentially_alternating(profile, sphere, side).map_err(|_| CertIssue::NotThin(sphere))?;
        let region = RegionStrands::of(pres, profile, sphere, side).map_err(|_| CertIssue::NotThin(sphere))?;
        Ok(Self {
            profile,
            sphere,
            side,
            region,
            potentially_alternating: pa,
        })
    }

    /// A_i with A_0 the sphere itself.
    pub fn a(&self, i: usize) -> Option<GapIndex> {
        if i == 0 {
            Some(self.sphere)
        } else {
            self.potentially_alternating.get(i - 1).copied()
        }
    }

    pub fn validate(&self, cert: &DiskCertificate) -> Result<(), CertIssue> {
        if cert.strands.is_empty() {
            return Err(CertIssue::EmptyStrands);
        }
        let count = self.region.len();
        if let Some(&strand) = cert.strands.iter().find(|&&s| s >= count) {
            return Err(CertIssue::UnknownStrand { strand, count });
        }
        if cert.strands.len() == count {
            return Err(CertIssue::AllStrands);
        }
        let punctures = self.region.punctures;
        if let Some(&puncture) = cert.int_punctures.iter().find(|&&p| p >= punctures) {
            return Err(CertIssue::UnknownPuncture {
                puncture,
                count: punctures,
            });
        }
        if !cert.int_punctures.len().is_multiple_of(2) {
            return Err(CertIssue::OddInteriorPunctures(cert.int_punctures.len()));
        }
        Ok(())
    }

    /// Whether any of `strands` meets gap `g`; for the sphere itself that
    /// means ending on it.
    pub fn meets(&self, strands: &BTreeSet<usize>, g: GapIndex) -> bool {
        strands.iter().filter_map(|&s| self.region.get(s)).any(|s| {
            if g == self.sphere {
                !s.punctures.is_empty()
            } else {
                s.crosses(g)
            }
        })
    }

    /// Event indices strictly between two gaps on this side.
    pub fn events_between(&self, g1: GapIndex, g2: GapIndex) -> RangeInclusive<usize> {
        let (lo, hi) = (g1.min(g2), g1.max(g2));
        self.profile.gaps[lo].upper_event..=self.profile.gaps[hi].lower_event
    }

    pub fn has_critical_between(&self, strands: &BTreeSet<usize>, g1: GapIndex, g2: GapIndex) -> bool {
        let range = self.events_between(g1, g2);
        strands
            .iter()
            .filter_map(|&s| self.region.get(s))
            .any(|s| s.critical_events.iter().any(|e| range.contains(e)))
    }

    fn holds_event(&self, strands: &BTreeSet<usize>, event: usize) -> bool {
        self.region.owner_of_event(event).is_some_and(|s| strands.contains(&s))
    }

    /// The cup or cap of the gap nearer to, and farther from, the sphere.
    fn near_far_events(&self, g: GapIndex) -> (usize, usize) {
        let gap = &self.profile.gaps[g];
        match self.side {
            Side::Above => (gap.lower_event, gap.upper_event),
            Side::Below => (gap.upper_event, gap.lower_event),
        }
    }

    /// Alternating spheres for a disk whose short ball holds `strands`:
    /// thin gaps out to the first thin gap beyond all of their critical
    /// points whose two critical events lie on different sides of the disk.
    pub fn alternating_for(&self, strands: &BTreeSet<usize>) -> Vec<GapIndex> {
        let events: Vec<usize> = strands
            .iter()
            .filter_map(|&s| self.region.get(s))
            .flat_map(|s| s.critical_events.iter().copied())
            .collect();
        let Some(&farthest) = (match self.side {
            Side::Above => events.iter().max(),
            Side::Below => events.iter().min(),
        }) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for g in self.profile.gaps_toward(self.sphere, self.side) {
            if !self.profile.is_thin(g) {
                continue;
            }
            let (near, far) = self.near_far_events(g);
            if self.holds_event(strands, near) != self.holds_event(strands, far) {
                out.push(g);
            }
            let beyond = match self.side {
                Side::Above => near >= farthest,
                Side::Below => near <= farthest,
            };
            if beyond {
                break;
            }
        }
        out
    }
}

/// The `i` with the strands meeting A_(i-1) but not A_i.
pub fn disk_height(cert: &DiskCertificate, ctx: &SphereSide<'_>) -> Result<usize, CertIssue> {
    (1..=ctx.potentially_alternating.len())
        .find(|&i| {
            let prev = ctx.a(i - 1).expect("i - 1 < k");
            let cur = ctx.a(i).expect("i <= k");
            ctx.meets(&cert.strands, prev) && !ctx.meets(&cert.strands, cur)
        })
        .ok_or(CertIssue::NoValidHeight)
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn cert(sphere: GapIndex, side: Side, strands: &[usize]) -> DiskCertificate {
        DiskCertificate {
            sphere,
            side,
            strands: strands.iter().copied().collect(),
            int_punctures: BTreeSet::new(),
            irreducible: Some(true),
            vertical: None,
        }
    }

    #[test]
    fn fixture_shapes() {
        let p = ladder_up().profile();
        assert_eq!(p.thin_widths(), vec![8, 4, 2]);
        assert_eq!(p.thin_gaps()[0], 5);
        let q = ladder_both().profile();
        assert_eq!(q.thin_widths(), vec![2, 4, 8, 4, 2]);
        assert_eq!(q.thin_gaps()[2], 9);
    }

    #[test]
    fn heights() {
        let pres = ladder_up();
        let prof = pres.profile();
        let ctx = SphereSide::new(&pres, &prof, 5, Side::Above).unwrap();
        assert_eq!(ctx.potentially_alternating, vec![9, 12]);
        // strands 0 and 1 end before A_1, 2 crosses A_1 only, 3 crosses both
        assert_eq!(disk_height(&cert(5, Side::Above, &[0]), &ctx), Ok(1));
        assert_eq!(disk_height(&cert(5, Side::Above, &[1]), &ctx), Ok(1));
        assert_eq!(disk_height(&cert(5, Side::Above, &[2]), &ctx), Ok(2));
        assert_eq!(
            disk_height(&cert(5, Side::Above, &[3]), &ctx),
            Err(CertIssue::NoValidHeight)
        );
    }

    #[test]
    fn validation() {
        let pres = ladder_up();
        let prof = pres.profile();
        let ctx = SphereSide::new(&pres, &prof, 5, Side::Above).unwrap();
        assert_eq!(ctx.validate(&cert(5, Side::Above, &[])), Err(CertIssue::EmptyStrands));
        let all: Vec<usize> = (0..ctx.region.len()).collect();
        assert_eq!(ctx.validate(&cert(5, Side::Above, &all)), Err(CertIssue::AllStrands));
        assert!(matches!(
            ctx.validate(&cert(5, Side::Above, &[99])),
            Err(CertIssue::UnknownStrand { strand: 99, .. })
        ));
        let mut odd = cert(5, Side::Above, &[0]);
        odd.int_punctures = [0].into_iter().collect();
        assert_eq!(ctx.validate(&odd), Err(CertIssue::OddInteriorPunctures(1)));
        odd.int_punctures = [0, 8].into_iter().collect();
        assert!(matches!(
            ctx.validate(&odd),
            Err(CertIssue::UnknownPuncture { puncture: 8, .. })
        ));
        assert_eq!(
            SphereSide::new(&pres, &prof, 6, Side::Above).unwrap_err(),
            CertIssue::NotThin(6)
        );
    }

    #[test]
    fn alternating_for_certificates() {
        let pres = ladder_both();
        let prof = pres.profile();
        let up = SphereSide::new(&pres, &prof, 9, Side::Above).unwrap();
        assert_eq!(up.alternating_for(&[1].into_iter().collect()), vec![13]);
        assert_eq!(up.alternating_for(&[2].into_iter().collect()), vec![16]);
        assert!(up.alternating_for(&[0].into_iter().collect()).is_empty());
        let low = SphereSide::new(&pres, &prof, 9, Side::Below).unwrap();
        assert_eq!(low.potentially_alternating, vec![5, 2]);
        let s = low
            .region
            .strands
            .iter()
            .position(|s| s.punctures == vec![4, 5])
            .unwrap();
        assert_eq!(low.alternating_for(&[s].into_iter().collect()), vec![2]);
    }

    #[test]
    fn family_json_forms() {
        let obj = r#"{"certificates":[{"sphere":5,"side":"above","strands":[0],"int_punctures":[0,1],"irreducible":true,"vertical":false}],"disjoint_disks":[]}"#;
        let f = CertFamily::from_json(obj).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.certificates[0].irreducible, Some(true));
        let bare = r#"[{"sphere":5,"side":"below","strands":[1]}]"#;
        let f = CertFamily::from_json(bare).unwrap();
        assert_eq!(f.certificates[0].side, Side::Below);
        assert_eq!(f.certificates[0].irreducible, None);
        let bad = r#"{"certificates":[{"sphere":5,"side":"above","strands":[0]}],"disjoint_disks":[[0,0]]}"#;
        assert!(matches!(CertFamily::from_json(bad), Err(CertError::BadPair { .. })));
        assert!(matches!(CertFamily::from_json("{"), Err(CertError::Json(_))));
    }
}
