use serde::Serialize;
use thiserror::Error;

use super::{EventKind, GapIndex, MorsePresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GapClass {
    Thin,
    Thick,
    Neither,
}

impl GapClass {
    pub fn as_str(self) -> &'static str {
        match self {
            GapClass::Thin => "thin",
            GapClass::Thick => "thick",
            GapClass::Neither => "neither",
        }
    }
}

/// The region strictly between two consecutive critical events.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Gap {
    pub count: usize,
    pub class: GapClass,
    /// Event index of the critical event just below.
    pub lower_event: usize,
    /// Event index of the critical event just above.
    pub upper_event: usize,
}

/// Sorted distinct widths of the thin gaps.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WidthLadder {
    values: Vec<usize>,
}

impl WidthLadder {
    pub fn from_widths<I: IntoIterator<Item = usize>>(widths: I) -> Self {
        let mut values: Vec<usize> = widths.into_iter().collect();
        values.sort_unstable();
        values.dedup();
        Self { values }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn rank_of(&self, width: usize) -> Option<usize> {
        self.values.binary_search(&width).ok()
    }

    pub fn get(&self, rank: usize) -> Option<usize> {
        self.values.get(rank).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("gap {0} is not a thin gap")]
    NotAThinGap(GapIndex),
    #[error("gap {0} does not exist")]
    NoSuchGap(GapIndex),
    #[error("gap {lower} is not below gap {upper}")]
    BadGapOrder { lower: GapIndex, upper: GapIndex },
}

/// Strand counts of every gap, their thin/thick classes and the width ladder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelProfile {
    pub gaps: Vec<Gap>,
    pub width: usize,
    pub ladder: WidthLadder,
}

impl LevelProfile {
    pub fn of(pres: &MorsePresentation) -> Self {
        let events = pres.events();
        let counts = pres.strand_counts();
        let critical = pres.critical_indices();
        let gaps: Vec<Gap> = critical
            .windows(2)
            .map(|pair| {
                let (lower, upper) = (pair[0], pair[1]);
                let class = match (events[lower].kind, events[upper].kind) {
                    (EventKind::Cap, EventKind::Cup) => GapClass::Thin,
                    (EventKind::Cup, EventKind::Cap) => GapClass::Thick,
                    _ => GapClass::Neither,
                };
                Gap {
                    count: counts[lower + 1],
                    class,
                    lower_event: lower,
                    upper_event: upper,
                }
            })
            .collect();
        let width = gaps.iter().map(|g| g.count).sum();
        let ladder = WidthLadder::from_widths(gaps.iter().filter(|g| g.class == GapClass::Thin).map(|g| g.count));
        Self { gaps, width, ladder }
    }

    pub fn counts(&self) -> Vec<usize> {
        self.gaps.iter().map(|g| g.count).collect()
    }

    pub fn gap(&self, g: GapIndex) -> Result<&Gap, ProfileError> {
        self.gaps.get(g).ok_or(ProfileError::NoSuchGap(g))
    }

    pub fn is_thin(&self, g: GapIndex) -> bool {
        self.gaps.get(g).is_some_and(|gap| gap.class == GapClass::Thin)
    }

    pub fn thin_gaps(&self) -> Vec<GapIndex> {
        (0..self.gaps.len()).filter(|&g| self.is_thin(g)).collect()
    }

    pub fn thin_widths(&self) -> Vec<usize> {
        self.thin_gaps().iter().map(|&g| self.gaps[g].count).collect()
    }

    pub fn is_bridge_position(&self) -> bool {
        self.thin_gaps().is_empty()
    }

    /// Ladder rank of a thin gap's width.
    pub fn rank(&self, g: GapIndex) -> Result<usize, ProfileError> {
        if !self.is_thin(g) {
            return Err(ProfileError::NotAThinGap(g));
        }
        Ok(self
            .ladder
            .rank_of(self.gaps[g].count)
            .expect("thin widths are on the ladder"))
    }

    /// Gaps on one side of `g`, nearest first.
    pub fn gaps_toward(&self, g: GapIndex, side: crate::Side) -> Vec<GapIndex> {
        match side {
            crate::Side::Above => (g + 1..self.gaps.len()).collect(),
            crate::Side::Below => (0..g).rev().collect(),
        }
    }
}

/// Thin gaps on `side` of the thin gap `p` that are strictly thinner than
/// every thin gap between them and `p`, `p` included. Nearest first, so the
/// widths are strictly decreasing.
pub fn potentially_alternating(
    profile: &LevelProfile,
    p: GapIndex,
    side: crate::Side,
) -> Result<Vec<GapIndex>, ProfileError> {
    if !profile.is_thin(p) {
        return Err(ProfileError::NotAThinGap(p));
    }
    let mut bar = profile.gaps[p].count;
    let mut out = Vec::new();
    for g in profile.gaps_toward(p, side) {
        if profile.is_thin(g) && profile.gaps[g].count < bar {
            bar = profile.gaps[g].count;
            out.push(g);
        }
    }
    Ok(out)
}
