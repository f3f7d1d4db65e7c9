use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{EventKind, GapIndex, LevelProfile, MorsePresentation, ProfileError};
use crate::union_find::UnionFind;
use crate::Side;

/// A monotone arc of the link running from a cup up to a cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub birth_event: usize,
    pub death_event: usize,
    pub first_gap: GapIndex,
    pub last_gap: GapIndex,
}

impl Edge {
    pub fn crosses(&self, g: GapIndex) -> bool {
        self.first_gap <= g && g <= self.last_gap
    }
}

/// Which gaps every edge of the link crosses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrandIncidence {
    pub edges: Vec<Edge>,
    gap_count: usize,
}

impl StrandIncidence {
    pub fn of(pres: &MorsePresentation) -> Self {
        // ordinal of each critical event among the critical events
        let mut ordinal = vec![usize::MAX; pres.len()];
        for (k, &e) in pres.critical_indices().iter().enumerate() {
            ordinal[e] = k;
        }
        let mut open: Vec<usize> = Vec::new();
        let mut births: Vec<usize> = Vec::new();
        let mut edges = Vec::new();
        for (index, event) in pres.events().iter().enumerate() {
            let i = event.position;
            match event.kind {
                EventKind::Cup => {
                    let id = births.len();
                    births.push(index);
                    births.push(index);
                    open.splice(i..i, [id, id + 1]);
                }
                EventKind::Cap => {
                    for id in open.drain(i..i + 2) {
                        let birth = births[id];
                        edges.push((id, birth, index));
                    }
                }
                EventKind::CrossPos | EventKind::CrossNeg => open.swap(i, i + 1),
            }
        }
        edges.sort_unstable_by_key(|&(id, _, _)| id);
        let edges = edges
            .into_iter()
            .map(|(_, birth, death)| Edge {
                birth_event: birth,
                death_event: death,
                first_gap: ordinal[birth],
                last_gap: ordinal[death] - 1,
            })
            .collect();
        let gap_count = pres.critical_indices().len().saturating_sub(1);
        Self { edges, gap_count }
    }

    pub fn crossing(&self, g: GapIndex) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.crosses(g))
    }

    /// Edges that run through the whole region between `lower` and `upper`
    /// without turning.
    pub fn pass_through(&self, lower: GapIndex, upper: GapIndex) -> impl Iterator<Item = &Edge> {
        self.edges
            .iter()
            .filter(move |e| e.first_gap <= lower && e.last_gap >= upper)
    }

    /// Whether every strand of the region between two gaps has a critical
    /// point in it. A strand without one is a single edge crossing both gaps.
    pub fn turbulent(&self, lower: GapIndex, upper: GapIndex) -> Result<bool, ProfileError> {
        if lower >= upper {
            return Err(ProfileError::BadGapOrder { lower, upper });
        }
        if upper >= self.gap_count {
            return Err(ProfileError::NoSuchGap(upper));
        }
        Ok(self.pass_through(lower, upper).next().is_none())
    }
}

pub fn turbulent(pres: &MorsePresentation, lower: GapIndex, upper: GapIndex) -> Result<bool, ProfileError> {
    StrandIncidence::of(pres).turbulent(lower, upper)
}

/// A connected piece of the link on one side of a level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionStrand {
    pub id: usize,
    /// Row positions on the level where this strand ends.
    pub punctures: Vec<usize>,
    /// Event indices of the cups and caps on this strand.
    pub critical_events: Vec<usize>,
    /// Number of points in which the strand meets each gap of the region.
    pub crossings: BTreeMap<GapIndex, usize>,
}

impl RegionStrand {
    pub fn crosses(&self, g: GapIndex) -> bool {
        self.crossings.get(&g).is_some_and(|&n| n > 0)
    }

    pub fn crossing_count(&self, g: GapIndex) -> usize {
        self.crossings.get(&g).copied().unwrap_or(0)
    }

    pub fn is_closed(&self) -> bool {
        self.punctures.is_empty()
    }
}

/// The strands of the link on one side of a gap's level.
///
/// The level sits just above the gap's lower critical event, so crossings
/// inside the gap belong to the region above. Strands meeting the level are
/// numbered by their leftmost puncture, closed components after them by
/// their first event.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionStrands {
    pub sphere: GapIndex,
    pub side: Side,
    pub punctures: usize,
    pub strands: Vec<RegionStrand>,
    owner: HashMap<usize, usize>,
}

impl RegionStrands {
    pub fn of(
        pres: &MorsePresentation,
        profile: &LevelProfile,
        sphere: GapIndex,
        side: Side,
    ) -> Result<Self, ProfileError> {
        let gap = *profile.gap(sphere)?;
        let level_event = gap.lower_event;
        let events = pres.events();
        let range = match side {
            Side::Above => level_event + 1..events.len(),
            Side::Below => 0..level_event + 1,
        };
        // rows are sampled just above each region gap's lower event
        let sample_at: HashMap<usize, GapIndex> = profile
            .gaps_toward(sphere, side)
            .into_iter()
            .map(|g| (profile.gaps[g].lower_event, g))
            .collect();

        let mut uf = UnionFind::new();
        let mut row: Vec<usize> = match side {
            Side::Above => (0..gap.count).map(|_| uf.make_set()).collect(),
            Side::Below => Vec::new(),
        };
        let mut critical: Vec<(usize, usize)> = Vec::new();
        let mut samples: Vec<(GapIndex, Vec<usize>)> = Vec::new();
        for index in range {
            let event = events[index];
            let i = event.position;
            match event.kind {
                EventKind::Cup => {
                    let node = uf.make_set();
                    row.splice(i..i, [node, node]);
                    critical.push((index, node));
                }
                EventKind::Cap => {
                    let node = uf.union(row[i], row[i + 1]);
                    row.drain(i..i + 2);
                    critical.push((index, node));
                }
                EventKind::CrossPos | EventKind::CrossNeg => row.swap(i, i + 1),
            }
            if let Some(&g) = sample_at.get(&index) {
                samples.push((g, row.clone()));
            }
        }
        let puncture_nodes: Vec<usize> = match side {
            Side::Above => (0..gap.count).collect(),
            Side::Below => row,
        };

        // assign strand ids to union-find roots
        let mut id_of_root: HashMap<usize, usize> = HashMap::new();
        let mut strands: Vec<RegionStrand> = Vec::new();
        let mut fresh = |root: usize, strands: &mut Vec<RegionStrand>| -> usize {
            *id_of_root.entry(root).or_insert_with(|| {
                strands.push(RegionStrand {
                    id: strands.len(),
                    punctures: Vec::new(),
                    critical_events: Vec::new(),
                    crossings: BTreeMap::new(),
                });
                strands.len() - 1
            })
        };
        for (pos, &node) in puncture_nodes.iter().enumerate() {
            let root = uf.find(node);
            let id = fresh(root, &mut strands);
            strands[id].punctures.push(pos);
        }
        let mut owner = HashMap::new();
        for &(index, node) in &critical {
            let root = uf.find(node);
            let id = fresh(root, &mut strands);
            strands[id].critical_events.push(index);
            owner.insert(index, id);
        }
        for (g, sampled) in samples {
            for node in sampled {
                let root = uf.find(node);
                let id = fresh(root, &mut strands);
                *strands[id].crossings.entry(g).or_insert(0) += 1;
            }
        }
        for s in &mut strands {
            s.critical_events.sort_unstable();
        }
        Ok(Self {
            sphere,
            side,
            punctures: gap.count,
            strands,
            owner,
        })
    }

    pub fn len(&self) -> usize {
        self.strands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strands.is_empty()
    }

    pub fn get(&self, id: usize) -> Option<&RegionStrand> {
        self.strands.get(id)
    }

    /// The strand carrying a given critical event of the region.
    pub fn owner_of_event(&self, event: usize) -> Option<usize> {
        self.owner.get(&event).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::MorseEvent;
    use super::*;

    #[test]
    fn edges_of_p1() {
        let inc = StrandIncidence::of(&p1());
        assert_eq!(inc.edges.len(), 4);
        // the outer circle's edges run through every gap
        assert_eq!(inc.pass_through(0, 2).count(), 2);
    }

    #[test]
    fn outer_strands_of_p1_pass_straight_through() {
        // The outer circle runs from the lowest cup to the highest cap, so
        // its two edges cross gaps 0..=2 without a critical point.
        assert_eq!(turbulent(&p1(), 0, 2), Ok(false));
    }

    #[test]
    fn side_by_side_circles_are_turbulent() {
        // gap 0 is crossed only by the first circle, gap 2 only by the second
        let pres = MorsePresentation::new(vec![
            MorseEvent::cup(0),
            MorseEvent::cup(2),
            MorseEvent::cap(0),
            MorseEvent::cap(0),
        ])
        .unwrap();
        assert_eq!(turbulent(&pres, 0, 2), Ok(true));
        assert_eq!(turbulent(&pres, 0, 1), Ok(false));
    }

    #[test]
    fn crossings_only_region_is_not_turbulent() {
        let pres = MorsePresentation::new(vec![
            MorseEvent::cup(0),
            MorseEvent::cup(2),
            MorseEvent::cross_pos(1),
            MorseEvent::cross_pos(1),
            MorseEvent::cap(0),
            MorseEvent::cap(0),
        ])
        .unwrap();
        let prof = pres.profile();
        assert_eq!(prof.counts(), vec![2, 4, 2]);
        assert_eq!(turbulent(&pres, 0, 1), Ok(false));
    }

    #[test]
    fn adjacent_gaps_with_pass_through() {
        assert_eq!(turbulent(&p2(), 0, 1), Ok(false));
    }

    #[test]
    fn gap_order_is_checked() {
        assert_eq!(
            turbulent(&p2(), 2, 2),
            Err(ProfileError::BadGapOrder { lower: 2, upper: 2 })
        );
        assert_eq!(turbulent(&p2(), 0, 9), Err(ProfileError::NoSuchGap(9)));
    }

    #[test]
    fn region_strands_above_thin_gap_of_p2() {
        let pres = p2();
        let prof = pres.profile();
        let above = RegionStrands::of(&pres, &prof, 2, Side::Above).unwrap();
        // one arc leaving both punctures
        assert_eq!(above.len(), 1);
        assert_eq!(above.strands[0].punctures, vec![0, 1]);
        assert_eq!(above.strands[0].crossing_count(3), 4);
        let below = RegionStrands::of(&pres, &prof, 2, Side::Below).unwrap();
        assert_eq!(below.len(), 1);
        assert_eq!(below.strands[0].critical_events, vec![0, 1, 2]);
        assert_eq!(below.strands[0].crossing_count(1), 4);
    }

    #[test]
    fn region_counts_match_gap_counts() {
        let pres = MorsePresentation::new(vec![
            MorseEvent::cup(0),
            MorseEvent::cup(2),
            MorseEvent::cap(1),
            MorseEvent::cup(0),
            MorseEvent::cup(0),
            MorseEvent::cap(1),
            MorseEvent::cap(2),
            MorseEvent::cap(0),
        ])
        .unwrap();
        let prof = pres.profile();
        for p in 0..prof.gaps.len() {
            for side in [Side::Above, Side::Below] {
                let region = RegionStrands::of(&pres, &prof, p, side).unwrap();
                for g in prof.gaps_toward(p, side) {
                    let total: usize = region.strands.iter().map(|s| s.crossing_count(g)).sum();
                    assert_eq!(total, prof.gaps[g].count, "sphere {p} {side:?} gap {g}");
                }
                let punct: usize = region.strands.iter().map(|s| s.punctures.len()).sum();
                assert_eq!(punct, prof.gaps[p].count);
            }
        }
    }
}
