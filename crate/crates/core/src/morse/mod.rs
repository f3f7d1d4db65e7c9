//! Morse presentations of links.
//!
//! A presentation is a bottom-to-top sequence of events acting on a row of
//! strands. A cup (minimum) inserts two strands, a cap (maximum) joins two
//! adjacent strands and removes them, and a crossing swaps two adjacent
//! strands. Cups and caps are the critical points of the height function;
//! crossings are regular points and never affect widths.

mod profile;
mod strands;

pub use profile::{potentially_alternating, Gap, GapClass, LevelProfile, ProfileError, WidthLadder};
pub use strands::{turbulent, Edge, RegionStrand, RegionStrands, StrandIncidence};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::union_find::UnionFind;

/// Index of a gap in a [`LevelProfile`], counted from the bottom.
pub type GapIndex = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EventKind {
    Cup,
    Cap,
    CrossPos,
    CrossNeg,
}

impl EventKind {
    pub fn is_critical(self) -> bool {
        matches!(self, EventKind::Cup | EventKind::Cap)
    }

    pub fn is_crossing(self) -> bool {
        !self.is_critical()
    }

    /// Change in strand count across an event of this kind.
    pub fn strand_delta(self) -> isize {
        match self {
            EventKind::Cup => 2,
            EventKind::Cap => -2,
            EventKind::CrossPos | EventKind::CrossNeg => 0,
        }
    }

    /// The kind seen when the height function is reversed.
    pub fn mirrored(self) -> Self {
        match self {
            EventKind::Cup => EventKind::Cap,
            EventKind::Cap => EventKind::Cup,
            EventKind::CrossPos => EventKind::CrossNeg,
            EventKind::CrossNeg => EventKind::CrossPos,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            EventKind::Cup => "cup",
            EventKind::Cap => "cap",
            EventKind::CrossPos => "x+",
            EventKind::CrossNeg => "x-",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MorseEvent {
    pub kind: EventKind,
    pub position: usize,
}

impl MorseEvent {
    pub const fn new(kind: EventKind, position: usize) -> Self {
        Self { kind, position }
    }

    pub const fn cup(position: usize) -> Self {
        Self::new(EventKind::Cup, position)
    }

    pub const fn cap(position: usize) -> Self {
        Self::new(EventKind::Cap, position)
    }

    pub const fn cross_pos(position: usize) -> Self {
        Self::new(EventKind::CrossPos, position)
    }

    pub const fn cross_neg(position: usize) -> Self {
        Self::new(EventKind::CrossNeg, position)
    }

    /// Whether this event may act on a row of `strands` strands.
    pub fn is_legal_on(&self, strands: usize) -> bool {
        match self.kind {
            EventKind::Cup => self.position <= strands,
            _ => self.position + 2 <= strands,
        }
    }
}

impl fmt::Display for MorseEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind.token(), self.position)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("event {event}: cap needs two strands but only {strands} present")]
    NegativeStrandCount { event: usize, strands: usize },
    #[error("event {event}: position {position} out of range (legal 0..={max})")]
    PositionOutOfRange { event: usize, position: usize, max: usize },
    #[error("{cups} cups but {caps} caps; {final_count} strands left open after event {event}")]
    UnbalancedCupsCaps {
        event: usize,
        cups: usize,
        caps: usize,
        final_count: usize,
    },
}

impl ValidationError {
    /// Index of the earliest offending event.
    pub fn event(&self) -> usize {
        match *self {
            ValidationError::NegativeStrandCount { event, .. }
            | ValidationError::PositionOutOfRange { event, .. }
            | ValidationError::UnbalancedCupsCaps { event, .. } => event,
        }
    }
}

/// Outcome of a successful validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub components: usize,
    /// Gaps between critical events that no strand crosses.
    pub split_gaps: Vec<GapIndex>,
}

impl ValidationReport {
    /// Results about thin position are stated for unsplit links only; this
    /// is set whenever the presentation visibly violates that.
    pub fn assumes_unsplit_caveat(&self) -> bool {
        self.components > 1 || !self.split_gaps.is_empty()
    }
}

/// Checks the event legality rules and returns the component count.
pub fn validate(events: &[MorseEvent]) -> Result<ValidationReport, ValidationError> {
    let mut strands = 0usize;
    let (mut cups, mut caps) = (0, 0);
    for (index, event) in events.iter().enumerate() {
        if event.kind == EventKind::Cap && strands < 2 {
            return Err(ValidationError::NegativeStrandCount { event: index, strands });
        }
        if !event.is_legal_on(strands) {
            let max = match event.kind {
                EventKind::Cup => strands,
                _ => strands.saturating_sub(2),
            };
            return Err(ValidationError::PositionOutOfRange {
                event: index,
                position: event.position,
                max,
            });
        }
        match event.kind {
            EventKind::Cup => {
                cups += 1;
                strands += 2;
            }
            EventKind::Cap => {
                caps += 1;
                strands -= 2;
            }
            _ => {}
        }
    }
    if strands != 0 {
        return Err(ValidationError::UnbalancedCupsCaps {
            event: events.len().saturating_sub(1),
            cups,
            caps,
            final_count: strands,
        });
    }

    let components = count_components(events);
    let mut split_gaps = Vec::new();
    let mut gap = 0;
    let mut count = 0usize;
    let mut seen_critical = false;
    for event in events {
        if !event.kind.is_critical() {
            continue;
        }
        if seen_critical {
            if count == 0 {
                split_gaps.push(gap);
            }
            gap += 1;
        }
        seen_critical = true;
        count = (count as isize + event.kind.strand_delta()) as usize;
    }
    Ok(ValidationReport { components, split_gaps })
}

fn count_components(events: &[MorseEvent]) -> usize {
    let mut uf = UnionFind::new();
    let mut row: Vec<usize> = Vec::new();
    for event in events {
        let i = event.position;
        match event.kind {
            EventKind::Cup => {
                let node = uf.make_set();
                row.splice(i..i, [node, node]);
            }
            EventKind::Cap => {
                uf.union(row[i], row[i + 1]);
                row.drain(i..i + 2);
            }
            EventKind::CrossPos | EventKind::CrossNeg => row.swap(i, i + 1),
        }
    }
    uf.count_roots()
}

/// A validated Morse presentation, events ordered bottom to top.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MorsePresentation {
    events: Vec<MorseEvent>,
    components: usize,
}

impl MorsePresentation {
    pub fn new(events: Vec<MorseEvent>) -> Result<Self, ValidationError> {
        let report = validate(&events)?;
        Ok(Self {
            events,
            components: report.components,
        })
    }

    pub fn events(&self) -> &[MorseEvent] {
        &self.events
    }

    pub fn into_events(self) -> Vec<MorseEvent> {
        self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn report(&self) -> ValidationReport {
        validate(&self.events).expect("presentation was validated on construction")
    }

    /// Strand count on the row just above event `j`.
    pub fn strand_count_after(&self, j: usize) -> usize {
        self.events[..=j].iter().map(|e| e.kind.strand_delta()).sum::<isize>() as usize
    }

    /// Strand counts before the first event and after every event.
    pub fn strand_counts(&self) -> Vec<usize> {
        let mut counts = Vec::with_capacity(self.events.len() + 1);
        let mut n = 0isize;
        counts.push(0);
        for e in &self.events {
            n += e.kind.strand_delta();
            counts.push(n as usize);
        }
        counts
    }

    /// Indices of the cup and cap events.
    pub fn critical_indices(&self) -> Vec<usize> {
        self.events
            .iter()
            .enumerate()
            .filter(|(_, e)| e.kind.is_critical())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn width(&self) -> usize {
        LevelProfile::of(self).width
    }

    pub fn profile(&self) -> LevelProfile {
        LevelProfile::of(self)
    }

    /// The presentation read upside down.
    pub fn mirrored(&self) -> Self {
        let events = self
            .events
            .iter()
            .rev()
            .map(|e| MorseEvent::new(e.kind.mirrored(), e.position))
            .collect();
        Self {
            events,
            components: self.components,
        }
    }
}
