//! Width-changing rewrites of presentations.
//!
//! An exchange swaps two adjacent events whose supports on the row between
//! them are disjoint; this is a planar isotopy that only changes the order of
//! heights. A cancellation deletes a cup immediately followed by a cap that
//! shares exactly one of its strands (straightening a zigzag).
//!
//! Every delta reported here is measured by recomputing the width.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::morse::{EventKind, MorseEvent, MorsePresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveKind {
    Exchange,
    Cancel,
}

/// A legal move with its measured width change.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Move {
    pub kind: MoveKind,
    pub index: usize,
    pub delta: isize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NotCancellableReason {
    NotCupThenCap,
    SharesBothStrands,
    SharesNoStrand,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("events {index} and {} have overlapping supports", index + 1)]
    OverlappingSupport { index: usize },
    #[error("no event pair at {index} (presentation has {len} events)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("events {index} and {} cannot cancel: {reason:?}", index + 1)]
    NotCancellable { index: usize, reason: NotCancellableReason },
}

fn pair(pres: &MorsePresentation, j: usize) -> Result<(MorseEvent, MorseEvent), MoveError> {
    let events = pres.events();
    if j + 1 >= events.len() {
        return Err(MoveError::IndexOutOfRange {
            index: j,
            len: events.len(),
        });
    }
    Ok((events[j], events[j + 1]))
}

/// The swapped pair with re-indexed positions, if the supports are disjoint.
fn exchanged(lower: MorseEvent, upper: MorseEvent) -> Option<(MorseEvent, MorseEvent)> {
    // support of `lower` on the middle row, of `upper` on the same row
    let mid_lo = lower.position;
    let mid_hi = match lower.kind {
        EventKind::Cap => lower.position,
        _ => lower.position + 2,
    };
    let up_lo = upper.position;
    let up_hi = match upper.kind {
        EventKind::Cup => upper.position,
        _ => upper.position + 2,
    };
    let shift = |pos: usize, by: isize| (pos as isize + by) as usize;
    if up_hi <= mid_lo {
        // upper is left of lower: it keeps its position, lower shifts
        Some((
            MorseEvent::new(upper.kind, upper.position),
            MorseEvent::new(lower.kind, shift(lower.position, upper.kind.strand_delta())),
        ))
    } else if up_lo >= mid_hi {
        Some((
            MorseEvent::new(upper.kind, shift(upper.position, -lower.kind.strand_delta())),
            MorseEvent::new(lower.kind, lower.position),
        ))
    } else {
        None
    }
}

/// Width change the sliding rule predicts for exchanging `lower` and
/// `upper`: a minimum moved above a maximum thins by 4, the reverse thickens
/// by 4, everything else is neutral.
pub fn predicted_exchange_delta(lower: EventKind, upper: EventKind) -> isize {
    match (lower, upper) {
        (EventKind::Cup, EventKind::Cap) => -4,
        (EventKind::Cap, EventKind::Cup) => 4,
        _ => 0,
    }
}

pub fn exchange(pres: &MorsePresentation, j: usize) -> Result<(MorsePresentation, isize), MoveError> {
    let (lower, upper) = pair(pres, j)?;
    let (new_lower, new_upper) = exchanged(lower, upper).ok_or(MoveError::OverlappingSupport { index: j })?;
    let mut events = pres.events().to_vec();
    events[j] = new_lower;
    events[j + 1] = new_upper;
    let next = MorsePresentation::new(events).expect("disjoint exchange preserves legality");
    let delta = next.width() as isize - pres.width() as isize;
    Ok((next, delta))
}

fn cancellable(lower: MorseEvent, upper: MorseEvent) -> Result<(), NotCancellableReason> {
    if lower.kind != EventKind::Cup || upper.kind != EventKind::Cap {
        return Err(NotCancellableReason::NotCupThenCap);
    }
    let (cup, cap) = (lower.position, upper.position);
    if cap == cup {
        Err(NotCancellableReason::SharesBothStrands)
    } else if cap == cup + 1 || cap + 1 == cup {
        Ok(())
    } else {
        Err(NotCancellableReason::SharesNoStrand)
    }
}

/// Removes the zigzag formed by events `j` (cup) and `j + 1` (cap).
///
/// The surviving strand enters and leaves at the same row position, so the
/// remaining events need no re-indexing.
pub fn cancel(pres: &MorsePresentation, j: usize) -> Result<MorsePresentation, MoveError> {
    let (lower, upper) = pair(pres, j)?;
    cancellable(lower, upper).map_err(|reason| MoveError::NotCancellable { index: j, reason })?;
    let mut events = pres.events().to_vec();
    events.drain(j..j + 2);
    Ok(MorsePresentation::new(events).expect("cancelling a zigzag preserves legality"))
}

pub fn apply(pres: &MorsePresentation, kind: MoveKind, j: usize) -> Result<MorsePresentation, MoveError> {
    match kind {
        MoveKind::Exchange => exchange(pres, j).map(|(p, _)| p),
        MoveKind::Cancel => cancel(pres, j),
    }
}

/// All legal moves, exchanges first, each group by index.
pub fn enumerate_moves(pres: &MorsePresentation) -> Vec<Move> {
    let width = pres.width() as isize;
    let events = pres.events();
    let mut moves = Vec::new();
    for j in 0..events.len().saturating_sub(1) {
        if exchanged(events[j], events[j + 1]).is_some() {
            let (_, delta) = exchange(pres, j).expect("checked legal");
            moves.push(Move {
                kind: MoveKind::Exchange,
                index: j,
                delta,
            });
        }
    }
    for j in 0..events.len().saturating_sub(1) {
        if cancellable(events[j], events[j + 1]).is_ok() {
            let next = cancel(pres, j).expect("checked legal");
            moves.push(Move {
                kind: MoveKind::Cancel,
                index: j,
                delta: next.width() as isize - width,
            });
        }
    }
    moves
}

/// One applied move and the width it produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub kind: MoveKind,
    pub index: usize,
    pub width_after: usize,
}

/// Replayable witness of a sequence of moves.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoveTrace {
    pub steps: Vec<TraceStep>,
}

impl MoveTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
