use proptest::prelude::*;
use thinpos::{EventKind, MorseEvent, MorsePresentation};

/// Builds a legal presentation out of arbitrary choices: each choice picks
/// an event kind among those legal on the current row and a position modulo
/// the legal range. Open strands are closed with caps at the end, and the
/// total stays within `max_events`.
pub fn build(choices: &[(u8, usize)], max_events: usize) -> MorsePresentation {
    let mut events = Vec::new();
    let mut n = 0usize;
    for &(k, pos) in choices {
        let room_for_cup = events.len() + 1 + (n + 2) / 2 <= max_events;
        let room = events.len() + 1 + n / 2 <= max_events;
        let mut legal = Vec::new();
        if room_for_cup {
            legal.push(EventKind::Cup);
        }
        if n >= 2 && room {
            legal.extend([EventKind::Cap, EventKind::CrossPos, EventKind::CrossNeg]);
        }
        if legal.is_empty() {
            break;
        }
        let kind = legal[k as usize % legal.len()];
        let range = if kind == EventKind::Cup { n + 1 } else { n - 1 };
        events.push(MorseEvent::new(kind, pos % range));
        n = (n as isize + kind.strand_delta()) as usize;
    }
    while n > 0 {
        events.push(MorseEvent::cap(0));
        n -= 2;
    }
    MorsePresentation::new(events).expect("generator emits legal events")
}

pub fn presentation(max_events: usize) -> impl Strategy<Value = MorsePresentation> {
    prop::collection::vec((any::<u8>(), 0usize..64), 0..=max_events).prop_map(move |c| build(&c, max_events))
}
