mod common;

use proptest::prelude::*;
use thinpos::morse::{potentially_alternating, GapClass, StrandIncidence};
use thinpos::moves::{self, MoveKind};
use thinpos::{text, EventKind, MorsePresentation, Side};

use common::presentation;

/// Strand count in every gap between critical events, counted directly from
/// the events.
fn gap_counts(pres: &MorsePresentation) -> Vec<usize> {
    let mut n = 0isize;
    let mut out = Vec::new();
    let mut seen_critical = false;
    for e in pres.events() {
        if e.kind.is_critical() {
            if seen_critical {
                out.push(n as usize);
            }
            seen_critical = true;
        }
        n += e.kind.strand_delta();
    }
    out
}

fn critical_kinds(pres: &MorsePresentation) -> Vec<EventKind> {
    pres.events()
        .iter()
        .map(|e| e.kind)
        .filter(|k| k.is_critical())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn exchange_delta_law(pres in presentation(20)) {
        let events = pres.events();
        for j in 0..events.len().saturating_sub(1) {
            let Ok((next, delta)) = moves::exchange(&pres, j) else { continue };
            prop_assert_eq!(delta, next.width() as isize - pres.width() as isize);
            let expected = match (events[j].kind, events[j + 1].kind) {
                (EventKind::Cup, EventKind::Cap) => -4,
                (EventKind::Cap, EventKind::Cup) => 4,
                _ => 0,
            };
            prop_assert_eq!(delta, expected, "exchange at {} of {:?}", j, events);
        }
    }

    #[test]
    fn parse_serialize_round_trip(pres in presentation(20)) {
        let s = text::serialize(&pres);
        let back = text::parse(&s).unwrap();
        prop_assert_eq!(&back, &pres);
        prop_assert_eq!(text::serialize(&back), s);
    }

    #[test]
    fn profile_matches_direct_count(pres in presentation(20)) {
        let profile = pres.profile();
        let counts = gap_counts(&pres);
        prop_assert_eq!(profile.counts(), counts.clone());
        prop_assert_eq!(profile.width, counts.iter().sum::<usize>());
        prop_assert_eq!(pres.width(), profile.width);
        let kinds = critical_kinds(&pres);
        for (g, gap) in profile.gaps.iter().enumerate() {
            let class = match (kinds[g], kinds[g + 1]) {
                (EventKind::Cap, EventKind::Cup) => GapClass::Thin,
                (EventKind::Cup, EventKind::Cap) => GapClass::Thick,
                _ => GapClass::Neither,
            };
            prop_assert_eq!(gap.class, class);
        }
        let mut ladder: Vec<usize> = profile.thin_gaps().iter().map(|&g| counts[g]).collect();
        ladder.sort_unstable();
        ladder.dedup();
        prop_assert_eq!(profile.ladder.values(), &ladder[..]);
    }

    #[test]
    fn thick_between_thin(pres in presentation(20)) {
        let profile = pres.profile();
        let thin = profile.thin_gaps();
        for w in thin.windows(2) {
            let thick = (w[0] + 1..w[1]).filter(|&g| profile.gaps[g].class == GapClass::Thick).count();
            prop_assert_eq!(thick, 1, "thick gaps between {} and {}", w[0], w[1]);
        }
        // the outermost gaps are never thin
        if let (Some(first), Some(last)) = (thin.first(), thin.last()) {
            prop_assert!(*first > 0 && *last + 1 < profile.gaps.len());
        }
    }

    #[test]
    fn potentially_alternating_brute_force(pres in presentation(20)) {
        let profile = pres.profile();
        let counts = profile.counts();
        let thin = profile.thin_gaps();
        for &p in &thin {
            let above: Vec<usize> = thin
                .iter()
                .copied()
                .filter(|&g| g > p && thin.iter().filter(|&&h| h >= p && h < g).all(|&h| counts[g] < counts[h]))
                .collect();
            let mut below: Vec<usize> = thin
                .iter()
                .copied()
                .filter(|&g| g < p && thin.iter().filter(|&&h| h > g && h <= p).all(|&h| counts[g] < counts[h]))
                .collect();
            below.reverse();
            prop_assert_eq!(potentially_alternating(&profile, p, Side::Above).unwrap(), above);
            prop_assert_eq!(potentially_alternating(&profile, p, Side::Below).unwrap(), below);
        }
        let not_thin = (0..counts.len()).find(|g| !profile.is_thin(*g));
        if let Some(g) = not_thin {
            prop_assert!(potentially_alternating(&profile, g, Side::Above).is_err());
        }
    }

    #[test]
    fn crossings_do_not_change_width(pres in presentation(20)) {
        let stripped: Vec<_> = pres.events().iter().copied().filter(|e| e.kind.is_critical()).collect();
        let stripped = MorsePresentation::new(stripped).unwrap();
        prop_assert_eq!(stripped.width(), pres.width());
        prop_assert_eq!(stripped.profile().counts(), pres.profile().counts());
        prop_assert_eq!(stripped.profile().thin_gaps(), pres.profile().thin_gaps());
    }

    #[test]
    fn mirror_is_an_involution(pres in presentation(20)) {
        let m = pres.mirrored();
        prop_assert_eq!(m.width(), pres.width());
        prop_assert_eq!(m.components(), pres.components());
        prop_assert_eq!(m.mirrored(), pres);
    }

    #[test]
    fn moves_preserve_validity(pres in presentation(14)) {
        let listed = moves::enumerate_moves(&pres);
        for kind in [MoveKind::Exchange, MoveKind::Cancel] {
            for j in 0..pres.len() {
                let applied = moves::apply(&pres, kind, j);
                let entry = listed.iter().find(|m| m.kind == kind && m.index == j);
                prop_assert_eq!(applied.is_ok(), entry.is_some(), "{:?} at {}", kind, j);
                if let (Ok(next), Some(m)) = (applied, entry) {
                    // legality is re-checked from scratch
                    prop_assert!(MorsePresentation::new(next.events().to_vec()).is_ok());
                    prop_assert_eq!(m.delta, next.width() as isize - pres.width() as isize);
                    if kind == MoveKind::Exchange {
                        prop_assert_eq!(next.len(), pres.len());
                        prop_assert_eq!(next.components(), pres.components());
                    }
                }
            }
        }
    }

    #[test]
    fn cancel_preserves_components(pres in presentation(16)) {
        for m in moves::enumerate_moves(&pres).into_iter().filter(|m| m.kind == MoveKind::Cancel) {
            let next = moves::cancel(&pres, m.index).unwrap();
            prop_assert_eq!(next.components(), pres.components());
            prop_assert_eq!(next.len() + 2, pres.len());
            let n = pres.strand_count_after(m.index) as isize - 2;
            prop_assert_eq!(m.delta, -(2 * n + 2));
        }
    }

    #[test]
    fn strand_edges_account_for_gap_counts(pres in presentation(20)) {
        let incidence = StrandIncidence::of(&pres);
        let counts = pres.profile().counts();
        for (g, &count) in counts.iter().enumerate() {
            prop_assert_eq!(incidence.crossing(g).count(), count);
        }
    }
}
