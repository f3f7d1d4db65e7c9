//! Two-sided strand model.
//!
//! Above a level sphere P the link splits into two colours, α and β, on
//! either side of a vertical wall. Only the heights of their critical points
//! matter, so a configuration is two sequences of minima (`+`) and maxima
//! (`-`) and an [`Interleaving`] is one way of stacking them.
//!
//! Levels of an interleaving with `N` events are numbered `0..=N`: level `k`
//! lies between event `k - 1` and event `k`, level 0 is P itself and level
//! `N` is above everything. Width sums the interior levels `1..N`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::morse::{GapClass, MorseEvent, MorsePresentation};

pub mod oracle;

pub use oracle::{
    check_interleaving, sweep, verify_config, Check, OracleReport, SweepParams, SweepReport, Verdict, Violation,
};

pub const DEFAULT_CAP: usize = 16;

/// A minimum (`+`) or a maximum (`-`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Min,
    Max,
}

impl Step {
    pub fn delta(self) -> isize {
        match self {
            Step::Min => 2,
            Step::Max => -2,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Step::Min => '+',
            Step::Max => '-',
        }
    }

    fn from_token(tok: &str) -> Option<Self> {
        match tok {
            "+" => Some(Step::Min),
            "-" | "\u{2212}" => Some(Step::Max),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Alpha,
    Beta,
}

impl Color {
    pub fn other(self) -> Self {
        match self {
            Color::Alpha => Color::Beta,
            Color::Beta => Color::Alpha,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Color::Alpha => 'a',
            Color::Beta => 'b',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Alpha => "alpha",
            Color::Beta => "beta",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("puncture count {0} must be even and at least 2")]
    BadPunctures(usize),
    #[error("strand count goes negative at step {step}")]
    NegativeCount { step: usize },
    #[error("{final_count} strands never return to P")]
    ArcsDoNotReturn { final_count: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TwoSideError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error("{events} events exceed the enumeration cap of {cap}")]
    CapExceeded { events: usize, cap: usize },
    #[error("level range {lo}..{hi} is not inside 0..={levels}")]
    BadRange { lo: usize, hi: usize, levels: usize },
    #[error("order has {alpha} alpha and {beta} beta events, but the configuration has {want_alpha} and {want_beta}")]
    WrongShape {
        alpha: usize,
        beta: usize,
        want_alpha: usize,
        want_beta: usize,
    },
}

/// One colour: the strands it sends through P and its critical points
/// bottom to top.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColorSeq {
    punctures: usize,
    steps: Vec<Step>,
}

impl ColorSeq {
    pub fn new(punctures: usize, steps: Vec<Step>) -> Result<Self, SeqError> {
        if punctures < 2 || !punctures.is_multiple_of(2) {
            return Err(SeqError::BadPunctures(punctures));
        }
        let mut count = punctures as isize;
        for (step, s) in steps.iter().enumerate() {
            count += s.delta();
            if count < 0 {
                return Err(SeqError::NegativeCount { step });
            }
        }
        if count != 0 {
            return Err(SeqError::ArcsDoNotReturn {
                final_count: count as usize,
            });
        }
        Ok(Self { punctures, steps })
    }

    pub fn punctures(&self) -> usize {
        self.punctures
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Strand counts before the first step and after each one.
    pub fn counts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut c = self.punctures as isize;
        out.push(c as usize);
        for s in &self.steps {
            c += s.delta();
            out.push(c as usize);
        }
        out
    }

    /// The colour is connected above P: its count only reaches zero at the
    /// end.
    pub fn is_unsplit(&self) -> bool {
        let counts = self.counts();
        counts[1..counts.len() - 1].iter().all(|&c| c > 0)
    }

    /// Every sequence with the given punctures and at most `max_len` steps,
    /// in lexicographic order with `+` first.
    pub fn enumerate(punctures: usize, max_len: usize, unsplit_only: bool) -> Vec<ColorSeq> {
        fn rec(
            punctures: usize,
            cur: &mut Vec<Step>,
            count: isize,
            max_len: usize,
            unsplit_only: bool,
            out: &mut Vec<ColorSeq>,
        ) {
            if !cur.is_empty() && count == 0 {
                out.push(ColorSeq {
                    punctures,
                    steps: cur.clone(),
                });
                if unsplit_only {
                    return;
                }
            }
            if cur.len() == max_len {
                return;
            }
            for s in [Step::Min, Step::Max] {
                let next = count + s.delta();
                if next < 0 {
                    continue;
                }
                cur.push(s);
                rec(punctures, cur, next, max_len, unsplit_only, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if punctures >= 2 && punctures.is_multiple_of(2) {
            rec(
                punctures,
                &mut Vec::new(),
                punctures as isize,
                max_len,
                unsplit_only,
                &mut out,
            );
        }
        out
    }
}

impl fmt::Display for ColorSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |", self.punctures)?;
        for s in &self.steps {
            write!(f, " {}", s.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for ColorSeq {
    type Err = String;

    /// `"2 | + - -"`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, rest) = s
            .split_once('|')
            .ok_or_else(|| "expected `PUNCTURES | STEPS`".to_string())?;
        let punctures: usize = p
            .trim()
            .parse()
            .map_err(|_| format!("bad puncture count `{}`", p.trim()))?;
        let steps = rest
            .split_whitespace()
            .map(|t| Step::from_token(t).ok_or_else(|| format!("bad step `{t}` (expected + or -)")))
            .collect::<Result<Vec<_>, _>>()?;
        ColorSeq::new(punctures, steps).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoSidedConfig {
    pub alpha: ColorSeq,
    pub beta: ColorSeq,
}

impl TwoSidedConfig {
    pub fn new(alpha: ColorSeq, beta: ColorSeq) -> Self {
        Self { alpha, beta }
    }

    pub fn seq(&self, color: Color) -> &ColorSeq {
        match color {
            Color::Alpha => &self.alpha,
            Color::Beta => &self.beta,
        }
    }

    pub fn event_count(&self) -> usize {
        self.alpha.len() + self.beta.len()
    }

    /// Parses the two-line form `alpha: 2 | + - -` / `beta: 2 | -`.
    /// Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, TwoSideError> {
        let mut alpha = None;
        let mut beta = None;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| TwoSideError::Parse { line: n + 1, message };
            let (name, body) = line
                .split_once(':')
                .ok_or_else(|| err("expected `alpha:` or `beta:`".into()))?;
            let slot = match name.trim() {
                "alpha" => &mut alpha,
                "beta" => &mut beta,
                other => return Err(err(format!("unknown colour `{other}`"))),
            };
            if slot.is_some() {
                return Err(err(format!("`{}` given twice", name.trim())));
            }
            *slot = Some(body.parse::<ColorSeq>().map_err(err)?);
        }
        let missing = |name: &str| TwoSideError::Parse {
            line: text.lines().count().max(1),
            message: format!("missing `{name}:` line"),
        };
        Ok(Self {
            alpha: alpha.ok_or_else(|| missing("alpha"))?,
            beta: beta.ok_or_else(|| missing("beta"))?,
        })
    }

    pub fn interleave(&self, order: &[Color]) -> Result<Interleaving, TwoSideError> {
        let na = order.iter().filter(|&&c| c == Color::Alpha).count();
        let nb = order.len() - na;
        if na != self.alpha.len() || nb != self.beta.len() {
            return Err(TwoSideError::WrongShape {
                alpha: na,
                beta: nb,
                want_alpha: self.alpha.len(),
                want_beta: self.beta.len(),
            });
        }
        let (mut ia, mut ib) = (0, 0);
        let events = order
            .iter()
            .map(|&c| match c {
                Color::Alpha => {
                    ia += 1;
                    (c, self.alpha.steps[ia - 1])
                }
                Color::Beta => {
                    ib += 1;
                    (c, self.beta.steps[ib - 1])
                }
            })
            .collect();
        Ok(Interleaving {
            alpha_punctures: self.alpha.punctures,
            beta_punctures: self.beta.punctures,
            events,
        })
    }

    /// All interleavings, in lexicographic order of their colour sequence
    /// with alpha first.
    pub fn interleavings(&self, cap: usize) -> Result<Vec<Interleaving>, TwoSideError> {
        let events = self.event_count();
        if events > cap {
            return Err(TwoSideError::CapExceeded { events, cap });
        }
        fn rec(a: usize, b: usize, cur: &mut Vec<Color>, out: &mut Vec<Vec<Color>>) {
            if a == 0 && b == 0 {
                out.push(cur.clone());
                return;
            }
            if a > 0 {
                cur.push(Color::Alpha);
                rec(a - 1, b, cur, out);
                cur.pop();
            }
            if b > 0 {
                cur.push(Color::Beta);
                rec(a, b - 1, cur, out);
                cur.pop();
            }
        }
        let mut orders = Vec::new();
        rec(self.alpha.len(), self.beta.len(), &mut Vec::new(), &mut orders);
        Ok(orders
            .iter()
            .map(|o| self.interleave(o).expect("orders match the shape"))
            .collect())
    }
}

impl fmt::Display for TwoSidedConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha: {}\nbeta: {}", self.alpha, self.beta)
    }
}

/// A vertical arrangement of both colours' critical points, bottom to top.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interleaving {
    alpha_punctures: usize,
    beta_punctures: usize,
    events: Vec<(Color, Step)>,
}

impl Interleaving {
    pub fn events(&self) -> &[(Color, Step)] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn order(&self) -> Vec<Color> {
        self.events.iter().map(|&(c, _)| c).collect()
    }

    pub fn punctures(&self, color: Color) -> usize {
        match color {
            Color::Alpha => self.alpha_punctures,
            Color::Beta => self.beta_punctures,
        }
    }

    /// The steps of one colour in the order they appear.
    pub fn steps_of(&self, color: Color) -> Vec<Step> {
        self.events
            .iter()
            .filter(|&&(c, _)| c == color)
            .map(|&(_, s)| s)
            .collect()
    }

    /// Strand count of one colour at every level.
    pub fn counts(&self, color: Color) -> Vec<usize> {
        let mut c = self.punctures(color) as isize;
        let mut out = vec![c as usize];
        for &(col, s) in &self.events {
            if col == color {
                c += s.delta();
            }
            out.push(c as usize);
        }
        out
    }

    pub fn totals(&self) -> Vec<usize> {
        self.counts(Color::Alpha)
            .into_iter()
            .zip(self.counts(Color::Beta))
            .map(|(a, b)| a + b)
            .collect()
    }

    pub fn width(&self) -> usize {
        let totals = self.totals();
        if totals.len() <= 2 {
            return 0;
        }
        totals[1..totals.len() - 1].iter().sum()
    }

    /// Whether `color` has an event strictly between levels `lo` and `hi`.
    pub fn has_events_between(&self, color: Color, lo: usize, hi: usize) -> bool {
        self.events[lo..hi].iter().any(|&(c, _)| c == color)
    }

    /// Index of the highest event of a colour.
    pub fn last_event(&self, color: Color) -> Option<usize> {
        self.events.iter().rposition(|&(c, _)| c == color)
    }

    /// A Morse presentation realizing the interleaving with α on the left
    /// and β on the right. The cups that create the punctures add a fixed
    /// amount to its width; see [`Interleaving::flattening_offset`].
    pub fn flatten(&self) -> MorsePresentation {
        let mut events = Vec::new();
        for _ in 0..(self.alpha_punctures + self.beta_punctures) / 2 {
            events.push(MorseEvent::cup(0));
        }
        let mut alpha = self.alpha_punctures;
        for &(c, s) in &self.events {
            let pos = match c {
                Color::Alpha => 0,
                Color::Beta => alpha,
            };
            events.push(match s {
                Step::Min => MorseEvent::cup(pos),
                Step::Max => MorseEvent::cap(pos),
            });
            if c == Color::Alpha {
                alpha = (alpha as isize + s.delta()) as usize;
            }
        }
        MorsePresentation::new(events).expect("colour blocks stay non-negative")
    }

    /// Width the flattened presentation has beyond [`Interleaving::width`]:
    /// the gaps below P plus P itself.
    pub fn flattening_offset(&self) -> usize {
        let k = (self.alpha_punctures + self.beta_punctures) / 2;
        k * (k - 1) + 2 * k
    }
}

impl fmt::Display for Interleaving {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, &(c, s)) in self.events.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}{}", c.letter(), s.symbol())?;
        }
        f.write_str("]")
    }
}

impl Serialize for Interleaving {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(
            self.events
                .iter()
                .map(|&(c, s)| format!("{}{}", c.letter(), s.symbol())),
        )
    }
}

/// Exhaustive minimum over all interleavings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalSet {
    /// Width of every interleaving in enumeration order.
    pub widths: Vec<usize>,
    pub min_width: usize,
    pub minimal: Vec<Interleaving>,
}

pub fn minimal_interleavings(config: &TwoSidedConfig) -> Result<MinimalSet, TwoSideError> {
    minimal_interleavings_capped(config, DEFAULT_CAP)
}

pub fn minimal_interleavings_capped(config: &TwoSidedConfig, cap: usize) -> Result<MinimalSet, TwoSideError> {
    let all = config.interleavings(cap)?;
    let widths: Vec<usize> = all.iter().map(Interleaving::width).collect();
    let min_width = widths.iter().copied().min().unwrap_or(0);
    let minimal = all
        .into_iter()
        .zip(&widths)
        .filter(|&(_, &w)| w == min_width)
        .map(|(il, _)| il)
        .collect();
    Ok(MinimalSet {
        widths,
        min_width,
        minimal,
    })
}

/// Moves the events of `color` between levels `lo` and `hi` to just above
/// level `hi` (or just below level `lo`), keeping every other order intact.
pub fn push_block(
    il: &Interleaving,
    color: Color,
    lo: usize,
    hi: usize,
    target: crate::Side,
) -> Result<Interleaving, TwoSideError> {
    if lo > hi || hi > il.len() {
        return Err(TwoSideError::BadRange {
            lo,
            hi,
            levels: il.len(),
        });
    }
    let (moved, stay): (Vec<_>, Vec<_>) = il.events[lo..hi].iter().copied().partition(|&(c, _)| c == color);
    let mut events = il.events[..lo].to_vec();
    match target {
        crate::Side::Above => {
            events.extend(stay);
            events.extend(moved);
        }
        crate::Side::Below => {
            events.extend(moved);
            events.extend(stay);
        }
    }
    events.extend_from_slice(&il.events[hi..]);
    Ok(Interleaving { events, ..il.clone() })
}

/// Thin when the nearest step below (if any) is a maximum and the nearest
/// step above (if any) is a minimum; thick when a minimum sits below and a
/// maximum above.
fn classify(below: Option<Step>, above: Option<Step>) -> GapClass {
    match (below, above) {
        (Some(Step::Min), Some(Step::Max)) => GapClass::Thick,
        (b, a) if b != Some(Step::Min) && a != Some(Step::Max) => GapClass::Thin,
        _ => GapClass::Neither,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelInfo {
    pub level: usize,
    pub alpha_count: usize,
    pub beta_count: usize,
    pub alpha: GapClass,
    pub beta: GapClass,
    /// Class using the critical points of both colours.
    pub whole: GapClass,
    pub alternating: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelativeStructure {
    pub levels: Vec<LevelInfo>,
    /// The colour whose highest critical point is lower.
    pub short: Color,
    /// The lowest thin level above every critical point of `short`.
    pub a_level: usize,
    pub alternating: Vec<usize>,
    /// P is thin: the lowest event above it is a minimum.
    pub p_thin: bool,
}

impl RelativeStructure {
    pub fn class(&self, color: Color, level: usize) -> GapClass {
        match color {
            Color::Alpha => self.levels[level].alpha,
            Color::Beta => self.levels[level].beta,
        }
    }

    /// Alternating levels together with A, ascending.
    pub fn checked_levels(&self) -> Vec<usize> {
        let mut out = self.alternating.clone();
        if !out.contains(&self.a_level) {
            out.push(self.a_level);
            out.sort_unstable();
        }
        out
    }
}

pub fn relative_structure(il: &Interleaving) -> RelativeStructure {
    let n = il.len();
    let ev = &il.events;
    let rel = |color: Color, k: usize| {
        let below = ev[..k].iter().rev().find(|&&(c, _)| c == color).map(|&(_, s)| s);
        let above = ev[k..].iter().find(|&&(c, _)| c == color).map(|&(_, s)| s);
        classify(below, above)
    };
    let whole = |k: usize| {
        let below = k.checked_sub(1).map(|i| ev[i].1);
        let above = ev.get(k).map(|&(_, s)| s);
        classify(below, above)
    };
    let last_a = il.last_event(Color::Alpha);
    let last_b = il.last_event(Color::Beta);
    let short = if last_a < last_b { Color::Alpha } else { Color::Beta };
    let floor = il.last_event(short).map_or(0, |i| i + 1);
    let a_level = (floor..=n).find(|&k| whole(k) == GapClass::Thin).unwrap_or(n);
    let alternating: Vec<usize> = (1..=a_level.min(n))
        .filter(|&k| whole(k) == GapClass::Thin)
        .filter(|&k| if k < n { ev[k - 1].0 != ev[k].0 } else { k == a_level })
        .collect();
    let ca = il.counts(Color::Alpha);
    let cb = il.counts(Color::Beta);
    let levels = (0..=n)
        .map(|k| LevelInfo {
            level: k,
            alpha_count: ca[k],
            beta_count: cb[k],
            alpha: rel(Color::Alpha, k),
            beta: rel(Color::Beta, k),
            whole: whole(k),
            alternating: alternating.contains(&k),
        })
        .collect();
    RelativeStructure {
        levels,
        short,
        a_level,
        alternating,
        p_thin: whole(0) == GapClass::Thin,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Side;

    pub(crate) fn hand_config() -> TwoSidedConfig {
        TwoSidedConfig::parse("alpha: 2 | + - -\nbeta: 2 | -\n").unwrap()
    }

    fn il(config: &TwoSidedConfig, order: &str) -> Interleaving {
        let order: Vec<Color> = order
            .chars()
            .map(|c| if c == 'a' { Color::Alpha } else { Color::Beta })
            .collect();
        config.interleave(&order).unwrap()
    }

    #[test]
    fn seq_validation() {
        assert!(ColorSeq::new(2, vec![Step::Max]).is_ok());
        assert_eq!(ColorSeq::new(3, vec![]), Err(SeqError::BadPunctures(3)));
        assert_eq!(ColorSeq::new(0, vec![]), Err(SeqError::BadPunctures(0)));
        assert_eq!(
            ColorSeq::new(2, vec![Step::Max, Step::Max]),
            Err(SeqError::NegativeCount { step: 1 })
        );
        assert_eq!(
            ColorSeq::new(2, vec![Step::Min]),
            Err(SeqError::ArcsDoNotReturn { final_count: 4 })
        );
        let split: ColorSeq = "2 | - + -".parse().unwrap();
        assert!(!split.is_unsplit());
        assert!("2 | + - -".parse::<ColorSeq>().unwrap().is_unsplit());
    }

    #[test]
    fn enumerate_counts() {
        // 2 | -   and   2 | + - -
        let seqs = ColorSeq::enumerate(2, 3, true);
        let shown: Vec<String> = seqs.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, vec!["2 | + - -", "2 | -"]);
        let all = ColorSeq::enumerate(2, 3, false);
        assert!(all.iter().any(|s| !s.is_unsplit()));
        assert!(all
            .iter()
            .all(|s| ColorSeq::new(s.punctures(), s.steps().to_vec()).is_ok()));
    }

    #[test]
    fn config_text_round_trip() {
        let c = hand_config();
        assert_eq!(c.to_string(), "alpha: 2 | + - -\nbeta: 2 | -");
        assert_eq!(TwoSidedConfig::parse(&c.to_string()).unwrap(), c);
        assert!(matches!(
            TwoSidedConfig::parse("alpha: 2 | + - -\n"),
            Err(TwoSideError::Parse { .. })
        ));
        assert!(matches!(
            TwoSidedConfig::parse("alpha: 2 | +\nbeta: 2 | -"),
            Err(TwoSideError::Parse { line: 1, .. })
        ));
        assert!(TwoSidedConfig::parse("# c\nbeta: 2 | \u{2212}\nalpha: 2 | -\n").is_ok());
    }

    #[test]
    fn hand_enumeration() {
        let set = minimal_interleavings(&hand_config()).unwrap();
        let mut widths = set.widths.clone();
        widths.sort_unstable();
        assert_eq!(widths, vec![8, 12, 12, 12]);
        assert_eq!(set.min_width, 8);
        assert_eq!(set.minimal.len(), 1);
        assert_eq!(set.minimal[0].to_string(), "[b-, a+, a-, a-]");
    }

    #[test]
    fn symmetric_pair_both_minimal() {
        let c = TwoSidedConfig::parse("alpha: 2 | -\nbeta: 2 | -").unwrap();
        let set = minimal_interleavings(&c).unwrap();
        assert_eq!(set.widths, vec![2, 2]);
        assert_eq!(set.minimal.len(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let alpha = ColorSeq::new(2, [vec![Step::Min; 7], vec![Step::Max; 8]].concat()).unwrap();
        let c = TwoSidedConfig::new(alpha, "4 | - -".parse().unwrap());
        assert_eq!(c.event_count(), 17);
        assert_eq!(
            minimal_interleavings(&c),
            Err(TwoSideError::CapExceeded { events: 17, cap: 16 })
        );
        assert!(minimal_interleavings_capped(&c, 17).is_ok());
    }

    #[test]
    fn push_examples() {
        let c = TwoSidedConfig::parse("alpha: 2 | + - -\nbeta: 2 | -").unwrap();
        let x = il(&c, "abaa");
        let pushed = push_block(&x, Color::Beta, 0, 3, Side::Above).unwrap();
        assert_eq!(pushed.to_string(), "[a+, a-, b-, a-]");
        assert_eq!(push_block(&x, Color::Beta, 0, 1, Side::Above).unwrap(), x);
        assert!(matches!(
            push_block(&x, Color::Beta, 2, 5, Side::Above),
            Err(TwoSideError::BadRange { .. })
        ));

        let h = hand_config();
        let bad = il(&h, "abaa");
        assert_eq!(bad.width(), 12);
        let fixed = push_block(&bad, Color::Beta, 0, 2, Side::Below).unwrap();
        assert_eq!(fixed.to_string(), "[b-, a+, a-, a-]");
        assert_eq!(fixed.width(), 8);
    }

    #[test]
    fn flattened_width_matches() {
        for text in ["alpha: 2 | + - -\nbeta: 2 | -", "alpha: 4 | - + - -\nbeta: 2 | + - -"] {
            let c = TwoSidedConfig::parse(text).unwrap();
            for x in c.interleavings(DEFAULT_CAP).unwrap() {
                let flat = x.flatten();
                assert_eq!(flat.width(), x.width() + x.flattening_offset(), "{x}");
            }
        }
    }

    #[test]
    fn relative_classes() {
        let h = hand_config();
        let s = relative_structure(&il(&h, "baaa"));
        // level 1 sits between b- and a+
        assert_eq!(s.levels[1].whole, GapClass::Thin);
        assert!(s.levels[1].alternating);
        // level 3 sits between a- and a-
        assert_eq!(s.levels[3].whole, GapClass::Neither);
        assert_eq!(s.levels[2].alpha, GapClass::Thick);
        assert_eq!(s.levels[2].beta, GapClass::Thin);
        assert_eq!(s.short, Color::Beta);
        assert_eq!(s.a_level, 1);
        assert!(!s.p_thin);

        // a thin level flanked by one colour is not alternating
        let c = TwoSidedConfig::parse("alpha: 2 | - + -\nbeta: 2 | -").unwrap();
        let s = relative_structure(&il(&c, "aaab"));
        assert_eq!(s.levels[1].whole, GapClass::Thin);
        assert!(!s.levels[1].alternating);
        assert_eq!(s.short, Color::Alpha);
        // the top level is the first thin level above alpha
        assert_eq!(s.a_level, 4);
        assert_eq!(s.alternating, vec![4]);
    }
}
