//! Exhaustive checks of the width inequalities on width-minimal interleavings.

use rayon::prelude::*;
use serde::Serialize;

use super::{
    minimal_interleavings_capped, relative_structure, Color, ColorSeq, Interleaving, RelativeStructure, SeqError,
    TwoSideError, TwoSidedConfig, DEFAULT_CAP,
};
use crate::morse::GapClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Check {
    /// Around a level thick for one colour, the other colour has no critical
    /// points between the nearest thin levels of the first, and is thin there.
    #[serde(rename = "thick-slab")]
    ThickSlab,
    /// An alternating level meets each colour in fewer points than any level
    /// below it, unless that colour is a product in between.
    #[serde(rename = "intersection-drop")]
    IntersectionDrop,
    /// Alternating levels are thinner than every level below them.
    #[serde(rename = "below-all")]
    BelowAll,
    /// Alternating levels get strictly thinner going up.
    #[serde(rename = "decreasing")]
    Decreasing,
    /// Between consecutive alternating levels one colour is a product.
    #[serde(rename = "product")]
    Product,
    /// The first thin level above the short colour is alternating.
    #[serde(rename = "a-alternating")]
    TopAlternating,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::ThickSlab,
        Check::IntersectionDrop,
        Check::BelowAll,
        Check::Decreasing,
        Check::Product,
        Check::TopAlternating,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            Check::ThickSlab => "thick-slab",
            Check::IntersectionDrop => "intersection-drop",
            Check::BelowAll => "below-all",
            Check::Decreasing => "decreasing",
            Check::Product => "product",
            Check::TopAlternating => "a-alternating",
        }
    }

    /// Whether the check says anything about this interleaving. The
    /// A-is-alternating check needs P to be thin.
    fn applies(self, s: &RelativeStructure) -> bool {
        match self {
            Check::TopAlternating => s.p_thin,
            _ => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: Check,
    pub interleaving: Interleaving,
    pub detail: String,
}

/// Every check failure of one interleaving, minimal or not.
pub fn check_interleaving(il: &Interleaving) -> Vec<Violation> {
    let s = relative_structure(il);
    let n = il.len();
    let mut out = Vec::new();
    let mut fail = |check: Check, detail: String| {
        out.push(Violation {
            check,
            interleaving: il.clone(),
            detail,
        })
    };

    for color in [Color::Alpha, Color::Beta] {
        let other = color.other();
        for k in 0..=n {
            if s.class(color, k) != GapClass::Thick {
                continue;
            }
            let above = (k + 1..=n)
                .find(|&j| s.class(color, j) == GapClass::Thin)
                .expect("the top level is thin for every colour");
            let below = (0..k)
                .rev()
                .find(|&j| s.class(color, j) == GapClass::Thin)
                .expect("a minimum below a thick level has a thin level under it");
            if il.has_events_between(other, below, above) {
                fail(
                    Check::ThickSlab,
                    format!(
                        "{} has critical points between levels {below} and {above} around {} thick level {k}",
                        other.name(),
                        color.name()
                    ),
                );
            }
            if s.class(other, k) != GapClass::Thin {
                fail(
                    Check::ThickSlab,
                    format!(
                        "level {k} is thick for {} but not thin for {}",
                        color.name(),
                        other.name()
                    ),
                );
            }
        }
    }

    if Check::TopAlternating.applies(&s) && !s.alternating.contains(&s.a_level) {
        fail(Check::TopAlternating, format!("level {} is not alternating", s.a_level));
    }

    let counts = [il.counts(Color::Alpha), il.counts(Color::Beta)];
    let totals = il.totals();
    let checked = s.checked_levels();
    for &c in &checked {
        for lower in 0..c {
            for (color, cnt) in [Color::Alpha, Color::Beta].into_iter().zip(&counts) {
                if cnt[c] >= cnt[lower] && il.has_events_between(color, lower, c) {
                    fail(
                        Check::IntersectionDrop,
                        format!(
                            "{} meets level {c} in {} points and level {lower} in {}",
                            color.name(),
                            cnt[c],
                            cnt[lower]
                        ),
                    );
                }
            }
            if totals[c] >= totals[lower] {
                fail(
                    Check::BelowAll,
                    format!(
                        "level {c} has width {} and level {lower} has {}",
                        totals[c], totals[lower]
                    ),
                );
            }
        }
    }
    for pair in checked.windows(2) {
        let (x, y) = (pair[0], pair[1]);
        if totals[y] >= totals[x] {
            fail(
                Check::Decreasing,
                format!("level {y} has width {} and level {x} has {}", totals[y], totals[x]),
            );
        }
    }
    // consecutive checked levels, starting from P when P is thin
    let mut lower = if s.p_thin { Some(0) } else { None };
    for &c in &checked {
        if let Some(l) = lower {
            if il.has_events_between(Color::Alpha, l, c) && il.has_events_between(Color::Beta, l, c) {
                fail(
                    Check::Product,
                    format!("both colours have critical points between levels {l} and {c}"),
                );
            }
        }
        lower = Some(c);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: Check,
    /// Interleavings the check was evaluated on.
    pub applicable: usize,
    pub violations: usize,
    /// First violation found.
    pub witness: Option<Violation>,
}

impl Verdict {
    fn empty(check: Check) -> Self {
        Self {
            check,
            applicable: 0,
            violations: 0,
            witness: None,
        }
    }

    fn absorb(&mut self, other: &Verdict) {
        self.applicable += other.applicable;
        self.violations += other.violations;
        if self.witness.is_none() {
            self.witness = other.witness.clone();
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub config: String,
    pub interleavings: usize,
    pub min_width: usize,
    pub minimal: Vec<Interleaving>,
    pub verdicts: Vec<Verdict>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(Verdict::passed)
    }

    pub fn violation_count(&self) -> usize {
        self.verdicts.iter().map(|v| v.violations).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs every check on every width-minimal interleaving of `config`.
pub fn verify_config(config: &TwoSidedConfig) -> Result<OracleReport, TwoSideError> {
    verify_config_capped(config, DEFAULT_CAP)
}

pub fn verify_config_capped(config: &TwoSidedConfig, cap: usize) -> Result<OracleReport, TwoSideError> {
    let set = minimal_interleavings_capped(config, cap)?;
    let mut verdicts: Vec<Verdict> = Check::ALL.iter().map(|&c| Verdict::empty(c)).collect();
    for il in &set.minimal {
        let s = relative_structure(il);
        let found = check_interleaving(il);
        for v in &mut verdicts {
            if v.check.applies(&s) {
                v.applicable += 1;
            }
            for x in found.iter().filter(|x| x.check == v.check) {
                v.violations += 1;
                if v.witness.is_none() {
                    v.witness = Some(x.clone());
                }
            }
        }
    }
    Ok(OracleReport {
        config: config.to_string(),
        interleavings: set.widths.len(),
        min_width: set.min_width,
        minimal: set.minimal,
        verdicts,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepParams {
    /// Bound on the combined number of critical points.
    pub max_events: usize,
    pub punctures: Vec<usize>,
    /// Skip colours whose strand count reaches zero before their last step.
    pub unsplit_only: bool,
    pub threads: Option<usize>,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self {
            max_events: 10,
            punctures: vec![2, 4],
            unsplit_only: true,
            threads: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigViolation {
    pub config: String,
    pub violation: Violation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub configs: usize,
    pub interleavings: usize,
    pub minimal_interleavings: usize,
    pub verdicts: Vec<Verdict>,
    pub violations: Vec<ConfigViolation>,
}

impl SweepReport {
    pub fn violation_count(&self) -> usize {
        self.violations.len()
    }

    pub fn summary(&self) -> String {
        format!("{} violations / {} configs", self.violation_count(), self.configs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Every configuration whose two colours have at most `max_events` critical
/// points combined, with puncture counts drawn from `punctures`.
pub fn sweep_configs(params: &SweepParams) -> Result<Vec<TwoSidedConfig>, TwoSideError> {
    for &p in &params.punctures {
        if p < 2 || !p.is_multiple_of(2) {
            return Err(SeqError::BadPunctures(p).into());
        }
    }
    let longest = params.max_events.saturating_sub(1);
    let seqs: Vec<Vec<ColorSeq>> = params
        .punctures
        .iter()
        .map(|&p| ColorSeq::enumerate(p, longest, params.unsplit_only))
        .collect();
    let mut configs = Vec::new();
    for alphas in &seqs {
        for betas in &seqs {
            for a in alphas {
                for b in betas {
                    if a.len() + b.len() <= params.max_events {
                        configs.push(TwoSidedConfig::new(a.clone(), b.clone()));
                    }
                }
            }
        }
    }
    Ok(configs)
}

pub fn sweep(params: &SweepParams) -> Result<SweepReport, TwoSideError> {
    let configs = sweep_configs(params)?;
    let cap = params.max_events.max(DEFAULT_CAP);
    let run = |c: &TwoSidedConfig| verify_config_capped(c, cap);
    let reports: Vec<OracleReport> = match params.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(|| configs.par_iter().map(run).collect::<Result<_, _>>())?,
        None => configs.iter().map(run).collect::<Result<_, _>>()?,
    };

    let mut verdicts: Vec<Verdict> = Check::ALL.iter().map(|&c| Verdict::empty(c)).collect();
    let mut violations = Vec::new();
    let mut interleavings = 0;
    let mut minimal = 0;
    for (config, report) in configs.iter().zip(&reports) {
        interleavings += report.interleavings;
        minimal += report.minimal.len();
        for (total, v) in verdicts.iter_mut().zip(&report.verdicts) {
            total.absorb(v);
        }
        if !report.passed() {
            for il in &report.minimal {
                violations.extend(check_interleaving(il).into_iter().map(|violation| ConfigViolation {
                    config: config.to_string(),
                    violation,
                }));
            }
        }
    }
    Ok(SweepReport {
        configs: configs.len(),
        interleavings,
        minimal_interleavings: minimal,
        verdicts,
        violations,
    })
}
