//! Width minimization over the move graph.
//!
//! Moves only cover vertical rearrangements and zigzag cancellations, so any
//! width found here is an upper bound on the width of the link, never a
//! certificate of thin position.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::morse::MorsePresentation;
use crate::moves::{self, MoveError, MoveKind, MoveTrace, TraceStep};
use crate::text;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Exhaustive,
    Greedy,
    Anneal,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "greedy" => Ok(Strategy::Greedy),
            "anneal" => Ok(Strategy::Anneal),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

/// Geometric cooling: the temperature is multiplied by `decay` after every
/// proposal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub initial_temperature: f64,
    pub decay: f64,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        Self {
            initial_temperature: 4.0,
            decay: 0.995,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    pub strategy: Strategy,
    /// States expanded (exhaustive) or moves proposed (greedy, anneal).
    pub budget: usize,
    pub seed: u64,
    pub schedule: AnnealSchedule,
    /// Worker threads for exhaustive expansion; `None` runs inline.
    pub threads: Option<usize>,
}

impl SearchParams {
    pub fn new(strategy: Strategy, budget: usize) -> Self {
        Self {
            strategy,
            budget,
            seed: 0,
            schedule: AnnealSchedule::default(),
            threads: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.budget == 0 {
            return Err(SearchError::InvalidParams("budget must be positive".into()));
        }
        let AnnealSchedule {
            initial_temperature,
            decay,
        } = self.schedule;
        if !(decay > 0.0 && decay < 1.0) {
            return Err(SearchError::InvalidParams(format!(
                "decay must lie in (0, 1), got {decay}"
            )));
        }
        if !(initial_temperature.is_finite() && initial_temperature > 0.0) {
            return Err(SearchError::InvalidParams(format!(
                "initial temperature must be positive, got {initial_temperature}"
            )));
        }
        if self.threads == Some(0) {
            return Err(SearchError::InvalidParams("threads must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search parameters: {0}")]
    InvalidParams(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub start_width: usize,
    pub best: MorsePresentation,
    /// Upper bound on the width of the link.
    pub best_width: usize,
    pub trace: MoveTrace,
    /// The budget ran out before the search finished; `best` is best-so-far.
    pub budget_exhausted: bool,
    pub states_expanded: usize,
}

pub fn search(pres: &MorsePresentation, params: &SearchParams) -> Result<SearchOutcome, SearchError> {
    params.validate()?;
    Ok(match params.strategy {
        Strategy::Exhaustive => exhaustive(pres, params),
        Strategy::Greedy => greedy(pres, params.budget),
        Strategy::Anneal => anneal(pres, params),
    })
}

struct Node {
    pres: MorsePresentation,
    width: usize,
    parent: Option<(usize, MoveKind, usize)>,
}

type Successor = (MoveKind, usize, MorsePresentation, String);

fn successors(pres: &MorsePresentation) -> Vec<Successor> {
    moves::enumerate_moves(pres)
        .into_iter()
        .map(|m| {
            let next = moves::apply(pres, m.kind, m.index).expect("enumerated moves are legal");
            let key = text::serialize(&next);
            (m.kind, m.index, next, key)
        })
        .collect()
}

/// Breadth-first over canonical states. Each level is expanded (possibly in
/// parallel) and then merged in frontier order, so the result does not
/// depend on the thread count.
fn exhaustive(pres: &MorsePresentation, params: &SearchParams) -> SearchOutcome {
    let pool = params.threads.map(|n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
    });
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut nodes = vec![Node {
        pres: pres.clone(),
        width: pres.width(),
        parent: None,
    }];
    seen.insert(text::serialize(pres), 0);
    let mut frontier = vec![0usize];
    let mut expanded = 0usize;

    while !frontier.is_empty() && expanded < params.budget {
        let take = frontier.len().min(params.budget - expanded);
        let batch = &frontier[..take];
        let expand = |&id: &usize| successors(&nodes[id].pres);
        let results: Vec<Vec<Successor>> = match &pool {
            Some(pool) => pool.install(|| batch.par_iter().map(expand).collect()),
            None => batch.iter().map(expand).collect(),
        };
        expanded += take;
        let mut next = frontier[take..].to_vec();
        for (&parent, succ) in batch.iter().zip(results) {
            for (kind, index, state, key) in succ {
                if seen.contains_key(&key) {
                    continue;
                }
                let id = nodes.len();
                seen.insert(key, id);
                nodes.push(Node {
                    width: state.width(),
                    pres: state,
                    parent: Some((parent, kind, index)),
                });
                next.push(id);
            }
        }
        frontier = next;
    }

    let best_id = (0..nodes.len())
        .min_by_key(|&id| (nodes[id].width, id))
        .expect("start node");
    let mut steps = Vec::new();
    let mut cur = best_id;
    while let Some((parent, kind, index)) = nodes[cur].parent {
        steps.push(TraceStep {
            kind,
            index,
            width_after: nodes[cur].width,
        });
        cur = parent;
    }
    steps.reverse();
    SearchOutcome {
        start_width: nodes[0].width,
        best: nodes[best_id].pres.clone(),
        best_width: nodes[best_id].width,
        trace: MoveTrace { steps },
        budget_exhausted: !frontier.is_empty(),
        states_expanded: expanded,
    }
}

/// Steepest descent; ties go to the smallest index.
fn greedy(pres: &MorsePresentation, budget: usize) -> SearchOutcome {
    let mut current = pres.clone();
    let mut steps = Vec::new();
    let mut exhausted = false;
    loop {
        let best = moves::enumerate_moves(&current)
            .into_iter()
            .filter(|m| m.delta < 0)
            .min_by_key(|m| (m.delta, m.index, m.kind));
        let Some(m) = best else { break };
        if steps.len() == budget {
            exhausted = true;
            break;
        }
        current = moves::apply(&current, m.kind, m.index).expect("enumerated moves are legal");
        steps.push(TraceStep {
            kind: m.kind,
            index: m.index,
            width_after: current.width(),
        });
    }
    SearchOutcome {
        start_width: pres.width(),
        best_width: current.width(),
        best: current,
        states_expanded: steps.len(),
        trace: MoveTrace { steps },
        budget_exhausted: exhausted,
    }
}

/// Metropolis walk with uniform proposals over the legal moves. The trace is
/// cut at the first visit of the best width.
fn anneal(pres: &MorsePresentation, params: &SearchParams) -> SearchOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut temperature = params.schedule.initial_temperature;
    let mut current = pres.clone();
    let mut current_width = current.width();
    let mut best = current.clone();
    let mut best_width = current_width;
    let mut best_len = 0;
    let mut path = Vec::new();
    let mut proposals = 0;
    for _ in 0..params.budget {
        let options = moves::enumerate_moves(&current);
        if options.is_empty() {
            break;
        }
        proposals += 1;
        let m = options[rng.gen_range(0..options.len())];
        let accept = m.delta <= 0 || rng.gen::<f64>() < (-(m.delta as f64) / temperature).exp();
        temperature *= params.schedule.decay;
        if !accept {
            continue;
        }
        current = moves::apply(&current, m.kind, m.index).expect("enumerated moves are legal");
        current_width = (current_width as isize + m.delta) as usize;
        path.push(TraceStep {
            kind: m.kind,
            index: m.index,
            width_after: current_width,
        });
        if current_width < best_width {
            best_width = current_width;
            best = current.clone();
            best_len = path.len();
        }
    }
    path.truncate(best_len);
    SearchOutcome {
        start_width: pres.width(),
        best,
        best_width,
        trace: MoveTrace { steps: path },
        budget_exhausted: false,
        states_expanded: proposals,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TraceDivergence {
    #[error("step {step}: {source}")]
    IllegalMove {
        step: usize,
        #[source]
        source: MoveError,
    },
    #[error("step {step}: recorded width {recorded}, replay gives {actual}")]
    WidthMismatch {
        step: usize,
        recorded: usize,
        actual: usize,
    },
}

impl TraceDivergence {
    pub fn step(&self) -> usize {
        match *self {
            TraceDivergence::IllegalMove { step, .. } | TraceDivergence::WidthMismatch { step, .. } => step,
        }
    }
}

/// Replays a trace, returning the final presentation or the first step that
/// is illegal or records the wrong width.
pub fn verify_trace(pres: &MorsePresentation, trace: &MoveTrace) -> Result<MorsePresentation, TraceDivergence> {
    let mut current = pres.clone();
    for (step, s) in trace.steps.iter().enumerate() {
        current =
            moves::apply(&current, s.kind, s.index).map_err(|source| TraceDivergence::IllegalMove { step, source })?;
        let actual = current.width();
        if actual != s.width_after {
            return Err(TraceDivergence::WidthMismatch {
                step,
                recorded: s.width_after,
                actual,
            });
        }
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::fixtures::*;
    use crate::morse::MorseEvent;

    #[test]
    fn exhaustive_unwiggles_p2() {
        let out = search(&p2(), &SearchParams::new(Strategy::Exhaustive, 100_000)).unwrap();
        assert_eq!(out.best_width, 8);
        assert_eq!(out.trace.steps.last().unwrap().kind, MoveKind::Cancel);
        assert_eq!(verify_trace(&p2(), &out.trace).unwrap(), out.best);
    }

    #[test]
    fn p1_stays_put() {
        for strategy in [Strategy::Exhaustive, Strategy::Greedy, Strategy::Anneal] {
            let out = search(&p1(), &SearchParams::new(strategy, 1000)).unwrap();
            assert_eq!(out.best_width, 8, "{strategy:?}");
            assert!(out.trace.steps.iter().all(|s| s.width_after == 8));
        }
    }

    #[test]
    fn two_zigzags_straighten() {
        let pres = MorsePresentation::new(vec![
            MorseEvent::cup(0),
            MorseEvent::cup(1),
            MorseEvent::cap(2),
            MorseEvent::cup(1),
            MorseEvent::cap(2),
            MorseEvent::cap(0),
        ])
        .unwrap();
        assert_eq!(pres.width(), 14);
        let out = search(&pres, &SearchParams::new(Strategy::Exhaustive, 100_000)).unwrap();
        assert_eq!(out.best_width, 2);
        assert!(!out.budget_exhausted);
        let greedy = search(&pres, &SearchParams::new(Strategy::Greedy, 100)).unwrap();
        assert_eq!(greedy.best_width, 2);
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let base = SearchParams::new(Strategy::Exhaustive, 500);
        let a = search(&p2(), &base).unwrap();
        let b = search(&p2(), &base.clone().with_threads(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn small_budget_is_flagged() {
        let out = search(&p2(), &SearchParams::new(Strategy::Exhaustive, 1)).unwrap();
        assert!(out.budget_exhausted);
        assert!(out.best_width <= 14);
        verify_trace(&p2(), &out.trace).unwrap();
    }

    #[test]
    fn anneal_is_seeded() {
        let params = SearchParams::new(Strategy::Anneal, 300).with_seed(7);
        let a = search(&p2(), &params).unwrap();
        let b = search(&p2(), &params).unwrap();
        assert_eq!(a, b);
        verify_trace(&p2(), &a.trace).unwrap();
    }

    #[test]
    fn bad_params() {
        assert!(search(&p2(), &SearchParams::new(Strategy::Greedy, 0)).is_err());
        let mut params = SearchParams::new(Strategy::Anneal, 10);
        params.schedule.decay = 1.0;
        assert!(search(&p2(), &params).is_err());
    }

    #[test]
    fn tampered_trace_diverges() {
        let out = search(&p2(), &SearchParams::new(Strategy::Greedy, 100)).unwrap();
        let mut trace = out.trace.clone();
        trace.steps[0].width_after += 2;
        assert!(matches!(
            verify_trace(&p2(), &trace),
            Err(TraceDivergence::WidthMismatch { step: 0, .. })
        ));
        let err = verify_trace(&unknot(), &out.trace).unwrap_err();
        assert_eq!(err.step(), 0);
        assert!(matches!(err, TraceDivergence::IllegalMove { .. }));
    }
}
