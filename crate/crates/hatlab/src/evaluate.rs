//! Exhaustive and sampled evaluation of predictors, PS membership, the
//! counting identity, robustness, and the constructive adversary colorings.

use crate::color::{Color, ColorSpace};
use crate::error::{HatError, Result};
use crate::game::{Coloring, Game, Population, Prisoner, VisibilityGraph};
use crate::parity::sample_omega_coloring;
use crate::sample::SeededSampler;
use crate::strategy::{run_predictor, Predictor};
use serde::Serialize;
use std::collections::BTreeMap;

/// Default ceiling on |K|^|A| for exhaustive evaluation.
pub const DEFAULT_EXHAUSTIVE_CAP: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ReportMode {
    Exhaustive,
    Sampled { seed: u64, n: u64 },
}

/// What the histogram counts per coloring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HistogramKey {
    /// Finite games: number of correct guesses.
    Correct,
    /// ω games: number of errors (all statistics that would be infinite are
    /// reported as null).
    Errors,
}

/// Aggregate correctness statistics over a set of colorings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvaluationReport {
    #[serde(rename = "colorings")]
    pub coloring_count: u64,
    /// `None` means infinite (ω games).
    pub min_correct: Option<u64>,
    /// `None` means some coloring produced infinitely many errors.
    pub max_errors: Option<u64>,
    pub total_correct: Option<u64>,
    pub histogram_over: HistogramKey,
    pub histogram: BTreeMap<u64, u64>,
    /// First coloring (in evaluation order) hitting each histogram bucket.
    pub witnesses: BTreeMap<u64, Coloring>,
    /// ω only: samples whose error set was cofinite.
    pub unbounded_error_samples: u64,
    pub mode: ReportMode,
}

impl EvaluationReport {
    fn empty(key: HistogramKey, mode: ReportMode) -> Self {
        EvaluationReport {
            coloring_count: 0,
            min_correct: None,
            max_errors: Some(0),
            total_correct: Some(0),
            histogram_over: key,
            histogram: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            unbounded_error_samples: 0,
            mode,
        }
    }

    /// Fold one finite-game outcome into the running statistics.
    fn record_finite(&mut self, correct: u64, errors: u64, f: &Coloring) {
        self.coloring_count += 1;
        self.min_correct = Some(self.min_correct.map_or(correct, |m| m.min(correct)));
        self.max_errors = self.max_errors.map(|m| m.max(errors));
        self.total_correct = self.total_correct.map(|t| t + correct);
        *self.histogram.entry(correct).or_insert(0) += 1;
        self.witnesses.entry(correct).or_insert_with(|| f.clone());
    }

    fn record_omega(&mut self, errors: Option<u64>, f: &Coloring) {
        self.coloring_count += 1;
        self.min_correct = None;
        self.total_correct = None;
        match errors {
            Some(e) => {
                self.max_errors = self.max_errors.map(|m| m.max(e));
                *self.histogram.entry(e).or_insert(0) += 1;
                self.witnesses.entry(e).or_insert_with(|| f.clone());
            }
            None => {
                self.max_errors = None;
                self.unbounded_error_samples += 1;
            }
        }
    }

    /// Merge a later chunk into this one. Chunks must be fed in evaluation
    /// order so that witnesses stay the first-seen coloring per bucket.
    fn absorb(&mut self, later: EvaluationReport) {
        if later.coloring_count == 0 {
            return;
        }
        if self.coloring_count == 0 {
            let mode = self.mode;
            *self = later;
            self.mode = mode;
            return;
        }
        self.coloring_count += later.coloring_count;
        self.min_correct = match (self.min_correct, later.min_correct) {
            (Some(a), Some(b)) => Some(a.min(b)),
            _ => None,
        };
        self.max_errors = match (self.max_errors, later.max_errors) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        self.total_correct = match (self.total_correct, later.total_correct) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        for (k, v) in later.histogram {
            *self.histogram.entry(k).or_insert(0) += v;
        }
        for (k, w) in later.witnesses {
            self.witnesses.entry(k).or_insert(w);
        }
        self.unbounded_error_samples += later.unbounded_error_samples;
    }
}

/// A PS goal: at least n correct, or at most n errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "n", rename_all = "lowercase")]
pub enum Goal {
    #[serde(rename = "correct>=")]
    CorrectAtLeast(u64),
    #[serde(rename = "errors<=")]
    ErrorsAtMost(u64),
}

impl std::str::FromStr for Goal {
    type Err = HatError;
    fn from_str(s: &str) -> Result<Goal> {
        let s = s.trim();
        if let Some(n) = s.strip_prefix("correct>=") {
            return n
                .trim()
                .parse()
                .map(Goal::CorrectAtLeast)
                .map_err(|_| HatError::GameSpec(format!("bad goal {s:?}")));
        }
        if let Some(n) = s.strip_prefix("errors<=") {
            return n
                .trim()
                .parse()
                .map(Goal::ErrorsAtMost)
                .map_err(|_| HatError::GameSpec(format!("bad goal {s:?}")));
        }
        Err(HatError::GameSpec(format!(
            "bad goal {s:?}; use correct>=N or errors<=N"
        )))
    }
}

impl std::fmt::Display for Goal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Goal::CorrectAtLeast(n) => write!(f, "correct>={n}"),
            Goal::ErrorsAtMost(n) => write!(f, "errors<={n}"),
        }
    }
}

fn mod_digits(space: ColorSpace) -> Result<u32> {
    match space {
        ColorSpace::Mod(k) => Ok(k),
        ColorSpace::Int => Err(HatError::RequiresFiniteGame),
    }
}

/// The coloring with lexicographic index `c` (prisoner 0 most significant).
fn coloring_at(space: ColorSpace, n: u64, k: u32, c: u64) -> Coloring {
    let mut digits = vec![0u32; n as usize];
    let mut rem = c;
    for i in (0..n as usize).rev() {
        digits[i] = (rem % u64::from(k)) as u32;
        rem /= u64::from(k);
    }
    Coloring::from_digits(space, &digits)
}

/// Iterate all |K|^|A| colorings in lexicographic order; exact statistics.
pub fn evaluate_exhaustive(game: &Game, p: &Predictor) -> Result<EvaluationReport> {
    evaluate_exhaustive_with(game, p, DEFAULT_EXHAUSTIVE_CAP, 1)
}

/// Same, with an explicit coloring cap and worker count. Any worker count
/// produces the identical report: the space is split into contiguous
/// lexicographic chunks whose partial reports merge in order.
pub fn evaluate_exhaustive_with(
    game: &Game,
    p: &Predictor,
    cap: u64,
    threads: usize,
) -> Result<EvaluationReport> {
    let n = game.n_finite().ok_or(HatError::RequiresFiniteGame)?;
    let k = mod_digits(game.colors)?;
    let total = (u64::from(k))
        .checked_pow(n as u32)
        .filter(|&t| t <= cap)
        .ok_or(HatError::SpaceTooLarge(cap))?;
    p.check_against(game)?;

    let threads = threads.max(1).min(total.max(1) as usize);
    let chunk = total.div_ceil(threads as u64);
    let ranges: Vec<(u64, u64)> = (0..threads as u64)
        .map(|t| (t * chunk, ((t + 1) * chunk).min(total)))
        .filter(|(lo, hi)| lo < hi)
        .collect();

    let eval_range = |lo: u64, hi: u64| -> Result<EvaluationReport> {
        let mut report = EvaluationReport::empty(HistogramKey::Correct, ReportMode::Exhaustive);
        for c in lo..hi {
            let f = coloring_at(game.colors, n, k, c);
            let record = run_predictor(game, p, &f)?;
            let correct = record.matches.len().expect("finite game");
            report.record_finite(correct, n - correct, &f);
        }
        Ok(report)
    };

    let mut parts: Vec<Result<EvaluationReport>> = Vec::new();
    if ranges.len() == 1 {
        parts.push(eval_range(ranges[0].0, ranges[0].1));
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = ranges
                .iter()
                .map(|&(lo, hi)| scope.spawn(move || eval_range(lo, hi)))
                .collect();
            for h in handles {
                parts.push(h.join().expect("worker panicked"));
            }
        });
    }
    let mut out = EvaluationReport::empty(HistogramKey::Correct, ReportMode::Exhaustive);
    for part in parts {
        out.absorb(part?);
    }
    Ok(out)
}

/// Deterministic seeded sampling: finite games draw every hat fresh (int
/// hats uniform in `0..range`), ω games draw a bounded-size support.
/// Sampled statistics refute claims; they never certify them.
pub fn evaluate_sampled(
    game: &Game,
    p: &Predictor,
    n: u64,
    seed: u64,
    range: u64,
) -> Result<EvaluationReport> {
    p.check_against(game)?;
    let mut sampler = SeededSampler::new(seed);
    let mode = ReportMode::Sampled { seed, n };
    match game.prisoners {
        Population::Finite(count) => {
            let mut report = EvaluationReport::empty(HistogramKey::Correct, mode);
            for _ in 0..n {
                let f = Coloring::Finite(
                    (0..count)
                        .map(|_| sampler.color(game.colors, range))
                        .collect(),
                );
                let record = run_predictor(game, p, &f)?;
                let correct = record.matches.len().expect("finite game");
                report.record_finite(correct, count - correct, &f);
            }
            Ok(report)
        }
        Population::Omega => {
            let mut report = EvaluationReport::empty(HistogramKey::Errors, mode);
            for _ in 0..n {
                let f = sample_omega_coloring(game.colors, &mut sampler);
                let record = run_predictor(game, p, &f)?;
                report.record_omega(record.errors.len(), &f);
            }
            Ok(report)
        }
    }
}

/// Decide goal membership from a report. Exhaustive reports certify either
/// way; sampled reports may only refute.
pub fn ps_membership(report: &EvaluationReport, goal: Goal) -> Result<bool> {
    let holds = match goal {
        Goal::CorrectAtLeast(n) => report.min_correct.map_or(n == 0, |m| m >= n),
        Goal::ErrorsAtMost(n) => report.max_errors.is_some_and(|m| m <= n),
    };
    match report.mode {
        ReportMode::Exhaustive => Ok(holds),
        ReportMode::Sampled { .. } => {
            if holds {
                Err(HatError::SampledReportNotConclusive)
            } else {
                Ok(false)
            }
        }
    }
}

/// The counting identity: over all colorings of a simultaneous finite
/// game, any predictor is correct exactly |A|·|K|^(|A|−1) times in total.
pub fn average_correct_check(game: &Game, p: &Predictor) -> Result<bool> {
    if game.max_inning() != 1 {
        return Err(HatError::RequiresSimultaneous);
    }
    let n = game.n_finite().ok_or(HatError::RequiresFiniteGame)?;
    let k = u64::from(mod_digits(game.colors)?);
    let report = evaluate_exhaustive(game, p)?;
    let expected = n * k.pow(n as u32 - 1);
    Ok(report.total_correct == Some(expected))
}

fn directed_cycle_exists(sets: &[std::collections::BTreeSet<Prisoner>]) -> bool {
    // Iterative three-color DFS.
    let n = sets.len();
    let mut state = vec![0u8; n]; // 0 fresh, 1 on stack, 2 done
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, Vec<Prisoner>)> =
            vec![(start, sets[start].iter().copied().collect::<Vec<_>>())];
        state[start] = 1;
        while let Some((v, rest)) = stack.last_mut() {
            if let Some(w) = rest.pop() {
                let w = w as usize;
                match state[w] {
                    0 => {
                        state[w] = 1;
                        let next = sets[w].iter().copied().collect();
                        stack.push((w, next));
                    }
                    1 => return true,
                    _ => {}
                }
            } else {
                state[*v] = 2;
                stack.pop();
            }
        }
    }
    false
}

/// True when the finite visibility graph has a directed cycle.
pub fn has_directed_cycle(game: &Game) -> Result<bool> {
    match &game.visibility {
        VisibilityGraph::Finite(sets) => Ok(directed_cycle_exists(sets)),
        VisibilityGraph::OmegaComplete { .. } => Ok(true),
    }
}

/// On an acyclic 2-color simultaneous game, build the proof's layered
/// coloring under which every prisoner guesses incorrectly. Layer B_0 is
/// the blind prisoners; layer B_m is everyone whose whole view lies in
/// earlier layers, so their guesses are already determined when their hats
/// get flipped.
pub fn acyclic_adversary(game: &Game, p: &Predictor) -> Result<Coloring> {
    if game.max_inning() != 1 {
        return Err(HatError::RequiresSimultaneous);
    }
    if game.colors != ColorSpace::Mod(2) {
        return Err(HatError::RequiresBinaryColors);
    }
    let n = game.n_finite().ok_or(HatError::RequiresFiniteGame)?;
    let sets = match &game.visibility {
        VisibilityGraph::Finite(sets) => sets,
        VisibilityGraph::OmegaComplete { .. } => return Err(HatError::RequiresFiniteGame),
    };
    if directed_cycle_exists(sets) {
        return Err(HatError::GraphHasCycle);
    }
    p.check_against(game)?;

    let mut covered = vec![false; n as usize];
    let mut layers: Vec<Vec<Prisoner>> = Vec::new();
    while covered.iter().any(|&c| !c) {
        let layer: Vec<Prisoner> = (0..n)
            .filter(|&a| {
                !covered[a as usize] && sets[a as usize].iter().all(|&b| covered[b as usize])
            })
            .collect();
        debug_assert!(!layer.is_empty(), "acyclic graphs always yield a layer");
        for &a in &layer {
            covered[a as usize] = true;
        }
        layers.push(layer);
    }

    let mut cur = Coloring::zero(game);
    for layer in layers {
        let record = run_predictor(game, p, &cur)?;
        if let Coloring::Finite(values) = &mut cur {
            for a in layer {
                values[a as usize] = game.colors.sub(&Color::Mod(1), &record.guesses.get(a));
            }
        }
    }
    let final_record = run_predictor(game, p, &cur)?;
    assert!(
        final_record.matches.is_empty(),
        "layered adversary must defeat every prisoner"
    );
    Ok(cur)
}

/// When a does not see b in a simultaneous game, the two-step correction
/// starting from the all-zero coloring makes both a and b guess correctly.
pub fn double_correct_coloring(
    game: &Game,
    p: &Predictor,
    a: Prisoner,
    b: Prisoner,
) -> Result<Coloring> {
    if game.max_inning() != 1 {
        return Err(HatError::RequiresSimultaneous);
    }
    for x in [a, b] {
        if !game.contains_prisoner(x) {
            return Err(HatError::UnknownPrisonerId(x));
        }
    }
    if a == b {
        return Err(HatError::DuplicateTarget);
    }
    if game.visibility.sees(a, b) {
        return Err(HatError::EdgePresent(a, b));
    }
    let f = Coloring::zero(game);
    let fa =
        crate::game::mutate_coloring(game, &f, &[(a, run_predictor(game, p, &f)?.guesses.get(a))])?;
    let fab = crate::game::mutate_coloring(
        game,
        &fa,
        &[(b, run_predictor(game, p, &fa)?.guesses.get(b))],
    )?;
    let record = run_predictor(game, p, &fab)?;
    assert!(
        record.matches.contains(a) && record.matches.contains(b),
        "two-point correction must leave both prisoners correct"
    );
    Ok(fab)
}

/// Robustness: P(f) = P(g) whenever f and g differ at finitely many
/// prisoners. Finite mod games check every coloring pair by checking that
/// P is constant; everything else samples pairs within the =*-class.
pub fn check_robust(game: &Game, p: &Predictor, trials: u64, seed: u64) -> Result<bool> {
    p.check_against(game)?;
    match (game.prisoners, game.colors) {
        (Population::Finite(n), ColorSpace::Mod(k)) => {
            let total = (u64::from(k))
                .checked_pow(n as u32)
                .filter(|&t| t <= DEFAULT_EXHAUSTIVE_CAP)
                .ok_or(HatError::SpaceTooLarge(DEFAULT_EXHAUSTIVE_CAP))?;
            let first = run_predictor(game, p, &coloring_at(game.colors, n, k, 0))?;
            for c in 1..total {
                let f = coloring_at(game.colors, n, k, c);
                if run_predictor(game, p, &f)?.guesses != first.guesses {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (Population::Finite(n), ColorSpace::Int) => {
            let mut sampler = SeededSampler::new(seed);
            let base = run_predictor(game, p, &Coloring::zero(game))?;
            for _ in 0..trials {
                let f =
                    Coloring::Finite((0..n).map(|_| sampler.color(game.colors, 1000)).collect());
                if run_predictor(game, p, &f)?.guesses != base.guesses {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (Population::Omega, _) => {
            let mut sampler = SeededSampler::new(seed);
            for _ in 0..trials {
                let f = sample_omega_coloring(game.colors, &mut sampler);
                let g = sample_omega_coloring(game.colors, &mut sampler);
                if run_predictor(game, p, &f)?.guesses != run_predictor(game, p, &g)?.guesses {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}
