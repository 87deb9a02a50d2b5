//! Backtracking search for predictors, and game-family hunts.
//!
//! The search decides whether PS(correct ≥ n) / PS(errors ≤ n) is nonempty
//! on a finite mod-color game by filling strategy tables lazily: colorings
//! are played in lexicographic order, and the first time an unset table
//! entry is consulted the search branches over all colors (ascending).
//! A coloring that violates the goal backtracks to the most recent branch.
//! SAT returns the tables (unconsulted entries default to color 0); UNSAT
//! means the whole branch tree was exhausted.

use crate::color::ColorSpace;
use crate::error::{HatError, Result};
use crate::evaluate::{evaluate_exhaustive, ps_membership, Goal};
use crate::game::{
    condition_profile, game_to_json, ConditionProfile, Game, InningFunction, Population,
    PrisonerSet, VisibilityGraph,
};
use crate::strategy::{table_index, Predictor, Strategy, TableStrategy};
use serde::Serialize;

pub const DEFAULT_TABLE_CAP: u64 = 1 << 22;
pub const DEFAULT_COLORING_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Sat,
    Unsat,
    Unknown,
}

/// Search outcome: an explicit witness, an exhaustion proof, or a budget
/// exhaustion. Deterministic down to `nodes_explored`.
#[derive(Clone, Debug, Serialize)]
pub struct SearchCertificate {
    pub verdict: Verdict,
    pub tables: Option<Vec<TableStrategy>>,
    pub nodes_explored: u64,
    pub budget_used: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub budget: u64,
    /// Fix the first branched entry to color 0. Sound n-fold pruning under
    /// global color translation; cross-checked against unreduced runs in
    /// the theorem tests.
    pub symmetry: bool,
    pub table_cap: u64,
    pub coloring_cap: u64,
}

impl SearchOptions {
    pub fn with_budget(budget: u64) -> Self {
        SearchOptions {
            budget,
            symmetry: false,
            table_cap: DEFAULT_TABLE_CAP,
            coloring_cap: DEFAULT_COLORING_CAP,
        }
    }
}

/// Decide PS membership by backtracking over partial strategy tables.
pub fn decide_ps(game: &Game, goal: Goal, budget: u64) -> Result<SearchCertificate> {
    decide_ps_with(game, goal, SearchOptions::with_budget(budget))
}

struct Engine {
    n: usize,
    k: u32,
    total: u64,
    /// Prisoners in declaration order (inning, then id).
    order: Vec<usize>,
    heard: Vec<Vec<usize>>,
    seen: Vec<Vec<usize>>,
    tables: Vec<Vec<i32>>,
    /// Index of the frame that set each entry; parallel to `tables`.
    owner: Vec<Vec<i32>>,
    goal: Goal,
}

enum Step {
    Pass,
    Fail,
    Miss { prisoner: usize, idx: usize },
}

struct Frame {
    coloring: u64,
    prisoner: usize,
    idx: usize,
    next: u32,
    /// Frames implicated in failures seen under this one (backjumping).
    conflict: Vec<usize>,
}

fn merge_sorted(dst: &mut Vec<usize>, src: &[usize]) {
    for &v in src {
        if let Err(pos) = dst.binary_search(&v) {
            dst.insert(pos, v);
        }
    }
}

impl Engine {
    fn new(game: &Game, goal: Goal, opts: &SearchOptions) -> Result<Engine> {
        let n = game.n_finite().ok_or(HatError::RequiresFiniteGame)? as usize;
        let k = match game.colors {
            ColorSpace::Mod(k) => k,
            ColorSpace::Int => return Err(HatError::RequiresFiniteGame),
        };
        let total = (u64::from(k))
            .checked_pow(n as u32)
            .filter(|&t| t <= opts.coloring_cap)
            .ok_or(HatError::SpaceTooLarge(opts.coloring_cap))?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| (game.innings.of(a as u64), a));

        let mut heard = Vec::with_capacity(n);
        let mut seen = Vec::with_capacity(n);
        let mut tables = Vec::with_capacity(n);
        let mut cells: u64 = 0;
        for a in 0..n {
            let h: Vec<usize> = match game.hearing_set(a as u64) {
                PrisonerSet::Finite(s) => s.into_iter().map(|b| b as usize).collect(),
                PrisonerSet::CofiniteOmega(_) => unreachable!("finite game"),
            };
            let v: Vec<usize> = match game.visibility.seen_set(a as u64) {
                PrisonerSet::Finite(s) => s.into_iter().map(|b| b as usize).collect(),
                PrisonerSet::CofiniteOmega(_) => unreachable!("finite game"),
            };
            let digits = (h.len() + v.len()) as u32;
            let size = (u64::from(k))
                .checked_pow(digits)
                .filter(|&s| cells + s <= opts.table_cap)
                .ok_or(HatError::SpaceTooLarge(opts.table_cap))?;
            cells += size;
            heard.push(h);
            seen.push(v);
            tables.push(vec![-1i32; size as usize]);
        }
        let owner = tables.clone();
        Ok(Engine {
            n,
            k,
            total,
            order,
            heard,
            seen,
            tables,
            owner,
            goal,
        })
    }

    fn digits_of(&self, c: u64, digits: &mut [u32]) {
        let mut rem = c;
        for i in (0..self.n).rev() {
            digits[i] = (rem % u64::from(self.k)) as u32;
            rem /= u64::from(self.k);
        }
    }

    /// Play one coloring off the current tables. Declarations are computed
    /// in inning order; the first unset entry consulted stops the play.
    /// `consulted` collects the frames owning every entry read, so a
    /// failure can jump straight to the most recent branch it depends on.
    fn eval(
        &self,
        c: u64,
        decls: &mut [u32],
        hats: &mut [u32],
        consulted: &mut Vec<usize>,
    ) -> Step {
        self.digits_of(c, hats);
        consulted.clear();
        let mut matches: u64 = 0;
        let mut errors: u64 = 0;
        for (pos, &a) in self.order.iter().enumerate() {
            if let Goal::CorrectAtLeast(m) = self.goal {
                if matches >= m {
                    return Step::Pass;
                }
            }
            let digits = self.heard[a]
                .iter()
                .map(|&b| decls[b])
                .chain(self.seen[a].iter().map(|&b| hats[b]));
            let idx = table_index(self.k, digits);
            let entry = self.tables[a][idx];
            if entry < 0 {
                return Step::Miss { prisoner: a, idx };
            }
            consulted.push(self.owner[a][idx] as usize);
            decls[a] = entry as u32;
            if entry as u32 == hats[a] {
                matches += 1;
            } else {
                errors += 1;
            }
            match self.goal {
                Goal::CorrectAtLeast(m) => {
                    // Not enough prisoners left to reach the target.
                    let remaining = (self.n - pos - 1) as u64;
                    if matches + remaining < m {
                        return Step::Fail;
                    }
                }
                Goal::ErrorsAtMost(e) => {
                    if errors > e {
                        return Step::Fail;
                    }
                }
            }
        }
        match self.goal {
            Goal::CorrectAtLeast(m) => {
                if matches >= m {
                    Step::Pass
                } else {
                    Step::Fail
                }
            }
            Goal::ErrorsAtMost(_) => Step::Pass,
        }
    }

    fn into_tables(self) -> Vec<TableStrategy> {
        let k = self.k;
        let heard = self.heard;
        let seen = self.seen;
        self.tables
            .into_iter()
            .enumerate()
            .map(|(a, entries)| TableStrategy {
                prisoner: a as u64,
                heard: heard[a].iter().map(|&b| b as u64).collect(),
                seen: seen[a].iter().map(|&b| b as u64).collect(),
                modulus: k,
                entries: entries
                    .into_iter()
                    .map(|e| if e < 0 { 0 } else { e as u32 })
                    .collect(),
            })
            .collect()
    }
}

/// Full-control variant of [`decide_ps`].
///
/// Backtracking is conflict-directed: a failing coloring jumps to the most
/// recent branch among the entries its play consulted, and exhausted
/// branches propagate their accumulated conflict sets upward. Plays depend
/// only on consulted entries, so skipped subtrees cannot contain a
/// witness, and UNSAT still means full exhaustion.
pub fn decide_ps_with(game: &Game, goal: Goal, opts: SearchOptions) -> Result<SearchCertificate> {
    let mut engine = Engine::new(game, goal, &opts)?;
    let mut frames: Vec<Frame> = Vec::new();
    let mut decls = vec![0u32; engine.n];
    let mut hats = vec![0u32; engine.n];
    let mut consulted: Vec<usize> = Vec::with_capacity(engine.n);
    let mut nodes: u64 = 0;
    let mut c: u64 = 0;

    let verdict = loop {
        if c == engine.total {
            break Verdict::Sat;
        }
        match engine.eval(c, &mut decls, &mut hats, &mut consulted) {
            Step::Pass => c += 1,
            Step::Miss { prisoner, idx } => {
                nodes += 1;
                if nodes > opts.budget {
                    break Verdict::Unknown;
                }
                engine.tables[prisoner][idx] = 0;
                engine.owner[prisoner][idx] = frames.len() as i32;
                // The very first branch is pinned to color 0 under the
                // optional translation-symmetry reduction.
                let next = if opts.symmetry && frames.is_empty() {
                    engine.k
                } else {
                    1
                };
                frames.push(Frame {
                    coloring: c,
                    prisoner,
                    idx,
                    next,
                    conflict: Vec::new(),
                });
            }
            Step::Fail => {
                let mut reason: Vec<usize> = consulted.clone();
                reason.sort_unstable();
                reason.dedup();
                let mut resumed = false;
                // Empty reason: the failure is branch-independent, so the
                // whole tree is exhausted.
                while let Some(&target) = reason.last() {
                    // Frames above the target cannot change this play.
                    while frames.len() > target + 1 {
                        let fr = frames.pop().expect("frame above target");
                        engine.tables[fr.prisoner][fr.idx] = -1;
                        engine.owner[fr.prisoner][fr.idx] = -1;
                    }
                    let fr = frames.last_mut().expect("target frame");
                    reason.pop();
                    merge_sorted(&mut fr.conflict, &reason);
                    if fr.next < engine.k {
                        nodes += 1;
                        if nodes > opts.budget {
                            return Ok(SearchCertificate {
                                verdict: Verdict::Unknown,
                                tables: None,
                                nodes_explored: nodes,
                                budget_used: nodes,
                            });
                        }
                        engine.tables[fr.prisoner][fr.idx] = fr.next as i32;
                        fr.next += 1;
                        c = fr.coloring;
                        resumed = true;
                        break;
                    }
                    // Exhausted: this frame fails for the accumulated
                    // reasons; lift them to the next jump target.
                    let fr = frames.pop().expect("exhausted frame");
                    engine.tables[fr.prisoner][fr.idx] = -1;
                    engine.owner[fr.prisoner][fr.idx] = -1;
                    reason = fr.conflict;
                }
                if !resumed {
                    break Verdict::Unsat;
                }
            }
        }
    };

    let tables = match verdict {
        Verdict::Sat => {
            let tables = engine.into_tables();
            // Soundness: a SAT witness must replay cleanly.
            let p = Predictor::from_tables(game, &to_raws(&tables))?;
            let report = evaluate_exhaustive(game, &p)?;
            assert!(
                ps_membership(&report, goal)?,
                "SAT certificate failed to replay"
            );
            Some(tables)
        }
        _ => None,
    };
    Ok(SearchCertificate {
        verdict,
        tables,
        nodes_explored: nodes,
        budget_used: nodes,
    })
}

fn to_raws(tables: &[TableStrategy]) -> Vec<crate::strategy::RawTable> {
    tables
        .iter()
        .map(|t| crate::strategy::RawTable {
            prisoner: t.prisoner,
            radix: vec![t.modulus; t.digit_count()],
            table: t.entries.clone(),
        })
        .collect()
}

/// Rebuild the predictor behind a SAT certificate.
pub fn certificate_predictor(game: &Game, cert: &SearchCertificate) -> Result<Predictor> {
    let tables = cert
        .tables
        .as_ref()
        .ok_or_else(|| HatError::GameSpec("certificate carries no tables".into()))?;
    Predictor::from_tables(game, &to_raws(tables))
}

/// A table predictor with seeded uniform entries, used for the
/// counting-identity experiments.
pub fn random_table_predictor(game: &Game, seed: u64) -> Result<Predictor> {
    let n = game.n_finite().ok_or(HatError::RequiresFiniteGame)? as usize;
    let k = match game.colors {
        ColorSpace::Mod(k) => k,
        ColorSpace::Int => return Err(HatError::RequiresFiniteGame),
    };
    let mut sampler = crate::sample::SeededSampler::new(seed);
    let mut strategies = Vec::with_capacity(n);
    for a in 0..n {
        let heard: Vec<u64> = match game.hearing_set(a as u64) {
            PrisonerSet::Finite(s) => s.into_iter().collect(),
            _ => unreachable!("finite game"),
        };
        let seen: Vec<u64> = match game.visibility.seen_set(a as u64) {
            PrisonerSet::Finite(s) => s.into_iter().collect(),
            _ => unreachable!("finite game"),
        };
        let size = (k as usize).pow((heard.len() + seen.len()) as u32);
        let entries = (0..size)
            .map(|_| sampler.below(u64::from(k)) as u32)
            .collect();
        strategies.push(Strategy::Table(TableStrategy {
            prisoner: a as u64,
            heard,
            seen,
            modulus: k,
            entries,
        }));
    }
    Ok(Predictor::finite(
        strategies,
        crate::strategy::PredictorMeta {
            constructor: "random-tables".into(),
            params: serde_json::json!({ "seed": seed }),
        },
    ))
}

// ---------------------------------------------------------------------------
// Family hunts.
// ---------------------------------------------------------------------------

/// A finite family of games to sweep.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub sizes: Vec<u64>,
    pub colors: ColorSpace,
    /// Exact number of innings for every game in the family.
    pub inning_count: u32,
    /// Constrain |A_1|; `None` admits every surjective inning function.
    pub first_group: Option<u64>,
    pub visibility: crate::theorem::DigraphMode,
}

/// One row of a hunt: the game, its condition profile (absent for
/// simultaneous games), the verdict, and an optional flag naming either a
/// theorem the row contradicts or an open-question candidate.
#[derive(Clone, Debug, Serialize)]
pub struct Finding {
    pub game: serde_json::Value,
    pub profile: Option<ConditionProfile>,
    pub verdict: Verdict,
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
}

impl Finding {
    /// True when the flag names a contradiction with a proven theorem.
    pub fn contradicts_theory(&self) -> bool {
        self.flag
            .as_deref()
            .map(|f| f.starts_with("contradicts-"))
            .unwrap_or(false)
    }
}

/// All surjective inning functions onto 1..=in_count, optionally with a
/// fixed first-group size, in lexicographic order.
fn inning_assignments(n: u64, in_count: u32, first_group: Option<u64>) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![1u32; n as usize];
    loop {
        let surjective = (1..=in_count).all(|b| cur.contains(&b));
        let a1 = cur.iter().filter(|&&b| b == 1).count() as u64;
        if surjective && first_group.is_none_or(|g| g == a1) {
            out.push(cur.clone());
        }
        // Odometer over 1..=in_count, last position fastest.
        let mut i = n as usize;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < in_count {
                cur[i] += 1;
                for v in &mut cur[i + 1..] {
                    *v = 1;
                }
                break;
            }
        }
    }
}

/// Sweep a family: search every game and report the verdicts with their
/// condition profiles. Unknown verdicts are reported, never raised.
pub fn hunt(family: &FamilySpec, goal: Goal, budget: u64) -> Result<Vec<Finding>> {
    let mut findings = Vec::new();
    for &n in &family.sizes {
        let innings_list = inning_assignments(n, family.inning_count, family.first_group);
        let graphs: Vec<VisibilityGraph> =
            crate::theorem::enumerate_digraphs_vec(n, family.visibility)?;
        for innings in &innings_list {
            for vis in &graphs {
                let game = Game::new(
                    Population::Finite(n),
                    family.colors,
                    vis.clone(),
                    InningFunction::Finite(innings.clone()),
                )?;
                let cert = decide_ps(&game, goal, budget)?;
                let profile = condition_profile(&game).ok();
                let flag = flag_for(&game, profile.as_ref(), goal, cert.verdict)?;
                findings.push(Finding {
                    game: game_to_json(&game),
                    profile,
                    verdict: cert.verdict,
                    nodes: cert.nodes_explored,
                    flag,
                });
            }
        }
    }
    Ok(findings)
}

/// Compare a verdict against the theorem directions that apply to this
/// game shape. `contradicts-*` flags are artifact bugs or genuine
/// refutations; `question-1-candidate` marks interesting rows only.
fn flag_for(
    game: &Game,
    profile: Option<&ConditionProfile>,
    goal: Goal,
    verdict: Verdict,
) -> Result<Option<String>> {
    if verdict == Verdict::Unknown {
        return Ok(None);
    }
    let sat = verdict == Verdict::Sat;
    let n = game.n_finite().expect("hunts sweep finite games");
    let k = game.colors.count().expect("hunts sweep mod games");
    let in1 = game.max_inning() == 1;

    if in1 && goal == Goal::CorrectAtLeast(1) {
        if k == 2 {
            let cyclic = crate::evaluate::has_directed_cycle(game)?;
            if sat != cyclic {
                return Ok(Some("contradicts-2color-cyclic-theorem".into()));
            }
        } else if n == k && sat != game.has_complete_visibility() {
            return Ok(Some("contradicts-complete-graph-theorem".into()));
        }
        if n < k && sat {
            return Ok(Some("contradicts-counting-corollary".into()));
        }
    }
    if let (Some(p), Goal::ErrorsAtMost(1), false) = (profile, goal, in1) {
        if p.s1 && p.s2 && !sat {
            return Ok(Some("contradicts-hint-sum-lemma".into()));
        }
        if k == 2 && p.s4 && p.s5 && p.s6 && !sat {
            return Ok(Some("contradicts-dual-hint-theorem".into()));
        }
        if k >= 3 && p.s3 && (sat != (p.s1 && p.s2)) {
            return Ok(Some("contradicts-s3-converse-theorem".into()));
        }
        if k == 2 && sat && !(p.s4 && p.s5 && p.s6) {
            return Ok(Some("question-1-candidate".into()));
        }
    }
    Ok(None)
}
