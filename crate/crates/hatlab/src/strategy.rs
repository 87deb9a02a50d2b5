//! Strategies, predictors, and every closed-form construction.
//!
//! A strategy maps (heard declarations, seen hats) to a color. A predictor
//! assigns one strategy to every prisoner and is executed inning by inning:
//! inning-1 prisoners use views only, later prisoners also receive the
//! declarations of everyone who spoke before them.

use crate::color::{Color, ColorSpace};
use crate::error::{HatError, Result};
use crate::game::{
    condition_profile, derive_structure, history_from, view_of, Coloring, Game, PartialColoring,
    Population, Prisoner, PrisonerSet, VisibilityGraph,
};
use crate::parity::{nat_tupler, unzigzag, zigzag, ParityDomain, ParityFunction};
use num_bigint::{BigInt, BigUint};
use num_traits::Signed;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// Dense strategy table for one prisoner of a finite mod-color game.
///
/// The table is indexed by mixed radix over the digit list
/// (heard declarations in ascending prisoner order, then seen hats in
/// ascending prisoner order), with the first digit least significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableStrategy {
    pub prisoner: Prisoner,
    pub heard: Vec<Prisoner>,
    pub seen: Vec<Prisoner>,
    pub modulus: u32,
    pub entries: Vec<u32>,
}

/// Mixed-radix index shared by table lookup and the search engine.
pub(crate) fn table_index(modulus: u32, digits: impl Iterator<Item = u32>) -> usize {
    let mut idx: usize = 0;
    let mut stride: usize = 1;
    for d in digits {
        idx += d as usize * stride;
        stride *= modulus as usize;
    }
    idx
}

impl TableStrategy {
    pub fn digit_count(&self) -> usize {
        self.heard.len() + self.seen.len()
    }

    fn lookup(&self, history: &PartialColoring, view: &PartialColoring) -> Result<Color> {
        let heard = self.heard.iter().map(|&b| {
            history
                .get(b)
                .map(|c| c.residue())
                .ok_or(HatError::MismatchedPredictor(format!(
                    "table for prisoner {} expects to hear {b}",
                    self.prisoner
                )))
        });
        let seen = self.seen.iter().map(|&b| {
            view.get(b)
                .map(|c| c.residue())
                .ok_or(HatError::MismatchedPredictor(format!(
                    "table for prisoner {} expects to see {b}",
                    self.prisoner
                )))
        });
        let digits: Result<Vec<u32>> = heard.chain(seen).collect();
        let idx = table_index(self.modulus, digits?.into_iter());
        Ok(Color::Mod(self.entries[idx]))
    }
}

/// Wire form of a table: `{"prisoner": i, "radix": [...], "table": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTable {
    pub prisoner: Prisoner,
    pub radix: Vec<u32>,
    pub table: Vec<u32>,
}

impl Serialize for TableStrategy {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("prisoner", &self.prisoner)?;
        m.serialize_entry("radix", &vec![self.modulus; self.digit_count()])?;
        m.serialize_entry("table", &self.entries)?;
        m.end()
    }
}

/// One closed-form declaration rule. Each variant mirrors one construction;
/// `eval` receives the prisoner, history and view at play time.
#[derive(Clone, Debug)]
pub enum Rule {
    /// Always declare the same color.
    Constant(Color),
    /// Declare me − Σ(seen hats) in mod |A|.
    ModSum,
    /// Declare the next cycle member's hat.
    CopyNext { next: Prisoner },
    /// Declare 1 − (next cycle member's hat), colors mod 2.
    FlipNext { next: Prisoner },
    /// First speaker: declare the sum of all seen hats.
    HintSumFirst,
    /// Later prisoner: h(s) − Σ(heard other than s) − Σ(seen but unheard).
    HintSumLater { hint: Prisoner },
    /// Dual first speaker i: Σ(seen other than partner) + i − (partner's hat).
    DualHintFirst { index: u32, partner: Prisoner },
    /// Dual later prisoner, corrected form: ī − f(s0) − f(s1)
    /// − Σ(heard outside the first inning) − Σ(seen, unheard, outside it).
    DualHintLater { s0: Prisoner, s1: Prisoner },
    /// First speaker: encode all other hats as one integer.
    TupleEncode { order: Arc<Vec<Prisoner>> },
    /// Later prisoner: decode the hint and pick the own coordinate.
    TupleDecode {
        hint: Prisoner,
        width: u32,
        coord: u32,
    },
    /// First speaker: φ(view ∪ {me ↦ 0}).
    ParityFirst { phi: ParityFunction },
    /// Later prisoner: φ(h[s|0] ∪ {me ↦ 0} ∪ unheard view) − h(s).
    ParityLater { hint: Prisoner, phi: ParityFunction },
    /// First-inning restriction: extend the subgame view by a fill color
    /// and play the original strategy.
    Induced(Arc<InducedRule>),
    /// Color restriction: play the inner strategy, replace guesses outside
    /// the allowed set by the fill color.
    Clamp {
        inner: Box<Strategy>,
        allowed: Arc<BTreeSet<Color>>,
        fill: Color,
    },
}

#[derive(Clone, Debug)]
pub struct InducedRule {
    pub base_game: Arc<Game>,
    pub base: Arc<Predictor>,
    pub orig: Prisoner,
    pub fill: Color,
    /// Ascending original ids of the subgame prisoners.
    pub sub_to_orig: Arc<Vec<Prisoner>>,
}

#[derive(Clone, Debug)]
pub enum Strategy {
    Table(TableStrategy),
    Rule(Rule),
}

/// Constructor name and parameters, carried for reporting.
#[derive(Clone, Debug, Serialize)]
pub struct PredictorMeta {
    pub constructor: String,
    pub params: serde_json::Value,
}

#[derive(Clone, Debug)]
pub enum StrategyMap {
    Finite(Vec<Strategy>),
    Omega {
        default: Box<Strategy>,
        overrides: BTreeMap<Prisoner, Strategy>,
    },
}

/// One strategy per prisoner.
#[derive(Clone, Debug)]
pub struct Predictor {
    pub map: StrategyMap,
    pub meta: PredictorMeta,
}

impl Predictor {
    pub fn finite(strategies: Vec<Strategy>, meta: PredictorMeta) -> Predictor {
        Predictor {
            map: StrategyMap::Finite(strategies),
            meta,
        }
    }

    pub fn strategy_of(&self, a: Prisoner) -> &Strategy {
        match &self.map {
            StrategyMap::Finite(v) => &v[a as usize],
            StrategyMap::Omega { default, overrides } => overrides.get(&a).unwrap_or(default),
        }
    }

    /// Build a table predictor from its wire form, binding each table to
    /// the prisoner's hearing and seen sets in this game.
    pub fn from_tables(game: &Game, raws: &[RawTable]) -> Result<Predictor> {
        let n = game.n_finite().ok_or_else(|| {
            HatError::MismatchedPredictor("table predictors need a finite game".into())
        })?;
        let modulus = match game.colors {
            ColorSpace::Mod(m) => m,
            ColorSpace::Int => {
                return Err(HatError::MismatchedPredictor(
                    "table predictors need mod colors".into(),
                ))
            }
        };
        let mut slots: Vec<Option<TableStrategy>> = vec![None; n as usize];
        for raw in raws {
            if raw.prisoner >= n {
                return Err(HatError::UnknownPrisonerId(raw.prisoner));
            }
            if slots[raw.prisoner as usize].is_some() {
                return Err(HatError::MismatchedPredictor(format!(
                    "two tables for prisoner {}",
                    raw.prisoner
                )));
            }
            if raw.radix.iter().any(|&r| r != modulus) {
                return Err(HatError::MismatchedPredictor(
                    "table radix does not match the color count".into(),
                ));
            }
            let heard: Vec<Prisoner> = match game.hearing_set(raw.prisoner) {
                PrisonerSet::Finite(s) => s.into_iter().collect(),
                PrisonerSet::CofiniteOmega(_) => unreachable!("finite game"),
            };
            let seen: Vec<Prisoner> = match game.visibility.seen_set(raw.prisoner) {
                PrisonerSet::Finite(s) => s.into_iter().collect(),
                PrisonerSet::CofiniteOmega(_) => unreachable!("finite game"),
            };
            let digits = heard.len() + seen.len();
            if raw.radix.len() != digits {
                return Err(HatError::MismatchedPredictor(format!(
                    "table for prisoner {} has {} digits, game needs {digits}",
                    raw.prisoner,
                    raw.radix.len()
                )));
            }
            let want = (modulus as u64).checked_pow(digits as u32);
            if want != Some(raw.table.len() as u64) {
                return Err(HatError::MismatchedPredictor(format!(
                    "table for prisoner {} has {} entries",
                    raw.prisoner,
                    raw.table.len()
                )));
            }
            if raw.table.iter().any(|&e| e >= modulus) {
                return Err(HatError::MismatchedPredictor(
                    "table entry outside the color space".into(),
                ));
            }
            slots[raw.prisoner as usize] = Some(TableStrategy {
                prisoner: raw.prisoner,
                heard,
                seen,
                modulus,
                entries: raw.table.clone(),
            });
        }
        let strategies: Result<Vec<Strategy>> = slots
            .into_iter()
            .enumerate()
            .map(|(a, t)| {
                t.map(Strategy::Table)
                    .ok_or(HatError::MismatchedPredictor(format!(
                        "no table for prisoner {a}"
                    )))
            })
            .collect();
        Ok(Predictor::finite(
            strategies?,
            PredictorMeta {
                constructor: "tables".into(),
                params: serde_json::Value::Null,
            },
        ))
    }

    /// Cheap shape validation against a game.
    pub fn check_against(&self, game: &Game) -> Result<()> {
        match (&self.map, game.prisoners) {
            (StrategyMap::Finite(v), Population::Finite(n)) => {
                if v.len() as u64 != n {
                    return Err(HatError::MismatchedPredictor(format!(
                        "predictor covers {} prisoners, game has {n}",
                        v.len()
                    )));
                }
                for (a, s) in v.iter().enumerate() {
                    if let Strategy::Table(t) = s {
                        if t.prisoner != a as u64 {
                            return Err(HatError::MismatchedPredictor(format!(
                                "table for prisoner {} stored at slot {a}",
                                t.prisoner
                            )));
                        }
                    }
                }
                Ok(())
            }
            (StrategyMap::Omega { .. }, Population::Omega) => Ok(()),
            _ => Err(HatError::MismatchedPredictor(
                "predictor form does not match the prisoner set".into(),
            )),
        }
    }
}

/// Declared colors, the match set, and its complement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GuessRecord {
    pub guesses: Coloring,
    #[serde(rename = "match")]
    pub matches: PrisonerSet,
    pub errors: PrisonerSet,
}

fn need(v: Option<Color>, what: &str) -> Result<Color> {
    v.ok_or_else(|| HatError::MismatchedPredictor(format!("strategy expects {what}")))
}

impl Strategy {
    /// Evaluate on a history and view. `game` supplies the color group and,
    /// for the assembly rules, the shape of the prisoner set.
    pub fn eval(
        &self,
        game: &Game,
        me: Prisoner,
        history: &PartialColoring,
        view: &PartialColoring,
    ) -> Result<Color> {
        let space = &game.colors;
        match self {
            Strategy::Table(t) => t.lookup(history, view),
            Strategy::Rule(rule) => match rule {
                Rule::Constant(c) => Ok(c.clone()),
                Rule::ModSum => {
                    let sum = view.sum_skipping(space, &[]);
                    Ok(space.sub(&space.from_u64(me), &sum))
                }
                Rule::CopyNext { next } => need(view.get(*next), "to see the next cycle member"),
                Rule::FlipNext { next } => {
                    let c = need(view.get(*next), "to see the next cycle member")?;
                    Ok(space.sub(&space.from_u64(1), &c))
                }
                Rule::HintSumFirst => Ok(view.sum_skipping(space, &[])),
                Rule::HintSumLater { hint } => {
                    let hint_value = need(history.get(*hint), "to hear the hint giver")?;
                    let heard_rest = history.sum_skipping(space, &[*hint]);
                    let mut unseen_sum = space.zero();
                    for (b, c) in view.explicit() {
                        if !history.domain_contains(b) {
                            unseen_sum = space.add(&unseen_sum, c);
                        }
                    }
                    // Σ over (seen \ heard) is finite only with implicit zeros.
                    check_zero_implicit(history)?;
                    check_zero_implicit(view)?;
                    Ok(space.sub(&space.sub(&hint_value, &heard_rest), &unseen_sum))
                }
                Rule::DualHintFirst { index, partner } => {
                    let partner_hat = need(view.get(*partner), "to see the other first speaker")?;
                    let rest = view.sum_skipping(space, &[*partner]);
                    Ok(space.sub(
                        &space.add(&rest, &space.from_u64(u64::from(*index))),
                        &partner_hat,
                    ))
                }
                Rule::DualHintLater { s0, s1 } => {
                    check_zero_implicit(history)?;
                    check_zero_implicit(view)?;
                    let mut matched_index = space.zero();
                    for (i, s) in [(0u64, *s0), (1, *s1)] {
                        let heard = need(history.get(s), "to hear the first speakers")?;
                        let seen = need(view.get(s), "to see the first speakers")?;
                        if heard == seen {
                            matched_index = space.add(&matched_index, &space.from_u64(i));
                        }
                    }
                    let f_s0 = need(view.get(*s0), "to see the first speakers")?;
                    let f_s1 = need(view.get(*s1), "to see the first speakers")?;
                    let heard_rest = history.sum_skipping(space, &[*s0, *s1]);
                    let mut unseen_sum = space.zero();
                    for (b, c) in view.explicit() {
                        if b != *s0 && b != *s1 && !history.domain_contains(b) {
                            unseen_sum = space.add(&unseen_sum, c);
                        }
                    }
                    let mut out = space.sub(&matched_index, &f_s0);
                    out = space.sub(&out, &f_s1);
                    out = space.sub(&out, &heard_rest);
                    Ok(space.sub(&out, &unseen_sum))
                }
                Rule::TupleEncode { order } => {
                    let mut tuple = Vec::with_capacity(order.len());
                    for &b in order.iter() {
                        let c = need(view.get(b), "to see every other hat")?;
                        tuple.push(zigzag(c.as_int()));
                    }
                    let encoded = nat_tupler(order.len() as u32).encode(&tuple);
                    Ok(Color::Int(BigInt::from(encoded)))
                }
                Rule::TupleDecode { hint, width, coord } => {
                    let heard = need(history.get(*hint), "to hear the hint giver")?;
                    let nat: BigUint = {
                        let v = heard.as_int();
                        if v.is_negative() {
                            zigzag(v) // total decoding; real plays only hear naturals
                        } else {
                            v.to_biguint().unwrap()
                        }
                    };
                    let tuple = nat_tupler(*width).decode(&nat);
                    Ok(Color::Int(unzigzag(&tuple[*coord as usize])))
                }
                Rule::ParityFirst { phi } => {
                    let arg = assemble_total(game, None, view, &[(me, space.zero())])?;
                    phi.eval(&arg)
                }
                Rule::ParityLater { hint, phi } => {
                    let hint_value = need(history.get(*hint), "to hear the hint giver")?;
                    let arg = assemble_total(
                        game,
                        Some(history),
                        view,
                        &[(me, space.zero()), (*hint, space.zero())],
                    )?;
                    Ok(space.sub(&phi.eval(&arg)?, &hint_value))
                }
                Rule::Induced(ind) => {
                    let orig_view = match ind.base_game.visibility.seen_set(ind.orig) {
                        PrisonerSet::Finite(set) => {
                            let mut values = BTreeMap::new();
                            for b in set {
                                let v = match ind.sub_to_orig.binary_search(&b) {
                                    Ok(j) => need(view.get(j as u64), "the subgame view")?,
                                    Err(_) => ind.fill.clone(),
                                };
                                values.insert(b, v);
                            }
                            PartialColoring::Finite(values)
                        }
                        PrisonerSet::CofiniteOmega(excluded) => {
                            let mut entries = BTreeMap::new();
                            for (j, &orig_id) in ind.sub_to_orig.iter().enumerate() {
                                if !excluded.contains(&orig_id) {
                                    entries.insert(orig_id, need(view.get(j as u64), "the view")?);
                                }
                            }
                            PartialColoring::cofinite(excluded, entries, ind.fill.clone())
                        }
                    };
                    ind.base.strategy_of(ind.orig).eval(
                        &ind.base_game,
                        ind.orig,
                        &PartialColoring::empty(),
                        &orig_view,
                    )
                }
                Rule::Clamp {
                    inner,
                    allowed,
                    fill,
                } => {
                    let g = inner.eval(game, me, history, view)?;
                    Ok(if allowed.contains(&g) {
                        g
                    } else {
                        fill.clone()
                    })
                }
            },
        }
    }
}

fn check_zero_implicit(p: &PartialColoring) -> Result<()> {
    match p {
        PartialColoring::Finite(_) => Ok(()),
        PartialColoring::Cofinite { zero, .. } => {
            if zero.is_zero() {
                Ok(())
            } else {
                Err(HatError::Unsupported(
                    "infinite sum over a nonzero implicit value".into(),
                ))
            }
        }
    }
}

/// Build the total coloring h[s|0] ∪ pins ∪ (view outside the history
/// domain). Used by the parity rules; S1 ∧ S2 guarantee totality.
fn assemble_total(
    game: &Game,
    history: Option<&PartialColoring>,
    view: &PartialColoring,
    pins: &[(Prisoner, Color)],
) -> Result<Coloring> {
    let pinned = |b: Prisoner| pins.iter().find(|(p, _)| *p == b).map(|(_, c)| c.clone());
    match game.prisoners {
        Population::Finite(n) => {
            let mut values = Vec::with_capacity(n as usize);
            for b in 0..n {
                let v = if let Some(c) = pinned(b) {
                    c
                } else if let Some(h) = history {
                    match h.get(b) {
                        Some(c) => c,
                        None => need(view.get(b), "S2 coverage of every prisoner")?,
                    }
                } else {
                    need(view.get(b), "sight of every other prisoner")?
                };
                values.push(v);
            }
            Ok(Coloring::Finite(values))
        }
        Population::Omega => {
            if let Some(h) = history {
                check_zero_implicit(h)?;
            }
            check_zero_implicit(view)?;
            let mut except = BTreeMap::new();
            if let Some(h) = history {
                for (b, c) in h.explicit() {
                    except.insert(b, c.clone());
                }
            }
            for (b, c) in view.explicit() {
                let heard = history.map(|h| h.domain_contains(b)).unwrap_or(false);
                if !heard {
                    except.insert(b, c.clone());
                }
            }
            for (p, c) in pins {
                except.insert(*p, c.clone());
            }
            except.retain(|_, c| !c.is_zero());
            Ok(Coloring::Omega {
                base: game.colors.zero(),
                except,
            })
        }
    }
}

/// Execute a predictor on a coloring, inning by inning. Deterministic.
pub fn run_predictor(game: &Game, p: &Predictor, f: &Coloring) -> Result<GuessRecord> {
    p.check_against(game)?;
    f.check_against(game)?;
    match game.prisoners {
        Population::Finite(n) => run_finite(game, p, f, n),
        Population::Omega => run_omega(game, p, f),
    }
}

fn run_finite(game: &Game, p: &Predictor, f: &Coloring, n: u64) -> Result<GuessRecord> {
    let structure = derive_structure(game);
    let mut declared: Vec<Option<Color>> = vec![None; n as usize];
    for set in &structure.inning_sets {
        // Everyone in an inning declares simultaneously off earlier innings.
        let mut this_round = Vec::new();
        for a in set.iter_finite() {
            let history = match game.hearing_set(a) {
                PrisonerSet::Finite(hs) => PartialColoring::Finite(
                    hs.into_iter()
                        .map(|b| (b, declared[b as usize].clone().expect("earlier inning")))
                        .collect(),
                ),
                PrisonerSet::CofiniteOmega(_) => unreachable!("finite game"),
            };
            let view = view_of(game, a, f)?;
            this_round.push((a, p.strategy_of(a).eval(game, a, &history, &view)?));
        }
        for (a, c) in this_round {
            declared[a as usize] = Some(c);
        }
    }
    let guesses = Coloring::Finite(declared.into_iter().map(Option::unwrap).collect());
    let matches: BTreeSet<Prisoner> = (0..n).filter(|&a| guesses.get(a) == f.get(a)).collect();
    let errors: BTreeSet<Prisoner> = (0..n).filter(|&a| !matches.contains(&a)).collect();
    Ok(GuessRecord {
        guesses,
        matches: PrisonerSet::Finite(matches),
        errors: PrisonerSet::Finite(errors),
    })
}

/// ω execution. Exceptional prisoners are evaluated one by one; the
/// cofinite default inning is handled through two fresh "generic"
/// prisoners, which must agree — their shared value is the declaration of
/// every unexceptional prisoner.
fn run_omega(game: &Game, p: &Predictor, f: &Coloring) -> Result<GuessRecord> {
    if let Coloring::Omega { base, .. } = f {
        if !base.is_zero() {
            return Err(HatError::GameSpec(
                "omega colorings use the zero base".into(),
            ));
        }
    }
    let overrides: Vec<Prisoner> = match &p.map {
        StrategyMap::Omega { overrides, .. } => overrides.keys().copied().collect(),
        StrategyMap::Finite(_) => unreachable!("checked against the game"),
    };
    let mut relevant: BTreeSet<Prisoner> = game.exceptional_prisoners();
    relevant.extend(f.support());
    relevant.extend(overrides);
    let g1 = relevant.iter().max().map(|&m| m + 1).unwrap_or(0);
    let g2 = g1 + 1;

    let structure = derive_structure(game);
    let default_inning = structure
        .inning_sets
        .iter()
        .position(|s| !s.is_finite())
        .expect("omega games have a cofinite inning") as u32
        + 1;

    let mut declared = Coloring::Omega {
        base: game.colors.zero(),
        except: BTreeMap::new(),
    };
    let mut generic_value: Option<Color> = None;
    for (i, set) in structure.inning_sets.iter().enumerate() {
        let beta = i as u32 + 1;
        let mut speakers: Vec<Prisoner> = relevant
            .iter()
            .copied()
            .filter(|&a| set.contains(a))
            .collect();
        if beta == default_inning {
            speakers.push(g1);
            speakers.push(g2);
        }
        let mut this_round = Vec::new();
        for a in speakers {
            let history = history_from(game, a, &declared);
            let view = view_of(game, a, f)?;
            this_round.push((a, p.strategy_of(a).eval(game, a, &history, &view)?));
        }
        if beta == default_inning {
            let v2 = this_round.pop().expect("generic").1;
            let v1 = this_round.pop().expect("generic").1;
            if v1 != v2 {
                return Err(HatError::Unsupported(
                    "strategy is not uniform across generic prisoners".into(),
                ));
            }
            generic_value = Some(v1);
        }
        let gen = generic_value.clone();
        if let Coloring::Omega { base, except } = &mut declared {
            for (a, c) in this_round {
                except.insert(a, c);
            }
            if beta == default_inning {
                *base = gen.expect("just set");
                let b = base.clone();
                except.retain(|_, c| *c != b);
            }
        }
    }

    let guesses = declared;
    let mut wrong: BTreeSet<Prisoner> = BTreeSet::new();
    let mut right: BTreeSet<Prisoner> = BTreeSet::new();
    for &a in &relevant {
        if guesses.get(a) == f.get(a) {
            right.insert(a);
        } else {
            wrong.insert(a);
        }
    }
    let generic_correct = match &guesses {
        Coloring::Omega { base, .. } => base.is_zero(),
        Coloring::Finite(_) => unreachable!(),
    };
    let (matches, errors) = if generic_correct {
        (
            PrisonerSet::CofiniteOmega(wrong.clone()),
            PrisonerSet::Finite(wrong),
        )
    } else {
        (
            PrisonerSet::Finite(right.clone()),
            PrisonerSet::CofiniteOmega(right),
        )
    };
    Ok(GuessRecord {
        guesses,
        matches,
        errors,
    })
}

// ---------------------------------------------------------------------------
// Closed-form constructors.
// ---------------------------------------------------------------------------

fn meta(name: &str, params: serde_json::Value) -> PredictorMeta {
    PredictorMeta {
        constructor: name.to_string(),
        params,
    }
}

/// Complete-graph construction for |A| = |K| = n, simultaneous: prisoner m
/// declares m − Σ(seen hats) mod n, so exactly the prisoner matching the
/// total sum is correct.
pub fn mod_sum_predictor(game: &Game) -> Result<Predictor> {
    let n = game.n_finite().ok_or(HatError::RequiresSquareGame)?;
    if game.max_inning() != 1 {
        return Err(HatError::RequiresSimultaneous);
    }
    if !game.has_complete_visibility() {
        return Err(HatError::RequiresCompleteVisibility);
    }
    if game.colors.count() != Some(n) {
        return Err(HatError::RequiresSquareGame);
    }
    let strategies = (0..n).map(|_| Strategy::Rule(Rule::ModSum)).collect();
    Ok(Predictor::finite(
        strategies,
        meta("mod-sum", serde_json::Value::Null),
    ))
}

/// 2-color cyclic construction: the cycle head copies the next hat, every
/// other cycle member flips it; at least one member is always correct.
/// Prisoners off the cycle declare 0.
pub fn cycle_parity_predictor(game: &Game, cycle: &[Prisoner]) -> Result<Predictor> {
    let n = game.n_finite().ok_or(HatError::RequiresFiniteGame)?;
    if game.colors != ColorSpace::Mod(2) {
        return Err(HatError::RequiresBinaryColors);
    }
    if game.max_inning() != 1 {
        return Err(HatError::RequiresSimultaneous);
    }
    let distinct: BTreeSet<Prisoner> = cycle.iter().copied().collect();
    let closes = cycle.len() >= 2
        && distinct.len() == cycle.len()
        && cycle.iter().all(|&a| a < n)
        && (0..cycle.len()).all(|i| game.visibility.sees(cycle[i], cycle[(i + 1) % cycle.len()]));
    if !closes {
        return Err(HatError::NotACycle(cycle.to_vec()));
    }
    let mut strategies: Vec<Strategy> =
        vec![Strategy::Rule(Rule::Constant(game.colors.zero())); n as usize];
    for (i, &a) in cycle.iter().enumerate() {
        let next = cycle[(i + 1) % cycle.len()];
        strategies[a as usize] = Strategy::Rule(if i == 0 {
            Rule::CopyNext { next }
        } else {
            Rule::FlipNext { next }
        });
    }
    Ok(Predictor::finite(
        strategies,
        meta("cycle-parity", serde_json::json!({ "cycle": cycle })),
    ))
}

fn single_first_speaker(game: &Game) -> Result<Prisoner> {
    let structure = derive_structure(game);
    let first = structure.first_speakers();
    if first.len() != Some(1) {
        return Err(HatError::RequiresS1S2);
    }
    let s = first.iter_finite().next().unwrap();
    Ok(s)
}

/// Hint-sum construction under S1 ∧ S2: the unique first speaker declares
/// the sum of everything it sees; everyone else solves for their own hat
/// from the hint, the heard declarations and the hats still visible.
pub fn hint_sum_predictor(game: &Game) -> Result<Predictor> {
    if game.max_inning() < 2 {
        return Err(HatError::RequiresMultiInning);
    }
    let profile = condition_profile(game)?;
    if !(profile.s1 && profile.s2) {
        return Err(HatError::RequiresS1S2);
    }
    let s = single_first_speaker(game)?;
    // S1 gives H(s) = ∅, so S2 already forces V(s) = A \ {s}; keep the
    // explicit check anyway since the whole construction hangs on it.
    if !sees_everyone(game, s) {
        return Err(HatError::RequiresS1S2);
    }
    let first = Strategy::Rule(Rule::HintSumFirst);
    let later = Strategy::Rule(Rule::HintSumLater { hint: s });
    let m = meta("hint-sum", serde_json::json!({ "hint": s }));
    Ok(build_hinted(game, s, first, later, m))
}

fn sees_everyone(game: &Game, a: Prisoner) -> bool {
    match &game.visibility {
        VisibilityGraph::Finite(sets) => {
            sets[a as usize].len() as u64 == game.n_finite().unwrap() - 1
        }
        VisibilityGraph::OmegaComplete { hidden } => {
            hidden.get(&a).map(|h| h.is_empty()).unwrap_or(true)
        }
    }
}

fn build_hinted(
    game: &Game,
    s: Prisoner,
    first: Strategy,
    later: Strategy,
    meta: PredictorMeta,
) -> Predictor {
    match game.prisoners {
        Population::Finite(n) => {
            let strategies = (0..n)
                .map(|a| if a == s { first.clone() } else { later.clone() })
                .collect();
            Predictor::finite(strategies, meta)
        }
        Population::Omega => Predictor {
            map: StrategyMap::Omega {
                default: Box::new(later),
                overrides: [(s, first)].into_iter().collect(),
            },
            meta,
        },
    }
}

/// Two-first-speaker construction for 2 colors under S4 ∧ S5 ∧ S6.
///
/// The two first speakers encode the total parity between them so that
/// exactly one of them errs; every later prisoner reads off which one was
/// right and reconstructs its own hat. The later-prisoner declaration is
/// ī − f(s0) − f(s1) − Σ(heard outside the first inning) − Σ(seen, unheard,
/// outside the first inning): subtracting the first speakers' hats is
/// required for the stated one-error guarantee.
pub fn dual_hint_predictor(game: &Game) -> Result<Predictor> {
    if game.colors != ColorSpace::Mod(2) {
        return Err(HatError::RequiresBinaryColors);
    }
    if game.max_inning() < 2 {
        return Err(HatError::RequiresMultiInning);
    }
    let profile = condition_profile(game)?;
    if !(profile.s4 && profile.s5 && profile.s6) {
        return Err(HatError::RequiresS4S5S6);
    }
    let structure = derive_structure(game);
    let mut firsts = structure.first_speakers().iter_finite();
    let s0 = firsts.next().unwrap();
    let s1 = firsts.next().unwrap();
    let later = Strategy::Rule(Rule::DualHintLater { s0, s1 });
    let f0 = Strategy::Rule(Rule::DualHintFirst {
        index: 0,
        partner: s1,
    });
    let f1 = Strategy::Rule(Rule::DualHintFirst {
        index: 1,
        partner: s0,
    });
    let m = meta("dual-hint", serde_json::json!({ "s0": s0, "s1": s1 }));
    match game.prisoners {
        Population::Finite(n) => {
            let strategies = (0..n)
                .map(|a| {
                    if a == s0 {
                        f0.clone()
                    } else if a == s1 {
                        f1.clone()
                    } else {
                        later.clone()
                    }
                })
                .collect();
            Ok(Predictor::finite(strategies, m))
        }
        Population::Omega => Ok(Predictor {
            map: StrategyMap::Omega {
                default: Box::new(later),
                overrides: [(s0, f0), (s1, f1)].into_iter().collect(),
            },
            meta: m,
        }),
    }
}

/// Infinite-color construction under S1 ∧ S4: the first speaker encodes
/// the whole tuple of other hats as a single integer (zigzag each hat into
/// ℕ, then Cantor-tuple); later prisoners decode their coordinate.
pub fn bijection_hint_predictor(game: &Game) -> Result<Predictor> {
    let n = game.n_finite().ok_or(HatError::RequiresFiniteGame)?;
    if game.colors != ColorSpace::Int {
        return Err(HatError::RequiresIntColors);
    }
    if game.max_inning() < 2 {
        return Err(HatError::RequiresMultiInning);
    }
    let profile = condition_profile(game)?;
    if !(profile.s1 && profile.s4) {
        return Err(HatError::RequiresS1S4);
    }
    let s = single_first_speaker(game).map_err(|_| HatError::RequiresS1S4)?;
    let order: Arc<Vec<Prisoner>> = Arc::new((0..n).filter(|&a| a != s).collect());
    let width = (n - 1) as u32;
    let strategies = (0..n)
        .map(|a| {
            if a == s {
                Strategy::Rule(Rule::TupleEncode {
                    order: Arc::clone(&order),
                })
            } else {
                let coord = order.iter().position(|&b| b == a).unwrap() as u32;
                Strategy::Rule(Rule::TupleDecode {
                    hint: s,
                    width,
                    coord,
                })
            }
        })
        .collect();
    Ok(Predictor::finite(
        strategies,
        meta("bijection-hint", serde_json::json!({ "hint": s })),
    ))
}

/// Parity-hint construction under S1 ∧ S2 for any abelian color group with
/// a parity function: the first speaker declares φ(view ∪ {s ↦ 0}), later
/// prisoners invert the defining equation.
pub fn parity_hint_predictor(game: &Game, phi: ParityFunction) -> Result<Predictor> {
    if game.max_inning() < 2 {
        return Err(HatError::RequiresMultiInning);
    }
    let profile = condition_profile(game)?;
    if !(profile.s1 && profile.s2) {
        return Err(HatError::RequiresS1S2);
    }
    if phi.space != game.colors {
        return Err(HatError::ParityDomainMismatch);
    }
    let domain_ok = match (game.n_finite(), phi.domain) {
        (Some(n), ParityDomain::Slots(w)) => n == w,
        (None, ParityDomain::OmegaFiniteSupport) => true,
        _ => false,
    };
    if !domain_ok {
        return Err(HatError::ParityDomainMismatch);
    }
    let s = single_first_speaker(game)?;
    let first = Strategy::Rule(Rule::ParityFirst { phi: phi.clone() });
    let later = Strategy::Rule(Rule::ParityLater { hint: s, phi });
    let m = meta("parity-hint", serde_json::json!({ "hint": s }));
    Ok(build_hinted(game, s, first, later, m))
}

/// The finite-support instantiation of the Gabay–O'Connor predictor: on
/// the finite-support family the only =*-class representative is the
/// all-zero coloring, so every prisoner declares zero and the error set is
/// exactly the support. No choice principle involved.
pub fn finite_support_fep(game: &Game) -> Result<Predictor> {
    let ok = game.is_omega() && game.has_complete_visibility() && game.max_inning() == 1;
    if !ok {
        return Err(HatError::RequiresOmegaCompleteSimultaneous);
    }
    Ok(Predictor {
        map: StrategyMap::Omega {
            default: Box::new(Strategy::Rule(Rule::Constant(game.colors.zero()))),
            overrides: BTreeMap::new(),
        },
        meta: meta("fep-zero", serde_json::Value::Null),
    })
}

/// Restrict a multi-inning game to its first speakers: the simultaneous
/// subgame on A_1 (visibility restricted), where each first speaker plays
/// its original strategy after filling every unseen hat with `fill`.
///
/// Note the subgame may have a single prisoner; it bypasses the usual
/// 2-prisoner floor.
pub fn restrict_to_first_inning(
    game: &Game,
    p: &Predictor,
    fill: Color,
) -> Result<(Game, Predictor)> {
    if game.max_inning() < 2 {
        return Err(HatError::RequiresMultiInning);
    }
    p.check_against(game)?;
    if !game.colors.contains(&fill) {
        return Err(HatError::GameSpec(format!(
            "fill color {fill} outside the space"
        )));
    }
    let structure = derive_structure(game);
    let first = structure.first_speakers();
    if !first.is_finite() {
        return Err(HatError::Unsupported(
            "first inning restriction needs finitely many first speakers".into(),
        ));
    }
    let sub_to_orig: Arc<Vec<Prisoner>> = Arc::new(first.iter_finite().collect());
    let m = sub_to_orig.len() as u64;
    let lists: Vec<BTreeSet<Prisoner>> = sub_to_orig
        .iter()
        .map(|&a| {
            sub_to_orig
                .iter()
                .enumerate()
                .filter(|(_, &b)| game.visibility.sees(a, b))
                .map(|(j, _)| j as Prisoner)
                .collect()
        })
        .collect();
    // Built directly: 1-prisoner subgames are legitimate here.
    let subgame = Game {
        prisoners: Population::Finite(m),
        colors: game.colors,
        visibility: VisibilityGraph::Finite(lists),
        innings: crate::game::InningFunction::Finite(vec![1; m as usize]),
    };
    let base_game = Arc::new(game.clone());
    let base = Arc::new(p.clone());
    let strategies = sub_to_orig
        .iter()
        .map(|&orig| {
            Strategy::Rule(Rule::Induced(Arc::new(InducedRule {
                base_game: Arc::clone(&base_game),
                base: Arc::clone(&base),
                orig,
                fill: fill.clone(),
                sub_to_orig: Arc::clone(&sub_to_orig),
            })))
        })
        .collect();
    let induced = Predictor::finite(
        strategies,
        meta(
            "first-inning-restriction",
            serde_json::json!({ "of": p.meta.constructor, "fill": fill.to_string() }),
        ),
    );
    Ok((subgame, induced))
}

/// Project a predictor onto a color subset: keep guesses inside
/// `subcolors`, replace the rest by `fill`. Correctness on subcolor-valued
/// colorings is preserved.
pub fn restrict_colors(
    game: &Game,
    p: &Predictor,
    subcolors: &BTreeSet<Color>,
    fill: Color,
) -> Result<Predictor> {
    if !subcolors.contains(&fill) {
        return Err(HatError::FillOutsideSubcolors);
    }
    if subcolors.iter().any(|c| !game.colors.contains(c)) {
        return Err(HatError::GameSpec("subcolor outside the space".into()));
    }
    p.check_against(game)?;
    let allowed = Arc::new(subcolors.clone());
    let clamp = |s: &Strategy| {
        Strategy::Rule(Rule::Clamp {
            inner: Box::new(s.clone()),
            allowed: Arc::clone(&allowed),
            fill: fill.clone(),
        })
    };
    let m = meta(
        "color-restriction",
        serde_json::json!({ "of": p.meta.constructor, "fill": fill.to_string() }),
    );
    let map = match &p.map {
        StrategyMap::Finite(v) => StrategyMap::Finite(v.iter().map(clamp).collect()),
        StrategyMap::Omega { default, overrides } => StrategyMap::Omega {
            default: Box::new(clamp(default)),
            overrides: overrides.iter().map(|(&a, s)| (a, clamp(s))).collect(),
        },
    };
    Ok(Predictor { map, meta: m })
}
