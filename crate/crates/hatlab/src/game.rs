//! The game quadruple ⟨A, K, V, I⟩ and its derived structure.
//!
//! Prisoners are canonically the integers `0..n` for finite games, or all of
//! ω. Everything about an ω game is kept lazily as a default plus finitely
//! many exceptions: visibility is "complete minus finitely many hidden
//! edges per prisoner", innings are "one default inning plus exceptions",
//! and colorings are "the zero color plus a finite support".

use crate::color::{Color, ColorSpace};
use crate::error::{HatError, Result};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Deserialize, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};

pub type Prisoner = u64;

/// Finite games larger than this are rejected at validation; every table,
/// search and report in this crate is meant for desk-scale instances.
pub const MAX_FINITE_PRISONERS: u64 = 256;

/// The prisoner set: a finite count or ω.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Population {
    Finite(u64),
    Omega,
}

/// A set of prisoners, possibly cofinite in ω.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrisonerSet {
    Finite(BTreeSet<Prisoner>),
    /// ω minus the listed prisoners.
    CofiniteOmega(BTreeSet<Prisoner>),
}

impl PrisonerSet {
    pub fn empty() -> Self {
        PrisonerSet::Finite(BTreeSet::new())
    }

    pub fn contains(&self, p: Prisoner) -> bool {
        match self {
            PrisonerSet::Finite(s) => s.contains(&p),
            PrisonerSet::CofiniteOmega(e) => !e.contains(&p),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, PrisonerSet::Finite(_))
    }

    /// Cardinality, `None` when infinite.
    pub fn len(&self) -> Option<u64> {
        match self {
            PrisonerSet::Finite(s) => Some(s.len() as u64),
            PrisonerSet::CofiniteOmega(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Members of a finite set in ascending order.
    pub fn iter_finite(&self) -> impl Iterator<Item = Prisoner> + '_ {
        match self {
            PrisonerSet::Finite(s) => s.iter().copied(),
            PrisonerSet::CofiniteOmega(_) => panic!("cannot iterate a cofinite set"),
        }
    }
}

impl Serialize for PrisonerSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PrisonerSet::Finite(set) => {
                let mut seq = s.serialize_seq(Some(set.len()))?;
                for p in set {
                    seq.serialize_element(p)?;
                }
                seq.end()
            }
            PrisonerSet::CofiniteOmega(e) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("all_except", &e.iter().collect::<Vec<_>>())?;
                m.end()
            }
        }
    }
}

/// Loop-free directed visibility. Edge (a, b) means a sees b's hat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VisibilityGraph {
    Finite(Vec<BTreeSet<Prisoner>>),
    /// Complete visibility on ω, except that prisoner `k` does not see the
    /// prisoners listed under `hidden[k]`.
    OmegaComplete {
        hidden: BTreeMap<Prisoner, BTreeSet<Prisoner>>,
    },
}

impl VisibilityGraph {
    /// The complete graph on n prisoners.
    pub fn complete(n: u64) -> Self {
        let sets = (0..n)
            .map(|a| (0..n).filter(|&b| b != a).collect())
            .collect();
        VisibilityGraph::Finite(sets)
    }

    /// Adjacency from explicit per-prisoner lists.
    pub fn from_lists(lists: Vec<Vec<Prisoner>>) -> Self {
        VisibilityGraph::Finite(lists.into_iter().map(|l| l.into_iter().collect()).collect())
    }

    /// The empty-exception symbolic complete graph on ω.
    pub fn omega_complete() -> Self {
        VisibilityGraph::OmegaComplete {
            hidden: BTreeMap::new(),
        }
    }

    pub fn sees(&self, a: Prisoner, b: Prisoner) -> bool {
        if a == b {
            return false;
        }
        match self {
            VisibilityGraph::Finite(sets) => sets
                .get(a as usize)
                .map(|s| s.contains(&b))
                .unwrap_or(false),
            VisibilityGraph::OmegaComplete { hidden } => {
                hidden.get(&a).map(|h| !h.contains(&b)).unwrap_or(true)
            }
        }
    }

    /// V(a) as a set.
    pub fn seen_set(&self, a: Prisoner) -> PrisonerSet {
        match self {
            VisibilityGraph::Finite(sets) => {
                PrisonerSet::Finite(sets.get(a as usize).cloned().unwrap_or_default())
            }
            VisibilityGraph::OmegaComplete { hidden } => {
                let mut excluded: BTreeSet<Prisoner> = hidden.get(&a).cloned().unwrap_or_default();
                excluded.insert(a);
                PrisonerSet::CofiniteOmega(excluded)
            }
        }
    }
}

/// Surjection from prisoners onto innings 1..=IN.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InningFunction {
    Finite(Vec<u32>),
    OmegaDefault {
        default: u32,
        exceptions: BTreeMap<Prisoner, u32>,
    },
}

impl InningFunction {
    pub fn all_first(n: u64) -> Self {
        InningFunction::Finite(vec![1; n as usize])
    }

    pub fn of(&self, a: Prisoner) -> u32 {
        match self {
            InningFunction::Finite(v) => v[a as usize],
            InningFunction::OmegaDefault {
                default,
                exceptions,
            } => exceptions.get(&a).copied().unwrap_or(*default),
        }
    }

    pub fn max_inning(&self) -> u32 {
        match self {
            InningFunction::Finite(v) => v.iter().copied().max().unwrap_or(1),
            InningFunction::OmegaDefault {
                default,
                exceptions,
            } => exceptions
                .values()
                .copied()
                .max()
                .unwrap_or(1)
                .max(*default),
        }
    }
}

/// A hat game ⟨A, K, V, I⟩, already validated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    pub prisoners: Population,
    pub colors: ColorSpace,
    pub visibility: VisibilityGraph,
    pub innings: InningFunction,
}

impl Game {
    /// Validate the quadruple and build the game. This is the single entry
    /// point every game goes through, whether built in code or parsed.
    pub fn new(
        prisoners: Population,
        colors: ColorSpace,
        visibility: VisibilityGraph,
        innings: InningFunction,
    ) -> Result<Game> {
        match prisoners {
            Population::Finite(n) if n < 2 => return Err(HatError::TooFewPrisoners),
            Population::Finite(n) if n > MAX_FINITE_PRISONERS => {
                return Err(HatError::GameSpec(format!(
                    "finite games are capped at {MAX_FINITE_PRISONERS} prisoners"
                )))
            }
            _ => {}
        }
        if let ColorSpace::Mod(n) = colors {
            if n < 2 {
                return Err(HatError::TooFewColors);
            }
        }

        let mut visibility = visibility;
        match (&prisoners, &mut visibility) {
            (Population::Finite(n), VisibilityGraph::Finite(sets)) => {
                if sets.len() as u64 != *n {
                    return Err(HatError::GameSpec(format!(
                        "visibility lists cover {} prisoners, game has {n}",
                        sets.len()
                    )));
                }
                for (a, seen) in sets.iter().enumerate() {
                    let a = a as Prisoner;
                    if seen.contains(&a) {
                        return Err(HatError::LoopInVisibility(a));
                    }
                    if let Some(&b) = seen.iter().find(|&&b| b >= *n) {
                        return Err(HatError::UnknownPrisonerId(b));
                    }
                }
            }
            (Population::Omega, VisibilityGraph::OmegaComplete { hidden }) => {
                // Hiding yourself is vacuous under a loop-free complete graph.
                for (&a, h) in hidden.iter_mut() {
                    h.remove(&a);
                }
                hidden.retain(|_, h| !h.is_empty());
            }
            _ => {
                return Err(HatError::GameSpec(
                    "visibility form does not match the prisoner set".into(),
                ))
            }
        }

        let mut innings = innings;
        match (&prisoners, &mut innings) {
            (Population::Finite(n), InningFunction::Finite(v)) => {
                if v.len() as u64 != *n {
                    return Err(HatError::GameSpec(format!(
                        "inning list covers {} prisoners, game has {n}",
                        v.len()
                    )));
                }
                if v.contains(&0) {
                    return Err(HatError::GameSpec("inning indices start at 1".into()));
                }
                let max = v.iter().copied().max().unwrap();
                for beta in 1..=max {
                    if !v.contains(&beta) {
                        return Err(HatError::NonSurjectiveInnings { missing: beta });
                    }
                }
            }
            (
                Population::Omega,
                InningFunction::OmegaDefault {
                    default,
                    exceptions,
                },
            ) => {
                if *default == 0 || exceptions.values().any(|&i| i == 0) {
                    return Err(HatError::GameSpec("inning indices start at 1".into()));
                }
                let d = *default;
                exceptions.retain(|_, i| *i != d);
                let max = exceptions.values().copied().max().unwrap_or(1).max(d);
                for beta in 1..=max {
                    if beta != d && !exceptions.values().any(|&i| i == beta) {
                        return Err(HatError::NonSurjectiveInnings { missing: beta });
                    }
                }
            }
            _ => {
                return Err(HatError::GameSpec(
                    "inning form does not match the prisoner set".into(),
                ))
            }
        }

        Ok(Game {
            prisoners,
            colors,
            visibility,
            innings,
        })
    }

    /// Finite game: all prisoners simultaneous with the given visibility.
    pub fn simultaneous(n: u64, colors: ColorSpace, visibility: VisibilityGraph) -> Result<Game> {
        Game::new(
            Population::Finite(n),
            colors,
            visibility,
            InningFunction::all_first(n),
        )
    }

    pub fn n_finite(&self) -> Option<u64> {
        match self.prisoners {
            Population::Finite(n) => Some(n),
            Population::Omega => None,
        }
    }

    pub fn is_omega(&self) -> bool {
        matches!(self.prisoners, Population::Omega)
    }

    pub fn contains_prisoner(&self, a: Prisoner) -> bool {
        match self.prisoners {
            Population::Finite(n) => a < n,
            Population::Omega => true,
        }
    }

    pub fn max_inning(&self) -> u32 {
        self.innings.max_inning()
    }

    /// H(a): everyone declaring strictly before a.
    pub fn hearing_set(&self, a: Prisoner) -> PrisonerSet {
        let ia = self.innings.of(a);
        match (&self.prisoners, &self.innings) {
            (Population::Finite(n), _) => {
                PrisonerSet::Finite((0..*n).filter(|&b| self.innings.of(b) < ia).collect())
            }
            (
                Population::Omega,
                InningFunction::OmegaDefault {
                    default,
                    exceptions,
                },
            ) => {
                if *default < ia {
                    // Cofinite: everyone except those declaring at inning >= ia.
                    PrisonerSet::CofiniteOmega(
                        exceptions
                            .iter()
                            .filter(|(_, &i)| i >= ia)
                            .map(|(&b, _)| b)
                            .collect(),
                    )
                } else {
                    PrisonerSet::Finite(
                        exceptions
                            .iter()
                            .filter(|(_, &i)| i < ia)
                            .map(|(&b, _)| b)
                            .collect(),
                    )
                }
            }
            _ => unreachable!("validated game"),
        }
    }

    pub fn hears(&self, a: Prisoner, b: Prisoner) -> bool {
        self.innings.of(b) < self.innings.of(a)
    }

    /// True when every prisoner sees every other.
    pub fn has_complete_visibility(&self) -> bool {
        match &self.visibility {
            VisibilityGraph::Finite(sets) => {
                let n = sets.len() as u64;
                sets.iter()
                    .enumerate()
                    .all(|(a, s)| s.len() as u64 == n - 1 && !s.contains(&(a as u64)))
            }
            VisibilityGraph::OmegaComplete { hidden } => hidden.is_empty(),
        }
    }

    /// Prisoners that carry any exceptional structure, used when checking
    /// conditions or running predictors on ω games: inning exceptions plus
    /// every prisoner mentioned by a visibility exception.
    pub fn exceptional_prisoners(&self) -> BTreeSet<Prisoner> {
        let mut out = BTreeSet::new();
        if let InningFunction::OmegaDefault { exceptions, .. } = &self.innings {
            out.extend(exceptions.keys().copied());
        }
        if let VisibilityGraph::OmegaComplete { hidden } = &self.visibility {
            for (&a, h) in hidden {
                out.insert(a);
                out.extend(h.iter().copied());
            }
        }
        out
    }
}

/// A total assignment of colors to prisoners.
///
/// ω colorings are the finite-support family: the zero color everywhere
/// except a finite exception map. Guess records reuse the same shape with a
/// possibly nonzero base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coloring {
    Finite(Vec<Color>),
    Omega {
        base: Color,
        except: BTreeMap<Prisoner, Color>,
    },
}

impl Coloring {
    /// The all-zero coloring of a game.
    pub fn zero(game: &Game) -> Coloring {
        match game.prisoners {
            Population::Finite(n) => Coloring::Finite(vec![game.colors.zero(); n as usize]),
            Population::Omega => Coloring::Omega {
                base: game.colors.zero(),
                except: BTreeMap::new(),
            },
        }
    }

    /// Finite-support ω coloring over the zero base.
    pub fn omega_support(space: ColorSpace, support: &[(Prisoner, Color)]) -> Coloring {
        let mut c = Coloring::Omega {
            base: space.zero(),
            except: support.iter().cloned().collect(),
        };
        c.normalize();
        c
    }

    /// Finite coloring from mod-space digits.
    pub fn from_digits(space: ColorSpace, digits: &[u32]) -> Coloring {
        Coloring::Finite(
            digits
                .iter()
                .map(|&d| space.from_u64(u64::from(d)))
                .collect(),
        )
    }

    pub fn get(&self, p: Prisoner) -> Color {
        match self {
            Coloring::Finite(v) => v[p as usize].clone(),
            Coloring::Omega { base, except } => {
                except.get(&p).cloned().unwrap_or_else(|| base.clone())
            }
        }
    }

    fn normalize(&mut self) {
        if let Coloring::Omega { base, except } = self {
            let b = base.clone();
            except.retain(|_, v| *v != b);
        }
    }

    /// Prisoners whose color differs from the zero color (ω colorings).
    pub fn support(&self) -> BTreeSet<Prisoner> {
        match self {
            Coloring::Finite(v) => v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(p, _)| p as Prisoner)
                .collect(),
            Coloring::Omega { except, .. } => except.keys().copied().collect(),
        }
    }

    pub fn len_finite(&self) -> Option<usize> {
        match self {
            Coloring::Finite(v) => Some(v.len()),
            Coloring::Omega { .. } => None,
        }
    }

    /// Every value lies in the space; ω colorings have finite support by
    /// construction.
    pub fn check_against(&self, game: &Game) -> Result<()> {
        match (self, game.prisoners) {
            (Coloring::Finite(v), Population::Finite(n)) => {
                if v.len() as u64 != n {
                    return Err(HatError::GameSpec(format!(
                        "coloring covers {} prisoners, game has {n}",
                        v.len()
                    )));
                }
                for c in v {
                    if !game.colors.contains(c) {
                        return Err(HatError::GameSpec(format!("color {c} outside the space")));
                    }
                }
                Ok(())
            }
            (Coloring::Omega { base, except }, Population::Omega) => {
                if !game.colors.contains(base) || except.values().any(|c| !game.colors.contains(c))
                {
                    return Err(HatError::GameSpec("color outside the space".into()));
                }
                Ok(())
            }
            _ => Err(HatError::GameSpec(
                "coloring form does not match the prisoner set".into(),
            )),
        }
    }
}

impl Serialize for Coloring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Coloring::Finite(v) => {
                let mut seq = s.serialize_seq(Some(v.len()))?;
                for c in v {
                    seq.serialize_element(c)?;
                }
                seq.end()
            }
            Coloring::Omega { base, except } => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("base", base)?;
                let except: BTreeMap<String, &Color> =
                    except.iter().map(|(p, c)| (p.to_string(), c)).collect();
                m.serialize_entry("except", &except)?;
                m.end()
            }
        }
    }
}

/// A coloring restricted to some domain: views v_a^f and histories h_a^f.
///
/// Cofinite domains (views in ω games) keep only nonzero entries; every
/// other member of the domain implicitly holds the zero color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartialColoring {
    Finite(BTreeMap<Prisoner, Color>),
    Cofinite {
        excluded: BTreeSet<Prisoner>,
        entries: BTreeMap<Prisoner, Color>,
        zero: Color,
    },
}

impl PartialColoring {
    pub fn empty() -> Self {
        PartialColoring::Finite(BTreeMap::new())
    }

    pub fn from_map(values: BTreeMap<Prisoner, Color>) -> Self {
        PartialColoring::Finite(values)
    }

    pub fn cofinite(
        excluded: BTreeSet<Prisoner>,
        mut entries: BTreeMap<Prisoner, Color>,
        zero: Color,
    ) -> Self {
        entries.retain(|p, c| !excluded.contains(p) && *c != zero);
        PartialColoring::Cofinite {
            excluded,
            entries,
            zero,
        }
    }

    pub fn domain_contains(&self, p: Prisoner) -> bool {
        match self {
            PartialColoring::Finite(m) => m.contains_key(&p),
            PartialColoring::Cofinite { excluded, .. } => !excluded.contains(&p),
        }
    }

    pub fn domain_is_finite(&self) -> bool {
        matches!(self, PartialColoring::Finite(_))
    }

    pub fn domain_len(&self) -> Option<u64> {
        match self {
            PartialColoring::Finite(m) => Some(m.len() as u64),
            PartialColoring::Cofinite { .. } => None,
        }
    }

    pub fn get(&self, p: Prisoner) -> Option<Color> {
        match self {
            PartialColoring::Finite(m) => m.get(&p).cloned(),
            PartialColoring::Cofinite {
                excluded,
                entries,
                zero,
            } => {
                if excluded.contains(&p) {
                    None
                } else {
                    Some(entries.get(&p).cloned().unwrap_or_else(|| zero.clone()))
                }
            }
        }
    }

    /// Explicitly stored (prisoner, color) pairs. For cofinite domains these
    /// are exactly the nonzero values, so group sums over the whole domain
    /// can be taken over this iterator alone.
    pub fn explicit(&self) -> impl Iterator<Item = (Prisoner, &Color)> {
        let m = match self {
            PartialColoring::Finite(m) => m,
            PartialColoring::Cofinite { entries, .. } => entries,
        };
        m.iter().map(|(&p, c)| (p, c))
    }

    /// Sum over the domain, skipping the listed prisoners.
    pub fn sum_skipping(&self, space: &ColorSpace, skip: &[Prisoner]) -> Color {
        let mut acc = space.zero();
        for (p, c) in self.explicit() {
            if !skip.contains(&p) {
                acc = space.add(&acc, c);
            }
        }
        acc
    }
}

/// Inning sets, first speakers and IN, as derived from a game.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GameStructure {
    pub inning_count: u32,
    /// `inning_sets[beta - 1]` is the set declaring in inning beta.
    pub inning_sets: Vec<PrisonerSet>,
}

impl GameStructure {
    pub fn first_speakers(&self) -> &PrisonerSet {
        &self.inning_sets[0]
    }
}

/// Inning sets A_1..A_IN and IN. Hearing sets come from
/// [`Game::hearing_set`] so that ω games stay symbolic.
pub fn derive_structure(game: &Game) -> GameStructure {
    let in_count = game.max_inning();
    let mut inning_sets = Vec::with_capacity(in_count as usize);
    match (&game.prisoners, &game.innings) {
        (Population::Finite(n), _) => {
            for beta in 1..=in_count {
                inning_sets.push(PrisonerSet::Finite(
                    (0..*n).filter(|&a| game.innings.of(a) == beta).collect(),
                ));
            }
        }
        (
            Population::Omega,
            InningFunction::OmegaDefault {
                default,
                exceptions,
            },
        ) => {
            for beta in 1..=in_count {
                if beta == *default {
                    inning_sets.push(PrisonerSet::CofiniteOmega(
                        exceptions.keys().copied().collect(),
                    ));
                } else {
                    inning_sets.push(PrisonerSet::Finite(
                        exceptions
                            .iter()
                            .filter(|(_, &i)| i == beta)
                            .map(|(&a, _)| a)
                            .collect(),
                    ));
                }
            }
        }
        _ => unreachable!("validated game"),
    }
    GameStructure {
        inning_count: in_count,
        inning_sets,
    }
}

/// The S1-S6 conditions of a non-simultaneous game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionProfile {
    pub s1: bool,
    pub s2: bool,
    pub s3: bool,
    pub s4: bool,
    pub s5: bool,
    pub s6: bool,
}

/// Compute S1-S6 literally from their definitions:
///
/// * S1: exactly one prisoner declares first.
/// * S2: everyone sees or hears every other prisoner.
/// * S3: nobody both sees and hears the same prisoner.
/// * S4: first speakers see all other hats.
/// * S5: exactly two prisoners declare first.
/// * S6: later prisoners see all of A_1 and everyone declaring in their own
///   inning or later (other than themselves).
pub fn condition_profile(game: &Game) -> Result<ConditionProfile> {
    if game.max_inning() < 2 {
        return Err(HatError::InapplicableConditions);
    }
    let structure = derive_structure(game);
    let first = structure.first_speakers();
    let s1 = first.len() == Some(1);
    let s5 = first.len() == Some(2);

    match game.prisoners {
        Population::Finite(n) => {
            let mut s2 = true;
            let mut s3 = true;
            let mut s6 = true;
            for a in 0..n {
                let ia = game.innings.of(a);
                for b in 0..n {
                    if b == a {
                        continue;
                    }
                    let sees = game.visibility.sees(a, b);
                    let hears = game.hears(a, b);
                    if !sees && !hears {
                        s2 = false;
                    }
                    if sees && hears {
                        s3 = false;
                    }
                    let ib = game.innings.of(b);
                    if ia >= 2 && (ib == 1 || ib >= ia) && !sees {
                        s6 = false;
                    }
                }
            }
            let s4 = first
                .iter_finite()
                .all(|a| (0..n).all(|b| b == a || game.visibility.sees(a, b)));
            Ok(ConditionProfile {
                s1,
                s2,
                s3,
                s4,
                s5,
                s6,
            })
        }
        Population::Omega => {
            // Complete-minus-exceptions visibility makes every condition a
            // finite check over the hidden lists and inning exceptions.
            let (default, exceptions) = match &game.innings {
                InningFunction::OmegaDefault {
                    default,
                    exceptions,
                } => (*default, exceptions),
                _ => unreachable!(),
            };
            let hidden = match &game.visibility {
                VisibilityGraph::OmegaComplete { hidden } => hidden,
                _ => unreachable!(),
            };
            let inning_of = |p: Prisoner| exceptions.get(&p).copied().unwrap_or(default);

            // S2: a misses b only when b is hidden from a; then a must hear b.
            let s2 = hidden
                .iter()
                .all(|(&a, h)| h.iter().all(|&b| inning_of(b) < inning_of(a)));

            // S3: heard prisoners must all be hidden. A cofinite hearing set
            // can never be covered by a finite hidden list, and even finite
            // hearing sets must be hidden entry by entry.
            let mut s3 = true;
            let mut probe: BTreeSet<Prisoner> = game.exceptional_prisoners();
            // One generic prisoner with the default inning, outside every
            // exception list, stands in for the rest of ω.
            let generic = probe.iter().max().map(|&m| m + 1).unwrap_or(0);
            probe.insert(generic);
            for &a in &probe {
                let ia = inning_of(a);
                if default < ia {
                    s3 = false; // hears cofinitely many, sees almost all of them
                    break;
                }
                let empty = BTreeSet::new();
                let hid = hidden.get(&a).unwrap_or(&empty);
                for (&b, &ib) in exceptions.iter() {
                    if b != a && ib < ia && !hid.contains(&b) {
                        s3 = false;
                    }
                }
            }

            // S4: first speakers are inning exceptions (inning 1 < default
            // would make A_1 cofinite and S1/S5 false anyway, but S4 is
            // still well defined: generic first speakers see everyone).
            let s4 = if default == 1 {
                hidden
                    .iter()
                    .all(|(&a, h)| inning_of(a) != 1 || h.is_empty())
            } else {
                exceptions
                    .iter()
                    .filter(|(_, &i)| i == 1)
                    .all(|(&a, _)| hidden.get(&a).map(|h| h.is_empty()).unwrap_or(true))
            };

            // S6: a hidden pair (a, b) with I(a) >= 2 violates S6 exactly
            // when b declares first or not before a.
            let s6 = hidden.iter().all(|(&a, h)| {
                let ia = inning_of(a);
                ia < 2 || h.iter().all(|&b| inning_of(b) != 1 && inning_of(b) < ia)
            });

            Ok(ConditionProfile {
                s1,
                s2,
                s3,
                s4,
                s5,
                s6,
            })
        }
    }
}

/// v_a^f: the coloring f restricted to V(a).
pub fn view_of(game: &Game, a: Prisoner, f: &Coloring) -> Result<PartialColoring> {
    if !game.contains_prisoner(a) {
        return Err(HatError::UnknownPrisonerId(a));
    }
    match &game.visibility {
        VisibilityGraph::Finite(sets) => {
            let values = sets[a as usize].iter().map(|&b| (b, f.get(b))).collect();
            Ok(PartialColoring::Finite(values))
        }
        VisibilityGraph::OmegaComplete { hidden } => {
            let mut excluded: BTreeSet<Prisoner> = hidden.get(&a).cloned().unwrap_or_default();
            excluded.insert(a);
            let entries = match f {
                Coloring::Omega { except, .. } => except.clone(),
                Coloring::Finite(_) => {
                    return Err(HatError::GameSpec(
                        "finite coloring used with an omega game".into(),
                    ))
                }
            };
            Ok(PartialColoring::cofinite(
                excluded,
                entries,
                game.colors.zero(),
            ))
        }
    }
}

/// h_a^f assembled from already-computed declarations: the declarations of
/// H(a), as a partial coloring.
pub fn history_from(game: &Game, a: Prisoner, declarations: &Coloring) -> PartialColoring {
    match game.hearing_set(a) {
        PrisonerSet::Finite(set) => {
            PartialColoring::Finite(set.into_iter().map(|b| (b, declarations.get(b))).collect())
        }
        PrisonerSet::CofiniteOmega(excluded) => {
            let (base, except) = match declarations {
                Coloring::Omega { base, except } => (base.clone(), except.clone()),
                Coloring::Finite(_) => unreachable!("cofinite hearing in a finite game"),
            };
            // Entries relative to the declaration base; a nonzero base means
            // the implicit value is that base, so fold it in.
            let mut entries = except;
            entries.retain(|p, _| !excluded.contains(p));
            if base.is_zero() {
                PartialColoring::cofinite(excluded, entries, base)
            } else {
                PartialColoring::Cofinite {
                    excluded,
                    entries,
                    zero: base,
                }
            }
        }
    }
}

/// f with one or two values replaced; the input is untouched.
pub fn mutate_coloring(
    game: &Game,
    f: &Coloring,
    changes: &[(Prisoner, Color)],
) -> Result<Coloring> {
    for (i, (p, c)) in changes.iter().enumerate() {
        if !game.contains_prisoner(*p) {
            return Err(HatError::UnknownPrisonerId(*p));
        }
        if !game.colors.contains(c) {
            return Err(HatError::GameSpec(format!("color {c} outside the space")));
        }
        if changes[..i].iter().any(|(q, _)| q == p) {
            return Err(HatError::DuplicateTarget);
        }
    }
    let mut out = f.clone();
    match &mut out {
        Coloring::Finite(v) => {
            for (p, c) in changes {
                v[*p as usize] = c.clone();
            }
        }
        Coloring::Omega { base, except } => {
            for (p, c) in changes {
                if c == base {
                    except.remove(p);
                } else {
                    except.insert(*p, c.clone());
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// The external game-spec JSON format.
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGame {
    prisoners: RawPrisoners,
    colors: ColorSpace,
    visibility: RawVisibility,
    innings: RawInnings,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawPrisoners {
    Count(u64),
    Word(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawVisibility {
    Word(String),
    Lists(Vec<Vec<Prisoner>>),
    Symbolic(RawVisSymbolic),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVisSymbolic {
    default: String,
    #[serde(default)]
    exceptions: BTreeMap<String, Vec<Prisoner>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawInnings {
    List(Vec<u32>),
    Symbolic(RawInnSymbolic),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInnSymbolic {
    default: u32,
    #[serde(default)]
    exceptions: BTreeMap<String, u32>,
}

fn parse_id_key(k: &str) -> Result<Prisoner> {
    k.parse()
        .map_err(|_| HatError::GameSpec(format!("bad prisoner id {k:?}")))
}

/// Parse and validate a game from the external JSON format.
///
/// ```json
/// {"prisoners": 5,
///  "colors": {"kind": "mod", "n": 2},
///  "visibility": "complete",
///  "innings": [1, 2, 2, 2, 2]}
/// ```
///
/// ω games use `"prisoners": "omega"` with symbolic visibility
/// (`{"default": "complete", "exceptions": {"3": [5]}}` hides prisoners 5
/// from prisoner 3) and symbolic innings
/// (`{"default": 2, "exceptions": {"0": 1}}`). Unknown keys are rejected.
pub fn parse_game(json: &str) -> Result<Game> {
    let raw: RawGame = serde_json::from_str(json).map_err(|e| HatError::GameSpec(e.to_string()))?;

    let prisoners = match raw.prisoners {
        RawPrisoners::Count(n) => Population::Finite(n),
        RawPrisoners::Word(w) if w == "omega" => Population::Omega,
        RawPrisoners::Word(w) => {
            return Err(HatError::GameSpec(format!("bad prisoner count {w:?}")))
        }
    };

    let visibility = match (prisoners, raw.visibility) {
        (Population::Finite(n), RawVisibility::Word(w)) if w == "complete" => {
            VisibilityGraph::complete(n)
        }
        (Population::Omega, RawVisibility::Word(w)) if w == "complete" => {
            VisibilityGraph::omega_complete()
        }
        (_, RawVisibility::Word(w)) => {
            return Err(HatError::GameSpec(format!("bad visibility {w:?}")))
        }
        (Population::Finite(_), RawVisibility::Lists(lists)) => VisibilityGraph::from_lists(lists),
        (Population::Omega, RawVisibility::Symbolic(sym)) => {
            if sym.default != "complete" {
                return Err(HatError::GameSpec(format!(
                    "bad visibility default {:?}",
                    sym.default
                )));
            }
            let mut hidden = BTreeMap::new();
            for (k, v) in sym.exceptions {
                hidden.insert(parse_id_key(&k)?, v.into_iter().collect());
            }
            VisibilityGraph::OmegaComplete { hidden }
        }
        _ => {
            return Err(HatError::GameSpec(
                "visibility form does not match the prisoner set".into(),
            ))
        }
    };

    let innings = match (prisoners, raw.innings) {
        (Population::Finite(_), RawInnings::List(v)) => InningFunction::Finite(v),
        (Population::Omega, RawInnings::Symbolic(sym)) => {
            let mut exceptions = BTreeMap::new();
            for (k, v) in sym.exceptions {
                exceptions.insert(parse_id_key(&k)?, v);
            }
            InningFunction::OmegaDefault {
                default: sym.default,
                exceptions,
            }
        }
        _ => {
            return Err(HatError::GameSpec(
                "inning form does not match the prisoner set".into(),
            ))
        }
    };

    Game::new(prisoners, raw.colors, visibility, innings)
}

/// Render a game in the external JSON format. `parse_game` accepts the
/// result, and equal games render identically.
pub fn game_to_json(game: &Game) -> serde_json::Value {
    let prisoners = match game.prisoners {
        Population::Finite(n) => serde_json::json!(n),
        Population::Omega => serde_json::json!("omega"),
    };
    let visibility = match &game.visibility {
        VisibilityGraph::Finite(sets) => serde_json::json!(sets
            .iter()
            .map(|s| s.iter().copied().collect::<Vec<_>>())
            .collect::<Vec<_>>()),
        VisibilityGraph::OmegaComplete { hidden } => {
            let exceptions: BTreeMap<String, Vec<Prisoner>> = hidden
                .iter()
                .map(|(a, h)| (a.to_string(), h.iter().copied().collect()))
                .collect();
            serde_json::json!({ "default": "complete", "exceptions": exceptions })
        }
    };
    let innings = match &game.innings {
        InningFunction::Finite(v) => serde_json::json!(v),
        InningFunction::OmegaDefault {
            default,
            exceptions,
        } => {
            let exceptions: BTreeMap<String, u32> = exceptions
                .iter()
                .map(|(a, i)| (a.to_string(), *i))
                .collect();
            serde_json::json!({ "default": default, "exceptions": exceptions })
        }
    };
    serde_json::json!({
        "prisoners": prisoners,
        "colors": game.colors,
        "visibility": visibility,
        "innings": innings,
    })
}

/// Parse a coloring from the command-line text form: either a comma list
/// `1,0,1,1,0` (finite games) or support pairs `2=5,9=1` / the empty string
/// (ω games, zero outside the listed support).
pub fn parse_coloring(game: &Game, text: &str) -> Result<Coloring> {
    let text = text.trim();
    match game.prisoners {
        Population::Finite(n) => {
            let parts: Vec<&str> = if text.is_empty() {
                Vec::new()
            } else {
                text.split(',').collect()
            };
            if parts.len() as u64 != n {
                return Err(HatError::GameSpec(format!(
                    "coloring lists {} values, game has {n} prisoners",
                    parts.len()
                )));
            }
            let mut values = Vec::with_capacity(parts.len());
            for p in parts {
                values.push(game.colors.parse_color(p.trim())?);
            }
            Ok(Coloring::Finite(values))
        }
        Population::Omega => {
            let mut except = BTreeMap::new();
            if !text.is_empty() {
                for pair in text.split(',') {
                    let (k, v) = pair
                        .split_once('=')
                        .ok_or_else(|| HatError::GameSpec(format!("bad support pair {pair:?}")))?;
                    let id: Prisoner = k
                        .trim()
                        .parse()
                        .map_err(|_| HatError::GameSpec(format!("bad prisoner id {k:?}")))?;
                    except.insert(id, game.colors.parse_color(v.trim())?);
                }
            }
            let mut c = Coloring::Omega {
                base: game.colors.zero(),
                except,
            };
            c.normalize();
            Ok(c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g52() -> Game {
        Game::new(
            Population::Finite(5),
            ColorSpace::Mod(2),
            VisibilityGraph::complete(5),
            InningFunction::Finite(vec![1, 2, 2, 2, 2]),
        )
        .unwrap()
    }

    fn g52chain() -> Game {
        let lists: Vec<Vec<Prisoner>> = (0..5u64).map(|i| ((i + 1)..5).collect()).collect();
        Game::new(
            Population::Finite(5),
            ColorSpace::Mod(2),
            VisibilityGraph::from_lists(lists),
            InningFunction::Finite(vec![1, 2, 3, 4, 5]),
        )
        .unwrap()
    }

    fn omega_hint_game() -> Game {
        Game::new(
            Population::Omega,
            ColorSpace::Int,
            VisibilityGraph::omega_complete(),
            InningFunction::OmegaDefault {
                default: 2,
                exceptions: [(0, 1)].into_iter().collect(),
            },
        )
        .unwrap()
    }

    #[test]
    fn validate_puzzle1_shape() {
        let g = Game::simultaneous(2, ColorSpace::Mod(2), VisibilityGraph::complete(2)).unwrap();
        assert_eq!(g.max_inning(), 1);
        assert!(g.has_complete_visibility());
    }

    #[test]
    fn validate_rejects_loops() {
        let err = Game::new(
            Population::Finite(3),
            ColorSpace::Mod(2),
            VisibilityGraph::from_lists(vec![vec![1], vec![1], vec![0]]),
            InningFunction::Finite(vec![1, 1, 1]),
        )
        .unwrap_err();
        assert_eq!(err, HatError::LoopInVisibility(1));
    }

    #[test]
    fn validate_rejects_non_surjective_innings() {
        let err = Game::new(
            Population::Finite(3),
            ColorSpace::Mod(2),
            VisibilityGraph::complete(3),
            InningFunction::Finite(vec![1, 3, 3]),
        )
        .unwrap_err();
        assert_eq!(err, HatError::NonSurjectiveInnings { missing: 2 });
    }

    #[test]
    fn validate_rejects_tiny_games() {
        assert_eq!(
            Game::simultaneous(1, ColorSpace::Mod(2), VisibilityGraph::complete(1)).unwrap_err(),
            HatError::TooFewPrisoners
        );
        assert_eq!(
            Game::simultaneous(2, ColorSpace::Mod(1), VisibilityGraph::complete(2)).unwrap_err(),
            HatError::TooFewColors
        );
    }

    #[test]
    fn validate_rejects_unknown_ids() {
        let err = Game::new(
            Population::Finite(3),
            ColorSpace::Mod(2),
            VisibilityGraph::from_lists(vec![vec![5], vec![0], vec![0]]),
            InningFunction::Finite(vec![1, 1, 1]),
        )
        .unwrap_err();
        assert_eq!(err, HatError::UnknownPrisonerId(5));
    }

    #[test]
    fn structure_of_chain() {
        let s = derive_structure(&g52chain());
        assert_eq!(s.inning_count, 5);
        for (i, set) in s.inning_sets.iter().enumerate() {
            assert_eq!(set.len(), Some(1));
            assert!(set.contains(i as u64));
        }
        let h2 = g52chain().hearing_set(2);
        assert_eq!(h2, PrisonerSet::Finite([0, 1].into_iter().collect()));
    }

    #[test]
    fn structure_of_g52() {
        let s = derive_structure(&g52());
        assert_eq!(s.inning_count, 2);
        assert_eq!(
            s.inning_sets[0],
            PrisonerSet::Finite([0].into_iter().collect())
        );
        assert_eq!(
            s.inning_sets[1],
            PrisonerSet::Finite([1, 2, 3, 4].into_iter().collect())
        );
    }

    #[test]
    fn structure_of_omega_game() {
        let s = derive_structure(&omega_hint_game());
        assert_eq!(s.inning_count, 2);
        assert_eq!(
            s.inning_sets[0],
            PrisonerSet::Finite([0].into_iter().collect())
        );
        assert_eq!(
            s.inning_sets[1],
            PrisonerSet::CofiniteOmega([0].into_iter().collect())
        );
        assert!(s.inning_sets[1].contains(7));
        assert!(!s.inning_sets[1].contains(0));
    }

    #[test]
    fn conditions_g52() {
        let p = condition_profile(&g52()).unwrap();
        assert!(p.s1 && p.s2 && !p.s3 && p.s4 && !p.s5 && p.s6);
    }

    #[test]
    fn conditions_g52chain() {
        let p = condition_profile(&g52chain()).unwrap();
        assert!(p.s1 && p.s2 && p.s3);
        assert!(!p.s6); // prisoner 2 does not see prisoner 1's hat
    }

    #[test]
    fn conditions_need_two_innings() {
        let g = Game::simultaneous(2, ColorSpace::Mod(2), VisibilityGraph::complete(2)).unwrap();
        assert_eq!(
            condition_profile(&g).unwrap_err(),
            HatError::InapplicableConditions
        );
    }

    #[test]
    fn conditions_omega_hint_game() {
        let p = condition_profile(&omega_hint_game()).unwrap();
        assert!(p.s1 && p.s2 && !p.s3 && p.s4);
    }

    #[test]
    fn view_in_chain() {
        let g = g52chain();
        let f = Coloring::from_digits(ColorSpace::Mod(2), &[1, 0, 1, 1, 0]);
        let v = view_of(&g, 2, &f).unwrap();
        assert_eq!(v.get(3), Some(Color::Mod(1)));
        assert_eq!(v.get(4), Some(Color::Mod(0)));
        assert_eq!(v.get(1), None);
        assert_eq!(v.domain_len(), Some(2));
    }

    #[test]
    fn view_of_blind_prisoner_is_empty() {
        let g = Game::new(
            Population::Finite(2),
            ColorSpace::Mod(2),
            VisibilityGraph::from_lists(vec![vec![], vec![0]]),
            InningFunction::Finite(vec![1, 1]),
        )
        .unwrap();
        let f = Coloring::from_digits(ColorSpace::Mod(2), &[1, 1]);
        let v = view_of(&g, 0, &f).unwrap();
        assert_eq!(v.domain_len(), Some(0));
    }

    #[test]
    fn view_in_omega_game() {
        let g = Game::new(
            Population::Omega,
            ColorSpace::Int,
            VisibilityGraph::omega_complete(),
            InningFunction::OmegaDefault {
                default: 1,
                exceptions: BTreeMap::new(),
            },
        )
        .unwrap();
        let f = Coloring::omega_support(ColorSpace::Int, &[(2, ColorSpace::Int.from_i64(5))]);
        let v = view_of(&g, 1, &f).unwrap();
        assert!(!v.domain_contains(1));
        assert_eq!(v.get(2), Some(ColorSpace::Int.from_i64(5)));
        assert_eq!(v.get(99), Some(ColorSpace::Int.zero()));
    }

    #[test]
    fn mutate_examples() {
        let g = Game::simultaneous(3, ColorSpace::Mod(2), VisibilityGraph::complete(3)).unwrap();
        let f = Coloring::from_digits(ColorSpace::Mod(2), &[0, 1, 0]);
        let one = mutate_coloring(&g, &f, &[(1, Color::Mod(0))]).unwrap();
        assert_eq!(one, Coloring::from_digits(ColorSpace::Mod(2), &[0, 0, 0]));
        let two = mutate_coloring(&g, &f, &[(1, Color::Mod(0)), (2, Color::Mod(1))]).unwrap();
        assert_eq!(two, Coloring::from_digits(ColorSpace::Mod(2), &[0, 0, 1]));
        let same = mutate_coloring(&g, &f, &[(1, Color::Mod(1))]).unwrap();
        assert_eq!(same, f);
        assert_eq!(
            mutate_coloring(&g, &f, &[(1, Color::Mod(0)), (1, Color::Mod(1))]).unwrap_err(),
            HatError::DuplicateTarget
        );
        assert_eq!(
            mutate_coloring(&g, &f, &[(9, Color::Mod(0))]).unwrap_err(),
            HatError::UnknownPrisonerId(9)
        );
    }

    #[test]
    fn parse_game_round_trip() {
        let g = parse_game(
            r#"{"prisoners": 5, "colors": {"kind": "mod", "n": 2},
                "visibility": "complete", "innings": [1, 2, 2, 2, 2]}"#,
        )
        .unwrap();
        assert_eq!(g, g52());

        let o = parse_game(
            r#"{"prisoners": "omega", "colors": {"kind": "int"},
                "visibility": {"default": "complete"},
                "innings": {"default": 2, "exceptions": {"0": 1}}}"#,
        )
        .unwrap();
        assert_eq!(o, omega_hint_game());
    }

    #[test]
    fn parse_game_rejects_unknown_keys() {
        let err = parse_game(
            r#"{"prisoners": 2, "colors": {"kind": "mod", "n": 2},
                "visibility": "complete", "innings": [1, 1], "extra": 0}"#,
        )
        .unwrap_err();
        assert!(matches!(err, HatError::GameSpec(_)));
    }

    #[test]
    fn parse_coloring_both_forms() {
        let g = g52();
        assert_eq!(
            parse_coloring(&g, "1,0,1,1,0").unwrap(),
            Coloring::from_digits(ColorSpace::Mod(2), &[1, 0, 1, 1, 0])
        );
        let o = omega_hint_game();
        let c = parse_coloring(&o, "1=3, 2=7").unwrap();
        assert_eq!(c.get(1), ColorSpace::Int.from_i64(3));
        assert_eq!(c.get(2), ColorSpace::Int.from_i64(7));
        assert_eq!(c.get(50), ColorSpace::Int.zero());
        assert_eq!(parse_coloring(&o, "").unwrap(), Coloring::zero(&o));
    }

    #[test]
    fn nobody_sees_or_hears_themselves() {
        for g in [g52(), g52chain(), omega_hint_game()] {
            let probe: Vec<Prisoner> = match g.prisoners {
                Population::Finite(n) => (0..n).collect(),
                Population::Omega => vec![0, 1, 17],
            };
            for a in probe {
                assert!(!g.visibility.sees(a, a));
                assert!(!g.hearing_set(a).contains(a));
            }
        }
    }

    #[test]
    fn inning_sets_partition_prisoners() {
        for g in [g52(), g52chain()] {
            let s = derive_structure(&g);
            let n = g.n_finite().unwrap();
            for a in 0..n {
                let homes = s.inning_sets.iter().filter(|set| set.contains(a)).count();
                assert_eq!(homes, 1);
            }
            assert!(s.inning_sets.iter().all(|set| !set.is_empty()));
        }
        // ω: exceptions and a generic prisoner each live in exactly one set.
        let s = derive_structure(&omega_hint_game());
        for a in [0u64, 1, 99] {
            assert_eq!(
                s.inning_sets.iter().filter(|set| set.contains(a)).count(),
                1
            );
        }
    }

    proptest! {
        // S2 and S3 together mean {V(a), H(a)} partitions everyone else.
        #[test]
        fn s2_s3_iff_partition(mask in 0u32..64, pattern in 0usize..6) {
            let innings = [
                vec![1, 2, 2],
                vec![1, 2, 3],
                vec![1, 1, 2],
                vec![2, 1, 1],
                vec![1, 3, 2],
                vec![2, 1, 2],
            ][pattern].clone();
            let mut lists = vec![vec![], vec![], vec![]];
            let mut bit = 0;
            for a in 0..3u64 {
                for b in 0..3u64 {
                    if a != b {
                        if mask & (1 << bit) != 0 {
                            lists[a as usize].push(b);
                        }
                        bit += 1;
                    }
                }
            }
            let g = Game::new(
                Population::Finite(3),
                ColorSpace::Mod(2),
                VisibilityGraph::from_lists(lists),
                InningFunction::Finite(innings),
            ).unwrap();
            let p = condition_profile(&g).unwrap();
            let partitions = (0..3u64).all(|a| {
                (0..3u64).filter(|&b| b != a).all(|b| {
                    let sees = g.visibility.sees(a, b);
                    let hears = g.hears(a, b);
                    (sees || hears) && !(sees && hears)
                })
            });
            prop_assert_eq!(p.s2 && p.s3, partitions);
        }

        // Applying a mutation twice with the original value round-trips.
        #[test]
        fn mutate_is_involutive(vals in proptest::collection::vec(0u32..3, 4), p in 0u64..4, c in 0u32..3) {
            let g = Game::simultaneous(4, ColorSpace::Mod(3), VisibilityGraph::complete(4)).unwrap();
            let f = Coloring::from_digits(ColorSpace::Mod(3), &vals);
            let old = f.get(p);
            let once = mutate_coloring(&g, &f, &[(p, Color::Mod(c))]).unwrap();
            let back = mutate_coloring(&g, &once, &[(p, old)]).unwrap();
            prop_assert_eq!(back, f);
        }

        // Views only depend on the seen part of the coloring.
        #[test]
        fn views_agree_when_seen_parts_agree(
            fa in proptest::collection::vec(0u32..2, 5),
            fb in proptest::collection::vec(0u32..2, 5),
            a in 0u64..5,
        ) {
            let g = Game::new(
                Population::Finite(5),
                ColorSpace::Mod(2),
                VisibilityGraph::from_lists(
                    (0..5u64).map(|i| ((i + 1)..5).collect()).collect(),
                ),
                InningFunction::Finite(vec![1, 2, 3, 4, 5]),
            ).unwrap();
            let f = Coloring::from_digits(ColorSpace::Mod(2), &fa);
            let h = Coloring::from_digits(ColorSpace::Mod(2), &fb);
            let agree = ((a + 1)..5).all(|b| f.get(b) == h.get(b));
            if agree {
                prop_assert_eq!(view_of(&g, a, &f).unwrap(), view_of(&g, a, &h).unwrap());
            }
        }
    }
}
