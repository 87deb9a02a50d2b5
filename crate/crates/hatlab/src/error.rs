//! Error type shared by every module.

use crate::game::Prisoner;
use thiserror::Error;

/// Everything that can go wrong while validating games, building
/// predictors, evaluating, or searching.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HatError {
    #[error("prisoner {0} appears in its own visibility list")]
    LoopInVisibility(Prisoner),
    #[error("inning function is not surjective: inning {missing} is never used")]
    NonSurjectiveInnings { missing: u32 },
    #[error("a game needs at least 2 prisoners")]
    TooFewPrisoners,
    #[error("a game needs at least 2 colors")]
    TooFewColors,
    #[error("unknown prisoner id {0}")]
    UnknownPrisonerId(Prisoner),
    #[error("conditions S1-S6 are defined only for games with at least 2 innings")]
    InapplicableConditions,
    #[error("the same prisoner is targeted twice")]
    DuplicateTarget,
    #[error("predictor does not fit this game: {0}")]
    MismatchedPredictor(String),
    #[error("this construction needs complete visibility")]
    RequiresCompleteVisibility,
    #[error("this construction needs |A| = |K|")]
    RequiresSquareGame,
    #[error("this construction needs a simultaneous game (IN = 1)")]
    RequiresSimultaneous,
    #[error("this construction needs a multi-inning game (IN >= 2)")]
    RequiresMultiInning,
    #[error("this construction needs exactly 2 colors")]
    RequiresBinaryColors,
    #[error("this construction needs a finite prisoner set")]
    RequiresFiniteGame,
    #[error("{0:?} is not a directed cycle in the visibility graph")]
    NotACycle(Vec<Prisoner>),
    #[error("this construction needs conditions S1 and S2")]
    RequiresS1S2,
    #[error("this construction needs conditions S4, S5 and S6")]
    RequiresS4S5S6,
    #[error("this construction needs conditions S1 and S4")]
    RequiresS1S4,
    #[error("this construction needs the infinite color space")]
    RequiresIntColors,
    #[error("this construction needs the omega game with complete visibility and IN = 1")]
    RequiresOmegaCompleteSimultaneous,
    #[error("fill color is not one of the permitted subcolors")]
    FillOutsideSubcolors,
    #[error("parity function domain does not match the game")]
    ParityDomainMismatch,
    #[error("predictor is not robust")]
    NotRobust,
    #[error("predictor does not have finite error on this family")]
    NotFiniteError,
    #[error("state space too large (cap {0})")]
    SpaceTooLarge(u64),
    #[error("a sampled report cannot certify membership, only refute it")]
    SampledReportNotConclusive,
    #[error("visibility graph has a directed cycle")]
    GraphHasCycle,
    #[error("prisoner {0} sees prisoner {1}")]
    EdgePresent(Prisoner, Prisoner),
    #[error("digraph enumeration supports at most {0} nodes")]
    TooManyNodes(u64),
    #[error("unknown theorem check {0:?}")]
    UnknownTheorem(String),
    #[error("search budget exceeded")]
    BudgetExceeded,
    #[error("bad game description: {0}")]
    GameSpec(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, HatError>;
