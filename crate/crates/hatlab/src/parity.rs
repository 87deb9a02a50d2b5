//! Parity functions and encodings.
//!
//! A parity function is the infinite surrogate for "the sum of all hats":
//! a map φ from colorings to colors with
//! φ(f[x|g1]) − φ(f[x|g2]) = g2 − g1 for every coloring f, coordinate x and
//! pair of colors. On finite domains (and on the finite-support family over
//! ω) the negated sum realizes it; a robust finite-error predictor yields
//! another realization. This module also houses the natural-number tupler
//! that backs the infinite-color hint encoding.

use crate::color::{Color, ColorSpace};
use crate::error::{HatError, Result};
use crate::game::{Coloring, Game, Prisoner};
use crate::sample::SeededSampler;
use crate::strategy::Predictor;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Which coloring family a parity function is defined over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityDomain {
    /// Total colorings of `0..slots`.
    Slots(u64),
    /// Finite-support colorings of ω over the zero base.
    OmegaFiniteSupport,
}

#[derive(Clone, Debug)]
enum ParityKind {
    /// φ(f) = −Σ f(x), over the slots or the support.
    NegatedSum,
    /// φ(f) = +Σ f(x). Violates the defining equation whenever g1 ≠ g2;
    /// kept as a fixture for the equation checker.
    PlainSum,
    /// φ(f) = Σ over disagreement points of P(f)(a) − f(a).
    FromRobustFep {
        game: Arc<Game>,
        predictor: Arc<Predictor>,
    },
}

/// A concrete parity function: a domain descriptor plus an evaluator.
#[derive(Clone, Debug)]
pub struct ParityFunction {
    pub space: ColorSpace,
    pub domain: ParityDomain,
    kind: ParityKind,
}

/// The negated-sum parity function. The paper's defining equation produces
/// g2 − g1, so the finite realization carries a minus sign.
pub fn finite_parity(space: ColorSpace, domain: ParityDomain) -> ParityFunction {
    ParityFunction {
        space,
        domain,
        kind: ParityKind::NegatedSum,
    }
}

impl ParityFunction {
    /// The plain (wrong-sign) sum; fails the defining equation and exists
    /// so the checker has something to refute.
    pub fn plain_sum(space: ColorSpace, domain: ParityDomain) -> ParityFunction {
        ParityFunction {
            space,
            domain,
            kind: ParityKind::PlainSum,
        }
    }

    pub fn provenance(&self) -> &'static str {
        match self.kind {
            ParityKind::NegatedSum => "negative-sum",
            ParityKind::PlainSum => "plain-sum",
            ParityKind::FromRobustFep { .. } => "from-robust-fep",
        }
    }

    /// φ(f). The coloring must belong to the declared domain.
    pub fn eval(&self, f: &Coloring) -> Result<Color> {
        self.check_domain(f)?;
        match &self.kind {
            ParityKind::NegatedSum => Ok(self.space.neg(&self.raw_sum(f))),
            ParityKind::PlainSum => Ok(self.raw_sum(f)),
            ParityKind::FromRobustFep { game, predictor } => {
                let record = crate::strategy::run_predictor(game, predictor, f)?;
                let mut acc = self.space.zero();
                for a in disagreement_points(f, &record.guesses)? {
                    let diff = self.space.sub(&record.guesses.get(a), &f.get(a));
                    acc = self.space.add(&acc, &diff);
                }
                Ok(acc)
            }
        }
    }

    fn raw_sum(&self, f: &Coloring) -> Color {
        match f {
            Coloring::Finite(v) => self.space.sum(v.iter()),
            Coloring::Omega { except, .. } => self.space.sum(except.values()),
        }
    }

    fn check_domain(&self, f: &Coloring) -> Result<()> {
        let ok = match (self.domain, f) {
            (ParityDomain::Slots(w), Coloring::Finite(v)) => v.len() as u64 == w,
            (ParityDomain::OmegaFiniteSupport, Coloring::Omega { base, .. }) => base.is_zero(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(HatError::ParityDomainMismatch)
        }
    }
}

/// Prisoners where f and g disagree; errors out if that set is infinite.
fn disagreement_points(f: &Coloring, g: &Coloring) -> Result<Vec<Prisoner>> {
    match (f, g) {
        (Coloring::Finite(fv), Coloring::Finite(gv)) => Ok((0..fv.len() as u64)
            .filter(|&a| fv[a as usize] != gv[a as usize])
            .collect()),
        (
            Coloring::Omega {
                base: fb,
                except: fe,
            },
            Coloring::Omega {
                base: gb,
                except: ge,
            },
        ) => {
            if fb != gb {
                return Err(HatError::NotFiniteError);
            }
            let mut points: Vec<Prisoner> = fe.keys().chain(ge.keys()).copied().collect();
            points.sort_unstable();
            points.dedup();
            points.retain(|&a| f.get(a) != g.get(a));
            Ok(points)
        }
        _ => Err(HatError::NotFiniteError),
    }
}

/// How many sampled colorings the robustness / finite-error prechecks use.
const PRECHECK_TRIALS: u64 = 32;
const PRECHECK_SEED: u64 = 0;

/// Turn a robust finite-error predictor into a parity function:
/// φ(f) = Σ over disagreement points a of P(f)(a) − f(a).
///
/// Robustness and finite error are checked up front on a fixed seeded
/// sample; genuinely non-robust predictors are rejected.
pub fn parity_from_robust_fep(game: &Game, predictor: &Predictor) -> Result<ParityFunction> {
    if game.max_inning() != 1 {
        return Err(HatError::RequiresSimultaneous);
    }
    if !crate::evaluate::check_robust(game, predictor, PRECHECK_TRIALS, PRECHECK_SEED)? {
        return Err(HatError::NotRobust);
    }
    // Finite error on the sampled family: every disagreement set must be
    // finite (for ω this means the guesses stay in the zero =*-class).
    let mut sampler = SeededSampler::new(PRECHECK_SEED);
    for _ in 0..PRECHECK_TRIALS {
        let f = sample_domain_coloring(game, &mut sampler);
        let record = crate::strategy::run_predictor(game, predictor, &f)?;
        disagreement_points(&f, &record.guesses).map_err(|_| HatError::NotFiniteError)?;
    }
    let domain = match game.n_finite() {
        Some(n) => ParityDomain::Slots(n),
        None => ParityDomain::OmegaFiniteSupport,
    };
    Ok(ParityFunction {
        space: game.colors,
        domain,
        kind: ParityKind::FromRobustFep {
            game: Arc::new(game.clone()),
            predictor: Arc::new(predictor.clone()),
        },
    })
}

fn sample_domain_coloring(game: &Game, sampler: &mut SeededSampler) -> Coloring {
    match game.n_finite() {
        Some(n) => Coloring::Finite(
            (0..n)
                .map(|_| sampler.color(game.colors, SAMPLE_INT_RANGE))
                .collect(),
        ),
        None => sample_omega_coloring(game.colors, sampler),
    }
}

/// Support positions are drawn below this bound when sampling ω colorings.
pub const OMEGA_POSITION_RANGE: u64 = 64;
/// Largest sampled support size for ω colorings.
pub const OMEGA_SUPPORT_BOUND: u64 = 6;
const SAMPLE_INT_RANGE: u64 = 1000;

/// A finite-support ω coloring with seeded support and values.
pub fn sample_omega_coloring(space: ColorSpace, sampler: &mut SeededSampler) -> Coloring {
    let size = sampler.below(OMEGA_SUPPORT_BOUND + 1);
    let mut except = BTreeMap::new();
    for _ in 0..size {
        let pos = sampler.below(OMEGA_POSITION_RANGE);
        let value = sampler.color(space, SAMPLE_INT_RANGE);
        if !value.is_zero() {
            except.insert(pos, value);
        }
    }
    Coloring::Omega {
        base: space.zero(),
        except,
    }
}

/// Outcome of sampling the parity defining equation.
#[derive(Clone, Debug, Serialize)]
pub struct ParityCheckReport {
    pub passed: u64,
    pub failures: Vec<ParityViolation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParityViolation {
    pub coloring: Coloring,
    pub coordinate: Prisoner,
    pub g1: Color,
    pub g2: Color,
    pub lhs: Color,
    pub rhs: Color,
}

/// Sample (f, x, g1, g2) and assert φ(f[x|g1]) − φ(f[x|g2]) = g2 − g1.
pub fn check_parity_equation(
    phi: &ParityFunction,
    trials: u64,
    seed: u64,
) -> Result<ParityCheckReport> {
    let mut sampler = SeededSampler::new(seed);
    let mut passed = 0;
    let mut failures = Vec::new();
    for _ in 0..trials.max(1) {
        let (f, x) = match phi.domain {
            ParityDomain::Slots(w) => {
                let f = Coloring::Finite(
                    (0..w)
                        .map(|_| sampler.signed_color(phi.space, 1000))
                        .collect(),
                );
                (f, sampler.below(w))
            }
            ParityDomain::OmegaFiniteSupport => {
                let f = sample_omega_coloring(phi.space, &mut sampler);
                (f, sampler.below(OMEGA_POSITION_RANGE))
            }
        };
        let g1 = sampler.signed_color(phi.space, 1000);
        let g2 = sampler.signed_color(phi.space, 1000);
        let f1 = set_coordinate(&f, x, &g1);
        let f2 = set_coordinate(&f, x, &g2);
        let lhs = phi.space.sub(&phi.eval(&f1)?, &phi.eval(&f2)?);
        let rhs = phi.space.sub(&g2, &g1);
        if lhs == rhs {
            passed += 1;
        } else {
            failures.push(ParityViolation {
                coloring: f,
                coordinate: x,
                g1,
                g2,
                lhs,
                rhs,
            });
        }
    }
    Ok(ParityCheckReport { passed, failures })
}

fn set_coordinate(f: &Coloring, x: Prisoner, g: &Color) -> Coloring {
    let mut out = f.clone();
    match &mut out {
        Coloring::Finite(v) => v[x as usize] = g.clone(),
        Coloring::Omega { base, except } => {
            if g == base {
                except.remove(&x);
            } else {
                except.insert(x, g.clone());
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Natural-number tupling.
// ---------------------------------------------------------------------------

/// Bijection between ℕ^width and ℕ: the Cantor pairing
/// π(x, y) = (x + y)(x + y + 1)/2 + y iterated left-associated.
#[derive(Clone, Copy, Debug)]
pub struct Tupler {
    pub width: u32,
}

/// Build the width-k tupler; width 1 is the identity.
pub fn nat_tupler(width: u32) -> Tupler {
    assert!(width >= 1, "tupler width starts at 1");
    Tupler { width }
}

pub fn cantor_pair(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    (&s * (&s + BigUint::one())) / BigUint::from(2u8) + y
}

pub fn cantor_unpair(z: &BigUint) -> (BigUint, BigUint) {
    // w = floor((sqrt(8z + 1) - 1) / 2), t = w(w+1)/2, y = z - t, x = w - y.
    let w =
        ((z * BigUint::from(8u8) + BigUint::one()).sqrt() - BigUint::one()) / BigUint::from(2u8);
    let t = (&w * (&w + BigUint::one())) / BigUint::from(2u8);
    let y = z - t;
    let x = &w - &y;
    (x, y)
}

impl Tupler {
    pub fn encode(&self, tuple: &[BigUint]) -> BigUint {
        assert_eq!(tuple.len(), self.width as usize);
        let mut acc = tuple[0].clone();
        for t in &tuple[1..] {
            acc = cantor_pair(&acc, t);
        }
        acc
    }

    pub fn decode(&self, value: &BigUint) -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); self.width as usize];
        let mut acc = value.clone();
        for i in (1..self.width as usize).rev() {
            let (head, last) = cantor_unpair(&acc);
            out[i] = last;
            acc = head;
        }
        out[0] = acc;
        out
    }
}

/// The zigzag bijection ℤ → ℕ: 2n for n ≥ 0, −2n − 1 otherwise.
pub fn zigzag(v: &BigInt) -> BigUint {
    if v.is_negative() {
        ((v * -2i32) - 1i32).to_biguint().unwrap()
    } else {
        (v * 2i32).to_biguint().unwrap()
    }
}

/// Inverse of [`zigzag`].
pub fn unzigzag(v: &BigUint) -> BigInt {
    let v = BigInt::from(v.clone());
    if (&v % 2i32) == BigInt::zero() {
        v / 2
    } else {
        -(v + 1i32) / 2
    }
}
