//! Color spaces and color values.
//!
//! Two spaces are supported: the cyclic group `mod(n)` with n >= 2, and the
//! additive integers `int`. Both are abelian groups, which is all the hint
//! constructions need. Integer colors use arbitrary precision because the
//! tuple encodings grow far past machine words.

use crate::error::{HatError, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;

/// The color set together with its group structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColorSpace {
    /// Residues 0..n under addition mod n (n >= 2).
    Mod(u32),
    /// The integers under addition.
    Int,
}

/// One color value. `Mod` values are residues already reduced mod n.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    Mod(u32),
    Int(BigInt),
}

impl ColorSpace {
    pub fn zero(&self) -> Color {
        match self {
            ColorSpace::Mod(_) => Color::Mod(0),
            ColorSpace::Int => Color::Int(BigInt::zero()),
        }
    }

    /// Number of colors, or `None` for the infinite space.
    pub fn count(&self) -> Option<u64> {
        match self {
            ColorSpace::Mod(n) => Some(u64::from(*n)),
            ColorSpace::Int => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.count().is_some()
    }

    pub fn contains(&self, c: &Color) -> bool {
        match (self, c) {
            (ColorSpace::Mod(n), Color::Mod(r)) => r < n,
            (ColorSpace::Int, Color::Int(_)) => true,
            _ => false,
        }
    }

    pub fn add(&self, a: &Color, b: &Color) -> Color {
        match (self, a, b) {
            (ColorSpace::Mod(n), Color::Mod(x), Color::Mod(y)) => {
                Color::Mod(((u64::from(*x) + u64::from(*y)) % u64::from(*n)) as u32)
            }
            (ColorSpace::Int, Color::Int(x), Color::Int(y)) => Color::Int(x + y),
            _ => panic!("color space mismatch in add"),
        }
    }

    pub fn neg(&self, a: &Color) -> Color {
        match (self, a) {
            (ColorSpace::Mod(n), Color::Mod(x)) => Color::Mod(if *x == 0 { 0 } else { n - x }),
            (ColorSpace::Int, Color::Int(x)) => Color::Int(-x),
            _ => panic!("color space mismatch in neg"),
        }
    }

    pub fn sub(&self, a: &Color, b: &Color) -> Color {
        self.add(a, &self.neg(b))
    }

    /// Sum of an iterator of colors; the identity when empty.
    pub fn sum<'a, I: IntoIterator<Item = &'a Color>>(&self, it: I) -> Color {
        it.into_iter().fold(self.zero(), |acc, c| self.add(&acc, c))
    }

    /// The color with residue (or integer value) `v mod n` / `v`.
    pub fn from_u64(&self, v: u64) -> Color {
        match self {
            ColorSpace::Mod(n) => Color::Mod((v % u64::from(*n)) as u32),
            ColorSpace::Int => Color::Int(BigInt::from(v)),
        }
    }

    pub fn from_i64(&self, v: i64) -> Color {
        match self {
            ColorSpace::Mod(n) => {
                let n = i64::from(*n);
                Color::Mod(v.rem_euclid(n) as u32)
            }
            ColorSpace::Int => Color::Int(BigInt::from(v)),
        }
    }

    /// All colors of a finite space in ascending order.
    pub fn iter_colors(&self) -> impl Iterator<Item = Color> {
        let n = match self {
            ColorSpace::Mod(n) => *n,
            ColorSpace::Int => panic!("cannot enumerate the infinite color space"),
        };
        (0..n).map(Color::Mod)
    }

    /// Parse a color from its text form (`3`, `-12`).
    pub fn parse_color(&self, s: &str) -> Result<Color> {
        match self {
            ColorSpace::Mod(n) => {
                let v: u32 = s
                    .parse()
                    .map_err(|_| HatError::GameSpec(format!("bad color {s:?}")))?;
                if v >= *n {
                    return Err(HatError::GameSpec(format!("color {v} not below {n}")));
                }
                Ok(Color::Mod(v))
            }
            ColorSpace::Int => {
                let v: BigInt = s
                    .parse()
                    .map_err(|_| HatError::GameSpec(format!("bad color {s:?}")))?;
                Ok(Color::Int(v))
            }
        }
    }
}

impl Color {
    /// The residue of a mod-space color.
    pub fn residue(&self) -> u32 {
        match self {
            Color::Mod(r) => *r,
            Color::Int(_) => panic!("int color used where a residue was expected"),
        }
    }

    pub fn as_int(&self) -> &BigInt {
        match self {
            Color::Int(v) => v,
            Color::Mod(_) => panic!("mod color used where an integer was expected"),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Color::Mod(r) => *r == 0,
            Color::Int(v) => v.is_zero(),
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Mod(r) => write!(f, "{r}"),
            Color::Int(v) => write!(f, "{v}"),
        }
    }
}

// Mod colors serialize as JSON numbers, int colors as decimal strings so
// that arbitrary-precision values survive the trip exactly.
impl Serialize for Color {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Color::Mod(r) => s.serialize_u32(*r),
            Color::Int(v) => s.serialize_str(&v.to_string()),
        }
    }
}

impl Serialize for ColorSpace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ColorSpace::Mod(n) => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("kind", "mod")?;
                m.serialize_entry("n", n)?;
                m.end()
            }
            ColorSpace::Int => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("kind", "int")?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for ColorSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            kind: String,
            #[serde(default)]
            n: Option<u32>,
        }
        let raw = Raw::deserialize(d)?;
        match raw.kind.as_str() {
            "mod" => match raw.n {
                Some(n) => Ok(ColorSpace::Mod(n)),
                None => Err(serde::de::Error::custom("mod colors need \"n\"")),
            },
            "int" => match raw.n {
                None => Ok(ColorSpace::Int),
                Some(_) => Err(serde::de::Error::custom("int colors take no \"n\"")),
            },
            other => Err(serde::de::Error::custom(format!(
                "unknown color kind {other:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mod_arithmetic() {
        let s = ColorSpace::Mod(3);
        assert_eq!(s.add(&Color::Mod(2), &Color::Mod(2)), Color::Mod(1));
        assert_eq!(s.neg(&Color::Mod(1)), Color::Mod(2));
        assert_eq!(s.neg(&Color::Mod(0)), Color::Mod(0));
        assert_eq!(s.sub(&Color::Mod(0), &Color::Mod(1)), Color::Mod(2));
    }

    #[test]
    fn int_arithmetic() {
        let s = ColorSpace::Int;
        let a = s.from_i64(3);
        let b = s.from_i64(-5);
        assert_eq!(s.add(&a, &b), s.from_i64(-2));
        assert_eq!(s.neg(&b), s.from_i64(5));
    }

    #[test]
    fn space_json_round_trip() {
        for s in [ColorSpace::Mod(4), ColorSpace::Int] {
            let j = serde_json::to_string(&s).unwrap();
            let back: ColorSpace = serde_json::from_str(&j).unwrap();
            assert_eq!(s, back);
        }
        assert!(serde_json::from_str::<ColorSpace>(r#"{"kind":"mod"}"#).is_err());
        assert!(serde_json::from_str::<ColorSpace>(r#"{"kind":"int","n":3}"#).is_err());
        assert!(serde_json::from_str::<ColorSpace>(r#"{"kind":"mod","n":2,"x":1}"#).is_err());
    }

    fn arb_space() -> impl Strategy<Value = ColorSpace> {
        prop_oneof![(2u32..10).prop_map(ColorSpace::Mod), Just(ColorSpace::Int)]
    }

    proptest! {
        // Group laws, sampled: associativity, commutativity, identity, inverse.
        #[test]
        fn group_laws(s in arb_space(), vs in (-1000i64..1000, -1000i64..1000, -1000i64..1000)) {
            let (a, b, c) = (s.from_i64(vs.0), s.from_i64(vs.1), s.from_i64(vs.2));
            prop_assert_eq!(s.add(&s.add(&a, &b), &c), s.add(&a, &s.add(&b, &c)));
            prop_assert_eq!(s.add(&a, &b), s.add(&b, &a));
            prop_assert_eq!(s.add(&a, &s.zero()), a.clone());
            prop_assert_eq!(s.add(&s.neg(&a), &a), s.zero());
        }

        #[test]
        fn residues_stay_reduced(s in (2u32..10).prop_map(ColorSpace::Mod), v in -1000i64..1000) {
            prop_assert!(s.contains(&s.from_i64(v)));
        }
    }
}
