//! Exact truth values in `[0, 1]` and the standard Gödel algebra.
//!
//! Truth values are canonical non-negative fractions. Values whose numerator
//! and denominator fit in a `u64` are stored inline; anything larger falls
//! back to arbitrary-precision integers. Because the representation is
//! canonical, derived equality and hashing are exact.
//!
//! The Gödel operations never create new values: the t-norm and join select
//! one of their inputs, the residuum returns `1` or its second argument and
//! `delta` returns `0` or `1`. Any finite set of values containing `0` and
//! `1` is therefore closed under all four operations.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Errors produced while building a [`TruthValue`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("value `{0}` lies outside [0,1]")]
    OutOfRange(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small { num: u64, den: u64 },
    Big(Arc<(BigUint, BigUint)>),
}

/// An exact rational truth degree in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthValue(Repr);

impl TruthValue {
    pub const ZERO: TruthValue = TruthValue(Repr::Small { num: 0, den: 1 });
    pub const ONE: TruthValue = TruthValue(Repr::Small { num: 1, den: 1 });

    /// Builds `num/den`, reducing to lowest terms.
    pub fn new(num: u64, den: u64) -> Result<Self, ValueError> {
        if den == 0 {
            return Err(ValueError::ZeroDenominator(format!("{num}/{den}")));
        }
        if num > den {
            return Err(ValueError::OutOfRange(format!("{num}/{den}")));
        }
        let g = num.gcd(&den);
        Ok(TruthValue(Repr::Small {
            num: num / g,
            den: den / g,
        }))
    }

    /// Builds a value from arbitrary-precision parts, reducing to lowest terms.
    pub fn from_big(num: BigUint, den: BigUint) -> Result<Self, ValueError> {
        if den.is_zero() {
            return Err(ValueError::ZeroDenominator(format!("{num}/{den}")));
        }
        if num > den {
            return Err(ValueError::OutOfRange(format!("{num}/{den}")));
        }
        let g = num.gcd(&den);
        let (num, den) = (num / &g, den / &g);
        match (num.to_u64(), den.to_u64()) {
            (Some(n), Some(d)) => Ok(TruthValue(Repr::Small { num: n, den: d })),
            _ => Ok(TruthValue(Repr::Big(Arc::new((num, den))))),
        }
    }

    /// Returns the value of `true` as `1` and `false` as `0`.
    pub fn from_bool(b: bool) -> Self {
        if b {
            Self::ONE
        } else {
            Self::ZERO
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    /// Numerator and denominator in lowest terms.
    pub fn parts(&self) -> (BigUint, BigUint) {
        match &self.0 {
            Repr::Small { num, den } => (BigUint::from(*num), BigUint::from(*den)),
            Repr::Big(p) => (p.0.clone(), p.1.clone()),
        }
    }

    /// The midpoint `(self + other) / 2`, used to refine finite chains.
    pub fn midpoint(&self, other: &TruthValue) -> TruthValue {
        let (a, b) = self.parts();
        let (c, d) = other.parts();
        let num = a * &d + c * &b;
        let den = b * d * BigUint::from(2u8);
        // both inputs are in [0,1], so the midpoint is too
        TruthValue::from_big(num, den).expect("midpoint of unit values")
    }
}

impl Ord for TruthValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                (*a as u128 * *d as u128).cmp(&(*c as u128 * *b as u128))
            }
            _ => {
                let (a, b) = self.parts();
                let (c, d) = other.parts();
                (a * d).cmp(&(c * b))
            }
        }
    }
}

impl PartialOrd for TruthValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(p) if p.1.is_one() => write!(f, "{}", p.0),
            Repr::Big(p) => write!(f, "{}/{}", p.0, p.1),
        }
    }
}

impl fmt::Debug for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for TruthValue {
    type Err = ValueError;

    /// Parses `n/d` or an integer `n`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let digits = |x: &str| !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit());
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        if !digits(n) || !digits(d) {
            return Err(ValueError::Malformed(s.to_string()));
        }
        let num: BigUint = n
            .parse()
            .map_err(|_| ValueError::Malformed(s.to_string()))?;
        let den: BigUint = d
            .parse()
            .map_err(|_| ValueError::Malformed(s.to_string()))?;
        if den.is_zero() {
            return Err(ValueError::ZeroDenominator(s.to_string()));
        }
        if num > den {
            return Err(ValueError::OutOfRange(s.to_string()));
        }
        TruthValue::from_big(num, den)
    }
}

impl serde::Serialize for TruthValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for TruthValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Gödel t-norm: `min(a, b)`.
pub fn tnorm(a: &TruthValue, b: &TruthValue) -> TruthValue {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Gödel residuum: `1` when `a <= b`, otherwise `b`.
pub fn residuum(a: &TruthValue, b: &TruthValue) -> TruthValue {
    if a <= b {
        TruthValue::ONE
    } else {
        b.clone()
    }
}

/// Baaz-Monteiro delta: `1` exactly at `1`, `0` elsewhere.
pub fn delta(a: &TruthValue) -> TruthValue {
    TruthValue::from_bool(a.is_one())
}

/// Lattice join: `max(a, b)`.
pub fn join(a: &TruthValue, b: &TruthValue) -> TruthValue {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> TruthValue {
        s.parse().unwrap()
    }

    fn chain() -> Vec<TruthValue> {
        ["0", "1/4", "1/3", "1/2", "3/4", "1"]
            .iter()
            .map(|s| v(s))
            .collect()
    }

    #[test]
    fn operation_examples() {
        assert_eq!(tnorm(&v("1/2"), &v("3/4")), v("1/2"));
        assert_eq!(tnorm(&v("1"), &v("2/3")), v("2/3"));
        assert_eq!(tnorm(&v("0"), &v("2/3")), v("0"));
        assert_eq!(residuum(&v("1/2"), &v("3/4")), v("1"));
        assert_eq!(residuum(&v("3/4"), &v("1/2")), v("1/2"));
        assert_eq!(delta(&v("1")), v("1"));
        assert_eq!(delta(&v("1/2")), v("0"));
        assert_eq!(delta(&v("0")), v("0"));
        assert_eq!(join(&v("1/2"), &v("3/4")), v("3/4"));
        for x in chain() {
            assert_eq!(residuum(&x, &x), TruthValue::ONE);
            assert_eq!(join(&TruthValue::ZERO, &x), x);
            assert_eq!(join(&x, &x), x);
        }
    }

    #[test]
    fn parsing_is_canonical() {
        assert_eq!(v("2/4"), v("1/2"));
        assert_eq!(v("0/7"), TruthValue::ZERO);
        assert_eq!(v("5/5"), TruthValue::ONE);
        assert_eq!(v("6/8").to_string(), "3/4");
        assert!(matches!(
            "3/2".parse::<TruthValue>(),
            Err(ValueError::OutOfRange(_))
        ));
        assert!(matches!(
            "1/0".parse::<TruthValue>(),
            Err(ValueError::ZeroDenominator(_))
        ));
        assert!(matches!(
            "-1/2".parse::<TruthValue>(),
            Err(ValueError::Malformed(_))
        ));
        assert!(matches!(
            "a".parse::<TruthValue>(),
            Err(ValueError::Malformed(_))
        ));
    }

    #[test]
    fn big_values_compare_exactly() {
        let big = v("123456789012345678901234567890/123456789012345678901234567891");
        assert!(big < TruthValue::ONE);
        assert!(big > v("99/100"));
        // reduces back to the inline representation
        let red = v("100000000000000000000000/200000000000000000000000");
        assert_eq!(red, v("1/2"));
        assert_eq!(
            big.to_string(),
            "123456789012345678901234567890/123456789012345678901234567891"
        );
    }

    #[test]
    fn residuation_and_negation() {
        let c = chain();
        for a in &c {
            let neg = residuum(a, &TruthValue::ZERO);
            assert_eq!(neg, TruthValue::from_bool(a.is_zero()));
            assert_eq!(tnorm(a, a), *a);
            for b in &c {
                for x in &c {
                    assert_eq!(tnorm(a, b) <= *x, *a <= residuum(b, x));
                }
            }
        }
    }

    #[test]
    fn finite_sets_are_closed() {
        let c = chain();
        for a in &c {
            assert!(c.contains(&delta(a)));
            for b in &c {
                assert!(c.contains(&tnorm(a, b)));
                assert!(c.contains(&residuum(a, b)));
                assert!(c.contains(&join(a, b)));
            }
        }
    }

    #[test]
    fn midpoints() {
        assert_eq!(v("1/3").midpoint(&v("1/2")), v("5/12"));
        assert_eq!(TruthValue::ZERO.midpoint(&TruthValue::ONE), v("1/2"));
    }
}
