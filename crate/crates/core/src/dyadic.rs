//! Exact arithmetic in the ring `Z[1/2]`.
//!
//! A [`Dyadic`] is `a / 2^k` kept in lowest terms: `k` is the smallest
//! 2-denominator exponent (sde) of the value, and zero is stored as `0 / 2^0`.
//! Nothing here touches floating point except the explicit conversions at the
//! bottom of the file.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn zero() -> Dyadic {
        Dyadic {
            num: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Dyadic {
        Dyadic::from_int(1)
    }

    pub fn from_int(a: i64) -> Dyadic {
        Dyadic {
            num: BigInt::from(a),
            exp: 0,
        }
    }

    /// `a / 2^k` reduced to lowest terms.
    pub fn new(a: impl Into<BigInt>, k: u32) -> Dyadic {
        reduce(a.into(), k)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    /// Denominator exponent, which equals `sde_2` of the value.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn sde(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Numerator after rescaling to denominator `2^k` (`k >= self.exponent()`).
    pub fn numerator_at(&self, k: u32) -> BigInt {
        assert!(k >= self.exp, "cannot rescale {self} down to 2^{k}");
        &self.num << (k - self.exp)
    }

    /// `value / 2`.
    pub fn half(&self) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        reduce(self.num.clone(), self.exp + 1)
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.num.to_f64().unwrap_or(f64::NAN);
        a / 2f64.powi(self.exp as i32)
    }

    /// Snaps `x` to the nearest `a / 2^k` with `k <= max_exp`, if one lies
    /// within `tol`.
    pub fn from_f64_snap(x: f64, max_exp: u32, tol: f64) -> Option<Dyadic> {
        if !x.is_finite() {
            return None;
        }
        let scale = 2f64.powi(max_exp as i32);
        let a = (x * scale).round();
        if (a / scale - x).abs() > tol || a.abs() > 2f64.powi(62) {
            return None;
        }
        Some(Dyadic::new(a as i64, max_exp))
    }
}

/// Normalizes `a / 2^k`; negative `k` is rejected.
pub fn sde2_reduce(a: impl Into<BigInt>, k: i64) -> Result<Dyadic> {
    if k < 0 {
        return Err(Error::NegativeExponent(k));
    }
    Ok(reduce(a.into(), k as u32))
}

fn reduce(a: BigInt, k: u32) -> Dyadic {
    if a.is_zero() {
        return Dyadic::zero();
    }
    let twos = a.trailing_zeros().unwrap_or(0).min(k as u64) as u32;
    Dyadic {
        num: a >> twos,
        exp: k - twos,
    }
}

pub fn dyadic_add(v1: &Dyadic, v2: &Dyadic) -> Dyadic {
    let k = v1.exp.max(v2.exp);
    reduce(v1.numerator_at(k) + v2.numerator_at(k), k)
}

/// `(s1 v1 + s2 v2 + s3 v3 + s4 v4) / 2` for signs `s_i` in `{+1, -1}`.
pub fn dyadic_half_sum4(v: [&Dyadic; 4], signs: [i8; 4]) -> Dyadic {
    let k = v.iter().map(|d| d.exp).max().unwrap_or(0);
    let mut acc = BigInt::zero();
    for (d, s) in v.iter().zip(signs) {
        let term = d.numerator_at(k);
        if s < 0 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    reduce(acc, k + 1)
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        dyadic_add(self, rhs)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        dyadic_add(&self, &rhs)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        dyadic_add(self, &-rhs)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -&self.num,
            exp: self.exp,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        reduce(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let k = self.exp.max(other.exp);
        self.numerator_at(k).cmp(&other.numerator_at(k))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl From<i64> for Dyadic {
    fn from(a: i64) -> Self {
        Dyadic::from_int(a)
    }
}

/// Serialized as the pair `[a, k]`. Numerators beyond `i64` are written as
/// decimal strings.
impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        match self.num.to_i64() {
            Some(a) => t.serialize_element(&a)?,
            None => t.serialize_element(&self.num.to_string())?,
        }
        t.serialize_element(&self.exp)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Dyadic, D::Error> {
        struct PairVisitor;

        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Num {
            Int(i64),
            Text(String),
        }

        impl<'de> Visitor<'de> for PairVisitor {
            type Value = Dyadic;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a pair [a, k]")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Dyadic, A::Error> {
                let a: Num = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let k: i64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                let a = match a {
                    Num::Int(v) => BigInt::from(v),
                    Num::Text(s) => s.parse::<BigInt>().map_err(de::Error::custom)?,
                };
                sde2_reduce(a, k).map_err(de::Error::custom)
            }
        }

        d.deserialize_tuple(2, PairVisitor)
    }
}

/// Odd part check used by tests: `a` is odd or the value is an integer.
pub fn is_normalized(d: &Dyadic) -> bool {
    d.exp == 0 || d.num.is_odd()
}
