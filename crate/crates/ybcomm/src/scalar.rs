//! The exact scalar abstraction shared by every algebraic routine.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};

pub type Q = BigRational;

/// An exact commutative ring in which units can be inverted.
///
/// `is_zero` must only return true for values that are exactly zero, so that
/// sparse containers never discard information.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_q(value: &Q) -> Self;

    fn inv(&self) -> Result<Self>;

    fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * other.inv()?)
    }

    fn from_i64(value: i64) -> Self {
        Self::from_q(&Q::from_integer(BigInt::from(value)))
    }

    fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for Q {
    fn from_q(value: &Q) -> Self {
        value.clone()
    }

    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            Err(domain("division by zero"))
        } else {
            Ok(self.recip())
        }
    }
}

pub fn q_int(value: i64) -> Q {
    Q::from_integer(BigInt::from(value))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Canonical "num/den" text, always with an explicit denominator.
pub fn q_to_string(value: &Q) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn q_parse(text: &str) -> Result<Q> {
    let text = text.trim();
    let bad = || crate::error::Error::Config(format!("malformed rational `{text}`"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

pub fn q_is_unit_modulus(value: &Q) -> bool {
    value.abs().is_one()
}

/// Product of `f(a)` over an iterator, starting from one.
pub fn product<S: Scalar, I: IntoIterator<Item = S>>(items: I) -> S {
    items.into_iter().fold(S::one(), |acc, x| acc * x)
}

/// Double product `Π_{a∈xs} Π_{b∈ys} f(a, b)` in the overline notation.
pub fn prod2<S: Scalar>(xs: &[S], ys: &[S], f: impl Fn(&S, &S) -> S) -> S {
    let mut acc = S::one();
    for a in xs {
        for b in ys {
            acc = acc * f(a, b);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        assert_eq!(q_to_string(&q_frac(9, 2)), "9/2");
        assert_eq!(q_to_string(&q_int(-3)), "-3/1");
        assert_eq!(q_parse("-6/4").unwrap(), q_frac(-3, 2));
        assert_eq!(q_parse("7").unwrap(), q_int(7));
        assert!(q_parse("1/0").is_err());
        assert!(q_parse("x").is_err());
    }

    #[test]
    fn inverse_of_zero_is_domain_error() {
        assert!(Q::zero().inv().is_err());
        assert_eq!(q_int(4).inv().unwrap(), q_frac(1, 4));
    }

    #[test]
    fn lowest_terms_positive_denominator() {
        let x = q_frac(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
    }
}
