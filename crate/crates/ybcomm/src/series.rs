//! Power series in ε truncated at a fixed order.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::scalar::{Scalar, Q};

/// An element of Q[ε]/(ε^{order+1}).
///
/// Constants built through `Zero`, `One` or `Scalar::from_q` carry no order of
/// their own and adopt the order of whatever they are combined with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Q>,
    order: Option<usize>,
}

impl TruncatedSeries {
    pub fn new(mut coeffs: Vec<Q>, order: usize) -> Self {
        coeffs.truncate(order + 1);
        Self::normalized(coeffs, Some(order))
    }

    pub fn constant(value: Q) -> Self {
        Self::normalized(vec![value], None)
    }

    fn normalized(mut coeffs: Vec<Q>, order: Option<usize>) -> Self {
        if let Some(o) = order {
            coeffs.truncate(o + 1);
        }
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        TruncatedSeries { coeffs, order }
    }

    pub fn order(&self) -> Option<usize> {
        self.order
    }

    pub fn coefficient(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficients 0..=order, zero padded.
    pub fn coefficients(&self) -> Vec<Q> {
        let len = self.order.map_or(self.coeffs.len(), |o| o + 1);
        (0..len).map(|k| self.coefficient(k)).collect()
    }

    fn joint_order(&self, other: &Self) -> Option<usize> {
        match (self.order, other.order) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// Σ_{k ≤ order} x^k/k! ε^k
pub fn truncated_exp(x: &Q, order: usize) -> TruncatedSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut term = Q::one();
    for k in 0..=order {
        if k > 0 {
            term = term * x / Q::from_integer(k.into());
        }
        coeffs.push(term.clone());
    }
    TruncatedSeries::new(coeffs, order)
}

impl Add for TruncatedSeries {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let order = self.joint_order(&rhs);
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|k| self.coefficient(k) + rhs.coefficient(k)).collect();
        Self::normalized(coeffs, order)
    }
}

impl Sub for TruncatedSeries {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for TruncatedSeries {
    type Output = Self;
    fn neg(self) -> Self {
        TruncatedSeries { coeffs: self.coeffs.into_iter().map(|c| -c).collect(), order: self.order }
    }
}

impl Mul for TruncatedSeries {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let order = self.joint_order(&rhs);
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::normalized(Vec::new(), order);
        }
        let mut len = self.coeffs.len() + rhs.coeffs.len() - 1;
        if let Some(o) = order {
            len = len.min(o + 1);
        }
        let mut coeffs = vec![Q::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j < len {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self::normalized(coeffs, order)
    }
}

impl Zero for TruncatedSeries {
    fn zero() -> Self {
        TruncatedSeries { coeffs: Vec::new(), order: None }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for TruncatedSeries {
    fn one() -> Self {
        Self::constant(Q::one())
    }
}

impl Scalar for TruncatedSeries {
    fn from_q(value: &Q) -> Self {
        Self::constant(value.clone())
    }

    fn inv(&self) -> Result<Self> {
        let c0 = self.coefficient(0);
        if c0.is_zero() {
            return Err(domain("truncated series with zero constant term is not invertible"));
        }
        let order = match self.order {
            Some(o) => o,
            None if self.coeffs.len() <= 1 => return Ok(Self::constant(c0.recip())),
            None => return Err(domain("inverse of an untruncated polynomial needs an order")),
        };
        let inv0 = c0.recip();
        let mut out: Vec<Q> = vec![inv0.clone()];
        for k in 1..=order {
            let mut acc = Q::zero();
            for j in 1..=k {
                acc += self.coefficient(j) * &out[k - j];
            }
            out.push(-acc * &inv0);
        }
        Ok(Self::new(out, order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_frac, q_int};

    #[test]
    fn exp_jets() {
        let x = q_int(3);
        assert_eq!(truncated_exp(&x, 0).coefficients(), vec![q_int(1)]);
        assert_eq!(truncated_exp(&x, 2).coefficients(), vec![q_int(1), q_int(3), q_frac(9, 2)]);
        let prod = truncated_exp(&x, 2) * truncated_exp(&-x, 2);
        assert_eq!(prod.coefficients(), vec![q_int(1), q_int(0), q_int(0)]);
    }

    #[test]
    fn inverse_matches_exp_of_negative() {
        let x = q_frac(-7, 5);
        let e = truncated_exp(&x, 4);
        assert_eq!(e.inv().unwrap(), truncated_exp(&-x, 4));
    }

    #[test]
    fn constants_adopt_order() {
        let s = TruncatedSeries::new(vec![q_int(1), q_int(2), q_int(3)], 1);
        let t = s * TruncatedSeries::from_q(&q_int(5));
        assert_eq!(t.coefficients(), vec![q_int(5), q_int(10)]);
        assert_eq!(t.order(), Some(1));
    }
}
