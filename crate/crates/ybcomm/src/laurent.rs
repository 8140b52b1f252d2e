//! Laurent series in ε with absolute-precision tracking.
//!
//! Used to take limits of rational expressions at points where individual
//! summands have poles: perturb the parameters by multiples of ε, evaluate
//! exactly, and read off the ε⁰ coefficient.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::scalar::{Scalar, Q};

pub const DEFAULT_RELATIVE_PRECISION: i64 = 16;

/// `ε^val · Σ coeffs[k] ε^k + O(ε^prec)`; `prec == None` means exact.
///
/// `coeffs[0]` is nonzero unless `coeffs` is empty. When inexact, no stored
/// coefficient reaches the precision. `rel` is the relative precision used
/// when a non-monomial exact value has to be inverted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    val: i64,
    coeffs: Vec<Q>,
    prec: Option<i64>,
    rel: i64,
}

impl Laurent {
    pub fn exact(val: i64, coeffs: Vec<Q>) -> Self {
        Self::build(val, coeffs, None, 0)
    }

    /// `value + slope·ε`, inverting with relative precision `rel`.
    pub fn variable(value: Q, slope: Q, rel: i64) -> Self {
        Self::build(0, vec![value, slope], None, rel)
    }

    /// `Σ coeffs[k] ε^k + O(ε^prec)`.
    pub fn truncated(coeffs: Vec<Q>, prec: i64) -> Self {
        Self::build(0, coeffs, Some(prec), 0)
    }

    fn build(mut val: i64, mut coeffs: Vec<Q>, prec: Option<i64>, rel: i64) -> Self {
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..lead);
        val += lead as i64;
        if let Some(p) = prec {
            let keep = (p - val).max(0) as usize;
            coeffs.truncate(keep);
        }
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            val = prec.unwrap_or(0);
        }
        Laurent { val, coeffs, prec, rel }
    }

    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Coefficient of ε^k; errors if it lies beyond the known precision.
    pub fn coefficient(&self, k: i64) -> Result<Q> {
        if let Some(p) = self.prec {
            if k >= p {
                return Err(domain(format!("coefficient of ε^{k} lost (precision {p})")));
            }
        }
        let idx = k - self.val;
        if idx < 0 || self.coeffs.is_empty() {
            return Ok(Q::zero());
        }
        Ok(self.coeffs.get(idx as usize).cloned().unwrap_or_else(Q::zero))
    }

    fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }
}

impl Add for Laurent {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let prec = Self::min_prec(self.prec, rhs.prec);
        let rel = self.rel.max(rhs.rel);
        if self.coeffs.is_empty() {
            return Self::build(rhs.val, rhs.coeffs, prec, rel);
        }
        if rhs.coeffs.is_empty() {
            return Self::build(self.val, self.coeffs, prec, rel);
        }
        let val = self.val.min(rhs.val);
        let end = (self.val + self.coeffs.len() as i64).max(rhs.val + rhs.coeffs.len() as i64);
        let mut coeffs = vec![Q::zero(); (end - val) as usize];
        for (k, c) in self.coeffs.into_iter().enumerate() {
            coeffs[(self.val - val) as usize + k] += c;
        }
        for (k, c) in rhs.coeffs.into_iter().enumerate() {
            coeffs[(rhs.val - val) as usize + k] += c;
        }
        Self::build(val, coeffs, prec, rel)
    }
}

impl Sub for Laurent {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Laurent {
    type Output = Self;
    fn neg(self) -> Self {
        Laurent { coeffs: self.coeffs.into_iter().map(|c| -c).collect(), ..self }
    }
}

impl Mul for Laurent {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let rel = self.rel.max(rhs.rel);
        let prec = Self::min_prec(self.prec.map(|p| p + rhs.val), rhs.prec.map(|p| p + self.val));
        let val = self.val + rhs.val;
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::build(val, Vec::new(), prec, rel);
        }
        let mut len = self.coeffs.len() + rhs.coeffs.len() - 1;
        if let Some(p) = prec {
            len = len.min((p - val).max(0) as usize);
        }
        let mut coeffs = vec![Q::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        Self::build(val, coeffs, prec, rel)
    }
}

impl Zero for Laurent {
    fn zero() -> Self {
        Laurent { val: 0, coeffs: Vec::new(), prec: None, rel: 0 }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_none()
    }
}

impl One for Laurent {
    fn one() -> Self {
        Self::exact(0, vec![Q::one()])
    }
}

impl Scalar for Laurent {
    fn from_q(value: &Q) -> Self {
        Self::exact(0, vec![value.clone()])
    }

    fn inv(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(domain("inverse of a series with no known nonzero coefficient"));
        }
        let relative = match self.prec {
            None if self.coeffs.len() == 1 => {
                return Ok(Self::build(-self.val, vec![self.coeffs[0].recip()], None, self.rel));
            }
            None if self.rel > 0 => self.rel,
            None => DEFAULT_RELATIVE_PRECISION,
            Some(p) => p - self.val,
        };
        let inv0 = self.coeffs[0].recip();
        let mut out: Vec<Q> = vec![inv0.clone()];
        for k in 1..relative as usize {
            let mut acc = Q::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out.push(-acc * &inv0);
        }
        Ok(Self::build(-self.val, out, Some(relative - self.val), self.rel))
    }
}
