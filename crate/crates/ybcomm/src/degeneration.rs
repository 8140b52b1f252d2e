//! Trigonometric → rational degeneration: the R-matrix jet and the ε-exponent count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::report::{Instance, VerificationReport};
use crate::rmatrix::{r_element, Coupling, RFlavor};
use crate::sample::{Assignment, Check, SamplePlan, SlotKind, Slots};
use crate::scalar::{q_frac, Q};
use crate::series::{truncated_exp, TruncatedSeries};

/// Every trigB element at u = e^{εx}, v = e^{εy}, q = e^{εh/2} vanishes at ε⁰ and has the rational element as its ε¹ coefficient.
pub fn degenerate_r_holds(rank: usize, order: usize, x: &Q, y: &Q, h: &Q) -> Result<bool> {
    let half = h * q_frac(1, 2);
    let c = Coupling::trig_with_inverse(truncated_exp(&half, order), truncated_exp(&-half.clone(), order));
    let (u, v) = (truncated_exp(x, order), truncated_exp(y, order));
    let rat = Coupling::rational(h.clone())?;
    let idx: Vec<[usize; 4]> = (0..rank.pow(4))
        .map(|m| [m % rank + 1, m / rank % rank + 1, m / rank.pow(2) % rank + 1, m / rank.pow(3) + 1])
        .collect();
    let ok = idx.par_iter().map(|&[i, j, k, l]| -> Result<bool> {
        let jet: TruncatedSeries = r_element(RFlavor::TrigB, rank, &c, &u, &v, i, j, k, l)?;
        let limit = r_element(RFlavor::Rational, rank, &rat, x, y, i, j, k, l)?;
        Ok(jet.coefficient(0) == Q::from_integer(0.into()) && jet.coefficient(1) == limit)
    });
    ok.try_reduce(|| true, |a, b| Ok(a && b))
}

pub fn check_degenerate_r(rank: usize, order: usize, plan: &SamplePlan) -> VerificationReport {
    let check = Check::new("r-matrix-degeneration", "trigonometric-to-rational-limit")
        .flavor(RFlavor::TrigB)
        .instance(Instance::rank(rank).detail(format!("order={order}")));
    if order < 2 {
        return check.skipped(plan, "jet order must be at least 2");
    }
    let slots = Slots::new().with("x", SlotKind::Spectral).with("y", SlotKind::Spectral).with("h", SlotKind::Scale);
    check.run(plan, &slots, |a: &Assignment| degenerate_r_holds(rank, order, a.get("x"), a.get("y"), a.get("h")))
}

/// Powers of ε on the two sides of the flipped GT relation under degeneration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentData {
    pub sizes: Vec<u64>,
    pub alpha: u64,
    pub beta: u64,
    pub gamma: u64,
}

impl ExponentData {
    /// `sizes[j-1] = |w̄_{I_j}|`.
    pub fn new(sizes: &[u64]) -> Self {
        let rank = sizes.len();
        let m = |j: usize| sizes[j - 1];
        let range = |a: usize, b: usize| (a..=b).map(m).sum::<u64>();
        let total: u64 = sizes.iter().sum();
        let alpha = total * (2..=rank).map(|j| (j as u64 - 1) * m(j)).sum::<u64>();
        let beta = total * (2..=rank).map(m).sum::<u64>();
        let mut gamma = 0;
        for j in 2..rank {
            gamma += range(j + 1, rank) * range(1, j - 1) + (j as u64 - 1) * m(j + 1) * m(j + 1);
        }
        for j in 1..rank {
            for k in j + 1..rank {
                gamma += (2 * j as u64 - 1) * m(k + 1) * m(j + 1);
            }
        }
        ExponentData { sizes: sizes.to_vec(), alpha, beta, gamma }
    }

    pub fn holds(&self) -> bool {
        self.alpha == self.beta + self.gamma
    }
}

pub fn exponent_identity(sizes: &[u64], plan: &SamplePlan) -> VerificationReport {
    let data = ExponentData::new(sizes);
    Check::new("exponent-identity", "alpha-equals-beta-plus-gamma")
        .instance(Instance::rank(sizes.len()).sizes(&sizes.iter().map(|&s| s as usize).collect::<Vec<_>>()))
        .outcome(
            plan,
            data.holds(),
            Some(format!("alpha={} beta={} gamma={}", data.alpha, data.beta, data.gamma)),
        )
}

/// The identity on `count` seeded size vectors with N ≤ `max_rank` and entries ≤ 6.
pub fn exponent_identity_random(count: usize, max_rank: usize, plan: &SamplePlan) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(plan.derive("exponent-identity").seed);
    let vectors: Vec<Vec<u64>> = (0..count)
        .map(|_| {
            let rank = rng.random_range(1..=max_rank.max(1));
            (0..rank).map(|_| rng.random_range(0..=6)).collect()
        })
        .collect();
    let failed = vectors.iter().find(|s| !ExponentData::new(s).holds());
    Check::new("exponent-identity", "alpha-equals-beta-plus-gamma")
        .instance(Instance::default().detail(format!("{count} random size vectors, N<={max_rank}")))
        .outcome(plan, failed.is_none(), failed.map(|s| format!("fails at sizes {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_int;

    #[test]
    fn jets_at_rank_three() {
        assert!(degenerate_r_holds(3, 2, &q_int(4), &q_frac(-7, 3), &q_frac(5, 2)).unwrap());
    }

    #[test]
    fn jet_of_diagonal_element() {
        let (x, y, h) = (q_int(2), q_int(9), q_int(3));
        let half = q_frac(3, 2);
        let c = Coupling::trig_with_inverse(truncated_exp(&half, 2), truncated_exp(&-half.clone(), 2));
        let e = r_element(RFlavor::TrigB, 2, &c, &truncated_exp(&x, 2), &truncated_exp(&y, 2), 1, 1, 1, 1).unwrap();
        assert_eq!(e.coefficient(0), q_int(0));
        assert_eq!(e.coefficient(1), x - y + h);
    }

    #[test]
    fn worked_exponents() {
        let d = ExponentData::new(&[1, 1, 1]);
        assert_eq!((d.alpha, d.beta, d.gamma), (9, 6, 3));
        let z = ExponentData::new(&[0, 0, 0]);
        assert_eq!((z.alpha, z.beta, z.gamma), (0, 0, 0));
    }

    #[test]
    fn random_exponents() {
        assert!(exponent_identity_random(200, 6, &SamplePlan::new(3, 1)).passed());
    }
}
