//! Set-partition sums and the multiple commutation relations for T_{N1}(ū¹)⋯T_{NN}(ū^N).

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::grid::{grid_h, grid_k};
use crate::monodromy::{MonodromyContext, OpWord, WordMatrix};
use crate::report::{Instance, VerificationReport};
use crate::rmatrix::{Coupling, RFlavor};
use crate::sample::{Assignment, Check, SamplePlan, Slots};
use crate::scalar::{prod2, Scalar, Q};
use crate::special::{ik_determinant, weight_w, ColorWord};

/// A cardinality-preserving redistribution {ū¹,…,ū^N} ↦ {v̄¹,…,v̄^N}.
///
/// Each target keeps the order in which its members appear in ū¹ ∪ ⋯ ∪ ū^N.
#[derive(Clone, Debug, PartialEq)]
pub struct SetPartition<S> {
    pub targets: Vec<Vec<S>>,
}

pub fn enumerate_partitions<S: Clone>(families: &[Vec<S>]) -> Vec<SetPartition<S>> {
    let union: Vec<usize> = (0..families.iter().map(Vec::len).sum()).collect();
    let values: Vec<&S> = families.iter().flatten().collect();
    let sizes: Vec<usize> = families.iter().map(Vec::len).collect();
    let mut out = Vec::new();
    distribute(&union, &sizes, &mut Vec::new(), &mut |parts: &[Vec<usize>]| {
        out.push(SetPartition {
            targets: parts.iter().map(|p| p.iter().map(|&i| values[i].clone()).collect()).collect(),
        });
    });
    out
}

fn distribute(rest: &[usize], sizes: &[usize], acc: &mut Vec<Vec<usize>>, emit: &mut dyn FnMut(&[Vec<usize>])) {
    let Some((&first, tail)) = sizes.split_first() else {
        emit(acc);
        return;
    };
    for chosen in rest.iter().copied().combinations(first) {
        let remaining: Vec<usize> = rest.iter().copied().filter(|x| !chosen.contains(x)).collect();
        acc.push(chosen);
        distribute(&remaining, tail, acc, emit);
        acc.pop();
    }
}

/// (Σ m_j)! / Π m_j!
pub fn multinomial(sizes: &[usize]) -> u128 {
    let mut acc: u128 = 1;
    let mut total = 0u128;
    for &m in sizes {
        for k in 1..=m as u128 {
            total += 1;
            acc = acc * total / k;
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutationInstance {
    pub flavor: RFlavor,
    pub rank: usize,
    pub sizes: Vec<usize>,
    /// Quantum length; at least the union size gives a faithful check, any length is allowed.
    pub n: usize,
    /// Take the inhomogeneities to be the union ū¹ ∪ ⋯ ∪ ū^N instead of independent values.
    pub union: bool,
}

impl CommutationInstance {
    pub fn new(flavor: RFlavor, sizes: &[usize], n: usize) -> Result<Self> {
        if sizes.len() < 2 {
            return Err(Error::Config("at least two families are needed".into()));
        }
        if flavor == RFlavor::TrigB {
            return Err(Error::Config("the multiple commutation relations are stated for trigA and rational".into()));
        }
        Ok(CommutationInstance { flavor, rank: sizes.len(), sizes: sizes.to_vec(), n, union: false })
    }

    /// The instance with ξ̄ = ū¹ ∪ ⋯ ∪ ū^N (so n = Σ sizes).
    pub fn on_union(flavor: RFlavor, sizes: &[usize]) -> Result<Self> {
        let mut i = Self::new(flavor, sizes, sizes.iter().sum())?;
        i.union = true;
        Ok(i)
    }

    fn xi(&self, a: &Assignment) -> Vec<Q> {
        if self.union {
            self.families(a).concat()
        } else {
            a.family("xi", self.n)
        }
    }

    fn slots(&self) -> Slots {
        let (name, kind) = self.flavor.coupling_slot();
        let mut s = Slots::new().with(name, kind);
        for (j, &m) in self.sizes.iter().enumerate() {
            s = s.family(&format!("u{}_", j + 1), m);
        }
        if self.union {
            s
        } else {
            s.family("xi", self.n)
        }
    }

    fn families(&self, a: &Assignment) -> Vec<Vec<Q>> {
        self.sizes.iter().enumerate().map(|(j, &m)| a.family(&format!("u{}_", j + 1), m)).collect()
    }

    fn report_instance(&self) -> Instance {
        let i = Instance::rank(self.rank).sizes(&self.sizes).n(self.n);
        if self.union {
            i.detail("inhomogeneities = union")
        } else {
            i.detail("independent inhomogeneities")
        }
    }
}

/// Π_{j<k} (v̄^k − v̄^j)(q v̄^j − q⁻¹ v̄^{k−1})
fn partition_denominator<S: Scalar>(c: &Coupling<S>, v: &[Vec<S>]) -> S {
    let mut den = S::one();
    let n = v.len();
    for j in 0..n {
        for k in j + 1..n {
            den = den * prod2(&v[k], &v[j], |a, b| a.clone() - b.clone()) * prod2(&v[j], &v[k - 1], |a, b| c.same(a, b));
        }
    }
    den
}

/// Π_{j<N} (q ū^N − q⁻¹ v̄^j)
fn partition_numerator<S: Scalar>(c: &Coupling<S>, u: &[Vec<S>], v: &[Vec<S>]) -> S {
    let n = u.len();
    (0..n - 1).fold(S::one(), |acc, j| acc * prod2(&u[n - 1], &v[j], |a, b| c.same(a, b)))
}

/// Π_{ℓ=1}^{N−2} Π_{j≤ℓ} Π_{k≤ℓ+1} (q ū^j − q⁻¹ ū^k)
pub fn nested_same_product<S: Scalar>(c: &Coupling<S>, u: &[Vec<S>]) -> S {
    let rank = u.len() + 1;
    let mut acc = S::one();
    for l in 1..rank.saturating_sub(1) {
        for j in 0..l {
            for k in 0..=l {
                acc = acc * prod2(&u[j], &u[k], |a, b| c.same(a, b));
            }
        }
    }
    acc
}

/// The coefficient of T_{NN}(v̄^N)⋯T_{N1}(v̄¹) through the weight function.
pub fn commutation_coefficient<S: Scalar>(c: &Coupling<S>, u: &[Vec<S>], v: &[Vec<S>]) -> Result<S> {
    let rank = u.len();
    let lower = &u[..rank - 1];
    let mut den = partition_denominator(c, v) * nested_same_product(c, lower);
    for uj in lower {
        den = den * prod2(uj, &v[rank - 1], |a, b| c.same(a, b));
    }
    let layers: Vec<Vec<S>> = (1..rank).map(|j| u[..j].concat()).collect();
    let sizes: Vec<usize> = u.iter().map(Vec::len).collect();
    let colors = sizes.iter().enumerate().flat_map(|(j, &m)| std::iter::repeat_n(j + 1, m)).collect();
    let w = weight_w(c, &layers, &v.concat(), &ColorWord::new(rank, colors)?)?;
    (partition_numerator(c, u, v) * w).div(&den)
}

/// The same coefficient through the rectangular grid H.
pub fn grid_coefficient<S: Scalar>(flavor: RFlavor, c: &Coupling<S>, u: &[Vec<S>], v: &[Vec<S>]) -> Result<S> {
    let rank = u.len();
    let h = grid_h(flavor, c, &u[..rank - 1], &v[..rank - 1])?;
    (partition_numerator(c, u, v) * h).div(&partition_denominator(c, v))
}

/// The same coefficient through the enlarged grid K with its frozen column divided out.
pub fn enlarged_grid_coefficient<S: Scalar>(flavor: RFlavor, c: &Coupling<S>, u: &[Vec<S>], v: &[Vec<S>]) -> Result<S> {
    let rank = u.len();
    let k = grid_k(flavor, c, &u[..rank - 1], v)?;
    let mut den = partition_denominator(c, v);
    for uj in &u[..rank - 1] {
        den = den * prod2(uj, &v[rank - 1], |a, b| c.same(a, b));
    }
    (partition_numerator(c, u, v) * k).div(&den)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientRoute {
    WeightFunction,
    Grid,
}

pub fn lhs_word<S: Scalar>(u: &[Vec<S>]) -> OpWord<S> {
    let rank = u.len();
    let mut w = OpWord::new();
    for (j, f) in u.iter().enumerate() {
        w.push(rank, j + 1, f);
    }
    w
}

pub fn rhs_word<S: Scalar>(v: &[Vec<S>]) -> OpWord<S> {
    let rank = v.len();
    let mut w = OpWord::new();
    for (j, f) in v.iter().enumerate().rev() {
        w.push(rank, j + 1, f);
    }
    w
}

/// Σ over partitions of the coefficient times the matrix of T_{NN}(v̄^N)⋯T_{N1}(v̄¹).
pub fn commutation_rhs<S: Scalar>(ctx: &MonodromyContext<S>, u: &[Vec<S>], route: CoefficientRoute) -> Result<WordMatrix<S>> {
    if u.len() != ctx.rank {
        return Err(Error::Shape(format!("{} families for rank {}", u.len(), ctx.rank)));
    }
    let mut total = ctx.word_matrix(&OpWord::new())?.scale(&S::zero());
    for p in enumerate_partitions(u) {
        let g = match route {
            CoefficientRoute::WeightFunction => commutation_coefficient(&ctx.coupling, u, &p.targets)?,
            CoefficientRoute::Grid => grid_coefficient(ctx.flavor, &ctx.coupling, u, &p.targets)?,
        };
        total.add_scaled(&ctx.word_matrix(&rhs_word(&p.targets))?, &g)?;
    }
    Ok(total)
}

fn relation_holds(instance: &CommutationInstance, a: &Assignment, route: CoefficientRoute) -> Result<bool> {
    let c: Coupling<Q> = instance.flavor.coupling_from(a)?;
    let ctx = MonodromyContext::new(instance.flavor, instance.rank, c, instance.xi(a))?;
    let u = instance.families(a);
    let lhs = ctx.word_matrix(&lhs_word(&u))?;
    Ok(lhs == commutation_rhs(&ctx, &u, route)?)
}

/// Full-matrix check of the multiple commutation relation (trigA, or the rational mirror).
pub fn verify_multiple_commutation(instance: &CommutationInstance, plan: &SamplePlan) -> VerificationReport {
    Check::new("multiple-commutation", "multiple-commutation-relation")
        .flavor(instance.flavor)
        .instance(instance.report_instance())
        .run(plan, &instance.slots(), |a| relation_holds(instance, a, CoefficientRoute::WeightFunction))
}

/// The rational mirror; identical code path with the rational flavour.
pub fn verify_rational_commutation(sizes: &[usize], n: usize, plan: &SamplePlan) -> VerificationReport {
    match CommutationInstance::new(RFlavor::Rational, sizes, n) {
        Ok(i) => verify_multiple_commutation(&i, plan),
        Err(e) => Check::new("multiple-commutation", "multiple-commutation-relation").outcome(plan, false, Some(e.to_string())),
    }
}

/// The same comparison with grid-H coefficients.
pub fn verify_grid_coefficients(instance: &CommutationInstance, plan: &SamplePlan) -> VerificationReport {
    Check::new("multiple-commutation-grid-coefficients", "grid-partition-function-coefficients")
        .flavor(instance.flavor)
        .instance(instance.report_instance())
        .run(plan, &instance.slots(), |a| relation_holds(instance, a, CoefficientRoute::Grid))
}

/// Weight-function, grid-H and enlarged-grid-K coefficients agree for every partition.
pub fn verify_coefficient_routes(instance: &CommutationInstance, plan: &SamplePlan) -> VerificationReport {
    let (name, kind) = instance.flavor.coupling_slot();
    let mut slots = Slots::new().with(name, kind);
    for (j, &m) in instance.sizes.iter().enumerate() {
        slots = slots.family(&format!("u{}_", j + 1), m);
    }
    Check::new("coefficient-routes", "coefficients-via-weight-functions-and-grids")
        .flavor(instance.flavor)
        .instance(Instance::rank(instance.rank).sizes(&instance.sizes))
        .run(plan, &slots, |a| {
            let c: Coupling<Q> = instance.flavor.coupling_from(a)?;
            let u = instance.families(a);
            for p in enumerate_partitions(&u) {
                let w = commutation_coefficient(&c, &u, &p.targets)?;
                let h = grid_coefficient(instance.flavor, &c, &u, &p.targets)?;
                let k = enlarged_grid_coefficient(instance.flavor, &c, &u, &p.targets)?;
                if w != h || h != k {
                    return Ok(false);
                }
            }
            Ok(true)
        })
}

/// N = 2: T₂₁(ū¹)T₂₂(ū²) = Σ (qū² − q⁻¹v̄¹)/((v̄² − v̄¹)(qv̄¹ − q⁻¹v̄¹)) K(ū¹|v̄¹) T₂₂(v̄²)T₂₁(v̄¹).
pub fn rank_one_ik_form(flavor: RFlavor, sizes: [usize; 2], n: usize, plan: &SamplePlan) -> VerificationReport {
    let check = Check::new("rank-one-izergin-korepin-form", "izergin-korepin-commutation-form")
        .flavor(flavor)
        .instance(Instance::rank(2).sizes(&sizes).n(n));
    let instance = match CommutationInstance::new(flavor, &sizes, n) {
        Ok(i) => i,
        Err(e) => return check.outcome(plan, false, Some(e.to_string())),
    };
    check.run(plan, &instance.slots(), |a| {
        let c: Coupling<Q> = flavor.coupling_from(a)?;
        let ctx = MonodromyContext::new(flavor, 2, c.clone(), instance.xi(a))?;
        let u = instance.families(a);
        let lhs = ctx.word_matrix(&lhs_word(&u))?;
        let mut rhs = ctx.word_matrix(&OpWord::new())?.scale(&Q::zero());
        for p in enumerate_partitions(&u) {
            let v = &p.targets;
            let num = prod2(&u[1], &v[0], |x, y| c.same(x, y)) * ik_determinant(&c, &u[0], &v[0])?;
            let den = prod2(&v[1], &v[0], |x, y| x - y) * prod2(&v[0], &v[0], |x, y| c.same(x, y));
            rhs.add_scaled(&ctx.word_matrix(&rhs_word(v))?, &num.div(&den)?)?;
        }
        Ok(lhs == rhs)
    })
}

/// Partition counts keyed by size vector, for reporting.
pub fn partition_counts(size_vectors: &[Vec<usize>]) -> BTreeMap<Vec<usize>, usize> {
    size_vectors
        .iter()
        .map(|s| {
            let fams: Vec<Vec<usize>> = s.iter().map(|&m| vec![0; m]).collect();
            (s.clone(), enumerate_partitions(&fams).len())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_frac, q_int};

    #[test]
    fn partition_counts_match_examples() {
        let fams = vec![vec!['a'], vec!['b', 'c']];
        let parts = enumerate_partitions(&fams);
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0].targets, vec![vec!['a'], vec!['b', 'c']]);
        assert_eq!(enumerate_partitions(&[vec![1, 2, 3]]).len(), 1);
        assert_eq!(enumerate_partitions(&[vec![1], vec![2], vec![3]]).len(), 6);
        assert_eq!(multinomial(&[2, 1, 1]), 12);
    }

    fn ctx(flavor: RFlavor, rank: usize, n: usize) -> MonodromyContext<Q> {
        let c = Coupling::for_flavor(flavor, q_frac(4, 9)).unwrap();
        MonodromyContext::new(flavor, rank, c, (0..n).map(|k| q_int(17 * k as i64 - 23)).collect()).unwrap()
    }

    #[test]
    fn only_top_family_gives_single_term() {
        let c = ctx(RFlavor::TrigA, 3, 2);
        let u = vec![vec![], vec![], vec![q_int(5), q_int(-2)]];
        let rhs = commutation_rhs(&c, &u, CoefficientRoute::WeightFunction).unwrap();
        assert_eq!(rhs, c.word_matrix(&OpWord::new().then(3, 3, &u[2])).unwrap());
    }

    #[test]
    fn two_lines_reproduce_exchange_relation() {
        let c = ctx(RFlavor::TrigA, 2, 2);
        let (u, v) = (q_int(7), q_int(-13));
        let fams = vec![vec![u.clone()], vec![v.clone()]];
        let rhs = commutation_rhs(&c, &fams, CoefficientRoute::WeightFunction).unwrap();
        let mut expected = c.word_matrix(&OpWord::new().then(2, 2, std::slice::from_ref(&v)).then(2, 1, std::slice::from_ref(&u))).unwrap();
        expected = expected.scale(&c.coupling.same(&v, &u).div(&(&v - &u)).unwrap());
        let other = c.word_matrix(&OpWord::new().then(2, 2, std::slice::from_ref(&u)).then(2, 1, std::slice::from_ref(&v))).unwrap();
        expected.add_scaled(&other, &(-c.coupling.turn(&u)).div(&(&v - &u)).unwrap()).unwrap();
        assert_eq!(rhs, expected);
    }

    #[test]
    fn trig_b_is_rejected() {
        assert!(CommutationInstance::new(RFlavor::TrigB, &[1, 1], 2).is_err());
    }
}
