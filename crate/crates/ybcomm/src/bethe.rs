//! Universal Bethe vectors B and B̂ in the vector representation, and their
//! specialisations Ψ and Ψ̃ at t̄^j = w̄_{I_{j+1}} ∪ ⋯ ∪ w̄_{I_N}.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Zero;

use crate::error::{domain, Error, Result};
use crate::laurent::Laurent;
use crate::monodromy::{MonodromyContext, OpWord};
use crate::report::{Instance, VerificationReport};
use crate::rmatrix::{Coupling, RFlavor};
use crate::sample::{Assignment, Check, SamplePlan, Slots};
use crate::scalar::{prod2, Scalar, Q};
use crate::special::{f_product, ik_left, ik_right};
use crate::tensor::SparseState;

pub type Cell = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BetheVariant {
    B,
    BHat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellOrder {
    /// (i, j) ≺ (i', j') iff i < i', or i = i' and j < j'.
    Prec,
    /// (i, j) ≺ᵗ (i', j') iff j < j', or j = j' and i < i'.
    PrecT,
}

impl CellOrder {
    pub fn less(self, a: Cell, b: Cell) -> bool {
        match self {
            CellOrder::Prec => a.0 < b.0 || (a.0 == b.0 && a.1 < b.1),
            CellOrder::PrecT => a.1 < b.1 || (a.1 == b.1 && a.0 < b.0),
        }
    }
}

/// Cells (i, j) of level k: 1 ≤ i ≤ k ≤ j ≤ N − 1.
pub fn cells(rank: usize, k: usize) -> Vec<Cell> {
    (1..=k).flat_map(|i| (k..rank).map(move |j| (i, j))).collect()
}

/// A decomposition of each t̄^k into cells, with |t̄^k_{ij}| independent of k.
#[derive(Clone, Debug, PartialEq)]
pub struct NestedPartition<S> {
    /// `levels[k-1][&(i, j)]` is t̄^k_{ij}.
    pub levels: Vec<BTreeMap<Cell, Vec<S>>>,
}

impl<S: Clone> NestedPartition<S> {
    pub fn cell(&self, k: usize, c: Cell) -> &[S] {
        self.levels[k - 1].get(&c).map_or(&[], Vec::as_slice)
    }
}

pub fn enumerate_nested_partitions<S: Clone>(rank: usize, t: &[Vec<S>]) -> Result<Vec<NestedPartition<S>>> {
    if t.len() + 1 != rank {
        return Err(Error::Shape(format!("{} levels for rank {rank}", t.len())));
    }
    let all_cells: Vec<Cell> = (1..rank).flat_map(|k| cells(rank, k)).unique().sorted().collect();
    let mut size_choices = Vec::new();
    let mut current = BTreeMap::new();
    cell_sizes(rank, t, &all_cells, 0, &mut current, &mut size_choices);
    let mut out = Vec::new();
    for sizes in size_choices {
        let per_level: Vec<Vec<BTreeMap<Cell, Vec<S>>>> =
            (1..rank).map(|k| split_level(&t[k - 1], &cells(rank, k), &sizes)).collect();
        for combo in per_level.into_iter().multi_cartesian_product() {
            out.push(NestedPartition { levels: combo });
        }
    }
    Ok(out)
}

fn cell_sizes<S>(
    rank: usize,
    t: &[Vec<S>],
    all: &[Cell],
    idx: usize,
    current: &mut BTreeMap<Cell, usize>,
    out: &mut Vec<BTreeMap<Cell, usize>>,
) {
    if idx == all.len() {
        let ok = (1..rank).all(|k| cells(rank, k).iter().map(|c| current[c]).sum::<usize>() == t[k - 1].len());
        if ok {
            out.push(current.clone());
        }
        return;
    }
    let (i, j) = all[idx];
    let max = (i..=j).map(|k| t[k - 1].len()).min().unwrap_or(0);
    for s in 0..=max {
        current.insert(all[idx], s);
        cell_sizes(rank, t, all, idx + 1, current, out);
    }
    current.remove(&all[idx]);
}

fn split_level<S: Clone>(elems: &[S], cl: &[Cell], sizes: &BTreeMap<Cell, usize>) -> Vec<BTreeMap<Cell, Vec<S>>> {
    let Some((&first, rest)) = cl.split_first() else {
        return vec![BTreeMap::new()];
    };
    let mut out = Vec::new();
    for chosen in (0..elems.len()).combinations(sizes[&first]) {
        let picked: Vec<S> = chosen.iter().map(|&i| elems[i].clone()).collect();
        let remaining: Vec<S> = (0..elems.len()).filter(|i| !chosen.contains(i)).map(|i| elems[i].clone()).collect();
        for mut m in split_level(&remaining, rest, sizes) {
            m.insert(first, picked.clone());
            out.push(m);
        }
    }
    out
}

/// T̃^{rat}-normalised word action: TrigB word applied to e_{1^n}, divided by Π(u − w̄) over its parameters.
pub fn rational_normalized<S: Scalar>(ctx: &MonodromyContext<S>, word: &OpWord<S>) -> Result<SparseState<S>> {
    let s = ctx.apply_word(word, &ctx.constant_state(1)?)?;
    Ok(s.scale(&ctx.rational_normalizer(word)?))
}

fn coefficient<S: Scalar>(c: &Coupling<S>, rank: usize, p: &NestedPartition<S>, variant: BetheVariant) -> Result<S> {
    let (within, across) = match variant {
        BetheVariant::B => (CellOrder::Prec, CellOrder::Prec),
        BetheVariant::BHat => (CellOrder::PrecT, CellOrder::PrecT),
    };
    let mut co = S::one();
    for k in 1..rank {
        let cl = cells(rank, k);
        for &a in &cl {
            for &b in &cl {
                if within.less(a, b) {
                    co = co * f_product(c, p.cell(k, b), p.cell(k, a))?;
                }
            }
        }
    }
    for k in 2..rank {
        let lower = cells(rank, k - 1);
        for a in cells(rank, k) {
            for &b in &lower {
                if across.less(a, b) {
                    co = co * f_product(c, p.cell(k, a), p.cell(k - 1, b))?;
                }
            }
            let (i, j) = a;
            if i < j && lower.contains(&a) {
                let (x, y) = (p.cell(k, a), p.cell(k - 1, a));
                let kk = match variant {
                    BetheVariant::B => ik_left(c, x, y)?,
                    BetheVariant::BHat => ik_right(c, x, y)?,
                };
                co = co * kk.div(&prod2(x, y, |s, t| s.clone() - t.clone()))?;
            }
        }
    }
    Ok(co)
}

fn bethe_word<S: Scalar>(rank: usize, p: &NestedPartition<S>, variant: BetheVariant) -> OpWord<S> {
    let mut word = OpWord::new();
    match variant {
        BetheVariant::B => {
            for k in 1..rank {
                for j in (k + 1..=rank).rev() {
                    word.push(k, j, p.cell(k, (k, j - 1)));
                }
            }
            for k in 2..rank {
                for c in cells(rank, k) {
                    if CellOrder::Prec.less(c, (k, k)) {
                        word.push(k, k, p.cell(k, c));
                    }
                }
            }
        }
        BetheVariant::BHat => {
            for k in (1..rank).rev() {
                for j in 1..=k {
                    word.push(j, k + 1, p.cell(k, (j, k)));
                }
            }
            for k in 1..rank.saturating_sub(1) {
                for c in cells(rank, k) {
                    if CellOrder::PrecT.less((k, k), c) {
                        word.push(k + 1, k + 1, p.cell(k, c));
                    }
                }
            }
        }
    }
    word
}

/// Largest |t̄^k| accepted by [`universal_b`].
pub const NESTED_CAP: usize = 3;

/// B(t̄¹,…,t̄^{N−1}) e_{1^n} or B̂(t̄¹,…,t̄^{N−1}) e_{1^n}; `ctx` must be TrigB.
pub fn universal_b<S: Scalar>(variant: BetheVariant, ctx: &MonodromyContext<S>, t: &[Vec<S>]) -> Result<SparseState<S>> {
    if ctx.flavor != RFlavor::TrigB {
        return Err(Error::Config("universal Bethe vectors use the trigB convention".into()));
    }
    if let Some(level) = t.iter().find(|l| l.len() > NESTED_CAP) {
        return Err(Error::Config(format!("|t̄| = {} exceeds the cap {NESTED_CAP}", level.len())));
    }
    let mut out = SparseState::zero(ctx.rank, ctx.n());
    for p in enumerate_nested_partitions(ctx.rank, t)? {
        let co = coefficient(&ctx.coupling, ctx.rank, &p, variant)?;
        let state = rational_normalized(ctx, &bethe_word(ctx.rank, &p, variant))?;
        out.add_scaled(&state, &co)?;
    }
    Ok(out)
}

/// J = (J₁,…,J_N), a partition of {1,…,n} (1-based positions).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GtPartition {
    pub parts: Vec<Vec<usize>>,
}

impl GtPartition {
    pub fn new(n: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen: Vec<usize> = parts.iter().flatten().copied().collect();
        seen.sort_unstable();
        if seen != (1..=n).collect::<Vec<_>>() {
            return Err(Error::Domain(format!("{parts:?} is not a partition of 1..={n}")));
        }
        Ok(GtPartition { parts })
    }

    /// Every J for rank N and n sites, in lexicographic order of the colouring.
    pub fn all(rank: usize, n: usize) -> Vec<GtPartition> {
        crate::tensor::all_tuples(rank, n)
            .into_iter()
            .map(|t| GtPartition {
                parts: (1..=rank).map(|j| (1..=n).filter(|&p| t.color(p - 1) == j).collect()).collect(),
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    pub fn n(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    /// w̄_{J_j}
    pub fn values<S: Clone>(&self, w: &[S], j: usize) -> Vec<S> {
        self.parts[j - 1].iter().map(|&p| w[p - 1].clone()).collect()
    }

    /// w̄_{J_a} ∪ ⋯ ∪ w̄_{J_b}; empty when a > b.
    pub fn union<S: Clone>(&self, w: &[S], a: usize, b: usize) -> Vec<S> {
        (a..=b).flat_map(|j| self.values(w, j)).collect()
    }

    pub fn label(&self) -> String {
        self.parts.iter().map(|p| format!("{{{}}}", p.iter().join(","))).join("")
    }
}

/// Ψ's closed form: the displayed prefactor times T̃_{1N}(w̄_{I_N})⋯T̃_{12}(w̄_{I_2}) e_{1^n}.
pub fn psi_closed_form(ctx: &MonodromyContext<Q>, i: &GtPartition) -> Result<SparseState<Q>> {
    let (rank, w, c) = (ctx.rank, &ctx.xi, &ctx.coupling);
    let wi = |j: usize| i.values(w, j);
    let mut pre = Q::from(num_bigint::BigInt::from(1));
    for j in 1..rank {
        for k in j + 1..rank {
            pre *= prod2(&wi(k + 1), &wi(j + 1), |a, b| c.same(a, b)).pow(j as i32)
                * prod2(&wi(j + 1), &wi(k + 1), |a, b| c.same(a, b)).pow(j as i32 - 1);
        }
    }
    for j in 2..rank {
        pre *= prod2(&wi(j + 1), &wi(j + 1), |a, b| c.same(a, b)).pow(j as i32 - 1);
    }
    let mut word = OpWord::new();
    for j in (2..=rank).rev() {
        word.push(1, j, &wi(j));
    }
    Ok(ctx.apply_word(&word, &ctx.constant_state(1)?)?.scale(&pre))
}

/// Ψ̃'s closed form: 1/Π(w̄_{I_{j+1..N}} − w̄_{I_{1..j−1}}) times T̃_{N−1,N}(w̄_{I_N})⋯T̃_{12}(w̄_{I_2..N}) e_{1^n}.
pub fn psi_tilde_closed_form(ctx: &MonodromyContext<Q>, i: &GtPartition) -> Result<SparseState<Q>> {
    let (rank, w) = (ctx.rank, &ctx.xi);
    let mut den = Q::from(num_bigint::BigInt::from(1));
    for j in 2..rank {
        den *= prod2(&i.union(w, j + 1, rank), &i.union(w, 1, j - 1), |a, b| a - b);
    }
    let mut word = OpWord::new();
    for j in (2..=rank).rev() {
        word.push(j - 1, j, &i.union(w, j, rank));
    }
    Ok(ctx.apply_word(&word, &ctx.constant_state(1)?)?.scale(&den.inv()?))
}

/// Perturbation slopes for the ε-limit: distinct across all levels and positions.
fn slopes(levels: &[usize]) -> Vec<Vec<Q>> {
    let mut next = 1i64;
    levels
        .iter()
        .map(|&len| {
            (0..len)
                .map(|_| {
                    let s = next;
                    next = if next > 0 { -next } else { -next + 1 };
                    Q::from(num_bigint::BigInt::from(s * 7 + 3))
                })
                .collect()
        })
        .collect()
}

/// Ψ (variant B) or Ψ̃ (variant B̂): (t̄¹ − w̄)Π_ℓ(t̄^ℓ − t̄^{ℓ−1}) B e_{1^n} at the specialisation.
///
/// The specialisation is a 0·∞ limit; it is taken by moving t̄^j off the
/// special point along t = t₀ + εr and reading the ε⁰ coefficient exactly.
pub fn psi_specialization(variant: BetheVariant, ctx: &MonodromyContext<Q>, i: &GtPartition) -> Result<SparseState<Q>> {
    if i.rank() != ctx.rank || i.n() != ctx.n() {
        return Err(Error::Shape("partition does not match the context".into()));
    }
    let rank = ctx.rank;
    let special: Vec<Vec<Q>> = (1..rank).map(|j| i.union(&ctx.xi, j + 1, rank)).collect();
    let r = slopes(&special.iter().map(Vec::len).collect::<Vec<_>>());
    let mut rel = 8;
    loop {
        match psi_at_precision(variant, ctx, &special, &r, rel)? {
            Some(s) => return Ok(s),
            None if rel < 128 => rel *= 2,
            None => return Err(domain("ε-limit needs more precision than allowed")),
        }
    }
}

fn psi_at_precision(
    variant: BetheVariant,
    ctx: &MonodromyContext<Q>,
    special: &[Vec<Q>],
    slopes: &[Vec<Q>],
    rel: i64,
) -> Result<Option<SparseState<Q>>> {
    let lift = |x: &Q| Laurent::from_q(x);
    let coupling = match &ctx.coupling {
        Coupling::Trig { q, qinv } => Coupling::trig_with_inverse(lift(q), lift(qinv)),
        Coupling::Rational { h } => Coupling::Rational { h: lift(h) },
    };
    let w: Vec<Laurent> = ctx.xi.iter().map(lift).collect();
    let lctx = MonodromyContext::new(ctx.flavor, ctx.rank, coupling, w.clone())?;
    let t: Vec<Vec<Laurent>> = special
        .iter()
        .zip(slopes)
        .map(|(lvl, sl)| lvl.iter().zip(sl).map(|(x, s)| Laurent::variable(x.clone(), s.clone(), rel)).collect())
        .collect();
    let mut pre = prod2(&t[0], &w, |a, b| a.clone() - b.clone());
    for l in 1..t.len() {
        pre = pre * prod2(&t[l], &t[l - 1], |a, b| a.clone() - b.clone());
    }
    let state = universal_b(variant, &lctx, &t)?.scale(&pre);
    let mut out = SparseState::zero(ctx.rank, ctx.n());
    for (tuple, coef) in state.iter() {
        if coef.precision().is_some_and(|p| p < 1) {
            return Ok(None);
        }
        for k in coef.valuation().min(0)..0 {
            if !coef.coefficient(k)?.is_zero() {
                return Err(domain("specialisation diverges"));
            }
        }
        out.add_term(tuple.clone(), coef.coefficient(0)?);
    }
    Ok(Some(out))
}


fn trig_b_slots(n: usize) -> Slots {
    let (name, kind) = RFlavor::TrigB.coupling_slot();
    Slots::new().with(name, kind).family("w", n)
}

fn trig_b_context(n: usize, rank: usize, a: &Assignment) -> Result<MonodromyContext<Q>> {
    MonodromyContext::new(RFlavor::TrigB, rank, RFlavor::TrigB.coupling_from(a)?, a.family("w", n))
}

/// B = B̂ for every level-size profile with |t̄^k| ≤ `cap`.
pub fn verify_b_equals_bhat(rank: usize, n: usize, cap: usize, plan: &SamplePlan) -> VerificationReport {
    let profiles: Vec<Vec<usize>> =
        (1..rank).map(|_| 0..=cap.min(NESTED_CAP)).multi_cartesian_product().filter(|p| p.iter().any(|&x| x > 0)).collect();
    let mut slots = trig_b_slots(n);
    for k in 1..rank {
        slots = slots.family(&format!("t{k}_"), cap);
    }
    Check::new("bethe-vector-equivalence", "two-universal-bethe-vectors-agree")
        .flavor(RFlavor::TrigB)
        .instance(Instance::rank(rank).n(n).detail(format!("{} level profiles, cap {cap}", profiles.len())))
        .run(plan, &slots, |a| {
            let ctx = trig_b_context(n, rank, a)?;
            for p in &profiles {
                let t: Vec<Vec<Q>> = p.iter().enumerate().map(|(k, &m)| a.family(&format!("t{}_", k + 1), m)).collect();
                if universal_b(BetheVariant::B, &ctx, &t)? != universal_b(BetheVariant::BHat, &ctx, &t)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
}

/// Ψ and Ψ̃ against their closed forms, and against each other, for every I.
pub fn verify_psi_closed_forms(rank: usize, n: usize, plan: &SamplePlan) -> VerificationReport {
    Check::new("bethe-vector-specialisation", "specialised-bethe-vectors-closed-forms")
        .flavor(RFlavor::TrigB)
        .instance(Instance::rank(rank).n(n).detail("all I"))
        .run(plan, &trig_b_slots(n), |a| {
            let ctx = trig_b_context(n, rank, a)?;
            for i in GtPartition::all(rank, n) {
                let psi = psi_specialization(BetheVariant::B, &ctx, &i)?;
                let psit = psi_specialization(BetheVariant::BHat, &ctx, &i)?;
                if psi != psi_closed_form(&ctx, &i)? || psit != psi_tilde_closed_form(&ctx, &i)? || psi != psit {
                    return Ok(false);
                }
            }
            Ok(true)
        })
}
