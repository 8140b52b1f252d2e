//! The vector representation T(u; ξ̄) = R_{0n}(u,ξ_n)⋯R_{01}(u,ξ_1) and its actions.

use std::collections::BTreeMap;

use rayon::prelude::*;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::report::{Instance, VerificationReport};
use crate::rmatrix::{Coupling, RFlavor, VertexWeights};
use crate::sample::{Assignment, Check, SamplePlan, Slots};
use crate::scalar::{Scalar, Q};
use crate::tensor::{all_tuples, ColorTuple, SparseState};

/// One factor T_ij(ū) of an operator word; the members of ū commute.
#[derive(Clone, Debug, PartialEq)]
pub struct OpFactor<S> {
    pub i: usize,
    pub j: usize,
    pub params: Vec<S>,
}

/// An ordered operator product, written left to right; the rightmost factor acts first.
#[derive(Clone, Debug, PartialEq)]
pub struct OpWord<S>(pub Vec<OpFactor<S>>);

impl<S: Scalar> Default for OpWord<S> {
    fn default() -> Self {
        OpWord(Vec::new())
    }
}

impl<S: Scalar> OpWord<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn then(mut self, i: usize, j: usize, params: &[S]) -> Self {
        self.0.push(OpFactor { i, j, params: params.to_vec() });
        self
    }

    pub fn push(&mut self, i: usize, j: usize, params: &[S]) {
        self.0.push(OpFactor { i, j, params: params.to_vec() });
    }

    pub fn params(&self) -> impl Iterator<Item = &S> {
        self.0.iter().flat_map(|f| f.params.iter())
    }
}

/// A full operator on (C^N)^⊗n, stored column by column.
#[derive(Clone, Debug, PartialEq)]
pub struct WordMatrix<S> {
    pub columns: BTreeMap<ColorTuple, SparseState<S>>,
}

impl<S: Scalar> WordMatrix<S> {
    pub fn add_scaled(&mut self, other: &Self, factor: &S) -> Result<()> {
        for (t, col) in &other.columns {
            match self.columns.get_mut(t) {
                Some(mine) => mine.add_scaled(col, factor)?,
                None => return Err(Error::Shape(format!("column {t:?} missing"))),
            }
        }
        Ok(())
    }

    pub fn scale(&self, factor: &S) -> Self {
        WordMatrix { columns: self.columns.iter().map(|(t, c)| (t.clone(), c.scale(factor))).collect() }
    }

    pub fn entry(&self, row: &ColorTuple, col: &ColorTuple) -> S {
        self.columns.get(col).map_or_else(S::zero, |c| c.get(row))
    }
}

#[derive(Clone, Debug)]
pub struct MonodromyContext<S> {
    pub flavor: RFlavor,
    pub rank: usize,
    pub coupling: Coupling<S>,
    pub xi: Vec<S>,
}

impl<S: Scalar> MonodromyContext<S> {
    pub fn new(flavor: RFlavor, rank: usize, coupling: Coupling<S>, xi: Vec<S>) -> Result<Self> {
        if !coupling.matches(flavor) {
            return Err(Error::Config(format!("coupling does not match flavor {flavor}")));
        }
        if rank == 0 || rank > 32 {
            return Err(Error::Config(format!("rank {rank} unsupported")));
        }
        for a in 0..xi.len() {
            for b in a + 1..xi.len() {
                if xi[a] == xi[b] {
                    return Err(Error::Domain("inhomogeneities must be pairwise distinct".into()));
                }
            }
        }
        Ok(MonodromyContext { flavor, rank, coupling, xi })
    }

    /// The same flavour and coupling over other inhomogeneities.
    pub fn with_xi(&self, xi: Vec<S>) -> Result<Self> {
        Self::new(self.flavor, self.rank, self.coupling.clone(), xi)
    }

    pub fn n(&self) -> usize {
        self.xi.len()
    }

    pub fn basis(&self, colors: &[usize]) -> Result<SparseState<S>> {
        if colors.len() != self.n() {
            return Err(Error::Shape(format!("{} colours for {} sites", colors.len(), self.n())));
        }
        SparseState::basis_colors(self.rank, colors)
    }

    pub fn constant_state(&self, color: usize) -> Result<SparseState<S>> {
        SparseState::basis(self.rank, ColorTuple::new(self.rank, &vec![color; self.n()])?)
    }

    fn validate(&self, i: usize, j: usize, state: &SparseState<S>) -> Result<()> {
        if i == 0 || j == 0 || i > self.rank || j > self.rank {
            return Err(Error::Index(format!("T_{{{i}{j}}} outside rank {}", self.rank)));
        }
        if state.rank() != self.rank || state.len() != self.n() {
            return Err(Error::Shape(format!(
                "state (N={}, n={}) vs context (N={}, n={})",
                state.rank(),
                state.len(),
                self.rank,
                self.n()
            )));
        }
        Ok(())
    }

    fn site_weights(&self, u: &S) -> Vec<VertexWeights<S>> {
        self.xi.iter().map(|x| VertexWeights::new(self.flavor, &self.coupling, u, x)).collect()
    }

    /// T_ij(u): the auxiliary line enters with colour j at site 1 and leaves with colour i after site n.
    pub fn apply_element(&self, i: usize, j: usize, u: &S, state: &SparseState<S>) -> Result<SparseState<S>> {
        self.validate(i, j, state)?;
        let ws = self.site_weights(u);
        let n = self.n();
        let (i, j) = (i as u8, j as u8);
        let mut out = SparseState::zero(self.rank, n);
        let mut stack = Vec::new();
        for (t, c) in state.iter() {
            stack.push((0usize, j, t.raw().to_vec(), c.clone()));
            while let Some((site, aux, mut tuple, coef)) = stack.pop() {
                if site == n {
                    if aux == i {
                        out.add_term(ColorTuple::from_raw(tuple), coef);
                    }
                    continue;
                }
                let w = &ws[site];
                let b = tuple[site];
                if aux == b {
                    stack.push((site + 1, aux, tuple, coef * w.diag.clone()));
                } else {
                    let swap = if aux < b { &w.swap_up } else { &w.swap_down };
                    let mut swapped = tuple.clone();
                    swapped[site] = aux;
                    stack.push((site + 1, b, swapped, coef.clone() * swap.clone()));
                    tuple[site] = b;
                    stack.push((site + 1, aux, tuple, coef * w.keep.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Left action d ↦ d·T_ij(u) on a covector, the transpose of `apply_element`.
    pub fn apply_dual_element(&self, i: usize, j: usize, u: &S, dual: &SparseState<S>) -> Result<SparseState<S>> {
        self.validate(i, j, dual)?;
        let ws = self.site_weights(u);
        let n = self.n();
        let (i, j) = (i as u8, j as u8);
        let mut out = SparseState::zero(self.rank, n);
        let mut stack = Vec::new();
        for (t, c) in dual.iter() {
            stack.push((n, i, t.raw().to_vec(), c.clone()));
            while let Some((site, aux_out, mut tuple, coef)) = stack.pop() {
                if site == 0 {
                    if aux_out == j {
                        out.add_term(ColorTuple::from_raw(tuple), coef);
                    }
                    continue;
                }
                let m = site - 1;
                let w = &ws[m];
                let b_out = tuple[m];
                if aux_out == b_out {
                    stack.push((m, aux_out, tuple, coef * w.diag.clone()));
                } else {
                    // input (b_out, aux_out) swapped into output (aux_out, b_out)
                    let swap = if b_out < aux_out { &w.swap_up } else { &w.swap_down };
                    let mut swapped = tuple.clone();
                    swapped[m] = aux_out;
                    stack.push((m, b_out, swapped, coef.clone() * swap.clone()));
                    tuple[m] = b_out;
                    stack.push((m, aux_out, tuple, coef * w.keep.clone()));
                }
            }
        }
        Ok(out.into_dual())
    }

    /// T_ij(ū) = Π_{u∈ū} T_ij(u).
    pub fn apply_multiset(&self, i: usize, j: usize, us: &[S], state: &SparseState<S>) -> Result<SparseState<S>> {
        self.validate(i, j, state)?;
        let mut s = state.clone();
        for u in us {
            s = self.apply_element(i, j, u, &s)?;
        }
        Ok(s)
    }

    pub fn apply_word(&self, word: &OpWord<S>, state: &SparseState<S>) -> Result<SparseState<S>> {
        let mut s = state.clone();
        for f in word.0.iter().rev() {
            s = self.apply_multiset(f.i, f.j, &f.params, &s)?;
            if s.is_zero() {
                break;
            }
        }
        Ok(s)
    }

    /// Covector times word: factors act leftmost first.
    pub fn apply_dual_word(&self, word: &OpWord<S>, dual: &SparseState<S>) -> Result<SparseState<S>> {
        let mut s = dual.clone();
        for f in word.0.iter() {
            for u in &f.params {
                s = self.apply_dual_element(f.i, f.j, u, &s)?;
            }
        }
        Ok(s)
    }

    pub fn word_matrix(&self, word: &OpWord<S>) -> Result<WordMatrix<S>> {
        let cols: Vec<ColorTuple> = all_tuples(self.rank, self.n());
        let built: Result<Vec<(ColorTuple, SparseState<S>)>> = cols
            .into_par_iter()
            .map(|t| {
                let e = SparseState::basis(self.rank, t.clone())?;
                Ok((t, self.apply_word(word, &e)?))
            })
            .collect();
        Ok(WordMatrix { columns: built?.into_iter().collect() })
    }

    /// The product of `rational-normalised' factors T(u)/Π(u − ξ̄) over the word.
    pub fn rational_normalizer(&self, word: &OpWord<S>) -> Result<S> {
        let mut den = S::one();
        for u in word.params() {
            for x in &self.xi {
                den = den * (u.clone() - x.clone());
            }
        }
        den.inv()
    }
}

fn context_slots(flavor: RFlavor, n: usize, spectral: usize) -> Slots {
    let (name, kind) = flavor.coupling_slot();
    Slots::new().with(name, kind).family("xi", n).family("u", spectral)
}

fn sampled_context(flavor: RFlavor, rank: usize, n: usize, a: &Assignment) -> Result<MonodromyContext<Q>> {
    MonodromyContext::new(flavor, rank, flavor.coupling_from(a)?, a.family("xi", n))
}

/// R₁₂(u,v)T₁(u)T₂(v) = T₂(v)T₁(u)R₁₂(u,v), entry by entry in the auxiliary indices.
pub fn rtt_holds(ctx: &MonodromyContext<Q>, u: &Q, v: &Q) -> Result<bool> {
    let r = VertexWeights::new(ctx.flavor, &ctx.coupling, u, v);
    let rank = ctx.rank;
    let elem = |a: usize, b: usize, k: usize, l: usize| r.weight(a as u8, b as u8, k as u8, l as u8).cloned();
    let mut cache: BTreeMap<(usize, usize, usize, usize), WordMatrix<Q>> = BTreeMap::new();
    // T_{ab}(x) T_{cd}(y), with (x, y) = (u, v) when `u_first`, else (v, u)
    let mut product = |(a, b): (usize, usize), (c, d): (usize, usize), u_first: bool| -> Result<WordMatrix<Q>> {
        let key = if u_first { (a, b, c, d) } else { (c + 100, d, a, b) };
        if let Some(m) = cache.get(&key) {
            return Ok(m.clone());
        }
        let (x, y) = if u_first { (u, v) } else { (v, u) };
        let m = ctx.word_matrix(&OpWord::new().then(a, b, std::slice::from_ref(x)).then(c, d, std::slice::from_ref(y)))?;
        cache.insert(key, m.clone());
        Ok(m)
    };
    let zero = ctx.word_matrix(&OpWord::new())?.scale(&Q::zero());
    for i in 1..=rank {
        for j in 1..=rank {
            for k in 1..=rank {
                for l in 1..=rank {
                    let mut lhs = zero.clone();
                    let mut rhs = zero.clone();
                    for a in 1..=rank {
                        for b in 1..=rank {
                            // Σ [R]_{ab}^{kl} T_{ai}(u) T_{bj}(v)
                            if let Some(w) = elem(a, b, k, l) {
                                lhs.add_scaled(&product((a, i), (b, j), true)?, &w)?;
                            }
                            // Σ [R]_{ij}^{ab} T_{lb}(v) T_{ka}(u)
                            if let Some(w) = elem(i, j, a, b) {
                                rhs.add_scaled(&product((l, b), (k, a), false)?, &w)?;
                            }
                        }
                    }
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

pub fn check_rtt(flavor: RFlavor, rank: usize, n: usize, plan: &SamplePlan) -> VerificationReport {
    Check::new("rtt-relation", "rtt-relation")
        .flavor(flavor)
        .instance(Instance::rank(rank).n(n))
        .run(plan, &context_slots(flavor, n, 2), |a| {
            let ctx = sampled_context(flavor, rank, n, a)?;
            rtt_holds(&ctx, a.get("u1"), a.get("u2"))
        })
}

/// T_ik(u)T_ij(v) = (qv − q⁻¹u)/(v − u) T_ij(v)T_ik(u) − (q − q⁻¹)u/(v − u) T_ij(u)T_ik(v)
/// for k < j (trigA) or k ≠ j (rational), over all admissible (i, j, k).
pub fn exchange_holds(ctx: &MonodromyContext<Q>, u: &Q, v: &Q) -> Result<bool> {
    let c = &ctx.coupling;
    let a = c.same(v, u).div(&(v - u))?;
    let b = (-c.turn(u)).div(&(v - u))?;
    for i in 1..=ctx.rank {
        for j in 1..=ctx.rank {
            for k in 1..=ctx.rank {
                let admissible = if ctx.flavor == RFlavor::Rational { k != j } else { k < j };
                if !admissible {
                    continue;
                }
                let one = |x: &Q, y: &Q| OpWord::new().then(i, k, std::slice::from_ref(x)).then(i, j, std::slice::from_ref(y));
                let two = |x: &Q, y: &Q| OpWord::new().then(i, j, std::slice::from_ref(x)).then(i, k, std::slice::from_ref(y));
                let lhs = ctx.word_matrix(&one(u, v))?;
                let mut rhs = ctx.word_matrix(&two(v, u))?.scale(&a);
                rhs.add_scaled(&ctx.word_matrix(&two(u, v))?, &b)?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub fn check_exchange(flavor: RFlavor, rank: usize, n: usize, plan: &SamplePlan) -> VerificationReport {
    Check::new("fundamental-exchange", "fundamental-commutation-relation")
        .flavor(flavor)
        .instance(Instance::rank(rank).n(n))
        .run(plan, &context_slots(flavor, n, 2), |a| {
            let ctx = sampled_context(flavor, rank, n, a)?;
            exchange_holds(&ctx, a.get("u1"), a.get("u2"))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_frac, q_int, Q};
    use crate::tensor::pair;

    fn ctx(flavor: RFlavor, rank: usize, n: usize) -> MonodromyContext<Q> {
        let coupling = if flavor.is_trig() {
            Coupling::trig(q_frac(3, 7)).unwrap()
        } else {
            Coupling::rational(q_int(5)).unwrap()
        };
        let xi = (0..n).map(|k| q_int(11 + 17 * k as i64 - (k * k) as i64)).collect();
        MonodromyContext::new(flavor, rank, coupling, xi).unwrap()
    }

    #[test]
    fn diagonal_on_highest_colour() {
        let c = ctx(RFlavor::TrigA, 3, 3);
        let u = q_int(-9);
        let e = c.constant_state(3).unwrap();
        let got = c.apply_element(3, 3, &u, &e).unwrap();
        let factor: Q = c.xi.iter().map(|x| c.coupling.same(&u, x)).product();
        assert_eq!(got, e.scale(&factor));
        let lower = c.apply_element(1, 1, &u, &e).unwrap();
        let factor: Q = c.xi.iter().map(|x| &u - x).product();
        assert_eq!(lower, e.scale(&factor));
    }

    #[test]
    fn trig_b_raising_kills_lowest_colour() {
        let c = ctx(RFlavor::TrigB, 3, 3);
        let e = c.constant_state(1).unwrap();
        {
            let (k, j) = (2, 3);
            assert!(c.apply_element(k, j, &q_int(4), &e).unwrap().is_zero());
        }
    }

    #[test]
    fn dual_action_is_transpose() {
        let c = ctx(RFlavor::Rational, 3, 3);
        let u = q_int(13);
        for (i, j) in [(1, 2), (3, 1), (2, 2)] {
            for s in all_tuples(3, 3) {
                let e = SparseState::basis(3, s).unwrap();
                let te = c.apply_element(i, j, &u, &e).unwrap();
                for d in all_tuples(3, 3) {
                    let dual = SparseState::dual_basis(3, d).unwrap();
                    let dt = c.apply_dual_element(i, j, &u, &dual).unwrap();
                    assert_eq!(pair(&dt, &e).unwrap(), pair(&dual, &te).unwrap());
                }
            }
        }
    }

    #[test]
    fn empty_word_is_identity_and_same_index_factors_commute() {
        let c = ctx(RFlavor::TrigA, 2, 3);
        let m = c.word_matrix(&OpWord::new()).unwrap();
        for (t, col) in &m.columns {
            assert_eq!(col, &SparseState::basis(2, t.clone()).unwrap());
        }
        let (u, v) = (q_int(3), q_int(-5));
        let a = c.word_matrix(&OpWord::new().then(2, 1, std::slice::from_ref(&u)).then(2, 1, std::slice::from_ref(&v))).unwrap();
        let b = c.word_matrix(&OpWord::new().then(2, 1, &[v]).then(2, 1, &[u])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rtt_and_exchange_small() {
        for flavor in RFlavor::ALL {
            let c = ctx(flavor, 2, 2);
            assert!(rtt_holds(&c, &q_int(3), &q_int(-19)).unwrap(), "{flavor}");
        }
        for flavor in [RFlavor::TrigA, RFlavor::Rational] {
            let c = ctx(flavor, 3, 2);
            assert!(exchange_holds(&c, &q_int(4), &q_int(9)).unwrap(), "{flavor}");
        }
        assert!(!exchange_holds(&ctx(RFlavor::TrigB, 3, 2), &q_int(4), &q_int(9)).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let c = ctx(RFlavor::TrigA, 2, 2);
        let e = SparseState::<Q>::basis_colors(2, &[1, 1, 1]).unwrap();
        assert!(c.apply_element(1, 1, &q_int(1), &e).is_err());
        let e = c.constant_state(1).unwrap();
        assert!(c.apply_element(3, 1, &q_int(1), &e).is_err());
        let dup = MonodromyContext::new(RFlavor::TrigA, 2, Coupling::trig(q_int(2)).unwrap(), vec![q_int(1), q_int(1)]);
        assert!(dup.is_err());
    }
}
