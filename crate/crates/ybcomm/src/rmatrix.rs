//! The trigonometric (two conventions) and rational R-matrices.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::report::{Instance, VerificationReport};
use crate::sample::{Assignment, Check, SamplePlan, SlotKind, Slots};
use crate::scalar::{Scalar, Q};
use crate::tensor::{all_tuples, ColorTuple, SparseState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RFlavor {
    /// Swaps weighted (q−q⁻¹)v when the first input colour is the larger one.
    TrigA,
    /// The colour-reversed convention R̃.
    TrigB,
    Rational,
}

impl RFlavor {
    pub const ALL: [RFlavor; 3] = [RFlavor::TrigA, RFlavor::TrigB, RFlavor::Rational];

    pub fn is_trig(self) -> bool {
        self != RFlavor::Rational
    }

    /// The sampler slot for this flavour's coupling constant.
    pub fn coupling_slot(self) -> (&'static str, SlotKind) {
        if self.is_trig() {
            ("q", SlotKind::Deformation)
        } else {
            ("h", SlotKind::Scale)
        }
    }

    pub fn coupling_from<S: Scalar>(self, a: &Assignment) -> Result<Coupling<S>> {
        Coupling::for_flavor(self, S::from_q(a.get(self.coupling_slot().0)))
    }
}

impl fmt::Display for RFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RFlavor::TrigA => "trigA",
            RFlavor::TrigB => "trigB",
            RFlavor::Rational => "rational",
        })
    }
}

impl FromStr for RFlavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trigA" => Ok(RFlavor::TrigA),
            "trigB" => Ok(RFlavor::TrigB),
            "rational" => Ok(RFlavor::Rational),
            _ => Err(Error::Config(format!("unknown flavor `{s}`"))),
        }
    }
}

/// q (with its inverse cached) for the trigonometric flavours, h for the rational one.
#[derive(Clone, Debug, PartialEq)]
pub enum Coupling<S> {
    Trig { q: S, qinv: S },
    Rational { h: S },
}

impl<S: Scalar> Coupling<S> {
    pub fn trig(q: S) -> Result<Self> {
        let qinv = q.inv()?;
        Ok(Coupling::Trig { q, qinv })
    }

    pub fn rational(h: S) -> Result<Self> {
        if h.is_zero() {
            return Err(domain("h must be nonzero"));
        }
        Ok(Coupling::Rational { h })
    }

    /// Builds from explicit q and q⁻¹ (used for ε-jets, where q⁻¹ is known in closed form).
    pub fn trig_with_inverse(q: S, qinv: S) -> Self {
        Coupling::Trig { q, qinv }
    }

    pub fn for_flavor(flavor: RFlavor, value: S) -> Result<Self> {
        if flavor.is_trig() {
            Self::trig(value)
        } else {
            Self::rational(value)
        }
    }

    pub fn matches(&self, flavor: RFlavor) -> bool {
        matches!((self, flavor.is_trig()), (Coupling::Trig { .. }, true) | (Coupling::Rational { .. }, false))
    }

    /// qa − q⁻¹b, or a − b + h.
    pub fn same(&self, a: &S, b: &S) -> S {
        match self {
            Coupling::Trig { q, qinv } => q.clone() * a.clone() - qinv.clone() * b.clone(),
            Coupling::Rational { h } => a.clone() - b.clone() + h.clone(),
        }
    }

    /// (q − q⁻¹)a, or h.
    pub fn turn(&self, a: &S) -> S {
        match self {
            Coupling::Trig { q, qinv } => (q.clone() - qinv.clone()) * a.clone(),
            Coupling::Rational { h } => h.clone(),
        }
    }

    /// (q⁻¹a − qb)/(a − b), or (a − b − h)/(a − b).
    pub fn sym(&self, a: &S, b: &S) -> Result<S> {
        let num = match self {
            Coupling::Trig { q, qinv } => qinv.clone() * a.clone() - q.clone() * b.clone(),
            Coupling::Rational { h } => a.clone() - b.clone() - h.clone(),
        };
        num.div(&(a.clone() - b.clone()))
    }

    /// f(a, b) = (qa − q⁻¹b)/(a − b), or (a − b + h)/(a − b).
    pub fn f(&self, a: &S, b: &S) -> Result<S> {
        self.same(a, b).div(&(a.clone() - b.clone()))
    }

    /// The spectral shift u ↦ q^{2k}u (trig) or u ↦ u + kh (rational) used by quantum minors.
    pub fn shift(&self, u: &S, k: u32) -> S {
        match self {
            Coupling::Trig { q, .. } => q.pow(2 * k) * u.clone(),
            Coupling::Rational { h } => u.clone() + S::from_i64(k as i64) * h.clone(),
        }
    }

    pub fn value(&self) -> &S {
        match self {
            Coupling::Trig { q, .. } => q,
            Coupling::Rational { h } => h,
        }
    }
}

/// The nonzero vertex weights at spectral parameters (u, v).
#[derive(Clone, Debug)]
pub(crate) struct VertexWeights<S> {
    /// input (a, a) → (a, a)
    pub diag: S,
    /// input (a, b), a ≠ b → (a, b)
    pub keep: S,
    /// input (a, b), a < b → (b, a)
    pub swap_up: S,
    /// input (a, b), a > b → (b, a)
    pub swap_down: S,
}

impl<S: Scalar> VertexWeights<S> {
    pub fn new(flavor: RFlavor, c: &Coupling<S>, u: &S, v: &S) -> Self {
        let diag = c.same(u, v);
        let keep = u.clone() - v.clone();
        let (swap_up, swap_down) = match flavor {
            RFlavor::TrigA => (c.turn(u), c.turn(v)),
            RFlavor::TrigB => (c.turn(v), c.turn(u)),
            RFlavor::Rational => (c.turn(u), c.turn(u)),
        };
        VertexWeights { diag, keep, swap_up, swap_down }
    }

    /// Weight of input (a, b) → output (k, l).
    pub fn weight(&self, a: u8, b: u8, k: u8, l: u8) -> Option<&S> {
        if a == b {
            (k == a && l == b).then_some(&self.diag)
        } else if k == a && l == b {
            Some(&self.keep)
        } else if k == b && l == a {
            Some(if a < b { &self.swap_up } else { &self.swap_down })
        } else {
            None
        }
    }
}

fn check_index(rank: usize, idx: &[usize]) -> Result<()> {
    match idx.iter().find(|&&x| x == 0 || x > rank) {
        Some(x) => Err(Error::Index(format!("index {x} outside 1..={rank}"))),
        None => Ok(()),
    }
}

/// [R(u,v)]_{ij}^{kl}: the coefficient of e_k⊗e_l in R(u,v)(e_i⊗e_j).
#[allow(clippy::too_many_arguments)]
pub fn r_element<S: Scalar>(
    flavor: RFlavor,
    rank: usize,
    coupling: &Coupling<S>,
    u: &S,
    v: &S,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
) -> Result<S> {
    check_index(rank, &[i, j, k, l])?;
    if !coupling.matches(flavor) {
        return Err(Error::Config(format!("coupling does not match flavor {flavor}")));
    }
    let w = VertexWeights::new(flavor, coupling, u, v);
    Ok(w.weight(i as u8, j as u8, k as u8, l as u8).cloned().unwrap_or_else(S::zero))
}

/// Acts with a two-site operator given by its elements on factors `site_a` (first) and `site_b`.
pub fn apply_pair_operator<S: Scalar>(
    rank: usize,
    element: impl Fn(usize, usize, usize, usize) -> S,
    site_a: usize,
    site_b: usize,
    state: &SparseState<S>,
) -> Result<SparseState<S>> {
    if site_a == site_b || site_a >= state.len() || site_b >= state.len() {
        return Err(Error::Index(format!("sites {site_a},{site_b} invalid for length {}", state.len())));
    }
    let mut out = SparseState::zero(rank, state.len());
    for (t, c) in state.iter() {
        let (i, j) = (t.color(site_a), t.color(site_b));
        for k in 1..=rank {
            for l in 1..=rank {
                let w = element(i, j, k, l);
                if w.is_zero() {
                    continue;
                }
                let mut raw = t.raw().to_vec();
                raw[site_a] = k as u8;
                raw[site_b] = l as u8;
                out.add_term(ColorTuple::from_raw(raw), c.clone() * w);
            }
        }
    }
    Ok(out)
}

/// R(u,v) acting on tensor factors `site_a` (first) and `site_b`.
pub fn apply_r_two_sites<S: Scalar>(
    flavor: RFlavor,
    coupling: &Coupling<S>,
    u: &S,
    v: &S,
    site_a: usize,
    site_b: usize,
    state: &SparseState<S>,
) -> Result<SparseState<S>> {
    let w = VertexWeights::new(flavor, coupling, u, v);
    apply_pair_operator(
        state.rank(),
        |i, j, k, l| w.weight(i as u8, j as u8, k as u8, l as u8).cloned().unwrap_or_else(S::zero),
        site_a,
        site_b,
        state,
    )
}

type Element<'a> = dyn Fn(&Q, &Q, usize, usize, usize, usize) -> Q + Sync + 'a;

/// R₁₂(u,v)R₁₃(u,w)R₂₃(v,w) = R₂₃(v,w)R₁₃(u,w)R₁₂(u,v) on every basis vector of V⊗V⊗V.
pub fn yang_baxter_holds(rank: usize, element: &Element<'_>, u: &Q, v: &Q, w: &Q) -> Result<bool> {
    for t in all_tuples(rank, 3) {
        let e = SparseState::basis(rank, t)?;
        let r = |a: &Q, b: &Q, sa, sb, s: &SparseState<Q>| {
            apply_pair_operator(rank, |i, j, k, l| element(a, b, i, j, k, l), sa, sb, s)
        };
        let lhs = r(u, v, 0, 1, &r(u, w, 0, 2, &r(v, w, 1, 2, &e)?)?)?;
        let rhs = r(v, w, 1, 2, &r(u, w, 0, 2, &r(u, v, 0, 1, &e)?)?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

fn spectral_slots(flavor: RFlavor, count: usize) -> Slots {
    let (name, kind) = flavor.coupling_slot();
    Slots::new().with(name, kind).family("u", count)
}

pub fn check_yang_baxter(flavor: RFlavor, rank: usize, plan: &SamplePlan) -> VerificationReport {
    let check = Check::new("yang-baxter", "yang-baxter-equation").flavor(flavor).instance(Instance::rank(rank));
    check.run(plan, &spectral_slots(flavor, 3), |a| {
        let c: Coupling<Q> = flavor.coupling_from(a)?;
        let [u, v, w] = [a.get("u1"), a.get("u2"), a.get("u3")];
        let elem = |x: &Q, y: &Q, i, j, k, l| r_element(flavor, rank, &c, x, y, i, j, k, l).unwrap_or_default();
        yang_baxter_holds(rank, &elem, u, v, w)
    })
}

/// R₁₂(u,v)R₂₁(v,u) = same(u,v)·same(v,u)·I on V⊗V.
pub fn unitarity_holds<S: Scalar>(flavor: RFlavor, rank: usize, c: &Coupling<S>, u: &S, v: &S) -> Result<bool> {
    let scalar = c.same(u, v) * c.same(v, u);
    for t in all_tuples(rank, 2) {
        let e = SparseState::basis(rank, t)?;
        let once = apply_r_two_sites(flavor, c, v, u, 1, 0, &e)?;
        let twice = apply_r_two_sites(flavor, c, u, v, 0, 1, &once)?;
        if twice != e.scale(&scalar) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn check_unitarity(flavor: RFlavor, rank: usize, plan: &SamplePlan) -> VerificationReport {
    let check = Check::new("unitarity", "unitarity-relation").flavor(flavor).instance(Instance::rank(rank));
    check.run(plan, &spectral_slots(flavor, 2), |a| {
        let c: Coupling<Q> = flavor.coupling_from(a)?;
        unitarity_holds(flavor, rank, &c, a.get("u1"), a.get("u2"))
    })
}

/// [R̃]_{ij}^{kl} = [R]_{N+1−i,N+1−j}^{N+1−k,N+1−l} on one random quadruple per sample.
pub fn check_flavor_duality(rank: usize, plan: &SamplePlan) -> VerificationReport {
    let check = Check::new("flavor-duality", "trig-convention-relation").instance(Instance::rank(rank));
    let slots = spectral_slots(RFlavor::TrigA, 2)
        .with("i", SlotKind::Free)
        .with("j", SlotKind::Free)
        .with("k", SlotKind::Free)
        .with("l", SlotKind::Free);
    check.run(plan, &slots, |a| {
        let c: Coupling<Q> = RFlavor::TrigA.coupling_from(a)?;
        let idx = |name: &str| {
            let v = a.get(name).numer().clone() % num_bigint::BigInt::from(rank as u64);
            let v: i64 = v.try_into().unwrap_or(0);
            v.unsigned_abs() as usize + 1
        };
        let (i, j, k, l) = (idx("i"), idx("j"), idx("k"), idx("l"));
        let f = |x: usize| rank + 1 - x;
        let (u, v) = (a.get("u1"), a.get("u2"));
        let b = r_element(RFlavor::TrigB, rank, &c, u, v, i, j, k, l)?;
        let aa = r_element(RFlavor::TrigA, rank, &c, u, v, f(i), f(j), f(k), f(l))?;
        Ok(b == aa)
    })
}
