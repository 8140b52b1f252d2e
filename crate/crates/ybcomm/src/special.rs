//! Closed-form special functions: weight functions, Izergin–Korepin determinants and f(u,v).

use itertools::Itertools;
use num_traits::Zero;

use crate::error::{domain, Error, Result};
use crate::linalg::determinant;
use crate::laurent::Laurent;
use crate::report::{Instance, VerificationReport};
use crate::rmatrix::{Coupling, RFlavor};
use crate::sample::{Assignment, Check, SamplePlan, Slots};
use crate::scalar::{prod2, q_frac, Scalar, Q};
use crate::series::truncated_exp;
use crate::tensor::relabel_subset;

/// A colour word I = (i_1,…,i_L) over 1..N.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorWord {
    pub rank: usize,
    pub colors: Vec<usize>,
}

impl ColorWord {
    pub fn new(rank: usize, colors: Vec<usize>) -> Result<Self> {
        if let Some(c) = colors.iter().find(|&&c| c == 0 || c > rank) {
            return Err(Error::Index(format!("colour {c} outside 1..={rank}")));
        }
        Ok(ColorWord { rank, colors })
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// I^j: the 1-based positions coloured ≤ j.
    pub fn layer_set(&self, j: usize) -> Vec<usize> {
        (1..=self.len()).filter(|&p| self.colors[p - 1] <= j).collect()
    }

    /// k_j = |I^j| for j = 1..N−1.
    pub fn layer_sizes(&self) -> Vec<usize> {
        (1..self.rank).map(|j| self.layer_set(j).len()).collect()
    }

    /// All words of length `len` over 1..rank.
    pub fn all(rank: usize, len: usize) -> Vec<ColorWord> {
        crate::tensor::all_tuples(rank, len)
            .into_iter()
            .map(|t| ColorWord { rank, colors: t.colors() })
            .collect()
    }
}

/// The weight function W(ū¹,…,ū^{N−1} | v̄ | I); the coupling selects the trigonometric or rational kind.
pub fn weight_w<S: Scalar>(c: &Coupling<S>, layers: &[Vec<S>], v: &[S], word: &ColorWord) -> Result<S> {
    let rank = word.rank;
    if layers.len() + 1 != rank {
        return Err(Error::Shape(format!("{} layers for rank {rank}", layers.len())));
    }
    if v.len() != word.len() {
        return Err(Error::Shape(format!("{} quantum parameters for a word of length {}", v.len(), word.len())));
    }
    let sizes = word.layer_sizes();
    for (p, layer) in layers.iter().enumerate() {
        if layer.len() != sizes[p] {
            return Err(Error::Shape(format!("layer {} has {} parameters, colour word needs {}", p + 1, layer.len(), sizes[p])));
        }
    }
    for layer in layers {
        if layer.iter().tuple_combinations().any(|(a, b)| a == b) {
            return Err(domain("coincident parameters within a layer"));
        }
    }
    // positions of each layer's lines among the next layer's quantum lines
    let mut positions = Vec::with_capacity(rank - 1);
    for p in 1..rank {
        let inner = word.layer_set(p);
        positions.push(if p + 1 < rank { relabel_subset(&word.layer_set(p + 1), &inner)? } else { inner });
    }
    if layers.is_empty() {
        return Ok(S::one());
    }
    let mut total = S::zero();
    for perms in layers.iter().map(|l| (0..l.len()).permutations(l.len())).multi_cartesian_product() {
        total = total + weight_term(c, layers, v, &positions, &perms)?;
    }
    Ok(total)
}

fn weight_term<S: Scalar>(
    c: &Coupling<S>,
    layers: &[Vec<S>],
    v: &[S],
    positions: &[Vec<usize>],
    perms: &[Vec<usize>],
) -> Result<S> {
    let mut term = S::one();
    let top = layers.len();
    for p in 0..top {
        let up: Vec<&S> = perms[p].iter().map(|&s| &layers[p][s]).collect();
        let quantum: Vec<&S> = if p + 1 < top { perms[p + 1].iter().map(|&s| &layers[p + 1][s]).collect() } else { v.iter().collect() };
        for (a, &ia) in positions[p].iter().enumerate() {
            for q in &quantum[..ia - 1] {
                term = term * (up[a].clone() - (*q).clone());
            }
            term = term * c.turn(up[a]);
            for q in &quantum[ia..] {
                term = term * c.same(up[a], q);
            }
        }
        for a in 0..up.len() {
            for b in a + 1..up.len() {
                term = term * c.sym(up[a], up[b])?;
            }
        }
    }
    Ok(term)
}

fn check_square<S: Scalar>(u: &[S], v: &[S]) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::Shape(format!("|ū| = {} but |v̄| = {}", u.len(), v.len())));
    }
    for set in [u, v] {
        if set.iter().tuple_combinations().any(|(a, b)| a == b) {
            return Err(domain("coincident parameters"));
        }
    }
    Ok(())
}

fn vandermonde<S: Scalar>(u: &[S], v: &[S]) -> S {
    let mut den = S::one();
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            den = den * (u[i].clone() - u[j].clone()) * (v[j].clone() - v[i].clone());
        }
    }
    den
}

fn polynomial_ik<S: Scalar>(c: &Coupling<S>, u: &[S], v: &[S], kernel: impl Fn(usize, usize) -> S) -> Result<S> {
    check_square(u, v)?;
    let n = u.len();
    let m: Vec<Vec<S>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut e = kernel(i, j);
                    for k in (0..n).filter(|&k| k != j) {
                        e = e * c.same(&u[i], &v[k]) * (u[i].clone() - v[k].clone());
                    }
                    e
                })
                .collect()
        })
        .collect();
    determinant(&m)?.div(&vandermonde(u, v))
}

/// K(ū|v̄) through the polynomial-entry determinant.
pub fn ik_determinant<S: Scalar>(c: &Coupling<S>, u: &[S], v: &[S]) -> Result<S> {
    polynomial_ik(c, u, v, |i, _| c.turn(&u[i]))
}

/// K(ū|v̄) through the ratio-entry determinant; requires u_i ≠ v_j and qu_i ≠ q⁻¹v_j.
pub fn ik_determinant_ratio_form<S: Scalar>(c: &Coupling<S>, u: &[S], v: &[S]) -> Result<S> {
    check_square(u, v)?;
    let n = u.len();
    let mut prefactor = S::one();
    let mut m = vec![Vec::with_capacity(n); n];
    for i in 0..n {
        for j in 0..n {
            let w = c.same(&u[i], &v[j]) * (u[i].clone() - v[j].clone());
            prefactor = prefactor * w.clone();
            m[i].push(c.turn(&u[i]).div(&w)?);
        }
    }
    (prefactor * determinant(&m)?).div(&vandermonde(u, v))
}

/// K^{(l)}: kernel (q − q⁻¹)u_i.
pub fn ik_left<S: Scalar>(c: &Coupling<S>, u: &[S], v: &[S]) -> Result<S> {
    polynomial_ik(c, u, v, |i, _| c.turn(&u[i]))
}

/// K^{(r)}: kernel (q − q⁻¹)v_j.
pub fn ik_right<S: Scalar>(c: &Coupling<S>, u: &[S], v: &[S]) -> Result<S> {
    polynomial_ik(c, u, v, |_, j| c.turn(&v[j]))
}

/// f(u, v) = (qu − q⁻¹v)/(u − v).
pub fn f_function<S: Scalar>(c: &Coupling<S>, u: &S, v: &S) -> Result<S> {
    if u == v {
        return Err(domain("f(u, v) has a pole at u = v"));
    }
    c.f(u, v)
}

/// Π_{a∈A} Π_{b∈B} f(a, b).
pub fn f_product<S: Scalar>(c: &Coupling<S>, a: &[S], b: &[S]) -> Result<S> {
    let mut acc = S::one();
    for x in a {
        for y in b {
            acc = acc * f_function(c, x, y)?;
        }
    }
    Ok(acc)
}


fn coupling_slots(flavor: RFlavor) -> Slots {
    let (name, kind) = flavor.coupling_slot();
    Slots::new().with(name, kind)
}

fn layer_slots(flavor: RFlavor, rank: usize, len: usize, cap: usize) -> Slots {
    let mut s = coupling_slots(flavor);
    for j in 1..rank {
        s = s.family(&format!("u{j}_"), cap.min(len));
    }
    s.family("v", len)
}

/// ū^1..ū^{N−1} sized for `word`, taken from the slot families of [`layer_slots`].
pub(crate) fn word_layers(a: &Assignment, word: &ColorWord) -> Vec<Vec<Q>> {
    word.layer_sizes().iter().enumerate().map(|(j, &k)| a.family(&format!("u{}_", j + 1), k)).collect()
}

/// Words of length `len` whose layers all fit under `cap`.
pub(crate) fn capped(rank: usize, len: usize, cap: usize) -> Vec<ColorWord> {
    ColorWord::all(rank, len).into_iter().filter(|w| w.layer_sizes().iter().all(|&k| k <= cap)).collect()
}

/// W is unchanged by a cyclic shift of each ū^p.
pub fn check_weight_symmetry(flavor: RFlavor, rank: usize, len: usize, cap: usize, plan: &SamplePlan) -> VerificationReport {
    let words = capped(rank, len, cap);
    Check::new("weight-function-symmetry", "weight-function-symmetric-in-each-layer")
        .flavor(flavor)
        .instance(Instance::rank(rank).n(len).detail(format!("layer cap {cap}")))
        .run(plan, &layer_slots(flavor, rank, len, cap), |a| {
            let c: Coupling<Q> = flavor.coupling_from(a)?;
            let v = a.family("v", len);
            for word in &words {
                let layers = word_layers(a, word);
                let rotated: Vec<Vec<Q>> = layers
                    .iter()
                    .map(|l| {
                        let mut l = l.clone();
                        let k = 1.min(l.len());
                        l.rotate_left(k);
                        l
                    })
                    .collect();
                if weight_w(&c, &layers, &v, word)? != weight_w(&c, &rotated, &v, word)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
}

fn uv_slots(flavor: RFlavor, n: usize) -> Slots {
    coupling_slots(flavor).family("u", n).family("v", n)
}

/// K is symmetric in ū and in v̄, and both displays agree.
pub fn check_ik_determinant(flavor: RFlavor, n: usize, plan: &SamplePlan) -> VerificationReport {
    Check::new("izergin-korepin-displays", "izergin-korepin-determinant")
        .flavor(flavor)
        .instance(Instance::rank(2).n(n).detail("symmetry and ratio form"))
        .run(plan, &uv_slots(flavor, n), |a| {
            let c: Coupling<Q> = flavor.coupling_from(a)?;
            let (u, v) = (a.family("u", n), a.family("v", n));
            let k = ik_determinant(&c, &u, &v)?;
            let mut ur = u.clone();
            ur.reverse();
            let mut vr = v.clone();
            vr.rotate_left(1.min(n));
            Ok(k == ik_determinant(&c, &ur, &v)? && k == ik_determinant(&c, &u, &vr)? && k == ik_determinant_ratio_form(&c, &u, &v)?)
        })
}

/// K^{(l)}(ū|ū) = K^{(r)}(ū|ū) = Π(qū − q⁻¹ū) and K^{(l)}Πv̄ = K^{(r)}Πū.
pub fn check_ik_left_right(n: usize, plan: &SamplePlan) -> VerificationReport {
    let flavor = RFlavor::TrigA;
    Check::new("izergin-korepin-left-right", "left-and-right-izergin-korepin")
        .flavor(flavor)
        .instance(Instance::rank(2).n(n))
        .run(plan, &uv_slots(flavor, n), |a| {
            let c: Coupling<Q> = flavor.coupling_from(a)?;
            let (u, v) = (a.family("u", n), a.family("v", n));
            let diag = prod2(&u, &u, |x, y| c.same(x, y));
            let pu: Q = u.iter().product();
            let pv: Q = v.iter().product();
            Ok(ik_left(&c, &u, &u)? == diag
                && ik_right(&c, &u, &u)? == diag
                && ik_left(&c, &u, &v)? * pv == ik_right(&c, &u, &v)? * pu)
        })
}

/// The ε-power carried by W under u = e^{εx}, q = e^{εh/2}: one per lattice vertex.
pub fn degeneration_power(word: &ColorWord) -> usize {
    let mut k = word.layer_sizes();
    k.push(word.len());
    k.windows(2).map(|p| p[0] * p[1]).sum()
}

/// Leading ε-coefficient of the trigonometric W at exponential jets, against the rational W.
pub fn weight_degeneration_holds(word: &ColorWord, layers: &[Vec<Q>], v: &[Q], h: &Q) -> Result<bool> {
    let d = degeneration_power(word);
    let rational = weight_w(&Coupling::rational(h.clone())?, layers, v, word)?;
    let mut order = d + 2;
    loop {
        let jet = |x: &Q| Laurent::truncated(truncated_exp(x, order).coefficients(), order as i64 + 1);
        let half = h * q_frac(1, 2);
        let c = Coupling::trig_with_inverse(jet(&half), jet(&-half.clone()));
        let lu: Vec<Vec<Laurent>> = layers.iter().map(|l| l.iter().map(jet).collect()).collect();
        let lv: Vec<Laurent> = v.iter().map(jet).collect();
        let w = weight_w(&c, &lu, &lv, word)?;
        if w.precision().is_some_and(|p| p <= d as i64) {
            if order > 4 * (d + 2) {
                return Err(domain("degeneration needs more jet order than allowed"));
            }
            order *= 2;
            continue;
        }
        for k in 0..d as i64 {
            if !w.coefficient(k)?.is_zero() {
                return Ok(false);
            }
        }
        return Ok(w.coefficient(d as i64)? == rational);
    }
}

pub fn check_weight_degeneration(rank: usize, len: usize, cap: usize, plan: &SamplePlan) -> VerificationReport {
    let words = capped(rank, len, cap);
    let slots = layer_slots(RFlavor::Rational, rank, len, cap);
    Check::new("weight-function-degeneration", "trigonometric-weight-function-limit")
        .flavor(RFlavor::TrigA)
        .instance(Instance::rank(rank).n(len).detail(format!("layer cap {cap}")))
        .run(plan, &slots, |a| {
            let v = a.family("v", len);
            for word in &words {
                if !weight_degeneration_holds(word, &word_layers(a, word), &v, a.get("h"))? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_int;

    fn trig() -> Coupling<Q> {
        Coupling::trig(q_frac(5, 3)).unwrap()
    }

    #[test]
    fn empty_weight_function_is_one() {
        let w = ColorWord::new(3, vec![3, 3]).unwrap();
        let v = vec![q_int(2), q_int(9)];
        assert_eq!(weight_w(&trig(), &[vec![], vec![]], &v, &w).unwrap(), q_int(1));
    }

    #[test]
    fn single_line_weight_function() {
        let c = trig();
        let (u, v1, v2) = (q_int(4), q_int(-7), q_int(10));
        let w = ColorWord::new(2, vec![1, 2]).unwrap();
        let got = weight_w(&c, &[vec![u.clone()]], &[v1, v2.clone()], &w).unwrap();
        assert_eq!(got, c.turn(&u) * c.same(&u, &v2));
    }

    #[test]
    fn weight_function_rejects_bad_sizes() {
        let w = ColorWord::new(2, vec![1, 2]).unwrap();
        assert!(weight_w(&trig(), &[vec![]], &[q_int(1), q_int(2)], &w).is_err());
        let w = ColorWord::new(2, vec![1, 1]).unwrap();
        assert!(matches!(
            weight_w(&trig(), &[vec![q_int(3), q_int(3)]], &[q_int(1), q_int(2)], &w),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn ik_small_cases() {
        let c = trig();
        let u = q_int(3);
        assert_eq!(ik_determinant(&c, std::slice::from_ref(&u), &[q_int(8)]).unwrap(), c.turn(&u));
        let h = Coupling::rational(q_int(7)).unwrap();
        assert_eq!(ik_determinant(&h, &[q_int(2)], &[q_int(5)]).unwrap(), q_int(7));
        let v = q_int(8);
        assert_eq!(ik_left(&c, std::slice::from_ref(&u), std::slice::from_ref(&v)).unwrap(), c.turn(&u));
        assert_eq!(ik_right(&c, &[u], std::slice::from_ref(&v)).unwrap(), c.turn(&v));
    }

    #[test]
    fn ik_diagonal_factorization() {
        let c = trig();
        let u = vec![q_int(3), q_int(-11), q_int(17)];
        let expected: Q = u.iter().flat_map(|a| u.iter().map(move |b| (a, b))).map(|(a, b)| c.same(a, b)).product();
        assert_eq!(ik_left(&c, &u, &u).unwrap(), expected);
        assert_eq!(ik_right(&c, &u, &u).unwrap(), expected);
    }

    #[test]
    fn f_values() {
        let c = trig();
        assert_eq!(f_function(&c, &q_int(6), &q_int(0)).unwrap(), q_frac(5, 3));
        assert!(f_function(&c, &q_int(6), &q_int(6)).is_err());
    }

    #[test]
    fn sampled_identities() {
        let plan = SamplePlan::new(5, 2);
        for flavor in [RFlavor::TrigA, RFlavor::Rational] {
            assert!(check_weight_symmetry(flavor, 3, 3, 2, &plan).passed());
            assert!(check_ik_determinant(flavor, 3, &plan).passed());
        }
        assert!(check_ik_left_right(3, &plan).passed());
    }

    #[test]
    fn weight_function_degenerates() {
        let r = check_weight_degeneration(3, 3, 2, &SamplePlan::new(5, 1));
        assert!(r.passed(), "{r:?}");
    }
}
