//! Partition functions computed by explicit lattice contraction.

use itertools::Itertools;

use num_traits::One;

use crate::bethe::GtPartition;
use crate::commutation::nested_same_product;
use crate::error::{Error, Result};
use crate::monodromy::{MonodromyContext, OpWord};
use crate::report::{Instance, VerificationReport};
use crate::rmatrix::{Coupling, RFlavor};
use crate::sample::{Assignment, Check, SamplePlan, Slots};
use crate::scalar::{prod2, Scalar, Q};
use crate::special::{ik_determinant, weight_w, ColorWord};
use crate::tensor::{ColorTuple, SparseState};

fn contract<S: Scalar>(
    flavor: RFlavor,
    c: &Coupling<S>,
    rank: usize,
    xi: Vec<S>,
    word: &OpWord<S>,
    dual: &[usize],
) -> Result<S> {
    let ctx = MonodromyContext::new(flavor, rank, c.clone(), xi)?;
    if dual.len() != ctx.n() {
        return Err(Error::Shape(format!("boundary word of length {} for {} sites", dual.len(), ctx.n())));
    }
    let out = ctx.apply_word(word, &ctx.constant_state(rank)?)?;
    Ok(out.get(&ColorTuple::new(rank, dual)?))
}

fn runs(sizes: &[usize]) -> Vec<usize> {
    sizes.iter().enumerate().flat_map(|(j, &m)| std::iter::repeat_n(j + 1, m)).collect()
}

/// H(ū|v̄) = e*_{1^n} T₂₁(ū; v̄) e_{2^n}.
pub fn domain_wall<S: Scalar>(flavor: RFlavor, c: &Coupling<S>, u: &[S], v: &[S]) -> Result<S> {
    domain_wall_colored(flavor, c, 2, 1, u, v)
}

/// W_j(ū|v̄) = e*_{j^n} T_{Nj}(ū; v̄) e_{N^n}.
pub fn domain_wall_colored<S: Scalar>(flavor: RFlavor, c: &Coupling<S>, rank: usize, j: usize, u: &[S], v: &[S]) -> Result<S> {
    if u.len() != v.len() {
        return Err(Error::Shape(format!("|ū| = {} but |v̄| = {}", u.len(), v.len())));
    }
    if j == 0 || j >= rank {
        return Err(Error::Index(format!("colour {j} must lie in 1..{rank}")));
    }
    let word = OpWord::new().then(rank, j, u);
    contract(flavor, c, rank, v.to_vec(), &word, &vec![j; u.len()])
}

fn lower_word<S: Scalar>(rank: usize, families: &[Vec<S>]) -> OpWord<S> {
    let mut word = OpWord::new();
    for (j, f) in families.iter().enumerate() {
        word.push(rank, j + 1, f);
    }
    word
}

/// H(ū¹,…,ū^{N−1} | v̄¹,…,v̄^{N−1}) on the rectangular grid.
pub fn grid_h<S: Scalar>(flavor: RFlavor, c: &Coupling<S>, u: &[Vec<S>], v: &[Vec<S>]) -> Result<S> {
    if u.len() != v.len() {
        return Err(Error::Shape("grid H needs as many quantum families as auxiliary ones".into()));
    }
    let sizes: Vec<usize> = u.iter().map(Vec::len).collect();
    if v.iter().map(Vec::len).ne(sizes.iter().copied()) {
        return Err(Error::Shape("grid H needs |ū^j| = |v̄^j|".into()));
    }
    let rank = u.len() + 1;
    contract(flavor, c, rank, v.concat(), &lower_word(rank, u), &runs(&sizes))
}

/// The enlarged grid K(ū¹,…,ū^{N−1} | v̄¹,…,v̄^N).
pub fn grid_k<S: Scalar>(flavor: RFlavor, c: &Coupling<S>, u: &[Vec<S>], v: &[Vec<S>]) -> Result<S> {
    if u.len() + 1 != v.len() {
        return Err(Error::Shape("grid K needs N quantum families and N−1 auxiliary ones".into()));
    }
    let mut sizes: Vec<usize> = u.iter().map(Vec::len).collect();
    if v.iter().zip(&sizes).any(|(a, &m)| a.len() != m) {
        return Err(Error::Shape("grid K needs |ū^j| = |v̄^j| for j < N".into()));
    }
    sizes.push(v[v.len() - 1].len());
    let rank = v.len();
    contract(flavor, c, rank, v.concat(), &lower_word(rank, u), &runs(&sizes))
}

/// K(w̄_{J₁},…,w̄_{J_{N−1}} | w̄ | I) = e*_I T_{N1}(w̄_{J₁}; w̄)⋯T_{N,N−1}(w̄_{J_{N−1}}; w̄) e_{N^n}.
pub fn grid_k_colored<S: Scalar>(flavor: RFlavor, c: &Coupling<S>, wj: &[Vec<S>], w: &[S], word: &ColorWord) -> Result<S> {
    if wj.len() + 1 != word.rank {
        return Err(Error::Shape(format!("{} families for rank {}", wj.len(), word.rank)));
    }
    contract(flavor, c, word.rank, w.to_vec(), &lower_word(word.rank, wj), &word.colors)
}

/// F(ū¹,…,ū^N | v̄¹,…,v̄^{N−1}): grid H with the T_{NN}(ū^N) columns appended.
pub fn grid_f<S: Scalar>(flavor: RFlavor, c: &Coupling<S>, u: &[Vec<S>], v: &[Vec<S>]) -> Result<S> {
    if u.len() != v.len() + 1 {
        return Err(Error::Shape("grid F needs N auxiliary families and N−1 quantum ones".into()));
    }
    let sizes: Vec<usize> = v.iter().map(Vec::len).collect();
    if u.iter().zip(&sizes).any(|(a, &m)| a.len() != m) {
        return Err(Error::Shape("grid F needs |ū^j| = |v̄^j| for j < N".into()));
    }
    let rank = u.len();
    let mut word = lower_word(rank, &u[..rank - 1]);
    word.push(rank, rank, &u[rank - 1]);
    contract(flavor, c, rank, v.concat(), &word, &runs(&sizes))
}

/// The layered partition function ψ(ū¹,…,ū^{N−1} | v̄ | I).
///
/// The top layer carries lines ū^{N−1} over quantum lines v̄ from the all-N
/// boundary to e*_I; its lines exit in the colours of an interface word c,
/// which becomes the boundary of the layers below (with quantum lines ū^{N−1}).
pub fn psi_layered<S: Scalar>(flavor: RFlavor, c: &Coupling<S>, layers: &[Vec<S>], v: &[S], word: &ColorWord) -> Result<S> {
    let rank = word.rank;
    if layers.len() + 1 != rank {
        return Err(Error::Shape(format!("{} layers for rank {rank}", layers.len())));
    }
    if v.len() != word.len() {
        return Err(Error::Shape(format!("{} quantum parameters for a word of length {}", v.len(), word.len())));
    }
    let sizes = word.layer_sizes();
    if layers.iter().map(Vec::len).ne(sizes.iter().copied()) {
        return Err(Error::Shape("layer sizes do not match the colour word".into()));
    }
    if rank == 1 {
        return Ok(S::one());
    }
    let top = &layers[rank - 2];
    let ctx = MonodromyContext::new(flavor, rank, c.clone(), v.to_vec())?;
    let target = ColorTuple::new(rank, &word.colors)?;
    let lower_colors: Vec<usize> = word.colors.iter().copied().filter(|&x| x < rank).sorted().collect();
    let mut total = S::zero();
    for interface in lower_colors.iter().copied().permutations(lower_colors.len()).unique() {
        let mut w = OpWord::new();
        for (a, &ca) in interface.iter().enumerate() {
            w.push(rank, ca, std::slice::from_ref(&top[a]));
        }
        let amplitude = ctx.apply_word(&w, &ctx.constant_state(rank)?)?.get(&target);
        if amplitude.is_zero() {
            continue;
        }
        let lower = ColorWord::new(rank - 1, interface)?;
        total = total + amplitude * psi_layered(flavor, c, &layers[..rank - 2], top, &lower)?;
    }
    Ok(total)
}

/// The ordered list of layered words I of length `len` over `rank` colours whose
/// layer sizes are all at most `cap`.
pub fn capped_words(rank: usize, len: usize, cap: usize) -> Vec<ColorWord> {
    ColorWord::all(rank, len).into_iter().filter(|w| w.layer_sizes().iter().all(|&k| k <= cap)).collect()
}

/// Builds a state from a boundary word; used by tests and the CLI.
pub fn boundary_state<S: Scalar>(word: &ColorWord) -> Result<SparseState<S>> {
    SparseState::basis_colors(word.rank, &word.colors)
}


fn flavor_slots(flavor: RFlavor) -> Slots {
    let (name, kind) = flavor.coupling_slot();
    Slots::new().with(name, kind)
}

/// ψ = W for every layered word of length `len` with layers ≤ `cap`.
pub fn check_psi_equals_w(flavor: RFlavor, rank: usize, len: usize, cap: usize, plan: &SamplePlan) -> VerificationReport {
    let words = crate::special::capped(rank, len, cap);
    let mut slots = flavor_slots(flavor);
    for j in 1..rank {
        slots = slots.family(&format!("u{j}_"), cap.min(len));
    }
    slots = slots.family("v", len);
    Check::new("layered-partition-function", "partition-function-equals-weight-function")
        .flavor(flavor)
        .instance(Instance::rank(rank).n(len).detail(format!("layer cap {cap}, {} words", words.len())))
        .run(plan, &slots, |a| {
            let c: Coupling<Q> = flavor.coupling_from(a)?;
            let v = a.family("v", len);
            for word in &words {
                let layers = crate::special::word_layers(a, word);
                if psi_layered(flavor, &c, &layers, &v, word)? != weight_w(&c, &layers, &v, word)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
}

/// H = K, with H symmetric in ū.
pub fn check_domain_wall(flavor: RFlavor, n: usize, plan: &SamplePlan) -> VerificationReport {
    let slots = flavor_slots(flavor).family("u", n).family("v", n);
    Check::new("domain-wall-determinant", "domain-wall-equals-izergin-korepin")
        .flavor(flavor)
        .instance(Instance::rank(2).n(n))
        .run(plan, &slots, |a| {
            let c: Coupling<Q> = flavor.coupling_from(a)?;
            let (u, v) = (a.family("u", n), a.family("v", n));
            let h = domain_wall(flavor, &c, &u, &v)?;
            let mut ur = u.clone();
            ur.rotate_left(1.min(n));
            Ok(h == ik_determinant(&c, &u, &v)? && h == domain_wall(flavor, &c, &ur, &v)?)
        })
}

fn family_slots(flavor: RFlavor, prefix: &str, sizes: &[usize]) -> Slots {
    let mut s = flavor_slots(flavor);
    for (j, &m) in sizes.iter().enumerate() {
        s = s.family(&format!("{prefix}{}_", j + 1), m);
    }
    s
}

fn families(a: &Assignment, prefix: &str, sizes: &[usize]) -> Vec<Vec<Q>> {
    sizes.iter().enumerate().map(|(j, &m)| a.family(&format!("{prefix}{}_", j + 1), m)).collect()
}

fn same_all<S: Scalar>(c: &Coupling<S>, xs: &[Vec<S>], y: &[S]) -> S {
    xs.iter().fold(S::one(), |acc, x| acc * prod2(x, y, |a, b| c.same(a, b)))
}

/// Enlarged grid: K(ū|v̄¹..v̄^N) = Π_j (qū^j − q⁻¹v̄^N) H(ū|v̄¹..v̄^{N−1}); `sizes` = (m_1,…,m_N).
pub fn check_enlarged_grid(flavor: RFlavor, sizes: &[usize], plan: &SamplePlan) -> VerificationReport {
    let rank = sizes.len();
    let slots = family_slots(flavor, "u", &sizes[..rank - 1]);
    let slots = sizes.iter().enumerate().fold(slots, |s, (j, &m)| s.family(&format!("v{}_", j + 1), m));
    Check::new("enlarged-grid", "enlarged-grid-frozen-column")
        .flavor(flavor)
        .instance(Instance::rank(rank).sizes(sizes))
        .run(plan, &slots, |a| {
            let c: Coupling<Q> = flavor.coupling_from(a)?;
            let u = families(a, "u", &sizes[..rank - 1]);
            let v = families(a, "v", sizes);
            let k = grid_k(flavor, &c, &u, &v)?;
            let h = grid_h(flavor, &c, &u, &v[..rank - 1])?;
            Ok(k == same_all(&c, &u, &v[rank - 1]) * h)
        })
}

/// K(ū|v̄) · Π_ℓ Π_{j≤ℓ} Π_{k≤ℓ+1} (qū^j − q⁻¹ū^k) = W(ū¹, ū¹∪ū², … | v̄ | 1^{m_1}⋯N^{m_N}).
pub fn check_grid_weight_form(flavor: RFlavor, sizes: &[usize], plan: &SamplePlan) -> VerificationReport {
    let rank = sizes.len();
    let slots = family_slots(flavor, "u", &sizes[..rank - 1]);
    let slots = sizes.iter().enumerate().fold(slots, |s, (j, &m)| s.family(&format!("v{}_", j + 1), m));
    Check::new("grid-weight-function-form", "grid-as-weight-function")
        .flavor(flavor)
        .instance(Instance::rank(rank).sizes(sizes))
        .run(plan, &slots, |a| {
            let c: Coupling<Q> = flavor.coupling_from(a)?;
            let u = families(a, "u", &sizes[..rank - 1]);
            let v = families(a, "v", sizes);
            let layers: Vec<Vec<Q>> = (1..rank).map(|j| u[..j].concat()).collect();
            let word = ColorWord::new(rank, runs(sizes))?;
            let w = weight_w(&c, &layers, &v.concat(), &word)?;
            Ok(grid_k(flavor, &c, &u, &v)? * nested_same_product(&c, &u) == w)
        })
}

/// ψ(w̄_{J₁}, w̄_{J₁}∪w̄_{J₂}, … | w̄ | I) = Π(q w̄_{J_j} − q⁻¹ w̄_{J_k}) K(w̄_{J₁},…|w̄|I) for all J and compatible I.
pub fn check_colored_grid(flavor: RFlavor, rank: usize, n: usize, plan: &SamplePlan) -> VerificationReport {
    let slots = flavor_slots(flavor).family("w", n);
    Check::new("coloured-grid", "layered-partition-function-as-coloured-grid")
        .flavor(flavor)
        .instance(Instance::rank(rank).n(n).detail("all J, all compatible I"))
        .run(plan, &slots, |a| {
            let c: Coupling<Q> = flavor.coupling_from(a)?;
            let w = a.family("w", n);
            let words = ColorWord::all(rank, n);
            for part in GtPartition::all(rank, n) {
                let wj: Vec<Vec<Q>> = (1..rank).map(|j| part.values(&w, j)).collect();
                let layers: Vec<Vec<Q>> = (1..rank).map(|j| part.union(&w, 1, j)).collect();
                let k: Vec<usize> = layers.iter().map(Vec::len).collect();
                let pre = nested_same_product(&c, &wj);
                for word in words.iter().filter(|x| x.layer_sizes() == k) {
                    if psi_layered(flavor, &c, &layers, &w, word)? != pre.clone() * grid_k_colored(flavor, &c, &wj, &w, word)? {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        })
}

/// F(ū¹..ū^N|v̄) = Π_j (qū^N − q⁻¹v̄^j) H(ū¹..ū^{N−1}|v̄); `sizes` = (m_1,…,m_N).
pub fn check_grid_f(flavor: RFlavor, sizes: &[usize], plan: &SamplePlan) -> VerificationReport {
    let rank = sizes.len();
    let slots = family_slots(flavor, "u", sizes);
    let slots = sizes[..rank - 1].iter().enumerate().fold(slots, |s, (j, &m)| s.family(&format!("v{}_", j + 1), m));
    Check::new("grid-with-diagonal-column", "grid-f-factorisation")
        .flavor(flavor)
        .instance(Instance::rank(rank).sizes(sizes))
        .run(plan, &slots, |a| {
            let c: Coupling<Q> = flavor.coupling_from(a)?;
            let u = families(a, "u", sizes);
            let v = families(a, "v", &sizes[..rank - 1]);
            let f = grid_f(flavor, &c, &u, &v)?;
            let h = grid_h(flavor, &c, &u[..rank - 1], &v)?;
            let top = std::slice::from_ref(&u[rank - 1]);
            Ok(f == v.iter().fold(Q::one(), |acc, vj| acc * same_all(&c, top, vj)) * h)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_frac, q_int};

    fn trig() -> Coupling<Q> {
        Coupling::trig(q_frac(7, 2)).unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q_int(x)).collect()
    }

    #[test]
    fn one_vertex_domain_wall() {
        let c = trig();
        let u = q_int(5);
        assert_eq!(domain_wall(RFlavor::TrigA, &c, std::slice::from_ref(&u), &ints(&[9])).unwrap(), c.turn(&u));
        assert_eq!(domain_wall_colored(RFlavor::TrigA, &c, 3, 2, std::slice::from_ref(&u), &ints(&[9])).unwrap(), c.turn(&u));
    }

    #[test]
    fn domain_wall_matches_ik_at_fixed_point() {
        let c = trig();
        let (u, v) = (ints(&[3, -4, 10]), ints(&[7, 2, -9]));
        assert_eq!(domain_wall(RFlavor::TrigA, &c, &u, &v).unwrap(), ik_determinant(&c, &u, &v).unwrap());
    }

    #[test]
    fn coloured_domain_wall_at_coincident_parameters() {
        let c = trig();
        let v = ints(&[3, -8]);
        let expected: Q = v.iter().cartesian_product(&v).map(|(a, b)| c.same(a, b)).product();
        assert_eq!(domain_wall_colored(RFlavor::TrigA, &c, 3, 1, &v, &v).unwrap(), expected);
    }

    #[test]
    fn empty_grids_are_one() {
        let c = trig();
        assert_eq!(grid_h::<Q>(RFlavor::TrigA, &c, &[vec![], vec![]], &[vec![], vec![]]).unwrap(), q_int(1));
        let w = ColorWord::new(3, vec![3, 3]).unwrap();
        assert_eq!(grid_k_colored(RFlavor::TrigA, &c, &[vec![], vec![]], &ints(&[4, 6]), &w).unwrap(), q_int(1));
        assert_eq!(psi_layered(RFlavor::TrigA, &c, &[vec![], vec![]], &ints(&[4, 6]), &w).unwrap(), q_int(1));
    }

    #[test]
    fn psi_equals_w_single_layer() {
        let c = trig();
        let w = ColorWord::new(2, vec![1, 2]).unwrap();
        let layers = vec![ints(&[6])];
        let v = ints(&[-5, 12]);
        assert_eq!(
            psi_layered(RFlavor::TrigA, &c, &layers, &v, &w).unwrap(),
            weight_w(&c, &layers, &v, &w).unwrap()
        );
    }

    #[test]
    fn f_adds_frozen_column() {
        let c = trig();
        let u = vec![ints(&[2]), ints(&[-7])];
        let v = vec![ints(&[11])];
        let f = grid_f(RFlavor::TrigA, &c, &u, &v).unwrap();
        let h = domain_wall(RFlavor::TrigA, &c, &u[0], &v[0]).unwrap();
        assert_eq!(f, c.same(&u[1][0], &v[0][0]) * h);
    }

    #[test]
    fn size_mismatches_rejected() {
        let c = trig();
        assert!(domain_wall(RFlavor::TrigA, &c, &ints(&[1]), &ints(&[2, 3])).is_err());
        assert!(grid_h(RFlavor::TrigA, &c, &[ints(&[1])], &[ints(&[2, 3])]).is_err());
    }

    #[test]
    fn identities_at_rank_three() {
        let plan = SamplePlan::new(11, 2);
        for flavor in [RFlavor::TrigA, RFlavor::Rational] {
            assert!(check_psi_equals_w(flavor, 3, 3, 2, &plan).passed(), "{flavor}");
            assert!(check_domain_wall(flavor, 3, &plan).passed(), "{flavor}");
            assert!(check_enlarged_grid(flavor, &[1, 2, 1], &plan).passed(), "{flavor}");
            assert!(check_grid_weight_form(flavor, &[1, 1, 1], &plan).passed(), "{flavor}");
            assert!(check_colored_grid(flavor, 3, 3, &plan).passed(), "{flavor}");
            assert!(check_grid_f(flavor, &[1, 2, 1], &plan).passed(), "{flavor}");
        }
    }
}
