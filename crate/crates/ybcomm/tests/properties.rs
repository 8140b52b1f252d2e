use num_traits::{One, Zero};
use proptest::prelude::*;
use ybcomm::bethe::GtPartition;
use ybcomm::monodromy::MonodromyContext;
use ybcomm::rmatrix::r_element;
use ybcomm::scalar::q_frac;
use ybcomm::series::truncated_exp;
use ybcomm::special::{ik_determinant, weight_w, ColorWord};
use ybcomm::tensor::{all_tuples, pair, relabel_subset, SparseState};
use ybcomm::{Coupling, RFlavor, Scalar, TruncatedSeries, Q};

fn rational() -> impl Strategy<Value = Q> {
    (-40i64..=40, 1i64..=9).prop_map(|(n, d)| q_frac(n, d))
}

fn nonzero() -> impl Strategy<Value = Q> {
    rational().prop_filter("nonzero", |x| !x.is_zero())
}

fn coupling(flavor: RFlavor) -> impl Strategy<Value = Coupling<Q>> {
    nonzero()
        .prop_filter("generic coupling", |x| x.clone() * x.clone() != Q::one())
        .prop_map(move |x| Coupling::for_flavor(flavor, x).expect("nonzero coupling"))
}

fn distinct(count: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::btree_set(rational(), count)
        .prop_map(|s| s.into_iter().collect())
}

fn flavor() -> impl Strategy<Value = RFlavor> {
    prop::sample::select(RFlavor::ALL.to_vec())
}

fn series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(rational(), 0..=order + 1).prop_map(move |c| TruncatedSeries::new(c, order))
}

fn state(rank: usize, len: usize) -> impl Strategy<Value = SparseState<Q>> {
    prop::collection::vec(rational(), rank.pow(len as u32)).prop_map(move |coefs| {
        let mut s = SparseState::zero(rank, len);
        for (t, c) in all_tuples(rank, len).into_iter().zip(coefs) {
            s.add_term(t, c);
        }
        s
    })
}

fn rotate<T: Clone>(xs: &[T], k: usize) -> Vec<T> {
    let mut v = xs.to_vec();
    if !v.is_empty() {
        let k = k % v.len();
        v.rotate_left(k);
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_form_a_field(a in rational(), b in rational(), c in nonzero()) {
        prop_assert_eq!((a.clone() + b.clone()) * c.clone(), a.clone() * c.clone() + b.clone() * c.clone());
        prop_assert_eq!(c.clone() * Scalar::inv(&c).unwrap(), Q::one());
        prop_assert_eq!(a.clone() - a.clone(), Q::zero());
    }

    #[test]
    fn series_multiplication_is_a_commutative_ring(a in series(4), b in series(4), c in series(4)) {
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b + a * c);
    }

    #[test]
    fn truncated_exponential_is_additive(x in rational(), y in rational()) {
        prop_assert_eq!(truncated_exp(&x, 5) * truncated_exp(&y, 5), truncated_exp(&(x + y), 5));
    }

    #[test]
    fn pairing_is_bilinear(s1 in state(2, 3), s2 in state(2, 3), d in state(2, 3), k in rational()) {
        let d = d.into_dual();
        let mut combo = s1.clone();
        combo.add_scaled(&s2, &k).unwrap();
        let lhs = pair(&d, &combo).unwrap();
        prop_assert_eq!(lhs, pair(&d, &s1).unwrap() + k * pair(&d, &s2).unwrap());
    }

    #[test]
    fn relabelling_is_monotone(outer in prop::collection::btree_set(1usize..30, 1..10), pick in any::<u64>()) {
        let outer: Vec<usize> = outer.into_iter().collect();
        let inner: Vec<usize> = outer.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, x)| *x).collect();
        let rel = relabel_subset(&outer, &inner).unwrap();
        prop_assert!(rel.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(rel.iter().all(|&p| p >= 1 && p <= outer.len()));
        let back: Vec<usize> = rel.iter().map(|&p| outer[p - 1]).collect();
        prop_assert_eq!(back, inner);
    }

    #[test]
    fn trig_conventions_are_related_by_index_reversal(
        rank in 2usize..=4,
        c in coupling(RFlavor::TrigA),
        u in rational(),
        v in rational(),
        idx in prop::array::uniform4(0usize..4),
    ) {
        let [i, j, k, l] = idx.map(|x| x % rank + 1);
        let f = |x: usize| rank + 1 - x;
        let b = r_element(RFlavor::TrigB, rank, &c, &u, &v, i, j, k, l).unwrap();
        let a = r_element(RFlavor::TrigA, rank, &c, &u, &v, f(i), f(j), f(k), f(l)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn r_matrix_conserves_colours(
        flavor in flavor(),
        seed in nonzero(),
        u in rational(),
        v in rational(),
        idx in prop::array::uniform4(1usize..=3),
    ) {
        prop_assume!(seed.clone() * seed.clone() != Q::one());
        let c = Coupling::for_flavor(flavor, seed).unwrap();
        let [i, j, k, l] = idx;
        let e = r_element(flavor, 3, &c, &u, &v, i, j, k, l).unwrap();
        let mut input = [i, j];
        let mut output = [k, l];
        input.sort_unstable();
        output.sort_unstable();
        if input != output {
            prop_assert!(e.is_zero());
        }
    }

    #[test]
    fn dual_action_is_the_transpose(
        flavor in flavor(),
        seed in nonzero(),
        xi in distinct(2),
        u in rational(),
        s in state(2, 2),
        d in state(2, 2),
        i in 1usize..=2,
        j in 1usize..=2,
    ) {
        prop_assume!(seed.clone() * seed.clone() != Q::one());
        let ctx = MonodromyContext::new(flavor, 2, Coupling::for_flavor(flavor, seed).unwrap(), xi).unwrap();
        let d = d.into_dual();
        let left = pair(&ctx.apply_dual_element(i, j, &u, &d).unwrap(), &s).unwrap();
        let right = pair(&d, &ctx.apply_element(i, j, &u, &s).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn same_entry_operators_commute(
        flavor in flavor(),
        seed in nonzero(),
        xi in distinct(3),
        us in prop::collection::vec(rational(), 3),
        s in state(2, 3),
        i in 1usize..=2,
        j in 1usize..=2,
        shift in 0usize..3,
    ) {
        prop_assume!(seed.clone() * seed.clone() != Q::one());
        let ctx = MonodromyContext::new(flavor, 2, Coupling::for_flavor(flavor, seed).unwrap(), xi).unwrap();
        let a = ctx.apply_multiset(i, j, &us, &s).unwrap();
        let b = ctx.apply_multiset(i, j, &rotate(&us, shift), &s).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn weight_function_is_symmetric_in_each_layer(
        flavor in prop::sample::select(vec![RFlavor::TrigA, RFlavor::Rational]),
        seed in nonzero(),
        colors in prop::collection::vec(1usize..=3, 1..=3),
        pool in prop::collection::vec(rational(), 12),
        shift in 1usize..3,
    ) {
        prop_assume!(seed.clone() * seed.clone() != Q::one());
        let c = Coupling::for_flavor(flavor, seed).unwrap();
        let word = ColorWord::new(3, colors).unwrap();
        let mut it = pool.into_iter();
        let layers: Vec<Vec<Q>> = word.layer_sizes().iter().map(|&k| it.by_ref().take(k).collect()).collect();
        let v: Vec<Q> = it.take(word.len()).collect();
        let base = weight_w(&c, &layers, &v, &word);
        prop_assume!(base.is_ok());
        for p in 0..layers.len() {
            let mut moved = layers.clone();
            moved[p] = rotate(&moved[p], shift);
            prop_assert_eq!(weight_w(&c, &moved, &v, &word).ok(), base.clone().ok());
        }
    }

    #[test]
    fn izergin_korepin_is_symmetric(
        flavor in prop::sample::select(vec![RFlavor::TrigA, RFlavor::Rational]),
        seed in nonzero(),
        u in prop::collection::btree_set(-30i64..30, 3),
        v in prop::collection::btree_set(31i64..60, 3),
        shift in 1usize..3,
    ) {
        prop_assume!(seed.clone() * seed.clone() != Q::one());
        let c = Coupling::for_flavor(flavor, seed).unwrap();
        let u: Vec<Q> = u.into_iter().map(|x| q_frac(x, 1)).collect();
        let v: Vec<Q> = v.into_iter().map(|x| q_frac(x, 2)).collect();
        let k = ik_determinant(&c, &u, &v).unwrap();
        prop_assert_eq!(ik_determinant(&c, &rotate(&u, shift), &v).unwrap(), k.clone());
        prop_assert_eq!(ik_determinant(&c, &u, &rotate(&v, shift)).unwrap(), k);
    }

    #[test]
    fn labelled_partitions_are_counted_by_colourings(rank in 1usize..=4, n in 0usize..=4) {
        prop_assert_eq!(GtPartition::all(rank, n).len(), rank.pow(n as u32));
        prop_assert_eq!(ColorWord::all(rank, n).len(), rank.pow(n as u32));
    }
}
