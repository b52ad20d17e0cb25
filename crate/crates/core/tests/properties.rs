use proptest::prelude::*;

use pgl2_core::addsub::{homothety_canonical, span, stabilizer_field};
use pgl2_core::groups::{are_conjugate, closure, recognize};
use pgl2_core::{Field, FieldElement, Pgl2, ProjMatrix};

const FIELDS: [(u32, u32); 9] = [
    (2, 1),
    (3, 1),
    (2, 2),
    (5, 1),
    (7, 1),
    (2, 3),
    (3, 2),
    (2, 4),
    (5, 2),
];

fn field_strategy() -> impl Strategy<Value = Field> {
    prop::sample::select(&FIELDS[..]).prop_map(|(p, r)| Field::new(p, r).unwrap())
}

fn with_elements(k: usize) -> impl Strategy<Value = (Field, Vec<FieldElement>)> {
    field_strategy().prop_flat_map(move |f| {
        let q = f.q();
        (Just(f), prop::collection::vec(0..q, k))
    })
    .prop_map(|(f, xs)| {
        let xs = xs.into_iter().map(FieldElement::from_encoding_unchecked).collect();
        (f, xs)
    })
}

fn group_with_matrices(k: usize) -> impl Strategy<Value = (Pgl2, Vec<ProjMatrix>)> {
    prop::sample::select(&FIELDS[..7])
        .prop_map(|(p, r)| Pgl2::new(p, r).unwrap())
        .prop_flat_map(move |g| {
            let n = g.group_order() as usize;
            (Just(g), prop::collection::vec(0..n, k))
        })
        .prop_map(|(g, idx)| {
            let all = g.elements();
            let ms = idx.into_iter().map(|i| all[i]).collect();
            (g, ms)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms((f, xs) in with_elements(3)) {
        let (a, b, c) = (xs[0], xs[1], xs[2]);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            prop_assert_eq!(f.pow(a, f.q() as u64 - 1), FieldElement::ONE);
        }
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative((f, xs) in with_elements(2)) {
        let (a, b) = (xs[0], xs[1]);
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        let mut x = a;
        for _ in 0..f.r() {
            x = f.frobenius(x);
        }
        prop_assert_eq!(x, a);
    }

    #[test]
    fn square_roots_square((f, xs) in with_elements(1)) {
        let a = xs[0];
        if !a.is_zero() {
            let sq = f.is_square(a).unwrap();
            prop_assert_eq!(sq, f.sqrt(a).is_some());
            if let Some(s) = f.sqrt(a) {
                prop_assert_eq!(f.mul(s, s), a);
            }
        }
    }

    #[test]
    fn group_laws((g, ms) in group_with_matrices(3)) {
        let (a, b, c) = (ms[0], ms[1], ms[2]);
        prop_assert_eq!(g.mul(&g.mul(&a, &b), &c), g.mul(&a, &g.mul(&b, &c)));
        prop_assert_eq!(g.mul(&a, &g.inverse(&a)), ProjMatrix::IDENTITY);
        let order = g.order(&a);
        prop_assert!(g.pow(&a, order).is_identity());
        prop_assert_eq!(g.group_order() % order, 0);
        prop_assert_eq!(g.det_class(&g.conjugate(&b, &a)), g.det_class(&a));
        prop_assert_eq!(g.trace_ratio(&g.conjugate(&b, &a)), g.trace_ratio(&a));
    }

    #[test]
    fn canonical_form_ignores_scalars((g, ms) in group_with_matrices(1), s in 1u32..1000) {
        let f = g.field();
        let scalar = FieldElement::from_encoding_unchecked(1 + s % (f.q() - 1));
        let [a, b, c, d] = ms[0].entries();
        let scaled = g.canonicalize([
            [f.mul(scalar, a), f.mul(scalar, b)],
            [f.mul(scalar, c), f.mul(scalar, d)],
        ]).unwrap();
        prop_assert_eq!(scaled, ms[0]);
        prop_assert_eq!(g.parse_matrix(&ms[0].to_string()).unwrap(), ms[0]);
    }

    #[test]
    fn conjugacy_of_generated_groups((g, ms) in group_with_matrices(3)) {
        let h = closure(&g, &ms[..2], None).unwrap();
        let moved = h.conjugate_by(&ms[2]);
        let w = are_conjugate(&h, &moved);
        prop_assert!(w.is_some());
        prop_assert_eq!(h.conjugate_by(&w.unwrap()), moved.clone());
        prop_assert_eq!(are_conjugate(&h, &h).map(|u| h.conjugate_by(&u)), Some(h.clone()));
        prop_assert_eq!(recognize(&h).unwrap(), recognize(&moved).unwrap());
    }

    #[test]
    fn homothety_class_is_scaling_invariant((f, xs) in with_elements(3)) {
        let gamma = span(&f, &xs[..2]);
        if !gamma.is_zero() && !xs[2].is_zero() {
            let scaled = gamma.scale(&f, xs[2]);
            prop_assert_eq!(
                homothety_canonical(&f, &gamma).unwrap(),
                homothety_canonical(&f, &scaled).unwrap()
            );
            prop_assert_eq!(
                stabilizer_field(&f, &gamma).unwrap(),
                stabilizer_field(&f, &scaled).unwrap()
            );
            prop_assert_eq!(gamma.elements(&f).len() as u64, gamma.order(&f));
        }
    }
}
