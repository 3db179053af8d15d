use proptest::prelude::*;
use singer_core::field::{prime_power, FieldOp, FieldSpec};

const SMALL_FIELDS: [(u64, u32); 9] = [(2, 1), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 1), (7, 2), (13, 1)];

// Irreducible monic cubics over GF(2) found by checking for roots.
#[test]
fn gf2_cubic_modulus_matches_root_oracle() {
    let irreducible: Vec<[u32; 4]> = (0..4u32)
        .map(|bits| [1, bits & 1, bits >> 1, 1])
        .filter(|c| (0..2u32).all(|x| (c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x) % 2 != 0))
        .collect();
    assert_eq!(irreducible, [[1, 1, 0, 1], [1, 0, 1, 1]]);
    assert_eq!(FieldSpec::new(2, 3).unwrap().modulus(), &irreducible[0]);
}

#[test]
fn prime_field_inverses_match_brute_force() {
    let f = FieldSpec::new(7, 1).unwrap();
    for a in 1..7u32 {
        let brute = (1..7u32).find(|b| a * b % 7 == 1).unwrap();
        assert_eq!(f.inv(&f.scalar(a)).unwrap(), f.scalar(brute));
    }
}

#[test]
fn primitive_elements_generate_the_unit_group() {
    for (p, n) in SMALL_FIELDS {
        let f = FieldSpec::new(p, n).unwrap();
        let g = f.primitive_element();
        assert_eq!(f.multiplicative_order(&g).unwrap(), u64::from(f.order() - 1), "GF({p}^{n})");
        // Every smaller-index nonzero element has a smaller order.
        for i in 1..f.index(&g) {
            let a = f.from_index(i);
            assert!(f.multiplicative_order(&a).unwrap() < u64::from(f.order() - 1));
        }
    }
}

#[test]
fn prime_powers_by_factoring() {
    for q in 1..200u64 {
        let oracle = (2..=q).find(|d| q % d == 0).and_then(|p| {
            let mut m = q;
            let mut n = 0;
            while m % p == 0 {
                m /= p;
                n += 1;
            }
            (m == 1).then_some((p, n))
        });
        assert_eq!(prime_power(q), oracle, "q={q}");
    }
}

fn field_and_elements() -> impl Strategy<Value = (u64, u32, u32, u32, u32)> {
    proptest::sample::select(SMALL_FIELDS.to_vec()).prop_flat_map(|(p, n)| {
        let size = (p as u32).pow(n);
        (Just(p), Just(n), 0..size, 0..size, 0..size)
    })
}

proptest! {
    #[test]
    fn element_orders_divide_group_order((p, n, i, _, _) in field_and_elements()) {
        let f = FieldSpec::new(p, n).unwrap();
        let a = f.from_index(i);
        if a.is_zero() {
            prop_assert!(f.multiplicative_order(&a).is_err());
        } else {
            let order = f.multiplicative_order(&a).unwrap();
            prop_assert_eq!(u64::from(f.order() - 1) % order, 0);
            prop_assert_eq!(f.pow(&a, order), f.one());
        }
    }

    #[test]
    fn ring_axioms((p, n, i, j, k) in field_and_elements()) {
        let f = FieldSpec::new(p, n).unwrap();
        let (a, b, c) = (f.from_index(i), f.from_index(j), f.from_index(k));
        prop_assert_eq!(f.mul(&a, &f.mul(&b, &c)), f.mul(&f.mul(&a, &b), &c));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
        prop_assert_eq!(f.sub(&f.add(&a, &b), &b), a.clone());
        if !a.is_zero() {
            prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        } else {
            prop_assert!(f.arith(&a, &b, FieldOp::Inv).is_err());
        }
        prop_assert_eq!(f.arith(&a, &b, FieldOp::Mul).unwrap(), f.mul(&a, &b));
    }

    #[test]
    fn index_round_trip((p, n, i, _, _) in field_and_elements()) {
        let f = FieldSpec::new(p, n).unwrap();
        prop_assert_eq!(f.index(&f.from_index(i)), i);
    }
}
