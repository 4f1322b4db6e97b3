mod common;

use common::{hermitean_unit, integer_homogeneous, integer_multivector, naive_product};
use proptest::prelude::*;
use supercone_core::grassmann::{blade_product_sign, MAX_GENERATORS};
use supercone_core::{Error, Multivector, Scalar};

fn blade(m: usize, mask: u32) -> Multivector {
    Multivector::blade(m, mask, Scalar::new(1.0, 0.0))
}

#[test]
fn blade_products_match_word_reordering_exhaustively() {
    for m in 0..=3 {
        for a in 0..1u32 << m {
            for b in 0..1u32 << m {
                let x = blade(m, a);
                let y = blade(m, b);
                assert_eq!(x.product(&y).unwrap(), naive_product(&x, &y), "m={m} a={a:b} b={b:b}");
            }
        }
    }
}

#[test]
fn associativity_exhaustive_up_to_three() {
    for m in 0..=3 {
        for a in 0..1u32 << m {
            for b in 0..1u32 << m {
                for c in 0..1u32 << m {
                    let (x, y, z) = (blade(m, a), blade(m, b), blade(m, c));
                    assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
                }
            }
        }
    }
}

#[test]
fn graded_commutativity_exhaustive_up_to_three() {
    for m in 0..=3 {
        for a in 0..1u32 << m {
            for b in 0..1u32 << m {
                let (p, q) = (a.count_ones(), b.count_ones());
                let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(&blade(m, a) * &blade(m, b), (&blade(m, b) * &blade(m, a)) * sign);
            }
        }
    }
}

#[test]
fn dagger_of_blades_reverses_words() {
    for m in 0..=3 {
        for mask in 0..1u32 << m {
            let k = mask.count_ones();
            // reversing k generators takes k(k-1)/2 transpositions
            let sign = if (k * k.saturating_sub(1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let f = Multivector::blade(m, mask, Scalar::new(0.5, 2.0));
            assert_eq!(f.dagger(), Multivector::blade(m, mask, Scalar::new(0.5, -2.0) * sign));
        }
    }
}

#[test]
fn berezin_is_iterated_left_derivative() {
    for m in 0..=3 {
        for mask in 0..1u32 << m {
            let f = blade(m, mask);
            let mut g = f.clone();
            for a in 0..m {
                g = g.left_derivative(a);
            }
            assert_eq!(f.berezin(), g.body(), "m={m} mask={mask:b}");
        }
    }
}

#[test]
fn berezin_of_top_blade() {
    let top = &Multivector::generator(2, 0) * &Multivector::generator(2, 1);
    assert_eq!(top.berezin(), Scalar::new(1.0, 0.0));
    let reversed = &Multivector::generator(2, 1) * &Multivector::generator(2, 0);
    assert_eq!(reversed.berezin(), Scalar::new(-1.0, 0.0));
}

#[test]
fn hermitean_product_can_be_antihermitean() {
    let t1 = Multivector::generator(2, 0);
    let t2 = Multivector::generator(2, 1);
    assert!(t1.is_hermitean() && t2.is_hermitean());
    let p = &t1 * &t2;
    assert!(!p.is_hermitean());
    assert_eq!(p.dagger(), -p);
}

#[test]
fn shape_and_grades() {
    for m in 0..=MAX_GENERATORS {
        let f = Multivector::zero(m);
        assert_eq!(f.coeffs().len(), 1 << m);
    }
    let f = Multivector::from_terms(3, [(0b101, Scalar::new(1.0, 0.0)), (0b111, Scalar::new(2.0, 0.0))]).unwrap();
    assert_eq!(f.grade(2).unwrap().terms().collect::<Vec<_>>(), vec![(0b101, Scalar::new(1.0, 0.0))]);
    assert_eq!(f.max_grade(), Some(3));
    assert!(matches!(Multivector::try_zero(13), Err(Error::GeneratorCount(13))));
    assert!(matches!(
        Multivector::zero(2).product(&Multivector::zero(3)),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn product_sign_rejects_overlap() {
    assert_eq!(blade_product_sign(0b01, 0b01), None);
    assert_eq!(blade_product_sign(0b10, 0b01), Some(-1.0));
    assert_eq!(blade_product_sign(0b01, 0b10), Some(1.0));
}

fn homogeneous_pair() -> impl Strategy<Value = (Multivector, u32, Multivector, u32)> {
    (1usize..=6)
        .prop_flat_map(|m| (Just(m), 0..=m as u32, 0..=m as u32))
        .prop_flat_map(|(m, p, q)| (integer_homogeneous(m, p), Just(p), integer_homogeneous(m, q), Just(q)))
}

fn triple() -> impl Strategy<Value = (Multivector, Multivector, Multivector)> {
    (1usize..=6).prop_flat_map(|m| (integer_multivector(m), integer_multivector(m), integer_multivector(m)))
}

fn pair() -> impl Strategy<Value = (Multivector, Multivector)> {
    (1usize..=6).prop_flat_map(|m| (integer_multivector(m), integer_multivector(m)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_associative((a, b, c) in triple()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn product_matches_oracle((a, b) in pair()) {
        prop_assert_eq!(&a * &b, naive_product(&a, &b));
    }

    #[test]
    fn graded_commutativity((a, p, b, q) in homogeneous_pair()) {
        let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert_eq!(&a * &b, (&b * &a) * sign);
    }

    #[test]
    fn dagger_involution_and_antilinear((a, b) in pair(), re in -4i32..4, im in -4i32..4) {
        let lambda = Scalar::new(re as f64, im as f64);
        prop_assert_eq!(a.dagger().dagger(), a.clone());
        prop_assert_eq!(a.scale(lambda).dagger(), a.dagger().scale(lambda.conj()));
        prop_assert_eq!((&a * &b).dagger(), &b.dagger() * &a.dagger());
    }

    #[test]
    fn berezin_kills_generator_times_low_grade(
        (m, g) in (2usize..=6).prop_flat_map(|m| (Just(m), integer_multivector(m))),
        a in 0usize..6,
    ) {
        let a = a % m;
        let mut low = Multivector::zero(m);
        for k in 0..m - 1 {
            low = low + g.grade(k).unwrap();
        }
        prop_assert_eq!((&Multivector::generator(m, a) * &low).berezin(), Scalar::new(0.0, 0.0));
    }

    #[test]
    fn left_derivative_is_graded_leibniz((a, p, b, _q) in homogeneous_pair(), k in 0usize..6) {
        let k = k % a.m();
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        let lhs = (&a * &b).left_derivative(k);
        let rhs = &a.left_derivative(k) * &b + (&a * &b.left_derivative(k)) * sign;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn right_derivative_is_graded_leibniz((a, _p, b, q) in homogeneous_pair(), k in 0usize..6) {
        let k = k % a.m();
        let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
        let lhs = (&a * &b).right_derivative(k);
        let rhs = &a * &b.right_derivative(k) + (&a.right_derivative(k) * &b) * sign;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn hermitean_phases_are_hermitean(m in 0usize..=6, mask in 0u32..64) {
        let mask = mask & ((1u32 << m) - 1);
        let f = Multivector::blade(m, mask, hermitean_unit(mask.count_ones()));
        prop_assert!(f.is_hermitean());
    }
}
