#![allow(dead_code)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use supercone_core::measure::FiberMetric;
use supercone_core::{Multivector, Scalar};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small integer coefficients keep every product exact in `f64`.
pub fn integer_multivector(m: usize) -> impl Strategy<Value = Multivector> {
    prop::collection::vec((-6i32..=6, -6i32..=6), 1 << m).prop_map(move |c| {
        let coeffs = c.into_iter().map(|(a, b)| Scalar::new(a as f64, b as f64)).collect();
        Multivector::from_coeffs(m, coeffs).unwrap()
    })
}

pub fn integer_homogeneous(m: usize, grade: u32) -> impl Strategy<Value = Multivector> {
    integer_multivector(m).prop_map(move |mut f| {
        for mask in 0..(1u32 << m) {
            if mask.count_ones() != grade {
                f.set_coeff(mask, Scalar::new(0.0, 0.0));
            }
        }
        f
    })
}

/// Phase making `c θ^M` hermitean: real for `⌊k/2⌋` even, imaginary otherwise.
pub fn hermitean_unit(grade: u32) -> Scalar {
    if (grade / 2) % 2 == 0 {
        Scalar::new(1.0, 0.0)
    } else {
        Scalar::new(0.0, 1.0)
    }
}

pub fn random_multivector(rng: &mut impl Rng, m: usize) -> Multivector {
    let coeffs = (0..1usize << m)
        .map(|_| Scalar::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    Multivector::from_coeffs(m, coeffs).unwrap()
}

pub fn random_hermitean(rng: &mut impl Rng, m: usize) -> Multivector {
    let coeffs = (0..1u32 << m)
        .map(|mask| hermitean_unit(mask.count_ones()) * rng.random_range(-1.0..1.0))
        .collect();
    Multivector::from_coeffs(m, coeffs).unwrap()
}

/// `AᵀA + 0.5·1` with `A` uniform in `[-1, 1]`.
pub fn random_spd(rng: &mut impl Rng, m: usize) -> FiberMetric {
    let a: Vec<f64> = (0..m * m).map(|_| rng.random_range(-1.0..1.0)).collect();
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| (0..m).map(|k| a[k * m + i] * a[k * m + j]).sum::<f64>() + if i == j { 0.5 } else { 0.0 })
                .collect()
        })
        .collect();
    FiberMetric::from_rows(&rows).unwrap()
}

/// Product by explicit reordering of generator words (bubble sort sign).
pub fn naive_product(a: &Multivector, b: &Multivector) -> Multivector {
    let m = a.m();
    let mut out = Multivector::zero(m);
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            if ma & mb != 0 {
                continue;
            }
            let mut word: Vec<u32> = (0..m as u32).filter(|i| ma >> i & 1 == 1).collect();
            word.extend((0..m as u32).filter(|i| mb >> i & 1 == 1));
            let mut sign = 1.0;
            for i in 0..word.len() {
                for j in 0..word.len() - 1 - i {
                    if word[j] > word[j + 1] {
                        word.swap(j, j + 1);
                        sign = -sign;
                    }
                }
            }
            let c = out.coeff(ma | mb) + ca * cb * sign;
            out.set_coeff(ma | mb, c);
        }
    }
    out
}
