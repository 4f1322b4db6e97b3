//! Seeded random inputs shared by `verify`, `ellipsoid` and the tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use supercone_core::dynamics::{EtaPath, ScalarPath, StateFunction, TwoBitSystem};
use supercone_core::linalg::Mat2;
use supercone_core::measure::FiberMetric;
use supercone_core::superforms::{reconstruct, SuperForm};
use supercone_core::{Multivector, Scalar};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Phase making `c θ^M` hermitean: real for `⌊k/2⌋` even, imaginary otherwise.
pub fn hermitean_unit(grade: u32) -> Scalar {
    if (grade / 2) % 2 == 0 {
        Scalar::new(1.0, 0.0)
    } else {
        Scalar::new(0.0, 1.0)
    }
}

pub fn random_multivector(r: &mut impl Rng, m: usize) -> Multivector {
    let coeffs = (0..1usize << m).map(|_| Scalar::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).collect();
    Multivector::from_coeffs(m, coeffs).expect("m within range")
}

pub fn random_hermitean(r: &mut impl Rng, m: usize) -> Multivector {
    let coeffs = (0..1u32 << m).map(|mask| hermitean_unit(mask.count_ones()) * r.random_range(-1.0..1.0)).collect();
    Multivector::from_coeffs(m, coeffs).expect("m within range")
}

/// `AᵀA + 0.5·1` with `A` uniform in `[-1, 1]`.
pub fn random_spd(r: &mut impl Rng, m: usize) -> FiberMetric {
    let a: Vec<f64> = (0..m * m).map(|_| r.random_range(-1.0..1.0)).collect();
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| (0..m).map(|k| a[k * m + i] * a[k * m + j]).sum::<f64>() + if i == j { 0.5 } else { 0.0 })
                .collect()
        })
        .collect();
    FiberMetric::from_rows(&rows).expect("positive definite by construction")
}

pub fn random_eta(r: &mut impl Rng) -> Mat2 {
    let rows = random_spd(r, 2);
    let e = rows.matrix();
    [[e[(0, 0)], e[(0, 1)]], [e[(1, 0)], e[(1, 1)]]]
}

pub fn random_state(r: &mut impl Rng) -> StateFunction {
    StateFunction::new(
        r.random_range(-1.0..1.0),
        [r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)],
        r.random_range(-1.0..1.0),
    )
}

/// Random state normalized in the metric `η`.
pub fn random_normalized_state(r: &mut impl Rng, eta: &Mat2) -> StateFunction {
    loop {
        let s = random_state(r);
        if let Ok(n) = s.normalized(eta) {
            return n;
        }
    }
}

/// Polynomial `η(t)` and `H(t)` on `[0, 2]`, positive definite throughout.
pub fn time_dependent_system() -> TwoBitSystem {
    let eta = EtaPath::Poly(vec![[[1.5, 0.2], [0.2, 1.0]], [[0.4, -0.1], [-0.1, 0.2]], [[0.1, 0.05], [0.05, 0.3]]]);
    TwoBitSystem::new(eta, ScalarPath::Poly(vec![2.0, 0.5, -0.3]), 0.0, 2.0, None).expect("valid system")
}

/// The shipped two-bit example: `η = [[2, .3], [.3, 1]] + t[[.2, −.1], [−.1, .4]]`,
/// `H = 1.5 − 0.5t` on `[0, 1]`.
pub fn two_bit_example() -> TwoBitSystem {
    let eta = EtaPath::Poly(vec![[[2.0, 0.3], [0.3, 1.0]], [[0.2, -0.1], [-0.1, 0.4]]]);
    TwoBitSystem::new(eta, ScalarPath::Poly(vec![1.5, -0.5]), 0.0, 1.0, None).expect("valid system")
}

fn half_integer(r: &mut impl Rng) -> f64 {
    f64::from(r.random_range(-4i32..=4)) / 2.0
}

/// `θ`-free horizontal one-form `λ_i(x) dxⁱ` with quadratic coefficients.
fn random_lambda(r: &mut impl Rng, n: usize, m: usize) -> SuperForm {
    let mut f = SuperForm::zero(n, m).expect("small dimensions");
    for i in 0..n {
        for _ in 0..3 {
            let x: Vec<u32> = (0..n).map(|_| r.random_range(0..=2)).collect();
            f = f.with_term(&x, 0, 1 << i, &vec![0; m], Scalar::new(half_integer(r), 0.0)).expect("within limits");
        }
    }
    f
}

/// Function of `θ` and `x` with the given `θ`-parity times `dx^I dθ^β`.
fn random_function_terms(r: &mut impl Rng, n: usize, m: usize, parity: u32, dx: u32, dtheta: &[u32]) -> SuperForm {
    let mut f = SuperForm::zero(n, m).expect("small dimensions");
    for theta in 0..1u32 << m {
        if theta.count_ones() % 2 != parity {
            continue;
        }
        for _ in 0..2 {
            let x: Vec<u32> = (0..n).map(|_| r.random_range(0..=1)).collect();
            let z = Scalar::new(half_integer(r), half_integer(r));
            f = f.with_term(&x, theta, dx, dtheta, z).expect("within limits");
        }
    }
    f
}

/// Closed even two-form `Ω` built from random `(ω₀, β, γ)`; returns `(ω₀, Ω)`.
pub fn random_closed_omega(r: &mut impl Rng, n: usize, m: usize) -> (SuperForm, SuperForm) {
    let omega0 = random_lambda(r, n, m).d_horiz();
    let mut beta = SuperForm::zero(n, m).expect("small dimensions");
    for i in 0..n {
        beta = beta.add(&random_function_terms(r, n, m, 0, 1 << i, &vec![0; m])).expect("same shape");
    }
    let mut gamma = SuperForm::zero(n, m).expect("small dimensions");
    for a in 0..m {
        let mut e = vec![0; m];
        e[a] = 1;
        gamma = gamma.add(&random_function_terms(r, n, m, 1, 0, &e)).expect("same shape");
    }
    let omega = reconstruct(&omega0, &beta, &gamma).expect("within truncation");
    (omega0, omega)
}

/// Uniform point of the cube `[0, 1]³` as `(p1, p2, p3)`.
pub fn cube_point(r: &mut impl Rng) -> [f64; 3] {
    [r.random_range(0.0..=1.0), r.random_range(0.0..=1.0), r.random_range(0.0..=1.0)]
}
