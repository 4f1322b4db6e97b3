mod common;

use common::rng;
use proptest::prelude::*;
use rand::Rng;
use supercone_core::dynamics::{EtaPath, ScalarPath, TwoBitSystem};
use supercone_core::linalg::EPSILON2;
use supercone_core::superforms::{
    dhat_partial_inverse, euler_inverse, hodge_decompose, kernel_lift, reconstruct, split_omega, SuperForm,
};
use supercone_core::{Error, Scalar, I};

fn c(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}

/// Terms as `(x exponents, θ mask, dx mask, dθ exponents, re, im)`.
type RawTerm = (Vec<u32>, u32, u32, Vec<u32>, i32, i32);

fn raw_terms(n: usize, m: usize) -> impl Strategy<Value = Vec<RawTerm>> {
    let term = (
        prop::collection::vec(0u32..=2, n),
        0u32..(1 << m),
        0u32..(1 << n),
        prop::collection::vec(0u32..=1, m),
        -5i32..=5,
        -5i32..=5,
    );
    prop::collection::vec(term, 1..8)
}

fn build(n: usize, m: usize, terms: &[RawTerm]) -> SuperForm {
    let mut f = SuperForm::zero(n, m).unwrap();
    for (x, theta, dx, dtheta, re, im) in terms {
        f = f.with_term(x, *theta, *dx, dtheta, Scalar::new(*re as f64, *im as f64)).unwrap();
    }
    f
}

fn random_form() -> impl Strategy<Value = SuperForm> {
    (0usize..=3, 1usize..=3)
        .prop_flat_map(|(n, m)| (Just(n), Just(m), raw_terms(n, m)))
        .prop_map(|(n, m, t)| build(n, m, &t))
}

fn rand_poly_coeff(r: &mut impl Rng) -> f64 {
    f64::from(r.random_range(-4i32..=4)) / 2.0
}

/// `θ`-free horizontal one-form `λ_i(x) dxⁱ` with quadratic coefficients.
fn random_lambda(r: &mut impl Rng, n: usize, m: usize) -> SuperForm {
    let mut f = SuperForm::zero(n, m).unwrap();
    for i in 0..n {
        for _ in 0..3 {
            let x: Vec<u32> = (0..n).map(|_| r.random_range(0..=2)).collect();
            f = f.with_term(&x, 0, 1 << i, &vec![0; m], c(rand_poly_coeff(r))).unwrap();
        }
    }
    f
}

/// A function of `θ` and `x` of the requested `θ`-parity.
fn random_function_terms(r: &mut impl Rng, n: usize, m: usize, parity: u32, dx: u32, dtheta: &[u32]) -> SuperForm {
    let mut f = SuperForm::zero(n, m).unwrap();
    for theta in 0..1u32 << m {
        if theta.count_ones() % 2 != parity {
            continue;
        }
        for _ in 0..2 {
            let x: Vec<u32> = (0..n).map(|_| r.random_range(0..=1)).collect();
            let z = Scalar::new(rand_poly_coeff(r), rand_poly_coeff(r));
            f = f.with_term(&x, theta, dx, dtheta, z).unwrap();
        }
    }
    f
}

/// A closed even two-form assembled from `(ω₀, β, γ)`.
fn random_closed(r: &mut impl Rng, n: usize, m: usize) -> (SuperForm, SuperForm) {
    let omega0 = random_lambda(r, n, m).d_horiz();
    let mut beta = SuperForm::zero(n, m).unwrap();
    for i in 0..n {
        beta = beta.add(&random_function_terms(r, n, m, 0, 1 << i, &vec![0; m])).unwrap();
    }
    let mut gamma = SuperForm::zero(n, m).unwrap();
    for a in 0..m {
        let mut e = vec![0; m];
        e[a] = 1;
        gamma = gamma.add(&random_function_terms(r, n, m, 1, 0, &e)).unwrap();
    }
    let omega = reconstruct(&omega0, &beta, &gamma).unwrap();
    (omega0, omega)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn differentials_square_to_zero(f in random_form()) {
        prop_assert!(f.d_horiz().d_horiz().max_abs() == 0.0);
        prop_assert!(f.d_vert().unwrap().d_vert().unwrap().max_abs() == 0.0);
        let anti = f.d_horiz().d_vert().unwrap().add(&f.d_vert().unwrap().d_horiz()).unwrap();
        prop_assert!(anti.max_abs() == 0.0);
        prop_assert!(f.d_total().unwrap().d_total().unwrap().max_abs() == 0.0);
    }

    #[test]
    fn euler_inverse_is_a_homotopy(f in random_form()) {
        // d̂K + Kd̂ = 1 on forms of positive weight
        let f = f.filter(|k| k.weight() > 0);
        let lhs = euler_inverse(&f).d_vert_unbounded().add(&euler_inverse(&f.d_vert_unbounded())).unwrap();
        prop_assert!(lhs.max_abs_diff(&f) < 1e-12);
    }

    #[test]
    fn euler_inverse_anticommutes_with_d(f in random_form()) {
        let lhs = euler_inverse(&f.d_horiz()).add(&euler_inverse(&f).d_horiz()).unwrap();
        prop_assert!(lhs.max_abs() < 1e-12);
    }

    #[test]
    fn dhat_inverse_of_closed_forms(f in random_form()) {
        let g = f.d_vert().unwrap();
        if g.terms().all(|(k, _)| k.dtheta_degree() > 0) {
            prop_assert!(dhat_partial_inverse(&g).unwrap().d_vert_unbounded().max_abs_diff(&g) < 1e-12);
        }
    }

    #[test]
    fn parity_is_consistent(f in random_form(), g in random_form()) {
        for (k, _) in f.terms() {
            prop_assert_eq!(k.parity(), (k.theta_degree() + k.dx_degree()) as u32 % 2);
        }
        if let (Some(p), true) = (f.parity(), f.n() == g.n() && f.m() == g.m()) {
            if !f.d_horiz().is_empty() {
                prop_assert_eq!(f.d_horiz().parity(), Some(1 - p));
            }
            if let (Some(q), Ok(prod)) = (g.parity(), f.clone().with_truncation(8).with_max_poly_degree(16).mul(&g.clone())) {
                if !prod.is_empty() {
                    prop_assert_eq!(prod.parity(), Some((p + q) % 2));
                }
            }
        }
    }

    #[test]
    fn wedge_obeys_leibniz(f in random_form(), g in random_form()) {
        if f.n() == g.n() && f.m() == g.m() {
            let (f, g) = (f.with_truncation(8).with_max_poly_degree(16), g.with_truncation(8).with_max_poly_degree(16));
            if let Some(p) = f.parity() {
                let sign = if p == 0 { 1.0 } else { -1.0 };
                let lhs = f.mul(&g).unwrap().d_total_unbounded();
                let rhs = f
                    .d_total_unbounded()
                    .mul(&g)
                    .unwrap()
                    .add(&f.mul(&g.d_total_unbounded()).unwrap().scale(c(sign)))
                    .unwrap();
                prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            }
        }
    }
}

#[test]
fn decomposition_roundtrips_random_closed_forms() {
    let mut r = rng(2024);
    for n in 1..=3 {
        for _ in 0..40 {
            let (_, omega) = random_closed(&mut r, n, 2);
            assert!(omega.d_total_unbounded().max_abs() < 1e-12);
            let split = split_omega(&omega).unwrap();
            assert!(split.quartet().unwrap().max() < 1e-12);
            let dec = hodge_decompose(&omega).unwrap();
            assert!(dec.reconstruct().unwrap().max_abs_diff(&omega) < 1e-12);
        }
    }
}

#[test]
fn non_closed_perturbation_is_detected() {
    let mut r = rng(7);
    for n in 1..=3 {
        let (_, omega) = random_closed(&mut r, n, 2);
        let mut x = vec![0; n];
        x[0] = 1;
        let bad = omega.with_term(&x, 0, 0, &[2, 0], c(1.0)).unwrap();
        assert!(split_omega(&bad).unwrap().quartet().unwrap().dhat_a_plus_d_eta > 0.5);
        assert!(matches!(hodge_decompose(&bad), Err(Error::NotClosed { .. })));
    }
}

#[test]
fn bosonic_form_has_no_fermionic_potentials() {
    let omega = SuperForm::zero(2, 2).unwrap().with_term(&[0, 0], 0, 0b11, &[0, 0], c(1.0)).unwrap();
    let dec = hodge_decompose(&omega).unwrap();
    assert!(dec.beta.is_empty() && dec.gamma.is_empty());
    assert_eq!(dec.omega0, omega);
}

fn two_bit_system() -> TwoBitSystem {
    let eta = EtaPath::Poly(vec![[[2.0, 0.3], [0.3, 1.0]], [[0.2, -0.1], [-0.1, 0.4]]]);
    TwoBitSystem::new(eta, ScalarPath::Poly(vec![1.5, -0.5]), 0.0, 1.0, None).unwrap()
}

#[test]
fn two_bit_form_matches_closed_expression() {
    // Ω = iη_ab dθᵃdθᵇ − i(H ε_ba + η′_ab) θᵇ dθᵃ dt
    let sys = two_bit_system();
    let omega = sys.omega_form().unwrap();
    let (eta0, eta1) = ([[2.0, 0.3], [0.3, 1.0]], [[0.2, -0.1], [-0.1, 0.4]]);
    let (h0, h1) = (1.5, -0.5);
    let mut expected = SuperForm::zero(1, 2).unwrap();
    for (k, e) in [eta0, eta1].iter().enumerate() {
        for a in 0..2 {
            for b in 0..2 {
                let mut d = [0u32; 2];
                d[a] += 1;
                d[b] += 1;
                expected = expected.with_term(&[k as u32], 0, 0, &d, I * e[a][b]).unwrap();
            }
        }
    }
    for a in 0..2 {
        for b in 0..2 {
            let mut d = [0u32; 2];
            d[a] = 1;
            // H(t) ε_ba + η′_ab(t) = (h0 + h1 t) ε_ba + η1_ab
            let constant = h0 * EPSILON2[b][a] + eta1[a][b];
            let linear = h1 * EPSILON2[b][a];
            expected = expected.with_term(&[0], 1 << b, 1, &d, -I * constant).unwrap();
            expected = expected.with_term(&[1], 1 << b, 1, &d, -I * linear).unwrap();
        }
    }
    assert!(omega.max_abs_diff(&expected) < 1e-15);
    assert!(omega.d_total().unwrap().max_abs() < 1e-15);
}

#[test]
fn two_bit_kernel_is_the_dynamics_generator() {
    let sys = two_bit_system();
    let split = split_omega(&sys.omega_form().unwrap()).unwrap();
    for &t in &[0.0, 0.3, 0.75, 1.0] {
        let lift = kernel_lift(&split, &[t], &[1.0]).unwrap();
        assert!(lift.residual < 1e-12);
        assert!(lift.field.is_even());
        assert!((lift.field.base[0].body() - c(1.0)).norm() < 1e-12);
        assert!(lift.field.base[0].soul().max_abs() < 1e-12);
        let m = sys.generator_m(t).unwrap();
        for b in 0..2 {
            for a in 0..2 {
                let got = lift.field.fiber[b].coeff(1 << a);
                assert!((got - c(m[b][a])).norm() < 1e-12, "t={t} b={b} a={a}");
            }
        }
    }
}

#[test]
fn kernel_lift_on_random_closed_forms() {
    let mut r = rng(99);
    let mut checked = 0;
    while checked < 30 {
        let (omega0, omega) = random_closed(&mut r, 3, 2);
        let x0: Vec<f64> = (0..3).map(|_| r.random_range(-1.0..1.0)).collect();
        let w = |i: u32, j: u32| omega0.component_at(&x0, (1 << i) | (1 << j), &[0, 0]).unwrap().body().re;
        // kernel of a 3×3 antisymmetric matrix: its dual vector
        let rho0 = [w(1, 2), -w(0, 2), w(0, 1)];
        let norm: f64 = rho0.iter().map(|x| x * x).sum::<f64>().sqrt();
        let split = split_omega(&omega).unwrap();
        match kernel_lift(&split, &x0, &rho0) {
            Ok(lift) => {
                assert!(lift.residual < 1e-12 * norm.max(1.0), "residual {}", lift.residual);
                assert!(lift.field.is_even());
                let direct = lift.field.contract(&omega, &x0).unwrap().max_abs();
                assert!(direct < 1e-12 * norm.max(1.0));
                checked += 1;
            }
            // degenerate draws: vanishing ω₀ or singular fiber block
            Err(Error::ZeroNorm | Error::Singular) => {}
            Err(e) => panic!("{e:?}"),
        }
    }
}

#[test]
fn kernel_lift_rejects_non_kernel_direction() {
    let omega = SuperForm::zero(3, 2)
        .unwrap()
        .with_term(&[0, 0, 0], 0, 0b011, &[0, 0], c(1.0))
        .unwrap()
        .with_term(&[0, 0, 0], 0, 0, &[2, 0], I)
        .unwrap()
        .with_term(&[0, 0, 0], 0, 0, &[0, 2], I)
        .unwrap();
    let split = split_omega(&omega).unwrap();
    assert!(matches!(kernel_lift(&split, &[0.0; 3], &[1.0, 0.0, 0.0]), Err(Error::NotInKernel { .. })));
    let lift = kernel_lift(&split, &[0.0; 3], &[0.0, 0.0, 1.0]).unwrap();
    assert_eq!(lift.residual, 0.0);
}

#[test]
fn truncation_overflow_is_reported() {
    let f = SuperForm::zero(0, 1).unwrap().with_truncation(1).with_term(&[], 1, 0, &[1], c(1.0)).unwrap();
    assert_eq!(f.d_vert().unwrap_err(), Error::TruncationOverflow { degree: 2, limit: 1 });
}
