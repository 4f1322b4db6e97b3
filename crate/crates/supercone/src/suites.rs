//! Invariant suites run by `supercone verify`.
//!
//! Each suite owns its RNG (derived from the run seed and the suite name), so
//! suites can run on separate threads and still give identical reports.

use std::time::Instant;

use nalgebra::Matrix4;
use rand::Rng;
use serde::Serialize;
use supercone_core::clifford::{soul_norm_bound_check, star_matrix, GammaRep};
use supercone_core::dynamics::{
    apply_transition, closed_form_u, evolve, expectation_rate_check, measure_probabilities, probabilities,
    propagator_u, state_from_probabilities, trajectory, transition_for_angle, transition_matrix, Observable,
    ObservablePath, StateFunction, TwoBitSystem,
};
use supercone_core::linalg::{mat2_max_abs_diff, mat2_mul, mat2_transpose};
use supercone_core::measure::{expectation, indicators_m2, vertical_star, FiberMetric, Laboratory};
use supercone_core::superforms::{hodge_decompose, kernel_lift, split_omega};
use supercone_core::{Error, Multivector, Scalar};

use crate::sampling::{
    random_closed_omega, random_eta, random_hermitean, random_multivector, random_normalized_state, random_state, rng,
    time_dependent_system, two_bit_example, SeededRng,
};

pub const SUITES: &[&str] =
    &["algebra", "star", "indicators", "soul", "evolution", "transition", "inversion", "rate", "hodge", "lift"];

/// Deliberate faults for mutation checks of the suites themselves.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Faults {
    /// Flip the sign of every Berezin integral seen by the algebra suite.
    pub berezin_sign: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: usize,
    pub failures: usize,
    pub max_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Tally {
    report: SuiteReport,
}

impl Tally {
    fn new(name: &str) -> Self {
        Self { report: SuiteReport { name: name.into(), checks: 0, failures: 0, max_residual: 0.0, first_failure: None } }
    }

    fn fail(&mut self, what: String) {
        self.report.failures += 1;
        if self.report.first_failure.is_none() {
            self.report.first_failure = Some(what);
        }
    }

    fn check(&mut self, what: &str, ok: bool) {
        self.report.checks += 1;
        if !ok {
            self.fail(what.into());
        }
    }

    fn close(&mut self, what: &str, residual: f64, tol: f64) {
        self.report.checks += 1;
        if residual.is_finite() {
            self.report.max_residual = self.report.max_residual.max(residual);
        }
        if !(residual <= tol) {
            self.fail(format!("{what}: residual {residual:e} > {tol:e}"));
        }
    }

    fn result<T>(&mut self, what: &str, r: Result<T, Error>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.report.checks += 1;
                self.fail(format!("{what}: {e}"));
                None
            }
        }
    }
}

fn suite_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a of the name, mixed into the run seed
    let h = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3));
    seed ^ h
}

pub fn run_suite(name: &str, seed: u64, samples: usize, faults: Faults) -> Option<SuiteReport> {
    let mut r = rng(suite_seed(seed, name));
    let mut t = Tally::new(name);
    let n = samples.max(1);
    let start = Instant::now();
    match name {
        "algebra" => algebra(&mut t, &mut r, n, faults),
        "star" => star(&mut t, &mut r, n),
        "indicators" => indicators(&mut t, &mut r, n),
        "soul" => soul(&mut t, &mut r, n),
        "evolution" => evolution(&mut t, &mut r, n),
        "transition" => transition(&mut t, &mut r, n),
        "inversion" => inversion(&mut t, &mut r, n),
        "rate" => rate(&mut t, &mut r, n),
        "hodge" => hodge(&mut t, &mut r, n),
        "lift" => lift(&mut t, &mut r, n),
        _ => return None,
    }
    log::info!("suite {name}: {} checks in {:.2?}", t.report.checks, start.elapsed());
    Some(t.report)
}

/// Runs the named suites on worker threads; reports come back in input order.
pub fn run_suites(names: &[&str], seed: u64, samples: usize, faults: Faults) -> Vec<SuiteReport> {
    std::thread::scope(|s| {
        let handles: Vec<_> =
            names.iter().map(|&name| s.spawn(move || run_suite(name, seed, samples, faults))).collect();
        handles
            .into_iter()
            .zip(names)
            .map(|(h, name)| match h.join() {
                Ok(Some(rep)) => rep,
                Ok(None) => {
                    let mut t = Tally::new(name);
                    t.check("unknown suite", false);
                    t.report
                }
                Err(_) => {
                    let mut t = Tally::new(name);
                    t.check("suite panicked", false);
                    t.report
                }
            })
            .collect()
    })
}

fn blade(m: usize, mask: u32) -> Multivector {
    Multivector::blade(m, mask, Scalar::new(1.0, 0.0))
}

fn algebra(t: &mut Tally, r: &mut SeededRng, n: usize, faults: Faults) {
    let berezin = |f: &Multivector| if faults.berezin_sign { -f.berezin() } else { f.berezin() };
    for m in 0..=3usize {
        for a in 0..1u32 << m {
            for b in 0..1u32 << m {
                let (x, y) = (blade(m, a), blade(m, b));
                let sign = if (a.count_ones() * b.count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
                t.check("graded commutativity", &x * &y == (&y * &x) * sign);
                for c in 0..1u32 << m {
                    let z = blade(m, c);
                    t.check("associativity", &(&x * &y) * &z == &x * &(&y * &z));
                }
            }
        }
    }
    for m in 1..=3usize {
        let top = (1u32 << m) - 1;
        t.check("berezin of θ¹⋯θᵐ is 1", berezin(&blade(m, top)) == Scalar::new(1.0, 0.0));
    }
    let swapped = &Multivector::generator(2, 1) * &Multivector::generator(2, 0);
    t.check("berezin of θ²θ¹ is −1", berezin(&swapped) == Scalar::new(-1.0, 0.0));
    for k in 0..n {
        let m = 1 + k % 6;
        let (a, b, c) = (random_multivector(r, m), random_multivector(r, m), random_multivector(r, m));
        t.close("associativity", (&(&a * &b) * &c).max_abs_diff(&(&a * &(&b * &c))), 1e-12);
        t.check("dagger involution", a.dagger().dagger() == a);
        t.close("dagger reverses products", (&a * &b).dagger().max_abs_diff(&(&b.dagger() * &a.dagger())), 1e-13);
        let mut g = a.clone();
        for i in 0..m {
            g = g.left_derivative(i);
        }
        t.close("berezin is the iterated left derivative", (berezin(&a) - g.body()).norm(), 0.0);
    }
}

fn star(t: &mut Tally, r: &mut SeededRng, n: usize) {
    let rep = GammaRep::new(2).expect("m = 2");
    let (t1, t2, one) = (Multivector::generator(2, 0), Multivector::generator(2, 1), Multivector::one(2));
    t.check("θ¹⋆θ¹ = 1", rep.star(&t1, &t1).ok() == Some(one.clone()));
    t.check("θ²⋆θ² = 1", rep.star(&t2, &t2).ok() == Some(one));
    t.check("θ¹⋆θ² = θ¹θ²", rep.star(&t1, &t2).ok() == Some(&t1 * &t2));
    t.check("θ²⋆θ¹ = −θ¹θ²", rep.star(&t2, &t1).ok() == Some(-(&t1 * &t2)));
    for m in [2usize, 4] {
        let rep = GammaRep::new(m).expect("even m");
        let flat = FiberMetric::identity(m);
        for _ in 0..n {
            let (f, g) = (random_multivector(r, m), random_multivector(r, m));
            let (Some(a), Some(b)) =
                (t.result("vertical star", vertical_star(&f, &g, &flat)), t.result("matrix star", star_matrix(&f, &g, &rep)))
            else {
                continue;
            };
            t.close("vertical star equals matrix star", a.max_abs_diff(&b), 1e-12);
        }
    }
}

fn indicators(t: &mut Tally, r: &mut SeededRng, n: usize) {
    let ind = indicators_m2();
    let sum = ind.x.iter().fold(Multivector::zero(2), |acc, x| acc + x.clone());
    t.check("indicators sum to 1", sum == Multivector::one(2));
    let rep = GammaRep::new(2).expect("m = 2");
    for (i, psi) in ind.psi.iter().enumerate() {
        for (j, x) in ind.x.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            if let Some(v) = t.result("trace pairing", rep.trace_inner(psi, x)) {
                t.close("indicator duality", (v - Scalar::new(target, 0.0)).norm(), 1e-14);
            }
        }
    }
    for _ in 0..n {
        let eta = random_eta(r);
        let Some(sys) = t.result("system", TwoBitSystem::constant(eta, 1.0, 0.0, 1.0)) else { continue };
        let s = random_normalized_state(r, &eta);
        let Some(p) = t.result("probabilities", measure_probabilities(&sys, &s, 0.0)) else { continue };
        t.check("probabilities in [0, 1/2]", p.p.iter().all(|&x| (-1e-15..=0.5 + 1e-15).contains(&x)));
        t.close("inside the ellipsoid", p.delta_ellipsoid.max(0.0), 1e-12);
        let Some(lab) = t.result("lab", FiberMetric::from_rows(&eta).and_then(|g| Laboratory::new("", 0.0, g))) else {
            continue;
        };
        for (i, x) in ind.x.iter().enumerate() {
            let e = lab.from_frame(x).and_then(|raw| expectation(&raw, &s.to_multivector(), &lab));
            if let Some(e) = t.result("star expectation", e) {
                t.close("probability equals indicator expectation", (e - p.p[i]).abs(), 1e-12);
            }
        }
    }
}

fn soul(t: &mut Tally, r: &mut SeededRng, n: usize) {
    for m in [2usize, 4] {
        let rep = GammaRep::new(m).expect("even m");
        for _ in 0..n {
            let f = random_hermitean(r, m);
            if let Some(b) = t.result("soul bound", soul_norm_bound_check(&f, &rep)) {
                t.check("soul norm bound", b.ok);
            }
        }
    }
}

fn evolution(t: &mut Tally, r: &mut SeededRng, n: usize) {
    for _ in 0..n.div_ceil(50) {
        let eta = random_eta(r);
        let h = 2.0;
        let Some(sys) = t.result("system", TwoBitSystem::constant(eta, h, 0.0, 10.0)) else { continue };
        for k in 0..=20 {
            let time = 0.5 * f64::from(k);
            let (Some(closed), Some(numeric)) =
                (t.result("closed form", closed_form_u(h, &eta, 0.0, time)), t.result("propagator", propagator_u(&sys, 0.0, time)))
            else {
                continue;
            };
            t.close("propagator matches closed form", mat2_max_abs_diff(&closed, &numeric), 1e-8);
            let kept = mat2_mul(&mat2_mul(&mat2_transpose(&numeric), &eta), &numeric);
            t.close("UᵀηU = η", mat2_max_abs_diff(&kept, &eta), 1e-10);
        }
        let s0 = random_normalized_state(r, &eta);
        let times: Vec<f64> = (0..=40).map(|k| 0.25 * f64::from(k)).collect();
        if let Some(traj) = t.result("trajectory", trajectory(&sys, &s0, &times)) {
            for (_, s) in traj {
                if let Some(norm) = t.result("norm", s.norm(&eta)) {
                    t.close("norm drift", (norm - 1.0).abs(), 1e-9);
                }
            }
        }
    }
}

fn transition(t: &mut Tally, r: &mut SeededRng, n: usize) {
    let eta = random_eta(r);
    let Some(sys) = t.result("system", TwoBitSystem::constant(eta, 1.7, 0.0, 10.0)) else { return };
    let s0 = random_normalized_state(r, &eta);
    let Some(p0) = t.result("probabilities", measure_probabilities(&sys, &s0, 0.0)) else { return };
    for _ in 0..n {
        let time = r.random_range(0.0..10.0);
        let Some(m) = t.result("transition matrix", transition_matrix(&sys, 0.0, time)) else { continue };
        let row = (0..4).map(|i| (m[i].iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max);
        let col = (0..4).map(|j| ((0..4).map(|i| m[i][j]).sum::<f64>() - 1.0).abs()).fold(0.0, f64::max);
        t.close("rows sum to 1", row, 1e-12);
        t.close("columns sum to 1", col, 1e-12);
        let eig = Matrix4::from_fn(|i, j| m[i][j]).complex_eigenvalues();
        t.close("spectral radius", eig.iter().map(|z| z.norm()).fold(0.0, f64::max) - 1.0, 1e-10);
        let mid = r.random_range(0.0..10.0);
        let composed = transition_matrix(&sys, mid, time)
            .and_then(|b| transition_matrix(&sys, 0.0, mid).map(|a| supercone_core::dynamics::mat4_mul(&b, &a)));
        if let Some(c) = t.result("composition", composed) {
            let d = (0..16).map(|k| (c[k / 4][k % 4] - m[k / 4][k % 4]).abs()).fold(0.0, f64::max);
            t.close("composition law", d, 1e-10);
        }
        let direct = evolve(&sys, &s0, 0.0, time).and_then(|s| measure_probabilities(&sys, &s, time));
        if let Some(direct) = t.result("evolved probabilities", direct) {
            let via = apply_transition(&m, &p0.p);
            let d = (0..4).map(|i| (via[i] - direct.p[i]).abs()).fold(0.0, f64::max);
            t.close("matrix evolution equals state evolution", d, 1e-10);
        }
    }
    let cyc = transition_for_angle(2.0 * std::f64::consts::PI / 3.0);
    let expected = [[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
    let d = (0..16).map(|k| (cyc[k / 4][k % 4] - expected[k / 4][k % 4]).abs()).fold(0.0, f64::max);
    t.close("third turn is a cyclic permutation", d, 1e-14);
}

fn inversion(t: &mut Tally, r: &mut SeededRng, n: usize) {
    let flat = [[1.0, 0.0], [0.0, 1.0]];
    for k in 0..n {
        let mut s = random_normalized_state(r, &flat);
        if k % 10 == 0 {
            // boundary of the ellipsoid: φ² = 1/2
            let rest = (1.0 - s.phi * s.phi).sqrt();
            let scale = 0.5f64.sqrt() / rest;
            s = StateFunction::new(0.5f64.sqrt(), [s.phi_a[0] * scale, s.phi_a[1] * scale], s.phibar * scale);
        }
        let Some(p) = t.result("probabilities", probabilities(&s)) else { continue };
        let back = state_from_probabilities(&p).and_then(|st| probabilities(&st));
        if let Some(back) = t.result("inversion", back) {
            let d = (0..4).map(|i| (back.p[i] - p.p[i]).abs()).fold(0.0, f64::max);
            t.close("probabilities ∘ state_from_probabilities", d, 1e-10);
        }
    }
}

fn rate(t: &mut Tally, r: &mut SeededRng, n: usize) {
    let eta = random_eta(r);
    let systems = [TwoBitSystem::constant(eta, 2.0, 0.0, 3.0), Ok(time_dependent_system())];
    let path = ObservablePath::new(|s| Observable::new(0.3 + s * s, [s.sin(), 0.5 - s], 0.2 * s.cos()));
    for sys in systems {
        let Some(sys) = t.result("system", sys) else { continue };
        let s0 = random_state(r);
        let count = n.min(100);
        for k in 0..count {
            let time = sys.t0 + 0.1 + (sys.t1 - sys.t0 - 0.2) * k as f64 / (count.max(2) - 1) as f64;
            if let Some((lhs, rhs)) = t.result("rate", expectation_rate_check(&sys, &path, &s0, sys.t0, time, 1e-3)) {
                t.close("expectation-rate law", (lhs - rhs).abs() / (1.0 + rhs.abs()), 1e-6);
            }
        }
    }
}

fn hodge(t: &mut Tally, r: &mut SeededRng, n: usize) {
    for dim in 1..=3 {
        for _ in 0..n.div_ceil(10) {
            let (_, omega) = random_closed_omega(r, dim, 2);
            if let Some(dec) = t.result("decomposition", hodge_decompose(&omega)) {
                if let Some(back) = t.result("reconstruction", dec.reconstruct()) {
                    t.close("decomposition reconstructs Ω", back.max_abs_diff(&omega), 1e-12);
                }
            }
            let mut x = vec![0; dim];
            x[0] = 1;
            let Some(bad) = t.result("perturb", omega.with_term(&x, 0, 0, &[2, 0], Scalar::new(1.0, 0.0))) else {
                continue;
            };
            if let Some(q) = t.result("quartet", split_omega(&bad).and_then(|s| s.quartet())) {
                t.check("perturbation shows in the quartet", q.max() > 0.5);
            }
            t.check("non-closed input rejected", matches!(hodge_decompose(&bad), Err(Error::NotClosed { .. })));
        }
    }
}

fn lift(t: &mut Tally, r: &mut SeededRng, n: usize) {
    let sys = two_bit_example();
    if let Some(split) = t.result("two-bit form", sys.omega_form().and_then(|o| split_omega(&o))) {
        for k in 0..=4 {
            let time = 0.25 * f64::from(k);
            let Some(l) = t.result("two-bit lift", kernel_lift(&split, &[time], &[1.0])) else { continue };
            t.close("ι_P Ω on the two-bit system", l.residual, 1e-12);
            if let Some(m) = t.result("generator", sys.generator_m(time)) {
                let d = (0..4)
                    .map(|k| (l.field.fiber[k / 2].coeff(1 << (k % 2)) - Scalar::new(m[k / 2][k % 2], 0.0)).norm())
                    .fold(0.0, f64::max);
                t.close("lift reproduces M", d, 1e-12);
            }
        }
    }
    let mut done = 0;
    let mut attempts = 0;
    while done < n.div_ceil(10) && attempts < 10 * n {
        attempts += 1;
        let (omega0, omega) = random_closed_omega(r, 3, 2);
        let x0: Vec<f64> = (0..3).map(|_| r.random_range(-1.0..1.0)).collect();
        let w = |i: u32, j: u32| omega0.component_at(&x0, (1 << i) | (1 << j), &[0, 0]).map(|f| f.body().re);
        let (Ok(w01), Ok(w02), Ok(w12)) = (w(0, 1), w(0, 2), w(1, 2)) else { continue };
        let rho0 = [w12, -w02, w01];
        let scale = rho0.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
        match split_omega(&omega).and_then(|s| kernel_lift(&s, &x0, &rho0)) {
            Ok(l) => {
                t.close("ι_P Ω on random closed Ω", l.residual / scale, 1e-12);
                t.check("lift is even", l.field.is_even());
                done += 1;
            }
            // degenerate draws: vanishing ω₀ or singular fiber block
            Err(Error::ZeroNorm | Error::Singular) => {}
            Err(e) => t.check(&format!("kernel lift: {e}"), false),
        }
    }
}
