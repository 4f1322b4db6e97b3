//! The four commands. Each returns the text to write plus an exit code, or a
//! [`CliError`] carrying its own exit code.

use std::path::Path;

use serde::Serialize;
use serde_json::json;
use supercone_core::dynamics::{
    apply_transition, delta_cone, measure_probabilities, state_from_probabilities, trajectory, transition_matrix,
    ProbabilityVector, StateFunction,
};
use supercone_core::superforms::{hodge_decompose, split_omega, Quartet};
use supercone_core::Error;

use crate::config::{Format, Initial, RunConfig};
use crate::json::SuperFormJson;
use crate::output::{csv_string, fmt_f64};
use crate::sampling::{cube_point, random_normalized_state, rng};
use crate::suites::{run_suites, Faults, SUITES};

pub const DEFAULT_SEED: u64 = 2024;
pub const DEFAULT_EVOLVE_SAMPLES: usize = 101;
pub const DEFAULT_ELLIPSOID_SAMPLES: usize = 10_000;
pub const DEFAULT_VERIFY_SAMPLES: usize = 100;

/// Largest norm drift tolerated when norm verification is on.
const NORM_DRIFT_TOL: f64 = 1e-9;
/// Largest gap between transition-matrix and state-evolved probabilities.
const TRANSITION_TOL: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("initial condition outside the cone: {0}")]
    Cone(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("computation failed: {0}")]
    Numeric(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) | Self::Io(_) => 2,
            Self::Cone(_) => 3,
            Self::Check(_) | Self::Numeric(_) => 1,
        }
    }
}

fn invalid(e: impl ToString) -> CliError {
    CliError::Validation(e.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

pub const TRAJECTORY_COLUMNS: [&str; 11] =
    ["t", "phi", "phi1", "phi2", "phibar", "p1", "p2", "p3", "p4", "delta_ellipsoid", "norm"];

fn initial_state(cfg: &RunConfig, eta0: &[[f64; 2]; 2]) -> Result<StateFunction, CliError> {
    let spec = cfg.initial.as_ref().ok_or_else(|| invalid("config has no initial condition"))?;
    match spec.resolve().map_err(CliError::Validation)? {
        Initial::State(s) => s.normalized(eta0).map_err(invalid),
        Initial::Probabilities(p) => {
            let framed = match state_from_probabilities(&ProbabilityVector::new(p)) {
                Ok(s) => s,
                Err(e @ Error::OutsideCone { .. }) => return Err(CliError::Cone(e.to_string())),
                Err(e) => return Err(invalid(e)),
            };
            framed.from_frame(eta0).map_err(invalid)
        }
        Initial::Random => Ok(random_normalized_state(&mut rng(cfg.seed.unwrap_or(DEFAULT_SEED)), eta0)),
    }
}

pub fn cmd_evolve(cfg: &RunConfig) -> Result<Output, CliError> {
    let sys = cfg.system_spec().map_err(CliError::Validation)?.build().map_err(invalid)?;
    let eta0 = sys.eta_at(sys.t0)?;
    let s0 = initial_state(cfg, &eta0)?;
    let samples = cfg.samples.unwrap_or(DEFAULT_EVOLVE_SAMPLES);
    let times: Vec<f64> = if sys.t1 == sys.t0 || samples < 2 {
        vec![sys.t0]
    } else {
        (0..samples).map(|k| sys.t0 + (sys.t1 - sys.t0) * k as f64 / (samples - 1) as f64).collect()
    };
    log::info!("evolving over {} times on [{}, {}] with step {}", times.len(), sys.t0, sys.t1, sys.step);
    let traj = trajectory(&sys, &s0, &times)?;
    let n0 = s0.norm(&eta0)?;
    let p0 = measure_probabilities(&sys, &s0, sys.t0)?;
    let transition = if sys.is_constant() { Some(transition_matrix(&sys, sys.t0, sys.t1)?) } else { None };
    if cfg.verify.transition && !sys.is_constant() {
        log::warn!("transition check skipped: system does not have constant coefficients");
    }
    let mut rows = Vec::with_capacity(traj.len());
    for (t, s) in &traj {
        let norm = s.norm(&sys.eta_at(*t)?)?;
        if cfg.verify.norm && (norm - n0).abs() > NORM_DRIFT_TOL {
            return Err(CliError::Check(format!("norm drift {:e} at t = {t}", norm - n0)));
        }
        let p = measure_probabilities(&sys, s, *t)?;
        if cfg.verify.transition && sys.is_constant() {
            let via = apply_transition(&transition_matrix(&sys, sys.t0, *t)?, &p0.p);
            let gap = (0..4).map(|i| (via[i] - p.p[i]).abs()).fold(0.0, f64::max);
            if gap > TRANSITION_TOL {
                return Err(CliError::Check(format!("transition matrix disagrees by {gap:e} at t = {t}")));
            }
        }
        rows.push([*t, s.phi, s.phi_a[0], s.phi_a[1], s.phibar, p.p[0], p.p[1], p.p[2], p.p[3], p.delta_ellipsoid, norm]);
    }
    let text = match cfg.format.unwrap_or_default() {
        Format::Csv => {
            let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|&x| fmt_f64(x)).collect()).collect();
            csv_string(&TRAJECTORY_COLUMNS, &rows).map_err(|e| CliError::Io(e.into()))?
        }
        Format::Json => {
            let doc = json!({ "columns": TRAJECTORY_COLUMNS, "rows": rows, "transition": transition });
            serde_json::to_string_pretty(&doc).expect("plain numbers serialize") + "\n"
        }
    };
    Ok(Output::ok(text))
}

pub const ELLIPSOID_COLUMNS: [&str; 9] =
    ["p1", "p2", "p3", "p4", "delta_ellipsoid", "delta_cone", "in_simplex", "in_ellipsoid", "in_cone"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionSample {
    pub p: [f64; 4],
    pub delta_ellipsoid: f64,
    pub delta_cone: f64,
    pub in_simplex: bool,
    pub in_ellipsoid: bool,
    pub in_cone: bool,
}

pub fn classify(p1: f64, p2: f64, p3: f64) -> RegionSample {
    let v = ProbabilityVector::from_three(p1, p2, p3);
    RegionSample {
        p: v.p,
        delta_ellipsoid: v.delta_ellipsoid,
        delta_cone: delta_cone(p1, p2, p3),
        in_simplex: v.in_simplex(),
        in_ellipsoid: v.in_ellipsoid(),
        in_cone: v.in_cone(),
    }
}

/// Labelled points of the cube `[0, 1]³`: the simplex, the cone and the
/// ellipsoid regions in `(p1, p2, p3)`.
pub fn cmd_ellipsoid(cfg: &RunConfig) -> Result<Output, CliError> {
    let points: Vec<[f64; 3]> = match cfg.grid {
        Some(0) => return Err(invalid("grid needs at least one point per axis")),
        Some(k) => {
            let at = |i: usize| if k == 1 { 0.5 } else { i as f64 / (k - 1) as f64 };
            (0..k * k * k).map(|i| [at(i / (k * k)), at(i / k % k), at(i % k)]).collect()
        }
        None => {
            let mut r = rng(cfg.seed.unwrap_or(DEFAULT_SEED));
            (0..cfg.samples.unwrap_or(DEFAULT_ELLIPSOID_SAMPLES)).map(|_| cube_point(&mut r)).collect()
        }
    };
    let samples: Vec<RegionSample> = points.iter().map(|q| classify(q[0], q[1], q[2])).collect();
    let text = match cfg.format.unwrap_or_default() {
        Format::Csv => {
            let rows: Vec<Vec<String>> = samples
                .iter()
                .map(|s| {
                    let mut row: Vec<String> = s.p.iter().map(|&x| fmt_f64(x)).collect();
                    row.extend([fmt_f64(s.delta_ellipsoid), fmt_f64(s.delta_cone)]);
                    row.extend([s.in_simplex, s.in_ellipsoid, s.in_cone].map(|b| b.to_string()));
                    row
                })
                .collect();
            csv_string(&ELLIPSOID_COLUMNS, &rows).map_err(|e| CliError::Io(e.into()))?
        }
        Format::Json => serde_json::to_string_pretty(&samples).expect("plain data serializes") + "\n",
    };
    Ok(Output::ok(text))
}

fn quartet_json(q: &Quartet) -> serde_json::Value {
    json!({
        "d_omega": q.d_omega,
        "dhat_omega_plus_d_a": q.dhat_omega_plus_d_a,
        "dhat_a_plus_d_eta": q.dhat_a_plus_d_eta,
        "dhat_eta": q.dhat_eta,
    })
}

/// Decomposes the superform in `path`. Non-closed input gives exit code 4
/// and a residual report instead of a decomposition.
pub fn cmd_decompose(cfg: &RunConfig, path: &Path) -> Result<Output, CliError> {
    if cfg.format == Some(Format::Csv) {
        return Err(invalid("decompose writes JSON only"));
    }
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let parsed: SuperFormJson = serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let omega = parsed.to_form().map_err(invalid)?;
    let split = split_omega(&omega).map_err(invalid)?;
    let quartet = split.quartet()?;
    let residual = omega.d_total_unbounded().max_abs();
    let doc = match hodge_decompose(&omega) {
        Ok(dec) => {
            let error = dec.reconstruct()?.max_abs_diff(&omega);
            let doc = json!({
                "closed": true,
                "residual": residual,
                "quartet": quartet_json(&quartet),
                "reconstruction_error": error,
                "omega0": SuperFormJson::from(&dec.omega0),
                "beta": SuperFormJson::from(&dec.beta),
                "gamma": SuperFormJson::from(&dec.gamma),
            });
            return Ok(Output::ok(serde_json::to_string_pretty(&doc).expect("serializable") + "\n"));
        }
        Err(Error::NotClosed { .. }) => {
            json!({ "closed": false, "residual": residual, "quartet": quartet_json(&quartet) })
        }
        Err(e) => return Err(invalid(e)),
    };
    log::error!("input is not closed: d_T Ω residual {residual:e}");
    Ok(Output { text: serde_json::to_string_pretty(&doc).expect("serializable") + "\n", code: 4 })
}

pub fn parse_fault(name: &str) -> Result<Faults, CliError> {
    match name {
        "berezin-sign" => Ok(Faults { berezin_sign: true }),
        other => Err(invalid(format!("unknown fault {other}"))),
    }
}

/// Runs the selected suites (comma-separated names, or all). Exit code 1 if
/// any check fails.
pub fn cmd_verify(cfg: &RunConfig, faults: Faults) -> Result<Output, CliError> {
    let names: Vec<&str> = match cfg.suite.as_deref() {
        None | Some("all") => SUITES.to_vec(),
        Some(list) => list.split(',').map(str::trim).collect(),
    };
    if let Some(bad) = names.iter().find(|n| !SUITES.contains(n)) {
        return Err(invalid(format!("unknown suite {bad}; known suites: {}", SUITES.join(", "))));
    }
    let seed = cfg.seed.unwrap_or(DEFAULT_SEED);
    let samples = cfg.samples.unwrap_or(DEFAULT_VERIFY_SAMPLES);
    let reports = run_suites(&names, seed, samples, faults);
    let passed = reports.iter().all(|r| r.passed());
    let text = match cfg.format {
        Some(Format::Json) => {
            let doc = json!({ "seed": seed, "samples": samples, "passed": passed, "suites": reports });
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        _ => {
            let mut s = String::new();
            for r in &reports {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                s += &format!(
                    "{status} {:<11} checks={:<6} failures={:<4} max_residual={:.3e}\n",
                    r.name, r.checks, r.failures, r.max_residual
                );
                if let Some(f) = &r.first_failure {
                    s += &format!("     first failure: {f}\n");
                }
            }
            s
        }
    };
    Ok(Output { text, code: if passed { 0 } else { 1 } })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_examples() {
        let s = classify(0.25, 0.25, 0.25);
        assert!(s.in_simplex && s.in_ellipsoid && s.in_cone);
        let s = classify(1.0, 0.0, 0.0);
        assert!(s.in_simplex && !s.in_ellipsoid && s.delta_ellipsoid > 0.0);
        let third = 1.0 / 3.0;
        assert!((classify(third, third, third).delta_cone + third).abs() < 1e-15);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(invalid("x").exit_code(), 2);
        assert_eq!(CliError::Cone(String::new()).exit_code(), 3);
        assert_eq!(CliError::Check(String::new()).exit_code(), 1);
    }
}
