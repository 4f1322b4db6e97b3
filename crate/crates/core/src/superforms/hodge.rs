//! Bidegree splitting of closed even two-forms and their decomposition
//! `Ω = ω₀ + (1 + d̂⁻¹d)⁻¹ d̂(β + γ)`.

use super::SuperForm;
use crate::{re, Error, Result};

/// Absolute tolerance (relative to `max(1, ‖form‖)`) for closedness checks.
const CLOSED_TOL: f64 = 1e-12;

/// `Ω = ω + A + η` by bidegree, plus the `θ`-free part `ω₀` of `ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaSplit {
    /// Bidegree `(2, 0)`.
    pub omega: SuperForm,
    /// Bidegree `(1, 1)`.
    pub a: SuperForm,
    /// Bidegree `(0, 2)`.
    pub eta: SuperForm,
    /// `θ`-free part of `ω`.
    pub omega0: SuperForm,
}

/// Residuals (largest coefficient magnitude) of the four bidegree
/// components of `d_T Ω = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quartet {
    pub d_omega: f64,
    pub dhat_omega_plus_d_a: f64,
    pub dhat_a_plus_d_eta: f64,
    pub dhat_eta: f64,
}

impl Quartet {
    pub fn max(&self) -> f64 {
        self.d_omega
            .max(self.dhat_omega_plus_d_a)
            .max(self.dhat_a_plus_d_eta)
            .max(self.dhat_eta)
    }
}

impl OmegaSplit {
    pub fn reassemble(&self) -> Result<SuperForm> {
        self.omega.add(&self.a)?.add(&self.eta)
    }

    pub fn quartet(&self) -> Result<Quartet> {
        let d_omega = self.omega.d_horiz().max_abs();
        let second = self.omega.d_vert_unbounded().add(&self.a.d_horiz())?.max_abs();
        let third = self.a.d_vert_unbounded().add(&self.eta.d_horiz())?.max_abs();
        let dhat_eta = self.eta.d_vert_unbounded().max_abs();
        Ok(Quartet {
            d_omega,
            dhat_omega_plus_d_a: second,
            dhat_a_plus_d_eta: third,
            dhat_eta,
        })
    }
}

/// Projects an even two-form onto its bidegree components.
pub fn split_omega(omega: &SuperForm) -> Result<OmegaSplit> {
    for (k, _) in omega.terms() {
        if k.form_degree() != 2 {
            return Err(Error::FormDegree { expected: 2, found: k.form_degree() });
        }
        if k.parity() != 0 {
            return Err(Error::OddParity);
        }
    }
    let w = omega.bidegree(2, 0);
    Ok(OmegaSplit {
        omega0: w.filter(|k| k.theta == 0),
        omega: w,
        a: omega.bidegree(1, 1),
        eta: omega.bidegree(0, 2),
    })
}

/// `Σ_w h(g_w)/w` with `h = θᵃ ∂/∂(dθᵃ)` and `w` the `θ`- plus `dθ`-degree.
/// A two-sided inverse of `d̂` on forms of positive weight in the sense
/// `d̂K + Kd̂ = 1`; no closedness check.
pub fn euler_inverse(g: &SuperForm) -> SuperForm {
    let mut out = g.zero_like();
    let top = g.terms().map(|(k, _)| k.weight()).max().unwrap_or(0);
    for w in 1..=top {
        let part = g.filter(|k| k.weight() == w);
        let lifted = part.euler_homotopy().scale(re(1.0 / w as f64));
        out = out.add(&lifted).expect("same shape");
    }
    out
}

/// `d̂⁻¹ g` for `d̂`-closed `g`, so that `d̂(d̂⁻¹ g) = g`.
pub fn dhat_partial_inverse(g: &SuperForm) -> Result<SuperForm> {
    let residual = g.d_vert_unbounded().max_abs();
    if residual > CLOSED_TOL * g.max_abs().max(1.0) {
        return Err(Error::NotClosed { residual });
    }
    Ok(euler_inverse(g))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HodgeDecomposition {
    /// `θ`-free horizontal part, bidegree `(2, 0)`.
    pub omega0: SuperForm,
    /// Bidegree `(1, 0)`.
    pub beta: SuperForm,
    /// Bidegree `(0, 1)`.
    pub gamma: SuperForm,
}

/// Decomposes a closed even two-form. `β = d̂⁻¹A` and `γ = d̂⁻¹η` with the
/// Euler-homotopy inverse; only `Ω` itself is guaranteed to round-trip.
pub fn hodge_decompose(omega: &SuperForm) -> Result<HodgeDecomposition> {
    let split = split_omega(omega)?;
    let residual = omega.d_total_unbounded().max_abs();
    if residual > CLOSED_TOL * omega.max_abs().max(1.0) {
        return Err(Error::NotClosed { residual });
    }
    Ok(HodgeDecomposition {
        omega0: split.omega0,
        beta: euler_inverse(&split.a),
        gamma: euler_inverse(&split.eta),
    })
}

/// `ω₀ + Σ_ℓ (−d̂⁻¹d)^ℓ d̂(β + γ)`; the series stops once a term vanishes,
/// which happens after at most `n + 1` steps because `d̂⁻¹d` raises the
/// `dx`-degree.
pub fn reconstruct(omega0: &SuperForm, beta: &SuperForm, gamma: &SuperForm) -> Result<SuperForm> {
    let mut term = beta.add(gamma)?.d_vert()?;
    let mut total = omega0.add(&term)?;
    for _ in 0..=omega0.n() {
        term = euler_inverse(&term.d_horiz()).scale(re(-1.0));
        if term.is_empty() {
            break;
        }
        total = total.add(&term)?;
    }
    Ok(total)
}

impl HodgeDecomposition {
    pub fn reconstruct(&self) -> Result<SuperForm> {
        reconstruct(&self.omega0, &self.beta, &self.gamma)
    }
}
