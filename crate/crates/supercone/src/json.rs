//! JSON schemas for multivectors, superforms and two-bit system specs.

use serde::{Deserialize, Serialize};
use supercone_core::dynamics::{EtaPath, ScalarPath, TwoBitSystem};
use supercone_core::linalg::Mat2;
use supercone_core::superforms::{SuperForm, TermKey};
use supercone_core::{Multivector, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BladeTerm {
    pub mask: u32,
    pub re: f64,
    pub im: f64,
}

/// `{"m": int, "terms": [{"mask", "re", "im"}, ...]}` with zero terms omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultivectorJson {
    pub m: usize,
    pub terms: Vec<BladeTerm>,
}

impl From<&Multivector> for MultivectorJson {
    fn from(f: &Multivector) -> Self {
        let terms = f.terms().map(|(mask, c)| BladeTerm { mask, re: c.re, im: c.im }).collect();
        Self { m: f.m(), terms }
    }
}

impl MultivectorJson {
    pub fn to_multivector(&self) -> supercone_core::Result<Multivector> {
        Multivector::from_terms(self.m, self.terms.iter().map(|t| (t.mask, Scalar::new(t.re, t.im))))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormTerm {
    /// Exponents of `x¹ … xⁿ`.
    pub x: Vec<u32>,
    pub theta: u32,
    pub dx: u32,
    /// Exponents of `dθ¹ … dθᵐ`.
    pub dtheta: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperFormJson {
    pub n: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_poly_degree: Option<usize>,
    pub terms: Vec<FormTerm>,
}

impl From<&SuperForm> for SuperFormJson {
    fn from(f: &SuperForm) -> Self {
        let terms = f
            .terms()
            .map(|(k, c)| FormTerm { x: k.x.clone(), theta: k.theta, dx: k.dx, dtheta: k.dtheta.clone(), re: c.re, im: c.im })
            .collect();
        Self {
            n: f.n(),
            m: f.m(),
            truncation: Some(f.truncation()),
            max_poly_degree: Some(f.max_poly_degree()),
            terms,
        }
    }
}

impl SuperFormJson {
    pub fn to_form(&self) -> supercone_core::Result<SuperForm> {
        let mut f = SuperForm::zero(self.n, self.m)?;
        if let Some(s) = self.truncation {
            f = f.with_truncation(s);
        }
        if let Some(d) = self.max_poly_degree {
            f = f.with_max_poly_degree(d);
        }
        for t in &self.terms {
            if t.x.len() != self.n || t.dtheta.len() != self.m {
                return Err(supercone_core::Error::DimensionMismatch {
                    expected: self.n + self.m,
                    found: t.x.len() + t.dtheta.len(),
                });
            }
            f.add_term(TermKey::new(t.x.clone(), t.theta, t.dx, t.dtheta.clone()), Scalar::new(t.re, t.im))?;
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EtaSpec {
    Constant { value: Mat2 },
    ExpScale { base: Mat2, rate: f64 },
    /// `Σ_k coeffs[k] t^k`.
    Poly { coeffs: Vec<Mat2> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalarSpec {
    Constant { value: f64 },
    Poly { coeffs: Vec<f64> },
}

/// `{"eta": {...}, "H": {...}, "t0", "t1", "step"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub eta: EtaSpec,
    #[serde(rename = "H")]
    pub h: ScalarSpec,
    pub t0: f64,
    pub t1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
}

impl SystemSpec {
    pub fn build(&self) -> supercone_core::Result<TwoBitSystem> {
        let eta = match &self.eta {
            EtaSpec::Constant { value } => EtaPath::Constant(*value),
            EtaSpec::ExpScale { base, rate } => EtaPath::ExpScale { base: *base, rate: *rate },
            EtaSpec::Poly { coeffs } if coeffs.is_empty() => {
                return Err(supercone_core::Error::InvalidArgument("η polynomial needs at least one coefficient"))
            }
            EtaSpec::Poly { coeffs } => EtaPath::Poly(coeffs.clone()),
        };
        let h = match &self.h {
            ScalarSpec::Constant { value } => ScalarPath::Constant(*value),
            ScalarSpec::Poly { coeffs } => ScalarPath::Poly(coeffs.clone()),
        };
        TwoBitSystem::new(eta, h, self.t0, self.t1, self.step)
    }
}
