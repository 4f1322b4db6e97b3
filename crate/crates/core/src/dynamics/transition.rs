use super::system::TwoBitSystem;
use crate::linalg::mat2_det;
use crate::{Error, Result};

pub type Mat4 = [[f64; 4]; 4];

/// The 4×4 matrix taking `p(T)` to `p(t)` for constant coefficients.
///
/// With `𝔠 = cos α`, `𝔰 = sin α` the upper 3×3 block is circulant with rows
/// `((1+2𝔠)/3, (1−𝔠+√3𝔰)/3, (1−𝔠−√3𝔰)/3)`; `p₄` is fixed. The angle is
/// `α = (t − T) H / (2√det η)`, measured in an orthonormal frame.
pub fn transition_matrix(sys: &TwoBitSystem, t_ref: f64, t: f64) -> Result<Mat4> {
    if !sys.is_constant() {
        return Err(Error::NonConstant);
    }
    sys.check_time(t_ref)?;
    sys.check_time(t)?;
    let det = mat2_det(&sys.eta.at(t_ref));
    Ok(transition_for_angle((t - t_ref) * sys.h.at(t_ref) / (2.0 * libm::sqrt(det))))
}

pub fn transition_for_angle(alpha: f64) -> Mat4 {
    let (c, s) = (libm::cos(alpha), libm::sin(alpha));
    let r3 = libm::sqrt(3.0);
    let diag = (1.0 + 2.0 * c) / 3.0;
    let plus = (1.0 - c + r3 * s) / 3.0;
    let minus = (1.0 - c - r3 * s) / 3.0;
    [
        [diag, plus, minus, 0.0],
        [minus, diag, plus, 0.0],
        [plus, minus, diag, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
}

pub fn apply(t: &Mat4, p: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (i, row) in t.iter().enumerate() {
        out[i] = row.iter().zip(p).map(|(a, b)| a * b).sum();
    }
    out
}

pub fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_at_zero_angle() {
        let t = transition_for_angle(0.0);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((t[i][j] - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn non_constant_rejected() {
        use super::super::system::{EtaPath, ScalarPath};
        let sys = TwoBitSystem::new(
            EtaPath::ExpScale { base: [[1.0, 0.0], [0.0, 1.0]], rate: 1.0 },
            ScalarPath::Constant(1.0),
            0.0,
            1.0,
            None,
        )
        .unwrap();
        assert_eq!(transition_matrix(&sys, 0.0, 1.0).unwrap_err(), Error::NonConstant);
    }
}
