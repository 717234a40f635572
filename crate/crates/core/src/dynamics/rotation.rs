use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Default exclusion radius around `|L| = 0`, where the closed forms are singular.
pub const DEFAULT_EPS_L: f64 = 1e-8;

/// Pointwise rotation `R_t` about `L/|L|` by angle `−g t |L|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationField {
    pub g: f64,
}

/// `[v×]`, the matrix with `[v×] w = v × w`.
pub fn cross_matrix(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Rotation by `angle` about the unit vector `axis` (Rodrigues).
pub fn axis_angle(axis: &Vector3<f64>, angle: f64) -> Matrix3<f64> {
    let k = cross_matrix(axis);
    Matrix3::identity() + k * angle.sin() + k * k * (1.0 - angle.cos())
}

impl RotationField {
    pub fn new(g: f64) -> Self {
        Self { g }
    }

    /// `R_t` at angular momentum `l`; the identity when `l = 0`.
    pub fn matrix(&self, t: f64, l: &Vector3<f64>) -> Matrix3<f64> {
        let norm = l.norm();
        if norm == 0.0 {
            return Matrix3::identity();
        }
        axis_angle(&(l / norm), -self.g * t * norm)
    }

    /// `R_t⁻¹ = R_tᵀ`.
    pub fn inverse(&self, t: f64, l: &Vector3<f64>) -> Matrix3<f64> {
        self.matrix(t, l).transpose()
    }
}

/// Rejects points on the singular locus `|L| <= eps`.
pub fn check_regular(index: usize, l: &Vector3<f64>, eps: f64) -> Result<f64> {
    let norm = l.norm();
    if norm <= eps {
        return Err(Error::SingularPoint { index, norm });
    }
    Ok(norm)
}
