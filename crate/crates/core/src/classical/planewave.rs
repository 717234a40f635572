use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::polynomial::PhasePoint;
use crate::error::{Error, Result};

/// `amplitude · exp(i k_r·x − i x_r·k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneWave {
    pub xr: Vec<f64>,
    pub kr: Vec<f64>,
    pub amplitude: Complex64,
}

impl PlaneWave {
    pub fn new(xr: Vec<f64>, kr: Vec<f64>) -> Result<Self> {
        Self::with_amplitude(xr, kr, Complex64::new(1.0, 0.0))
    }

    pub fn with_amplitude(xr: Vec<f64>, kr: Vec<f64>, amplitude: Complex64) -> Result<Self> {
        if xr.len() != kr.len() {
            return Err(Error::DimensionMismatch {
                expected: xr.len(),
                found: kr.len(),
            });
        }
        Ok(Self { xr, kr, amplitude })
    }

    pub fn n_c(&self) -> usize {
        self.xr.len()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n_c() != other.n_c() {
            return Err(Error::DimensionMismatch {
                expected: self.n_c(),
                found: other.n_c(),
            });
        }
        Ok(())
    }

    /// Phase `k_r·x − x_r·k` at a point.
    fn phase(&self, p: &PhasePoint) -> f64 {
        let a: f64 = self.kr.iter().zip(&p.x).map(|(a, b)| a * b).sum();
        let b: f64 = self.xr.iter().zip(&p.k).map(|(a, b)| a * b).sum();
        a - b
    }

    pub fn evaluate(&self, p: &PhasePoint) -> Result<Complex64> {
        if p.n_c() != self.n_c() {
            return Err(Error::DimensionMismatch {
                expected: self.n_c(),
                found: p.n_c(),
            });
        }
        Ok(self.amplitude * Complex64::from_polar(1.0, self.phase(p)))
    }

    /// Gradient `(∂/∂x, ∂/∂k)` at a point, in variable order.
    pub fn gradient(&self, p: &PhasePoint) -> Result<Vec<Complex64>> {
        let v = self.evaluate(p)?;
        let i = Complex64::i();
        let mut g: Vec<Complex64> = self.kr.iter().map(|&kr| i * kr * v).collect();
        g.extend(self.xr.iter().map(|&xr| -i * xr * v));
        Ok(g)
    }

    /// Pointwise product: parameters add, amplitudes multiply.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            xr: self.xr.iter().zip(&other.xr).map(|(a, b)| a + b).collect(),
            kr: self.kr.iter().zip(&other.kr).map(|(a, b)| a + b).collect(),
            amplitude: self.amplitude * other.amplitude,
        })
    }

    /// Poisson bracket `{self, other} = v_rs · self·other`.
    pub fn poisson(&self, other: &Self) -> Result<Self> {
        let v = pairing(self, other)?;
        let mut out = self.product(other)?;
        out.amplitude *= v;
        Ok(out)
    }
}

/// `v_rs = k_r·x_s − x_r·k_s`.
pub fn pairing(r: &PlaneWave, s: &PlaneWave) -> Result<f64> {
    r.check(s)?;
    let a: f64 = r.kr.iter().zip(&s.xr).map(|(a, b)| a * b).sum();
    let b: f64 = r.xr.iter().zip(&s.kr).map(|(a, b)| a * b).sum();
    Ok(a - b)
}

/// Poisson bracket of two plane waves evaluated from their gradients at a point.
pub fn poisson_at(r: &PlaneWave, s: &PlaneWave, p: &PhasePoint) -> Result<Complex64> {
    r.check(s)?;
    let gr = r.gradient(p)?;
    let gs = s.gradient(p)?;
    let n = r.n_c();
    Ok((0..n).map(|i| gr[i] * gs[n + i] - gr[n + i] * gs[i]).sum())
}
