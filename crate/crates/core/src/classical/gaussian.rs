use serde::{Deserialize, Serialize};

use super::polynomial::{PhasePoint, PhasePolynomial};
use crate::error::{Error, Result};

/// Isotropic Gaussian weight `exp(-(|x - x̄|² + |k - k̄|²) / (2 s²))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub center: PhasePoint,
    pub width: f64,
}

impl Envelope {
    pub fn new(center: PhasePoint, width: f64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "envelope width must be positive, got {width}"
            )));
        }
        Ok(Self { center, width })
    }

    /// Unit-width envelope centered at the origin.
    pub fn standard(n_c: usize) -> Self {
        Self {
            center: PhasePoint::origin(n_c),
            width: 1.0,
        }
    }

    pub fn n_c(&self) -> usize {
        self.center.n_c()
    }

    pub fn value(&self, p: &PhasePoint) -> f64 {
        let s2 = self.width * self.width;
        let r2: f64 = p
            .coords()
            .iter()
            .zip(self.center.coords())
            .map(|(v, c)| (v - c) * (v - c))
            .sum();
        (-r2 / (2.0 * s2)).exp()
    }

    /// Polynomial `∂ log G / ∂ v` for every phase variable `v`, i.e. `-(v - v̄)/s²`.
    fn log_gradient(&self) -> Vec<PhasePolynomial> {
        let n_c = self.n_c();
        let s2 = self.width * self.width;
        self.center
            .coords()
            .iter()
            .enumerate()
            .map(|(v, &c)| {
                let var = PhasePolynomial::variable(2 * n_c, v);
                (&var - &PhasePolynomial::constant(2 * n_c, c)).scale(-1.0 / s2)
            })
            .collect()
    }

    /// `∫ v^e exp(-(v - c)²/(2s²)) dv` for one variable.
    fn moment(e: u16, c: f64, s: f64) -> f64 {
        let norm = (2.0 * std::f64::consts::PI).sqrt() * s;
        let e = e as u32;
        let mut total = 0.0;
        let mut binom = 1.0;
        let mut dfact = 1.0; // (j-1)!! for the current even j
        for j in 0..=e {
            if j > 0 {
                binom *= (e - j + 1) as f64 / j as f64;
            }
            if j % 2 == 0 {
                if j >= 2 {
                    dfact *= (j - 1) as f64;
                }
                total += binom * c.powi((e - j) as i32) * s.powi(j as i32) * dfact;
            }
        }
        total * norm
    }

    /// Upper bound on `∫ |v|^e exp(-(v - c)²/(2s²)) dv`.
    fn abs_moment_bound(e: u16, c: f64, s: f64) -> f64 {
        let norm = (2.0 * std::f64::consts::PI).sqrt() * s;
        if e == 0 {
            return norm;
        }
        let e32 = e as i32;
        let central = if e % 2 == 0 {
            let mut d = 1.0;
            let mut j = e32 - 1;
            while j > 1 {
                d *= j as f64;
                j -= 2;
            }
            s.powi(e32) * d
        } else {
            let m = (e32 - 1) / 2;
            let mfact: f64 = (1..=m).map(|i| i as f64).product();
            s.powi(e32) * 2f64.powf(m as f64 + 0.5) * mfact / std::f64::consts::PI.sqrt()
        };
        2f64.powi(e32 - 1) * (c.abs().powi(e32) + central) * norm
    }
}

/// A polynomial times a Gaussian envelope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianField {
    poly: PhasePolynomial,
    envelope: Envelope,
}

impl GaussianField {
    pub fn new(poly: PhasePolynomial, envelope: Envelope) -> Result<Self> {
        if poly.nvars() != 2 * envelope.n_c() {
            return Err(Error::DimensionMismatch {
                expected: envelope.n_c(),
                found: poly.n_c(),
            });
        }
        Ok(Self { poly, envelope })
    }

    pub fn zero(envelope: Envelope) -> Self {
        Self {
            poly: PhasePolynomial::zero(2 * envelope.n_c()),
            envelope,
        }
    }

    pub fn poly(&self) -> &PhasePolynomial {
        &self.poly
    }

    pub fn envelope(&self) -> &Envelope {
        &self.envelope
    }

    pub fn n_c(&self) -> usize {
        self.envelope.n_c()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn same_envelope(&self, other: &Self) -> Result<()> {
        if self.envelope != other.envelope {
            return Err(Error::EnvelopeMismatch);
        }
        Ok(())
    }

    pub fn with_poly(&self, poly: PhasePolynomial) -> Self {
        Self {
            poly,
            envelope: self.envelope.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_envelope(other)?;
        Ok(self.with_poly(&self.poly + &other.poly))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_envelope(other)?;
        Ok(self.with_poly(&self.poly - &other.poly))
    }

    pub fn scale(&self, s: f64) -> Self {
        self.with_poly(self.poly.scale(s))
    }

    pub fn mul_poly(&self, p: &PhasePolynomial) -> Result<Self> {
        if p.nvars() != self.poly.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.n_c(),
                found: p.n_c(),
            });
        }
        Ok(self.with_poly(&self.poly * p))
    }

    /// Partial derivative with respect to phase variable `var` (x's then k's).
    pub fn derivative(&self, var: usize) -> Self {
        let grad = self.envelope.log_gradient();
        self.with_poly(&self.poly.derivative(var) + &(&self.poly * &grad[var]))
    }

    pub fn evaluate(&self, p: &PhasePoint) -> Result<f64> {
        Ok(self.poly.evaluate(p)? * self.envelope.value(p))
    }

    /// Exact phase-space integral via Gaussian moments.
    pub fn integrate(&self) -> f64 {
        let coords = self.envelope.center.coords();
        let s = self.envelope.width;
        self.poly
            .terms()
            .map(|(e, &c)| {
                c * e
                    .iter()
                    .zip(&coords)
                    .map(|(&p, &cv)| Envelope::moment(p, cv, s))
                    .product::<f64>()
            })
            .sum()
    }

    /// Upper bound on `∫ |F|`, used to scale integral tolerances.
    pub fn abs_integral_bound(&self) -> f64 {
        let coords = self.envelope.center.coords();
        let s = self.envelope.width;
        self.poly
            .terms()
            .map(|(e, &c)| {
                c.abs()
                    * e.iter()
                        .zip(&coords)
                        .map(|(&p, &cv)| Envelope::abs_moment_bound(p, cv, s))
                        .product::<f64>()
            })
            .sum()
    }
}

/// Poisson bracket `{A, F}` of a polynomial observable with a Gaussian field.
pub fn poisson_bracket_state(a: &PhasePolynomial, f: &GaussianField) -> Result<GaussianField> {
    if a.nvars() != f.poly.nvars() {
        return Err(Error::DimensionMismatch {
            expected: f.n_c(),
            found: a.n_c(),
        });
    }
    let n_c = f.n_c();
    let grad = f.envelope.log_gradient();
    // {A, G}/G = Σ ∂A/∂x_i ∂logG/∂k_i − ∂A/∂k_i ∂logG/∂x_i
    let mut env_term = PhasePolynomial::zero(2 * n_c);
    for i in 0..n_c {
        let ax = a.derivative(i);
        let ak = a.derivative(n_c + i);
        env_term = &(&env_term + &(&ax * &grad[n_c + i])) - &(&ak * &grad[i]);
    }
    let poly = &a.poisson(&f.poly) + &(&f.poly * &env_term);
    Ok(f.with_poly(poly))
}

impl GaussianField {
    /// `{a, self}`.
    pub fn bracket_from(&self, a: &PhasePolynomial) -> Result<Self> {
        poisson_bracket_state(a, self)
    }
}
