use std::sync::Arc;

use super::observable::HybridObservable;
use crate::classical::{poisson_bracket_state, Envelope, GaussianField, PhasePoint, PhasePolynomial};
use crate::error::{Error, Result};
use crate::su::{QuantumOperator, SuBasis};

/// Operator-valued Gaussian field `ρ₀·1 + Σᵢ ρᵢ qᵢ`, all components sharing one envelope.
///
/// No normalization is implied; see [`crate::dynamics::DensityField`] for states.
#[derive(Clone, Debug)]
pub struct HybridField {
    basis: Arc<SuBasis>,
    envelope: Envelope,
    r0: PhasePolynomial,
    rvec: Vec<PhasePolynomial>,
}

impl PartialEq for HybridField {
    fn eq(&self, other: &Self) -> bool {
        *self.basis == *other.basis
            && self.envelope == other.envelope
            && self.r0 == other.r0
            && self.rvec == other.rvec
    }
}

impl HybridField {
    pub fn new(
        basis: Arc<SuBasis>,
        envelope: Envelope,
        r0: PhasePolynomial,
        rvec: Vec<PhasePolynomial>,
    ) -> Result<Self> {
        if rvec.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: rvec.len(),
            });
        }
        let nv = 2 * envelope.n_c();
        if let Some(p) = std::iter::once(&r0).chain(&rvec).find(|p| p.nvars() != nv) {
            return Err(Error::DimensionMismatch {
                expected: envelope.n_c(),
                found: p.n_c(),
            });
        }
        Ok(Self {
            basis,
            envelope,
            r0,
            rvec,
        })
    }

    /// Builds from Gaussian components, which must share an envelope.
    pub fn from_fields(basis: Arc<SuBasis>, r0: GaussianField, rvec: Vec<GaussianField>) -> Result<Self> {
        if rvec.iter().any(|f| f.envelope() != r0.envelope()) {
            return Err(Error::EnvelopeMismatch);
        }
        let envelope = r0.envelope().clone();
        let rvec = rvec.into_iter().map(|f| f.poly().clone()).collect();
        Self::new(basis, envelope, r0.poly().clone(), rvec)
    }

    pub fn basis(&self) -> &Arc<SuBasis> {
        &self.basis
    }

    pub fn envelope(&self) -> &Envelope {
        &self.envelope
    }

    pub fn n_c(&self) -> usize {
        self.envelope.n_c()
    }

    /// Polynomial part of `ρ₀`.
    pub fn scalar_poly(&self) -> &PhasePolynomial {
        &self.r0
    }

    /// Polynomial parts of `ρᵢ`.
    pub fn component_polys(&self) -> &[PhasePolynomial] {
        &self.rvec
    }

    pub fn scalar_field(&self) -> GaussianField {
        GaussianField::new(self.r0.clone(), self.envelope.clone()).expect("validated at construction")
    }

    pub fn component_field(&self, i: usize) -> GaussianField {
        GaussianField::new(self.rvec[i].clone(), self.envelope.clone()).expect("validated at construction")
    }

    pub fn is_zero(&self) -> bool {
        self.r0.is_zero() && self.rvec.iter().all(|p| p.is_zero())
    }

    /// Max-abs polynomial coefficient over components.
    pub fn norm(&self) -> f64 {
        std::iter::once(&self.r0)
            .chain(&self.rvec)
            .map(|p| p.max_abs_coeff())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if *self.basis != *other.basis {
            return Err(Error::BasisMismatch);
        }
        if self.envelope != other.envelope {
            return Err(Error::EnvelopeMismatch);
        }
        Ok(())
    }

    pub fn with_polys(&self, r0: PhasePolynomial, rvec: Vec<PhasePolynomial>) -> Result<Self> {
        Self::new(self.basis.clone(), self.envelope.clone(), r0, rvec)
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, other: &Self, s: f64) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            basis: self.basis.clone(),
            envelope: self.envelope.clone(),
            r0: self.r0.add_scaled(&other.r0, s),
            rvec: self
                .rvec
                .iter()
                .zip(&other.rvec)
                .map(|(a, b)| a.add_scaled(b, s))
                .collect(),
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            basis: self.basis.clone(),
            envelope: self.envelope.clone(),
            r0: self.r0.scale(s),
            rvec: self.rvec.iter().map(|p| p.scale(s)).collect(),
        }
    }

    /// Operator value of the polynomial part (envelope omitted) at a point.
    pub fn poly_matrix_at(&self, p: &PhasePoint) -> Result<QuantumOperator> {
        let r0 = self.r0.evaluate(p)?;
        let coeffs = self
            .rvec
            .iter()
            .map(|c| c.evaluate(p).map(Into::into))
            .collect::<Result<Vec<_>>>()?;
        self.basis.reconstruct(r0.into(), &coeffs)
    }

    /// Full operator value `ρ(p)`.
    pub fn matrix_at(&self, p: &PhasePoint) -> Result<QuantumOperator> {
        let w = self.envelope.value(p);
        Ok(self.poly_matrix_at(p)?.scale(w.into()))
    }

    /// `∫ tr ρ = n ∫ ρ₀`.
    pub fn trace_integral(&self) -> f64 {
        self.basis.n() as f64 * self.scalar_field().integrate()
    }
}

/// Adjoint (Schrödinger-picture) bracket `(H, ρ)′`:
/// scalar part `{H₀,ρ₀} + (ħ²/2n) Σᵢ {Hᵢ,ρᵢ}`, components `{H₀,ρₖ} + f_ijk Hᵢρⱼ`.
pub fn schrodinger_bracket(h: &HybridObservable, rho: &HybridField) -> Result<HybridField> {
    if **h.basis() != *rho.basis {
        return Err(Error::BasisMismatch);
    }
    if h.n_c() != rho.n_c() {
        return Err(Error::DimensionMismatch {
            expected: rho.n_c(),
            found: h.n_c(),
        });
    }
    let basis = rho.basis.clone();
    let sc = basis.constants();
    let dim = basis.dim();
    let pb = |a: &PhasePolynomial, r: &PhasePolynomial| -> Result<PhasePolynomial> {
        let f = GaussianField::new(r.clone(), rho.envelope.clone())?;
        Ok(poisson_bracket_state(a, &f)?.poly().clone())
    };
    let (h0, hv) = (h.classical_part(), h.components());

    let mut out0 = pb(h0, &rho.r0)?;
    let w = basis.q_norm2() / basis.n() as f64;
    for i in 0..dim {
        if !hv[i].is_zero() && !rho.rvec[i].is_zero() {
            out0 = out0.add_scaled(&pb(&hv[i], &rho.rvec[i])?, w);
        }
    }
    let mut out = Vec::with_capacity(dim);
    for k in 0..dim {
        out.push(pb(h0, &rho.rvec[k])?);
    }
    for i in 0..dim {
        if hv[i].is_zero() {
            continue;
        }
        for j in 0..dim {
            if rho.rvec[j].is_zero() {
                continue;
            }
            let fs = sc.f_pair(i, j);
            if fs.is_empty() {
                continue;
            }
            let prod = &hv[i] * &rho.rvec[j];
            for &(k, f) in fs {
                out[k] = out[k].add_scaled(&prod, f);
            }
        }
    }
    rho.with_polys(out0, out)
}

/// `⟪X ρ⟫ = ∫ tr(Xρ) = ∫ [n X₀ρ₀ + Σᵢⱼ tr(qᵢqⱼ) Xᵢρⱼ]`.
pub fn pairing(x: &HybridObservable, rho: &HybridField) -> Result<f64> {
    let (value, _) = pairing_with_bound(x, rho)?;
    Ok(value)
}

/// Pairing value together with an upper bound on the integral of its absolute integrand,
/// used to scale tolerances.
pub fn pairing_with_bound(x: &HybridObservable, rho: &HybridField) -> Result<(f64, f64)> {
    if **x.basis() != *rho.basis {
        return Err(Error::BasisMismatch);
    }
    if x.n_c() != rho.n_c() {
        return Err(Error::DimensionMismatch {
            expected: rho.n_c(),
            found: x.n_c(),
        });
    }
    let basis = &rho.basis;
    let mut integrand = x.classical_part() * &rho.r0;
    integrand = integrand.scale(basis.n() as f64);
    let w = basis.q_norm2();
    for (xi, ri) in x.components().iter().zip(&rho.rvec) {
        if !xi.is_zero() && !ri.is_zero() {
            integrand = integrand.add_scaled(&(xi * ri), w);
        }
    }
    let f = GaussianField::new(integrand, rho.envelope.clone())?;
    Ok((f.integrate(), f.abs_integral_bound()))
}
