use std::sync::Arc;

use num_complex::Complex64;

use crate::classical::{Coefficient, PhasePoint, Polynomial};
use crate::error::{Error, Result};
use crate::su::{QuantumOperator, SuBasis};

/// `A = A₀·1 + Σᵢ Aᵢ qᵢ` with polynomial coefficients.
///
/// Real coefficients (the default) describe Hermitian observables. Complex
/// coefficients appear as intermediate values of the rival brackets.
#[derive(Clone, Debug)]
pub struct HybridObservable<T: Coefficient = f64> {
    basis: Arc<SuBasis>,
    a0: Polynomial<T>,
    avec: Vec<Polynomial<T>>,
}

impl<T: Coefficient> PartialEq for HybridObservable<T> {
    fn eq(&self, other: &Self) -> bool {
        *self.basis == *other.basis && self.a0 == other.a0 && self.avec == other.avec
    }
}

impl<T: Coefficient> HybridObservable<T> {
    pub fn new(basis: Arc<SuBasis>, a0: Polynomial<T>, avec: Vec<Polynomial<T>>) -> Result<Self> {
        if avec.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: avec.len(),
            });
        }
        let nvars = a0.nvars();
        if nvars % 2 != 0 || nvars == 0 {
            return Err(Error::InvalidDimension(format!(
                "coefficients need 2·n_c variables, got {nvars}"
            )));
        }
        if let Some(p) = avec.iter().find(|p| p.nvars() != nvars) {
            return Err(Error::DimensionMismatch {
                expected: nvars / 2,
                found: p.nvars() / 2,
            });
        }
        Ok(Self { basis, a0, avec })
    }

    pub fn zero(basis: Arc<SuBasis>, n_c: usize) -> Self {
        let z = Polynomial::phase_zero(n_c);
        let avec = vec![z.clone(); basis.dim()];
        Self { basis, a0: z, avec }
    }

    /// `c·1` for a classical function `c`.
    pub fn classical(basis: Arc<SuBasis>, c: Polynomial<T>) -> Self {
        let z = Polynomial::zero(c.nvars());
        let avec = vec![z; basis.dim()];
        Self { basis, a0: c, avec }
    }

    /// Constant operator `scalar·1 + Σ coeffs_i q_i`.
    pub fn quantal(basis: Arc<SuBasis>, n_c: usize, scalar: T, coeffs: &[T]) -> Result<Self> {
        let nv = 2 * n_c;
        let avec = coeffs.iter().map(|&c| Polynomial::constant(nv, c)).collect();
        Self::new(basis, Polynomial::constant(nv, scalar), avec)
    }

    /// `c·q_i`.
    pub fn generator(basis: Arc<SuBasis>, i: usize, c: Polynomial<T>) -> Result<Self> {
        if i >= basis.dim() {
            return Err(Error::InvalidArgument(format!(
                "generator index {i} out of range for su({})",
                basis.n()
            )));
        }
        let mut out = Self::zero(basis, c.n_c());
        out.avec[i] = c;
        Ok(out)
    }

    /// `1` (identity operator).
    pub fn identity(basis: Arc<SuBasis>, n_c: usize) -> Self {
        Self::classical(basis, Polynomial::constant(2 * n_c, T::one()))
    }

    pub fn basis(&self) -> &Arc<SuBasis> {
        &self.basis
    }

    pub fn n_c(&self) -> usize {
        self.a0.n_c()
    }

    pub fn classical_part(&self) -> &Polynomial<T> {
        &self.a0
    }

    pub fn components(&self) -> &[Polynomial<T>] {
        &self.avec
    }

    pub fn component(&self, i: usize) -> &Polynomial<T> {
        &self.avec[i]
    }

    pub fn into_parts(self) -> (Polynomial<T>, Vec<Polynomial<T>>) {
        (self.a0, self.avec)
    }

    pub fn is_classical(&self) -> bool {
        self.avec.iter().all(|p| p.is_zero())
    }

    pub fn is_quantal(&self) -> bool {
        self.a0.is_constant() && self.avec.iter().all(|p| p.is_constant())
    }

    pub fn is_zero(&self) -> bool {
        self.a0.is_zero() && self.is_classical()
    }

    pub fn degree(&self) -> usize {
        std::iter::once(&self.a0)
            .chain(&self.avec)
            .map(|p| p.degree())
            .max()
            .unwrap_or(0)
    }

    /// Max over components of the max-abs polynomial coefficient.
    pub fn norm(&self) -> f64 {
        std::iter::once(&self.a0)
            .chain(&self.avec)
            .map(|p| p.max_abs_coeff())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if *self.basis != *other.basis {
            return Err(Error::BasisMismatch);
        }
        if self.a0.nvars() != other.a0.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.n_c(),
                found: other.n_c(),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Polynomial<T>, &Polynomial<T>) -> Polynomial<T>) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            basis: self.basis.clone(),
            a0: f(&self.a0, &other.a0),
            avec: self.avec.iter().zip(&other.avec).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, other: &Self, s: T) -> Result<Self> {
        self.zip_with(other, |a, b| a.add_scaled(b, s))
    }

    pub fn map(&self, f: impl Fn(&Polynomial<T>) -> Polynomial<T>) -> Self {
        Self {
            basis: self.basis.clone(),
            a0: f(&self.a0),
            avec: self.avec.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|p| p.scale(s))
    }

    pub fn scale_by(&self, s: T) -> Self {
        self.map(|p| p.scale_by(s))
    }

    /// `c·A` for a classical function `c`.
    pub fn mul_classical(&self, c: &Polynomial<T>) -> Result<Self> {
        if c.nvars() != self.a0.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.n_c(),
                found: c.n_c(),
            });
        }
        Ok(self.map(|p| p * c))
    }

    /// Component values `(A₀, A₁..)` at a point.
    pub fn values_at(&self, p: &PhasePoint) -> Result<(T, Vec<T>)> {
        let a0 = self.a0.evaluate(p)?;
        let avec = self.avec.iter().map(|c| c.evaluate(p)).collect::<Result<_>>()?;
        Ok((a0, avec))
    }

    /// Operator value `A(p)`.
    pub fn matrix_at(&self, p: &PhasePoint) -> Result<QuantumOperator>
    where
        T: Into<Complex64>,
    {
        let (a0, avec) = self.values_at(p)?;
        let coeffs: Vec<Complex64> = avec.into_iter().map(Into::into).collect();
        self.basis.reconstruct(a0.into(), &coeffs)
    }
}

impl HybridObservable<f64> {
    pub fn to_complex(&self) -> HybridObservable<Complex64> {
        HybridObservable {
            basis: self.basis.clone(),
            a0: self.a0.to_complex(),
            avec: self.avec.iter().map(|p| p.to_complex()).collect(),
        }
    }
}

impl HybridObservable<Complex64> {
    /// Real part; the imaginary remainder is returned as its max-abs coefficient.
    pub fn split_real(&self) -> (HybridObservable<f64>, f64) {
        let real = HybridObservable {
            basis: self.basis.clone(),
            a0: self.a0.real_part(),
            avec: self.avec.iter().map(|p| p.real_part()).collect(),
        };
        let imag = std::iter::once(&self.a0)
            .chain(&self.avec)
            .map(|p| p.imag_part().max_abs_coeff())
            .fold(0.0, f64::max);
        (real, imag)
    }
}
