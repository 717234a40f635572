use std::sync::Arc;

use num_complex::Complex64;

use super::observable::HybridObservable;
use crate::classical::{Coefficient, Polynomial};
use crate::error::{Error, Result};
use crate::su::SuBasis;

type CPoly = Polynomial<Complex64>;

/// An `n × n` matrix of complex phase-space polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPolynomial {
    n: usize,
    nvars: usize,
    entries: Vec<CPoly>,
}

impl MatrixPolynomial {
    pub fn zero(n: usize, nvars: usize) -> Self {
        Self {
            n,
            nvars,
            entries: vec![CPoly::zero(nvars); n * n],
        }
    }

    /// Operator form `A₀·1 + Σ Aᵢ qᵢ` of a hybrid observable.
    pub fn from_observable<T>(a: &HybridObservable<T>) -> Self
    where
        T: Coefficient + Into<Complex64>,
    {
        let basis = a.basis();
        let n = basis.n();
        let nvars = 2 * a.n_c();
        let mut out = Self::zero(n, nvars);
        let half = basis.hbar() / 2.0;
        let a0 = a.classical_part().map_coeffs(|c| c.into());
        for d in 0..n {
            out.entries[d * n + d] = a0.clone();
        }
        for (i, ai) in a.components().iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let ai = ai.map_coeffs(|c| c.into());
            let lam = basis.lambda(i);
            for r in 0..n {
                for c in 0..n {
                    let v = lam.get(r, c);
                    if v != Complex64::new(0.0, 0.0) {
                        let idx = r * n + c;
                        out.entries[idx] = out.entries[idx].add_scaled(&ai, v * half);
                    }
                }
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &CPoly {
        &self.entries[r * self.n + c]
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.entries.iter().map(|p| p.max_abs_coeff()).fold(0.0, f64::max)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars / 2,
                found: other.nvars / 2,
            });
        }
        Ok(())
    }

    pub fn add_scaled(&self, other: &Self, s: Complex64) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            n: self.n,
            nvars: self.nvars,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add_scaled(b, s))
                .collect(),
        })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            n: self.n,
            nvars: self.nvars,
            entries: self.entries.iter().map(|p| p.scale_by(s)).collect(),
        }
    }

    fn combine(&self, other: &Self, op: impl Fn(&CPoly, &CPoly) -> CPoly) -> Result<Self> {
        self.check(other)?;
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = CPoly::zero(self.nvars);
                for k in 0..n {
                    let (a, b) = (self.get(r, k), other.get(k, c));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &op(a, b);
                }
                entries.push(acc);
            }
        }
        Ok(Self {
            n,
            nvars: self.nvars,
            entries,
        })
    }

    /// Matrix product with polynomial entries.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a * b)
    }

    /// Ordered matrix Poisson bracket `{A, B}_rc = Σ_k {A_rk, B_kc}`.
    pub fn poisson(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.poisson(b))
    }

    /// `(AB − BA)/(iħ)`.
    pub fn commutator_bracket(&self, other: &Self, hbar: f64) -> Result<Self> {
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        Ok(ab
            .add_scaled(&ba, Complex64::new(-1.0, 0.0))?
            .scale(Complex64::new(0.0, -1.0 / hbar)))
    }

    /// Re-expands in the basis: scalar `tr/n`, coefficients `tr(M λᵢ)/ħ`.
    pub fn to_observable(&self, basis: &Arc<SuBasis>) -> Result<HybridObservable<Complex64>> {
        if basis.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: basis.n(),
                found: self.n,
            });
        }
        let n = self.n;
        let mut a0 = CPoly::zero(self.nvars);
        for d in 0..n {
            a0 = &a0 + self.get(d, d);
        }
        a0 = a0.scale(1.0 / n as f64);
        let mut avec = Vec::with_capacity(basis.dim());
        for lam in basis.lambdas() {
            let mut ci = CPoly::zero(self.nvars);
            for r in 0..n {
                for c in 0..n {
                    let v = lam.get(c, r);
                    if v != Complex64::new(0.0, 0.0) {
                        ci = ci.add_scaled(self.get(r, c), v / basis.hbar());
                    }
                }
            }
            avec.push(ci);
        }
        HybridObservable::new(basis.clone(), a0, avec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::PhasePolynomial;
    use crate::su::build_basis;

    #[test]
    fn round_trip_through_matrix_form() {
        let b = build_basis(3, 0.8).unwrap();
        let x = PhasePolynomial::x(1, 0);
        let k = PhasePolynomial::k(1, 0);
        let mut a = HybridObservable::classical(b.clone(), &x * &k);
        for i in 0..b.dim() {
            let c = &x.scale(i as f64) + &k.scale(1.0 - i as f64);
            a = a.add(&HybridObservable::generator(b.clone(), i, c).unwrap()).unwrap();
        }
        let m = MatrixPolynomial::from_observable(&a);
        let back = m.to_observable(&b).unwrap();
        let diff = back.sub(&a.to_complex()).unwrap();
        assert!(diff.norm() < 1e-14);
    }
}
