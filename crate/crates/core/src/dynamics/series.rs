//! Truncated Lie series `Σ_k (t^k/k!) ad^k(X)` in both pictures.

use serde::{Deserialize, Serialize};

use super::density::DensityField;
use crate::classical::PhasePoint;
use crate::error::{Error, Result};
use crate::hybrid::{heisenberg_bracket, schrodinger_bracket, HybridField, HybridObservable};
use crate::su::QuantumOperator;

/// Remainder estimates above this fraction of `‖X‖` flag the result.
pub const REMAINDER_WARN: f64 = 1e-6;

/// Values a Lie series can be built from.
pub trait SeriesValue: Clone {
    fn add_scaled(&self, other: &Self, s: f64) -> Result<Self>;
    fn scale(&self, s: f64) -> Self;
    fn norm(&self) -> f64;
    fn matrix_at(&self, p: &PhasePoint) -> Result<QuantumOperator>;
}

impl SeriesValue for HybridObservable {
    fn add_scaled(&self, other: &Self, s: f64) -> Result<Self> {
        HybridObservable::add_scaled(self, other, s)
    }
    fn scale(&self, s: f64) -> Self {
        HybridObservable::scale(self, s)
    }
    fn norm(&self) -> f64 {
        HybridObservable::norm(self)
    }
    fn matrix_at(&self, p: &PhasePoint) -> Result<QuantumOperator> {
        HybridObservable::matrix_at(self, p)
    }
}

impl SeriesValue for HybridField {
    fn add_scaled(&self, other: &Self, s: f64) -> Result<Self> {
        HybridField::add_scaled(self, other, s)
    }
    fn scale(&self, s: f64) -> Self {
        HybridField::scale(self, s)
    }
    fn norm(&self) -> f64 {
        HybridField::norm(self)
    }
    fn matrix_at(&self, p: &PhasePoint) -> Result<QuantumOperator> {
        HybridField::matrix_at(self, p)
    }
}

/// Precomputed terms `ad^k(X)/k!` for `k = 0..=K`, reusable for many `t`.
#[derive(Clone, Debug)]
pub struct LieSeries<V> {
    terms: Vec<V>,
    /// `‖ad^{K+1}(X)‖/(K+1)!`
    tail: f64,
    base_norm: f64,
}

/// Series value at one time with its truncation estimate.
#[derive(Clone, Debug)]
pub struct SeriesResult<V> {
    pub value: V,
    /// `‖ad^{K+1}(X)‖·|t|^{K+1}/(K+1)!`
    pub remainder: f64,
    /// Set when the remainder exceeds `REMAINDER_WARN·‖X‖`.
    pub warning: bool,
}

/// Summary of a series evaluation, for reports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationEstimate {
    pub order: usize,
    pub remainder: f64,
    pub warning: bool,
}

impl<V: SeriesValue> LieSeries<V> {
    /// Builds terms by repeated application of `ad`.
    pub fn build(x: &V, order: usize, ad: impl Fn(&V) -> Result<V>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("series order must be at least 1".into()));
        }
        let mut terms = Vec::with_capacity(order + 1);
        terms.push(x.clone());
        let mut cur = x.clone();
        for k in 1..=order + 1 {
            cur = ad(&cur)?.scale(1.0 / k as f64);
            if k <= order {
                terms.push(cur.clone());
            }
        }
        Ok(Self {
            terms,
            tail: cur.norm(),
            base_norm: x.norm(),
        })
    }

    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    /// `ad^k(X)/k!`.
    pub fn term(&self, k: usize) -> &V {
        &self.terms[k]
    }

    pub fn terms(&self) -> &[V] {
        &self.terms
    }

    pub fn remainder(&self, t: f64) -> f64 {
        self.tail * t.abs().powi(self.terms.len() as i32)
    }

    pub fn estimate(&self, t: f64) -> TruncationEstimate {
        let remainder = self.remainder(t);
        TruncationEstimate {
            order: self.order(),
            remainder,
            warning: remainder > REMAINDER_WARN * self.base_norm,
        }
    }

    /// Truncated series at `t`, summed in ascending powers so that coefficient pruning
    /// is relative to the size of the result rather than of the largest term.
    ///
    /// For high-order Schrödinger series the summed field can still lose integrals to
    /// pruning (high-degree monomials carry large Gaussian moments); expectations should
    /// pair term by term as [`crate::dynamics::conservation_report`] does.
    pub fn evaluate(&self, t: f64) -> Result<SeriesResult<V>> {
        let mut acc = self.terms[0].clone();
        let mut tk = 1.0;
        for term in &self.terms[1..] {
            tk *= t;
            acc = acc.add_scaled(term, tk)?;
        }
        let est = self.estimate(t);
        Ok(SeriesResult {
            value: acc,
            remainder: est.remainder,
            warning: est.warning,
        })
    }

    /// Operator values of every term at a point; see [`sum_point_terms`].
    pub fn point_terms(&self, p: &PhasePoint) -> Result<Vec<QuantumOperator>> {
        self.terms.iter().map(|v| v.matrix_at(p)).collect()
    }
}

/// `Σ_k t^k M_k` for per-point term values.
pub fn sum_point_terms(terms: &[QuantumOperator], t: f64) -> Result<QuantumOperator> {
    let mut acc = terms.last().expect("nonempty").clone();
    for m in terms.iter().rev().skip(1) {
        acc = m.add(&acc.scale(t.into()))?;
    }
    Ok(acc)
}

/// Heisenberg-picture series with `ad(X) = (X, H)`.
pub fn heisenberg_series(a: &HybridObservable, h: &HybridObservable, order: usize) -> Result<LieSeries<HybridObservable>> {
    a.add(h)?; // basis and dimension check
    LieSeries::build(a, order, |x| heisenberg_bracket(x, h))
}

/// Schrödinger-picture series with `ad(ρ) = (H, ρ)′`.
pub fn schrodinger_series(rho: &HybridField, h: &HybridObservable, order: usize) -> Result<LieSeries<HybridField>> {
    LieSeries::build(rho, order, |r| schrodinger_bracket(h, r))
}

/// `A(t) ≈ Σ_{k≤K} (t^k/k!) ad_H^k(A)`.
pub fn lie_series_heisenberg(
    a: &HybridObservable,
    h: &HybridObservable,
    t: f64,
    order: usize,
) -> Result<SeriesResult<HybridObservable>> {
    heisenberg_series(a, h, order)?.evaluate(t)
}

/// `ρ(t) ≈ Σ_{k≤K} (t^k/k!) ad′_H^k(ρ)`.
pub fn lie_series_schrodinger(
    rho: &DensityField,
    h: &HybridObservable,
    t: f64,
    order: usize,
) -> Result<SeriesResult<DensityField>> {
    let r = schrodinger_series(rho.field(), h, order)?.evaluate(t)?;
    Ok(SeriesResult {
        value: DensityField::from_evolved(r.value),
        remainder: r.remainder,
        warning: r.warning,
    })
}

/// Step-and-restart composition: returns `X(0), X(dt), ..., X(steps·dt)`.
///
/// Only sensible when the polynomial degree stays bounded under the flow.
pub fn stepped<V: SeriesValue>(
    x: &V,
    dt: f64,
    steps: usize,
    order: usize,
    ad: impl Fn(&V) -> Result<V>,
) -> Result<(Vec<V>, f64)> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(x.clone());
    let mut worst = 0.0f64;
    let mut cur = x.clone();
    for _ in 0..steps {
        let s = LieSeries::build(&cur, order, &ad)?;
        let r = s.evaluate(dt)?;
        worst = worst.max(r.remainder);
        cur = r.value;
        out.push(cur.clone());
    }
    Ok((out, worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{angular_momentum, PhasePolynomial};
    use crate::su::build_basis;
    use std::sync::Arc;

    fn spin_orbit(b: &Arc<crate::su::SuBasis>, g: f64) -> HybridObservable {
        let l = angular_momentum();
        let mut h = HybridObservable::zero(b.clone(), 3);
        for i in 0..3 {
            h = h.add(&HybridObservable::generator(b.clone(), i, l[i].scale(g)).unwrap()).unwrap();
        }
        h
    }

    #[test]
    fn zero_time_is_identity() {
        let b = build_basis(2, 1.0).unwrap();
        let h = spin_orbit(&b, 0.9);
        let a = HybridObservable::classical(b, PhasePolynomial::x(3, 0));
        let r = lie_series_heisenberg(&a, &h, 0.0, 5).unwrap();
        assert_eq!(r.value, a);
        assert_eq!(r.remainder, 0.0);
    }

    #[test]
    fn spin_first_order() {
        // S_i + t g (L × S)_i
        let (g, t) = (0.6, 0.3);
        let b = build_basis(2, 1.0).unwrap();
        let h = spin_orbit(&b, g);
        let l = angular_momentum();
        for i in 0..3 {
            let s = HybridObservable::generator(b.clone(), i, PhasePolynomial::one(6)).unwrap();
            let got = lie_series_heisenberg(&s, &h, t, 1).unwrap().value;
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let want = s
                .add(&HybridObservable::generator(b.clone(), k, l[j].scale(t * g)).unwrap())
                .unwrap()
                .add(&HybridObservable::generator(b.clone(), j, l[k].scale(-t * g)).unwrap())
                .unwrap();
            assert!(got.sub(&want).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn orbital_second_order() {
        // L_i − t g (L×S)_i + (t²/2) g² (L² S_i − (L·S) L_i)
        let (g, t) = (0.6, 0.3);
        let b = build_basis(2, 1.0).unwrap();
        let h = spin_orbit(&b, g);
        let l = angular_momentum();
        let l2 = &(&(&l[0] * &l[0]) + &(&l[1] * &l[1])) + &(&l[2] * &l[2]);
        let gen = |i: usize, c: PhasePolynomial| HybridObservable::generator(b.clone(), i, c).unwrap();
        for i in 0..3 {
            let li = HybridObservable::classical(b.clone(), l[i].clone());
            let got = lie_series_heisenberg(&li, &h, t, 2).unwrap().value;
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let c2 = 0.5 * t * t * g * g;
            let mut want = li.clone();
            want = want.add(&gen(k, l[j].scale(-t * g))).unwrap();
            want = want.add(&gen(j, l[k].scale(t * g))).unwrap();
            want = want.add(&gen(i, l2.scale(c2))).unwrap();
            for m in 0..3 {
                want = want.add(&gen(m, (&l[m] * &l[i]).scale(-c2))).unwrap();
            }
            assert!(got.sub(&want).unwrap().norm() < 1e-14);
        }
    }

    #[test]
    fn remainder_warning_for_large_t() {
        let b = build_basis(2, 1.0).unwrap();
        let h = spin_orbit(&b, 1.0);
        let a = HybridObservable::classical(b, PhasePolynomial::x(3, 0));
        let s = heisenberg_series(&a, &h, 3).unwrap();
        assert!(!s.estimate(1e-4).warning);
        assert!(s.estimate(10.0).warning);
    }
}
