//! Closed-form spin-orbit evolution for `H = g L·S` with a spin-½ quantum sector
//! and three classical dimensions (the large-mass limit, no kinetic term).
//!
//! Observables are written `a + b·S` and states `α + β·S`, where `S_i = q_i`.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use super::rotation::{check_regular, cross_matrix, RotationField};
use crate::classical::{angular_momentum, GaussianField, PhasePoint, PhasePolynomial, Polynomial};
use crate::error::{Error, Result};
use crate::hybrid::{HybridField, HybridObservable};
use crate::su::{QuantumOperator, SuBasis};

fn check_spin_orbit(basis: &SuBasis, n_c: usize) -> Result<()> {
    if basis.n() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: basis.n(),
        });
    }
    if n_c != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: n_c,
        });
    }
    Ok(())
}

fn l_at(p: &PhasePoint) -> Result<Vector3<f64>> {
    let l = p.angular_momentum()?;
    Ok(Vector3::new(l[0], l[1], l[2]))
}

fn spin_matrix(basis: &SuBasis, a: f64, b: &Vector3<f64>) -> Result<QuantumOperator> {
    let coeffs: Vec<Complex64> = b.iter().map(|&v| v.into()).collect();
    basis.reconstruct(a.into(), &coeffs)
}

/// `H = g L·S` as a hybrid observable.
pub fn spin_orbit_hamiltonian(basis: &std::sync::Arc<SuBasis>, g: f64) -> Result<HybridObservable> {
    check_spin_orbit(basis, 3)?;
    let l = angular_momentum();
    HybridObservable::new(
        basis.clone(),
        PhasePolynomial::zero(6),
        l.iter().map(|c| c.scale(g)).collect(),
    )
}

/// Heisenberg-picture values `(a, b)` for one point at time `t`:
/// `b(t) = R_t b₀ + g t (h·L/L²) L + (R_t − 1)(L × h)/L²`, `a(t) = a₀`.
pub fn heisenberg_coefficients(
    rot: &RotationField,
    t: f64,
    l: &Vector3<f64>,
    b0: &Vector3<f64>,
    h: &Vector3<f64>,
) -> Vector3<f64> {
    let r = rot.matrix(t, l);
    let l2 = l.norm_squared();
    r * b0 + l * (rot.g * t * h.dot(l) / l2) + (r - Matrix3::identity()) * l.cross(h) / l2
}

/// Per-point data for the Heisenberg closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct HeisenbergPoint {
    pub l: Vector3<f64>,
    pub a: f64,
    pub b0: Vector3<f64>,
    /// `h = {a, L}`
    pub h: Vector3<f64>,
}

/// Closed-form Heisenberg evolution of `A₀ = a + b·S` under `g L·S`.
#[derive(Clone, Debug)]
pub struct SpinOrbitHeisenberg {
    basis: std::sync::Arc<SuBasis>,
    rot: RotationField,
    a: PhasePolynomial,
    b: [PhasePolynomial; 3],
    h: [PhasePolynomial; 3],
    eps_l: f64,
}

impl SpinOrbitHeisenberg {
    pub fn new(a0: &HybridObservable, g: f64, eps_l: f64) -> Result<Self> {
        check_spin_orbit(a0.basis(), a0.n_c())?;
        let l = angular_momentum();
        let a = a0.classical_part().clone();
        let h = [a.poisson(&l[0]), a.poisson(&l[1]), a.poisson(&l[2])];
        let c = a0.components();
        Ok(Self {
            basis: a0.basis().clone(),
            rot: RotationField::new(g),
            a,
            b: [c[0].clone(), c[1].clone(), c[2].clone()],
            h,
            eps_l,
        })
    }

    pub fn basis(&self) -> &std::sync::Arc<SuBasis> {
        &self.basis
    }

    pub fn prepare(&self, index: usize, p: &PhasePoint) -> Result<HeisenbergPoint> {
        let l = l_at(p)?;
        check_regular(index, &l, self.eps_l)?;
        let ev = |q: &PhasePolynomial| q.evaluate(p);
        Ok(HeisenbergPoint {
            l,
            a: ev(&self.a)?,
            b0: Vector3::new(ev(&self.b[0])?, ev(&self.b[1])?, ev(&self.b[2])?),
            h: Vector3::new(ev(&self.h[0])?, ev(&self.h[1])?, ev(&self.h[2])?),
        })
    }

    pub fn coefficients(&self, t: f64, d: &HeisenbergPoint) -> (f64, Vector3<f64>) {
        (d.a, heisenberg_coefficients(&self.rot, t, &d.l, &d.b0, &d.h))
    }

    pub fn matrix(&self, t: f64, d: &HeisenbergPoint) -> Result<QuantumOperator> {
        let (a, b) = self.coefficients(t, d);
        spin_matrix(&self.basis, a, &b)
    }
}

/// Pointwise `A(t)` for `A₀ = a + b·S`; points with `|L| <= eps_l` are rejected.
pub fn spin_orbit_closed_form(
    a0: &HybridObservable,
    g: f64,
    t: f64,
    points: &[PhasePoint],
    eps_l: f64,
) -> Result<Vec<QuantumOperator>> {
    let cf = SpinOrbitHeisenberg::new(a0, g, eps_l)?;
    points
        .iter()
        .enumerate()
        .map(|(i, p)| cf.matrix(t, &cf.prepare(i, p)?))
        .collect()
}

/// `b(t) = ∇a + R_t (b₀ − ∇a)` for observables that depend on `L` only.
///
/// `a` and `b` are polynomials in the three variables `L1, L2, L3`; results are
/// `(a, b)` at each supplied `L`.
pub fn spin_orbit_closed_form_l_only(
    a: &Polynomial<f64>,
    b: &[Polynomial<f64>; 3],
    g: f64,
    t: f64,
    ls: &[Vector3<f64>],
    eps_l: f64,
) -> Result<Vec<(f64, Vector3<f64>)>> {
    check_l_polys(std::iter::once(a).chain(b.iter()))?;
    let rot = RotationField::new(g);
    let grad = [a.derivative(0), a.derivative(1), a.derivative(2)];
    ls.iter()
        .enumerate()
        .map(|(i, l)| {
            check_regular(i, l, eps_l)?;
            let c = l.as_slice();
            let ga = Vector3::new(
                grad[0].evaluate_coords(c),
                grad[1].evaluate_coords(c),
                grad[2].evaluate_coords(c),
            );
            let b0 = Vector3::new(b[0].evaluate_coords(c), b[1].evaluate_coords(c), b[2].evaluate_coords(c));
            Ok((a.evaluate_coords(c), ga + rot.matrix(t, l) * (b0 - ga)))
        })
        .collect()
}

fn check_l_polys<'a>(mut polys: impl Iterator<Item = &'a Polynomial<f64>>) -> Result<()> {
    if let Some(p) = polys.find(|p| p.nvars() != 3) {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: p.nvars(),
        });
    }
    Ok(())
}

/// `∫₀ᵗ g R_τ⁻¹ dτ` at angular momentum `l` (with `θ = g t |L|`).
pub fn integrated_inverse_rotation(g: f64, t: f64, l: &Vector3<f64>) -> Matrix3<f64> {
    let norm = l.norm();
    let n = l / norm;
    let theta = g * t * norm;
    let (s, c) = theta.sin_cos();
    Matrix3::identity() * (s / norm) + cross_matrix(&n) * ((1.0 - c) / norm) + n * n.transpose() * (g * t - s / norm)
}

/// Schrödinger-picture values `(α, β)` at one point:
/// `β(t) = R_t⁻¹β₀`,
/// `α(t) = α₀ + (ħ²/4)[2(1 − cos θ) L·β₀/L² + Σᵢⱼ (∫ g R⁻¹)ᵢⱼ hᵢⱼ]` with `hᵢⱼ = {Lᵢ, β₀ⱼ}`.
pub fn schrodinger_coefficients(
    rot: &RotationField,
    hbar: f64,
    t: f64,
    l: &Vector3<f64>,
    alpha0: f64,
    beta0: &Vector3<f64>,
    h: &Matrix3<f64>,
) -> (f64, Vector3<f64>) {
    let beta = rot.inverse(t, l) * beta0;
    let l2 = l.norm_squared();
    let theta = rot.g * t * l.norm();
    let m = integrated_inverse_rotation(rot.g, t, l);
    let contraction: f64 = m.component_mul(h).sum();
    let alpha = alpha0 + 0.25 * hbar * hbar * (2.0 * (1.0 - theta.cos()) * l.dot(beta0) / l2 + contraction);
    (alpha, beta)
}

/// Per-point data for the Schrödinger closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct SchrodingerPoint {
    pub l: Vector3<f64>,
    pub alpha0: f64,
    pub beta0: Vector3<f64>,
    /// `h[(i, j)] = {L_i, β₀_j}`
    pub h: Matrix3<f64>,
}

/// Closed-form Schrödinger evolution of `ρ₀ = α + β·S` under `g L·S`.
#[derive(Clone, Debug)]
pub struct SpinOrbitSchrodinger {
    basis: std::sync::Arc<SuBasis>,
    rot: RotationField,
    alpha: GaussianField,
    beta: [GaussianField; 3],
    h: Vec<GaussianField>,
    eps_l: f64,
    /// When set, the envelope factor is dropped from every value.
    poly_only: bool,
}

impl SpinOrbitSchrodinger {
    pub fn new(rho0: &HybridField, g: f64, eps_l: f64) -> Result<Self> {
        check_spin_orbit(rho0.basis(), rho0.n_c())?;
        let l = angular_momentum();
        let beta = [rho0.component_field(0), rho0.component_field(1), rho0.component_field(2)];
        let mut h = Vec::with_capacity(9);
        for li in &l {
            for bj in &beta {
                h.push(bj.bracket_from(li)?);
            }
        }
        Ok(Self {
            basis: rho0.basis().clone(),
            rot: RotationField::new(g),
            alpha: rho0.scalar_field(),
            beta,
            h,
            eps_l,
            poly_only: false,
        })
    }

    /// Values without the (positive) envelope factor, for positivity scans.
    pub fn polynomial_part(mut self) -> Self {
        self.poly_only = true;
        self
    }

    pub fn basis(&self) -> &std::sync::Arc<SuBasis> {
        &self.basis
    }

    pub fn prepare(&self, index: usize, p: &PhasePoint) -> Result<SchrodingerPoint> {
        let l = l_at(p)?;
        check_regular(index, &l, self.eps_l)?;
        let ev = |f: &GaussianField| -> Result<f64> {
            if self.poly_only {
                f.poly().evaluate(p)
            } else {
                f.evaluate(p)
            }
        };
        let mut h = Matrix3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                h[(i, j)] = ev(&self.h[3 * i + j])?;
            }
        }
        Ok(SchrodingerPoint {
            l,
            alpha0: ev(&self.alpha)?,
            beta0: Vector3::new(ev(&self.beta[0])?, ev(&self.beta[1])?, ev(&self.beta[2])?),
            h,
        })
    }

    pub fn coefficients(&self, t: f64, d: &SchrodingerPoint) -> (f64, Vector3<f64>) {
        schrodinger_coefficients(&self.rot, self.basis.hbar(), t, &d.l, d.alpha0, &d.beta0, &d.h)
    }

    pub fn matrix(&self, t: f64, d: &SchrodingerPoint) -> Result<QuantumOperator> {
        let (a, b) = self.coefficients(t, d);
        spin_matrix(&self.basis, a, &b)
    }
}

/// Pointwise `ρ(t)` for `ρ₀ = α + β·S`; points with `|L| <= eps_l` are rejected.
pub fn spin_orbit_schrodinger_closed_form(
    rho0: &HybridField,
    g: f64,
    t: f64,
    points: &[PhasePoint],
    eps_l: f64,
) -> Result<Vec<QuantumOperator>> {
    let cf = SpinOrbitSchrodinger::new(rho0, g, eps_l)?;
    points
        .iter()
        .enumerate()
        .map(|(i, p)| cf.matrix(t, &cf.prepare(i, p)?))
        .collect()
}

/// `α(t) = α₀ + (ħ²/4) ∇·((R_t⁻¹ − 1) β₀)` for states that depend on `L` only.
///
/// Returns `(α, β)` at each supplied `L`.
pub fn spin_orbit_schrodinger_l_only(
    alpha: &Polynomial<f64>,
    beta: &[Polynomial<f64>; 3],
    g: f64,
    hbar: f64,
    t: f64,
    ls: &[Vector3<f64>],
    eps_l: f64,
) -> Result<Vec<(f64, Vector3<f64>)>> {
    check_l_polys(std::iter::once(alpha).chain(beta.iter()))?;
    let rot = RotationField::new(g);
    let mut jac = Vec::with_capacity(9);
    for b in beta {
        for i in 0..3 {
            jac.push(b.derivative(i));
        }
    }
    ls.iter()
        .enumerate()
        .map(|(idx, l)| {
            let norm = check_regular(idx, l, eps_l)?;
            let c = l.as_slice();
            let b0 = Vector3::new(
                beta[0].evaluate_coords(c),
                beta[1].evaluate_coords(c),
                beta[2].evaluate_coords(c),
            );
            let m = rot.inverse(t, l);
            let cos = (rot.g * t * norm).cos();
            // ∂ᵢ R⁻¹ᵢⱼ = 2(1 − cos θ) Lⱼ/L²
            let mut div = 2.0 * (1.0 - cos) * l.dot(&b0) / (norm * norm);
            for i in 0..3 {
                for j in 0..3 {
                    let dij = if i == j { 1.0 } else { 0.0 };
                    div += (m[(i, j)] - dij) * jac[3 * j + i].evaluate_coords(c);
                }
            }
            Ok((alpha.evaluate_coords(c) + 0.25 * hbar * hbar * div, m * b0))
        })
        .collect()
}
