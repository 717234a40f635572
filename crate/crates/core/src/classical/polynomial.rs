//! Exact multivariate polynomials over phase-space variables.
//!
//! Variables are ordered `x1..x_nc, k1..k_nc`. Coefficients are generic over
//! [`Coefficient`] so the same code drives real observables and the complex
//! entries of operator-valued polynomials.

use std::collections::BTreeMap;
use std::fmt::{self, Debug};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exponent multi-index, one entry per variable.
pub type Exponents = SmallVec<[u16; 6]>;

/// Relative threshold below which coefficients are dropped after each operation.
pub const PRUNE_RELATIVE: f64 = 1e-14;

/// Scalar ring used for polynomial coefficients.
pub trait Coefficient:
    Copy
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
{
    fn magnitude(self) -> f64;
    fn from_real(x: f64) -> Self;
    fn scale(self, s: f64) -> Self;
}

impl Coefficient for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
}

impl Coefficient for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
}

/// A point `(x, k)` of the classical phase space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: Vec<f64>,
    pub k: Vec<f64>,
}

impl PhasePoint {
    pub fn new(x: Vec<f64>, k: Vec<f64>) -> Result<Self> {
        if x.len() != k.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: k.len(),
            });
        }
        if x.is_empty() {
            return Err(Error::InvalidDimension("phase point needs n_c >= 1".into()));
        }
        if x.iter().chain(k.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("phase point has non-finite entries".into()));
        }
        Ok(Self { x, k })
    }

    pub fn origin(n_c: usize) -> Self {
        Self {
            x: vec![0.0; n_c],
            k: vec![0.0; n_c],
        }
    }

    pub fn n_c(&self) -> usize {
        self.x.len()
    }

    /// Coordinates in variable order `x1..x_nc, k1..k_nc`.
    pub fn coords(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.x.len());
        out.extend_from_slice(&self.x);
        out.extend_from_slice(&self.k);
        out
    }

    pub fn from_coords(coords: &[f64]) -> Result<Self> {
        if coords.len() % 2 != 0 {
            return Err(Error::InvalidDimension(format!(
                "{} coordinates cannot split into (x, k)",
                coords.len()
            )));
        }
        let n_c = coords.len() / 2;
        Self::new(coords[..n_c].to_vec(), coords[n_c..].to_vec())
    }

    /// Orbital angular momentum `x × k` (three classical dimensions only).
    pub fn angular_momentum(&self) -> Result<[f64; 3]> {
        if self.n_c() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: self.n_c(),
            });
        }
        let (x, k) = (&self.x, &self.k);
        Ok([
            x[1] * k[2] - x[2] * k[1],
            x[2] * k[0] - x[0] * k[2],
            x[0] * k[1] - x[1] * k[0],
        ])
    }
}

/// Exact polynomial with coefficients in `T`.
///
/// For phase-space use `nvars == 2 * n_c`; other variable counts are allowed
/// for auxiliary polynomials (e.g. functions of `L` only).
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial<T: Coefficient = f64> {
    nvars: usize,
    terms: BTreeMap<Exponents, T>,
}

/// Real polynomial on the phase space.
pub type PhasePolynomial = Polynomial<f64>;

impl<T: Coefficient> Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polynomial")
            .field("nvars", &self.nvars)
            .field("terms", &self.terms)
            .finish()
    }
}

impl<T: Coefficient> Polynomial<T> {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    /// Zero polynomial on a phase space with `n_c` classical dimensions.
    pub fn phase_zero(n_c: usize) -> Self {
        Self::zero(2 * n_c)
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        let mut p = Self::zero(nvars);
        if c != T::zero() {
            p.terms.insert(SmallVec::from_elem(0, nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, T::one())
    }

    /// The bare variable with index `var`.
    pub fn variable(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable {var} out of range for {nvars} variables");
        let mut e: Exponents = SmallVec::from_elem(0, nvars);
        e[var] = 1;
        Self::monomial(e, T::one())
    }

    /// Position coordinate `x_i` (zero-based `i`) on an `n_c`-dimensional phase space.
    pub fn x(n_c: usize, i: usize) -> Self {
        assert!(i < n_c);
        Self::variable(2 * n_c, i)
    }

    /// Momentum coordinate `k_i` (zero-based `i`).
    pub fn k(n_c: usize, i: usize) -> Self {
        assert!(i < n_c);
        Self::variable(2 * n_c, n_c + i)
    }

    pub fn monomial(exponents: Exponents, c: T) -> Self {
        let nvars = exponents.len();
        let mut p = Self::zero(nvars);
        if c != T::zero() {
            p.terms.insert(exponents, c);
        }
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, summing duplicates.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u16>, T)>,
    {
        let mut map: BTreeMap<Exponents, T> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            *map.entry(SmallVec::from_vec(e)).or_insert_with(T::zero) += c;
        }
        let mut p = Self { nvars, terms: map };
        p.prune();
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Classical dimension `n_c` for phase-space polynomials.
    pub fn n_c(&self) -> usize {
        self.nvars / 2
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &T)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponents: &[u16]) -> T {
        self.terms.get(exponents).copied().unwrap_or_else(T::zero)
    }

    pub fn constant_term(&self) -> T {
        let zero: Exponents = SmallVec::from_elem(0, self.nvars);
        self.coefficient(&zero)
    }

    /// True when the polynomial has no variable dependence.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&p| p == 0))
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&p| p as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Largest coefficient magnitude (the max-coefficient norm).
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    fn prune(&mut self) {
        let max = self.max_abs_coeff();
        let cut = max * PRUNE_RELATIVE;
        self.terms.retain(|_, c| {
            let m = c.magnitude();
            m != 0.0 && m > cut
        });
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(
            self.nvars, other.nvars,
            "polynomial variable count mismatch ({} vs {})",
            self.nvars, other.nvars
        );
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_coeffs(|c| c.scale(s))
    }

    pub fn scale_by(&self, s: T) -> Self {
        self.map_coeffs(|c| c * s)
    }

    pub fn map_coeffs<U: Coefficient>(&self, f: impl Fn(T) -> U) -> Polynomial<U> {
        let mut out = Polynomial::<U> {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), f(c))).collect(),
        };
        out.prune();
        out
    }

    fn add_scaled_into(&mut self, other: &Self, s: T) {
        for (e, &c) in &other.terms {
            *self.terms.entry(e.clone()).or_insert_with(T::zero) += c * s;
        }
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &Self, s: T) -> Self {
        self.check_same(other);
        let mut out = self.clone();
        out.add_scaled_into(other, s);
        out.prune();
        out
    }

    pub fn mul_poly(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut terms: BTreeMap<Exponents, T> = BTreeMap::new();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_insert_with(T::zero) += ca * cb;
            }
        }
        let mut out = Self {
            nvars: self.nvars,
            terms,
        };
        out.prune();
        out
    }

    pub fn derivative(&self, var: usize) -> Self {
        assert!(var < self.nvars);
        let mut terms = BTreeMap::new();
        for (e, &c) in &self.terms {
            let p = e[var];
            if p == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] = p - 1;
            terms.insert(e2, c.scale(p as f64));
        }
        let mut out = Self {
            nvars: self.nvars,
            terms,
        };
        out.prune();
        out
    }

    /// Poisson bracket with `other`; panics on a variable-count mismatch.
    ///
    /// Both terms of `∂A/∂x ∂B/∂k − ∂A/∂k ∂B/∂x` land on the same monomial
    /// `a + b − e_x − e_k`, so each pair of terms is visited once.
    pub fn poisson(&self, other: &Self) -> Self {
        self.check_same(other);
        assert!(self.nvars % 2 == 0, "Poisson bracket needs an even variable count");
        let n_c = self.nvars / 2;
        let mut terms: BTreeMap<Exponents, T> = BTreeMap::new();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let prod = ca * cb;
                for i in 0..n_c {
                    let (xi, ki) = (i, n_c + i);
                    let w = ea[xi] as f64 * eb[ki] as f64 - ea[ki] as f64 * eb[xi] as f64;
                    if w == 0.0 {
                        continue;
                    }
                    let mut e: Exponents =
                        ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                    e[xi] -= 1;
                    e[ki] -= 1;
                    *terms.entry(e).or_insert_with(T::zero) += prod.scale(w);
                }
            }
        }
        let mut out = Self {
            nvars: self.nvars,
            terms,
        };
        out.prune();
        out
    }

    /// Evaluates at raw coordinates (length `nvars`).
    pub fn evaluate_coords(&self, coords: &[f64]) -> T {
        assert_eq!(coords.len(), self.nvars);
        let mut acc = T::zero();
        for (e, &c) in &self.terms {
            let mut m = 1.0;
            for (v, &p) in coords.iter().zip(e.iter()) {
                if p > 0 {
                    m *= v.powi(p as i32);
                }
            }
            acc += c.scale(m);
        }
        acc
    }

    pub fn evaluate(&self, p: &PhasePoint) -> Result<T> {
        if 2 * p.n_c() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars / 2,
                found: p.n_c(),
            });
        }
        Ok(self.evaluate_coords(&p.coords()))
    }

    /// Substitutes polynomial arguments for every variable.
    ///
    /// `args[v]` replaces variable `v`; all arguments share one variable count,
    /// which becomes the result's.
    pub fn substitute(&self, args: &[Polynomial<T>]) -> Result<Polynomial<T>> {
        if args.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: args.len(),
            });
        }
        let out_vars = args.first().map(|a| a.nvars).unwrap_or(0);
        if args.iter().any(|a| a.nvars != out_vars) {
            return Err(Error::InvalidArgument(
                "substitution arguments differ in variable count".into(),
            ));
        }
        let mut powers: Vec<Vec<Polynomial<T>>> = vec![vec![Polynomial::one(out_vars)]; self.nvars];
        let mut out = Polynomial::zero(out_vars);
        for (e, &c) in &self.terms {
            let mut m = Polynomial::constant(out_vars, c);
            for (v, &p) in e.iter().enumerate() {
                let p = p as usize;
                while powers[v].len() <= p {
                    let next = powers[v].last().expect("seeded").mul_poly(&args[v]);
                    powers[v].push(next);
                }
                if p > 0 {
                    m = m.mul_poly(&powers[v][p]);
                }
            }
            out.add_scaled_into(&m, T::one());
        }
        out.prune();
        Ok(out)
    }
}

impl Polynomial<f64> {
    pub fn to_complex(&self) -> Polynomial<Complex64> {
        self.map_coeffs(Complex64::from_real)
    }
}

impl Polynomial<Complex64> {
    pub fn real_part(&self) -> Polynomial<f64> {
        self.map_coeffs(|c| c.re)
    }

    pub fn imag_part(&self) -> Polynomial<f64> {
        self.map_coeffs(|c| c.im)
    }

    pub fn conj(&self) -> Self {
        self.map_coeffs(|c| c.conj())
    }
}

/// Poisson bracket `{a, b}`.
pub fn poisson_bracket<T: Coefficient>(a: &Polynomial<T>, b: &Polynomial<T>) -> Result<Polynomial<T>> {
    if a.nvars != b.nvars {
        return Err(Error::DimensionMismatch {
            expected: a.nvars / 2,
            found: b.nvars / 2,
        });
    }
    if a.nvars % 2 != 0 {
        return Err(Error::InvalidDimension(
            "Poisson bracket needs a phase-space polynomial".into(),
        ));
    }
    Ok(a.poisson(b))
}

/// Orbital angular momentum components `L = x × k` as phase polynomials (`n_c = 3`).
pub fn angular_momentum() -> [PhasePolynomial; 3] {
    let x = |i| PhasePolynomial::x(3, i);
    let k = |i| PhasePolynomial::k(3, i);
    [
        &(&x(1) * &k(2)) - &(&x(2) * &k(1)),
        &(&x(2) * &k(0)) - &(&x(0) * &k(2)),
        &(&x(0) * &k(1)) - &(&x(1) * &k(0)),
    ]
}

impl<T: Coefficient> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        self.add_scaled(rhs, T::one())
    }
}

impl<T: Coefficient> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        self.add_scaled(rhs, -T::one())
    }
}

impl<T: Coefficient> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        self.mul_poly(rhs)
    }
}

impl<T: Coefficient> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        self.map_coeffs(|c| -c)
    }
}

impl<T: Coefficient> Add for Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        &self + &rhs
    }
}

impl<T: Coefficient> Sub for Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        &self - &rhs
    }
}

impl<T: Coefficient> Mul for Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        &self * &rhs
    }
}

impl<T: Coefficient> Neg for Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        -&self
    }
}
