//! Generalized Gell-Mann bases of su(n), their structure constants, and
//! operator-level brackets.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when deciding whether a structure constant is zero.
const STRUCTURE_ZERO: f64 = 1e-13;

type C = Complex64;

/// An `n × n` complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumOperator {
    entries: DMatrix<C>,
}

impl QuantumOperator {
    pub fn new(entries: DMatrix<C>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::InvalidDimension(format!(
                "operator must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.nrows() == 0 {
            return Err(Error::InvalidDimension("operator must be non-empty".into()));
        }
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidArgument("operator has non-finite entries".into()));
        }
        Ok(Self { entries })
    }

    /// Builds from row-major entries.
    pub fn from_rows(n: usize, rows: &[C]) -> Result<Self> {
        if rows.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: rows.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(n, n, rows))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let v: Vec<C> = diag.iter().map(|&d| C::new(d, 0.0)).collect();
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(v)))
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            entries: DMatrix::zeros(n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C {
        self.entries[(row, col)]
    }

    pub fn trace(&self) -> C {
        self.entries.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
        }
    }

    /// Largest entry of `|M − M†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.entries - self.entries.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            entries: &self.entries + &other.entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            entries: &self.entries - &other.entries,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            entries: &self.entries * &other.entries,
        })
    }

    pub fn scale(&self, s: C) -> Self {
        Self {
            entries: &self.entries * s,
        }
    }

    /// Sorted eigenvalues of a Hermitian operator.
    pub fn eigenvalues(&self, tol: f64) -> Result<Vec<f64>> {
        let defect = self.hermiticity_defect();
        if defect > tol {
            return Err(Error::NotHermitian(defect));
        }
        let h = (&self.entries + self.entries.adjoint()) * C::new(0.5, 0.0);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        Ok(ev)
    }
}

/// `(A, B)_q = (AB − BA)/(iħ)`.
pub fn commutator_bracket(a: &QuantumOperator, b: &QuantumOperator, hbar: f64) -> Result<QuantumOperator> {
    let ab = a.mul(b)?;
    let ba = b.mul(a)?;
    Ok(ab.sub(&ba)?.scale(C::new(0.0, -1.0 / hbar)))
}

/// Splits `Q = c·1 + Q̃` with `tr Q̃ = 0`.
pub fn traceless_split(q: &QuantumOperator) -> (C, QuantumOperator) {
    let n = q.n();
    let c = q.trace() / n as f64;
    let mut e = q.entries.clone();
    for i in 0..n {
        e[(i, i)] -= c;
    }
    (c, QuantumOperator { entries: e })
}

/// Structure constants `f_ijk` (antisymmetric) and `d_ijk` (symmetric) of su(n).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureConstants {
    n: usize,
    dim: usize,
    f: Vec<f64>,
    d: Vec<f64>,
    f_by_pair: Vec<Vec<(usize, f64)>>,
    d_by_pair: Vec<Vec<(usize, f64)>>,
}

impl StructureConstants {
    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of generators, `n² − 1`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn f(&self, i: usize, j: usize, k: usize) -> f64 {
        self.f[self.index(i, j, k)]
    }

    pub fn d(&self, i: usize, j: usize, k: usize) -> f64 {
        self.d[self.index(i, j, k)]
    }

    /// Nonzero `(k, f_ijk)` for the pair `(i, j)`.
    pub fn f_pair(&self, i: usize, j: usize) -> &[(usize, f64)] {
        &self.f_by_pair[i * self.dim + j]
    }

    /// Nonzero `(k, d_ijk)` for the pair `(i, j)`.
    pub fn d_pair(&self, i: usize, j: usize) -> &[(usize, f64)] {
        &self.d_by_pair[i * self.dim + j]
    }

    pub fn max_abs_d(&self) -> f64 {
        self.d.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Generalized Gell-Mann basis with `q_i = (ħ/2) λ_i`.
#[derive(Clone, Debug)]
pub struct SuBasis {
    n: usize,
    hbar: f64,
    lambdas: Vec<QuantumOperator>,
    constants: StructureConstants,
}

impl PartialEq for SuBasis {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.hbar == other.hbar
    }
}

impl SuBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Number of generators, `n² − 1`.
    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambda(&self, i: usize) -> &QuantumOperator {
        &self.lambdas[i]
    }

    pub fn lambdas(&self) -> &[QuantumOperator] {
        &self.lambdas
    }

    /// `q_i = (ħ/2) λ_i`.
    pub fn q(&self, i: usize) -> QuantumOperator {
        self.lambdas[i].scale(C::new(self.hbar / 2.0, 0.0))
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    /// `tr(q_i q_j) = (ħ²/2) δ_ij`; this returns the diagonal value.
    pub fn q_norm2(&self) -> f64 {
        self.hbar * self.hbar / 2.0
    }

    /// Rebuilds `scalar·1 + Σ coeffs_i q_i`.
    pub fn reconstruct(&self, scalar: C, coeffs: &[C]) -> Result<QuantumOperator> {
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: coeffs.len(),
            });
        }
        let mut e = DMatrix::<C>::identity(self.n, self.n) * scalar;
        let half = self.hbar / 2.0;
        for (c, l) in coeffs.iter().zip(&self.lambdas) {
            if *c != C::new(0.0, 0.0) {
                e += &l.entries * (*c * half);
            }
        }
        QuantumOperator::new(e)
    }
}

/// Builds the generalized Gell-Mann basis of su(n).
///
/// Ordering: symmetric off-diagonal pairs (row-major, `j < k`), then the
/// antisymmetric pairs in the same order, then the `n − 1` diagonal generators.
pub fn build_basis(n: usize, hbar: f64) -> Result<Arc<SuBasis>> {
    if n < 2 {
        return Err(Error::InvalidDimension(format!(
            "su(n) needs n >= 2, got {n}"
        )));
    }
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
    }
    let one = C::new(1.0, 0.0);
    let i = C::new(0.0, 1.0);
    let mut lambdas = Vec::with_capacity(n * n - 1);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (j + 1..n).map(move |k| (j, k))).collect();
    for &(j, k) in &pairs {
        let mut m = DMatrix::<C>::zeros(n, n);
        m[(j, k)] = one;
        m[(k, j)] = one;
        lambdas.push(QuantumOperator { entries: m });
    }
    for &(j, k) in &pairs {
        let mut m = DMatrix::<C>::zeros(n, n);
        m[(j, k)] = -i;
        m[(k, j)] = i;
        lambdas.push(QuantumOperator { entries: m });
    }
    for l in 1..n {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut m = DMatrix::<C>::zeros(n, n);
        for j in 0..l {
            m[(j, j)] = C::new(norm, 0.0);
        }
        m[(l, l)] = C::new(-(l as f64) * norm, 0.0);
        lambdas.push(QuantumOperator { entries: m });
    }
    let constants = compute_constants(n, &lambdas);
    Ok(Arc::new(SuBasis {
        n,
        hbar,
        lambdas,
        constants,
    }))
}

fn compute_constants(n: usize, lambdas: &[QuantumOperator]) -> StructureConstants {
    let dim = lambdas.len();
    let mut f = vec![0.0; dim * dim * dim];
    let mut d = vec![0.0; dim * dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let ab = &lambdas[i].entries * &lambdas[j].entries;
            let ba = &lambdas[j].entries * &lambdas[i].entries;
            let comm = &ab - &ba;
            let anti = &ab + &ba;
            for k in 0..dim {
                let tc = (&comm * &lambdas[k].entries).trace();
                let ta = (&anti * &lambdas[k].entries).trace();
                let idx = (i * dim + j) * dim + k;
                // f = −(i/4) tr([λi,λj]λk), d = (1/4) tr({λi,λj}λk)
                let fv = (C::new(0.0, -0.25) * tc).re;
                let dv = 0.25 * ta.re;
                f[idx] = if fv.abs() < STRUCTURE_ZERO { 0.0 } else { fv };
                d[idx] = if dv.abs() < STRUCTURE_ZERO { 0.0 } else { dv };
            }
        }
    }
    let by_pair = |t: &[f64]| -> Vec<Vec<(usize, f64)>> {
        (0..dim * dim)
            .map(|p| {
                (0..dim)
                    .filter_map(|k| {
                        let v = t[p * dim + k];
                        (v != 0.0).then_some((k, v))
                    })
                    .collect()
            })
            .collect()
    };
    StructureConstants {
        n,
        dim,
        f_by_pair: by_pair(&f),
        d_by_pair: by_pair(&d),
        f,
        d,
    }
}

/// Structure constants of a basis.
pub fn structure_constants(basis: &SuBasis) -> &StructureConstants {
    basis.constants()
}

/// Expands `Q = scalar·1 + Σ coeffs_i q_i`.
pub fn expand_in_basis(q: &QuantumOperator, basis: &SuBasis) -> Result<(C, Vec<C>)> {
    if q.n() != basis.n() {
        return Err(Error::DimensionMismatch {
            expected: basis.n(),
            found: q.n(),
        });
    }
    let scalar = q.trace() / basis.n() as f64;
    // coeff_i = tr(Q q_i)·2/ħ² = tr(Q λ_i)/ħ
    let coeffs = basis
        .lambdas
        .iter()
        .map(|l| (&q.entries * &l.entries).trace() / basis.hbar())
        .collect();
    Ok((scalar, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn pauli() -> [QuantumOperator; 3] {
        let z = c(0.0, 0.0);
        let o = c(1.0, 0.0);
        let i = c(0.0, 1.0);
        [
            QuantumOperator::from_rows(2, &[z, o, o, z]).unwrap(),
            QuantumOperator::from_rows(2, &[z, -i, i, z]).unwrap(),
            QuantumOperator::from_rows(2, &[o, z, z, -o]).unwrap(),
        ]
    }

    #[test]
    fn su2_is_pauli() {
        let b = build_basis(2, 1.0).unwrap();
        for (l, p) in b.lambdas().iter().zip(pauli().iter()) {
            assert_eq!(l, p);
        }
    }

    #[test]
    fn gell_mann_eight_is_diag() {
        let b = build_basis(3, 1.0).unwrap();
        let s3 = 3f64.sqrt();
        let expected = QuantumOperator::from_real_diagonal(&[1.0 / s3, 1.0 / s3, -2.0 / s3]).unwrap();
        assert!(b.lambda(7).sub(&expected).unwrap().max_abs() < 1e-15);
        // Oracle: direct trace of the square.
        let t = b.lambda(7).mul(b.lambda(7)).unwrap().trace();
        assert!((t - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn orthonormal_and_traceless() {
        for n in 2..=5 {
            let b = build_basis(n, 1.0).unwrap();
            assert_eq!(b.dim(), n * n - 1);
            for (i, li) in b.lambdas().iter().enumerate() {
                assert!(li.trace().norm() < 1e-14);
                assert!(li.is_hermitian(0.0));
                for (j, lj) in b.lambdas().iter().enumerate() {
                    let t = li.mul(lj).unwrap().trace();
                    let want = if i == j { 2.0 } else { 0.0 };
                    assert!((t - c(want, 0.0)).norm() < 1e-13, "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn rejects_small_n() {
        assert!(matches!(build_basis(1, 1.0), Err(Error::InvalidDimension(_))));
        assert!(build_basis(2, 0.0).is_err());
    }

    #[test]
    fn su2_constants() {
        let b = build_basis(2, 1.0).unwrap();
        let sc = b.constants();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let eps = ((i as i32 - j as i32) * (j as i32 - k as i32) * (k as i32 - i as i32)) as f64 / 2.0;
                    assert!((sc.f(i, j, k) - eps).abs() < 1e-14);
                    assert_eq!(sc.d(i, j, k), 0.0);
                }
                let ff: f64 = (0..3)
                    .flat_map(|l| (0..3).map(move |m| (l, m)))
                    .map(|(l, m)| sc.f(i, l, m) * sc.f(j, l, m))
                    .sum();
                assert!((ff - if i == j { 2.0 } else { 0.0 }).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn su3_constants_in_standard_labels() {
        // Standard labels λ1, λ2, λ3, λ8 sit at our indices 0, 3, 6, 7.
        let b = build_basis(3, 1.0).unwrap();
        let sc = b.constants();
        assert!((sc.f(0, 3, 6) - 1.0).abs() < 1e-14);
        assert!((sc.d(0, 0, 7) - 1.0 / 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn product_reconstruction() {
        for n in 2..=4 {
            let b = build_basis(n, 1.0).unwrap();
            let sc = b.constants();
            let dim = b.dim();
            for i in 0..dim {
                for j in 0..dim {
                    let prod = b.lambda(i).mul(b.lambda(j)).unwrap();
                    let mut rebuilt = DMatrix::<C>::identity(n, n)
                        * c(if i == j { 2.0 / n as f64 } else { 0.0 }, 0.0);
                    for k in 0..dim {
                        rebuilt += &b.lambda(k).entries * c(sc.d(i, j, k), sc.f(i, j, k));
                    }
                    let diff = (&prod.entries - rebuilt).iter().map(|z| z.norm()).fold(0.0, f64::max);
                    assert!(diff < 1e-12, "n={n} i={i} j={j} diff={diff}");
                }
            }
        }
    }

    #[test]
    fn commutator_examples() {
        for hbar in [1.0, 0.37, 2.0] {
            let b = build_basis(2, hbar).unwrap();
            let r = commutator_bracket(&b.q(0), &b.q(1), hbar).unwrap();
            assert!(r.sub(&b.q(2)).unwrap().max_abs() < 1e-14);
            let r = commutator_bracket(&b.q(0), &QuantumOperator::identity(2), hbar).unwrap();
            assert_eq!(r.max_abs(), 0.0);
        }
        assert!(commutator_bracket(&QuantumOperator::identity(2), &QuantumOperator::identity(3), 1.0).is_err());
    }

    #[test]
    fn split_examples() {
        let [s1, _, s3] = pauli();
        let (c0, t) = traceless_split(&QuantumOperator::identity(2).add(&s3).unwrap());
        assert_eq!(c0, c(1.0, 0.0));
        assert_eq!(t, s3);
        let (c0, t) = traceless_split(&s1);
        assert_eq!(c0, c(0.0, 0.0));
        assert_eq!(t, s1);
        let (c0, t) = traceless_split(&QuantumOperator::from_real_diagonal(&[3.0, 1.0]).unwrap());
        assert_eq!(c0, c(2.0, 0.0));
        assert_eq!(t, QuantumOperator::from_real_diagonal(&[1.0, -1.0]).unwrap());
    }

    #[test]
    fn expansion_examples() {
        let b = build_basis(2, 1.0).unwrap();
        let (s, v) = expand_in_basis(&b.q(0), &b).unwrap();
        assert_eq!(s, c(0.0, 0.0));
        assert_eq!(v, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let (s, v) = expand_in_basis(&QuantumOperator::identity(2), &b).unwrap();
        assert_eq!(s, c(1.0, 0.0));
        assert!(v.iter().all(|z| z.norm() == 0.0));
        // σ1σ2 = iσ3; with ħ = 2, q3 = σ3.
        let b2 = build_basis(2, 2.0).unwrap();
        let [s1, s2, _] = pauli();
        let (s, v) = expand_in_basis(&s1.mul(&s2).unwrap(), &b2).unwrap();
        assert_eq!(s, c(0.0, 0.0));
        assert_eq!(v, vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]);
    }

    #[test]
    fn eigenvalues_reject_non_hermitian() {
        let m = QuantumOperator::from_rows(2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(m.eigenvalues(1e-12), Err(Error::NotHermitian(_))));
        let [s1, ..] = pauli();
        assert_eq!(s1.eigenvalues(1e-12).unwrap(), vec![-1.0, 1.0]);
    }
}
