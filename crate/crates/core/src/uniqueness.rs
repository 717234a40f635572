//! Numerical checks that the canonical bracket is the only Lie bracket in the
//! three-parameter family, plus the invariant-tensor and plane-wave machinery
//! behind that statement.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classical::{pairing as wave_pairing, PhasePoint, PlaneWave};
use crate::error::{Error, Result};
use crate::hybrid::{jacobi_residual, jacobi_scale, BracketKind, HybridObservable};
use crate::par::map_indexed;
use crate::sampling::{halton, random_observable, random_polynomial};
use crate::su::{build_basis, SuBasis};

/// Family labels used in [`AnsatzResidual::per_case`].
pub const CASE_HYBRID: &str = "hybrid";
pub const CASE_NQ2: &str = "n_q=2";
pub const CASE_NQ3: &str = "n_q=3";

/// Scaled Jacobi residual of the ansatz bracket at one `(α, β, γ)` node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzResidual {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Max over every instance of `residual / max(1, ‖A‖‖B‖‖C‖)`.
    pub residual: f64,
    pub per_case: BTreeMap<String, f64>,
}

/// Seeded triples shared by every grid node.
///
/// `n_q=2` triples are `(C qᵢ, C′ qⱼ, C″)`, `n_q=3` triples are `(C qᵢ, C′ qⱼ, C″ qₖ)`
/// with random indices; `hybrid` triples have every component populated.
#[derive(Clone, Debug)]
pub struct AnsatzInstances {
    pub families: Vec<(&'static str, Vec<[HybridObservable; 3]>)>,
}

/// One classical dimension, polynomials of degree at most 3 with up to 3 terms.
pub fn ansatz_instances(basis: &Arc<SuBasis>, count: usize, seed: u64) -> AnsatzInstances {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_c = 1;
    let poly = |rng: &mut ChaCha8Rng| random_polynomial(rng, n_c, 3, 3);
    let mut hybrid = Vec::with_capacity(count);
    for _ in 0..count {
        hybrid.push([0, 1, 2].map(|_| random_observable(&mut rng, basis, n_c, 2, 2)));
    }
    let gen = |rng: &mut ChaCha8Rng| {
        let i = rng.gen_range(0..basis.dim());
        let c = poly(rng);
        HybridObservable::generator(basis.clone(), i, c).expect("index in range")
    };
    let mut nq2 = Vec::with_capacity(count);
    let mut nq3 = Vec::with_capacity(count);
    for _ in 0..count {
        let a = gen(&mut rng);
        let b = gen(&mut rng);
        let c = HybridObservable::classical(basis.clone(), random_polynomial(&mut rng, n_c, 3, 3));
        nq2.push([a, b, c]);
        nq3.push([gen(&mut rng), gen(&mut rng), gen(&mut rng)]);
    }
    AnsatzInstances {
        families: vec![(CASE_HYBRID, hybrid), (CASE_NQ2, nq2), (CASE_NQ3, nq3)],
    }
}

/// `linspace(-2, 2, 9)³`; contains the canonical point `(0, 1, 0)`.
pub fn default_grid() -> Vec<[f64; 3]> {
    grid(-2.0, 2.0, 9)
}

/// `points³` nodes evenly spaced over `[lo, hi]³`, with `(0, 1, 0)` appended when absent.
pub fn grid(lo: f64, hi: f64, points: usize) -> Vec<[f64; 3]> {
    let axis: Vec<f64> = if points <= 1 {
        vec![lo]
    } else {
        (0..points)
            .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
            .collect()
    };
    let mut out = Vec::with_capacity(points.pow(3) + 1);
    for &a in &axis {
        for &b in &axis {
            for &g in &axis {
                out.push([a, b, g]);
            }
        }
    }
    if !out.contains(&[0.0, 1.0, 0.0]) {
        out.push([0.0, 1.0, 0.0]);
    }
    out
}

/// Residual of one node over prebuilt instances.
pub fn ansatz_node_residual(instances: &AnsatzInstances, alpha: f64, beta: f64, gamma: f64) -> Result<AnsatzResidual> {
    let kind = BracketKind::Ansatz { alpha, beta, gamma };
    let mut per_case = BTreeMap::new();
    let mut residual = 0.0f64;
    for (name, triples) in &instances.families {
        let mut worst = 0.0f64;
        for [a, b, c] in triples {
            worst = worst.max(jacobi_residual(kind, a, b, c)? / jacobi_scale(a, b, c));
        }
        residual = residual.max(worst);
        per_case.insert(name.to_string(), worst);
    }
    Ok(AnsatzResidual {
        alpha,
        beta,
        gamma,
        residual,
        per_case,
    })
}

/// Jacobi residual landscape of the ansatz bracket for `su(n)`, `ħ = 1`.
pub fn ansatz_jacobi_scan(n: usize, grid: &[[f64; 3]], instances: usize, seed: u64) -> Result<Vec<AnsatzResidual>> {
    if !(2..=4).contains(&n) {
        return Err(Error::InvalidDimension(format!("ansatz scan supports n in 2..=4, got {n}")));
    }
    let basis = build_basis(n, 1.0)?;
    let inst = ansatz_instances(&basis, instances, seed);
    map_indexed(grid, |_, &[a, b, g]| ansatz_node_residual(&inst, a, b, g))
        .into_iter()
        .collect()
}

/// Nodes that look non-canonical but coincide with a node of negligible `|α| + |γ|`
/// because `d ≡ 0` makes `γ` inert (which happens for `n = 2`).
pub fn degenerate_nodes(basis: &SuBasis, nodes: &[AnsatzResidual], threshold: f64) -> Vec<usize> {
    let d_inert = basis.constants().max_abs_d() < 1e-14;
    nodes
        .iter()
        .enumerate()
        .filter(|(_, r)| {
            let nominal = r.alpha.abs() + r.gamma.abs();
            let effective = r.alpha.abs() + if d_inert { 0.0 } else { r.gamma.abs() };
            nominal >= threshold && effective < threshold
        })
        .map(|(i, _)| i)
        .collect()
}

/// Rank-4 invariant tensor checks for `su(n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorReport {
    pub n: usize,
    pub max_abs_d: f64,
    /// Numerical rank of the Gram matrix of the nine candidate tensors.
    pub gram_rank: usize,
    pub gram_eigenvalues: Vec<f64>,
    /// `max |δδ + δδ + δδ − 3(dd + dd + dd)|`, reported for `n = 3`.
    pub identity_residual: Option<f64>,
}

/// The nine rank-4 tensors `T(i, j, k, m)`, flattened in row-major order:
/// three `δδ` pairings, three `dd` contractions and three mixed `df` contractions.
pub fn rank4_invariants(basis: &SuBasis) -> Vec<Vec<f64>> {
    let sc = basis.constants();
    let dim = basis.dim();
    let dl = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let dd = |a: usize, b: usize, c: usize, e: usize| (0..dim).map(|l| sc.d(a, b, l) * sc.d(l, c, e)).sum::<f64>();
    let df = |a: usize, b: usize, c: usize, e: usize| (0..dim).map(|l| sc.d(a, b, l) * sc.f(c, l, e)).sum::<f64>();
    let mut out = vec![Vec::with_capacity(dim.pow(4)); 9];
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                for m in 0..dim {
                    let v = [
                        dl(j, k) * dl(i, m),
                        dl(k, i) * dl(j, m),
                        dl(i, j) * dl(k, m),
                        // d_jkl d_ilm
                        dd(j, k, i, m),
                        // d_kil d_jlm
                        dd(k, i, j, m),
                        // d_ijl d_klm
                        dd(i, j, k, m),
                        // d_jkl f_ilm
                        df(j, k, i, m),
                        // d_kil f_jlm
                        df(k, i, j, m),
                        // f_ijl d_klm = d_klm f_ijl
                        (0..dim).map(|l| sc.f(i, j, l) * sc.d(k, l, m)).sum::<f64>(),
                    ];
                    for (t, x) in out.iter_mut().zip(v) {
                        t.push(x);
                    }
                }
            }
        }
    }
    out
}

pub fn tensor_basis_check(n: usize) -> Result<TensorReport> {
    let basis = build_basis(n, 1.0)?;
    let ts = rank4_invariants(&basis);
    let gram = DMatrix::from_fn(9, 9, |a, b| ts[a].iter().zip(&ts[b]).map(|(x, y)| x * y).sum::<f64>());
    let mut ev: Vec<f64> = gram.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    let top = ev[0].abs().max(f64::MIN_POSITIVE);
    let gram_rank = ev.iter().filter(|e| e.abs() > 1e-10 * top).count();
    let identity_residual = (n == 3).then(|| {
        (0..ts[0].len())
            .map(|x| (ts[0][x] + ts[1][x] + ts[2][x] - 3.0 * (ts[3][x] + ts[4][x] + ts[5][x])).abs())
            .fold(0.0, f64::max)
    });
    Ok(TensorReport {
        n,
        max_abs_d: basis.constants().max_abs_d(),
        gram_rank,
        gram_eigenvalues: ev,
        identity_residual,
    })
}

/// `max |f(v₁)(v₃ − v₂) − (v₃ − v₁)f(v₂) − (v₁ − v₂)f(v₃)|` over the samples;
/// zero exactly when `f` is affine on them.
pub fn functional_equation_residual(f: impl Fn(f64) -> f64, samples: &[[f64; 3]]) -> f64 {
    samples
        .iter()
        .map(|&[v1, v2, v3]| (f(v1) * (v3 - v2) - (v3 - v1) * f(v2) - (v1 - v2) * f(v3)).abs())
        .fold(0.0, f64::max)
}

/// Halton samples of `(v₁, v₂, v₃)` in `[lo, hi]³`.
pub fn functional_samples(count: usize, lo: f64, hi: f64) -> Vec<[f64; 3]> {
    (1..=count as u64)
        .map(|i| {
            let u = halton(i, 3);
            [0, 1, 2].map(|d| lo + (hi - lo) * u[d])
        })
        .collect()
}

/// Phase points used to test proportionality to `e_{r+s}`.
pub fn probe_points(n_c: usize, count: usize) -> Vec<PhasePoint> {
    (1..=count as u64)
        .map(|i| {
            let u = halton(i, 2 * n_c);
            let c: Vec<f64> = u.iter().map(|v| 4.0 * v - 2.0).collect();
            PhasePoint::from_coords(&c).expect("even length")
        })
        .collect()
}

/// Extracts `F_rs` from a candidate bracket with `(e_r, e_s) = F_rs e_{r+s}`.
///
/// The candidate is evaluated at each probe point; a ratio that varies between
/// points means the result is not a multiple of `e_{r+s}`.
pub fn planewave_f_extraction(
    candidate: impl Fn(&PlaneWave, &PlaneWave, &PhasePoint) -> Result<Complex64>,
    r: &PlaneWave,
    s: &PlaneWave,
    probes: &[PhasePoint],
) -> Result<Complex64> {
    if probes.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let sum = r.product(s)?;
    let ratios = probes
        .iter()
        .map(|p| Ok(candidate(r, s, p)? / sum.evaluate(p)?))
        .collect::<Result<Vec<_>>>()?;
    let f = ratios[0];
    let spread = ratios.iter().map(|z| (z - f).norm()).fold(0.0, f64::max);
    if spread > 1e-10 * f.norm().max(1.0) {
        return Err(Error::PostulateViolation(format!(
            "bracket of plane waves is not proportional to e_(r+s): ratio varies by {spread:e}"
        )));
    }
    Ok(f)
}

/// `|F_rs v_{r+s,t} − v_rt F_{r+t,s} − v_st F_{r,s+t}|` for an extracted `F`.
pub fn derivation_residual(
    f: impl Fn(&PlaneWave, &PlaneWave) -> Result<Complex64>,
    r: &PlaneWave,
    s: &PlaneWave,
    t: &PlaneWave,
) -> Result<f64> {
    let rs = r.product(s)?;
    let rt = r.product(t)?;
    let st = s.product(t)?;
    let lhs = f(r, s)? * wave_pairing(&rs, t)?;
    let rhs = f(&rt, s)? * wave_pairing(r, t)? + f(r, &st)? * wave_pairing(s, t)?;
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{parse_polynomial, poisson_at};

    #[test]
    fn grid_contains_canonical_point() {
        let g = default_grid();
        assert_eq!(g.len(), 729);
        assert!(g.contains(&[0.0, 1.0, 0.0]));
        assert_eq!(grid(-1.0, 1.0, 2).len(), 9);
    }

    #[test]
    fn canonical_node_is_exact() {
        for n in [2, 3] {
            let b = build_basis(n, 1.0).unwrap();
            let inst = ansatz_instances(&b, 3, 7);
            let r = ansatz_node_residual(&inst, 0.0, 1.0, 0.0).unwrap();
            assert!(r.residual < 1e-12, "n={n}: {}", r.residual);
        }
    }

    #[test]
    fn alpha_witness_family() {
        // (x² q₂, k² q₁, xk q₁) with α = 1 leaves α{x², {k², xk}} q₂ = −8xk q₂
        let b = build_basis(2, 1.0).unwrap();
        let p = |s| parse_polynomial(s, 1).unwrap();
        let g = |i, c| HybridObservable::generator(b.clone(), i, c).unwrap();
        let a = g(1, p("x1^2"));
        let bb = g(0, p("k1^2"));
        let c = g(0, p("x1 k1"));
        let kind = BracketKind::Ansatz { alpha: 1.0, beta: 1.0, gamma: 0.0 };
        assert!((jacobi_residual(kind, &a, &bb, &c).unwrap() - 8.0).abs() < 1e-12);
        assert!(jacobi_residual(BracketKind::Canonical, &a, &bb, &c).unwrap() < 1e-12);
    }

    #[test]
    fn gamma_is_active_for_su3() {
        let b = build_basis(3, 1.0).unwrap();
        let inst = ansatz_instances(&b, 4, 3);
        let r = ansatz_node_residual(&inst, 0.0, 1.0, 0.5).unwrap();
        assert!(r.residual > 1e-3);
    }

    #[test]
    fn gamma_is_inert_for_su2() {
        let b = build_basis(2, 1.0).unwrap();
        let inst = ansatz_instances(&b, 3, 3);
        let r = ansatz_node_residual(&inst, 0.0, 1.0, 1.5).unwrap();
        assert!(r.residual < 1e-12);
        assert_eq!(degenerate_nodes(&b, &[r], 0.1), vec![0]);
    }

    #[test]
    fn functional_equation() {
        let s = functional_samples(200, -2.0, 2.0);
        assert!(functional_equation_residual(|v| 2.0 * v + 3.0, &s) < 1e-12);
        assert!(functional_equation_residual(|v| v, &s) < 1e-14);
        assert!(functional_equation_residual(|v| v * v, &s) > 1.0);
    }

    #[test]
    fn planewave_extraction() {
        let r = PlaneWave::new(vec![0.3, -0.5], vec![0.7, 0.2]).unwrap();
        let s = PlaneWave::new(vec![-0.1, 0.4], vec![0.6, -0.9]).unwrap();
        let t = PlaneWave::new(vec![0.8, 0.1], vec![-0.3, 0.5]).unwrap();
        let probes = probe_points(2, 6);
        let v = wave_pairing(&r, &s).unwrap();
        let f = planewave_f_extraction(poisson_at, &r, &s, &probes).unwrap();
        assert!((f - Complex64::from(v)).norm() < 1e-12);
        let product = |a: &PlaneWave, b: &PlaneWave, p: &PhasePoint| Ok(a.evaluate(p)? * b.evaluate(p)?);
        let f = planewave_f_extraction(product, &r, &s, &probes).unwrap();
        assert!((f - Complex64::from(1.0)).norm() < 1e-12);
        let both = |a: &PlaneWave, b: &PlaneWave, p: &PhasePoint| Ok(poisson_at(a, b, p)? + product(a, b, p)?);
        let f = planewave_f_extraction(both, &r, &s, &probes).unwrap();
        assert!((f - Complex64::from(v + 1.0)).norm() < 1e-12);
        let extracted = |a: &PlaneWave, b: &PlaneWave| planewave_f_extraction(both, a, b, &probes);
        assert!(derivation_residual(extracted, &r, &s, &t).unwrap() < 1e-12);
        // F = v² fails the derivation condition
        let square = |a: &PlaneWave, b: &PlaneWave| Ok(Complex64::from(wave_pairing(a, b)?.powi(2)));
        assert!(derivation_residual(square, &r, &s, &t).unwrap() > 1e-3);
        // a bracket landing on e_r alone is rejected
        let wrong = |a: &PlaneWave, _: &PlaneWave, p: &PhasePoint| a.evaluate(p);
        assert!(matches!(
            planewave_f_extraction(wrong, &r, &s, &probes),
            Err(Error::PostulateViolation(_))
        ));
    }

    #[test]
    fn small_tensor_checks() {
        let t2 = tensor_basis_check(2).unwrap();
        assert_eq!(t2.max_abs_d, 0.0);
        assert_eq!(t2.gram_rank, 3);
        let t3 = tensor_basis_check(3).unwrap();
        assert!(t3.identity_residual.unwrap() < 1e-12);
        assert_eq!(t3.gram_rank, 8);
    }
}
