//! Seeded random instances and deterministic point sets.

use std::sync::Arc;

use rand::Rng;
use smallvec::SmallVec;

use crate::classical::{Envelope, Exponents, PhasePoint, PhasePolynomial, Polynomial};
use crate::error::{Error, Result};
use crate::hybrid::{HybridField, HybridObservable};
use crate::su::SuBasis;

/// All exponent vectors over `nvars` variables with total degree `<= degree`.
pub fn monomials(nvars: usize, degree: usize) -> Vec<Exponents> {
    fn rec(nvars: usize, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Exponents>) {
        if cur.len() == nvars {
            out.push(SmallVec::from_slice(cur));
            return;
        }
        for p in 0..=left {
            cur.push(p as u16);
            rec(nvars, left - p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// Sparse random polynomial: `1..=max_terms` monomials of total degree `<= max_degree`,
/// coefficients uniform in `[-1, 1]`.
pub fn random_polynomial<R: Rng>(rng: &mut R, n_c: usize, max_degree: usize, max_terms: usize) -> PhasePolynomial {
    let nv = 2 * n_c;
    let count = rng.gen_range(1..=max_terms.max(1));
    let mut p = Polynomial::zero(nv);
    for _ in 0..count {
        let deg = rng.gen_range(0..=max_degree);
        let mut e: Exponents = SmallVec::from_elem(0, nv);
        for _ in 0..deg {
            e[rng.gen_range(0..nv)] += 1;
        }
        let c: f64 = rng.gen_range(-1.0..=1.0);
        p = &p + &Polynomial::monomial(e, c);
    }
    p
}

/// Every monomial of total degree `<= degree` with a coefficient uniform in `[-1, 1]`.
pub fn dense_random_polynomial<R: Rng>(rng: &mut R, n_c: usize, degree: usize) -> PhasePolynomial {
    let nv = 2 * n_c;
    let terms = monomials(nv, degree)
        .into_iter()
        .map(|e| (e.to_vec(), rng.gen_range(-1.0..=1.0)));
    Polynomial::from_terms(nv, terms).expect("exponent lengths match")
}

/// Observable with sparse random polynomials in every component.
pub fn random_observable<R: Rng>(
    rng: &mut R,
    basis: &Arc<SuBasis>,
    n_c: usize,
    max_degree: usize,
    max_terms: usize,
) -> HybridObservable {
    let a0 = random_polynomial(rng, n_c, max_degree, max_terms);
    let avec = (0..basis.dim())
        .map(|_| random_polynomial(rng, n_c, max_degree, max_terms))
        .collect();
    HybridObservable::new(basis.clone(), a0, avec).expect("consistent dimensions")
}

/// Observable with dense random polynomials in every component.
pub fn dense_random_observable<R: Rng>(
    rng: &mut R,
    basis: &Arc<SuBasis>,
    n_c: usize,
    degree: usize,
) -> HybridObservable {
    let a0 = dense_random_polynomial(rng, n_c, degree);
    let avec = (0..basis.dim())
        .map(|_| dense_random_polynomial(rng, n_c, degree))
        .collect();
    HybridObservable::new(basis.clone(), a0, avec).expect("consistent dimensions")
}

/// Random Gaussian envelope: center in `[-1, 1]^(2 n_c)`, width in `[0.5, 1.5]`.
pub fn random_envelope<R: Rng>(rng: &mut R, n_c: usize) -> Envelope {
    let x = (0..n_c).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let k = (0..n_c).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let w = rng.gen_range(0.5..=1.5);
    Envelope::new(PhasePoint { x, k }, w).expect("positive width")
}

/// Random hybrid field with sparse polynomial components on a random envelope.
pub fn random_field<R: Rng>(
    rng: &mut R,
    basis: &Arc<SuBasis>,
    n_c: usize,
    max_degree: usize,
    max_terms: usize,
) -> HybridField {
    let env = random_envelope(rng, n_c);
    let r0 = random_polynomial(rng, n_c, max_degree, max_terms);
    let rvec = (0..basis.dim())
        .map(|_| random_polynomial(rng, n_c, max_degree, max_terms))
        .collect();
    HybridField::new(basis.clone(), env, r0, rvec).expect("consistent dimensions")
}

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    out
}

/// Halton point `index` (starting at 1) in the unit cube of dimension `dim <= 12`.
pub fn halton(index: u64, dim: usize) -> Vec<f64> {
    (0..dim).map(|d| radical_inverse(index, PRIMES[d])).collect()
}

/// Region of phase space sampled by [`phase_points`].
#[derive(Clone, Debug, PartialEq)]
pub enum SampleRegion {
    /// Axis-aligned box `[lo, hi]` in every coordinate.
    Box { lo: f64, hi: f64 },
    /// `|x| <= radius` and `|k| <= radius`.
    Balls { radius: f64 },
    /// Points whose orbital angular momentum has `|L|` in `[lo, hi]` (n_c = 3),
    /// drawn from the box `[-box_half, box_half]`.
    AngularShell { lo: f64, hi: f64, box_half: f64 },
}

/// Deterministic low-discrepancy phase points; rejection keeps the Halton order.
pub fn phase_points(count: usize, n_c: usize, region: &SampleRegion) -> Result<Vec<PhasePoint>> {
    let dim = 2 * n_c;
    if dim > PRIMES.len() {
        return Err(Error::InvalidDimension(format!(
            "Halton sampling supports n_c <= {}",
            PRIMES.len() / 2
        )));
    }
    if let SampleRegion::AngularShell { .. } = region {
        if n_c != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: n_c });
        }
    }
    let mut out = Vec::with_capacity(count);
    let mut index = 1u64;
    let limit = 1_000_000u64 + 1000 * count as u64;
    while out.len() < count {
        if index > limit {
            return Err(Error::InvalidArgument("sampling region is too small to fill".into()));
        }
        let u = halton(index, dim);
        index += 1;
        let (lo, hi) = match region {
            SampleRegion::Box { lo, hi } => (*lo, *hi),
            SampleRegion::Balls { radius } => (-radius, *radius),
            SampleRegion::AngularShell { box_half, .. } => (-box_half, *box_half),
        };
        let coords: Vec<f64> = u.iter().map(|v| lo + (hi - lo) * v).collect();
        let p = PhasePoint::from_coords(&coords)?;
        let keep = match region {
            SampleRegion::Box { .. } => true,
            SampleRegion::Balls { radius } => norm(&p.x) <= *radius && norm(&p.k) <= *radius,
            SampleRegion::AngularShell { lo, hi, .. } => {
                let l = norm(&p.angular_momentum()?);
                l >= *lo && l <= *hi
            }
        };
        if keep {
            out.push(p);
        }
    }
    Ok(out)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn monomial_count() {
        // C(nvars + d, d)
        assert_eq!(monomials(2, 2).len(), 6);
        assert_eq!(monomials(6, 3).len(), 84);
    }

    #[test]
    fn halton_prefix() {
        assert_eq!(halton(1, 2), vec![0.5, 1.0 / 3.0]);
        assert_eq!(halton(2, 2), vec![0.25, 2.0 / 3.0]);
        assert_eq!(halton(3, 1), vec![0.75]);
    }

    #[test]
    fn regions_respected() {
        let pts = phase_points(50, 3, &SampleRegion::Balls { radius: 2.0 }).unwrap();
        assert!(pts.iter().all(|p| norm(&p.x) <= 2.0 && norm(&p.k) <= 2.0));
        let pts = phase_points(30, 3, &SampleRegion::AngularShell { lo: 0.5, hi: 3.0, box_half: 1.5 }).unwrap();
        for p in &pts {
            let l = norm(&p.angular_momentum().unwrap());
            assert!((0.5..=3.0).contains(&l));
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let mut a = ChaCha8Rng::seed_from_u64(11);
        let mut b = ChaCha8Rng::seed_from_u64(11);
        assert_eq!(random_polynomial(&mut a, 2, 3, 4), random_polynomial(&mut b, 2, 3, 4));
    }
}
