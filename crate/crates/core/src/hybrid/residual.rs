use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bracket::{ansatz_bracket, apply_bracket, heisenberg_bracket, BracketKind};
use super::matrix_poly::MatrixPolynomial;
use super::observable::HybridObservable;
use super::record::ObservableRecord;
use super::state::{pairing_with_bound, schrodinger_bracket, HybridField};
use crate::error::Result;
use crate::sampling::dense_random_observable;
use crate::su::SuBasis;

/// Max-coefficient norm of the cyclic sum `(A,(B,C)) + (B,(C,A)) + (C,(A,B))`.
pub fn jacobi_residual(
    kind: BracketKind,
    a: &HybridObservable,
    b: &HybridObservable,
    c: &HybridObservable,
) -> Result<f64> {
    match kind {
        BracketKind::Canonical => real_cyclic(a, b, c, |x, y| heisenberg_bracket(x, y)),
        BracketKind::Ansatz { alpha, beta, gamma } => {
            real_cyclic(a, b, c, |x, y| ansatz_bracket(x, y, alpha, beta, gamma))
        }
        _ => {
            let (a, b, c) = (a.to_complex(), b.to_complex(), c.to_complex());
            let br = |x: &HybridObservable<Complex64>, y: &HybridObservable<Complex64>| apply_bracket(kind, x, y);
            let t1 = br(&a, &br(&b, &c)?)?;
            let t2 = br(&b, &br(&c, &a)?)?;
            let t3 = br(&c, &br(&a, &b)?)?;
            Ok(t1.add(&t2)?.add(&t3)?.norm())
        }
    }
}

fn real_cyclic(
    a: &HybridObservable,
    b: &HybridObservable,
    c: &HybridObservable,
    br: impl Fn(&HybridObservable, &HybridObservable) -> Result<HybridObservable>,
) -> Result<f64> {
    let t1 = br(a, &br(b, c)?)?;
    let t2 = br(b, &br(c, a)?)?;
    let t3 = br(c, &br(a, b)?)?;
    Ok(t1.add(&t2)?.add(&t3)?.norm())
}

/// Tolerance scale for identities trilinear in the inputs.
pub fn jacobi_scale(a: &HybridObservable, b: &HybridObservable, c: &HybridObservable) -> f64 {
    (a.norm() * b.norm() * c.norm()).max(1.0)
}

/// Both sides of `⟪A (H,ρ)′⟫ = ⟪(A,H) ρ⟫`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdjointCheck {
    pub schrodinger_side: f64,
    pub heisenberg_side: f64,
    pub residual: f64,
    /// Bound on the absolute integrands, at least 1.
    pub scale: f64,
}

pub fn adjoint_identity_check(
    a: &HybridObservable,
    h: &HybridObservable,
    rho: &HybridField,
) -> Result<AdjointCheck> {
    let (lhs, lb) = pairing_with_bound(a, &schrodinger_bracket(h, rho)?)?;
    let (rhs, rb) = pairing_with_bound(&heisenberg_bracket(a, h)?, rho)?;
    Ok(AdjointCheck {
        schrodinger_side: lhs,
        heisenberg_side: rhs,
        residual: (lhs - rhs).abs(),
        scale: lb.max(rb).max(1.0),
    })
}

/// `|⟪A (H,ρ)′⟫ − ⟪(A,H) ρ⟫|`.
pub fn adjoint_identity_residual(a: &HybridObservable, h: &HybridObservable, rho: &HybridField) -> Result<f64> {
    Ok(adjoint_identity_check(a, h, rho)?.residual)
}

/// Expands `(A, Σⱼ BⱼCⱼ)` as if the bracket were a derivation:
/// `Σⱼ (A,Bⱼ)Cⱼ + Bⱼ(A,Cⱼ)`, with operator products taken as matrices.
pub fn leibniz_expansion(
    a: &HybridObservable,
    factors: &[(HybridObservable, HybridObservable)],
) -> Result<MatrixPolynomial> {
    let n = a.basis().n();
    let mut acc = MatrixPolynomial::zero(n, 2 * a.n_c());
    let one = Complex64::new(1.0, 0.0);
    for (b, c) in factors {
        let ab = MatrixPolynomial::from_observable(&heisenberg_bracket(a, b)?);
        let ac = MatrixPolynomial::from_observable(&heisenberg_bracket(a, c)?);
        let mb = MatrixPolynomial::from_observable(b);
        let mc = MatrixPolynomial::from_observable(c);
        acc = acc.add_scaled(&ab.matmul(&mc)?, one)?;
        acc = acc.add_scaled(&mb.matmul(&ac)?, one)?;
    }
    Ok(acc)
}

/// Triple with a large Jacobi residual under some bracket.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobiWitness {
    pub bracket: BracketKind,
    pub seed: u64,
    pub trials: usize,
    pub residual: f64,
    pub a: ObservableRecord,
    pub b: ObservableRecord,
    pub c: ObservableRecord,
}

/// Random search for the triple maximizing the Jacobi residual of `kind`.
///
/// Every coefficient polynomial is a dense random polynomial of the given degree
/// with coefficients uniform in `[-1, 1]`.
pub fn search_jacobi_witness(
    kind: BracketKind,
    basis: &std::sync::Arc<SuBasis>,
    n_c: usize,
    degree: usize,
    trials: usize,
    seed: u64,
) -> Result<JacobiWitness> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, [HybridObservable; 3])> = None;
    for _ in 0..trials {
        let t = [
            dense_random_observable(&mut rng, basis, n_c, degree),
            dense_random_observable(&mut rng, basis, n_c, degree),
            dense_random_observable(&mut rng, basis, n_c, degree),
        ];
        let r = jacobi_residual(kind, &t[0], &t[1], &t[2])?;
        if best.as_ref().map_or(true, |(br, _)| r > *br) {
            best = Some((r, t));
        }
    }
    let (residual, [a, b, c]) = best.ok_or_else(|| {
        crate::error::Error::InvalidArgument("witness search needs at least one trial".into())
    })?;
    Ok(JacobiWitness {
        bracket: kind,
        seed,
        trials,
        residual,
        a: ObservableRecord::from_observable(&a),
        b: ObservableRecord::from_observable(&b),
        c: ObservableRecord::from_observable(&c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{angular_momentum, PhasePolynomial};
    use crate::su::build_basis;

    #[test]
    fn identity_has_zero_residual_for_every_kind() {
        let b = build_basis(2, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = dense_random_observable(&mut rng, &b, 1, 2);
        let y = dense_random_observable(&mut rng, &b, 1, 2);
        let one = HybridObservable::identity(b.clone(), 1);
        for kind in [
            BracketKind::Canonical,
            BracketKind::Standard,
            BracketKind::Anderson,
            BracketKind::Ansatz { alpha: 1.0, beta: 0.5, gamma: 2.0 },
        ] {
            assert!(jacobi_residual(kind, &x, &y, &one).unwrap() < 1e-12, "{kind:?}");
        }
    }

    #[test]
    fn derivation_chain_contradiction() {
        // (L·S, L·S) = 0, but a Leibniz expansion over the factors L_j S_j gives iħ L·S.
        let hbar = 0.8;
        let b = build_basis(2, hbar).unwrap();
        let l = angular_momentum();
        let mut ls = HybridObservable::zero(b.clone(), 3);
        let mut factors = Vec::new();
        for j in 0..3 {
            ls = ls.add(&HybridObservable::generator(b.clone(), j, l[j].clone()).unwrap()).unwrap();
            factors.push((
                HybridObservable::classical(b.clone(), l[j].clone()),
                HybridObservable::generator(b.clone(), j, PhasePolynomial::one(6)).unwrap(),
            ));
        }
        assert!(heisenberg_bracket(&ls, &ls).unwrap().is_zero());
        let chain = leibniz_expansion(&ls, &factors).unwrap();
        let want = MatrixPolynomial::from_observable(&ls).scale(Complex64::new(0.0, hbar));
        let diff = chain.add_scaled(&want, Complex64::new(-1.0, 0.0)).unwrap();
        assert!(diff.max_abs_coeff() < 1e-14);
        assert!(want.max_abs_coeff() > 0.1);
    }
}
