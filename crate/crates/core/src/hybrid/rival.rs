//! Two brackets from the literature that fail the Lie axioms, kept as negative controls.

use num_complex::Complex64;

use super::matrix_poly::MatrixPolynomial;
use super::observable::HybridObservable;
use crate::error::Result;

type CObs = HybridObservable<Complex64>;

/// `[A,B]/(iħ) + ½({A,B} − {B,A})` with ordered matrix Poisson brackets.
///
/// Antisymmetric, but violates the Jacobi identity on hybrid triples.
pub fn standard_bracket(a: &CObs, b: &CObs) -> Result<CObs> {
    a.check_compatible(b)?;
    let basis = a.basis();
    let ma = MatrixPolynomial::from_observable(a);
    let mb = MatrixPolynomial::from_observable(b);
    let comm = ma.commutator_bracket(&mb, basis.hbar())?;
    let ab = ma.poisson(&mb)?;
    let ba = mb.poisson(&ma)?;
    let half = Complex64::new(0.5, 0.0);
    let out = comm.add_scaled(&ab, half)?.add_scaled(&ba, -half)?;
    out.to_observable(basis)
}

/// `[A,B]/(iħ) + {A,B}`; linear but not antisymmetric.
pub fn anderson_bracket(a: &CObs, b: &CObs) -> Result<CObs> {
    a.check_compatible(b)?;
    let basis = a.basis();
    let ma = MatrixPolynomial::from_observable(a);
    let mb = MatrixPolynomial::from_observable(b);
    let out = ma
        .commutator_bracket(&mb, basis.hbar())?
        .add_scaled(&ma.poisson(&mb)?, Complex64::new(1.0, 0.0))?;
    out.to_observable(basis)
}
