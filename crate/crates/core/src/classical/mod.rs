//! Classical phase-space algebra: polynomials, Gaussian-weighted fields and plane waves.

mod gaussian;
mod literal;
mod planewave;
mod polynomial;

pub use gaussian::{poisson_bracket_state, Envelope, GaussianField};
pub use literal::parse_polynomial;
pub use literal::Literal;
pub use planewave::{pairing, poisson_at, PlaneWave};
pub use polynomial::{
    angular_momentum, poisson_bracket, Coefficient, Exponents, PhasePoint, PhasePolynomial,
    Polynomial, PRUNE_RELATIVE,
};
