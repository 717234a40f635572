//! Hybrid observables and brackets.

mod bracket;
mod matrix_poly;
mod observable;
mod record;
mod residual;
mod rival;
mod state;

pub use bracket::{ansatz_bracket, apply_bracket, heisenberg_bracket, BracketKind};
pub use matrix_poly::MatrixPolynomial;
pub use observable::HybridObservable;
pub use record::ObservableRecord;
pub use residual::{
    adjoint_identity_check, adjoint_identity_residual, jacobi_residual, jacobi_scale,
    leibniz_expansion, search_jacobi_witness, AdjointCheck, JacobiWitness,
};
pub use rival::{anderson_bracket, standard_bracket};
pub use state::{pairing, pairing_with_bound, schrodinger_bracket, HybridField};
