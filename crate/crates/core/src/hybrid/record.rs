use serde::{Deserialize, Serialize};

use super::observable::HybridObservable;
use crate::classical::{parse_polynomial, Literal};
use crate::error::Result;
use crate::su::build_basis;

/// Text form of a real hybrid observable: polynomial literals per component.
///
/// Coefficients are printed with shortest round-trip formatting, so
/// `to_observable(from_observable(a)) == a` exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub n: usize,
    pub hbar: f64,
    pub n_c: usize,
    pub classical: String,
    pub components: Vec<String>,
}

impl ObservableRecord {
    pub fn from_observable(a: &HybridObservable) -> Self {
        Self {
            n: a.basis().n(),
            hbar: a.basis().hbar(),
            n_c: a.n_c(),
            classical: Literal(a.classical_part()).to_string(),
            components: a.components().iter().map(|p| Literal(p).to_string()).collect(),
        }
    }

    pub fn to_observable(&self) -> Result<HybridObservable> {
        let basis = build_basis(self.n, self.hbar)?;
        let a0 = parse_polynomial(&self.classical, self.n_c)?;
        let avec = self
            .components
            .iter()
            .map(|s| parse_polynomial(s, self.n_c))
            .collect::<Result<Vec<_>>>()?;
        HybridObservable::new(basis, a0, avec)
    }
}
