use std::ops::Deref;
use std::sync::Arc;

use crate::classical::{Envelope, PhasePolynomial};
use crate::error::{Error, Result};
use crate::hybrid::HybridField;
use crate::su::SuBasis;

/// Relative tolerance on `∫ tr ρ = 1` accepted by [`DensityField::new`].
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// Hybrid density `ρ = ρ₀·1 + Σᵢ ρᵢ qᵢ` normalized to `∫ tr ρ = 1`.
///
/// Positivity is not enforced; it is what the positivity scans examine.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityField {
    field: HybridField,
}

impl DensityField {
    /// Accepts a field whose trace integral is already 1.
    pub fn new(field: HybridField) -> Result<Self> {
        let tr = field.trace_integral();
        if (tr - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Normalization(tr));
        }
        Ok(Self { field })
    }

    /// Rescales a field to unit trace integral.
    pub fn normalized(field: HybridField) -> Result<Self> {
        let tr = field.trace_integral();
        if !(tr.is_finite() && tr > 0.0) {
            return Err(Error::Normalization(tr));
        }
        Ok(Self {
            field: field.scale(1.0 / tr),
        })
    }

    /// Builds and normalizes from polynomial parts on a shared envelope.
    pub fn from_polys(
        basis: Arc<SuBasis>,
        envelope: Envelope,
        r0: PhasePolynomial,
        rvec: Vec<PhasePolynomial>,
    ) -> Result<Self> {
        Self::normalized(HybridField::new(basis, envelope, r0, rvec)?)
    }

    /// Wraps an evolved field; evolution preserves the trace, so this skips the check.
    pub(crate) fn from_evolved(field: HybridField) -> Self {
        Self { field }
    }

    pub fn field(&self) -> &HybridField {
        &self.field
    }

    pub fn into_field(self) -> HybridField {
        self.field
    }
}

impl Deref for DensityField {
    type Target = HybridField;
    fn deref(&self) -> &HybridField {
        &self.field
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su::build_basis;

    #[test]
    fn normalization_enforced() {
        let b = build_basis(2, 1.0).unwrap();
        let z = PhasePolynomial::zero(2);
        let f = HybridField::new(b.clone(), Envelope::standard(1), PhasePolynomial::one(2), vec![z.clone(); 3]).unwrap();
        assert!(matches!(DensityField::new(f.clone()), Err(Error::Normalization(_))));
        let rho = DensityField::normalized(f).unwrap();
        assert!((rho.trace_integral() - 1.0).abs() < 1e-14);
        let neg = HybridField::new(b, Envelope::standard(1), PhasePolynomial::constant(2, -1.0), vec![z; 3]).unwrap();
        assert!(DensityField::normalized(neg).is_err());
    }
}
