use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::density::DensityField;
use super::series::{schrodinger_series, TruncationEstimate};
use crate::error::{Error, Result};
use crate::hybrid::{pairing, HybridObservable};

/// `∫ tr(ρ A)`, exact through Gaussian moments.
pub fn expectation(a: &HybridObservable, rho: &DensityField) -> Result<f64> {
    pairing(a, rho.field())
}

/// Expectation values of named quantities along a Schrödinger trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionReport {
    pub times: Vec<f64>,
    /// `⟨Q⟩_{ρ(t)}` per quantity, aligned with `times`.
    pub expectations: BTreeMap<String, Vec<f64>>,
    /// `max_t |⟨Q⟩_{ρ(t)} − ⟨Q⟩_{ρ(0)}|`
    pub drift: BTreeMap<String, f64>,
    /// Series truncation estimate at the largest `|t|`.
    pub truncation: TruncationEstimate,
}

/// Evolves `ρ` under `H` with one series expansion of the given order and tabulates drifts.
///
/// Pairing is linear, so each expectation is the polynomial `Σ_k t^k ⟨Q, ad^k ρ/k!⟩`.
pub fn conservation_report(
    h: &HybridObservable,
    quantities: &[(String, HybridObservable)],
    rho: &DensityField,
    times: &[f64],
    order: usize,
) -> Result<EvolutionReport> {
    if times.is_empty() || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("times must be nonempty and strictly increasing".into()));
    }
    let series = schrodinger_series(rho.field(), h, order)?;
    let t_max = times.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let mut expectations = BTreeMap::new();
    let mut drift = BTreeMap::new();
    for (name, q) in quantities {
        let coeffs = series
            .terms()
            .iter()
            .map(|term| pairing(q, term))
            .collect::<Result<Vec<_>>>()?;
        let eval = |t: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c);
        let base = expectation(q, rho)?;
        let values: Vec<f64> = times.iter().map(|&t| eval(t)).collect();
        let d = values.iter().fold(0.0f64, |m, v| m.max((v - base).abs()));
        expectations.insert(name.clone(), values);
        drift.insert(name.clone(), d);
    }
    Ok(EvolutionReport {
        times: times.to_vec(),
        expectations,
        drift,
        truncation: series.estimate(t_max),
    })
}
