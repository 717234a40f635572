use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::classical::{parse_polynomial, Envelope, PhasePoint, PhasePolynomial};
use crate::dynamics::DensityField;
use crate::error::{Error, Result};
use crate::hybrid::{BracketKind, HybridObservable};
use crate::sampling::{phase_points, SampleRegion};
use crate::su::SuBasis;

fn default_n() -> usize {
    2
}
fn default_n_c() -> usize {
    3
}
fn one() -> f64 {
    1.0
}
fn zero_literal() -> String {
    "0".into()
}

/// One scenario file. Unknown keys anywhere are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    /// Required by every randomized subcommand.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Hilbert-space dimension of the quantum sector.
    #[serde(default = "default_n")]
    pub n: usize,
    /// Number of classical degrees of freedom.
    #[serde(default = "default_n_c")]
    pub n_c: usize,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<ObservableSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<ObservableSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
    #[serde(default)]
    pub time: TimeSpec,
    #[serde(default)]
    pub points: PointSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolve: Option<EvolveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin_orbit: Option<SpinOrbitSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positivity: Option<PositivitySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jacobi: Option<JacobiSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniqueness: Option<UniquenessSpec>,
}

/// `classical + Σᵢ quantum[i] qᵢ` as polynomial literals; an empty `quantum` means zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableSpec {
    #[serde(default = "zero_literal")]
    pub classical: String,
    #[serde(default)]
    pub quantum: Vec<String>,
}

/// `ρ ∝ (α + Σᵢ βᵢ qᵢ)·G`, normalized to unit trace integral.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub alpha: String,
    #[serde(default)]
    pub beta: Vec<String>,
    /// Defaults to `(1, 0, 0)` for three classical dimensions, the origin otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_x: Option<Vec<f64>>,
    /// Defaults to `(0, 1, 0)` for three classical dimensions, the origin otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_k: Option<Vec<f64>>,
    #[serde(default = "default_width")]
    pub width: f64,
}

fn default_width() -> f64 {
    0.4
}

/// Uniform grid `0, t_max/steps, ..., t_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    #[serde(default = "one")]
    pub t_max: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
    /// Lie-series truncation order.
    #[serde(default = "default_order")]
    pub order: usize,
}

fn default_steps() -> usize {
    20
}
fn default_order() -> usize {
    14
}

impl Default for TimeSpec {
    fn default() -> Self {
        Self {
            t_max: 1.0,
            steps: default_steps(),
            order: default_order(),
        }
    }
}

impl TimeSpec {
    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps)
            .map(|i| self.t_max * i as f64 / self.steps as f64)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RegionSpec {
    Box { lo: f64, hi: f64 },
    Balls { radius: f64 },
    AngularShell { lo: f64, hi: f64, box_half: f64 },
}

impl From<&RegionSpec> for SampleRegion {
    fn from(r: &RegionSpec) -> Self {
        match *r {
            RegionSpec::Box { lo, hi } => SampleRegion::Box { lo, hi },
            RegionSpec::Balls { radius } => SampleRegion::Balls { radius },
            RegionSpec::AngularShell { lo, hi, box_half } => SampleRegion::AngularShell { lo, hi, box_half },
        }
    }
}

/// Halton samples in a region, followed by any explicit points `[x..., k...]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default = "default_region")]
    pub region: RegionSpec,
    #[serde(default)]
    pub extra: Vec<Vec<f64>>,
}

fn default_count() -> usize {
    50
}
fn default_region() -> RegionSpec {
    RegionSpec::Box { lo: -2.0, hi: 2.0 }
}

impl Default for PointSpec {
    fn default() -> Self {
        Self {
            count: default_count(),
            region: default_region(),
            extra: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Picture {
    Heisenberg,
    Schrodinger,
}

impl Picture {
    pub fn name(self) -> &'static str {
        match self {
            Self::Heisenberg => "heisenberg",
            Self::Schrodinger => "schrodinger",
        }
    }
}

fn schrodinger() -> Picture {
    Picture::Schrodinger
}
fn drift_tol() -> f64 {
    1e-8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveSpec {
    /// Picture of the emitted trajectory; conservation always evolves the state.
    #[serde(default = "schrodinger")]
    pub picture: Picture,
    #[serde(default)]
    pub quantities: BTreeMap<String, ObservableSpec>,
    /// Quantities whose drift must stay below `drift_tol`.
    #[serde(default)]
    pub conserved: Vec<String>,
    /// Quantities whose drift must exceed `drift_tol`.
    #[serde(default)]
    pub not_conserved: Vec<String>,
    #[serde(default = "drift_tol")]
    pub drift_tol: f64,
}

fn rel_tol() -> f64 {
    1e-6
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinOrbitSpec {
    #[serde(default = "one")]
    pub g: f64,
    #[serde(default = "rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_eps_l")]
    pub eps_l: f64,
}

fn default_eps_l() -> f64 {
    crate::dynamics::DEFAULT_EPS_L
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Spin-orbit closed form with `H = g L·S`.
    ClosedForm,
    /// Step-and-restart Lie series under `[hamiltonian]`.
    Series,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Violation,
    None,
}

fn time_tol() -> f64 {
    crate::positivity::DEFAULT_TIME_TOL
}
fn coarse_steps() -> usize {
    crate::positivity::COARSE_STEPS
}
fn segment_order() -> usize {
    12
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositivitySpec {
    pub picture: Picture,
    pub method: Method,
    /// Coupling for the closed form.
    #[serde(default = "one")]
    pub g: f64,
    pub t_max: f64,
    #[serde(default = "time_tol")]
    pub tol: f64,
    #[serde(default = "coarse_steps")]
    pub coarse_steps: usize,
    /// Series order per segment for the series method.
    #[serde(default = "segment_order")]
    pub order: usize,
    pub expect: Expectation,
    #[serde(default = "default_eps_l")]
    pub eps_l: f64,
}

fn default_ns() -> Vec<usize> {
    vec![2, 3, 4]
}
fn default_triples() -> usize {
    500
}
fn three() -> usize {
    3
}
fn jacobi_tol() -> f64 {
    1e-10
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JacobiSpec {
    pub brackets: Vec<BracketKind>,
    #[serde(default = "default_ns")]
    pub ns: Vec<usize>,
    #[serde(default = "default_triples")]
    pub triples: usize,
    #[serde(default = "three")]
    pub max_degree: usize,
    #[serde(default = "three")]
    pub max_terms: usize,
    /// Bound on `residual / max(1, ‖A‖‖B‖‖C‖)`.
    #[serde(default = "jacobi_tol")]
    pub tol: f64,
}

fn grid_lo() -> f64 {
    -2.0
}
fn grid_hi() -> f64 {
    2.0
}
fn grid_points() -> usize {
    9
}
fn instances() -> usize {
    4
}
fn threshold() -> f64 {
    0.1
}
fn gap() -> f64 {
    1e-3
}
fn functional_samples() -> usize {
    500
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniquenessSpec {
    #[serde(default = "default_ns")]
    pub ns: Vec<usize>,
    #[serde(default = "grid_lo")]
    pub lo: f64,
    #[serde(default = "grid_hi")]
    pub hi: f64,
    #[serde(default = "grid_points")]
    pub grid_points: usize,
    /// Random triples per family, shared by every node.
    #[serde(default = "instances")]
    pub instances: usize,
    /// Nodes with `|α| + |γ|` at least this must break Jacobi.
    #[serde(default = "threshold")]
    pub threshold: f64,
    #[serde(default = "jacobi_tol")]
    pub canonical_tol: f64,
    /// Minimal residual required away from the canonical point.
    #[serde(default = "gap")]
    pub gap: f64,
    #[serde(default = "functional_samples")]
    pub functional_samples: usize,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        let s: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("n must be at least 2, got {}", self.n)));
        }
        if !(1..=6).contains(&self.n_c) {
            return Err(Error::Config(format!("n_c must be in 1..=6, got {}", self.n_c)));
        }
        if !(self.hbar > 0.0) {
            return Err(Error::Config("hbar must be positive".into()));
        }
        if self.time.steps == 0 || self.time.order == 0 || !(self.time.t_max > 0.0) {
            return Err(Error::Config("time needs t_max > 0, steps >= 1 and order >= 1".into()));
        }
        for p in &self.points.extra {
            if p.len() != 2 * self.n_c {
                return Err(Error::Config(format!(
                    "extra point has {} coordinates, expected {}",
                    p.len(),
                    2 * self.n_c
                )));
            }
        }
        Ok(())
    }

    pub fn require_seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::Config("this subcommand is randomized and needs a seed".into()))
    }

    pub fn basis(&self) -> Result<Arc<SuBasis>> {
        crate::su::build_basis(self.n, self.hbar)
    }

    pub fn hamiltonian(&self, basis: &Arc<SuBasis>) -> Result<HybridObservable> {
        required(&self.hamiltonian, "hamiltonian")?.build(basis, self.n_c)
    }

    pub fn observable(&self, basis: &Arc<SuBasis>) -> Result<HybridObservable> {
        required(&self.observable, "observable")?.build(basis, self.n_c)
    }

    pub fn state(&self, basis: &Arc<SuBasis>) -> Result<DensityField> {
        required(&self.state, "state")?.build(basis, self.n_c)
    }

    pub fn phase_points(&self) -> Result<Vec<PhasePoint>> {
        let mut pts = phase_points(self.points.count, self.n_c, &(&self.points.region).into())?;
        for p in &self.points.extra {
            pts.push(PhasePoint::from_coords(p)?);
        }
        if pts.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        Ok(pts)
    }
}

fn required<'a, T>(v: &'a Option<T>, section: &str) -> Result<&'a T> {
    v.as_ref()
        .ok_or_else(|| Error::Config(format!("missing [{section}] section")))
}

fn parse_components(items: &[String], basis: &SuBasis, n_c: usize, what: &str) -> Result<Vec<PhasePolynomial>> {
    if items.is_empty() {
        return Ok(vec![PhasePolynomial::zero(2 * n_c); basis.dim()]);
    }
    if items.len() != basis.dim() {
        return Err(Error::Config(format!(
            "{what} has {} components, expected {} for n = {}",
            items.len(),
            basis.dim(),
            basis.n()
        )));
    }
    items.iter().map(|s| parse_polynomial(s, n_c)).collect()
}

impl ObservableSpec {
    pub fn build(&self, basis: &Arc<SuBasis>, n_c: usize) -> Result<HybridObservable> {
        let a0 = parse_polynomial(&self.classical, n_c)?;
        let avec = parse_components(&self.quantum, basis, n_c, "quantum")?;
        HybridObservable::new(basis.clone(), a0, avec)
    }
}

impl StateSpec {
    pub fn envelope(&self, n_c: usize) -> Result<Envelope> {
        let (dx, dk) = if n_c == 3 {
            (vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0])
        } else {
            (vec![0.0; n_c], vec![0.0; n_c])
        };
        let x = self.center_x.clone().unwrap_or(dx);
        let k = self.center_k.clone().unwrap_or(dk);
        if x.len() != n_c || k.len() != n_c {
            return Err(Error::Config(format!("state center must have {n_c} coordinates per block")));
        }
        Envelope::new(PhasePoint::new(x, k)?, self.width)
    }

    pub fn build(&self, basis: &Arc<SuBasis>, n_c: usize) -> Result<DensityField> {
        let r0 = parse_polynomial(&self.alpha, n_c)?;
        let rvec = parse_components(&self.beta, basis, n_c, "beta")?;
        DensityField::from_polys(basis.clone(), self.envelope(n_c)?, r0, rvec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
name = "sample"
seed = 3
n = 2
n_c = 3

[hamiltonian]
quantum = ["L1", "L2", "L3"]

[state]
alpha = "1"
beta = ["0", "0", "0.2"]

[points]
count = 10
region = { kind = "angular_shell", lo = 0.5, hi = 3.0, box_half = 1.5 }
"#;

    #[test]
    fn parses_and_round_trips() {
        let s = Scenario::from_toml(SAMPLE).unwrap();
        assert_eq!(s.time, TimeSpec::default());
        let again = Scenario::from_toml(&s.to_toml().unwrap()).unwrap();
        assert_eq!(s, again);
        let b = s.basis().unwrap();
        assert_eq!(s.hamiltonian(&b).unwrap().degree(), 2);
        assert_eq!(s.phase_points().unwrap().len(), 10);
        assert!((s.state(&b).unwrap().trace_integral() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = SAMPLE.replace("n_c = 3", "n_c = 3\nbogus = 1");
        assert!(matches!(Scenario::from_toml(&bad), Err(Error::Config(_))));
        let bad = SAMPLE.replace("box_half = 1.5", "box_half = 1.5, extra = 2");
        assert!(Scenario::from_toml(&bad).is_err());
    }

    #[test]
    fn component_count_checked() {
        let s = Scenario::from_toml(&SAMPLE.replace("\"L1\", \"L2\", \"L3\"", "\"L1\"")).unwrap();
        assert!(matches!(s.hamiltonian(&s.basis().unwrap()), Err(Error::Config(_))));
    }
}
