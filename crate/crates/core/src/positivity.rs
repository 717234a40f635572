//! Local spectra, positivity margins over point samples, and violation-time search.
//!
//! Positivity is only ever certified on the sampled points.

use serde::{Deserialize, Serialize};

use crate::classical::PhasePoint;
use crate::dynamics::{
    sum_point_terms, DensityField, LieSeries, SeriesValue, SpinOrbitHeisenberg, SpinOrbitSchrodinger,
};
use crate::error::{Error, Result};
use crate::hybrid::{HybridField, HybridObservable};
use crate::par::map_indexed;
use crate::su::QuantumOperator;

/// Initial margins below `-INITIAL_SLACK` are rejected by [`violation_time`].
pub const INITIAL_SLACK: f64 = 1e-12;
/// Default bisection tolerance in `t`.
pub const DEFAULT_TIME_TOL: f64 = 1e-6;
/// Coarse scan uses `t_max / COARSE_STEPS`.
pub const COARSE_STEPS: usize = 200;

fn hermitian_tol(m: &QuantumOperator) -> f64 {
    1e-9 * m.max_abs().max(1.0)
}

/// Sorted eigenvalues of the Hermitian matrix `m`.
pub fn spectrum(m: &QuantumOperator) -> Result<Vec<f64>> {
    m.eigenvalues(hermitian_tol(m))
}

/// Sorted eigenvalues of `A(p)`.
pub fn local_spectrum(a: &HybridObservable, p: &PhasePoint) -> Result<Vec<f64>> {
    spectrum(&a.matrix_at(p)?)
}

/// Anything with a pointwise matrix whose smallest eigenvalue is the positivity margin.
pub trait Scannable: Sync {
    fn local_matrix(&self, p: &PhasePoint) -> Result<QuantumOperator>;
}

impl Scannable for HybridObservable {
    fn local_matrix(&self, p: &PhasePoint) -> Result<QuantumOperator> {
        self.matrix_at(p)
    }
}

/// The envelope is positive, so only the polynomial part is scanned.
impl Scannable for HybridField {
    fn local_matrix(&self, p: &PhasePoint) -> Result<QuantumOperator> {
        self.poly_matrix_at(p)
    }
}

impl Scannable for DensityField {
    fn local_matrix(&self, p: &PhasePoint) -> Result<QuantumOperator> {
        self.field().poly_matrix_at(p)
    }
}

/// Smallest eigenvalue at every sampled point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityScan {
    pub points: Vec<PhasePoint>,
    pub margins: Vec<f64>,
    pub global_margin: f64,
    /// Index of the first point attaining the global margin.
    pub witness: usize,
}

impl PositivityScan {
    pub fn from_margins(points: Vec<PhasePoint>, margins: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let (witness, global_margin) = indexed_min(&margins);
        Ok(Self {
            points,
            margins,
            global_margin,
            witness,
        })
    }

    pub fn witness_point(&self) -> &PhasePoint {
        &self.points[self.witness]
    }
}

fn indexed_min(values: &[f64]) -> (usize, f64) {
    values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) })
}

fn min_eig(m: &QuantumOperator) -> Result<f64> {
    Ok(spectrum(m)?[0])
}

/// Scans the smallest local eigenvalue of `a` over `points`.
pub fn positivity_margin<S: Scannable>(a: &S, points: &[PhasePoint]) -> Result<PositivityScan> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let margins = map_indexed(points, |_, p| min_eig(&a.local_matrix(p)?))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    PositivityScan::from_margins(points.to_vec(), margins)
}

/// Pointwise matrices along an evolution, on a fixed point set.
pub trait Trajectory: Sync {
    fn points(&self) -> &[PhasePoint];
    fn matrix(&self, t: f64, index: usize) -> Result<QuantumOperator>;

    /// `(witness index, global margin)` at time `t`.
    fn margin(&self, t: f64) -> Result<(usize, f64)> {
        if self.points().is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let margins = map_indexed(self.points(), |i, _| min_eig(&self.matrix(t, i)?))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(indexed_min(&margins))
    }

    fn scan(&self, t: f64) -> Result<PositivityScan> {
        let margins = map_indexed(self.points(), |i, _| min_eig(&self.matrix(t, i)?))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        PositivityScan::from_margins(self.points().to_vec(), margins)
    }
}

/// Drops points on the singular locus of the closed forms and counts them.
fn prepare_regular<D>(
    points: &[PhasePoint],
    prep: impl Fn(usize, &PhasePoint) -> Result<D>,
) -> Result<(Vec<PhasePoint>, Vec<D>, usize)> {
    let mut kept = Vec::new();
    let mut data = Vec::new();
    let mut skipped = 0;
    for (i, p) in points.iter().enumerate() {
        match prep(i, p) {
            Ok(d) => {
                kept.push(p.clone());
                data.push(d);
            }
            Err(Error::SingularPoint { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((kept, data, skipped))
}

/// Heisenberg spin-orbit closed form on a point set.
pub struct HeisenbergClosedForm {
    cf: SpinOrbitHeisenberg,
    points: Vec<PhasePoint>,
    data: Vec<crate::dynamics::HeisenbergPoint>,
    /// Points dropped for `|L| <= ε_L`.
    pub skipped: usize,
}

impl HeisenbergClosedForm {
    pub fn new(cf: SpinOrbitHeisenberg, points: &[PhasePoint]) -> Result<Self> {
        let (points, data, skipped) = prepare_regular(points, |i, p| cf.prepare(i, p))?;
        Ok(Self {
            cf,
            points,
            data,
            skipped,
        })
    }
}

impl Trajectory for HeisenbergClosedForm {
    fn points(&self) -> &[PhasePoint] {
        &self.points
    }
    fn matrix(&self, t: f64, index: usize) -> Result<QuantumOperator> {
        self.cf.matrix(t, &self.data[index])
    }
}

/// Schrödinger spin-orbit closed form (polynomial part) on a point set.
pub struct SchrodingerClosedForm {
    cf: SpinOrbitSchrodinger,
    points: Vec<PhasePoint>,
    data: Vec<crate::dynamics::SchrodingerPoint>,
    pub skipped: usize,
}

impl SchrodingerClosedForm {
    pub fn new(cf: SpinOrbitSchrodinger, points: &[PhasePoint]) -> Result<Self> {
        let cf = cf.polynomial_part();
        let (points, data, skipped) = prepare_regular(points, |i, p| cf.prepare(i, p))?;
        Ok(Self {
            cf,
            points,
            data,
            skipped,
        })
    }
}

impl Trajectory for SchrodingerClosedForm {
    fn points(&self) -> &[PhasePoint] {
        &self.points
    }
    fn matrix(&self, t: f64, index: usize) -> Result<QuantumOperator> {
        self.cf.matrix(t, &self.data[index])
    }
}

/// Step-and-restart Lie series, with per-point term values cached for every segment.
///
/// Segment `j` covers `[j·dt, (j+1)·dt]`; times outside `[0, steps·dt]` are rejected.
pub struct SteppedSeries {
    dt: f64,
    points: Vec<PhasePoint>,
    /// `segments[j][i]` holds the term matrices of segment `j` at point `i`.
    segments: Vec<Vec<Vec<QuantumOperator>>>,
    /// Largest series remainder estimate over the segments.
    pub remainder: f64,
}

impl SteppedSeries {
    pub fn new<V: SeriesValue + Scannable + Send + Sync>(
        x: &V,
        dt: f64,
        steps: usize,
        order: usize,
        ad: impl Fn(&V) -> Result<V>,
        points: &[PhasePoint],
    ) -> Result<Self> {
        if !(dt > 0.0) || steps == 0 {
            return Err(Error::InvalidArgument("stepping needs dt > 0 and at least one step".into()));
        }
        let mut segments = Vec::with_capacity(steps);
        let mut remainder = 0.0f64;
        let mut cur = x.clone();
        for _ in 0..steps {
            let series = LieSeries::build(&cur, order, &ad)?;
            let per_point = map_indexed(points, |_, p| {
                series.terms().iter().map(|v| v.local_matrix(p)).collect::<Result<Vec<_>>>()
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            segments.push(per_point);
            let r = series.evaluate(dt)?;
            remainder = remainder.max(r.remainder);
            cur = r.value;
        }
        Ok(Self {
            dt,
            points: points.to_vec(),
            segments,
            remainder,
        })
    }

    pub fn t_max(&self) -> f64 {
        self.dt * self.segments.len() as f64
    }
}

impl Trajectory for SteppedSeries {
    fn points(&self) -> &[PhasePoint] {
        &self.points
    }
    fn matrix(&self, t: f64, index: usize) -> Result<QuantumOperator> {
        if !(0.0..=self.t_max() * (1.0 + 1e-12)).contains(&t) {
            return Err(Error::InvalidArgument(format!("t = {t} is outside the stepped range")));
        }
        let j = ((t / self.dt).floor() as usize).min(self.segments.len() - 1);
        sum_point_terms(&self.segments[j][index], t - j as f64 * self.dt)
    }
}

/// Outcome of a violation search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    /// First time with a negative global margin, located to `tol`.
    pub t_star: Option<f64>,
    pub witness_point: Option<PhasePoint>,
    pub initial_margin: f64,
    /// `(t, global margin)` on the coarse grid, up to the first violation.
    pub margin_curve: Vec<(f64, f64)>,
    pub t_max: f64,
    pub tol: f64,
}

/// Smallest `t* ∈ (0, t_max]` with a negative global margin: a coarse scan with
/// step `t_max/COARSE_STEPS`, then bisection to `tol`.
pub fn violation_time<T: Trajectory + ?Sized>(traj: &T, t_max: f64, tol: f64) -> Result<ViolationReport> {
    violation_time_with_steps(traj, t_max, tol, COARSE_STEPS)
}

pub fn violation_time_with_steps<T: Trajectory + ?Sized>(
    traj: &T,
    t_max: f64,
    tol: f64,
    steps: usize,
) -> Result<ViolationReport> {
    if !(t_max > 0.0 && tol > 0.0) || steps == 0 {
        return Err(Error::InvalidArgument("t_max, tol and steps must be positive".into()));
    }
    let (_, m0) = traj.margin(0.0)?;
    if m0 < -INITIAL_SLACK {
        return Err(Error::NotPositive(m0));
    }
    let mut curve = vec![(0.0, m0)];
    let dt = t_max / steps as f64;
    for s in 1..=steps {
        let t = if s == steps { t_max } else { s as f64 * dt };
        let (_, m) = traj.margin(t)?;
        curve.push((t, m));
        if m < 0.0 {
            let (mut lo, mut hi) = ((s - 1) as f64 * dt, t);
            let mut witness = traj.margin(hi)?.0;
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                let (w, m) = traj.margin(mid)?;
                if m < 0.0 {
                    hi = mid;
                    witness = w;
                } else {
                    lo = mid;
                }
            }
            return Ok(ViolationReport {
                t_star: Some(hi),
                witness_point: Some(traj.points()[witness].clone()),
                initial_margin: m0,
                margin_curve: curve,
                t_max,
                tol,
            });
        }
    }
    Ok(ViolationReport {
        t_star: None,
        witness_point: None,
        initial_margin: m0,
        margin_curve: curve,
        t_max,
        tol,
    })
}
