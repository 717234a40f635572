//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export returns a JSON string; the plain Rust functions underneath are what
//! the native tests exercise.

use hybrid_bracket::classical::Polynomial;
use hybrid_bracket::dynamics::{spin_orbit_closed_form_l_only, SpinOrbitHeisenberg, DEFAULT_EPS_L};
use hybrid_bracket::hybrid::HybridObservable;
use hybrid_bracket::positivity::{violation_time_with_steps, HeisenbergClosedForm, Trajectory};
use hybrid_bracket::sampling::{phase_points, SampleRegion};
use hybrid_bracket::su::build_basis;
use hybrid_bracket::uniqueness::ansatz_jacobi_scan;
use hybrid_bracket::Result;
use nalgebra::Vector3;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Spin and orbital angular momentum along `H = g L·S` at fixed `L`.
#[derive(Debug, Serialize)]
pub struct SpinOrbitCurve {
    pub t: Vec<f64>,
    /// Heisenberg-evolved `S_z = q₃` as a Bloch-type vector `b(t)`.
    pub spin: Vec<[f64; 3]>,
    /// Spin coefficient `b(t)` of the evolved `L_z`; its classical part stays `L₃`.
    pub orbital: Vec<[f64; 3]>,
}

pub fn spin_orbit_curve(g: f64, l: [f64; 3], t_max: f64, steps: usize) -> Result<SpinOrbitCurve> {
    let zero = Polynomial::zero(3);
    let one = Polynomial::one(3);
    let lz = Polynomial::variable(3, 2);
    let ls = [Vector3::from(l)];
    let mut out = SpinOrbitCurve {
        t: Vec::new(),
        spin: Vec::new(),
        orbital: Vec::new(),
    };
    for i in 0..=steps {
        let t = t_max * i as f64 / steps.max(1) as f64;
        let s = spin_orbit_closed_form_l_only(&zero, &[zero.clone(), zero.clone(), one.clone()], g, t, &ls, DEFAULT_EPS_L)?;
        let o = spin_orbit_closed_form_l_only(&lz, &[zero.clone(), zero.clone(), zero.clone()], g, t, &ls, DEFAULT_EPS_L)?;
        out.t.push(t);
        out.spin.push([s[0].1.x, s[0].1.y, s[0].1.z]);
        out.orbital.push([o[0].1.x, o[0].1.y, o[0].1.z]);
    }
    Ok(out)
}

/// Global positivity margin of the spin-orbit evolved observable `c + x₁` on a ball.
#[derive(Debug, Serialize)]
pub struct MarginCurve {
    pub t: Vec<f64>,
    pub margin: Vec<f64>,
    pub t_star: Option<f64>,
}

pub fn heisenberg_margin_curve(g: f64, offset: f64, radius: f64, points: usize, t_max: f64, steps: usize) -> Result<MarginCurve> {
    let basis = build_basis(2, 1.0)?;
    let a0 = HybridObservable::classical(
        basis,
        Polynomial::x(3, 0).add_scaled(&Polynomial::one(6), offset),
    );
    let pts = phase_points(points, 3, &SampleRegion::Balls { radius })?;
    let traj = HeisenbergClosedForm::new(SpinOrbitHeisenberg::new(&a0, g, DEFAULT_EPS_L)?, &pts)?;
    let mut t = Vec::new();
    let mut margin = Vec::new();
    for i in 0..=steps {
        let ti = t_max * i as f64 / steps.max(1) as f64;
        t.push(ti);
        margin.push(traj.margin(ti)?.1);
    }
    let t_star = violation_time_with_steps(&traj, t_max, 1e-6, steps.max(1))
        .map(|r| r.t_star)
        .unwrap_or(Some(0.0));
    Ok(MarginCurve { t, margin, t_star })
}

/// Jacobi residual of the three-parameter bracket family over an `(α, γ)` grid at fixed `β`.
#[derive(Debug, Serialize)]
pub struct UniquenessSlice {
    pub alpha: Vec<f64>,
    pub gamma: Vec<f64>,
    /// Row-major over `gamma` then `alpha`.
    pub residual: Vec<f64>,
}

pub fn uniqueness_slice(n: usize, beta: f64, lo: f64, hi: f64, points: usize, seed: u64) -> Result<UniquenessSlice> {
    let axis: Vec<f64> = (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points.max(2) - 1) as f64)
        .collect();
    let nodes: Vec<[f64; 3]> = axis
        .iter()
        .flat_map(|&g| axis.iter().map(move |&a| [a, beta, g]))
        .collect();
    let scan = ansatz_jacobi_scan(n, &nodes, 2, seed)?;
    Ok(UniquenessSlice {
        alpha: axis.clone(),
        gamma: axis,
        residual: scan.iter().map(|r| r.residual).collect(),
    })
}

fn to_js<T: Serialize>(r: Result<T>) -> std::result::Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = spinOrbitCurve)]
pub fn spin_orbit_curve_js(g: f64, l1: f64, l2: f64, l3: f64, t_max: f64, steps: usize) -> std::result::Result<String, JsError> {
    to_js(spin_orbit_curve(g, [l1, l2, l3], t_max, steps))
}

#[wasm_bindgen(js_name = heisenbergMarginCurve)]
pub fn heisenberg_margin_curve_js(
    g: f64,
    offset: f64,
    radius: f64,
    points: usize,
    t_max: f64,
    steps: usize,
) -> std::result::Result<String, JsError> {
    to_js(heisenberg_margin_curve(g, offset, radius, points, t_max, steps))
}

#[wasm_bindgen(js_name = uniquenessSlice)]
pub fn uniqueness_slice_js(n: usize, beta: f64, lo: f64, hi: f64, points: usize, seed: u64) -> std::result::Result<String, JsError> {
    to_js(uniqueness_slice(n, beta, lo, hi, points, seed))
}
