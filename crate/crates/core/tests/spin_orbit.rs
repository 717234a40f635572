//! Spin-orbit closed forms against the Lie series in both pictures.

use hybrid_bracket::classical::{parse_polynomial, Envelope, PhasePoint};
use hybrid_bracket::dynamics::{
    heisenberg_series, schrodinger_series, spin_orbit_hamiltonian, sum_point_terms, SpinOrbitHeisenberg,
    SpinOrbitSchrodinger, DEFAULT_EPS_L,
};
use hybrid_bracket::hybrid::{HybridField, HybridObservable};
use hybrid_bracket::sampling::{phase_points, SampleRegion};
use hybrid_bracket::su::build_basis;

fn shell_points(count: usize) -> Vec<PhasePoint> {
    phase_points(count, 3, &SampleRegion::AngularShell { lo: 0.5, hi: 3.0, box_half: 1.5 }).unwrap()
}

fn l_norm(p: &PhasePoint) -> f64 {
    p.angular_momentum().unwrap().iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[test]
fn heisenberg_closed_form_matches_series() {
    let b = build_basis(2, 1.0).unwrap();
    let g = 1.0;
    let h = spin_orbit_hamiltonian(&b, g).unwrap();
    let p = |s| parse_polynomial(s, 3).unwrap();
    let a0 = HybridObservable::new(b, p("1 + x1 k2 - 0.5 x3^2"), vec![p("x2"), p("k1 k3"), p("0.3")]).unwrap();
    let series = heisenberg_series(&a0, &h, 14).unwrap();
    let cf = SpinOrbitHeisenberg::new(&a0, g, DEFAULT_EPS_L).unwrap();
    let mut worst = 0.0f64;
    for (i, pt) in shell_points(50).iter().enumerate() {
        let t = 0.5 / (g * l_norm(pt));
        let want = cf.matrix(t, &cf.prepare(i, pt).unwrap()).unwrap();
        let got = sum_point_terms(&series.point_terms(pt).unwrap(), t).unwrap();
        worst = worst.max(got.sub(&want).unwrap().max_abs() / want.max_abs());
    }
    assert!(worst < 1e-10, "{worst:e}");
}

#[test]
fn schrodinger_closed_form_matches_series() {
    let b = build_basis(2, 1.0).unwrap();
    let g = 1.0;
    let h = spin_orbit_hamiltonian(&b, g).unwrap();
    let p = |s| parse_polynomial(s, 3).unwrap();
    let c = PhasePoint::new(vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]).unwrap();
    let env = Envelope::new(c, 0.4).unwrap();
    let rho = HybridField::new(b, env, p("1 + 0.2 x1"), vec![p("0.1 x2"), p("0.3 k1"), p("0.2")]).unwrap();
    let series = schrodinger_series(&rho, &h, 14).unwrap();
    let cf = SpinOrbitSchrodinger::new(&rho, g, DEFAULT_EPS_L).unwrap();
    let mut worst = 0.0f64;
    for (i, pt) in shell_points(50).iter().enumerate() {
        let t = 0.5 / (g * l_norm(pt));
        let want = cf.matrix(t, &cf.prepare(i, pt).unwrap()).unwrap();
        let got = sum_point_terms(&series.point_terms(pt).unwrap(), t).unwrap();
        worst = worst.max(got.sub(&want).unwrap().max_abs() / want.max_abs());
    }
    assert!(worst < 1e-10, "{worst:e}");
}
