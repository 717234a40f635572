use std::collections::BTreeMap;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use super::config::{EvolveSpec, Expectation, Method, Picture, Scenario, SpinOrbitSpec};
use super::output::{coord_header, coords, num, trajectory_header, trajectory_row, Artifact, Check, CsvTable, RunOutput};
use crate::classical::{poisson_at, PhasePoint, PlaneWave};
use crate::dynamics::{
    conservation_report, heisenberg_series, schrodinger_series, spin_orbit_hamiltonian, sum_point_terms,
    LieSeries, SeriesValue, SpinOrbitHeisenberg, SpinOrbitSchrodinger,
};
use crate::error::{Error, Result};
use crate::hybrid::{
    apply_bracket, heisenberg_bracket, jacobi_residual, jacobi_scale, schrodinger_bracket, BracketKind,
    HybridObservable, JacobiWitness, ObservableRecord,
};
use crate::par::map_indexed;
use crate::positivity::{
    violation_time_with_steps, HeisenbergClosedForm, SchrodingerClosedForm, SteppedSeries, Trajectory,
};
use crate::sampling::random_observable;
use crate::su::{build_basis, QuantumOperator};
use crate::uniqueness::{
    ansatz_jacobi_scan, functional_equation_residual, degenerate_nodes, derivation_residual, functional_samples,
    grid, planewave_f_extraction, probe_points, tensor_basis_check,
};

/// Scenario runner subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Evolve,
    SpinOrbit,
    Positivity,
    Jacobi,
    Uniqueness,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Evolve,
        Command::SpinOrbit,
        Command::Positivity,
        Command::Jacobi,
        Command::Uniqueness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Evolve => "evolve",
            Self::SpinOrbit => "spin-orbit",
            Self::Positivity => "positivity",
            Self::Jacobi => "jacobi",
            Self::Uniqueness => "uniqueness",
        }
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown subcommand `{s}`")))
    }
}

pub fn run(cmd: Command, s: &Scenario) -> Result<RunOutput> {
    match cmd {
        Command::Evolve => run_evolve(s),
        Command::SpinOrbit => run_spin_orbit(s),
        Command::Positivity => run_positivity(s),
        Command::Jacobi => run_jacobi(s),
        Command::Uniqueness => run_uniqueness(s),
    }
}

/// JSON mirror of a CSV table: the header plus rows of numbers.
#[derive(Serialize)]
struct TableMirror<'a> {
    header: &'a [String],
    rows: Vec<Vec<f64>>,
}

fn series_trajectory<V: SeriesValue + Sync>(
    series: &LieSeries<V>,
    points: &[PhasePoint],
    times: &[f64],
    n_c: usize,
    n: usize,
) -> Result<(Artifact, Artifact)> {
    let terms = map_indexed(points, |_, p| series.point_terms(p))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let header = trajectory_header(n_c, n);
    let mut csv = CsvTable::new(&header)?;
    let mut rows = Vec::new();
    for &t in times {
        for (i, p) in points.iter().enumerate() {
            let m = sum_point_terms(&terms[i], t)?;
            let row = trajectory_row(t, i, p, &m);
            rows.push(row.iter().map(|v| v.parse::<f64>().expect("numeric field")).collect());
            csv.row(&row)?;
        }
    }
    let mirror = Artifact::json("trajectory.json", &TableMirror { header: &header, rows })?;
    Ok((csv.finish("trajectory.csv")?, mirror))
}

pub fn run_evolve(s: &Scenario) -> Result<RunOutput> {
    let spec = s.evolve.clone().unwrap_or(EvolveSpec {
        picture: Picture::Schrodinger,
        quantities: BTreeMap::new(),
        conserved: Vec::new(),
        not_conserved: Vec::new(),
        drift_tol: 1e-8,
    });
    let basis = s.basis()?;
    let h = s.hamiltonian(&basis)?;
    let points = s.phase_points()?;
    let times = s.time.times();
    let order = s.time.order;
    let mut out = RunOutput::default();

    let (traj, mirror, estimate) = match spec.picture {
        Picture::Heisenberg => {
            let series = heisenberg_series(&s.observable(&basis)?, &h, order)?;
            let (a, b) = series_trajectory(&series, &points, &times, s.n_c, s.n)?;
            (a, b, series.estimate(s.time.t_max))
        }
        Picture::Schrodinger => {
            let rho = s.state(&basis)?;
            let series = schrodinger_series(rho.field(), &h, order)?;
            let (a, b) = series_trajectory(&series, &points, &times, s.n_c, s.n)?;
            (a, b, series.estimate(s.time.t_max))
        }
    };
    out.files.push(traj);
    out.files.push(mirror);
    if estimate.warning {
        out.notes.push(format!(
            "series remainder estimate {} at t = {} exceeds the warning level",
            num(estimate.remainder),
            num(s.time.t_max)
        ));
    }

    if !spec.quantities.is_empty() {
        let rho = s.state(&basis)?;
        let quantities = spec
            .quantities
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.build(&basis, s.n_c)?)))
            .collect::<Result<Vec<_>>>()?;
        let report = conservation_report(&h, &quantities, &rho, &times, order)?;
        for name in spec.conserved.iter().chain(&spec.not_conserved) {
            if !report.drift.contains_key(name) {
                return Err(Error::Config(format!("`{name}` is not a listed quantity")));
            }
        }
        for name in &spec.conserved {
            let d = report.drift[name];
            out.checks.push(Check::new(
                format!("conserved {name}"),
                d < spec.drift_tol,
                format!("drift {} (tol {})", num(d), num(spec.drift_tol)),
            ));
        }
        for name in &spec.not_conserved {
            let d = report.drift[name];
            out.checks.push(Check::new(
                format!("not conserved {name}"),
                d > spec.drift_tol,
                format!("drift {}", num(d)),
            ));
        }
        out.files.push(Artifact::json("conservation.json", &report)?);
    }
    Ok(out)
}

fn rel_error(got: &QuantumOperator, want: &QuantumOperator) -> Result<(f64, f64)> {
    let abs = got.sub(want)?.max_abs();
    Ok((abs, abs / want.max_abs().max(f64::MIN_POSITIVE)))
}

pub fn run_spin_orbit(s: &Scenario) -> Result<RunOutput> {
    let spec = s.spin_orbit.clone().unwrap_or(SpinOrbitSpec {
        g: 1.0,
        rel_tol: 1e-6,
        eps_l: crate::dynamics::DEFAULT_EPS_L,
    });
    let basis = s.basis()?;
    let h = spin_orbit_hamiltonian(&basis, spec.g)?;
    let points = s.phase_points()?;
    let times = s.time.times();
    let mut out = RunOutput::default();
    let mut cmp = CsvTable::new(&["picture", "t", "point_id", "abs_error", "rel_error"])?;
    let mut summary = BTreeMap::new();
    let mut pictures = 0;

    if s.observable.is_some() {
        pictures += 1;
        let a0 = s.observable(&basis)?;
        let cf = HeisenbergClosedForm::new(SpinOrbitHeisenberg::new(&a0, spec.g, spec.eps_l)?, &points)?;
        let series = heisenberg_series(&a0, &h, s.time.order)?;
        let worst = compare_picture(Picture::Heisenberg, &cf, &series, &times, s, &mut cmp, &mut out)?;
        summary.insert("heisenberg", json!({"max_rel_error": worst, "skipped_points": cf.skipped}));
        push_check(&mut out, Picture::Heisenberg, worst, spec.rel_tol, cf.skipped);
    }
    if s.state.is_some() {
        pictures += 1;
        let rho = s.state(&basis)?;
        let sf = SpinOrbitSchrodinger::new(rho.field(), spec.g, spec.eps_l)?;
        let cf = FullSchrodinger::new(sf, &points)?;
        let series = schrodinger_series(rho.field(), &h, s.time.order)?;
        let worst = compare_picture(Picture::Schrodinger, &cf, &series, &times, s, &mut cmp, &mut out)?;
        summary.insert("schrodinger", json!({"max_rel_error": worst, "skipped_points": cf.skipped}));
        push_check(&mut out, Picture::Schrodinger, worst, spec.rel_tol, cf.skipped);
    }
    if pictures == 0 {
        return Err(Error::Config("spin-orbit needs [observable] and/or [state]".into()));
    }
    out.files.push(cmp.finish("spin_orbit_comparison.csv")?);
    out.files.push(Artifact::json(
        "spin_orbit_summary.json",
        &json!({"g": spec.g, "order": s.time.order, "rel_tol": spec.rel_tol, "pictures": summary}),
    )?);
    Ok(out)
}

fn push_check(out: &mut RunOutput, picture: Picture, worst: f64, tol: f64, skipped: usize) {
    if skipped > 0 {
        out.notes
            .push(format!("{}: skipped {skipped} points on the |L| = 0 locus", picture.name()));
    }
    out.checks.push(Check::new(
        format!("{} closed form vs series", picture.name()),
        worst < tol,
        format!("max relative error {} (tol {})", num(worst), num(tol)),
    ));
}

/// Schrödinger closed form including the envelope, for comparison with the series.
struct FullSchrodinger {
    cf: SpinOrbitSchrodinger,
    points: Vec<PhasePoint>,
    data: Vec<crate::dynamics::SchrodingerPoint>,
    skipped: usize,
}

impl FullSchrodinger {
    fn new(cf: SpinOrbitSchrodinger, points: &[PhasePoint]) -> Result<Self> {
        let mut kept = Vec::new();
        let mut data = Vec::new();
        let mut skipped = 0;
        for (i, p) in points.iter().enumerate() {
            match cf.prepare(i, p) {
                Ok(d) => {
                    kept.push(p.clone());
                    data.push(d);
                }
                Err(Error::SingularPoint { .. }) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
        Ok(Self {
            cf,
            points: kept,
            data,
            skipped,
        })
    }
}

impl Trajectory for FullSchrodinger {
    fn points(&self) -> &[PhasePoint] {
        &self.points
    }
    fn matrix(&self, t: f64, index: usize) -> Result<QuantumOperator> {
        self.cf.matrix(t, &self.data[index])
    }
}

fn compare_picture<V: SeriesValue + Sync>(
    picture: Picture,
    cf: &dyn Trajectory,
    series: &LieSeries<V>,
    times: &[f64],
    s: &Scenario,
    cmp: &mut CsvTable,
    out: &mut RunOutput,
) -> Result<f64> {
    let pts = cf.points();
    let terms = map_indexed(pts, |_, p| series.point_terms(p))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut traj = CsvTable::new(&trajectory_header(s.n_c, s.n))?;
    let mut worst = 0.0f64;
    for &t in times {
        for (i, p) in pts.iter().enumerate() {
            let want = cf.matrix(t, i)?;
            let got = sum_point_terms(&terms[i], t)?;
            let (abs, rel) = rel_error(&got, &want)?;
            worst = worst.max(rel);
            cmp.row(&[picture.name().to_string(), num(t), i.to_string(), num(abs), num(rel)])?;
            traj.row(&trajectory_row(t, i, p, &want))?;
        }
    }
    out.files.push(traj.finish(format!("spin_orbit_{}.csv", picture.name()))?);
    Ok(worst)
}

pub fn run_positivity(s: &Scenario) -> Result<RunOutput> {
    let spec = s
        .positivity
        .clone()
        .ok_or_else(|| Error::Config("missing [positivity] section".into()))?;
    let basis = s.basis()?;
    let points = s.phase_points()?;
    let mut out = RunOutput::default();
    let dt = spec.t_max / spec.coarse_steps as f64;
    let mut skipped = 0;
    let mut remainder = None;
    let traj: Box<dyn Trajectory> = match (spec.method, spec.picture) {
        (Method::ClosedForm, Picture::Heisenberg) => {
            let cf = SpinOrbitHeisenberg::new(&s.observable(&basis)?, spec.g, spec.eps_l)?;
            let t = HeisenbergClosedForm::new(cf, &points)?;
            skipped = t.skipped;
            Box::new(t)
        }
        (Method::ClosedForm, Picture::Schrodinger) => {
            let cf = SpinOrbitSchrodinger::new(s.state(&basis)?.field(), spec.g, spec.eps_l)?;
            let t = SchrodingerClosedForm::new(cf, &points)?;
            skipped = t.skipped;
            Box::new(t)
        }
        (Method::Series, Picture::Heisenberg) => {
            let h = s.hamiltonian(&basis)?;
            let a0 = s.observable(&basis)?;
            let t = SteppedSeries::new(&a0, dt, spec.coarse_steps, spec.order, |x| heisenberg_bracket(x, &h), &points)?;
            remainder = Some(t.remainder);
            Box::new(t)
        }
        (Method::Series, Picture::Schrodinger) => {
            let h = s.hamiltonian(&basis)?;
            let rho = s.state(&basis)?;
            let t = SteppedSeries::new(
                rho.field(),
                dt,
                spec.coarse_steps,
                spec.order,
                |r| schrodinger_bracket(&h, r),
                &points,
            )?;
            remainder = Some(t.remainder);
            Box::new(t)
        }
    };
    if skipped > 0 {
        out.notes
            .push(format!("skipped {skipped} points on the |L| = 0 locus"));
    }
    let report = match violation_time_with_steps(traj.as_ref(), spec.t_max, spec.tol, spec.coarse_steps) {
        Ok(r) => r,
        Err(Error::NotPositive(m)) => {
            out.checks.push(Check::new(
                "initial positivity",
                false,
                format!("initial global margin {}", num(m)),
            ));
            return Ok(out);
        }
        Err(e) => return Err(e),
    };

    let mut curve = CsvTable::new(&["t", "global_margin"])?;
    for (t, m) in &report.margin_curve {
        curve.row(&[num(*t), num(*m)])?;
    }
    out.files.push(curve.finish("margin_curve.csv")?);

    let scan_t = report.t_star.unwrap_or(spec.t_max);
    let scan = traj.scan(scan_t)?;
    let mut header = vec!["point_id".to_string()];
    header.extend(coord_header(s.n_c));
    header.push("min_eig".into());
    let mut table = CsvTable::new(&header)?;
    for (i, (p, m)) in scan.points.iter().zip(&scan.margins).enumerate() {
        let mut row = vec![i.to_string()];
        row.extend(coords(p));
        row.push(num(*m));
        table.row(&row)?;
    }
    out.files.push(table.finish("positivity_scan.csv")?);
    out.files.push(Artifact::json(
        "violation.json",
        &json!({
            "picture": spec.picture.name(),
            "t_star": report.t_star,
            "witness_point": report.witness_point,
            "initial_margin": report.initial_margin,
            "margin_curve": report.margin_curve,
            "scan_time": scan_t,
            "skipped_points": skipped,
            "series_remainder": remainder,
        }),
    )?);

    let found = report.t_star.is_some();
    let detail = match report.t_star {
        Some(t) => format!("violation at t* = {} (tol {})", num(t), num(spec.tol)),
        None => format!("no violation up to t_max = {}", num(spec.t_max)),
    };
    let passed = match spec.expect {
        Expectation::Violation => found,
        Expectation::None => !found,
    };
    out.checks.push(Check::new("positivity expectation", passed, detail));
    Ok(out)
}

pub fn run_jacobi(s: &Scenario) -> Result<RunOutput> {
    let spec = s
        .jacobi
        .clone()
        .ok_or_else(|| Error::Config("missing [jacobi] section".into()))?;
    let seed = s.require_seed()?;
    let mut out = RunOutput::default();
    let mut table = CsvTable::new(&["bracket", "n", "trial", "residual", "scale", "scaled", "antisymmetry"])?;
    let mut summary = Vec::new();
    for &n in &spec.ns {
        let basis = build_basis(n, s.hbar)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(n as u64));
        let triples: Vec<[HybridObservable; 3]> = (0..spec.triples)
            .map(|_| [0, 1, 2].map(|_| random_observable(&mut rng, &basis, s.n_c, spec.max_degree, spec.max_terms)))
            .collect();
        for &kind in &spec.brackets {
            let rows = map_indexed(&triples, |_, [a, b, c]| -> Result<[f64; 3]> {
                let r = jacobi_residual(kind, a, b, c)?;
                let (ca, cb) = (a.to_complex(), b.to_complex());
                let anti = apply_bracket(kind, &ca, &cb)?
                    .add(&apply_bracket(kind, &cb, &ca)?)?
                    .norm()
                    / (a.norm() * b.norm()).max(1.0);
                Ok([r, jacobi_scale(a, b, c), anti])
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            let mut worst = (0usize, 0.0f64);
            let mut worst_anti = 0.0f64;
            for (i, [r, scale, anti]) in rows.iter().enumerate() {
                let scaled = r / scale;
                if scaled > worst.1 {
                    worst = (i, scaled);
                }
                worst_anti = worst_anti.max(*anti);
                table.row(&[kind.name(), n.to_string(), i.to_string(), num(*r), num(*scale), num(scaled), num(*anti)])?;
            }
            let passed = worst.1 < spec.tol;
            summary.push(json!({
                "bracket": kind.name(), "n": n, "max_scaled_residual": worst.1,
                "max_antisymmetry": worst_anti, "passed": passed,
            }));
            out.checks.push(Check::new(
                format!("jacobi {} n={n}", kind.name()),
                passed,
                format!("max scaled residual {} (tol {})", num(worst.1), num(spec.tol)),
            ));
            if !passed {
                let [a, b, c] = &triples[worst.0];
                let witness = JacobiWitness {
                    bracket: kind,
                    seed,
                    trials: spec.triples,
                    residual: rows[worst.0][0],
                    a: ObservableRecord::from_observable(a),
                    b: ObservableRecord::from_observable(b),
                    c: ObservableRecord::from_observable(c),
                };
                let name = format!("witness_{}_n{n}.json", file_stem(&kind));
                out.files.push(Artifact::json(name, &witness)?);
            }
        }
    }
    out.files.push(table.finish("jacobi_residuals.csv")?);
    out.files.push(Artifact::json("jacobi_summary.json", &summary)?);
    Ok(out)
}

fn file_stem(kind: &BracketKind) -> String {
    kind.name()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}

pub fn run_uniqueness(s: &Scenario) -> Result<RunOutput> {
    let spec = s
        .uniqueness
        .clone()
        .ok_or_else(|| Error::Config("missing [uniqueness] section".into()))?;
    let seed = s.require_seed()?;
    let mut out = RunOutput::default();
    let nodes = grid(spec.lo, spec.hi, spec.grid_points);
    let mut landscape_summary = Vec::new();
    let mut tensors = Vec::new();
    for &n in &spec.ns {
        let basis = build_basis(n, 1.0)?;
        let scan = ansatz_jacobi_scan(n, &nodes, spec.instances, seed)?;
        let mut table = CsvTable::new(&["alpha", "beta", "gamma", "residual"])?;
        for r in &scan {
            table.row(&[num(r.alpha), num(r.beta), num(r.gamma), num(r.residual)])?;
        }
        out.files.push(table.finish(format!("landscape_n{n}.csv"))?);

        let degenerate = degenerate_nodes(&basis, &scan, spec.threshold);
        let canonical = scan
            .iter()
            .find(|r| r.alpha == 0.0 && r.beta == 1.0 && r.gamma == 0.0)
            .map(|r| r.residual)
            .expect("grid contains the canonical node");
        let others = scan
            .iter()
            .enumerate()
            .filter(|(i, r)| r.alpha.abs() + r.gamma.abs() >= spec.threshold && !degenerate.contains(i));
        let (min_other, at) = others.fold((f64::INFINITY, None), |(m, at), (_, r)| {
            if r.residual < m {
                (r.residual, Some([r.alpha, r.beta, r.gamma]))
            } else {
                (m, at)
            }
        });
        let degenerate_nodes: Vec<[f64; 3]> = degenerate
            .iter()
            .map(|&i| [scan[i].alpha, scan[i].beta, scan[i].gamma])
            .collect();
        if !degenerate_nodes.is_empty() {
            out.notes.push(format!(
                "n={n}: {} nodes have gamma inert (d vanishes) and were excluded from the gap check",
                degenerate_nodes.len()
            ));
        }
        out.checks.push(Check::new(
            format!("canonical node n={n}"),
            canonical < spec.canonical_tol,
            format!("residual {}", num(canonical)),
        ));
        out.checks.push(Check::new(
            format!("off-canonical gap n={n}"),
            min_other > spec.gap,
            format!("min residual {} at {:?}", num(min_other), at),
        ));
        landscape_summary.push(json!({
            "n": n, "canonical_residual": canonical, "min_off_canonical": min_other,
            "min_off_canonical_at": at, "degenerate_nodes": degenerate_nodes,
        }));

        let t = tensor_basis_check(n)?;
        let expected_rank = match n {
            2 => 3,
            3 => 8,
            _ => 9,
        };
        out.checks.push(Check::new(
            format!("tensor rank n={n}"),
            t.gram_rank == expected_rank,
            format!("rank {} (expected {expected_rank})", t.gram_rank),
        ));
        if let Some(res) = t.identity_residual {
            out.checks.push(Check::new(
                "n=3 tensor identity",
                res < 1e-12,
                format!("residual {}", num(res)),
            ));
        }
        tensors.push(t);
    }
    out.files.push(Artifact::json("uniqueness_summary.json", &landscape_summary)?);
    out.files.push(Artifact::json("tensors.json", &tensors)?);

    let samples = functional_samples(spec.functional_samples, spec.lo, spec.hi);
    let affine = functional_equation_residual(|v| 2.0 * v + 3.0, &samples);
    let square = functional_equation_residual(|v| v * v, &samples);
    out.checks.push(Check::new("functional equation, affine", affine < 1e-12, num(affine)));
    out.checks.push(Check::new("functional equation, square", square > 1.0, num(square)));

    let waves = plane_waves();
    let probes = probe_points(2, 8);
    let product = |a: &PlaneWave, b: &PlaneWave, p: &PhasePoint| Ok(a.evaluate(p)? * b.evaluate(p)?);
    let both = |a: &PlaneWave, b: &PlaneWave, p: &PhasePoint| Ok(poisson_at(a, b, p)? + product(a, b, p)?);
    let [r, s_, t] = &waves;
    let f_poisson = planewave_f_extraction(poisson_at, r, s_, &probes)?;
    let f_product = planewave_f_extraction(product, r, s_, &probes)?;
    let f_both = planewave_f_extraction(both, r, s_, &probes)?;
    let derivation = derivation_residual(|a, b| planewave_f_extraction(both, a, b, &probes), r, s_, t)?;
    out.checks.push(Check::new(
        "plane-wave derivation condition",
        derivation < 1e-10,
        num(derivation),
    ));
    out.files.push(Artifact::json(
        "functional_equation.json",
        &json!({
            "samples": spec.functional_samples,
            "affine_residual": affine,
            "square_residual": square,
            "v_rs": crate::classical::pairing(r, s_)?,
            "F_poisson": [f_poisson.re, f_poisson.im],
            "F_product": [f_product.re, f_product.im],
            "F_poisson_plus_product": [f_both.re, f_both.im],
            "derivation_residual": derivation,
        }),
    )?);
    Ok(out)
}

fn plane_waves() -> [PlaneWave; 3] {
    [
        PlaneWave::new(vec![0.3, -0.5], vec![0.7, 0.2]),
        PlaneWave::new(vec![-0.1, 0.4], vec![0.6, -0.9]),
        PlaneWave::new(vec![0.8, 0.1], vec![-0.3, 0.5]),
    ]
    .map(|w| w.expect("matching lengths"))
}
