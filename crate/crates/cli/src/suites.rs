//! The verification suites behind `oscinv run`.
//!
//! Every suite returns machine-readable records (pass ⇔ |value| ≤
//! tolerance) and drops plot-ready CSV/JSON artifacts into the output
//! directory. Randomized checks draw from a ChaCha stream seeded from the
//! config, so repeated runs are byte-identical.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use oscinv_core::bogoliubov::{
    canonical_form_check, coefficients_between_modes, reduced_coefficient_half_weighted,
    squeeze_parameters,
};
use oscinv_core::dynamics::{evolve_phase_point, integrate_mode, ClassicalMode};
use oscinv_core::fock::{auxiliary_forms, ladder_matrices, WaveFunctionFamily};
use oscinv_core::invariants::{
    poisson_bracket_numeric, unit_mass_coordinates, wrap_angle, InvariantFrame,
    QuadraticInvariantSpec,
};
use oscinv_core::phase::{
    dirac_phase, extended_phase_operator, lerner_check, lerner_check_full, pegg_barnett,
    pegg_barnett_exponential, phase_distribution, registry, susskind_glogower,
};

use crate::config::RunConfig;
use crate::report::ReportRecord;

fn suite_rng(config: &RunConfig, salt: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(config.seed ^ salt)
}

fn csv_writer(dir: &Path, name: &str) -> anyhow::Result<BufWriter<File>> {
    let path = dir.join(name);
    Ok(BufWriter::new(
        File::create(&path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

/// Build the primary mode/frame pair from the first configured seed.
pub fn build_frame(config: &RunConfig) -> anyhow::Result<InvariantFrame> {
    let seed = &config.seeds[0];
    let mode = integrate_mode(
        &config.profile,
        seed.u0(),
        seed.udot0(),
        config.t_span,
        config.rel_tol,
    )?
    .normalized()?;
    Ok(InvariantFrame::new(mode)?)
}

/// `simulate`: integrate the configured mode and a probe trajectory,
/// dump both as CSV, and record the integration health checks.
pub fn suite_simulate(config: &RunConfig, dir: &Path) -> anyhow::Result<Vec<ReportRecord>> {
    let frame = build_frame(config)?;
    let mode = frame.mode();
    let mut out = csv_writer(dir, "mode.csv")?;
    mode.write_csv(&mut out)?;

    // canonical probe point for the flow export
    let (q0, p0) = (1.0, 0.0);
    let traj = evolve_phase_point(&config.profile, q0, p0, config.t_span, config.rel_tol)?;
    let mut out = csv_writer(dir, "trajectory.csv")?;
    traj.write_csv(&mut out)?;

    Ok(vec![
        ReportRecord::new("simulate", "wronskian_drift", mode.wronskian_drift(), 1e-8)
            .with_meta("profile", &config.profile_name),
        ReportRecord::new(
            "simulate",
            "wronskian_normalization",
            mode.normalization_deviation(),
            1e-9,
        ),
    ])
}

/// `invariants-check`: drift along random trajectories, canonical
/// brackets, phase identities, the area law, and the reconstruction
/// round trip.
pub fn suite_invariants(config: &RunConfig, dir: &Path) -> anyhow::Result<Vec<ReportRecord>> {
    let mut rng = suite_rng(config, 0x11);
    let frame = build_frame(config)?;
    let (t0, t1) = config.t_span;
    let span = t1 - t0;
    let mut records = Vec::new();

    let quad = QuadraticInvariantSpec::new(
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        rng.random_range(0.5..2.0),
    );

    let mut drift_linear: f64 = 0.0;
    let mut drift_product: f64 = 0.0;
    let mut drift_quad: f64 = 0.0;
    let mut drift_vartheta: f64 = 0.0;
    let mut first_rows: Vec<(f64, f64, f64, f64, f64, f64, f64)> = Vec::new();
    let n_traj = 5;
    let mut done = 0;
    while done < n_traj {
        let q0 = rng.random_range(-2.0..2.0);
        let p0 = rng.random_range(-2.0..2.0);
        if frame.action_phase(q0, p0, t0)?.action < 0.05 {
            continue;
        }
        done += 1;
        let traj = evolve_phase_point(&config.profile, q0, p0, config.t_span, config.rel_tol)?;
        let (a1_0, a2_0) = frame.eval_real_pair(q0, p0, t0)?;
        let ap0 = frame.action_phase(q0, p0, t0)?;
        let angles0 = ap0.angles.expect("action bounded away from zero");
        let theta_u0 = frame.mode().theta_u(t0)?;
        let quad0 = quad.eval(a1_0, a2_0);
        let mut running_max: f64 = 0.0;
        for k in 0..=100 {
            let t = t0 + span * k as f64 / 100.0;
            let (q, p) = traj.qp(t)?;
            let (a1, a2) = frame.eval_real_pair(q, p, t)?;
            let ap = frame.action_phase(q, p, t)?;
            let angles = ap.angles.expect("invariant amplitude stays nonzero");
            let theta_u = frame.mode().theta_u(t)?;
            let step_drift = (a1 - a1_0)
                .abs()
                .max((a2 - a2_0).abs())
                .max((ap.action - ap0.action).abs())
                .max(wrap_angle(angles.theta_a - angles0.theta_a).abs());
            drift_linear = drift_linear.max(step_drift);
            drift_product = drift_product.max((a1 * a2 - a1_0 * a2_0).abs());
            drift_quad = drift_quad.max((quad.eval(a1, a2) - quad0).abs());
            drift_vartheta = drift_vartheta.max(
                wrap_angle((angles.vartheta + theta_u) - (angles0.vartheta + theta_u0)).abs(),
            );
            if done == 1 {
                running_max = running_max.max(step_drift);
                first_rows.push((
                    t,
                    a1,
                    a2,
                    ap.action,
                    angles.theta,
                    angles.vartheta,
                    running_max,
                ));
            }
        }
    }
    records.push(
        ReportRecord::new("invariants", "flow_drift_linear_action_phase", drift_linear, 1e-7)
            .with_meta("trajectories", n_traj),
    );
    records.push(ReportRecord::new(
        "invariants",
        "flow_drift_product_a1a2",
        drift_product,
        1e-7,
    ));
    records.push(
        ReportRecord::new("invariants", "flow_drift_quadratic_invariant", drift_quad, 1e-7)
            .with_meta("a", quad.a)
            .with_meta("b", quad.b),
    );
    records.push(ReportRecord::new(
        "invariants",
        "flow_drift_vartheta_plus_theta_u",
        drift_vartheta,
        1e-7,
    ));

    // plot data for the first trajectory
    let mut drift_csv = csv_writer(dir, "drift.csv")?;
    writeln!(drift_csv, "t,a1,a2,action")?;
    for (t, a1, a2, action, ..) in &first_rows {
        writeln!(drift_csv, "{t:.16e},{a1:.16e},{a2:.16e},{action:.16e}")?;
    }
    let mut full_csv = csv_writer(dir, "invariant_report.csv")?;
    writeln!(full_csv, "t,a1,a2,action,theta,vartheta,drift_max")?;
    for (t, a1, a2, action, theta, vartheta, dmax) in &first_rows {
        writeln!(
            full_csv,
            "{t:.16e},{a1:.16e},{a2:.16e},{action:.16e},{theta:.16e},{vartheta:.16e},{dmax:.16e}"
        )?;
    }

    // canonical brackets and phase identities at random points
    let mut pb_pair: f64 = 0.0;
    let mut pb_action_angle: f64 = 0.0;
    let mut pb_tan: f64 = 0.0;
    let mut id_theta: f64 = 0.0;
    let mut id_vartheta: f64 = 0.0;
    let mut points = 0;
    while points < 20 {
        let q = rng.random_range(-2.0..2.0);
        let p = rng.random_range(-2.0..2.0);
        let t = rng.random_range(t0..t1);
        let ap = frame.action_phase(q, p, t)?;
        let Some(angles) = ap.angles else { continue };
        if ap.action < 0.1 || angles.theta.cos().abs() < 0.45 {
            continue;
        }
        points += 1;
        let pb = poisson_bracket_numeric(
            |qq, pp| frame.eval_real_pair(qq, pp, t).unwrap().0,
            |qq, pp| frame.eval_real_pair(qq, pp, t).unwrap().1,
            q,
            p,
            1e-5,
        )?;
        pb_pair = pb_pair.max((pb - 1.0).abs());

        let center = angles.theta_a;
        let pb = poisson_bracket_numeric(
            |qq, pp| frame.eval_complex_pair(qq, pp, t).unwrap().0.norm_sqr(),
            |qq, pp| {
                let th = frame
                    .action_phase(qq, pp, t)
                    .unwrap()
                    .angles
                    .unwrap()
                    .theta_a;
                center + wrap_angle(th - center)
            },
            q,
            p,
            1e-5,
        )?;
        pb_action_angle = pb_action_angle.max((pb - 1.0).abs());

        let sec_sq = 1.0 / angles.theta.cos().powi(2);
        let pb = poisson_bracket_numeric(
            |qq, pp| frame.eval_complex_pair(qq, pp, t).unwrap().0.norm_sqr(),
            |qq, pp| {
                let (a1, a2) = frame.eval_real_pair(qq, pp, t).unwrap();
                a2 / a1
            },
            q,
            p,
            1e-5,
        )?;
        pb_tan = pb_tan.max((pb - sec_sq).abs());

        id_theta = id_theta.max(wrap_angle(angles.theta - angles.theta_a).abs());
        let theta_u = frame.mode().theta_u(t)?;
        id_vartheta =
            id_vartheta.max(wrap_angle(angles.vartheta - (angles.theta_a - theta_u)).abs());
    }
    records.push(ReportRecord::new("invariants", "pb_a1_a2_minus_1", pb_pair, 1e-5));
    records.push(ReportRecord::new(
        "invariants",
        "pb_action_theta_a_minus_1",
        pb_action_angle,
        1e-5,
    ));
    records.push(ReportRecord::new(
        "invariants",
        "pb_action_tan_theta_minus_sec2",
        pb_tan,
        1e-5,
    ));
    records.push(ReportRecord::new("invariants", "theta_equals_theta_a", id_theta, 1e-10));
    records.push(ReportRecord::new(
        "invariants",
        "vartheta_equals_theta_a_minus_theta_u",
        id_vartheta,
        1e-10,
    ));

    // area law at mid-span
    let t_mid = 0.5 * (t0 + t1);
    let est = frame.phase_space_area(1.0, t_mid, config.mc_samples, &mut rng)?;
    records.push(
        ReportRecord::new(
            "invariants",
            "area_law_abs_error",
            (est.area - std::f64::consts::TAU).abs(),
            3.0 * est.std_error,
        )
        .with_meta("samples", config.mc_samples)
        .with_meta("std_error", est.std_error),
    );

    // reconstruction round trip
    let mut roundtrip: f64 = 0.0;
    for _ in 0..20 {
        let action = rng.random_range(0.05..4.0);
        let theta_a = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let t = rng.random_range(t0..t1);
        let (q, p) = frame.reconstruct_qp(action, theta_a, t)?;
        let ap = frame.action_phase(q, p, t)?;
        roundtrip = roundtrip.max((ap.action - action).abs() / action.max(1.0));
        roundtrip = roundtrip.max(wrap_angle(ap.angles.unwrap().theta_a - theta_a).abs());
    }
    records.push(ReportRecord::new(
        "invariants",
        "action_angle_roundtrip",
        roundtrip,
        1e-9,
    ));

    // unit-mass canonical map
    let mut pb_dev: f64 = 0.0;
    let mut h_dev: f64 = 0.0;
    for _ in 0..5 {
        let q = rng.random_range(-2.0..2.0);
        let p = rng.random_range(-2.0..2.0);
        let t = rng.random_range(t0..t1);
        let pb = poisson_bracket_numeric(
            |qq, pp| unit_mass_coordinates(&config.profile, qq, pp, t).unwrap().0,
            |qq, pp| unit_mass_coordinates(&config.profile, qq, pp, t).unwrap().1,
            q,
            p,
            1e-5,
        )?;
        pb_dev = pb_dev.max((pb - 1.0).abs());
        let (qq, pp) = unit_mass_coordinates(&config.profile, q, p, t)?;
        let omega_sq =
            config.profile.x(t) * config.profile.z(t) - config.profile.y(t).powi(2);
        let h_red = 0.5 * pp * pp + 0.5 * omega_sq * qq * qq;
        let h = config.profile.hamiltonian_value(q, p, t)?;
        h_dev = h_dev.max((h_red - h).abs() / h.abs().max(1.0));
    }
    records.push(ReportRecord::new("invariants", "unit_mass_pb_minus_1", pb_dev, 1e-6));
    records.push(ReportRecord::new(
        "invariants",
        "unit_mass_hamiltonian_match",
        h_dev,
        1e-10,
    ));

    Ok(records)
}

#[derive(Serialize)]
struct ResidualRecord {
    profile: String,
    n: usize,
    t: f64,
    residual: f64,
}

/// `quantum-check`: orthonormality, Schrödinger residuals, ladder and
/// vacuum identities, geometric-phase equality, auxiliary forms.
pub fn suite_quantum(config: &RunConfig, dir: &Path) -> anyhow::Result<Vec<ReportRecord>> {
    let frame = build_frame(config)?;
    let fam = WaveFunctionFamily::new(frame.clone(), config.hbar, config.n_max)?;
    let (t0, t1) = config.t_span;
    let span = t1 - t0;
    let times = [t0 + 0.25 * span, t0 + 0.5 * span, t0 + 0.75 * span];
    let t_mid = times[1];
    let mut records = Vec::new();

    let n_orth = config.n_max.min(6);
    let mut orth: f64 = 0.0;
    for &t in &times {
        for n in 0..=n_orth {
            for m in 0..=n_orth {
                let ip = fam.inner_product(n, m, t)?;
                let expect = if n == m { 1.0 } else { 0.0 };
                orth = orth.max((ip - expect).norm());
            }
        }
    }
    records.push(
        ReportRecord::new("quantum", "orthonormality_max_dev", orth, 1e-9)
            .with_meta("n_max_checked", n_orth),
    );

    let mut residual_records = Vec::new();
    let mut res_max: f64 = 0.0;
    for n in 0..=config.n_max.min(3) {
        let grid = fam.default_q_grid(n, t_mid, 1024)?;
        let res = fam.schrodinger_residual(n, t_mid, &grid)?;
        res_max = res_max.max(res);
        residual_records.push(ResidualRecord {
            profile: config.profile_name.clone(),
            n,
            t: t_mid,
            residual: res,
        });
    }
    records.push(ReportRecord::new(
        "quantum",
        "schrodinger_residual_max",
        res_max,
        1e-5,
    ));
    let file = File::create(dir.join("quantum_residuals.json"))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, &residual_records)?;
    w.write_all(b"\n")?;

    let grid = fam.default_q_grid(0, t_mid, 1024)?;
    records.push(ReportRecord::new(
        "quantum",
        "vacuum_annihilation_sup",
        fam.vacuum_annihilation_sup(t_mid, &grid)?,
        1e-7,
    ));

    let grid = fam.default_q_grid(config.n_max.min(4), t_mid, 512)?;
    let mut chain: f64 = 0.0;
    for n in 1..=config.n_max.min(4) {
        chain = chain.max(fam.raising_chain_max_diff(n, t_mid, &grid)?);
    }
    records.push(ReportRecord::new(
        "quantum",
        "raising_chain_max_diff",
        chain,
        1e-7,
    ));

    let mut geo: f64 = 0.0;
    for n in 0..=config.n_max.min(3) {
        let (lhs, rhs) = fam.geometric_phase_check(n, t_mid)?;
        geo = geo.max((lhs.re - rhs.re).abs()).max(lhs.im.abs()).max(rhs.im.abs());
    }
    records.push(ReportRecord::new(
        "quantum",
        "geometric_vs_dynamical_phase",
        geo,
        1e-6,
    ));

    let aux = auxiliary_forms(&frame)?;
    records.push(ReportRecord::new(
        "quantum",
        "zeta_equation_residual",
        aux.zeta_residual_max,
        1e-5,
    ));
    records.push(ReportRecord::new(
        "quantum",
        "xi_equation_residual",
        aux.xi_residual_max,
        1e-5,
    ));
    records.push(ReportRecord::new(
        "quantum",
        "theta_rate_identity_dev",
        aux.theta_zeta_rate_max_dev.max(aux.theta_xi_rate_max_dev),
        1e-8,
    ));

    // wavefunction slices for plotting
    for n in 0..=config.n_max.min(3) {
        let qs = fam.default_q_grid(n, t_mid, 512)?;
        let psi = fam.psi_row(n, t_mid, &qs)?;
        let mut out = csv_writer(dir, &format!("psi_n{n}_t{t_mid}.csv"))?;
        writeln!(out, "q,re_psi,im_psi,abs2")?;
        for (q, v) in qs.iter().zip(&psi) {
            writeln!(out, "{q:.16e},{:.16e},{:.16e},{:.16e}", v.re, v.im, v.norm_sqr())?;
        }
    }

    Ok(records)
}

/// Build one squeeze record: parameters, both reduced-coefficient
/// variants, and the canonical-form interior residual.
pub fn squeeze_record(a: Complex64, b: f64, dim: usize) -> anyhow::Result<SqueezeRecordPublic> {
    let spec = squeeze_parameters(a, b)?;
    let residual = canonical_form_check(a, b, dim)?;
    let alt = reduced_coefficient_half_weighted(a, b, spec.r, spec.delta);
    Ok(SqueezeRecordPublic {
        a_re: a.re,
        a_im: a.im,
        b,
        r: spec.r,
        delta: spec.delta,
        b_tilde: spec.b_tilde,
        b_tilde_half_weighted: alt,
        half_weighted_minus_verified: alt - spec.b_tilde,
        residual,
        dim,
    })
}

/// Public shape of a squeeze record (also used by the standalone
/// `squeeze` subcommand).
#[derive(Serialize)]
pub struct SqueezeRecordPublic {
    #[serde(rename = "A_re")]
    pub a_re: f64,
    #[serde(rename = "A_im")]
    pub a_im: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub r: f64,
    pub delta: f64,
    #[serde(rename = "B_tilde")]
    pub b_tilde: f64,
    #[serde(rename = "B_tilde_half_weighted")]
    pub b_tilde_half_weighted: f64,
    pub half_weighted_minus_verified: f64,
    pub residual: f64,
    pub dim: usize,
}

/// `squeeze`: Bogoliubov coefficients between configured modes, squeeze
/// parameters at the reference point and random elliptic parameters, and
/// the documented-discrepancy records.
pub fn suite_squeeze(config: &RunConfig, dir: &Path) -> anyhow::Result<Vec<ReportRecord>> {
    let mut rng = suite_rng(config, 0x22);
    let mut records = Vec::new();

    // mode pair: second configured seed if present, otherwise a
    // constructed mixture of the first
    let u = integrate_mode(
        &config.profile,
        config.seeds[0].u0(),
        config.seeds[0].udot0(),
        config.t_span,
        config.rel_tol,
    )?
    .normalized()?;
    let v: ClassicalMode = if config.seeds.len() >= 2 {
        integrate_mode(
            &config.profile,
            config.seeds[1].u0(),
            config.seeds[1].udot0(),
            config.t_span,
            config.rel_tol,
        )?
        .normalized()?
    } else {
        let r0: f64 = 0.3;
        let (u0, du0) = (u.u(config.t_span.0)?, u.udot(config.t_span.0)?);
        integrate_mode(
            &config.profile,
            r0.cosh() * u0 + r0.sinh() * u0.conj(),
            r0.cosh() * du0 + r0.sinh() * du0.conj(),
            config.t_span,
            config.rel_tol,
        )?
    };
    let coeffs = coefficients_between_modes(&u, &v)?;
    records.push(
        ReportRecord::new(
            "squeeze",
            "bogoliubov_constraint_dev",
            coeffs.constraint_deviation(),
            1e-9,
        )
        .with_meta("alpha", coeffs.alpha)
        .with_meta("beta", coeffs.beta),
    );

    // reference point and random elliptic parameters
    let a_ref = Complex64::new(1.0f64.sinh(), 0.0);
    let b_ref = 1.0f64.cosh();
    let spec_ref = squeeze_parameters(a_ref, b_ref)?;
    let fixed_dev = (spec_ref.r - 0.5)
        .abs()
        .max((spec_ref.delta - std::f64::consts::PI).abs())
        .max((spec_ref.b_tilde - 1.0).abs());
    records.push(ReportRecord::new(
        "squeeze",
        "reference_point_parameters",
        fixed_dev,
        1e-8,
    ));
    records.push(
        ReportRecord::new(
            "squeeze",
            "half_weighted_discrepancy_documented",
            (reduced_coefficient_half_weighted(a_ref, b_ref, spec_ref.r, spec_ref.delta)
                - 0.5 * (1.0 - 1.0f64.sinh().powi(2)))
            .abs(),
            1e-12,
        )
        .with_meta("b_tilde_verified", spec_ref.b_tilde)
        .with_meta(
            "b_tilde_half_weighted",
            reduced_coefficient_half_weighted(a_ref, b_ref, spec_ref.r, spec_ref.delta),
        ),
    );

    let mut json_records = Vec::new();
    json_records.push(squeeze_record(a_ref, b_ref, config.dim.max(40))?);
    let mut worst_residual: f64 = 0.0;
    let mut worst_btilde: f64 = 0.0;
    for _ in 0..10 {
        // interior-60% truncation at dim 60 bounds the squeeze to r <~ 0.1
        let r: f64 = rng.random_range(0.0..0.1);
        let delta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let b_t: f64 = rng.random_range(0.5..2.0);
        let a = Complex64::from_polar(b_t * (2.0 * r).sinh(), delta);
        let b = b_t * (2.0 * r).cosh();
        let rec = squeeze_record(a, b, 60)?;
        worst_residual = worst_residual.max(rec.residual);
        worst_btilde = worst_btilde.max((rec.b_tilde - (b * b - a.norm_sqr()).sqrt()).abs());
        json_records.push(rec);
    }
    records.push(ReportRecord::new(
        "squeeze",
        "canonical_form_interior_residual",
        worst_residual,
        1e-6,
    ));
    records.push(ReportRecord::new(
        "squeeze",
        "b_tilde_closed_form_dev",
        worst_btilde,
        1e-8,
    ));

    let file = File::create(dir.join("squeeze.json"))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, &json_records)?;
    w.write_all(b"\n")?;

    Ok(records)
}

#[derive(Serialize)]
struct SchemeRecord {
    name: String,
    summary: String,
    notes: String,
    dim: usize,
    theta0: f64,
    exponential_is_hermitian: bool,
    exponential_is_unitary: bool,
    exponential_one_norm: f64,
    unitarity_deviation: f64,
    lerner_interior: f64,
    lerner_full: f64,
    angle_spectrum: Option<Vec<f64>>,
}

/// JSON payload of `phase-ops`.
#[derive(Serialize)]
pub struct PhaseOpsReport {
    pub dim: usize,
    pub theta0: f64,
    schemes: Vec<SchemeRecord>,
}

/// Build the per-scheme report for dimension `dim`; `only` restricts to a
/// single registry name.
pub fn phase_ops_report(
    dim: usize,
    theta0: f64,
    only: Option<&str>,
) -> anyhow::Result<PhaseOpsReport> {
    let (_, _, n_op) = ladder_matrices(dim);
    let mut schemes = Vec::new();
    for scheme in registry() {
        if let Some(name) = only {
            if scheme.name() != name {
                continue;
            }
        }
        let real = scheme.build(dim, theta0);
        let lerner_interior = lerner_check(&real.exponential, &n_op, 1.0)?;
        let lerner_full = lerner_check_full(&real.exponential, &n_op, 1.0)?;
        let one_norm = (0..real.exponential.dim())
            .map(|j| {
                real.exponential
                    .matrix()
                    .column(j)
                    .iter()
                    .map(|e| e.norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max);
        schemes.push(SchemeRecord {
            name: scheme.name().to_string(),
            summary: scheme.summary().to_string(),
            notes: real.notes.to_string(),
            dim,
            theta0,
            exponential_is_hermitian: real.exponential.is_hermitian(1e-12),
            exponential_is_unitary: real.exponential.is_unitary(1e-12),
            exponential_one_norm: one_norm,
            unitarity_deviation: real.exponential.unitarity_deviation(),
            lerner_interior,
            lerner_full,
            angle_spectrum: real.angle.map(|op| op.hermitian_eigenvalues()),
        });
    }
    if schemes.is_empty() {
        anyhow::bail!("no scheme matched");
    }
    Ok(PhaseOpsReport {
        dim,
        theta0,
        schemes,
    })
}

/// `phase-ops`: structural identities of every scheme plus the JSON
/// report and a phase distribution CSV.
pub fn suite_phase_ops(config: &RunConfig, dir: &Path) -> anyhow::Result<Vec<ReportRecord>> {
    let dim = config.dim;
    let theta0 = config.theta0;
    let mut records = Vec::new();

    let (e, edag) = susskind_glogower(dim);
    let lower = edag.matrix() * e.matrix();
    let mut dev: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let expect = if i == j && i > 0 { 1.0 } else { 0.0 };
            dev = dev.max((lower[(i, j)] - Complex64::new(expect, 0.0)).norm());
        }
    }
    records.push(ReportRecord::new("phase-ops", "one_sided_unitarity", dev, 0.0));

    let (pb_op, basis) = pegg_barnett(dim, theta0);
    let mut spectrum_dev: f64 = 0.0;
    let mut expected = basis.angles.clone();
    expected.sort_by(|x, y| x.partial_cmp(y).unwrap());
    for (got, want) in pb_op.hermitian_eigenvalues().iter().zip(&expected) {
        spectrum_dev = spectrum_dev.max((got - want).abs());
    }
    records.push(ReportRecord::new(
        "phase-ops",
        "pegg_barnett_spectrum_dev",
        spectrum_dev,
        1e-12,
    ));

    let dirac_dev = if dirac_phase(dim).matrix() == e.matrix() {
        0.0
    } else {
        1.0
    };
    records.push(ReportRecord::new(
        "phase-ops",
        "dirac_equals_shift",
        dirac_dev,
        0.0,
    ));

    let half = (dim / 2) as i64;
    let ext = extended_phase_operator(-half.max(1), (dim as i64 - 1 - half).max(1))?;
    records.push(ReportRecord::new(
        "phase-ops",
        "extended_operator_unitarity",
        ext.unitarity_deviation(),
        1e-15,
    ));

    let (_, _, n_op) = ladder_matrices(dim);
    records.push(ReportRecord::new(
        "phase-ops",
        "lerner_interior_residual_of_shift",
        lerner_check(&e, &n_op, config.hbar)?,
        1e-14,
    ));
    records.push(
        ReportRecord::new(
            "phase-ops",
            "lerner_full_residual_of_pegg_exponential",
            0.0,
            f64::MAX,
        )
        .with_meta(
            "value",
            lerner_check_full(&pegg_barnett_exponential(&basis), &n_op, config.hbar)?,
        )
        .with_meta("recorded", "scheme trade-off, no pass/fail attached"),
    );

    let report = phase_ops_report(dim, theta0, None)?;
    let file = File::create(dir.join("phase_ops.json"))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, &report)?;
    w.write_all(b"\n")?;

    // phase distribution of the vacuum number state: uniform by
    // construction, checked before writing
    let mut state = vec![Complex64::new(0.0, 0.0); dim];
    state[0] = Complex64::new(1.0, 0.0);
    let dist = phase_distribution(&state, &basis)?;
    let total: f64 = dist.probabilities.iter().sum();
    anyhow::ensure!((total - 1.0).abs() <= 1e-12, "distribution sums to {total}");
    let mut out = csv_writer(dir, "pegg_dist.csv")?;
    writeln!(out, "theta,probability")?;
    for (theta, p) in dist.angles.iter().zip(&dist.probabilities) {
        writeln!(out, "{theta:.16e},{p:.16e}")?;
    }

    Ok(records)
}
