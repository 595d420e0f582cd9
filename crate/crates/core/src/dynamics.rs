//! Classical mode functions and Hamiltonian flow.
//!
//! The mode equation is integrated as the first-order system
//! u̇ = X·w, ẇ = −(Ω²/X)·u with w = u̇/X, which avoids differentiating
//! X inside the stepper. The Wronskian is corrected once at t₀ and only
//! monitored afterwards; continuous renormalization would mask integrator
//! defects the verification suites are designed to expose.

use std::io::Write;

use num_complex::Complex64;

use crate::coefficients::CoefficientProfile;
use crate::error::{Error, Result};
use crate::ode::{integrate, OdeOptions, OdeSolution};

/// Allowed range for the relative tolerance arguments.
pub const REL_TOL_RANGE: (f64, f64) = (1e-12, 1e-4);

fn check_rel_tol(rel_tol: f64) -> Result<()> {
    if !(REL_TOL_RANGE.0..=REL_TOL_RANGE.1).contains(&rel_tol) {
        return Err(Error::Contract(format!(
            "rel_tol {rel_tol} outside [{}, {}]",
            REL_TOL_RANGE.0, REL_TOL_RANGE.1
        )));
    }
    Ok(())
}

/// How the stored complex container is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    /// A single complex solution u; normalization target is W = i.
    Complex,
    /// Two real solutions packed as u₁ + i·u₂; normalization target is
    /// W = 1.
    RealPair,
}

/// A solution of the classical mode equation on a time grid, with dense
/// interpolation. Immutable after integration.
#[derive(Debug, Clone)]
pub struct ClassicalMode {
    profile: CoefficientProfile,
    kind: ModeKind,
    sol: OdeSolution<4>,
    /// Unwrapped continuous phase θ_u = −arg u at the grid nodes
    /// (complex modes with nonvanishing u only).
    theta_nodes: Option<Vec<f64>>,
    seed: (Complex64, Complex64),
    opts: OdeOptions,
    wronskian_value: Complex64,
}

fn mode_rhs(profile: &CoefficientProfile, t: f64, y: &[f64; 4]) -> [f64; 4] {
    let x = profile.x(t);
    let omega_sq = {
        let (xx, yy, zz) = (x, profile.y(t), profile.z(t));
        let (dx, dy) = (profile.dx(t), profile.dy(t));
        xx * zz - yy * yy + (dx * yy - xx * dy) / xx
    };
    let (ur, ui, wr, wi) = (y[0], y[1], y[2], y[3]);
    [x * wr, x * wi, -omega_sq / x * ur, -omega_sq / x * ui]
}

fn integrate_mode_inner(
    profile: &CoefficientProfile,
    u0: Complex64,
    udot0: Complex64,
    t_span: (f64, f64),
    kind: ModeKind,
    opts: &OdeOptions,
) -> Result<ClassicalMode> {
    let (t0, t1) = t_span;
    profile.check_domain(t0)?;
    profile.check_domain(t1)?;
    let x0 = profile.x(t0);
    let w0 = udot0 / x0;
    let sol = integrate(
        |t, y| mode_rhs(profile, t, y),
        t0,
        t1,
        [u0.re, u0.im, w0.re, w0.im],
        opts,
    )?;
    let mut mode = ClassicalMode {
        profile: profile.clone(),
        kind,
        sol,
        theta_nodes: None,
        seed: (u0, udot0),
        opts: *opts,
        wronskian_value: Complex64::new(0.0, 0.0),
    };
    mode.wronskian_value = mode.wronskian_at_node(0);
    mode.theta_nodes = mode.unwrap_phase_nodes();
    Ok(mode)
}

/// Integrate the mode equation for a complex seed (u₀, u̇₀).
pub fn integrate_mode(
    profile: &CoefficientProfile,
    u0: Complex64,
    udot0: Complex64,
    t_span: (f64, f64),
    rel_tol: f64,
) -> Result<ClassicalMode> {
    check_rel_tol(rel_tol)?;
    let opts = OdeOptions {
        rel_tol,
        ..OdeOptions::default()
    };
    integrate_mode_inner(profile, u0, udot0, t_span, ModeKind::Complex, &opts)
}

/// As [`integrate_mode`] but with full integrator options.
pub fn integrate_mode_with(
    profile: &CoefficientProfile,
    u0: Complex64,
    udot0: Complex64,
    t_span: (f64, f64),
    opts: &OdeOptions,
) -> Result<ClassicalMode> {
    integrate_mode_inner(profile, u0, udot0, t_span, ModeKind::Complex, opts)
}

/// Integrate two real solutions packed as u₁ + i·u₂.
pub fn integrate_real_pair(
    profile: &CoefficientProfile,
    seed1: (f64, f64),
    seed2: (f64, f64),
    t_span: (f64, f64),
    rel_tol: f64,
) -> Result<ClassicalMode> {
    check_rel_tol(rel_tol)?;
    let opts = OdeOptions {
        rel_tol,
        ..OdeOptions::default()
    };
    integrate_mode_inner(
        profile,
        Complex64::new(seed1.0, seed2.0),
        Complex64::new(seed1.1, seed2.1),
        t_span,
        ModeKind::RealPair,
        &opts,
    )
}

impl ClassicalMode {
    pub fn profile(&self) -> &CoefficientProfile {
        &self.profile
    }

    pub fn kind(&self) -> ModeKind {
        self.kind
    }

    pub fn span(&self) -> (f64, f64) {
        (self.sol.t_start(), self.sol.t_end())
    }

    pub fn seed(&self) -> (Complex64, Complex64) {
        self.seed
    }

    pub fn grid(&self) -> &[f64] {
        &self.sol.ts
    }

    /// Wronskian recorded at t₀.
    pub fn wronskian_value(&self) -> Complex64 {
        self.wronskian_value
    }

    fn node_u(&self, i: usize) -> Complex64 {
        Complex64::new(self.sol.ys[i][0], self.sol.ys[i][1])
    }

    fn node_w(&self, i: usize) -> Complex64 {
        Complex64::new(self.sol.ys[i][2], self.sol.ys[i][3])
    }

    fn wronskian_at_node(&self, i: usize) -> Complex64 {
        let u = self.node_u(i);
        let w = self.node_w(i);
        // u̇ = X w cancels one X: (1/X)(u u̇* − u* u̇) = u w* − u* w
        match self.kind {
            ModeKind::Complex => u * w.conj() - u.conj() * w,
            ModeKind::RealPair => {
                // u₁ = Re, u₂ = Im: (1/X)(u₁ u̇₂ − u̇₁ u₂) = u₁w₂ − w₁u₂
                Complex64::new(u.re * w.im - w.re * u.im, 0.0)
            }
        }
    }

    /// Dense evaluation of u(t).
    pub fn u(&self, t: f64) -> Result<Complex64> {
        Ok(self.u_and_udot(t)?.0)
    }

    /// Dense evaluation of u̇(t) = X(t)·w(t).
    pub fn udot(&self, t: f64) -> Result<Complex64> {
        Ok(self.u_and_udot(t)?.1)
    }

    pub fn u_and_udot(&self, t: f64) -> Result<(Complex64, Complex64)> {
        let y = self.sol.eval(t)?;
        let u = Complex64::new(y[0], y[1]);
        let w = Complex64::new(y[2], y[3]);
        Ok((u, self.profile.x(t) * w))
    }

    /// ρ(t) = |u(t)| of the polar decomposition.
    pub fn rho(&self, t: f64) -> Result<f64> {
        Ok(self.u(t)?.norm())
    }

    /// Wronskian at time t: (1/X)(u u̇* − u* u̇) for a complex mode,
    /// (1/X)(u₁u̇₂ − u̇₁u₂) for a real pair.
    pub fn wronskian(&self, t: f64) -> Result<Complex64> {
        let y = self.sol.eval(t)?;
        let u = Complex64::new(y[0], y[1]);
        let w = Complex64::new(y[2], y[3]);
        Ok(match self.kind {
            ModeKind::Complex => u * w.conj() - u.conj() * w,
            ModeKind::RealPair => Complex64::new(u.re * w.im - w.re * u.im, 0.0),
        })
    }

    /// Largest deviation of the Wronskian from its t₀ value over the grid.
    pub fn wronskian_drift(&self) -> f64 {
        (0..self.sol.ts.len())
            .map(|i| (self.wronskian_at_node(i) - self.wronskian_value).norm())
            .fold(0.0, f64::max)
    }

    fn unwrap_phase_nodes(&self) -> Option<Vec<f64>> {
        if self.kind != ModeKind::Complex {
            return None;
        }
        let n = self.sol.ts.len();
        let u0 = self.node_u(0);
        if u0.norm() == 0.0 {
            return None;
        }
        let mut theta = Vec::with_capacity(n);
        theta.push(-u0.arg());
        for i in 1..n {
            let (prev, cur) = (self.node_u(i - 1), self.node_u(i));
            if cur.norm() == 0.0 {
                return None;
            }
            let delta = (cur * prev.conj()).arg();
            if delta.abs() >= std::f64::consts::PI - 1e-3 {
                return None; // grid too coarse to unwrap
            }
            theta.push(theta[i - 1] - delta);
        }
        Some(theta)
    }

    /// Continuous (unwrapped) phase θ_u(t) = −arg u(t), anchored to the
    /// principal branch at t₀.
    pub fn theta_u(&self, t: f64) -> Result<f64> {
        let nodes = self.theta_nodes.as_ref().ok_or_else(|| {
            Error::Singularity("mode phase is undefined (real pair or vanishing u)".into())
        })?;
        let i = match self
            .sol
            .ts
            .binary_search_by(|probe| probe.partial_cmp(&t).unwrap())
        {
            Ok(i) => return Ok(nodes[i]),
            Err(i) => i.clamp(1, self.sol.ts.len() - 1),
        };
        let u = self.u(t)?;
        let anchor = self.node_u(i - 1);
        let delta = (u * anchor.conj()).arg();
        Ok(nodes[i - 1] - delta)
    }

    /// Rescale so the Wronskian at t₀ equals i (complex mode) or 1 (real
    /// pair). Drift after t₀ is monitored, never re-corrected.
    pub fn normalized(&self) -> Result<ClassicalMode> {
        let w0 = self.wronskian_value;
        if w0.norm() <= 1e-12 {
            return Err(Error::DegenerateMode {
                wronskian_abs: w0.norm(),
            });
        }
        let mut out = self.clone();
        match self.kind {
            ModeKind::Complex => {
                let c = w0.im;
                if c <= 0.0 {
                    return Err(Error::WrongOrientation { value: c });
                }
                if (c - 1.0).abs() <= 1e-14 {
                    return Ok(out); // rescaling by 1 + O(ε) is pure noise
                }
                let s = 1.0 / c.sqrt();
                if s != 1.0 {
                    for y in &mut out.sol.ys {
                        for v in y.iter_mut() {
                            *v *= s;
                        }
                    }
                    for f in &mut out.sol.fs {
                        for v in f.iter_mut() {
                            *v *= s;
                        }
                    }
                    out.seed = (self.seed.0 * s, self.seed.1 * s);
                }
            }
            ModeKind::RealPair => {
                let c = w0.re;
                if (c - 1.0).abs() <= 1e-14 {
                    return Ok(out);
                }
                let s = 1.0 / c.abs().sqrt();
                let swap = c < 0.0;
                for y in out.sol.ys.iter_mut().chain(out.sol.fs.iter_mut()) {
                    if swap {
                        y.swap(0, 1);
                        y.swap(2, 3);
                    }
                    for v in y.iter_mut() {
                        *v *= s;
                    }
                }
                out.seed = if swap {
                    (
                        Complex64::new(self.seed.0.im, self.seed.0.re) * s,
                        Complex64::new(self.seed.1.im, self.seed.1.re) * s,
                    )
                } else {
                    (self.seed.0 * s, self.seed.1 * s)
                };
            }
        }
        out.wronskian_value = out.wronskian_at_node(0);
        out.theta_nodes = out.unwrap_phase_nodes();
        Ok(out)
    }

    /// Deviation of the t₀ Wronskian from its normalization target.
    pub fn normalization_deviation(&self) -> f64 {
        let target = match self.kind {
            ModeKind::Complex => Complex64::new(0.0, 1.0),
            ModeKind::RealPair => Complex64::new(1.0, 0.0),
        };
        (self.wronskian_value - target).norm()
    }

    /// Re-integrate the same mode on an exactly uniform grid of step `h`.
    /// Finite-difference residual checks read values at accepted nodes, so
    /// no interpolation error enters their stencils.
    pub fn reintegrate_uniform(&self, h: f64) -> Result<ClassicalMode> {
        let opts = OdeOptions {
            max_step: h,
            first_step: Some(h),
            ..self.opts
        };
        integrate_mode_inner(
            &self.profile,
            self.seed.0,
            self.seed.1,
            self.span(),
            self.kind,
            &opts,
        )
    }

    /// CSV dump: `t, re_u, im_u, re_udot, im_udot`, 17 significant digits.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "t,re_u,im_u,re_udot,im_udot")?;
        for (i, &t) in self.sol.ts.iter().enumerate() {
            let u = self.node_u(i);
            let udot = self.profile.x(t) * self.node_w(i);
            writeln!(
                out,
                "{t:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                u.re, u.im, udot.re, udot.im
            )?;
        }
        Ok(())
    }
}

/// A (q, p) trajectory of Hamilton's equations q̇ = Xp + Yq,
/// ṗ = −Yp − Zq.
#[derive(Debug, Clone)]
pub struct PhaseTrajectory {
    profile: CoefficientProfile,
    sol: OdeSolution<2>,
}

/// Integrate a phase-space point under the Hamiltonian flow.
pub fn evolve_phase_point(
    profile: &CoefficientProfile,
    q0: f64,
    p0: f64,
    t_span: (f64, f64),
    rel_tol: f64,
) -> Result<PhaseTrajectory> {
    check_rel_tol(rel_tol)?;
    let (t0, t1) = t_span;
    profile.check_domain(t0)?;
    profile.check_domain(t1)?;
    let opts = OdeOptions {
        rel_tol,
        ..OdeOptions::default()
    };
    let sol = integrate(
        |t, y: &[f64; 2]| {
            let (x, yy, z) = (profile.x(t), profile.y(t), profile.z(t));
            [x * y[1] + yy * y[0], -yy * y[1] - z * y[0]]
        },
        t0,
        t1,
        [q0, p0],
        &opts,
    )?;
    Ok(PhaseTrajectory {
        profile: profile.clone(),
        sol,
    })
}

impl PhaseTrajectory {
    pub fn profile(&self) -> &CoefficientProfile {
        &self.profile
    }

    pub fn span(&self) -> (f64, f64) {
        (self.sol.t_start(), self.sol.t_end())
    }

    pub fn grid(&self) -> &[f64] {
        &self.sol.ts
    }

    pub fn qp(&self, t: f64) -> Result<(f64, f64)> {
        let y = self.sol.eval(t)?;
        Ok((y[0], y[1]))
    }

    /// CSV dump: `t, q, p`, 17 significant digits.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "t,q,p")?;
        for (i, &t) in self.sol.ts.iter().enumerate() {
            writeln!(out, "{t:.16e},{:.16e},{:.16e}", self.sol.ys[i][0], self.sol.ys[i][1])?;
        }
        Ok(())
    }
}

/// Seed (u₀, u̇₀) whose mode reduces, for constant coefficients with
/// frequency ω₀, to u(t) = e^{−iω₀t}/√(2ω₀). The seed applies at t = 0;
/// use [`stationary_seed_at`] for other start times.
pub fn stationary_seed(omega0: f64) -> (Complex64, Complex64) {
    stationary_seed_at(omega0, 0.0)
}

/// Value and derivative of e^{−iω₀t}/√(2ω₀) at t₀.
pub fn stationary_seed_at(omega0: f64, t0: f64) -> (Complex64, Complex64) {
    let u0 = Complex64::from_polar(1.0 / (2.0 * omega0).sqrt(), -omega0 * t0);
    (u0, Complex64::new(0.0, -omega0) * u0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{caldirola_kanai, constant, cross_term, pumped};
    use approx::assert_relative_eq;

    const SQRT2_INV: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn stationary_mode(t1: f64) -> ClassicalMode {
        let p = constant(1.0);
        let (u0, udot0) = stationary_seed(1.0);
        integrate_mode(&p, u0, udot0, (0.0, t1), 1e-10).unwrap()
    }

    #[test]
    fn constant_mode_matches_closed_form() {
        let mode = stationary_mode(2.0 * std::f64::consts::PI);
        for k in 0..=400 {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 400.0 + 1e-3 * (k % 3) as f64;
            let t = t.min(2.0 * std::f64::consts::PI);
            let expect = Complex64::new(0.0, -t).exp() * SQRT2_INV;
            assert!(
                (mode.u(t).unwrap() - expect).norm() <= 1e-8,
                "mismatch at t = {t}"
            );
        }
    }

    #[test]
    fn caldirola_kanai_matches_damped_oscillator() {
        // u directly obeys ü + γu̇ + ω₀²u = 0; normalized closed form is
        // e^{−γt/2}e^{−iω̄t}/√(2ω̄), ω̄² = ω₀² − γ²/4
        let (gamma, omega0): (f64, f64) = (0.2, 1.0);
        let omega_bar = (omega0 * omega0 - 0.25 * gamma * gamma).sqrt();
        let norm = 1.0 / (2.0 * omega_bar).sqrt();
        let u0 = Complex64::new(norm, 0.0);
        let udot0 = u0 * Complex64::new(-0.5 * gamma, -omega_bar);
        let p = caldirola_kanai(gamma, omega0);
        let mode = integrate_mode(&p, u0, udot0, (0.0, 20.0), 1e-10).unwrap();
        for k in 0..=200 {
            let t = 0.1 * k as f64;
            let expect =
                norm * (-0.5 * gamma * t).exp() * Complex64::new(0.0, -omega_bar * t).exp();
            assert!(
                (mode.u(t).unwrap() - expect).norm() <= 1e-7,
                "mismatch at t = {t}"
            );
        }
        assert!((mode.wronskian(13.7).unwrap() - Complex64::new(0.0, 1.0)).norm() < 1e-8);
    }

    #[test]
    fn zero_seed_gives_zero_solution() {
        let p = constant(1.0);
        let zero = Complex64::new(0.0, 0.0);
        let mode = integrate_mode(&p, zero, zero, (0.0, 5.0), 1e-10).unwrap();
        assert_eq!(mode.u(2.5).unwrap(), zero);
        assert!(matches!(
            mode.normalized(),
            Err(Error::DegenerateMode { .. })
        ));
    }

    #[test]
    fn wronskian_of_stationary_mode_is_i() {
        let mode = stationary_mode(10.0);
        for t in [0.0, 1.3, 5.5, 10.0] {
            let w = mode.wronskian(t).unwrap();
            assert!((w - Complex64::new(0.0, 1.0)).norm() < 1e-9, "W({t}) = {w}");
        }
    }

    #[test]
    fn real_pair_sin_cos_has_negative_wronskian() {
        // u₁ = sin t, u₂ = cos t with X = 1: u₁u̇₂ − u̇₁u₂ = −1
        let p = constant(1.0);
        let mode = integrate_real_pair(&p, (0.0, 1.0), (1.0, 0.0), (0.0, 6.0), 1e-10).unwrap();
        let w = mode.wronskian(2.0).unwrap();
        assert_relative_eq!(w.re, -1.0, epsilon = 1e-9);
        // ordering matters: normalization swaps the pair
        let fixed = mode.normalized().unwrap();
        assert_relative_eq!(fixed.wronskian(2.0).unwrap().re, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn wronskian_scales_quadratically() {
        let p = constant(1.0);
        let (u0, udot0) = stationary_seed(1.0);
        let lambda = 1.7;
        let base = integrate_mode(&p, u0, udot0, (0.0, 1.0), 1e-10).unwrap();
        let scaled =
            integrate_mode(&p, u0 * lambda, udot0 * lambda, (0.0, 1.0), 1e-10).unwrap();
        let ratio = scaled.wronskian(0.5).unwrap() / base.wronskian(0.5).unwrap();
        assert_relative_eq!(ratio.re, lambda * lambda, epsilon = 1e-9);
    }

    #[test]
    fn normalize_rescales_to_unit_wronskian() {
        // u = e^{−it} has W = 2i; normalization rescales by 1/√2
        let p = constant(1.0);
        let u0 = Complex64::new(1.0, 0.0);
        let udot0 = Complex64::new(0.0, -1.0);
        let mode = integrate_mode(&p, u0, udot0, (0.0, 3.0), 1e-10).unwrap();
        assert!((mode.wronskian_value() - Complex64::new(0.0, 2.0)).norm() < 1e-10);
        let norm = mode.normalized().unwrap();
        assert!((norm.u(0.0).unwrap() - Complex64::new(SQRT2_INV, 0.0)).norm() < 1e-12);
        assert!(norm.normalization_deviation() < 1e-14);
        // already-normalized input comes back unchanged
        let again = norm.normalized().unwrap();
        assert_eq!(again.u(1.0).unwrap(), norm.u(1.0).unwrap());
    }

    #[test]
    fn real_valued_mode_is_degenerate() {
        let p = constant(1.0);
        let mode = integrate_mode(
            &p,
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            (0.0, 2.0),
            1e-10,
        )
        .unwrap();
        assert!(matches!(
            mode.normalized(),
            Err(Error::DegenerateMode { .. })
        ));
    }

    #[test]
    fn conjugate_seed_is_rejected_with_orientation_error() {
        let p = constant(1.0);
        let (u0, udot0) = stationary_seed(1.0);
        let mode =
            integrate_mode(&p, u0.conj(), udot0.conj(), (0.0, 2.0), 1e-10).unwrap();
        assert!(matches!(
            mode.normalized(),
            Err(Error::WrongOrientation { .. })
        ));
    }

    #[test]
    fn evolve_constant_rotates() {
        let p = constant(1.0);
        let traj = evolve_phase_point(&p, 1.0, 0.0, (0.0, 2.0), 1e-10).unwrap();
        let (q, pp) = traj.qp(std::f64::consts::FRAC_PI_2).unwrap();
        assert!(q.abs() < 1e-8);
        assert!((pp + 1.0).abs() < 1e-8);
    }

    #[test]
    fn evolve_fixed_point_stays() {
        let p = constant(1.0);
        let traj = evolve_phase_point(&p, 0.0, 0.0, (0.0, 7.0), 1e-10).unwrap();
        let (q, pp) = traj.qp(6.3).unwrap();
        assert_eq!((q, pp), (0.0, 0.0));
    }

    #[test]
    fn evolve_pumped_self_converges() {
        let p = pumped(1.0, 0.1, 2.0);
        let rel_tol = 1e-10;
        let a = evolve_phase_point(&p, 1.0, 0.0, (0.0, 10.0), rel_tol).unwrap();
        let fine = {
            let opts = OdeOptions {
                rel_tol: rel_tol * 1e-2,
                max_step: 0.01,
                ..OdeOptions::default()
            };
            integrate(
                |t, y: &[f64; 2]| {
                    let (x, yy, z) = (p.x(t), p.y(t), p.z(t));
                    [x * y[1] + yy * y[0], -yy * y[1] - z * y[0]]
                },
                0.0,
                10.0,
                [1.0, 0.0],
                &opts,
            )
            .unwrap()
        };
        let (q, pp) = a.qp(10.0).unwrap();
        let y = fine.eval(10.0).unwrap();
        assert!((q - y[0]).abs() <= 10.0 * rel_tol * q.abs().max(1.0));
        assert!((pp - y[1]).abs() <= 10.0 * rel_tol * pp.abs().max(1.0));
    }

    #[test]
    fn energy_conserved_for_time_independent_profiles() {
        for p in [constant(1.0), cross_term(1.0, 0.5)] {
            let traj = evolve_phase_point(&p, 1.0, 0.3, (0.0, 20.0), 1e-10).unwrap();
            let e0 = p.hamiltonian_value(1.0, 0.3, 0.0).unwrap();
            for k in 0..=100 {
                let t = 0.2 * k as f64;
                let (q, pp) = traj.qp(t).unwrap();
                let e = p.hamiltonian_value(q, pp, t).unwrap();
                assert!((e - e0).abs() < 1e-8, "{} at t = {t}", p.name());
            }
        }
    }

    #[test]
    fn mode_is_linear_in_seed() {
        let p = pumped(1.0, 0.1, 2.0);
        let (ua, da) = (Complex64::new(0.4, -0.1), Complex64::new(0.0, -0.5));
        let (ub, db) = (Complex64::new(-0.2, 0.3), Complex64::new(0.7, 0.1));
        let (alpha, beta) = (Complex64::new(1.3, 0.2), Complex64::new(-0.4, 0.9));
        let ma = integrate_mode(&p, ua, da, (0.0, 8.0), 1e-10).unwrap();
        let mb = integrate_mode(&p, ub, db, (0.0, 8.0), 1e-10).unwrap();
        let mc = integrate_mode(
            &p,
            alpha * ua + beta * ub,
            alpha * da + beta * db,
            (0.0, 8.0),
            1e-10,
        )
        .unwrap();
        for k in 0..=80 {
            let t = 0.1 * k as f64;
            let combo = alpha * ma.u(t).unwrap() + beta * mb.u(t).unwrap();
            assert!((mc.u(t).unwrap() - combo).norm() < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn wronskian_drift_stays_small_over_long_spans() {
        for p in [
            constant(1.0),
            caldirola_kanai(0.2, 1.0),
            pumped(1.0, 0.1, 2.0),
            cross_term(1.0, 0.5),
        ] {
            let (u0, udot0) = stationary_seed(1.0);
            let mode = integrate_mode(&p, u0, udot0, (0.0, 20.0), 1e-10)
                .unwrap()
                .normalized()
                .unwrap();
            assert!(
                mode.wronskian_drift() <= 1e-8,
                "{}: drift {}",
                p.name(),
                mode.wronskian_drift()
            );
        }
    }

    #[test]
    fn theta_u_is_continuous_and_linear_for_constant() {
        let mode = stationary_mode(15.0);
        for k in 0..=150 {
            let t = 0.1 * k as f64;
            assert!(
                (mode.theta_u(t).unwrap() - t).abs() < 1e-8,
                "θ_u({t}) = {}",
                mode.theta_u(t).unwrap()
            );
        }
    }

    #[test]
    fn rel_tol_range_enforced() {
        let p = constant(1.0);
        let (u0, udot0) = stationary_seed(1.0);
        assert!(integrate_mode(&p, u0, udot0, (0.0, 1.0), 1.0).is_err());
        assert!(evolve_phase_point(&p, 1.0, 0.0, (0.0, 1.0), 1e-13).is_err());
    }

    #[test]
    fn csv_headers() {
        let mode = stationary_mode(1.0);
        let mut buf = Vec::new();
        mode.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,re_u,im_u,re_udot,im_udot\n"));
        let p = constant(1.0);
        let traj = evolve_phase_point(&p, 1.0, 0.0, (0.0, 1.0), 1e-10).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("t,q,p\n"));
    }
}
