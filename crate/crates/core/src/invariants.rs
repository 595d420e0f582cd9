//! Linear and quadratic invariants and action-phase variables.
//!
//! A Wronskian-normalized complex mode u defines the linear invariant
//! a(q, p, t) = i{u*p − (1/X)(u̇* − Yu*)q}, constant along the Hamiltonian
//! flow. Splitting u = (iu₁ + u₂)/√2 gives the real pair
//! aᵢ = uᵢp − (1/X)(u̇ᵢ − Yuᵢ)q. The action is 𝓘 = |a|² = (a₁² + a₂²)/2;
//! its conjugate angle has three equivalent realizations, all computed
//! here with two-argument arctangents into (−π, π].

use num_complex::Complex64;
use rand::Rng;

use crate::coefficients::CoefficientProfile;
use crate::dynamics::{ClassicalMode, ModeKind};
use crate::error::{Error, Result};

const TAU: f64 = std::f64::consts::TAU;

/// Wrap an angle into (−π, π].
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > std::f64::consts::PI {
        y - TAU
    } else {
        y
    }
}

/// Cumulative 2π-corrected copy of an angle series, continuous in the
/// index. The windowed values stay available through [`wrap_angle`].
pub fn unwrap_angles(series: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(series.len());
    let mut offset = 0.0;
    for (i, &theta) in series.iter().enumerate() {
        if i > 0 {
            let jump = theta + offset - out[i - 1];
            offset -= TAU * (jump / TAU).round();
        }
        out.push(theta + offset);
    }
    out
}

/// Angle variables of one phase-space point. `None` when the action
/// vanishes: a phase cannot be assigned to a(t) = 0, and callers must
/// branch on that deliberately rather than meet a NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionPhase {
    pub action: f64,
    pub angles: Option<PhaseAngles>,
}

/// The three equivalent phase realizations, each in (−π, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseAngles {
    /// atan2(a₂, a₁) in the invariant plane.
    pub theta: f64,
    /// arg a, the polar phase of the complex invariant.
    pub theta_a: f64,
    /// The ellipse angle in the (q, p) plane; equals θ_a − θ_u mod 2π.
    pub vartheta: f64,
}

/// The (A complex, B real) parameters of the general quadratic invariant
/// ½(B + A* + A)a₁² + (1/2i)(A* − A)·2a₁a₂ + ½(B − A* − A)a₂².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticInvariantSpec {
    pub a: Complex64,
    pub b: f64,
}

impl QuadraticInvariantSpec {
    pub fn new(a: Complex64, b: f64) -> Self {
        Self { a, b }
    }

    /// Elliptic (action-like) signature.
    pub fn is_positive_definite(&self) -> bool {
        self.b > self.a.norm()
    }

    /// Evaluate the invariant at a point of the (a₁, a₂) plane.
    pub fn eval(&self, a1: f64, a2: f64) -> f64 {
        let a = self.a;
        let b = Complex64::new(self.b, 0.0);
        let two_i = Complex64::new(0.0, 2.0);
        let v = 0.5 * (b + a.conj() + a) * a1 * a1
            + (a.conj() - a) / two_i * 2.0 * a1 * a2
            + 0.5 * (b - a.conj() - a) * a2 * a2;
        assert!(
            v.im.abs() <= 1e-12 * v.norm().max(1.0),
            "quadratic invariant picked up an imaginary part: {v}"
        );
        v.re
    }
}

/// Monte-Carlo area estimate with its one-sample standard error.
#[derive(Debug, Clone, Copy)]
pub struct AreaEstimate {
    pub area: f64,
    pub std_error: f64,
}

/// Binds a Wronskian-normalized complex mode to evaluators of the
/// invariants at any (q, p, t). Pure functions over immutable data.
#[derive(Debug, Clone)]
pub struct InvariantFrame {
    mode: ClassicalMode,
}

impl InvariantFrame {
    /// Requires a complex mode normalized to W = i.
    pub fn new(mode: ClassicalMode) -> Result<Self> {
        if mode.kind() != ModeKind::Complex {
            return Err(Error::Contract(
                "invariant frames require a complex mode".into(),
            ));
        }
        let dev = mode.normalization_deviation();
        if dev > 1e-9 {
            return Err(Error::NotNormalized { deviation: dev });
        }
        Ok(Self { mode })
    }

    pub fn mode(&self) -> &ClassicalMode {
        &self.mode
    }

    pub fn profile(&self) -> &CoefficientProfile {
        self.mode.profile()
    }

    /// Coefficients (c_q, c_p) of a = c_q·q + c_p·p at time t.
    pub fn linear_coefficients(&self, t: f64) -> Result<(Complex64, Complex64)> {
        let (u, udot) = self.mode.u_and_udot(t)?;
        let x = self.profile().x(t);
        let y = self.profile().y(t);
        let i = Complex64::i();
        let c_p = i * u.conj();
        let c_q = -i / x * (udot.conj() - y * u.conj());
        Ok((c_q, c_p))
    }

    /// The real invariant pair (a₁, a₂) with u₁ = √2·Im u, u₂ = √2·Re u.
    pub fn eval_real_pair(&self, q: f64, p: f64, t: f64) -> Result<(f64, f64)> {
        let (u, udot) = self.mode.u_and_udot(t)?;
        let x = self.profile().x(t);
        let y = self.profile().y(t);
        let sqrt2 = std::f64::consts::SQRT_2;
        let (u1, u2) = (sqrt2 * u.im, sqrt2 * u.re);
        let (du1, du2) = (sqrt2 * udot.im, sqrt2 * udot.re);
        let a1 = u1 * p - (du1 - y * u1) / x * q;
        let a2 = u2 * p - (du2 - y * u2) / x * q;
        Ok((a1, a2))
    }

    /// The complex invariant pair (a, a*).
    pub fn eval_complex_pair(&self, q: f64, p: f64, t: f64) -> Result<(Complex64, Complex64)> {
        let (c_q, c_p) = self.linear_coefficients(t)?;
        let a = c_q * q + c_p * p;
        Ok((a, a.conj()))
    }

    /// Action 𝓘 = |a|² and the three phase realizations.
    pub fn action_phase(&self, q: f64, p: f64, t: f64) -> Result<ActionPhase> {
        let (a, _) = self.eval_complex_pair(q, p, t)?;
        let action = a.norm_sqr();
        if action == 0.0 {
            return Ok(ActionPhase {
                action,
                angles: None,
            });
        }
        let (a1, a2) = self.eval_real_pair(q, p, t)?;
        let theta = a2.atan2(a1);
        let theta_a = a.arg();

        let (u, udot) = self.mode.u_and_udot(t)?;
        let x = self.profile().x(t);
        let y = self.profile().y(t);
        let uu = u.norm_sqr();
        // d/dt ln(u*u)^{1/2} evaluated analytically as Re(u̇/u)
        let log_deriv = (udot / u).re;
        let cos_v = q / (4.0 * uu * action).sqrt();
        let sin_v = (uu / action).sqrt() * (p + (y - log_deriv) / x * q);
        let vartheta = sin_v.atan2(cos_v);

        Ok(ActionPhase {
            action,
            angles: Some(PhaseAngles {
                theta,
                theta_a,
                vartheta,
            }),
        })
    }

    /// Invert the action-angle map: (𝓘, θ_a) at time t back to (q, p).
    pub fn reconstruct_qp(&self, action: f64, theta_a: f64, t: f64) -> Result<(f64, f64)> {
        if action < 0.0 {
            return Err(Error::Contract(format!("negative action {action}")));
        }
        if action == 0.0 {
            self.mode.u(t)?;
            return Ok((0.0, 0.0));
        }
        let (u, udot) = self.mode.u_and_udot(t)?;
        let x = self.profile().x(t);
        let y = self.profile().y(t);
        let rho = u.norm();
        let rho_dot = rho * (udot / u).re;
        let phase = theta_a - self.mode.theta_u(t)?;
        let root_i = action.sqrt();
        let q = 2.0 * root_i * rho * phase.cos();
        let p = 2.0 * root_i / x * (rho_dot - y * rho) * phase.cos() + root_i / rho * phase.sin();
        Ok((q, p))
    }

    /// Monte-Carlo estimate of the (q, p)-area of {𝓘 ≤ i0} at time t.
    /// The exact value is 2π·i0 for any frame.
    pub fn phase_space_area(
        &self,
        i0: f64,
        t: f64,
        n_samples: usize,
        rng: &mut impl Rng,
    ) -> Result<AreaEstimate> {
        if i0 < 0.0 {
            return Err(Error::Contract(format!("negative level {i0}")));
        }
        if n_samples < 100_000 {
            return Err(Error::Contract(format!(
                "n_samples = {n_samples} below the 1e5 minimum"
            )));
        }
        if i0 == 0.0 {
            return Ok(AreaEstimate {
                area: 0.0,
                std_error: 0.0,
            });
        }
        let (c_q, c_p) = self.linear_coefficients(t)?;
        // 𝓘 = v^T M v with M = [[|c_q|², Re(c_q c_p*)], [·, |c_p|²]]
        let m11 = c_q.norm_sqr();
        let m22 = c_p.norm_sqr();
        let m12 = (c_q * c_p.conj()).re;
        let det = m11 * m22 - m12 * m12;
        if det.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || !det.is_finite() {
            return Err(Error::Singularity(format!(
                "action quadratic form is degenerate (det = {det})"
            )));
        }
        let q_max = (i0 * m22 / det).sqrt();
        let p_max = (i0 * m11 / det).sqrt();
        let box_area = 4.0 * q_max * p_max;
        let mut hits = 0usize;
        for _ in 0..n_samples {
            let q = rng.random_range(-q_max..q_max);
            let p = rng.random_range(-p_max..p_max);
            let val = m11 * q * q + 2.0 * m12 * q * p + m22 * p * p;
            if val <= i0 {
                hits += 1;
            }
        }
        let frac = hits as f64 / n_samples as f64;
        Ok(AreaEstimate {
            area: box_area * frac,
            std_error: box_area * (frac * (1.0 - frac) / n_samples as f64).sqrt(),
        })
    }
}

/// Centered-difference estimate of the Poisson bracket
/// ∂f/∂q·∂g/∂p − ∂f/∂p·∂g/∂q at (q, p).
pub fn poisson_bracket_numeric(
    f: impl Fn(f64, f64) -> f64,
    g: impl Fn(f64, f64) -> f64,
    q: f64,
    p: f64,
    h: f64,
) -> Result<f64> {
    if !(1e-7..=1e-3).contains(&h) {
        return Err(Error::Contract(format!("step h = {h} outside [1e-7, 1e-3]")));
    }
    let df_dq = (f(q + h, p) - f(q - h, p)) / (2.0 * h);
    let df_dp = (f(q, p + h) - f(q, p - h)) / (2.0 * h);
    let dg_dq = (g(q + h, p) - g(q - h, p)) / (2.0 * h);
    let dg_dp = (g(q, p + h) - g(q, p - h)) / (2.0 * h);
    Ok(df_dq * dg_dp - df_dp * dg_dq)
}

/// Map (q, p) to the unit-mass canonical pair Q = q/√X,
/// P = √X(p + (Y/X)q), in which H = ½P² + ½(XZ − Y²)Q².
pub fn unit_mass_coordinates(
    profile: &CoefficientProfile,
    q: f64,
    p: f64,
    t: f64,
) -> Result<(f64, f64)> {
    profile.check_domain(t)?;
    let x = profile.x(t);
    let y = profile.y(t);
    let sx = x.sqrt();
    Ok((q / sx, sx * (p + y / x * q)))
}
