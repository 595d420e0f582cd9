//! Exact number-state wavefunctions of the time-dependent oscillator.
//!
//! For a Wronskian-normalized complex mode u(t) the n-th state is
//!
//! Ψₙ(q, t) = (2ⁿn!)^{−1/2} (2πħu*u)^{−1/4} (u/√(u*u))^{(2n+1)/2}
//!            · Hₙ(q/√(2ħu*u)) · exp[(i/2ħX)(u̇*/u* − Y)q²],
//!
//! an exact solution of the time-dependent Schrödinger equation. Hermite
//! values come from the normalized upward recurrence (prefactor folded
//! in), so n up to 60 evaluates without overflow; the half-integer power
//! of the mode phase uses the continuous unwrapped θ_u, which fixes the
//! free constant phase to 1 at t₀.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::invariants::InvariantFrame;
use crate::operators::OperatorMatrix;
use crate::quadrature::gauss_hermite;

/// Largest number label the Hermite evaluation is validated for.
pub const N_MAX_LIMIT: usize = 60;
/// Hermite-argument range guard: beyond this the weighted recurrence
/// would leave f64 range.
const X_LIMIT: f64 = 35.0;

/// Wavefunction family over one invariant frame.
#[derive(Debug, Clone)]
pub struct WaveFunctionFamily {
    frame: InvariantFrame,
    hbar: f64,
    n_max: usize,
}

/// Mode-dependent factors shared by all q at a fixed time.
#[derive(Debug, Clone, Copy)]
struct ModeData {
    /// Width scale s = √(2ħ u*u).
    s: f64,
    /// Quadratic exponent coefficient (i/2ħX)(u̇*/u* − Y); Re < 0.
    w: Complex64,
    /// Unwrapped continuous phase θ_u(t).
    theta_u: f64,
    u: Complex64,
    udot: Complex64,
}

/// Normalized Hermite value h̃ₙ(x) = Hₙ(x)/√(2ⁿn!).
fn hermite_normalized(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let next = x * (2.0 / (k as f64 + 1.0)).sqrt() * cur
            - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

impl WaveFunctionFamily {
    pub fn new(frame: InvariantFrame, hbar: f64, n_max: usize) -> Result<Self> {
        if hbar.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::Contract(format!("hbar = {hbar} must be positive")));
        }
        if n_max > N_MAX_LIMIT {
            return Err(Error::Contract(format!(
                "n_max = {n_max} exceeds the validated limit {N_MAX_LIMIT}"
            )));
        }
        Ok(Self {
            frame,
            hbar,
            n_max,
        })
    }

    pub fn frame(&self) -> &InvariantFrame {
        &self.frame
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn mode_data(&self, t: f64) -> Result<ModeData> {
        let mode = self.frame.mode();
        let (u, udot) = mode.u_and_udot(t)?;
        let uu = u.norm_sqr();
        if uu < 1e-12 {
            return Err(Error::Singularity(format!("u*u = {uu} vanishes at t = {t}")));
        }
        let x_t = self.frame.profile().x(t);
        let y_t = self.frame.profile().y(t);
        let w = Complex64::i() / (2.0 * self.hbar * x_t)
            * (udot.conj() / u.conj() - y_t);
        Ok(ModeData {
            s: (2.0 * self.hbar * uu).sqrt(),
            w,
            theta_u: mode.theta_u(t)?,
            u,
            udot,
        })
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n > self.n_max {
            return Err(Error::Contract(format!(
                "n = {n} exceeds n_max = {}",
                self.n_max
            )));
        }
        Ok(())
    }

    fn psi_from_data(&self, data: &ModeData, n: usize, q: f64) -> Result<Complex64> {
        let x = q / data.s;
        if x.abs() > X_LIMIT {
            return Err(Error::RangeError { x_abs: x.abs() });
        }
        let amp = std::f64::consts::PI.powf(-0.25) / data.s.sqrt()
            * hermite_normalized(n, x)
            * (data.w.re * q * q).exp();
        let phase = data.w.im * q * q - (n as f64 + 0.5) * data.theta_u;
        Ok(Complex64::from_polar(amp, phase))
    }

    /// Ψₙ(q, t).
    pub fn psi_n(&self, n: usize, q: f64, t: f64) -> Result<Complex64> {
        self.check_n(n)?;
        let data = self.mode_data(t)?;
        self.psi_from_data(&data, n, q)
    }

    /// Ψₙ(·, t) on a grid of q values; the mode is evaluated once.
    pub fn psi_row(&self, n: usize, t: f64, qs: &[f64]) -> Result<Vec<Complex64>> {
        self.check_n(n)?;
        let data = self.mode_data(t)?;
        qs.iter().map(|&q| self.psi_from_data(&data, n, q)).collect()
    }

    /// Width scale s(t) = √(2ħ u*u); the natural q unit at time t.
    pub fn width(&self, t: f64) -> Result<f64> {
        Ok(self.mode_data(t)?.s)
    }

    /// Uniform q grid spanning the bulk of |Ψₙ|² (±(√(2n+1) + 6)
    /// width units), for the stencil-based checks.
    pub fn default_q_grid(&self, n: usize, t: f64, points: usize) -> Result<Vec<f64>> {
        let s = self.width(t)?;
        let half = ((2.0 * n as f64 + 1.0).sqrt() + 6.0) * s;
        Ok((0..points)
            .map(|k| -half + 2.0 * half * k as f64 / (points - 1) as f64)
            .collect())
    }

    /// ⟨Ψₙ|Ψₘ⟩ by Gauss–Hermite quadrature in the scaled variable
    /// x = q/s, verified by node doubling.
    pub fn inner_product(&self, n: usize, m: usize, t: f64) -> Result<Complex64> {
        self.check_n(n)?;
        self.check_n(m)?;
        let data = self.mode_data(t)?;
        let nodes = n + m + 20;
        let coarse = self.inner_product_with_nodes(&data, n, m, nodes);
        let fine = self.inner_product_with_nodes(&data, n, m, 2 * nodes);
        let change = (coarse - fine).norm();
        if change > 1e-10 {
            return Err(Error::QuadratureAccuracy { change });
        }
        Ok(fine)
    }

    fn inner_product_with_nodes(
        &self,
        data: &ModeData,
        n: usize,
        m: usize,
        nodes: usize,
    ) -> Complex64 {
        let rule = gauss_hermite(nodes);
        // Ψₙ*Ψₘ dq = (phases)·π^{−1/2}·h̃ₙh̃ₘ·e^{2Re(w)q² + x²}·dx with
        // 2Re(w)q² + x² = O(Wronskian drift); no large exponentials arise.
        let delta = 2.0 * data.w.re * data.s * data.s + 1.0;
        let mut sum = 0.0;
        for (&x, &wgt) in rule.nodes.iter().zip(&rule.weights) {
            sum += wgt
                * hermite_normalized(n, x)
                * hermite_normalized(m, x)
                * (delta * x * x).exp();
        }
        let phase = (n as f64 - m as f64) * data.theta_u;
        Complex64::from_polar(sum / std::f64::consts::PI.sqrt(), phase)
    }

    /// Relative L₂ residual of the time-dependent Schrödinger equation,
    /// ‖iħ∂ₜΨₙ − ĤΨₙ‖/‖ĤΨₙ‖, with 5-point time differences and
    /// 4th-order space stencils on `q_grid` (uniform, ≥ 512 points,
    /// spanning the state's support; [`Self::default_q_grid`] does).
    pub fn schrodinger_residual(&self, n: usize, t: f64, q_grid: &[f64]) -> Result<f64> {
        self.check_n(n)?;
        check_uniform_grid(q_grid, 512)?;
        let res = self.residual_on_grid(n, t, q_grid)?;
        let refined = refine_grid(q_grid);
        let res_fine = self.residual_on_grid(n, t, &refined)?;
        if res > 10.0 * res_fine && res > 1e-7 {
            return Err(Error::GridTooCoarse {
                coarse: res,
                fine: res_fine,
            });
        }
        Ok(res)
    }

    fn time_step(&self, t: f64) -> f64 {
        let omega_sq = self
            .frame
            .profile()
            .effective_frequency_sq(t)
            .unwrap_or(1.0)
            .abs()
            .max(1.0);
        1e-4 / omega_sq.sqrt()
    }

    fn residual_on_grid(&self, n: usize, t: f64, q_grid: &[f64]) -> Result<f64> {
        let dt = self.time_step(t);
        let rows: Vec<Vec<Complex64>> = [-2.0f64, -1.0, 1.0, 2.0]
            .iter()
            .map(|k| self.psi_row(n, t + k * dt, q_grid))
            .collect::<Result<_>>()?;
        let psi = self.psi_row(n, t, q_grid)?;
        let h = q_grid[1] - q_grid[0];
        let hpsi = self.apply_hamiltonian(&psi, q_grid, t, h);

        let mut num = 0.0;
        let mut den = 0.0;
        let ih = Complex64::i() * self.hbar;
        for i in 2..q_grid.len() - 2 {
            let dpsi_dt =
                (rows[0][i] - 8.0 * rows[1][i] + 8.0 * rows[2][i] - rows[3][i]) / (12.0 * dt);
            num += (ih * dpsi_dt - hpsi[i]).norm_sqr();
            den += hpsi[i].norm_sqr();
        }
        if den == 0.0 {
            return Err(Error::Contract(
                "Schrödinger residual undefined: ĤΨ vanishes on the grid".into(),
            ));
        }
        Ok((num / den).sqrt())
    }

    /// ĤΨ = −(ħ²X/2)∂²qΨ − (iħY/2)(Ψ + 2q∂qΨ) + (Z/2)q²Ψ with 4th-order
    /// stencils; entries within two points of the boundary are zero.
    fn apply_hamiltonian(
        &self,
        psi: &[Complex64],
        q_grid: &[f64],
        t: f64,
        h: f64,
    ) -> Vec<Complex64> {
        let profile = self.frame.profile();
        let (x_t, y_t, z_t) = (profile.x(t), profile.y(t), profile.z(t));
        let hbar = self.hbar;
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        for i in 2..psi.len() - 2 {
            let dq = (psi[i - 2] - 8.0 * psi[i - 1] + 8.0 * psi[i + 1] - psi[i + 2]) / (12.0 * h);
            let dq2 = (-psi[i - 2] + 16.0 * psi[i - 1] - 30.0 * psi[i] + 16.0 * psi[i + 1]
                - psi[i + 2])
                / (12.0 * h * h);
            let q = q_grid[i];
            out[i] = -(hbar * hbar * x_t / 2.0) * dq2
                - Complex64::i() * (hbar * y_t / 2.0) * (psi[i] + 2.0 * q * dq)
                + (z_t / 2.0) * q * q * psi[i];
        }
        out
    }

    /// ⟨Ψₙ|iħ∂ₜ|Ψₙ⟩ and ⟨Ψₙ|Ĥ|Ψₙ⟩ by trapezoidal quadrature on a
    /// 2048-point grid; the two agree for these states, and both are real
    /// up to a small imaginary residue.
    pub fn geometric_phase_check(&self, n: usize, t: f64) -> Result<(Complex64, Complex64)> {
        self.check_n(n)?;
        let q_grid = self.default_q_grid(n, t, 2048)?;
        let h = q_grid[1] - q_grid[0];
        let dt = self.time_step(t);
        let rows: Vec<Vec<Complex64>> = [-2.0f64, -1.0, 1.0, 2.0]
            .iter()
            .map(|k| self.psi_row(n, t + k * dt, &q_grid))
            .collect::<Result<_>>()?;
        let psi = self.psi_row(n, t, &q_grid)?;
        let hpsi = self.apply_hamiltonian(&psi, &q_grid, t, h);
        let ih = Complex64::i() * self.hbar;
        let mut lhs = Complex64::new(0.0, 0.0);
        let mut rhs = Complex64::new(0.0, 0.0);
        for i in 2..q_grid.len() - 2 {
            let dpsi_dt =
                (rows[0][i] - 8.0 * rows[1][i] + 8.0 * rows[2][i] - rows[3][i]) / (12.0 * dt);
            lhs += psi[i].conj() * ih * dpsi_dt * h;
            rhs += psi[i].conj() * hpsi[i] * h;
        }
        Ok((lhs, rhs))
    }

    /// Sup-norm of the lowering operator applied to the ground state,
    /// evaluated with 4th-order q-stencils; exact states give ~0.
    pub fn vacuum_annihilation_sup(&self, t: f64, q_grid: &[f64]) -> Result<f64> {
        check_uniform_grid(q_grid, 512)?;
        let data = self.mode_data(t)?;
        let psi = self.psi_row(0, t, q_grid)?;
        let h = q_grid[1] - q_grid[0];
        let x_t = self.frame.profile().x(t);
        let y_t = self.frame.profile().y(t);
        let pre = Complex64::i() / self.hbar.sqrt();
        let mut sup = 0.0f64;
        for i in 2..q_grid.len() - 2 {
            let dq = (psi[i - 2] - 8.0 * psi[i - 1] + 8.0 * psi[i + 1] - psi[i + 2]) / (12.0 * h);
            let p_psi = -Complex64::i() * self.hbar * dq;
            let val = pre
                * (data.u.conj() * p_psi
                    - (data.udot.conj() - y_t * data.u.conj()) / x_t * q_grid[i] * psi[i]);
            sup = sup.max(val.norm());
        }
        Ok(sup)
    }

    /// Largest pointwise difference between Ψₙ and the normalized raising
    /// chain (n!)^{−1/2}(â†)ⁿΨ₀, with â† applied exactly as a
    /// differential operator on polynomial×Gaussian states.
    pub fn raising_chain_max_diff(&self, n: usize, t: f64, q_grid: &[f64]) -> Result<f64> {
        self.check_n(n)?;
        let data = self.mode_data(t)?;
        // â†(P·Ψ₀) = [κ·q·P − √ħ·u·P']·Ψ₀ with
        // κ = −i(u u̇* − u̇ u*)/(√ħ X u*): track P's coefficients.
        let x_t = self.frame.profile().x(t);
        let w_num = data.u * data.udot.conj() - data.udot * data.u.conj();
        let kappa = -Complex64::i() * w_num / (self.hbar.sqrt() * x_t * data.u.conj());
        let mut poly = vec![Complex64::new(1.0, 0.0)];
        for k in 1..=n {
            let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
            for (j, &c) in poly.iter().enumerate() {
                next[j + 1] += kappa * c;
                if j >= 1 {
                    next[j - 1] -= self.hbar.sqrt() * data.u * (j as f64) * c;
                }
            }
            let norm = 1.0 / (k as f64).sqrt();
            for c in next.iter_mut() {
                *c *= norm;
            }
            poly = next;
        }
        let mut max_diff = 0.0f64;
        for &q in q_grid {
            let psi0 = self.psi_from_data(&data, 0, q)?;
            let mut p_val = Complex64::new(0.0, 0.0);
            for &c in poly.iter().rev() {
                p_val = p_val * q + c;
            }
            let chain = p_val * psi0;
            let direct = self.psi_from_data(&data, n, q)?;
            max_diff = max_diff.max((chain - direct).norm());
        }
        Ok(max_diff)
    }
}

fn check_uniform_grid(q_grid: &[f64], min_points: usize) -> Result<()> {
    if q_grid.len() < min_points {
        return Err(Error::Contract(format!(
            "grid has {} points; at least {min_points} required",
            q_grid.len()
        )));
    }
    let h = q_grid[1] - q_grid[0];
    for w in q_grid.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs() {
            return Err(Error::Contract("grid is not uniform".into()));
        }
    }
    Ok(())
}

fn refine_grid(q_grid: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * q_grid.len() - 1);
    for w in q_grid.windows(2) {
        out.push(w[0]);
        out.push(0.5 * (w[0] + w[1]));
    }
    out.push(*q_grid.last().unwrap());
    out
}

/// Auxiliary scalar forms of the mode, u = √(X/2)·ζ·e^{−iθ_ζ} and
/// u = ξ·e^{−iθ_ξ}/√2, with the residuals of their nonlinear equations
/// ζ̈ + [Ω² + Ẍ/2X − 3Ẋ²/4X²]ζ = 1/ζ³ and
/// ξ̈ − (Ẋ/X)ξ̇ + Ω²ξ = X²/ξ³, evaluated with finite-difference
/// derivatives on a uniform re-integration grid.
#[derive(Debug, Clone)]
pub struct AuxiliaryForms {
    pub ts: Vec<f64>,
    pub zeta: Vec<f64>,
    pub theta_zeta: Vec<f64>,
    pub xi: Vec<f64>,
    pub theta_xi: Vec<f64>,
    /// max |ζ̈ + [...]ζ − 1/ζ³| over interior grid points.
    pub zeta_residual_max: f64,
    /// max |ξ̈ − (Ẋ/X)ξ̇ + Ω²ξ − X²/ξ³|.
    pub xi_residual_max: f64,
    /// max |θ̇_ζ ζ² − 1|.
    pub theta_zeta_rate_max_dev: f64,
    /// max |θ̇_ξ ξ²/X − 1|.
    pub theta_xi_rate_max_dev: f64,
}

/// Step for the uniform auxiliary-residual grid. Small enough that the
/// 5-point stencil truncation (∝ h⁴·|θ⁽⁵⁾|) clears the 1e-8 rate-identity
/// budget even for pumped profiles with strongly modulated u*u.
const AUX_STEP: f64 = 0.002;

/// Extract ζ, ξ and their phases from the frame's mode and report the
/// auxiliary-equation residuals.
pub fn auxiliary_forms(frame: &InvariantFrame) -> Result<AuxiliaryForms> {
    let mode = frame.mode().reintegrate_uniform(AUX_STEP)?;
    let profile = mode.profile().clone();
    let grid = mode.grid();
    // the final step may be clipped; stencils stop before it
    let mut n = grid.len();
    while n >= 2 && (grid[n - 1] - grid[n - 2] - AUX_STEP).abs() > 1e-9 {
        n -= 1;
    }
    if n < 5 {
        return Err(Error::Contract("span too short for the residual stencils".into()));
    }
    let ts: Vec<f64> = grid[..n].to_vec();

    let mut zeta = Vec::with_capacity(n);
    let mut xi = Vec::with_capacity(n);
    let mut theta = Vec::with_capacity(n);
    for &t in &ts {
        let u = mode.u(t)?;
        let uu = u.norm_sqr();
        let x = profile.x(t);
        if x <= 0.0 {
            return Err(Error::Singularity(format!("X({t}) = {x} not positive")));
        }
        if uu < 1e-12 {
            return Err(Error::Singularity(format!("u*u vanishes at t = {t}")));
        }
        zeta.push((2.0 * uu / x).sqrt());
        xi.push((2.0 * uu).sqrt());
        theta.push(mode.theta_u(t)?);
    }

    let d1 = |f: &[f64], i: usize| {
        (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * AUX_STEP)
    };
    let d2 = |f: &[f64], i: usize| {
        (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2])
            / (12.0 * AUX_STEP * AUX_STEP)
    };

    let mut zeta_res = 0.0f64;
    let mut xi_res = 0.0f64;
    let mut zrate = 0.0f64;
    let mut xrate = 0.0f64;
    for i in 2..n - 2 {
        let t = ts[i];
        let x = profile.x(t);
        let dx = profile.dx(t);
        let ddx = profile.ddx(t);
        let omega_sq = profile.effective_frequency_sq(t)?;

        let zr = d2(&zeta, i)
            + (omega_sq + ddx / (2.0 * x) - 3.0 * dx * dx / (4.0 * x * x)) * zeta[i]
            - 1.0 / zeta[i].powi(3);
        zeta_res = zeta_res.max(zr.abs());

        let xr = d2(&xi, i) - dx / x * d1(&xi, i) + omega_sq * xi[i]
            - x * x / xi[i].powi(3);
        xi_res = xi_res.max(xr.abs());

        let rate = d1(&theta, i);
        zrate = zrate.max((rate * zeta[i] * zeta[i] - 1.0).abs());
        xrate = xrate.max((rate * xi[i] * xi[i] / x - 1.0).abs());
    }

    Ok(AuxiliaryForms {
        ts,
        zeta,
        theta_zeta: theta.clone(),
        xi,
        theta_xi: theta,
        zeta_residual_max: zeta_res,
        xi_residual_max: xi_res,
        theta_zeta_rate_max_dev: zrate,
        theta_xi_rate_max_dev: xrate,
    })
}

/// Truncated ladder matrices (a, a†, n̂) in the instantaneous number
/// basis. The commutator [a, a†] equals the identity except the
/// (dim−1, dim−1) entry, which is −(dim−1): the truncation artifact.
pub fn ladder_matrices(dim: usize) -> (OperatorMatrix, OperatorMatrix, OperatorMatrix) {
    assert!(dim >= 2, "ladder matrices need dim >= 2");
    let mut a = DMatrix::<Complex64>::zeros(dim, dim);
    let mut num = DMatrix::<Complex64>::zeros(dim, dim);
    for k in 1..dim {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
        num[(k, k)] = Complex64::new(k as f64, 0.0);
    }
    let adag = a.adjoint();
    (
        OperatorMatrix::from_matrix(a),
        OperatorMatrix::from_matrix(adag),
        OperatorMatrix::from_matrix(num),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{caldirola_kanai, constant, cross_term, pumped, CoefficientProfile};
    use crate::dynamics::{integrate_mode, stationary_seed, stationary_seed_at};
    use approx::assert_relative_eq;

    fn family_for(profile: &CoefficientProfile, t1: f64, hbar: f64) -> WaveFunctionFamily {
        // seed at t₀ = −0.5 so the phase anchor coincides with t = 0
        let (u0, udot0) = stationary_seed_at(1.0, -0.5);
        let mode = integrate_mode(profile, u0, udot0, (-0.5, t1), 1e-10)
            .unwrap()
            .normalized()
            .unwrap();
        WaveFunctionFamily::new(InvariantFrame::new(mode).unwrap(), hbar, 12).unwrap()
    }

    #[test]
    fn ground_state_modulus_at_origin() {
        let fam = family_for(&constant(1.0), 2.0, 1.0);
        let v = fam.psi_n(0, 0.0, 0.0).unwrap();
        assert_relative_eq!(
            v.norm(),
            std::f64::consts::PI.powf(-0.25),
            epsilon = 1e-10
        );
    }

    #[test]
    fn first_excited_vanishes_at_origin() {
        let fam = family_for(&constant(1.0), 2.0, 1.0);
        for t in [0.0, 0.7, 1.9] {
            assert!(fam.psi_n(1, 0.0, t).unwrap().norm() < 1e-14);
        }
    }

    #[test]
    fn hermite_parity() {
        let fam = family_for(&pumped(1.0, 0.1, 2.0), 3.0, 1.0);
        for n in 0..6 {
            let plus = fam.psi_n(n, 1.3, 2.0).unwrap();
            let minus = fam.psi_n(n, -1.3, 2.0).unwrap();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((plus - sign * minus).norm() < 1e-12, "parity fails at n = {n}");
        }
    }

    #[test]
    fn stationary_states_for_constant_profile() {
        // Ψₙ(q, t) = textbook state × e^{−iω₀(n+½)t}
        let fam = family_for(&constant(1.0), 6.0, 1.0);
        for n in 0..4usize {
            for &t in &[0.0, 1.0, 4.5] {
                for &q in &[0.0, 0.4, -1.2, 2.0] {
                    let x = q;
                    let textbook = std::f64::consts::PI.powf(-0.25)
                        * hermite_normalized(n, x)
                        * (-0.5 * x * x).exp();
                    let expect = Complex64::from_polar(textbook, -(n as f64 + 0.5) * t);
                    let got = fam.psi_n(n, q, t).unwrap();
                    assert!(
                        (got - expect).norm() <= 1e-8,
                        "n = {n}, q = {q}, t = {t}: {got} vs {expect}"
                    );
                }
            }
        }
    }

    #[test]
    fn orthonormal_at_multiple_times_and_hbars() {
        for hbar in [1.0, 0.7] {
            let fam = family_for(&caldirola_kanai(0.2, 1.0), 5.0, hbar);
            for &t in &[0.0, 2.5, 5.0 - 1e-3] {
                for n in 0..=5 {
                    for m in 0..=5 {
                        let ip = fam.inner_product(n, m, t).unwrap();
                        let expect = if n == m { 1.0 } else { 0.0 };
                        assert!(
                            (ip - expect).norm() <= 1e-10,
                            "⟨{n}|{m}⟩ = {ip} at t = {t}, ħ = {hbar}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn inner_product_on_pumped_profile() {
        let fam = family_for(&pumped(1.0, 0.1, 2.0), 4.0, 1.0);
        let ip = fam.inner_product(5, 5, 3.0).unwrap();
        assert!((ip - 1.0).norm() <= 1e-9);
    }

    #[test]
    fn schrodinger_residual_small_for_exact_states() {
        let fam = family_for(&constant(1.0), 3.0, 1.0);
        for n in 0..=3 {
            let grid = fam.default_q_grid(n, 1.0, 1024).unwrap();
            let res = fam.schrodinger_residual(n, 1.0, &grid).unwrap();
            assert!(res <= 1e-6, "n = {n}: residual {res}");
        }
    }

    #[test]
    fn schrodinger_residual_damped_profile() {
        let fam = family_for(&caldirola_kanai(0.2, 1.0), 3.0, 1.0);
        for n in 0..=3 {
            for &t in &[0.0, 1.0, 2.0] {
                let grid = fam.default_q_grid(n, t, 1024).unwrap();
                let res = fam.schrodinger_residual(n, t, &grid).unwrap();
                assert!(res <= 1e-5, "n = {n}, t = {t}: residual {res}");
            }
        }
    }

    #[test]
    fn residual_guard_on_vanishing_state() {
        let fam = family_for(&constant(1.0), 2.0, 1.0);
        let s = fam.width(1.0).unwrap();
        // far tail: Ψ underflows to exactly zero, the 0/0 guard must fire
        let grid: Vec<f64> = (0..512).map(|k| (34.8 + 0.0003 * k as f64) * s).collect();
        assert!(matches!(
            fam.schrodinger_residual(0, 1.0, &grid),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn range_error_beyond_evaluable_tail() {
        let fam = family_for(&constant(1.0), 2.0, 1.0);
        assert!(matches!(
            fam.psi_n(0, 100.0, 1.0),
            Err(Error::RangeError { .. })
        ));
    }

    #[test]
    fn geometric_phase_equals_dynamical_phase() {
        for profile in [constant(1.0), cross_term(1.0, 0.5)] {
            let fam = family_for(&profile, 3.0, 1.0);
            for n in 0..=3 {
                let (lhs, rhs) = fam.geometric_phase_check(n, 1.5).unwrap();
                assert!(lhs.im.abs() <= 1e-8, "lhs not real: {lhs}");
                assert!(rhs.im.abs() <= 1e-8, "rhs not real: {rhs}");
                assert!(
                    (lhs.re - rhs.re).abs() <= 1e-6,
                    "{}: n = {n}, lhs = {lhs}, rhs = {rhs}",
                    profile.name()
                );
            }
        }
    }

    #[test]
    fn dynamical_phase_matches_stationary_expectation() {
        let fam = family_for(&constant(1.0), 3.0, 1.0);
        for n in 0..=3 {
            let (_, rhs) = fam.geometric_phase_check(n, 1.0).unwrap();
            assert!(
                (rhs.re - (n as f64 + 0.5)).abs() <= 1e-8,
                "⟨Ĥ⟩ = {} for n = {n}",
                rhs.re
            );
        }
    }

    #[test]
    fn vacuum_annihilated() {
        let fam = family_for(&caldirola_kanai(0.2, 1.0), 3.0, 1.0);
        let grid = fam.default_q_grid(0, 1.0, 1024).unwrap();
        let sup = fam.vacuum_annihilation_sup(1.0, &grid).unwrap();
        assert!(sup <= 1e-7, "sup |âΨ₀| = {sup}");
    }

    #[test]
    fn raising_chain_reproduces_psi_n() {
        for hbar in [1.0, 0.7] {
            let fam = family_for(&pumped(1.0, 0.1, 2.0), 3.0, hbar);
            let grid = fam.default_q_grid(4, 2.0, 512).unwrap();
            for n in 1..=4 {
                let diff = fam.raising_chain_max_diff(n, 2.0, &grid).unwrap();
                assert!(diff <= 1e-7, "n = {n}, ħ = {hbar}: diff {diff}");
            }
        }
    }

    #[test]
    fn auxiliary_forms_constant_profile() {
        let profile = constant(1.0);
        let (u0, udot0) = stationary_seed(1.0);
        let mode = integrate_mode(&profile, u0, udot0, (0.0, 10.0), 1e-10)
            .unwrap()
            .normalized()
            .unwrap();
        let frame = InvariantFrame::new(mode).unwrap();
        let aux = auxiliary_forms(&frame).unwrap();
        // ζ = ξ = 1 and θ = t for the stationary mode
        for (i, &t) in aux.ts.iter().enumerate() {
            assert!((aux.zeta[i] - 1.0).abs() < 1e-9);
            assert!((aux.xi[i] - 1.0).abs() < 1e-9);
            assert!((aux.theta_zeta[i] - t).abs() < 1e-8);
        }
        assert!(aux.zeta_residual_max <= 1e-7, "ζ residual {}", aux.zeta_residual_max);
        assert!(aux.xi_residual_max <= 1e-7, "ξ residual {}", aux.xi_residual_max);
        assert!(aux.theta_zeta_rate_max_dev <= 1e-8);
        assert!(aux.theta_xi_rate_max_dev <= 1e-8);
    }

    #[test]
    fn auxiliary_forms_damped_profile() {
        let profile = caldirola_kanai(0.2, 1.0);
        let (u0, udot0) = stationary_seed(1.0);
        let mode = integrate_mode(&profile, u0, udot0, (0.0, 10.0), 1e-10)
            .unwrap()
            .normalized()
            .unwrap();
        let frame = InvariantFrame::new(mode).unwrap();
        let aux = auxiliary_forms(&frame).unwrap();
        assert!(aux.zeta_residual_max <= 1e-5, "ζ residual {}", aux.zeta_residual_max);
        assert!(aux.xi_residual_max <= 1e-5, "ξ residual {}", aux.xi_residual_max);
        assert!(aux.theta_zeta_rate_max_dev <= 1e-8);
    }

    #[test]
    fn ladder_matrix_shapes() {
        let (a, _adag, num) = ladder_matrices(2);
        assert_eq!(a.matrix()[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(a.matrix()[(1, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(num.matrix()[(1, 1)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn ladder_commutator_interior_identity() {
        let dim = 12;
        let (a, adag, _) = ladder_matrices(dim);
        let comm = a.commutator(&adag).unwrap();
        for i in 0..dim {
            for j in 0..dim {
                let expect = if i == j {
                    if i == dim - 1 {
                        -((dim - 1) as f64)
                    } else {
                        1.0
                    }
                } else {
                    0.0
                };
                // √k·√k rounds within 1 ulp of k; off-diagonals are exact
                let diff = (comm.matrix()[(i, j)] - Complex64::new(expect, 0.0)).norm();
                if i == j {
                    assert!(diff <= 1e-13 * expect.abs().max(1.0), "({i}, {j})");
                } else {
                    assert_eq!(diff, 0.0, "({i}, {j})");
                }
            }
        }
    }

    #[test]
    fn number_operator_spectrum_is_exact() {
        let (_, _, num) = ladder_matrices(7);
        let eigs = num.hermitian_eigenvalues();
        for (k, v) in eigs.iter().enumerate() {
            assert!((v - k as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn family_rejects_bad_parameters() {
        let profile = constant(1.0);
        let (u0, udot0) = stationary_seed(1.0);
        let mode = integrate_mode(&profile, u0, udot0, (0.0, 1.0), 1e-10)
            .unwrap()
            .normalized()
            .unwrap();
        let frame = InvariantFrame::new(mode).unwrap();
        assert!(WaveFunctionFamily::new(frame.clone(), 0.0, 5).is_err());
        assert!(WaveFunctionFamily::new(frame, 1.0, 400).is_err());
    }
}
