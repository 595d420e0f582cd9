//! Candidate phase operators on a truncated number basis.
//!
//! Four schemes are realized as matrices, each carrying its own
//! well-documented defect: the Dirac construction â·n̂^{−1/2} (not
//! unitary), the Susskind–Glogower shift Σ|n⟩⟨n+1| (one-sided unitary:
//! E†E = 1 − |0⟩⟨0|), the Pegg–Barnett Hermitian operator on a finite
//! subspace (exact spectrum θ₀ + 2mπ/(s+1)), and the bilateral-shift
//! extension over negative indices, which is unitary but assigns no
//! physical meaning to the negative labels. None resolves the phase
//! problem; the point is to reproduce each scheme and its trade-offs.
//!
//! Schemes are also exposed behind [`PhaseScheme`] and selected by name
//! through [`registry`]/[`scheme_by_name`] for the CLI.
//!
//! In the instantaneous number basis all these matrices are
//! time-independent; the time dependence of the underlying states lives
//! entirely in the basis itself, so each matrix is built once.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::OperatorMatrix;

/// The Susskind–Glogower pair (Ê, Ê†) with Ê = Σ|n⟩⟨n+1|: ones on the
/// first superdiagonal. E†E = diag(0, 1, …, 1) exactly in every
/// dimension; E·E† = diag(1, …, 1, 0), the defect moved to the top index
/// by truncation.
pub fn susskind_glogower(dim: usize) -> (OperatorMatrix, OperatorMatrix) {
    assert!(dim >= 2);
    let mut e = DMatrix::<Complex64>::zeros(dim, dim);
    for n in 0..dim - 1 {
        e[(n, n + 1)] = Complex64::new(1.0, 0.0);
    }
    let edag = e.adjoint();
    (
        OperatorMatrix::from_matrix(e),
        OperatorMatrix::from_matrix(edag),
    )
}

/// The Dirac construction â·n̂^{−1/2} with the pseudo-inverse convention
/// (n̂^{−1/2} maps |0⟩ to 0). The composition is evaluated in closed
/// form: â·n̂^{−1/2}|n⟩ = (√n/√n)|n−1⟩ = |n−1⟩ for n ≥ 1 and 0 on the
/// vacuum, so the matrix equals the Susskind–Glogower shift entrywise.
/// The reported non-unitarity is the scheme's documented defect, not an
/// implementation artifact.
pub fn dirac_phase(dim: usize) -> OperatorMatrix {
    assert!(dim >= 2);
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = Complex64::new(1.0, 0.0);
    }
    OperatorMatrix::from_matrix(m)
}

/// The discrete-Fourier phase states |θ_m⟩ underlying the Pegg–Barnett
/// operator, with θ_m = θ₀ + 2mπ/(s+1), m = 0…s.
#[derive(Debug, Clone)]
pub struct PhaseBasis {
    pub theta0: f64,
    pub angles: Vec<f64>,
    pub states: Vec<DVector<Complex64>>,
}

/// Hermitian phase operator θ̂ = Σ θ_m|θ_m⟩⟨θ_m| on dim = s+1 levels.
/// Its eigenvalues are exactly the θ_m by construction.
pub fn pegg_barnett(dim: usize, theta0: f64) -> (OperatorMatrix, PhaseBasis) {
    assert!(dim >= 2);
    let s = dim - 1;
    let mut angles = Vec::with_capacity(dim);
    let mut states = Vec::with_capacity(dim);
    let norm = 1.0 / (dim as f64).sqrt();
    for m in 0..=s {
        let theta_m = theta0 + 2.0 * m as f64 * std::f64::consts::PI / (s as f64 + 1.0);
        angles.push(theta_m);
        states.push(DVector::from_fn(dim, |n, _| {
            Complex64::from_polar(norm, n as f64 * theta_m)
        }));
    }
    let mut op = DMatrix::<Complex64>::zeros(dim, dim);
    for (theta_m, state) in angles.iter().zip(&states) {
        op += (state * state.adjoint()) * Complex64::new(*theta_m, 0.0);
    }
    (
        OperatorMatrix::from_matrix(op),
        PhaseBasis {
            theta0,
            angles,
            states,
        },
    )
}

/// Spectral exponential e^{iθ̂} of a Pegg–Barnett operator.
pub fn pegg_barnett_exponential(basis: &PhaseBasis) -> OperatorMatrix {
    let dim = basis.states[0].len();
    let mut op = DMatrix::<Complex64>::zeros(dim, dim);
    for (theta_m, state) in basis.angles.iter().zip(&basis.states) {
        op += (state * state.adjoint()) * Complex64::from_polar(1.0, *theta_m);
    }
    OperatorMatrix::from_matrix(op)
}

/// How a finite window realizes the bilateral shift Σ|n⟩⟨n+1| over all
/// integer labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeClosure {
    /// Close the window cyclically: the finite matrix is exactly unitary,
    /// the standard finite surrogate of the bilateral lattice.
    Cyclic,
    /// Plain truncation: unitary-defective at both window edges.
    Open,
}

/// Shift operator on the index window [n_min, n_max] (n_min < 0 < n_max).
/// The bilateral operator is unitary on the full integer lattice; the
/// cyclic closure preserves that exactly in finite dimension, at the
/// price of negative number labels that carry no physical meaning.
pub fn extended_phase_operator(n_min: i64, n_max: i64) -> Result<OperatorMatrix> {
    extended_phase_operator_with(n_min, n_max, EdgeClosure::Cyclic)
}

/// As [`extended_phase_operator`] with an explicit edge treatment.
pub fn extended_phase_operator_with(
    n_min: i64,
    n_max: i64,
    closure: EdgeClosure,
) -> Result<OperatorMatrix> {
    if !(n_min < 0 && 0 < n_max) {
        return Err(Error::Contract(format!(
            "window [{n_min}, {n_max}] must be two-sided around 0"
        )));
    }
    let len = (n_max - n_min + 1) as usize;
    let mut op = DMatrix::<Complex64>::zeros(len, len);
    for i in 0..len - 1 {
        op[(i, i + 1)] = Complex64::new(1.0, 0.0);
    }
    if closure == EdgeClosure::Cyclic {
        op[(len - 1, 0)] = Complex64::new(1.0, 0.0);
    }
    Ok(OperatorMatrix::from_matrix(op))
}

/// Max-norm of [E, ħn̂] − ħE over the interior block (rows and columns
/// 0…dim−2); an exponential-phase candidate satisfies the criterion when
/// this vanishes. Wrap-around defects sit in the excluded top row; use
/// [`lerner_check_full`] to see them.
pub fn lerner_check(
    e_op: &OperatorMatrix,
    number_op: &OperatorMatrix,
    hbar: f64,
) -> Result<f64> {
    let diff = lerner_difference(e_op, number_op, hbar)?;
    let k = e_op.dim() - 1;
    Ok(diff
        .view((0, 0), (k, k))
        .iter()
        .map(|e| e.norm())
        .fold(0.0, f64::max))
}

/// Max-norm of [E, ħn̂] − ħE over the whole matrix, truncation and wrap
/// rows included.
pub fn lerner_check_full(
    e_op: &OperatorMatrix,
    number_op: &OperatorMatrix,
    hbar: f64,
) -> Result<f64> {
    let diff = lerner_difference(e_op, number_op, hbar)?;
    Ok(diff.iter().map(|e| e.norm()).fold(0.0, f64::max))
}

fn lerner_difference(
    e_op: &OperatorMatrix,
    number_op: &OperatorMatrix,
    hbar: f64,
) -> Result<DMatrix<Complex64>> {
    if e_op.dim() != number_op.dim() {
        return Err(Error::DimensionMismatch {
            left: e_op.dim(),
            right: number_op.dim(),
        });
    }
    let action = number_op.matrix() * Complex64::new(hbar, 0.0);
    let comm = e_op.matrix() * &action - action * e_op.matrix();
    Ok(comm - e_op.matrix() * Complex64::new(hbar, 0.0))
}

/// Measurement statistics of a state over a Pegg–Barnett phase basis.
#[derive(Debug, Clone)]
pub struct PhaseDistribution {
    pub angles: Vec<f64>,
    pub probabilities: Vec<f64>,
}

/// Probabilities |⟨θ_m|ψ⟩|² of a normalized state.
pub fn phase_distribution(
    state_coeffs: &[Complex64],
    basis: &PhaseBasis,
) -> Result<PhaseDistribution> {
    let dim = basis.states[0].len();
    if state_coeffs.len() != dim {
        return Err(Error::DimensionMismatch {
            left: state_coeffs.len(),
            right: dim,
        });
    }
    let norm_sq: f64 = state_coeffs.iter().map(|c| c.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > 1e-10 {
        return Err(Error::Contract(format!(
            "state norm² = {norm_sq} is not 1 ± 1e-10"
        )));
    }
    let state = DVector::from_column_slice(state_coeffs);
    let probabilities: Vec<f64> = basis
        .states
        .iter()
        .map(|theta| theta.dotc(&state).norm_sqr())
        .collect();
    let total: f64 = probabilities.iter().sum();
    assert!(
        (total - 1.0).abs() <= 1e-12,
        "phase probabilities sum to {total}"
    );
    Ok(PhaseDistribution {
        angles: basis.angles.clone(),
        probabilities,
    })
}

/// One realized scheme: the e^{iθ̂} analog, the Hermitian angle operator
/// when the scheme has one, and the scheme's documented defect.
pub struct PhaseRealization {
    pub exponential: OperatorMatrix,
    pub angle: Option<OperatorMatrix>,
    pub notes: &'static str,
}

/// A named phase-operator construction selectable at runtime.
pub trait PhaseScheme: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn build(&self, dim: usize, theta0: f64) -> PhaseRealization;
}

struct DiracScheme;

impl PhaseScheme for DiracScheme {
    fn name(&self) -> &'static str {
        "dirac"
    }
    fn summary(&self) -> &'static str {
        "a n^{-1/2} with the pseudo-inverse on the vacuum"
    }
    fn build(&self, dim: usize, _theta0: f64) -> PhaseRealization {
        PhaseRealization {
            exponential: dirac_phase(dim),
            angle: None,
            notes: "requires the singular n^{-1/2}; the exponential is not unitary",
        }
    }
}

struct SusskindGlogowerScheme;

impl PhaseScheme for SusskindGlogowerScheme {
    fn name(&self) -> &'static str {
        "susskind-glogower"
    }
    fn summary(&self) -> &'static str {
        "one-sided shift sum |n><n+1|"
    }
    fn build(&self, dim: usize, _theta0: f64) -> PhaseRealization {
        let (e, _) = susskind_glogower(dim);
        PhaseRealization {
            exponential: e,
            angle: None,
            notes: "one-sided unitary: E E'= 1 but E'E = 1 - |0><0|",
        }
    }
}

struct PeggBarnettScheme;

impl PhaseScheme for PeggBarnettScheme {
    fn name(&self) -> &'static str {
        "pegg-barnett"
    }
    fn summary(&self) -> &'static str {
        "Hermitian angle operator on a finite subspace"
    }
    fn build(&self, dim: usize, theta0: f64) -> PhaseRealization {
        let (theta_op, basis) = pegg_barnett(dim, theta0);
        PhaseRealization {
            exponential: pegg_barnett_exponential(&basis),
            angle: Some(theta_op),
            notes: "Hermitian with exact spectrum, but defined only on the truncated subspace",
        }
    }
}

struct ExtendedScheme;

impl PhaseScheme for ExtendedScheme {
    fn name(&self) -> &'static str {
        "extended"
    }
    fn summary(&self) -> &'static str {
        "bilateral shift over negative number labels, cyclically closed"
    }
    fn build(&self, dim: usize, _theta0: f64) -> PhaseRealization {
        let n_min = -((dim / 2) as i64);
        let n_max = dim as i64 - 1 + n_min;
        PhaseRealization {
            exponential: extended_phase_operator(n_min, n_max.max(1))
                .expect("window is two-sided"),
            angle: None,
            notes: "exactly unitary, but the negative number labels have no physical meaning",
        }
    }
}

/// All built-in schemes, in reporting order.
pub fn registry() -> Vec<Box<dyn PhaseScheme>> {
    vec![
        Box::new(DiracScheme),
        Box::new(SusskindGlogowerScheme),
        Box::new(PeggBarnettScheme),
        Box::new(ExtendedScheme),
    ]
}

/// Look a scheme up by its registry name.
pub fn scheme_by_name(name: &str) -> Result<Box<dyn PhaseScheme>> {
    registry()
        .into_iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| Error::UnknownName {
            kind: "phase scheme",
            name: name.to_string(),
            known: registry()
                .iter()
                .map(|s| s.name())
                .collect::<Vec<_>>()
                .join(", "),
        })
}
