//! Time-dependent Hamiltonian coefficients.
//!
//! An oscillator is defined by three real coefficient functions X(t), Y(t),
//! Z(t) entering H = (X/2)p² + Y pq + (Z/2)q². Each concrete coefficient
//! set implements [`Coefficients`]; [`ProfileCatalog`] registers the
//! built-in families by name so they can be selected from a config file or
//! the command line.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Closed real time interval on which a profile is defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeInterval {
    pub lo: f64,
    pub hi: f64,
}

impl TimeInterval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo < hi, "empty time interval");
        Self { lo, hi }
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo && t <= self.hi
    }

    pub fn span(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Step for the centered-difference fallback derivatives.
fn fd_step(t: f64) -> f64 {
    1e-5 * t.abs().max(1.0)
}

/// One family of coefficient functions.
///
/// `dx`/`dy` default to centered differences; catalog profiles override
/// them with closed forms.
pub trait Coefficients: Send + Sync {
    fn x(&self, t: f64) -> f64;
    fn y(&self, t: f64) -> f64;
    fn z(&self, t: f64) -> f64;

    fn dx(&self, t: f64) -> f64 {
        let h = fd_step(t);
        (self.x(t + h) - self.x(t - h)) / (2.0 * h)
    }

    fn dy(&self, t: f64) -> f64 {
        let h = fd_step(t);
        (self.y(t + h) - self.y(t - h)) / (2.0 * h)
    }
}

/// A named, validated coefficient profile: the oscillator definition.
///
/// Construction samples the domain to enforce X(t) > 0 and to check that
/// the supplied derivatives track centered differences of X and Y.
/// Immutable afterwards; cloning is cheap and profiles may be evaluated
/// concurrently.
#[derive(Clone)]
pub struct CoefficientProfile {
    name: String,
    inner: Arc<dyn Coefficients>,
    domain: TimeInterval,
}

impl fmt::Debug for CoefficientProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientProfile")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .finish()
    }
}

/// Positivity is sampled, not proven; 10^3 points over the domain.
const VALIDATION_SAMPLES: usize = 1000;
/// Relative tolerance for closed-form derivatives vs centered differences.
const DERIVATIVE_RTOL: f64 = 1e-6;

impl CoefficientProfile {
    pub fn new(
        name: impl Into<String>,
        inner: Arc<dyn Coefficients>,
        domain: TimeInterval,
    ) -> Result<Self> {
        let name = name.into();
        let n = VALIDATION_SAMPLES;
        for k in 0..n {
            let t = domain.lo + domain.span() * (k as f64) / ((n - 1) as f64);
            let x = inner.x(t);
            if x.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || !x.is_finite() {
                return Err(Error::InvalidProfile {
                    name,
                    reason: format!("X({t}) = {x} is not positive"),
                });
            }
            let h = fd_step(t);
            let dx_fd = (inner.x(t + h) - inner.x(t - h)) / (2.0 * h);
            let dy_fd = (inner.y(t + h) - inner.y(t - h)) / (2.0 * h);
            let dx = inner.dx(t);
            let dy = inner.dy(t);
            if (dx - dx_fd).abs() > DERIVATIVE_RTOL * dx.abs().max(1.0) {
                return Err(Error::InvalidProfile {
                    name,
                    reason: format!("dX({t}) = {dx} disagrees with centered difference {dx_fd}"),
                });
            }
            if (dy - dy_fd).abs() > DERIVATIVE_RTOL * dy.abs().max(1.0) {
                return Err(Error::InvalidProfile {
                    name,
                    reason: format!("dY({t}) = {dy} disagrees with centered difference {dy_fd}"),
                });
            }
        }
        Ok(Self { name, inner, domain })
    }

    /// Build a profile from plain closures, with optional closed-form
    /// derivatives (centered differences otherwise).
    #[allow(clippy::too_many_arguments)]
    pub fn from_fns(
        name: impl Into<String>,
        x: impl Fn(f64) -> f64 + Send + Sync + 'static,
        y: impl Fn(f64) -> f64 + Send + Sync + 'static,
        z: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dx: Option<Box<dyn Fn(f64) -> f64 + Send + Sync>>,
        dy: Option<Box<dyn Fn(f64) -> f64 + Send + Sync>>,
        domain: TimeInterval,
    ) -> Result<Self> {
        struct FnCoefficients {
            x: Box<dyn Fn(f64) -> f64 + Send + Sync>,
            y: Box<dyn Fn(f64) -> f64 + Send + Sync>,
            z: Box<dyn Fn(f64) -> f64 + Send + Sync>,
            dx: Option<Box<dyn Fn(f64) -> f64 + Send + Sync>>,
            dy: Option<Box<dyn Fn(f64) -> f64 + Send + Sync>>,
        }
        impl Coefficients for FnCoefficients {
            fn x(&self, t: f64) -> f64 {
                (self.x)(t)
            }
            fn y(&self, t: f64) -> f64 {
                (self.y)(t)
            }
            fn z(&self, t: f64) -> f64 {
                (self.z)(t)
            }
            fn dx(&self, t: f64) -> f64 {
                match &self.dx {
                    Some(f) => f(t),
                    None => {
                        let h = fd_step(t);
                        ((self.x)(t + h) - (self.x)(t - h)) / (2.0 * h)
                    }
                }
            }
            fn dy(&self, t: f64) -> f64 {
                match &self.dy {
                    Some(f) => f(t),
                    None => {
                        let h = fd_step(t);
                        ((self.y)(t + h) - (self.y)(t - h)) / (2.0 * h)
                    }
                }
            }
        }
        Self::new(
            name,
            Arc::new(FnCoefficients {
                x: Box::new(x),
                y: Box::new(y),
                z: Box::new(z),
                dx,
                dy,
            }),
            domain,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> TimeInterval {
        self.domain
    }

    pub fn check_domain(&self, t: f64) -> Result<()> {
        if self.domain.contains(t) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                t,
                lo: self.domain.lo,
                hi: self.domain.hi,
            })
        }
    }

    pub fn x(&self, t: f64) -> f64 {
        self.inner.x(t)
    }

    pub fn y(&self, t: f64) -> f64 {
        self.inner.y(t)
    }

    pub fn z(&self, t: f64) -> f64 {
        self.inner.z(t)
    }

    pub fn dx(&self, t: f64) -> f64 {
        self.inner.dx(t)
    }

    pub fn dy(&self, t: f64) -> f64 {
        self.inner.dy(t)
    }

    /// Second derivative of X by centered differences of dX.
    pub fn ddx(&self, t: f64) -> f64 {
        let h = fd_step(t);
        (self.inner.dx(t + h) - self.inner.dx(t - h)) / (2.0 * h)
    }

    /// Effective squared frequency of the mode equation,
    /// Ω²(t) = XZ − Y² + (ẊY − XẎ)/X. May be negative (inverted
    /// oscillator).
    pub fn effective_frequency_sq(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        let (x, y, z) = (self.x(t), self.y(t), self.z(t));
        let (dx, dy) = (self.dx(t), self.dy(t));
        Ok(x * z - y * y + (dx * y - x * dy) / x)
    }

    /// Classical Hamiltonian value H(q, p, t) = (X/2)p² + Y pq + (Z/2)q².
    pub fn hamiltonian_value(&self, q: f64, p: f64, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        let (x, y, z) = (self.x(t), self.y(t), self.z(t));
        Ok(0.5 * x * p * p + y * p * q + 0.5 * z * q * q)
    }
}

/// Default domain for the convenience constructors.
pub const DEFAULT_DOMAIN: TimeInterval = TimeInterval { lo: -100.0, hi: 100.0 };

struct Constant {
    omega0: f64,
}

impl Coefficients for Constant {
    fn x(&self, _t: f64) -> f64 {
        1.0
    }
    fn y(&self, _t: f64) -> f64 {
        0.0
    }
    fn z(&self, _t: f64) -> f64 {
        self.omega0 * self.omega0
    }
    fn dx(&self, _t: f64) -> f64 {
        0.0
    }
    fn dy(&self, _t: f64) -> f64 {
        0.0
    }
}

struct CaldirolaKanai {
    gamma: f64,
    omega0: f64,
}

impl Coefficients for CaldirolaKanai {
    fn x(&self, t: f64) -> f64 {
        (-self.gamma * t).exp()
    }
    fn y(&self, _t: f64) -> f64 {
        0.0
    }
    fn z(&self, t: f64) -> f64 {
        self.omega0 * self.omega0 * (self.gamma * t).exp()
    }
    fn dx(&self, t: f64) -> f64 {
        -self.gamma * (-self.gamma * t).exp()
    }
    fn dy(&self, _t: f64) -> f64 {
        0.0
    }
}

struct Pumped {
    omega0: f64,
    epsilon: f64,
    nu: f64,
}

impl Coefficients for Pumped {
    fn x(&self, _t: f64) -> f64 {
        1.0
    }
    fn y(&self, _t: f64) -> f64 {
        0.0
    }
    fn z(&self, t: f64) -> f64 {
        self.omega0 * self.omega0 * (1.0 + self.epsilon * (self.nu * t).cos())
    }
    fn dx(&self, _t: f64) -> f64 {
        0.0
    }
    fn dy(&self, _t: f64) -> f64 {
        0.0
    }
}

struct CrossTerm {
    omega0: f64,
    y0: f64,
}

impl Coefficients for CrossTerm {
    fn x(&self, _t: f64) -> f64 {
        1.0
    }
    fn y(&self, _t: f64) -> f64 {
        self.y0
    }
    fn z(&self, _t: f64) -> f64 {
        self.omega0 * self.omega0 + self.y0 * self.y0
    }
    fn dx(&self, _t: f64) -> f64 {
        0.0
    }
    fn dy(&self, _t: f64) -> f64 {
        0.0
    }
}

/// Undamped oscillator: X = 1, Y = 0, Z = ω₀².
pub fn constant(omega0: f64) -> CoefficientProfile {
    CoefficientProfile::new("constant", Arc::new(Constant { omega0 }), DEFAULT_DOMAIN)
        .expect("constant profile is valid")
}

/// Damped (Caldirola–Kanai) oscillator: X = e^{−γt}, Y = 0, Z = ω₀²e^{γt}.
pub fn caldirola_kanai(gamma: f64, omega0: f64) -> CoefficientProfile {
    CoefficientProfile::new(
        "caldirola_kanai",
        Arc::new(CaldirolaKanai { gamma, omega0 }),
        DEFAULT_DOMAIN,
    )
    .expect("caldirola_kanai profile is valid")
}

/// Parametrically pumped oscillator: X = 1, Y = 0, Z = ω₀²(1 + ε cos νt).
pub fn pumped(omega0: f64, epsilon: f64, nu: f64) -> CoefficientProfile {
    CoefficientProfile::new(
        "pumped",
        Arc::new(Pumped { omega0, epsilon, nu }),
        DEFAULT_DOMAIN,
    )
    .expect("pumped profile is valid")
}

/// Constant cross-term oscillator: X = 1, Y = y₀, Z = ω₀² + y₀².
pub fn cross_term(omega0: f64, y0: f64) -> CoefficientProfile {
    CoefficientProfile::new(
        "cross_term",
        Arc::new(CrossTerm { omega0, y0 }),
        DEFAULT_DOMAIN,
    )
    .expect("cross_term profile is valid")
}

/// Parameter map for catalog builds.
pub type ParamMap = BTreeMap<String, f64>;

type ProfileBuilder = fn(&ParamMap, TimeInterval) -> Result<CoefficientProfile>;

fn get_param(params: &ParamMap, name: &str) -> Result<f64> {
    params.get(name).copied().ok_or_else(|| Error::InvalidParameter {
        name: name.to_string(),
        reason: "missing".to_string(),
    })
}

fn reject_unknown(params: &ParamMap, known: &[&str]) -> Result<()> {
    for key in params.keys() {
        if !known.contains(&key.as_str()) {
            return Err(Error::InvalidParameter {
                name: key.clone(),
                reason: format!("unknown; expected one of {known:?}"),
            });
        }
    }
    Ok(())
}

/// Registry of named coefficient families, each buildable from a parameter
/// map. This is how config files and the CLI select an oscillator.
pub struct ProfileCatalog {
    builders: BTreeMap<&'static str, ProfileBuilder>,
}

impl Default for ProfileCatalog {
    fn default() -> Self {
        let mut builders: BTreeMap<&'static str, ProfileBuilder> = BTreeMap::new();
        builders.insert("constant", |params, domain| {
            reject_unknown(params, &["omega0"])?;
            let omega0 = get_param(params, "omega0")?;
            CoefficientProfile::new("constant", Arc::new(Constant { omega0 }), domain)
        });
        builders.insert("caldirola_kanai", |params, domain| {
            reject_unknown(params, &["gamma", "omega0"])?;
            let gamma = get_param(params, "gamma")?;
            let omega0 = get_param(params, "omega0")?;
            CoefficientProfile::new(
                "caldirola_kanai",
                Arc::new(CaldirolaKanai { gamma, omega0 }),
                domain,
            )
        });
        builders.insert("pumped", |params, domain| {
            reject_unknown(params, &["omega0", "epsilon", "nu"])?;
            let omega0 = get_param(params, "omega0")?;
            let epsilon = get_param(params, "epsilon")?;
            let nu = get_param(params, "nu")?;
            CoefficientProfile::new("pumped", Arc::new(Pumped { omega0, epsilon, nu }), domain)
        });
        builders.insert("cross_term", |params, domain| {
            reject_unknown(params, &["omega0", "y0"])?;
            let omega0 = get_param(params, "omega0")?;
            let y0 = get_param(params, "y0")?;
            CoefficientProfile::new("cross_term", Arc::new(CrossTerm { omega0, y0 }), domain)
        });
        Self { builders }
    }
}

impl ProfileCatalog {
    pub fn names(&self) -> Vec<&'static str> {
        self.builders.keys().copied().collect()
    }

    pub fn build(
        &self,
        name: &str,
        params: &ParamMap,
        domain: TimeInterval,
    ) -> Result<CoefficientProfile> {
        match self.builders.get(name) {
            Some(builder) => builder(params, domain),
            None => Err(Error::UnknownName {
                kind: "profile",
                name: name.to_string(),
                known: self.names().join(", "),
            }),
        }
    }
}
