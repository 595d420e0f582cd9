//! Run configuration: a single TOML file, one canonical parser.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use num_complex::Complex64;
use serde::Deserialize;

use oscinv_core::coefficients::{CoefficientProfile, ProfileCatalog, TimeInterval};
use oscinv_core::dynamics::REL_TOL_RANGE;
use oscinv_core::fock::N_MAX_LIMIT;

/// Suite names accepted in `run.commands`.
pub const KNOWN_COMMANDS: [&str; 6] = [
    "simulate",
    "invariants-check",
    "quantum-check",
    "squeeze",
    "phase-ops",
    "report",
];

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub profile: ProfileSection,
    pub run: RunSection,
    pub seeds: Vec<SeedPair>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub t_span: [f64; 2],
    pub rel_tol: f64,
    #[serde(default = "default_hbar")]
    pub hbar: f64,
    pub n_max: usize,
    pub dim: usize,
    #[serde(default)]
    pub theta0: f64,
    /// Monte-Carlo RNG seed; mandatory so reports are reproducible.
    pub seed: u64,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: usize,
    pub commands: Vec<String>,
    pub output_dir: PathBuf,
}

fn default_mc_samples() -> usize {
    200_000
}

fn default_hbar() -> f64 {
    1.0
}

/// A mode seed (u₀, u̇₀) as [re, im] pairs.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedPair {
    pub u0: [f64; 2],
    pub udot0: [f64; 2],
}

impl SeedPair {
    pub fn u0(&self) -> Complex64 {
        Complex64::new(self.u0[0], self.u0[1])
    }

    pub fn udot0(&self) -> Complex64 {
        Complex64::new(self.udot0[0], self.udot0[1])
    }
}

/// Parsed and validated configuration, with the profile already built
/// from the catalog.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub profile: CoefficientProfile,
    pub profile_name: String,
    pub t_span: (f64, f64),
    pub rel_tol: f64,
    pub hbar: f64,
    pub n_max: usize,
    pub dim: usize,
    pub theta0: f64,
    pub seed: u64,
    pub mc_samples: usize,
    pub commands: Vec<String>,
    pub output_dir: PathBuf,
    pub seeds: Vec<SeedPair>,
}

impl RunConfig {
    /// Load a config file, validate every field, and resolve the profile.
    /// `OSCINV_OUTPUT_DIR` overrides `run.output_dir` when set.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let parsed: ConfigFile = toml::from_str(&text).context("parsing config")?;
        Self::from_file(parsed)
    }

    pub fn from_file(parsed: ConfigFile) -> anyhow::Result<Self> {
        let run = &parsed.run;
        let [t0, t1] = run.t_span;
        if t0 >= t1 || t0.is_nan() || t1.is_nan() {
            bail!("t_span [{t0}, {t1}] must be increasing");
        }
        if !(REL_TOL_RANGE.0..=REL_TOL_RANGE.1).contains(&run.rel_tol) {
            bail!(
                "rel_tol {} outside [{}, {}]",
                run.rel_tol,
                REL_TOL_RANGE.0,
                REL_TOL_RANGE.1
            );
        }
        if run.hbar <= 0.0 {
            bail!("hbar {} must be positive", run.hbar);
        }
        if run.n_max > N_MAX_LIMIT {
            bail!("n_max {} exceeds the validated limit {N_MAX_LIMIT}", run.n_max);
        }
        if run.dim < 2 {
            bail!("dim {} must be at least 2", run.dim);
        }
        if run.mc_samples < 100_000 {
            bail!("mc_samples {} below the 1e5 minimum", run.mc_samples);
        }
        if run.commands.is_empty() {
            bail!("commands list is empty");
        }
        for cmd in &run.commands {
            if !KNOWN_COMMANDS.contains(&cmd.as_str()) {
                bail!("unknown command `{cmd}`; known: {}", KNOWN_COMMANDS.join(", "));
            }
        }
        if parsed.seeds.is_empty() {
            bail!("at least one mode seed (u0, udot0) is required");
        }

        // integrate on a slightly padded domain so time stencils near the
        // span edges stay inside it
        let pad = 1.0f64.max(0.05 * (t1 - t0));
        let domain = TimeInterval::new(t0 - pad, t1 + pad);
        let catalog = ProfileCatalog::default();
        let profile = catalog
            .build(&parsed.profile.name, &parsed.profile.params, domain)
            .map_err(|e| anyhow::anyhow!("profile: {e}"))?;

        let output_dir = match std::env::var_os("OSCINV_OUTPUT_DIR") {
            Some(dir) => PathBuf::from(dir),
            None => run.output_dir.clone(),
        };

        Ok(Self {
            profile,
            profile_name: parsed.profile.name,
            t_span: (t0, t1),
            rel_tol: run.rel_tol,
            hbar: run.hbar,
            n_max: run.n_max,
            dim: run.dim,
            theta0: run.theta0,
            seed: run.seed,
            mc_samples: run.mc_samples,
            commands: run.commands.clone(),
            output_dir,
            seeds: parsed.seeds,
        })
    }
}
