//! Gauss–Hermite quadrature rules for weight e^{−x²} on the real line.
//!
//! Nodes start from the Golub–Welsch eigenvalues of the Jacobi matrix and
//! are polished by two Newton steps on the orthonormal Hermite recurrence;
//! weights come from the Christoffel sum. Rules are cached and shared
//! read-only.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, SymmetricEigen};

/// One n-point rule: ∫ f(x) e^{−x²} dx ≈ Σ wᵢ f(xᵢ).
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Values of the orthonormal Hermite polynomials p₀..p_n at x
/// (orthonormal for the weight e^{−x²}; p₀ = π^{−1/4}).
fn orthonormal_hermite_values(n: usize, x: f64) -> Vec<f64> {
    let mut vals = Vec::with_capacity(n + 1);
    vals.push(std::f64::consts::PI.powf(-0.25));
    if n == 0 {
        return vals;
    }
    vals.push(x * std::f64::consts::SQRT_2 * vals[0]);
    for k in 1..n {
        let next = x * (2.0 / (k as f64 + 1.0)).sqrt() * vals[k]
            - (k as f64 / (k as f64 + 1.0)).sqrt() * vals[k - 1];
        vals.push(next);
    }
    vals
}

fn build_rule(n: usize) -> GaussHermite {
    assert!(n >= 1, "rule size must be positive");
    // Jacobi matrix: zero diagonal, off-diagonal sqrt(k/2)
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64 / 2.0).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let eigen = SymmetricEigen::new(jacobi);
    let mut nodes: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..2 {
            let vals = orthonormal_hermite_values(n, *x);
            let deriv = (2.0 * n as f64).sqrt() * vals[n - 1];
            *x -= vals[n] / deriv;
        }
        let vals = orthonormal_hermite_values(n - 1, *x);
        let christoffel: f64 = vals.iter().map(|v| v * v).sum();
        weights.push(1.0 / christoffel);
    }
    GaussHermite { nodes, weights }
}

static CACHE: OnceLock<RwLock<HashMap<usize, Arc<GaussHermite>>>> = OnceLock::new();

/// Fetch (or build and cache) the n-point rule.
pub fn gauss_hermite(n: usize) -> Arc<GaussHermite> {
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(rule) = cache.read().unwrap().get(&n) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(build_rule(n));
    cache
        .write()
        .unwrap()
        .entry(n)
        .or_insert_with(|| Arc::clone(&rule))
        .clone()
}
