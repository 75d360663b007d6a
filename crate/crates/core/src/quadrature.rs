//! Gauss–Hermite rules for `∫ e^{−v²} f(v) dv`.
//!
//! Small orders come from the Golub–Welsch eigenproblem. Large orders start
//! from the WKB phase of the Hermite functions and polish each root with
//! Newton steps on the orthonormal recurrence; only nodes whose weight is
//! representable (|v| ≤ [`NODE_CUTOFF`]) are kept.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;

/// Nodes beyond this carry weights below `e^{−196}` and are dropped.
pub const NODE_CUTOFF: f64 = 14.0;

const GOLUB_WELSCH_MAX_ORDER: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Rule of the given order (`order ≥ 1`).
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss–Hermite order must be positive");
        let roots = if order <= GOLUB_WELSCH_MAX_ORDER {
            golub_welsch_roots(order)
        } else {
            wkb_roots(order)
        };
        let mut nodes = Vec::with_capacity(roots.len());
        let mut weights = Vec::with_capacity(roots.len());
        for guess in roots {
            let (x, psi_prev) = newton_polish(order, guess);
            if x.abs() > NODE_CUTOFF {
                continue;
            }
            nodes.push(x);
            weights.push((-x * x).exp() / (order as f64 * psi_prev * psi_prev));
        }
        Self { order, nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ w_i f(v_i) ≈ ∫ e^{−v²} f(v) dv`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Orthonormal Hermite functions `ψ_n(x)` and `ψ_{n−1}(x)`.
fn hermite_functions(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Returns the polished root and `ψ_{n−1}` there.
fn newton_polish(n: usize, mut x: f64) -> (f64, f64) {
    let nf = n as f64;
    for _ in 0..100 {
        let (psi, psi_prev) = hermite_functions(n, x);
        let derivative = (2.0 * nf).sqrt() * psi_prev - x * psi;
        let step = psi / derivative;
        x -= step;
        if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            break;
        }
    }
    let (_, psi_prev) = hermite_functions(n, x);
    (x, psi_prev)
}

fn golub_welsch_roots(n: usize) -> Vec<f64> {
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut roots: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    roots.sort_by(f64::total_cmp);
    roots
}

// ψ_n(x) ≈ A(x) cos(Φ(x) − nπ/2) with Φ(x) = ∫₀ˣ √(2n+1 − s²) ds.
fn wkb_roots(n: usize) -> Vec<f64> {
    let r2 = 2.0 * n as f64 + 1.0;
    let r = r2.sqrt();
    let phase = |x: f64| 0.5 * (x * (r2 - x * x).sqrt() + r2 * (x / r).asin());
    let first = if n % 2 == 1 { 0.0 } else { FRAC_PI_2 };

    let mut positive = Vec::new();
    let mut target = first;
    let mut x: f64 = 0.0;
    loop {
        for _ in 0..60 {
            let step = (phase(x) - target) / (r2 - x * x).sqrt();
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        if x > NODE_CUTOFF + 1.0 {
            break;
        }
        positive.push(x);
        target += PI;
    }

    let mut roots: Vec<f64> = positive.iter().rev().filter(|&&x| x > 0.0).map(|x| -x).collect();
    roots.extend(positive);
    roots
}
