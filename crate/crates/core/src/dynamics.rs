//! Closed-form evolution under collective dephasing and the `J_z` rotation.
//!
//! In the AB occupation basis both generators act diagonally on matrix
//! entries: dephasing multiplies `ρ_kℓ` by `e^{−γt(k−ℓ)²/2}` and the unitary
//! flow by `e^{−iγt(k−ℓ)}`. The superoperator is stored as its diagonal
//! only, so memory stays `O(N²)`.

use std::f64::consts::PI;

use crate::fock::{BasisTag, BosonSector, DensityMatrix};
use crate::quadrature::GaussHermite;
use crate::{CMatrix, Complex64, Error, Result};

/// Starting order of the Gauss–Hermite oracle.
pub const DEFAULT_QUADRATURE_NODES: usize = 80;
/// Successive quadrature orders must agree entrywise to this level.
pub const QUADRATURE_AGREEMENT: f64 = 1e-11;
const MAX_QUADRATURE_NODES: usize = 1 << 16;

/// Rate `γ ≥ 0` and time `t ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionParams {
    gamma: f64,
    t: f64,
}

impl EvolutionParams {
    pub fn new(gamma: f64, t: f64) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::domain(format!("gamma must be finite and ≥ 0, got {gamma}")));
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::domain(format!("t must be finite and ≥ 0, got {t}")));
        }
        if !(gamma * t).is_finite() {
            return Err(Error::domain("gamma·t overflows"));
        }
        Ok(Self { gamma, t })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `μ = γt`.
    pub fn mu(&self) -> f64 {
        self.gamma * self.t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    /// `L[ρ] = J_z ρ J_z − ½{J_z², ρ}`.
    Dephasing,
    /// `L[ρ] = −i[J_z, ρ]`.
    Hamiltonian,
}

/// Diagonal Liouville-space matrix of a generator, indexed by `(k, ℓ)` as
/// `k·(N+1) + ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    sector: BosonSector,
    kind: GeneratorKind,
    diag: Vec<Complex64>,
}

impl GeneratorMatrix {
    pub fn sector(&self) -> BosonSector {
        self.sector
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn diag(&self) -> &[Complex64] {
        &self.diag
    }

    pub fn entry(&self, k: usize, l: usize) -> Complex64 {
        self.diag[k * self.sector.dim() + l]
    }

    /// `L[X]` for a matrix `X` in the AB basis.
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        CMatrix::from_fn(x.nrows(), x.ncols(), |k, l| self.entry(k, l) * x[(k, l)])
    }
}

pub fn generator_matrix(sector: BosonSector, kind: GeneratorKind) -> GeneratorMatrix {
    let dim = sector.dim();
    let mut diag = Vec::with_capacity(dim * dim);
    for k in 0..dim {
        for l in 0..dim {
            let d = k as f64 - l as f64;
            diag.push(match kind {
                GeneratorKind::Dephasing => Complex64::new(-0.5 * d * d, 0.0),
                GeneratorKind::Hamiltonian => Complex64::new(0.0, -d),
            });
        }
    }
    GeneratorMatrix { sector, kind, diag }
}

/// Applies `exp(γt·L)` entrywise.
fn propagate(rho: &DensityMatrix, params: EvolutionParams, kind: GeneratorKind) -> Result<DensityMatrix> {
    rho.require_basis(BasisTag::AB)?;
    let mu = params.mu();
    let entries = rho.entries();
    let evolved = CMatrix::from_fn(entries.nrows(), entries.ncols(), |k, l| {
        let d = k as f64 - l as f64;
        let factor = match kind {
            GeneratorKind::Dephasing => Complex64::new((-0.5 * mu * d * d).exp(), 0.0),
            GeneratorKind::Hamiltonian => Complex64::from_polar(1.0, -mu * d),
        };
        factor * entries[(k, l)]
    });
    Ok(rho.with_entries(evolved))
}

/// `ρ_kℓ(t) = e^{−γt(k−ℓ)²/2} ρ_kℓ`; `rho` must be in the AB basis.
pub fn evolve_dephasing(rho: &DensityMatrix, params: EvolutionParams) -> Result<DensityMatrix> {
    propagate(rho, params, GeneratorKind::Dephasing)
}

/// `ρ_kℓ(t) = e^{−iγt(k−ℓ)} ρ_kℓ`; `rho` must be in the AB basis.
pub fn evolve_hamiltonian(rho: &DensityMatrix, params: EvolutionParams) -> Result<DensityMatrix> {
    propagate(rho, params, GeneratorKind::Hamiltonian)
}

/// Gauss–Hermite order needed to resolve the fastest phase `√(2μ)·N`.
pub fn quadrature_order_floor(n_particles: usize, mu: f64) -> usize {
    let n = n_particles as f64;
    (mu * n * n).ceil() as usize
}

/// Evaluates the Kraus integral
/// `ρ(t) = (2√π)^{−1} ∫ du e^{−u²/4} e^{−i√(γt/2) u J_z} ρ e^{i√(γt/2) u J_z}`
/// with `u = 2v` and a Gauss–Hermite rule in `v`.
///
/// `n_nodes` is the starting order. It is raised to
/// [`quadrature_order_floor`] and doubled until two successive orders agree
/// entrywise to [`QUADRATURE_AGREEMENT`].
pub fn evolve_by_quadrature(rho: &DensityMatrix, params: EvolutionParams, n_nodes: usize) -> Result<DensityMatrix> {
    rho.require_basis(BasisTag::AB)?;
    if n_nodes == 0 {
        return Err(Error::domain("quadrature needs at least one node"));
    }
    let mu = params.mu();
    if mu == 0.0 {
        return Ok(rho.clone());
    }
    let mut order = n_nodes.max(quadrature_order_floor(rho.sector().n_particles(), mu));
    let mut current = kraus_sum(rho, mu, &GaussHermite::new(order));
    while order < MAX_QUADRATURE_NODES {
        order *= 2;
        let next = kraus_sum(rho, mu, &GaussHermite::new(order));
        let change = (&next - &current).iter().map(|z| z.norm()).fold(0.0, f64::max);
        current = next;
        if change < QUADRATURE_AGREEMENT {
            break;
        }
    }
    Ok(rho.with_entries(current))
}

/// `π^{−1/2} Σ_j w_j R_j ρ R_j†` with `R_j = exp(−i√(2μ) v_j J_z)`.
pub(crate) fn kraus_sum(rho: &DensityMatrix, mu: f64, rule: &GaussHermite) -> CMatrix {
    let dim = rho.dim();
    let n = rho.sector().n_particles() as f64;
    let scale = (2.0 * mu).sqrt();
    let entries = rho.entries();
    let mut acc = CMatrix::zeros(dim, dim);
    let mut phases = vec![Complex64::new(0.0, 0.0); dim];
    for (&v, &w) in rule.nodes().iter().zip(rule.weights()) {
        let angle = scale * v;
        for (k, p) in phases.iter_mut().enumerate() {
            *p = Complex64::from_polar(1.0, -angle * (k as f64 - 0.5 * n));
        }
        let w = w / PI.sqrt();
        for l in 0..dim {
            let right = phases[l].conj() * w;
            for k in 0..dim {
                acc[(k, l)] += phases[k] * entries[(k, l)] * right;
            }
        }
    }
    acc
}
