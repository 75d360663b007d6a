//! Mode entanglement of two-mode boson states.
//!
//! A state is separable with respect to a pair of modes iff it is diagonal in
//! that pair's occupation basis, and the negativity detects exactly this. The
//! partial transpose of a sector matrix is a generalised permutation matrix on
//! the two-mode space, so its singular values are the moduli `|ρ_kℓ|` and
//! `𝒩 = ½ Σ_{k≠ℓ} |ρ_kℓ|`.

use std::f64::consts::PI;

use crate::dynamics::{evolve_dephasing, quadrature_order_floor, EvolutionParams, QUADRATURE_AGREEMENT};
use crate::fock::{cd_vacuum_state, BasisTag, BosonSector, ChangeBasis, DensityMatrix, LogBinomialTable};
use crate::quadrature::GaussHermite;
use crate::{CMatrix, Complex64, Error, Result};

/// Negativities at or below this are treated as zero.
pub const ZERO_NEGATIVITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Negativity {
    value: f64,
    bipartition: BasisTag,
}

impl Negativity {
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn bipartition(&self) -> BasisTag {
        self.bipartition
    }

    pub fn is_zero(&self) -> bool {
        self.value <= ZERO_NEGATIVITY_TOL
    }
}

/// Partial transpose with respect to the first mode, as a sparse operator on
/// the two-mode space spanned by `|p, q⟩`, `0 ≤ p, q ≤ N`.
///
/// `⟨ℓ, N−k| ρ^{T_A} |k, N−ℓ⟩ = ρ_kℓ`; every row and every column holds at
/// most one non-zero entry.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialTranspose {
    sector: BosonSector,
    basis: BasisTag,
    entries: Vec<(usize, usize, Complex64)>,
}

impl PartialTranspose {
    pub fn sector(&self) -> BosonSector {
        self.sector
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    /// Index of `|p, q⟩` in the `(N+1)²`-dimensional two-mode space.
    pub fn state_index(&self, p: usize, q: usize) -> usize {
        p * self.sector.dim() + q
    }

    /// `(row, column, value)` triples.
    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn to_dense(&self) -> CMatrix {
        let size = self.sector.dim() * self.sector.dim();
        let mut m = CMatrix::zeros(size, size);
        for &(r, c, v) in &self.entries {
            m[(r, c)] = v;
        }
        m
    }

    /// Diagonal of `(ρ^{T_A})† ρ^{T_A}`: `|ρ_kℓ|²` on `|k, N−ℓ⟩`.
    pub fn gram_diagonal(&self) -> Vec<(usize, f64)> {
        self.entries.iter().map(|&(_, c, v)| (c, v.norm_sqr())).collect()
    }

    /// `‖ρ^{T_A}‖₁ = Σ |ρ_kℓ|`.
    pub fn trace_norm(&self) -> f64 {
        self.entries.iter().map(|(_, _, v)| v.norm()).sum()
    }

    /// Trace norm through a dense SVD; cross-check for [`Self::trace_norm`].
    pub fn trace_norm_svd(&self) -> f64 {
        self.to_dense().singular_values().iter().sum()
    }
}

/// Partial transpose of `rho` in the occupation basis it is expressed in.
pub fn partial_transpose(rho: &DensityMatrix) -> PartialTranspose {
    let sector = rho.sector();
    let n = sector.n_particles();
    let dim = sector.dim();
    let mut entries = Vec::with_capacity(dim * dim);
    for k in 0..dim {
        for l in 0..dim {
            let value = rho.get(k, l);
            if value == Complex64::new(0.0, 0.0) {
                continue;
            }
            let row = l * dim + (n - k);
            let col = k * dim + (n - l);
            entries.push((row, col, value));
        }
    }
    PartialTranspose {
        sector,
        basis: rho.basis(),
        entries,
    }
}

/// `𝒩 = ½ Σ_{k≠ℓ} |ρ_kℓ|` in the occupation basis of `bipartition`.
pub fn negativity(rho: &DensityMatrix, bipartition: BasisTag) -> Negativity {
    let rho = rho.change_basis(bipartition);
    let entries = rho.entries();
    let mut sum = 0.0;
    for k in 0..rho.dim() {
        for l in 0..rho.dim() {
            if k != l {
                sum += entries[(k, l)].norm();
            }
        }
    }
    Negativity {
        value: 0.5 * sum,
        bipartition,
    }
}

/// `(‖ρ^{T_A}‖₁ − 1)/2` with the trace norm from a dense SVD.
pub fn negativity_by_svd(rho: &DensityMatrix, bipartition: BasisTag) -> Negativity {
    let rho = rho.change_basis(bipartition);
    let value = 0.5 * (partial_transpose(&rho).trace_norm_svd() - 1.0);
    Negativity {
        value: value.max(0.0),
        bipartition,
    }
}

/// `(𝒩_AB(ρ(t)), e^{−γt/2} 𝒩_AB(ρ(0)))`; the first never exceeds the second.
pub fn negativity_decay_check(rho0: &DensityMatrix, params: EvolutionParams) -> Result<(f64, f64)> {
    let evolved = evolve_dephasing(rho0, params)?;
    let lhs = negativity(&evolved, BasisTag::AB).value();
    let rhs = (-0.5 * params.mu()).exp() * negativity(rho0, BasisTag::AB).value();
    Ok((lhs, rhs))
}

/// Evolves `|N,0⟩_CD` under dephasing and returns its CD negativity.
pub fn cd_entanglement_generation(n_particles: usize, params: EvolutionParams) -> Result<Negativity> {
    if n_particles < 2 {
        return Err(Error::domain(format!(
            "CD entanglement generation needs N ≥ 2, got {n_particles}"
        )));
    }
    let sector = BosonSector::new(n_particles);
    let rho0 = DensityMatrix::from_pure(&cd_vacuum_state(sector, BasisTag::AB));
    let rho_t = evolve_dephasing(&rho0, params)?;
    Ok(negativity(&rho_t, BasisTag::CD))
}

/// `ξ = cos²(θ/2)` for the rotation angle `θ = u√(γt/2)` of the Kraus integral:
/// the rotated vacuum is `(√ξ c† + i√(1−ξ) d†)^N |0⟩/√N!` up to the sign of
/// the square roots.
pub fn xi(u: f64, mu: f64) -> f64 {
    let half_angle = 0.5 * u * (0.5 * mu).sqrt();
    half_angle.cos().powi(2)
}

/// `ρ(t)` of `|N,0⟩_CD` built directly in the CD basis as a Gaussian mixture
/// of rotated pure states
/// `|ξ_u⟩ = Σ_m √C(N,m) cos^m(θ/2) (i sin(θ/2))^{N−m} |m, N−m⟩_CD`.
///
/// Same adaptive order schedule as
/// [`crate::dynamics::evolve_by_quadrature`]. Independent of the AB closed
/// form and of the basis-change matrix.
pub fn cd_vacuum_by_quadrature(n_particles: usize, params: EvolutionParams, n_nodes: usize) -> Result<DensityMatrix> {
    if n_nodes == 0 {
        return Err(Error::domain("quadrature needs at least one node"));
    }
    let sector = BosonSector::new(n_particles);
    let mu = params.mu();
    let mut order = n_nodes.max(quadrature_order_floor(n_particles, mu));
    let mut current = rotated_vacuum_mixture(sector, mu, &GaussHermite::new(order));
    if mu > 0.0 {
        while order < (1 << 16) {
            order *= 2;
            let next = rotated_vacuum_mixture(sector, mu, &GaussHermite::new(order));
            let change = (&next - &current).iter().map(|z| z.norm()).fold(0.0, f64::max);
            current = next;
            if change < QUADRATURE_AGREEMENT {
                break;
            }
        }
    }
    DensityMatrix::from_entries_unchecked(sector, BasisTag::CD, current)
}

fn rotated_vacuum_mixture(sector: BosonSector, mu: f64, rule: &GaussHermite) -> CMatrix {
    let dim = sector.dim();
    let n = sector.n_particles();
    let table = LogBinomialTable::new(sector);
    let root_choose: Vec<f64> = table.values().iter().map(|l| (0.5 * l).exp()).collect();
    let mut acc = CMatrix::zeros(dim, dim);
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (&v, &w) in rule.nodes().iter().zip(rule.weights()) {
        // u = 2v, so θ/2 = v√(μ/2)
        let half_angle = v * (0.5 * mu).sqrt();
        let cos = Complex64::new(half_angle.cos(), 0.0);
        let isin = Complex64::new(0.0, half_angle.sin());
        for (m, a) in amps.iter_mut().enumerate() {
            *a = cos.powu(m as u32) * isin.powu((n - m) as u32) * root_choose[m];
        }
        let w = w / PI.sqrt();
        for l in 0..dim {
            let right = amps[l].conj() * w;
            for k in 0..dim {
                acc[(k, l)] += amps[k] * right;
            }
        }
    }
    acc
}
