//! Fisher information of the Hilbert–Schmidt normalised vector `|ρ⟩⟩` under
//! the Liouville-space generator `t·L`.

use nalgebra::DVector;

use super::moments::moment_sums;
use crate::dynamics::GeneratorMatrix;
use crate::fock::{BosonSector, DensityMatrix};
use crate::{Complex64, Error, Result};

/// `ρ_kℓ / √(Tr ρ²)` stacked row-major, index `k·(N+1) + ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiouvilleVector {
    sector: BosonSector,
    components: DVector<Complex64>,
}

impl LiouvilleVector {
    pub fn sector(&self) -> BosonSector {
        self.sector
    }

    pub fn components(&self) -> &DVector<Complex64> {
        &self.components
    }

    pub fn component(&self, k: usize, l: usize) -> Complex64 {
        self.components[k * self.sector.dim() + l]
    }

    pub fn norm(&self) -> f64 {
        self.components.norm()
    }
}

pub fn vectorize(rho: &DensityMatrix) -> Result<LiouvilleVector> {
    let purity = rho.purity();
    if purity.is_nan() || purity <= 0.0 {
        return Err(Error::domain(
            "cannot vectorise a matrix with zero Hilbert–Schmidt norm",
        ));
    }
    let scale = purity.sqrt().recip();
    let entries = rho.entries();
    let dim = rho.dim();
    let components = DVector::from_fn(dim * dim, |i, _| entries[(i / dim, i % dim)] * scale);
    Ok(LiouvilleVector {
        sector: rho.sector(),
        components,
    })
}

/// `4t²(⟨⟨ρ|L†L|ρ⟩⟩ − |⟨⟨ρ|L|ρ⟩⟩|²)` for a diagonal generator.
pub fn dissipative_qfi(vec: &LiouvilleVector, gen: &GeneratorMatrix, t: f64) -> Result<f64> {
    vec.sector().check_same(&gen.sector())?;
    let mut second = 0.0;
    let mut first = Complex64::new(0.0, 0.0);
    for (v, l) in vec.components().iter().zip(gen.diag()) {
        let weight = v.norm_sqr();
        second += l.norm_sqr() * weight;
        first += l * weight;
    }
    Ok(4.0 * t * t * (second - first.norm_sqr()))
}

/// Dissipative QFI of dephased `|N,0⟩_CD` from the moment sums:
/// `t²(I₂/(2^{2N} I) − (I₁/(2^{2N} I))²)`.
pub fn dissipative_qfi_dephasing_closed_form(n_particles: usize, gamma: f64, t: f64) -> Result<f64> {
    if n_particles == 0 {
        return Err(Error::domain("closed form needs N ≥ 1"));
    }
    if !(gamma >= 0.0 && t >= 0.0) || !(gamma * t).is_finite() {
        return Err(Error::domain(format!("invalid γ = {gamma}, t = {t}")));
    }
    let sums = moment_sums(n_particles, gamma * t)?;
    let fourth = sums.i2_normalized() / sums.i();
    let second = sums.i1_normalized() / sums.i();
    Ok(t * t * (fourth - second * second).max(0.0))
}
