//! Quantum Fisher information: pure-state and SLD forms, the dissipative QFI
//! of the vectorised state, its closed form for dephased `|N,0⟩_CD`, and the
//! bounds relating the two.

mod moments;
mod sld;
mod vectorized;

use std::f64::consts::PI;

pub use moments::{moment_sums, MomentSums};
pub use sld::{
    gamma_derivative, qfi_bounds, qfi_monotonicity_check, rotation_derivative, sld_qfi_exact, LambdaMaxMode, QfiBounds,
    SLD_CUTOFF,
};
pub use vectorized::{dissipative_qfi, dissipative_qfi_dephasing_closed_form, vectorize, LiouvilleVector};

use crate::dynamics::{quadrature_order_floor, QUADRATURE_AGREEMENT};
use crate::fock::{jz_eigenvalues, BasisTag, ChangeBasis, DensityMatrix, PureState};
use crate::quadrature::GaussHermite;
use crate::{Error, Result};

/// `Tr ρ²`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// `∫ du e^{−u²}/√π cos^{2N}(u√μ)`, the purity of dephased `|N,0⟩_CD`, by
/// Gauss–Hermite quadrature with adaptive order.
pub fn purity_by_quadrature(n_particles: usize, mu: f64) -> Result<f64> {
    if !mu.is_finite() || mu < 0.0 {
        return Err(Error::domain(format!("μ must be finite and non-negative, got {mu}")));
    }
    let power = 2 * n_particles as i32;
    let eval = |order: usize| GaussHermite::new(order).integrate(|u| (u * mu.sqrt()).cos().powi(power)) / PI.sqrt();
    // cos^{2N}(x) oscillates at frequency up to 2N√μ
    let mut order = 80.max(4 * quadrature_order_floor(n_particles, mu));
    let mut value = eval(order);
    while order < (1 << 16) {
        order *= 2;
        let next = eval(order);
        let change = (next - value).abs();
        value = next;
        if change < QUADRATURE_AGREEMENT {
            break;
        }
    }
    Ok(value)
}

/// `4τ² Var(J_z)` for a pure state, with `J_z` diagonal in the AB basis.
pub fn pure_state_qfi(psi: &PureState, timescale: f64) -> f64 {
    let psi = psi.change_basis(BasisTag::AB);
    let probs: Vec<f64> = psi.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    let total: f64 = probs.iter().sum();
    let jz: Vec<f64> = jz_eigenvalues(psi.sector()).collect();
    let mean: f64 = probs.iter().zip(&jz).map(|(p, j)| p * j).sum::<f64>() / total;
    let var: f64 = probs.iter().zip(&jz).map(|(p, j)| p * (j - mean).powi(2)).sum::<f64>() / total;
    4.0 * timescale * timescale * var
}

/// Leading small-time form `t²N²/2 · (1 − 3/(8N))`.
pub fn small_time_qfi(n_particles: usize, t: f64) -> f64 {
    let n = n_particles as f64;
    0.5 * t * t * n * n * (1.0 - 3.0 / (8.0 * n))
}

/// Quantum Cramér–Rao error `1/√F`.
pub fn qcrb_error(fisher: f64) -> Result<f64> {
    if fisher.is_nan() || fisher <= 0.0 {
        return Err(Error::domain(format!(
            "Fisher information must be positive, got {fisher}"
        )));
    }
    Ok(fisher.sqrt().recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve_dephasing, EvolutionParams};
    use crate::fock::{cd_vacuum_state, fock_basis_state, BosonSector};
    use approx::assert_relative_eq;

    #[test]
    fn pure_state_values() {
        let s = BosonSector::new(5);
        for k in 0..=5 {
            let ab = fock_basis_state(s, k, BasisTag::AB).unwrap();
            assert!(pure_state_qfi(&ab, 1.0).abs() < 1e-15);
        }
        let psi = cd_vacuum_state(s, BasisTag::CD);
        assert_relative_eq!(pure_state_qfi(&psi, 2.0), 4.0 * 5.0, max_relative = 1e-12);
    }

    #[test]
    fn fully_dephased_purity() {
        let s = BosonSector::new(2);
        let rho0 = DensityMatrix::from_pure(&cd_vacuum_state(s, BasisTag::AB));
        let rho = evolve_dephasing(&rho0, EvolutionParams::new(1.0, 2000.0).unwrap()).unwrap();
        assert_relative_eq!(purity(&rho), 0.375, max_relative = 1e-12);
    }

    #[test]
    fn purity_integral_matches_sum() {
        for (n, mu) in [(4usize, 1.0), (10, 0.3), (30, 2.0)] {
            let sums = moment_sums(n, mu).unwrap();
            let quad = purity_by_quadrature(n, mu).unwrap();
            assert!((sums.i() - quad).abs() < 1e-10, "N = {n}, μ = {mu}");
        }
    }

    #[test]
    fn small_time_form() {
        assert_relative_eq!(small_time_qfi(8, 1.0), 30.5, max_relative = 1e-15);
        assert_relative_eq!(small_time_qfi(8, 0.5), 30.5 * 0.25, max_relative = 1e-15);
    }

    #[test]
    fn cramer_rao() {
        assert_eq!(qcrb_error(4.0).unwrap(), 0.5);
        assert_relative_eq!(qcrb_error(9.0).unwrap(), 1.0 / 3.0);
        assert!(qcrb_error(0.0).is_err());
        assert!(qcrb_error(-1.0).is_err());
    }
}
