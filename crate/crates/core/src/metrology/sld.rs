//! Standard (SLD) quantum Fisher information and the two-sided bounds built
//! from the dissipative QFI.

use std::fmt;
use std::str::FromStr;

use super::vectorized::{dissipative_qfi, vectorize};
use crate::dynamics::{evolve_dephasing, EvolutionParams, GeneratorMatrix};
use crate::fock::{BasisTag, DensityMatrix};
use crate::{CMatrix, Complex64, Error, Result};

/// Eigenvalue pairs with `λ_i + λ_j` at or below this fraction of `λ_max`
/// are left out of the SLD sum.
pub const SLD_CUTOFF: f64 = 1e-12;

/// How `λ_max(ρ)` enters the lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LambdaMaxMode {
    /// Largest eigenvalue of `ρ`.
    #[default]
    Exact,
    /// Largest diagonal entry of `ρ` in the AB basis. Not a rigorous bound
    /// on `λ_max`, so the lower bound it produces may overshoot.
    DiagonalApprox,
}

impl fmt::Display for LambdaMaxMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exact => "exact",
            Self::DiagonalApprox => "diagonal_approx",
        })
    }
}

impl FromStr for LambdaMaxMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Self::Exact),
            "diagonal_approx" | "diagonal" => Ok(Self::DiagonalApprox),
            other => Err(Error::domain(format!("unknown λ_max mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiBounds {
    pub lower: f64,
    /// `None` when `ρ(t)` is numerically singular.
    pub upper: Option<f64>,
    pub exact: Option<f64>,
    pub practical_lower: f64,
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub lambda_max_mode: LambdaMaxMode,
    /// `4(Tr[ρ²G]/Tr ρ²)²`.
    pub g: f64,
    pub purity: f64,
    pub f_diss: f64,
}

impl QfiBounds {
    pub fn upper_or_inf(&self) -> f64 {
        self.upper.unwrap_or(f64::INFINITY)
    }
}

fn check_hermitian(m: &CMatrix, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::domain(format!("{what} is not square")));
    }
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            if (m[(i, j)] - m[(j, i)].conj()).norm() > 1e-12 * scale {
                return Err(Error::domain(format!("{what} is not Hermitian at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// `Σ_{λ_i+λ_j > ε} 2|⟨i|∂ρ|j⟩|²/(λ_i + λ_j)` in the eigenbasis of `rho`.
pub fn sld_qfi_exact(rho: &DensityMatrix, drho: &CMatrix) -> Result<f64> {
    if drho.nrows() != rho.dim() || drho.ncols() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: drho.nrows().max(drho.ncols()),
        });
    }
    check_hermitian(drho, "derivative")?;
    let eig = rho.entries().clone().symmetric_eigen();
    let lambda = &eig.eigenvalues;
    let lambda_max = lambda.max();
    let cutoff = SLD_CUTOFF * lambda_max;
    let v = &eig.eigenvectors;
    let rotated = v.adjoint() * drho * v;
    let mut total = 0.0;
    for i in 0..lambda.len() {
        for j in 0..lambda.len() {
            let s = lambda[i] + lambda[j];
            if s > cutoff {
                total += 2.0 * rotated[(i, j)].norm_sqr() / s;
            }
        }
    }
    Ok(total)
}

/// `∂_γ ρ(t) = t·L[ρ(t)]` for `ρ(t) = exp(γt L) ρ(0)`.
pub fn gamma_derivative(rho_t: &DensityMatrix, gen: &GeneratorMatrix, t: f64) -> Result<CMatrix> {
    rho_t.require_basis(BasisTag::AB)?;
    rho_t.sector().check_same(&gen.sector())?;
    Ok(gen.apply(rho_t.entries()) * Complex64::new(t, 0.0))
}

/// `∂_θ` of `e^{−iθJ_z} ρ e^{iθJ_z}` at `θ = 0`: `−i(k−ℓ)ρ_kℓ`.
pub fn rotation_derivative(rho: &DensityMatrix) -> Result<CMatrix> {
    rho.require_basis(BasisTag::AB)?;
    let e = rho.entries();
    Ok(CMatrix::from_fn(e.nrows(), e.ncols(), |k, l| {
        Complex64::new(0.0, -(k as f64 - l as f64)) * e[(k, l)]
    }))
}

/// Bounds on the standard QFI of `γ` from the dissipative QFI of `ρ(t)`:
/// `F·Trρ²/(4λ_max) ≤ F_std ≤ (F + g)·Trρ²/(4λ_min)`, plus the exact SLD value.
pub fn qfi_bounds(rho_t: &DensityMatrix, gen: &GeneratorMatrix, t: f64, mode: LambdaMaxMode) -> Result<QfiBounds> {
    let drho = gamma_derivative(rho_t, gen, t)?;
    let vec = vectorize(rho_t)?;
    let f_diss = dissipative_qfi(&vec, gen, t)?;
    let purity = rho_t.purity();

    let eigenvalues = rho_t.eigenvalues();
    let true_max = eigenvalues.max();
    let lambda_min = eigenvalues.min();
    let lambda_max = match mode {
        LambdaMaxMode::Exact => true_max,
        LambdaMaxMode::DiagonalApprox => rho_t.entries().diagonal().iter().map(|z| z.re).fold(f64::MIN, f64::max),
    };

    // Tr[ρ²G] = Tr[ρ ∂ρ] for the SLD G
    let overlap: f64 = rho_t
        .entries()
        .iter()
        .zip(drho.transpose().iter())
        .map(|(a, b)| (a * b).re)
        .sum();
    let g = 4.0 * (overlap / purity).powi(2);

    let upper = if lambda_min > SLD_CUTOFF * true_max {
        Some((f_diss + g) * purity / (4.0 * lambda_min))
    } else {
        None
    };
    let exact = sld_qfi_exact(rho_t, &drho)?;

    Ok(QfiBounds {
        lower: f_diss * purity / (4.0 * lambda_max),
        upper,
        exact: Some(exact),
        practical_lower: f_diss * purity / 4.0,
        lambda_max,
        lambda_min,
        lambda_max_mode: mode,
        g,
        purity,
        f_diss,
    })
}

/// SLD QFI for a `J_z` rotation of `ρ(t)` at each of `times` under dephasing.
pub fn qfi_monotonicity_check(rho0: &DensityMatrix, times: &[f64], gamma: f64) -> Result<Vec<f64>> {
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("times must be sorted ascending"));
    }
    times
        .iter()
        .map(|&t| {
            let rho_t = evolve_dephasing(rho0, EvolutionParams::new(gamma, t)?)?;
            sld_qfi_exact(&rho_t, &rotation_derivative(&rho_t)?)
        })
        .collect()
}
