//! Sweeps over `(N, t)` for dephased `|N,0⟩_CD` and log-log power-law fits.

use rayon::prelude::*;

use crate::dynamics::{evolve_dephasing, generator_matrix, EvolutionParams, GeneratorKind};
use crate::entanglement::negativity;
use crate::fock::{cd_vacuum_state, BasisTag, BosonSector, DensityMatrix};
use crate::metrology::{qfi_bounds, LambdaMaxMode};
use crate::{Error, Result};

/// One row of sweep output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub n: usize,
    pub gamma: f64,
    pub t: f64,
    pub purity: f64,
    pub qfi_diss: f64,
    pub qfi_lower: f64,
    pub qfi_practical_lower: f64,
    pub qfi_exact: Option<f64>,
    pub negativity_ab: f64,
    pub negativity_cd: f64,
}

/// A column of [`SweepRecord`] that can be fitted against `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Series {
    Diss,
    Lower,
    PracticalLower,
    Exact,
}

impl Series {
    pub fn value(&self, r: &SweepRecord) -> Option<f64> {
        match self {
            Self::Diss => Some(r.qfi_diss),
            Self::Lower => Some(r.qfi_lower),
            Self::PracticalLower => Some(r.qfi_practical_lower),
            Self::Exact => r.qfi_exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n_list: Vec<usize>,
    pub gamma: f64,
    pub t_list: Vec<f64>,
    pub lambda_max_mode: LambdaMaxMode,
    /// Report the SLD value in `qfi_exact`.
    pub with_exact: bool,
}

impl SweepConfig {
    pub fn new(n_list: Vec<usize>, gamma: f64, t_list: Vec<f64>) -> Self {
        Self {
            n_list,
            gamma,
            t_list,
            lambda_max_mode: LambdaMaxMode::Exact,
            with_exact: true,
        }
    }
}

/// Even `N` from 10 to 200 in steps of 10.
pub fn default_n_grid() -> Vec<usize> {
    (10..=200).step_by(10).collect()
}

/// Times plotted in the scaling figure.
pub const FIGURE1_TIMES: [f64; 4] = [0.001, 0.01, 1.0, 5.0];

pub fn sweep_point(n: usize, gamma: f64, t: f64, mode: LambdaMaxMode, with_exact: bool) -> Result<SweepRecord> {
    if n == 0 {
        return Err(Error::domain("sweep needs N ≥ 1"));
    }
    let params = EvolutionParams::new(gamma, t)?;
    let sector = BosonSector::new(n);
    let rho0 = DensityMatrix::from_pure(&cd_vacuum_state(sector, BasisTag::AB));
    let rho_t = evolve_dephasing(&rho0, params)?;
    let gen = generator_matrix(sector, GeneratorKind::Dephasing);
    let bounds = qfi_bounds(&rho_t, &gen, t, mode)?;
    Ok(SweepRecord {
        n,
        gamma,
        t,
        purity: bounds.purity,
        qfi_diss: bounds.f_diss,
        qfi_lower: bounds.lower,
        qfi_practical_lower: bounds.practical_lower,
        qfi_exact: if with_exact { bounds.exact } else { None },
        negativity_ab: negativity(&rho_t, BasisTag::AB).value(),
        negativity_cd: negativity(&rho_t, BasisTag::CD).value(),
    })
}

/// One record per `(N, t)`, sorted by `(N, t)`. Points run in parallel.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    if config.n_list.is_empty() || config.t_list.is_empty() {
        return Err(Error::domain("sweep needs at least one N and one t"));
    }
    let points: Vec<(usize, f64)> = config
        .n_list
        .iter()
        .flat_map(|&n| config.t_list.iter().map(move |&t| (n, t)))
        .collect();
    let mut records = points
        .par_iter()
        .map(|&(n, t)| sweep_point(n, config.gamma, t, config.lambda_max_mode, config.with_exact))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| a.n.cmp(&b.n).then(a.t.total_cmp(&b.t)));
    Ok(records)
}

/// `F ≈ α N^β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub alpha: f64,
    pub beta: f64,
    pub r_squared: f64,
}

/// Ordinary least squares of `ln F` against `ln N`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 2 {
        return Err(Error::domain(format!(
            "power-law fit needs at least 2 points, got {}",
            points.len()
        )));
    }
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(n, f) in points {
        if !(n > 0.0 && f > 0.0) || !n.is_finite() || !f.is_finite() {
            return Err(Error::domain(format!(
                "power-law fit needs positive finite data, got ({n}, {f})"
            )));
        }
        xs.push(n.ln());
        ys.push(f.ln());
    }
    let m = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / m;
    let y_mean = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - x_mean) * (y - y_mean)).sum();
    let syy: f64 = ys.iter().map(|y| (y - y_mean).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("power-law fit needs at least two distinct N"));
    }
    let beta = sxy / sxx;
    let intercept = y_mean - beta * x_mean;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(ScalingFit {
        alpha: intercept.exp(),
        beta,
        r_squared,
    })
}

/// Fits `series` against `N` over the records at time `t`.
pub fn fit_series(records: &[SweepRecord], t: f64, series: Series) -> Result<ScalingFit> {
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.t == t)
        .filter_map(|r| series.value(r).map(|v| (r.n as f64, v)))
        .collect();
    fit_power_law(&points)
}

/// Data and fits of the two scaling panels: the lower bound (left) and the
/// dissipative QFI (right), one fit per time.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure1 {
    pub records: Vec<SweepRecord>,
    pub lower_fits: Vec<(f64, ScalingFit)>,
    pub diss_fits: Vec<(f64, ScalingFit)>,
}

pub fn figure1(config: &SweepConfig) -> Result<Figure1> {
    let records = run_sweep(config)?;
    let mut lower_fits = Vec::new();
    let mut diss_fits = Vec::new();
    for &t in &config.t_list {
        lower_fits.push((t, fit_series(&records, t, Series::Lower)?));
        diss_fits.push((t, fit_series(&records, t, Series::Diss)?));
    }
    Ok(Figure1 {
        records,
        lower_fits,
        diss_fits,
    })
}

/// Default figure configuration: γ = 1, [`default_n_grid`], [`FIGURE1_TIMES`].
pub fn figure1_config() -> SweepConfig {
    SweepConfig::new(default_n_grid(), 1.0, FIGURE1_TIMES.to_vec())
}
