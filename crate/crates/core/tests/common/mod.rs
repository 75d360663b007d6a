#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use twomode::fock::{cd_vacuum_state, BasisTag, BosonSector, DensityMatrix};
use twomode::{CMatrix, Complex64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `G G† / Tr` with `G` a `dim × rank` complex Gaussian matrix.
pub fn random_state<R: Rng>(rng: &mut R, n: usize, rank: usize, basis: BasisTag) -> DensityMatrix {
    let dim = n + 1;
    let g = CMatrix::from_fn(dim, rank, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = &g * g.adjoint();
    let tr = m.trace();
    let m = m / tr;
    let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    DensityMatrix::new(BosonSector::new(n), basis, m).expect("valid random state")
}

pub fn cd_vacuum(n: usize) -> DensityMatrix {
    DensityMatrix::from_pure(&cd_vacuum_state(BosonSector::new(n), BasisTag::AB))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Exact binomial coefficient as f64 (exact for the small arguments used here).
pub fn binom(n: u64, k: u64) -> f64 {
    binom_u128(n, k) as f64
}

pub fn binom_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, j| acc * (n - j) as u128 / (j + 1) as u128)
}
