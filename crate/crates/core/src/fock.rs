//! Two-mode boson sector, states, log-space binomials and the `(a,b) ↔ (c,d)`
//! Bogoliubov basis change.
//!
//! Basis vectors are occupation states `|k, N−k⟩`, with `k` counting bosons in
//! the first mode (`a` or `c`). Matrices are indexed `ρ[(k, ℓ)]`.

use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, LN_2};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{CMatrix, Complex64, Error, Result};

/// Tolerance on the norm of a pure state.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance on Hermiticity and unit trace of a density matrix.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted for a density matrix.
pub const PSD_TOL: f64 = -1e-10;

/// The `N`-boson sector of two modes, of dimension `N + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BosonSector {
    n_particles: usize,
}

impl BosonSector {
    pub fn new(n_particles: usize) -> Self {
        Self { n_particles }
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn dim(&self) -> usize {
        self.n_particles + 1
    }

    pub(crate) fn check_index(&self, k: usize) -> Result<()> {
        if k > self.n_particles {
            Err(Error::IndexOutOfRange {
                index: k,
                n_particles: self.n_particles,
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_same(&self, other: &BosonSector) -> Result<()> {
        if self != other {
            Err(Error::SectorMismatch {
                left: self.n_particles,
                right: other.n_particles,
            })
        } else {
            Ok(())
        }
    }
}

/// Which pair of modes the occupation basis refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisTag {
    /// Occupation states of the original modes `a`, `b` (eigenbasis of `J_z`).
    AB,
    /// Occupation states of `c = (a+b)/√2`, `d = (a−b)/√2`.
    CD,
}

impl fmt::Display for BasisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisTag::AB => f.write_str("AB"),
            BasisTag::CD => f.write_str("CD"),
        }
    }
}

impl FromStr for BasisTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "AB" => Ok(BasisTag::AB),
            "CD" => Ok(BasisTag::CD),
            other => Err(Error::domain(format!("unknown basis '{other}'"))),
        }
    }
}

/// Normalised state vector on a sector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    sector: BosonSector,
    basis: BasisTag,
    amplitudes: DVector<Complex64>,
}

impl PureState {
    /// Builds a state from amplitudes that must already have unit norm.
    pub fn new(sector: BosonSector, basis: BasisTag, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != sector.dim() {
            return Err(Error::DimensionMismatch {
                expected: sector.dim(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm is {norm}, expected 1")));
        }
        Ok(Self {
            sector,
            basis,
            amplitudes,
        })
    }

    /// Builds a state after rescaling the amplitudes to unit norm.
    pub fn normalized(sector: BosonSector, basis: BasisTag, amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState("cannot normalise a zero vector".into()));
        }
        Self::new(sector, basis, amplitudes.unscale(norm))
    }

    pub fn sector(&self) -> BosonSector {
        self.sector
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }
}

/// `|k, N−k⟩` in the requested basis.
pub fn fock_basis_state(sector: BosonSector, k: usize, basis: BasisTag) -> Result<PureState> {
    sector.check_index(k)?;
    let mut amplitudes = DVector::zeros(sector.dim());
    amplitudes[k] = Complex64::new(1.0, 0.0);
    Ok(PureState {
        sector,
        basis,
        amplitudes,
    })
}

/// Hermitian, unit-trace, positive semidefinite matrix on a sector.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    sector: BosonSector,
    basis: BasisTag,
    entries: CMatrix,
}

impl DensityMatrix {
    /// Validating constructor.
    pub fn new(sector: BosonSector, basis: BasisTag, entries: CMatrix) -> Result<Self> {
        let rho = Self::from_entries_unchecked(sector, basis, entries)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Skips the Hermiticity/trace/positivity checks; only the shape is checked.
    /// Meant for matrices produced by maps that are known to preserve validity.
    pub fn from_entries_unchecked(sector: BosonSector, basis: BasisTag, entries: CMatrix) -> Result<Self> {
        let dim = sector.dim();
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: entries.nrows().max(entries.ncols()),
            });
        }
        Ok(Self { sector, basis, entries })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let a = &psi.amplitudes;
        Self {
            sector: psi.sector,
            basis: psi.basis,
            entries: a * a.adjoint(),
        }
    }

    /// Density matrix diagonal in `basis` with the given populations.
    pub fn diagonal(sector: BosonSector, basis: BasisTag, populations: &[f64]) -> Result<Self> {
        if populations.len() != sector.dim() {
            return Err(Error::DimensionMismatch {
                expected: sector.dim(),
                found: populations.len(),
            });
        }
        let diag = DVector::from_iterator(populations.len(), populations.iter().map(|&p| Complex64::new(p, 0.0)));
        Self::new(sector, basis, DMatrix::from_diagonal(&diag))
    }

    /// `1/(N+1)`, the same in every basis.
    pub fn maximally_mixed(sector: BosonSector, basis: BasisTag) -> Self {
        let dim = sector.dim();
        let scale = Complex64::new(1.0 / dim as f64, 0.0);
        Self {
            sector,
            basis,
            entries: CMatrix::identity(dim, dim) * scale,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        for i in 0..dim {
            for j in i..dim {
                let diff = self.entries[(i, j)] - self.entries[(j, i)].conj();
                if diff.norm() > HERMITIAN_TOL {
                    return Err(Error::InvalidState(format!(
                        "not Hermitian at ({i}, {j}): deviation {}",
                        diff.norm()
                    )));
                }
            }
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > HERMITIAN_TOL || tr.im.abs() > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = self.eigenvalues().min();
        if min < PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
        }
        Ok(())
    }

    pub fn sector(&self) -> BosonSector {
        self.sector
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.sector.dim()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    /// `ρ_kℓ`; panics on out-of-range indices like matrix indexing does.
    pub fn get(&self, k: usize, l: usize) -> Complex64 {
        self.entries[(k, l)]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// `Tr ρ² = Σ |ρ_kℓ|²` (valid for Hermitian ρ).
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> DVector<f64> {
        let mut values: Vec<f64> = self.entries.clone().symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        DVector::from_vec(values)
    }

    pub(crate) fn require_basis(&self, expected: BasisTag) -> Result<()> {
        if self.basis != expected {
            Err(Error::BasisMismatch {
                expected,
                found: self.basis,
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn with_entries(&self, entries: CMatrix) -> Self {
        Self {
            sector: self.sector,
            basis: self.basis,
            entries,
        }
    }
}

/// `ln C(N, k)` backed by a table for a fixed sector.
#[derive(Debug, Clone, PartialEq)]
pub struct LogBinomialTable {
    sector: BosonSector,
    log_choose: Vec<f64>,
}

impl LogBinomialTable {
    pub fn new(sector: BosonSector) -> Self {
        let n = sector.n_particles();
        let mut log_choose = vec![0.0; n + 1];
        for k in 0..=n / 2 {
            let value = log_choose_lgamma(n, k);
            log_choose[k] = value;
            log_choose[n - k] = value;
        }
        Self { sector, log_choose }
    }

    pub fn sector(&self) -> BosonSector {
        self.sector
    }

    pub fn get(&self, k: usize) -> Result<f64> {
        self.sector.check_index(k)?;
        Ok(self.log_choose[k])
    }

    pub fn values(&self) -> &[f64] {
        &self.log_choose
    }
}

/// `ln C(N, k)` evaluated through `ln Γ`.
pub fn log_binomial(sector: BosonSector, k: usize) -> Result<f64> {
    sector.check_index(k)?;
    Ok(log_choose_lgamma(sector.n_particles(), k))
}

// Evaluated on min(k, N−k) so that the symmetry is exact.
fn log_choose_lgamma(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    if k == 0 {
        return 0.0;
    }
    let n = n as f64;
    let k = k as f64;
    libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0)
}

/// Matrix `U` with `U[(m, k)] = ⟨m, N−m|_CD |k, N−k⟩_AB`.
///
/// The AB states are expanded as
/// `|k, N−k⟩_AB = 2^{−N/2} (c†−d†)^k (c†+d†)^{N−k} |0⟩ / √(k!(N−k)!)`,
/// which gives `U[(m,k)] = 2^{−N/2} √(C(N,k)/C(N,m)) S(m,k)` with the
/// Krawtchouk-type integers `S(m,k) = Σ_i C(k,i) C(N−k,m−i) (−1)^{k−i}`.
/// `S` is generated exactly with big integers from
/// `(x−1)^{k+1}(1+x)^{N−k−1} (1+x) = (x−1)^k (1+x)^{N−k} (x−1)`, so the
/// alternating sums never cancel in floating point. `U` is real orthogonal
/// and its first column is `2^{−N/2} √C(N,m) > 0`.
///
/// Results are cached per sector.
pub fn basis_change_matrix(sector: BosonSector) -> Arc<CMatrix> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<CMatrix>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let n = sector.n_particles();
    if let Some(u) = cache.read().expect("basis cache poisoned").get(&n) {
        return Arc::clone(u);
    }
    let u = Arc::new(compute_basis_change(n));
    let mut guard = cache.write().expect("basis cache poisoned");
    Arc::clone(guard.entry(n).or_insert(u))
}

// Above this N the binomials no longer fit in an f64 and entries go through logs.
const DIRECT_BASIS_LIMIT: usize = 1000;

fn compute_basis_change(n: usize) -> CMatrix {
    let dim = n + 1;
    let mut pascal: Vec<BigInt> = Vec::with_capacity(dim);
    pascal.push(BigInt::from(1u8));
    for m in 1..=n {
        let next = &pascal[m - 1] * (n - m + 1) / m;
        pascal.push(next);
    }

    type Entry = Box<dyn Fn(&BigInt, usize, usize) -> f64>;
    let entry: Entry = if n <= DIRECT_BASIS_LIMIT {
        let choose: Vec<f64> = pascal.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect();
        let mut scale = 0.5f64.powi((n / 2) as i32);
        if n % 2 == 1 {
            scale *= FRAC_1_SQRT_2;
        }
        Box::new(move |s: &BigInt, m: usize, k: usize| {
            s.to_f64().unwrap_or(0.0) * scale * (choose[k] / choose[m]).sqrt()
        })
    } else {
        let log_choose: Vec<f64> = pascal.iter().map(ln_abs_big).collect();
        let log_scale = 0.5 * n as f64 * LN_2;
        Box::new(move |s: &BigInt, m: usize, k: usize| {
            if s.is_zero() {
                return 0.0;
            }
            let magnitude = (ln_abs_big(s) + 0.5 * (log_choose[k] - log_choose[m]) - log_scale).exp();
            if s.is_negative() {
                -magnitude
            } else {
                magnitude
            }
        })
    };

    let mut u = CMatrix::zeros(dim, dim);
    // column k = 0 of S is the Pascal row itself
    let mut column = pascal.clone();
    for k in 0..dim {
        if k > 0 {
            // S(m,k) = S(m−1,k−1) − S(m,k−1) − S(m−1,k)
            let mut next: Vec<BigInt> = Vec::with_capacity(dim);
            for m in 0..dim {
                let mut value = -&column[m];
                if m > 0 {
                    value += &column[m - 1];
                    value -= &next[m - 1];
                }
                next.push(value);
            }
            column = next;
        }
        for (m, s) in column.iter().enumerate() {
            u[(m, k)] = Complex64::new(entry(s, m, k), 0.0);
        }
    }
    u
}

fn ln_abs_big(x: &BigInt) -> f64 {
    let x = x.abs();
    let bits = x.bits();
    if bits <= 900 {
        x.to_f64().unwrap_or(f64::INFINITY).ln()
    } else {
        let shift = bits - 64;
        (&x >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * LN_2
    }
}

/// Re-expression of a state in the other pair of modes.
pub trait ChangeBasis: Sized {
    fn basis(&self) -> BasisTag;

    /// Returns the same state expressed in `target`; identity if it already is.
    fn change_basis(&self, target: BasisTag) -> Self;
}

impl ChangeBasis for PureState {
    fn basis(&self) -> BasisTag {
        self.basis
    }

    fn change_basis(&self, target: BasisTag) -> Self {
        if target == self.basis {
            return self.clone();
        }
        let u = basis_change_matrix(self.sector);
        let amplitudes = match target {
            BasisTag::CD => &*u * &self.amplitudes,
            BasisTag::AB => u.adjoint() * &self.amplitudes,
        };
        Self {
            sector: self.sector,
            basis: target,
            amplitudes,
        }
    }
}

impl ChangeBasis for DensityMatrix {
    fn basis(&self) -> BasisTag {
        self.basis
    }

    fn change_basis(&self, target: BasisTag) -> Self {
        if target == self.basis {
            return self.clone();
        }
        let u = basis_change_matrix(self.sector);
        let rotated = match target {
            BasisTag::CD => &*u * &self.entries * u.adjoint(),
            BasisTag::AB => u.adjoint() * &self.entries * &*u,
        };
        // symmetrise away round-off
        let entries = (&rotated + rotated.adjoint()) * Complex64::new(0.5, 0.0);
        Self {
            sector: self.sector,
            basis: target,
            entries,
        }
    }
}

/// Free-function form of [`ChangeBasis::change_basis`].
pub fn change_basis<S: ChangeBasis>(state: &S, target: BasisTag) -> S {
    state.change_basis(target)
}

/// `|N, 0⟩_CD`, all bosons in mode `c`, expressed in `basis`.
pub fn cd_vacuum_state(sector: BosonSector, basis: BasisTag) -> PureState {
    let cd = fock_basis_state(sector, sector.n_particles(), BasisTag::CD).expect("k = N is in range");
    cd.change_basis(basis)
}

/// `J_z` eigenvalues `(2k − N)/2` on the AB occupation basis.
pub fn jz_eigenvalues(sector: BosonSector) -> impl Iterator<Item = f64> {
    let n = sector.n_particles() as f64;
    (0..sector.dim()).map(move |k| k as f64 - 0.5 * n)
}
