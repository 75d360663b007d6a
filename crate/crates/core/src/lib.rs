//! Collective dephasing of `N` bosons distributed over two modes.
//!
//! The crate covers four layers:
//!
//! * [`fock`]: the `(N+1)`-dimensional sector, pure and mixed states, stable
//!   log-space binomials and the Bogoliubov rotation between the `(a, b)` and
//!   `(c, d) = ((a+b)/√2, (a−b)/√2)` mode bases.
//! * [`dynamics`]: the closed-form dephasing semigroup generated by `J_z`, the
//!   unitary `J_z` flow, and a Gauss–Hermite evaluation of the Kraus integral
//!   used as an independent oracle.
//! * [`entanglement`]: partial transposition and negativity for both mode
//!   bipartitions.
//! * [`metrology`]: pure-state, vectorised (dissipative) and SLD quantum Fisher
//!   information, the bounds relating them, and the binomial moment sums.
//!
//! [`analysis`] sweeps `(N, t)` grids and fits power laws to the results.

pub mod analysis;
pub mod dynamics;
pub mod entanglement;
mod error;
pub mod fock;
pub mod metrology;
pub mod quadrature;

pub use error::{Error, Result};

pub use num_complex::Complex64;

/// Square complex matrix type used for all operators on a sector.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
