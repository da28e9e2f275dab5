//! Exact-arithmetic verification engine for the X2 exceptional polynomial
//! subspaces, their quasi-solvable operators, and the N-fold supersymmetric
//! pairs built on them, together with numeric realizations of the rational
//! and hyperbolic example potentials.
//!
//! Layering, bottom-up:
//!
//! * [`exactalg`]: rationals, polynomials, rational functions, linear
//!   differential operators in `z`.
//! * [`x2spaces`]: the two polynomial families, `f(z; α)`, ladder operators
//!   and subspace membership.
//! * [`quasiops`]: the preserving operators `J1..J4`, `K1..K4` and the
//!   gauged Hamiltonians.
//! * [`susybuild`]: gauged supercharges and the gauged Hamiltonian pair.
//! * [`qalgebra`]: the physical-coordinate operator algebra over the
//!   quadratic extension `z'^2 = 2A(z)`.
//! * [`models`]: the two worked physical models, evaluated in `f64`.
//! * [`laguerre`]: restricted spectra, eigenpolynomials and the
//!   Gram–Schmidt comparison.
//! * [`report`] and [`verify`]: machine-readable verification stages.

pub mod error;
pub mod exactalg;
pub mod laguerre;
pub mod models;
pub mod qalgebra;
pub mod quasiops;
pub mod report;
pub mod susybuild;
pub mod verify;
pub mod x2spaces;

pub use error::{Error, Result};
pub use exactalg::{LinDiffOp, Poly, RatFunc, Rational};
pub use x2spaces::ParamContext;
