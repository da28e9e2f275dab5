//! Exact arithmetic over the rationals: scalars, dense polynomials in `z`,
//! reduced rational functions and linear differential operators.

pub mod diffop;
pub mod linalg;
pub mod poly;
pub mod ratfunc;
pub mod rational;

pub use diffop::LinDiffOp;
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use rational::Rational;
