//! Saddle-point loop expansions of one-dimensional auxiliary-field
//! integrals.
//!
//! The crate is layered bottom-up:
//!
//! - [`arith`]: exact rationals and factorials;
//! - [`combinatorics`]: constrained multisets and the coefficients `T(L,k|s)`;
//! - [`engine`]: the generic expansion of `∫ g e^{−N f}` at a saddle;
//! - [`gamma`] and [`fermion`]: the two worked models;
//! - [`quadrature`]: an independent numerical oracle;
//! - [`report`]: table rendering shared by the command-line front end.

pub mod arith;
pub mod combinatorics;
pub mod engine;
pub mod fermion;
pub mod gamma;
pub mod quadrature;
pub mod report;
pub mod series;

pub use arith::{ArithError, BigInteger, Rational, Scalar};
pub use combinatorics::{enumerate_multisets, n_of_l, t_coefficient, ConstrainedMultiset, SumMode, TCoefficient};
pub use engine::{evaluate_l_loop, method1_coefficients, method2_coefficients, DerivativeJet, EngineError, LoopSeries, Method};
