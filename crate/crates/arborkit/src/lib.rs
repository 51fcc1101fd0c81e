//! Exact-arithmetic toolkit for the iterated Galois-group structure of
//! unicritical polynomials x^q + c over Q and Q(t).
//!
//! The crate is organized around a small arithmetic kernel (rationals,
//! polynomials over Q, reduced rational functions in t) and the machinery
//! built on top of it: factorization over Q and Q(t), places and Newton
//! polygons, Weil and canonical heights, orbit dynamics, Kummer-layer
//! certificates, wreath-product group computations, periodic-curve
//! disjointness checks, and specialization experiments.

pub mod disjoint;
pub mod dynamics;
pub mod factor;
pub mod galois;
pub mod heights;
pub mod places;
pub mod poly;
pub mod polyx;
pub mod rational;
pub mod ratfunc;
pub mod specialize;
pub mod wreath;

pub use poly::{ArithError, Poly, Var};
pub use polyx::PolyX;
pub use ratfunc::RatFunc;
pub use rational::Rational;

/// Default cap on the x-degree accepted by the function-field factorizer.
pub const DEFAULT_MAX_DEGREE: usize = 64;
/// Default cap on dynamical iteration depth.
pub const DEFAULT_MAX_ITER: u32 = 64;
