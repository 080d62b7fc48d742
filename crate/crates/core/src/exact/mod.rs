//! Exact arithmetic: rationals, t-polynomials, torus Laurent polynomials and rational functions.

pub mod ct;
pub mod lattice;
pub mod laurent;
pub mod qrat;
pub mod rational;
pub mod tpoly;

pub use ct::{ct_exact, ct_series, PointedDen, DEFAULT_ORDER};
pub use laurent::{exact_divide, poly_arith, ArithOp, TorusLaurent};
pub use qrat::QRat;
pub use rational::{substitute_point, weyl_substitute, TorusRational};
pub use tpoly::{TPoly, TRat};
