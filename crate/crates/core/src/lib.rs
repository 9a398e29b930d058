//! Symbolic workbench for the formal WKB operator calculus and for Čech
//! cohomology with coefficients in finite crossed modules.
//!
//! * [`series`]: truncated Laurent series in `τ` (the scalars `k` and the
//!   group `k*`).
//! * [`wkb`]: total symbols, the Leibniz star product, inverses, adjoints
//!   and half-form transport.
//! * [`group`] and [`crossed`]: finite groups by multiplication table and
//!   crossed modules built from them.
//! * [`nerve`] and [`cech`]: cover nerves, crossed-module cocycles,
//!   equivalence search and `H^0` / `H^1`.
//! * [`descent`]: WKB descent data on a nerve, their characteristic class,
//!   and the finite-group classification bridge.
//! * [`cli`]: the batch front end used by the `wkb-cech` binary.

pub mod cech;
pub mod cli;
pub mod coeff;
pub mod crossed;
pub mod descent;
pub mod group;
pub mod nerve;
pub mod poly;
pub mod ratfn;
pub mod rational;
pub mod series;
pub mod wkb;

pub use coeff::CoeffFn;
pub use poly::Poly;
pub use ratfn::RatFn;
pub use rational::Rational;
pub use series::TauSeries;
pub use wkb::{HalfFormOperator, WkbSymbol};
