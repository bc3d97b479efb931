//! Exact-arithmetic machinery for one-dimensional exponent pairs.
//!
//! The crate builds the convex hull of all known exponent pairs from its
//! two-sided vertex recursion, runs the verification suite that establishes
//! the hull's convexity, closure under the A/B/C transforms and containment
//! of the known pairs, regenerates the dual construction that reads new
//! pairs off the piecewise bounds for exponential sums, and minimizes
//! fractional-linear objectives over the hull exactly to reproduce the
//! resulting piecewise bounds (zeta moments, the mu function, zero-density
//! exponents, the generalized divisor problem, Pythagorean triangle counts).
//!
//! All arithmetic on the critical paths is exact: big rationals, quadratic
//! surds compared by squaring, and rational-endpoint certified intervals for
//! the few logarithm/square-root evaluations.

pub mod apps;
pub mod beta;
pub mod catalog;
pub mod exact;
pub mod geometry;
pub mod hull;
pub mod optimizer;
pub mod poly;
pub mod report;

pub use exact::{CertInterval, QuadraticSurd, Rat};
pub use report::Report;
