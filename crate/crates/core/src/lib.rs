//! Counting nonequivalent proper representations of rational integers by
//! integral indefinite binary Hermitian forms over imaginary quadratic fields.
//!
//! The crate is organized around the pipeline that produces and checks the
//! asymptotic count `psi(s) ~ C * s^2`:
//!
//! * [`ring`] — exact arithmetic in the ring of integers `O_K`, ideals in
//!   Hermite normal form, prime splitting, and enumeration of the finite
//!   quotients `SL2(O_K / a)` used as congruence-index ground truth.
//! * [`forms`] — integral binary Hermitian forms, the right `SL2(O_K)` action
//!   by precomposition, discriminants, boundary circles and reciprocity.
//! * [`hyperbolic`] — upper half-space geometry: the hyperbolic plane attached
//!   to a form, horoballs at cusps, perpendicular lengths and feet, intrinsic
//!   plane charts, point reduction and Dirichlet-domain areas.
//! * [`automorphs`] — search and exact verification of the automorph group of
//!   a form, orbit canonicalization and pair-equivalence testing.
//! * [`analytic`] — Kronecker symbols, `zeta_K(2)`, Humbert-type covolumes and
//!   the predicted asymptotic constants.
//! * [`counting`] — enumeration of coprime pairs with `|f(u,v)| <= s`, orbit
//!   deduplication and convergence reports against the predicted constants.
//!
//! Exact data (ring elements, ideals, forms, matrices) lives over `i64` with
//! `i128` intermediates; rational circle data uses `num_rational`. Continuous
//! geometry and analytic series are generic over the floating scalar through
//! the [`scalar::Real`] trait, with `f64` aliases exported at the crate root.

pub mod analytic;
pub mod automorphs;
pub mod counting;
pub mod forms;
pub mod hyperbolic;
pub mod ring;
pub mod scalar;

pub use ring::{Field, QuadIdeal, QuadInt, RingError};

/// Upper half-space point over `f64`.
pub type H3Point64 = hyperbolic::H3Point<f64>;
/// Hyperbolic plane of a form over `f64`.
pub type PlaneOfForm64 = hyperbolic::PlaneOfForm<f64>;
/// Intrinsic chart of a plane over `f64`.
pub type PlaneChart64 = hyperbolic::PlaneChart<f64>;
/// Upper half-plane point over `f64`.
pub type H2Point64 = hyperbolic::H2Point<f64>;
/// Plane isometry over `f64`.
pub type H2Isometry64 = hyperbolic::H2Isometry<f64>;
/// Dirichlet polygon over `f64`.
pub type DirichletPolygon64 = hyperbolic::DirichletPolygon<f64>;
/// Prediction constant over `f64`.
pub type PredictionConstant64 = analytic::PredictionConstant<f64>;
