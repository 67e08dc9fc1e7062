//! Geometric tomography toolkit for convex bodies.
//!
//! The crate computes hyperplane section functions `A_K(ξ, t)` and their
//! power moments, fits `A_K^m` by polynomials in `t` to detect algebraic
//! relations, and decides from support data whether a body is an ellipsoid.
//!
//! - [`bodies`]: ellipsoids, polytopes (dimensions 2 and 3) and unbounded
//!   quadric domains with support and membership queries.
//! - [`sections`]: exact section engines and a Monte Carlo slab oracle.
//! - [`radon`]: power moments and the homogeneous-polynomial range test.
//! - [`algfit`]: minimal power, degree bound, root structure, boundary exponent.
//! - [`detect`]: recovery of center and shape from support data.
//!
//! ```
//! use tomoslice::algfit::{detect_min_m, DEFAULT_FIT_MARGIN};
//! use tomoslice::detect::{is_ellipsoid, Verdict};
//! use tomoslice::sections::{profile, section_volume};
//! use tomoslice::{Body, Direction, Ellipsoid};
//!
//! let ball: Body = Ellipsoid::unit_ball(3).into();
//! let xi = Direction::axis(3, 0);
//! let a = section_volume(&ball, &xi, 0.5).unwrap();
//! assert!((a - 0.75 * std::f64::consts::PI).abs() < 1e-14);
//!
//! let p = profile(&ball, &xi, 64, DEFAULT_FIT_MARGIN).unwrap();
//! let fit = detect_min_m(&p, 4, 1e-9).unwrap().accepted.unwrap();
//! assert_eq!((fit.m, fit.degree), (1, 2));
//!
//! let report = is_ellipsoid(&ball, 1e-8, 1e-8, 200, 42).unwrap();
//! assert_eq!(report.verdict, Verdict::Accept);
//! ```

// parameter checks are written as `!(x > 0.0)` so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algfit;
pub mod bodies;
pub mod chebyshev;
pub mod detect;
pub mod error;
pub mod linalg;
pub mod quadrature;
pub mod radon;
pub mod sections;

pub use algfit::{AlgebraicFitReport, AsymptoticReport, MinPowerReport, RootReport, RootVerdict};
pub use bodies::{Body, BodySpec, Direction, Ellipsoid, Polytope, QuadricDomain, QuadricKind, SupportValue};
pub use detect::{EllipsoidReport, Verdict};
pub use error::{Error, Result};
pub use radon::MomentReport;
pub use sections::{SectionMethod, SectionProfile};
