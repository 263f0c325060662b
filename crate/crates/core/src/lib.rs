//! Random dynamical systems generated by i.i.d. iteration of the Volterra
//! cubic stochastic operator `V_θ` on the two-dimensional probability simplex.
//!
//! The crate is organised bottom-up:
//!
//! - [`simplex`]: points of Δ², the operator in closed and tensor form, the
//!   S₃ symmetry, the six invariant sectors and the seven common fixed points.
//! - [`distribution`]: the law of the random parameter, seeded sampling and
//!   exact logarithmic expectations.
//! - [`orbit`]: forward random orbits, convergence verdicts, basin and
//!   escape experiments.
//! - [`stability`]: Jacobians, eigenvalues at the fixed points, Lyapunov
//!   exponents and the attractor classifier.
//! - [`normal_form`]: the reduced chart around the center, its quadratic
//!   normal form and the slope-drift computation.

pub mod distribution;
pub mod error;
pub mod normal_form;
pub mod orbit;
pub mod simplex;
pub mod stability;

pub use distribution::{LogIntegrand, SeedSpec, ThetaDistribution};
pub use error::{Error, Result};
pub use orbit::{BasinEstimate, OrbitParams, TrajectoryRecord};
pub use simplex::{FixedPointLabel, SimplexPoint, Theta};
pub use stability::{Exponents, StabilityReport};
