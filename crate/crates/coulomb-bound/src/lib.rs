//! Numerical machinery for lower bounds on the indirect Coulomb energy of a
//! quantum many-body system in terms of its single-particle density.
//!
//! The central object is the three-term bound
//!
//! ```text
//! E ≥ −C1(1−α)^{−1/3} e^{2/3} ∫ρ^{4/3}
//!     −C2(1−α)^{−1/6} e^{5/6} √(K'·∫ρ^{4/3})
//!     −C3 e K'/α,           0 < α < 1,
//! ```
//!
//! where K' = (√ρ,|p|√ρ) is the fractional kinetic energy of √ρ. The crate
//! provides:
//!
//! * [`densities`] — radial density families (exponential, Gaussian, uniform
//!   ball, grids), Thomas–Fermi rescaling and Newton potentials;
//! * [`mu_model`] — trial smearing charge profiles and their moments
//!   (M1, M2, D(μ,μ));
//! * [`functionals`] — L = ∫ρ^{4/3}, K' by two independent routes (k-space
//!   and the position-space double integral), D(f,g) and Q = K'/L;
//! * [`bounds`] — bound assembly, α- and λ-optimization, coefficients from
//!   arbitrary smearing profiles, classical reference bounds;
//! * [`oracle`] — brute-force checks: point-charge configurations against
//!   the Onsager smearing inequality, product states against the assembled
//!   bound, and a seeded Monte Carlo estimate of the smearing error
//!   integral;
//! * [`cli`] — the batch command-line interface.
//!
//! Start with the runnable programs under `examples/`.

pub mod bounds;
pub mod cli;
pub mod densities;
pub mod error;
pub mod functionals;
mod interp;
pub mod mu_model;
pub mod oracle;
pub mod quad;

pub use crate::bounds::{BoundBreakdown, TheoremConstants};
pub use crate::densities::{DensityDescriptor, RadialDensity, SpeciesDensity};
pub use crate::error::{Error, Result};
pub use crate::functionals::FunctionalReport;
pub use crate::mu_model::{MuConstants, MuDescriptor, TrialMu};
pub use crate::oracle::{MCConfig, MCEstimate, Orbital, PointConfig, ProductState};
