//! Simple rational pseudo-Voigt / complex error function approximation.
//!
//! The Gaussian kernel `e^(-t^2)` is replaced by a short sum of damped terms
//! `a_n |t|^n e^(-b_n |t|)` whose half-line Fourier-Laplace transforms are
//! elementary rational functions. With two terms this yields closed forms for
//! the Voigt function `K(x, y)` and its companion `L(x, y)`, the real and
//! imaginary parts of `w(x + iy)`.
//!
//! Modules:
//! - [`kernel`]: the damped-term expansion, its error term and a coefficient fitter.
//! - [`pseudo_voigt`]: the rational approximations of `K`, `L` and `w`.
//! - [`oracle`]: adaptive-quadrature reference values for `K` and `L`.
//! - [`discrepancy`]: grid scans and maximum-error search against the oracle.
//! - [`csvio`]: CSV output shared by the command-line tool.

pub mod csvio;
pub mod discrepancy;
pub mod error;
pub mod kernel;
pub mod oracle;
pub mod pseudo_voigt;

pub use discrepancy::{
    find_max_discrepancy, kernel_profile, scan, DiscrepancyReport, DiscrepancyRow, KernelRow,
    MaxLocation, ScanGrid,
};
pub use error::{Error, Result};
pub use kernel::{
    epsilon_error, evaluate_expansion, fit_expansion, half_kernel_approx, FitObjective, FitOptions,
    FitResult, KernelExpansion, Term,
};
pub use oracle::{k_reference, l_reference, w_reference, QuadratureConfig};
pub use pseudo_voigt::{
    faddeeva_approx, voigt_k_approx, voigt_l_approx, ComplexArgument, Component, FaddeevaValue,
    PseudoVoigtParams,
};
