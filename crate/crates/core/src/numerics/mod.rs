//! Numerical kernels shared by the rest of the crate.

pub mod combinatorics;
pub mod linalg;
pub mod ode;
pub mod quadrature;

pub use combinatorics::{ln_factorial, ln_poisson_mode, log_binomial};
pub use linalg::{
    c, cmat, cvec, hermitian_propagator, takagi_radius, takagi_values, ComplexMatrix, ComplexVector,
    HermitianPropagator,
};
pub use ode::{rk4_solve, rk4_solve_guarded, Trajectory};
pub use quadrature::{
    gauss_hermite, gauss_legendre, gaussian_tensor_integral, line_trapezoid, periodic_quadrature, periodic_trapezoid_fixed, PeriodicTrapezoid,
};
