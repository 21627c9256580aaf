//! The Riccati equation for `A(t)` and the amplitude equation for `nu(t)`:
//! `A' = -2i (R + (S A + A S^T)/2 + A conj(R) A)`,
//! `nu'/nu = -i (Tr S / 2 + Tr(conj(R) A))`.

use num_complex::Complex64;

use crate::bargmann::SqueezeMatrix;
use crate::error::{Error, Result};
use crate::numerics::linalg::{takagi_radius, ComplexMatrix};
use crate::numerics::ode::rk4_solve_guarded;

/// Integration aborts once the Takagi radius reaches `1 - DISK_EXIT_MARGIN`.
pub const DISK_EXIT_MARGIN: f64 = 1e-8;

/// Default RK4 step.
pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct SymbolTrajectory {
    pub times: Vec<f64>,
    pub a_t: Vec<SqueezeMatrix>,
    pub nu_t: Vec<Complex64>,
}

fn unpack(n: usize, y: &[Complex64]) -> (ComplexMatrix, Complex64) {
    (ComplexMatrix::from_row_slice(n, n, &y[..n * n]), y[n * n])
}

fn pack(a: &ComplexMatrix, nu: Complex64) -> Vec<Complex64> {
    let n = a.nrows();
    let mut y = Vec::with_capacity(n * n + 1);
    for i in 0..n {
        for j in 0..n {
            y.push(a[(i, j)]);
        }
    }
    y.push(nu);
    y
}

/// Right-hand side of the symbol system at one instant.
pub fn symbol_field(r: &ComplexMatrix, s: &ComplexMatrix, a: &ComplexMatrix, nu: Complex64) -> (ComplexMatrix, Complex64) {
    let rbar = r.map(|x| x.conj());
    let minus_2i = Complex64::new(0.0, -2.0);
    let inner = r + (s * a + a * s.transpose()).map(|x| x * 0.5) + a * &rbar * a;
    let da = inner.map(|x| x * minus_2i);
    let dnu = nu * Complex64::new(0.0, -1.0) * (s.trace() * 0.5 + (&rbar * a).trace());
    (da, dnu)
}

/// Solves the symbol ODEs with `A(0) = a0`, `nu(0) = nu0`.
pub fn symbol_ode_solve<RF, SF>(
    r_of_t: RF,
    s_of_t: SF,
    a0: &SqueezeMatrix,
    nu0: Complex64,
    t: f64,
    step: f64,
) -> Result<SymbolTrajectory>
where
    RF: Fn(f64) -> ComplexMatrix,
    SF: Fn(f64) -> ComplexMatrix,
{
    let n = a0.dim();
    let field = |tt: f64, y: &[Complex64]| -> Vec<Complex64> {
        let (a, nu) = unpack(n, y);
        let (da, dnu) = symbol_field(&r_of_t(tt), &s_of_t(tt), &a, nu);
        pack(&da, dnu)
    };
    let guard = |tt: f64, y: &[Complex64]| -> Result<()> {
        let (a, _) = unpack(n, y);
        let sym = (&a + a.transpose()).map(|x| x * 0.5);
        let kappa = takagi_radius(&sym)?;
        if kappa >= 1.0 - DISK_EXIT_MARGIN {
            return Err(Error::DiskExit { t: tt, kappa });
        }
        Ok(())
    };
    let traj = rk4_solve_guarded(field, &pack(a0.matrix(), nu0), t, step, guard)?;
    let mut a_t = Vec::with_capacity(traj.times.len());
    let mut nu_t = Vec::with_capacity(traj.times.len());
    for y in &traj.states {
        let (a, nu) = unpack(n, y);
        let sym = (&a + a.transpose()).map(|x| x * 0.5);
        a_t.push(SqueezeMatrix::new(sym)?);
        nu_t.push(nu);
    }
    Ok(SymbolTrajectory { times: traj.times, a_t, nu_t })
}

/// [`symbol_ode_solve`] with constant `R`, `S`.
pub fn symbol_ode_solve_constant(
    r: &ComplexMatrix,
    s: &ComplexMatrix,
    a0: &SqueezeMatrix,
    nu0: Complex64,
    t: f64,
    step: f64,
) -> Result<SymbolTrajectory> {
    if r.shape() != (a0.dim(), a0.dim()) || s.shape() != (a0.dim(), a0.dim()) {
        return Err(Error::invalid("R and S must have the dimension of A"));
    }
    symbol_ode_solve(|_| r.clone(), |_| s.clone(), a0, nu0, t, step)
}
