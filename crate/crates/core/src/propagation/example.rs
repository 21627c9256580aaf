//! Propagation around the critical point `o = pi(1, 0)`: the symbol ODE
//! prediction and its comparison with exact quantum dynamics.

use num_complex::Complex64;
use serde::Serialize;

use crate::bargmann::SqueezeMatrix;
use crate::error::Result;
use crate::numerics::linalg::ComplexMatrix;
use crate::spin::{ket_mu, SpinState, SqueezeParameter};

use super::hamiltonian::{delta_phase, hamilton_flow, hessian_blocks, HamiltonianSpec};
use super::quantum::quantum_propagate;
use super::symbol_ode::{symbol_ode_solve_constant, DEFAULT_STEP};

/// Sampled symbol data `(w(t), A(t) = [mu(t)], nu(t), delta_t)` for `N = 2`.
#[derive(Debug, Clone)]
pub struct PropagationResult {
    pub times: Vec<f64>,
    pub a_t: Vec<SqueezeMatrix>,
    pub nu_t: Vec<Complex64>,
    pub delta_t: Vec<f64>,
    pub w_t: Vec<[Complex64; 2]>,
}

impl PropagationResult {
    /// `mu(t)`, the single entry of `A(t)`.
    pub fn mu(&self, i: usize) -> Complex64 {
        self.a_t[i].matrix()[(0, 0)]
    }

    pub fn last_index(&self) -> usize {
        self.times.len() - 1
    }
}

/// Flows `w` from `(1, 0)` and solves the symbol ODEs from `A(0) = [mu0]`,
/// `nu(0) = 1`, with `R`, `S` the Hessian blocks of `h` at `o`.
pub fn propagate_symbol(h: &HamiltonianSpec, mu0: SqueezeParameter, t: f64, step: f64) -> Result<PropagationResult> {
    let blocks = hessian_blocks(h)?;
    let r = ComplexMatrix::from_element(1, 1, blocks.r);
    let s = ComplexMatrix::from_element(1, 1, Complex64::new(blocks.s, 0.0));
    let a0 = SqueezeMatrix::scalar(mu0.value())?;
    let sym = symbol_ode_solve_constant(&r, &s, &a0, Complex64::new(1.0, 0.0), t, step)?;
    let w0 = nalgebra::DVector::from_column_slice(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    let flow = hamilton_flow(h, &w0, t, step)?;
    let delta_t = delta_phase(&flow, h)?;
    let w_t = flow.states.iter().map(|y| [y[0], y[1]]).collect();
    Ok(PropagationResult { times: sym.times, a_t: sym.a_t, nu_t: sym.nu_t, delta_t, w_t })
}

/// Leading-order prediction `nu(t) e^{ik delta_t} |o, mu(t)>` for `e^{-ikt h^}|o, mu0>`.
pub fn semiclassical_prediction(mu0: SqueezeParameter, h: &HamiltonianSpec, t: f64, k: u32) -> Result<SpinState> {
    let res = propagate_symbol(h, mu0, t, DEFAULT_STEP)?;
    let i = res.last_index();
    let mu = SqueezeParameter::new(res.mu(i))?;
    let phase = Complex64::from_polar(1.0, k as f64 * res.delta_t[i]);
    Ok(ket_mu(k, mu)?.scaled(res.nu_t[i] * phase))
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub k: u32,
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub l2_difference: f64,
    #[serde(skip)]
    pub lhs: SpinState,
    #[serde(skip)]
    pub rhs: SpinState,
}

/// `|| normalized e^{-ikt h^}|o,0> - normalized prediction ||` for
/// `h = a^2 l_1^2 - b^2 l_2^2`.
pub fn compare_propagation(k: u32, t: f64, a: f64, b: f64) -> Result<CompareReport> {
    let h = HamiltonianSpec::hyperbolic(a, b);
    let zero = SqueezeParameter::new(Complex64::new(0.0, 0.0))?;
    let lhs = quantum_propagate(&ket_mu(k, zero)?, &h, t)?.normalized()?;
    let rhs = semiclassical_prediction(zero, &h, t, k)?.normalized()?;
    let l2_difference = lhs.distance(&rhs)?;
    Ok(CompareReport { k, t, a, b, l2_difference, lhs, rhs })
}
