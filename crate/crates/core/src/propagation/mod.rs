//! Classical lifts and flows, quantized spin Hamiltonians, the symbol ODEs and
//! the hyperbolic-squeezing example.

pub mod example;
pub mod hamiltonian;
pub mod quantum;
pub mod symbol_ode;

pub use example::{compare_propagation, propagate_symbol, semiclassical_prediction, CompareReport, PropagationResult};
pub use hamiltonian::{
    classical_lift_eval, delta_phase, hamilton_flow, hessian_blocks, lift_real_hessian, HamiltonianSpec,
    HessianBlocks, Term,
};
pub use quantum::{quantize, quantum_propagate, spin_operators, QuantumPropagator, SpinOperators};
pub use symbol_ode::{symbol_ode_solve, symbol_ode_solve_constant, SymbolTrajectory};
