//! Property tests. Random objects are drawn from a seeded generator so that
//! proptest controls (and can shrink) the seed.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use spinsqueeze::bargmann::{
    gaussian_state_eval, gaussian_state_eval_phase_form, quadratic_form, unitary_covariance, weyl_translate_eval,
    SqueezeMatrix,
};
use spinsqueeze::numerics::linalg::{frobenius, principal_sqrt, hermitian, norm_sqr, right_mul, unitarity_defect};
use spinsqueeze::numerics::{
    hermitian_propagator, periodic_trapezoid_fixed, rk4_solve, takagi_radius, takagi_values, ComplexMatrix,
    ComplexVector,
};
use spinsqueeze::propagation::{
    hamilton_flow, quantize, quantum_propagate, HamiltonianSpec, Term,
};
use spinsqueeze::random::{self, SeededRng};
use spinsqueeze::reduction::{reduce_exact, reduce_quadrature, reduce_symbol_matrix, symbol_eval_closed, symbol_eval_integral};
use spinsqueeze::spin::{ket_mu, reduced_to_state, su2_action, SpinState, SqueezeParameter};

fn rng(seed: u64) -> SeededRng {
    random::seeded(seed)
}

fn hermitian_matrix(rng: &mut SeededRng, n: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| random::complex_normal(rng));
    (&g + g.adjoint()).map(|x| x * 0.5)
}

fn random_state(rng: &mut SeededRng, k: u32) -> SpinState {
    let coeffs = (0..=k).map(|_| random::complex_normal(rng)).collect();
    SpinState::new(k, coeffs).unwrap().normalized().unwrap()
}

fn random_hamiltonian(rng: &mut SeededRng) -> HamiltonianSpec {
    use rand::Rng;
    let mut terms = Vec::new();
    for _ in 0..rng.random_range(1..5) {
        let mut exps = [0u32; 3];
        for _ in 0..rng.random_range(0..=4) {
            exps[rng.random_range(0..3)] += 1;
        }
        terms.push(Term { coeff: rng.random_range(-1.0..1.0), exps });
    }
    HamiltonianSpec::new(terms).unwrap()
}

/// `min_t |e^{it} z - w|` for unit vectors.
fn fiber_distance(z: &ComplexVector, w: &ComplexVector) -> f64 {
    (2.0 - 2.0 * hermitian(z, w).norm()).max(0.0).sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn takagi_values_are_unitarily_invariant(seed in any::<u64>(), n in 1usize..5) {
        let mut r = rng(seed);
        let a = random::squeeze_matrix(&mut r, n, 0.99);
        let u = random::unitary(&mut r, n);
        let moved = &u * a.matrix() * u.transpose();
        let (before, after) = (takagi_values(a.matrix()).unwrap(), takagi_values(&moved).unwrap());
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() < 1e-12, "{before:?} vs {after:?}");
        }
    }

    #[test]
    fn hermitian_propagator_preserves_norm(seed in any::<u64>(), n in 1usize..9, theta in -20.0f64..20.0) {
        let mut r = rng(seed);
        let h = hermitian_matrix(&mut r, n);
        let u = hermitian_propagator(&h, theta).unwrap();
        prop_assert!(unitarity_defect(&u) < 1e-12);
        let x = ComplexVector::from_fn(n, |_, _| random::complex_normal(&mut r));
        prop_assert!(((&u * &x).norm() - x.norm()).abs() <= 1e-12 * x.norm());
    }

    #[test]
    fn gaussian_state_formulas_agree(seed in any::<u64>(), n in 1usize..4, k in 1u32..200) {
        let mut r = rng(seed);
        let a = random::squeeze_matrix(&mut r, n, 0.99);
        let w = random::sphere_point(&mut r, n).map(|x| x * 1.3);
        let z = w.clone() + random::sphere_point(&mut r, n).map(|x| x * 0.2);
        let one = gaussian_state_eval(&a, &w, k, &z).unwrap();
        let two = gaussian_state_eval_phase_form(&a, &w, k, &z).unwrap();
        prop_assert!((one - two).norm() <= 1e-12 * two.norm());
    }

    #[test]
    fn gaussian_state_decays_away_from_center(seed in any::<u64>(), n in 1usize..4, k in 1u32..500) {
        let mut r = rng(seed);
        let a = random::squeeze_matrix(&mut r, n, 0.999);
        let w = random::sphere_point(&mut r, n);
        let z = random::sphere_point(&mut r, n);
        let delta = (&z - &w).norm();
        let bound = (-(k as f64) * (1.0 - a.kappa()) * delta * delta / 2.0).exp();
        prop_assert!(gaussian_state_eval(&a, &w, k, &z).unwrap().norm() <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn weyl_translate_of_centered_state(seed in any::<u64>(), n in 1usize..4, k in 1u32..60) {
        let mut r = rng(seed);
        let a = random::squeeze_matrix(&mut r, n, 0.9);
        let w = random::sphere_point(&mut r, n).map(|x| x * 0.8);
        let z = &w + random::sphere_point(&mut r, n).map(|x| x * 0.3);
        let kf = k as f64;
        let holo = |y: &ComplexVector| (quadratic_form(&a, y).unwrap() * (kf / 2.0)).exp();
        let translated = weyl_translate_eval(holo, &w, k, &z) * (-kf * norm_sqr(&z) / 2.0).exp();
        let want = gaussian_state_eval(&a, &w, k, &z).unwrap();
        prop_assert!((translated - want).norm() <= 1e-12 * want.norm());
    }

    #[test]
    fn unitary_covariance_is_a_group_action(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let a = random::squeeze_matrix(&mut r, n, 0.95);
        let w = random::sphere_point(&mut r, n);
        let (g1, g2) = (random::unitary(&mut r, n), random::unitary(&mut r, n));
        let (a12, w12) = unitary_covariance(&(&g1 * &g2), &a, &w).unwrap();
        let (a2, w2) = unitary_covariance(&g2, &a, &w).unwrap();
        let (a_seq, w_seq) = unitary_covariance(&g1, &a2, &w2).unwrap();
        prop_assert!(frobenius(&(a12.matrix() - a_seq.matrix())) < 1e-12);
        prop_assert!((w12 - w_seq).norm() < 1e-12);
    }

    #[test]
    fn reduction_matches_quadrature(seed in any::<u64>(), three in any::<bool>(), k in 1u32..=60) {
        let mut r = rng(seed);
        let n = if three { 3 } else { 2 };
        let a = random::squeeze_matrix(&mut r, n, 0.95);
        let w = random::sphere_point(&mut r, n);
        let z = random::sphere_point(&mut r, n);
        let e = reduce_exact(&a, &w, k, &z).unwrap();
        let q = reduce_quadrature(&a, &w, k, &z, 1e-13).unwrap();
        prop_assert!((e - q).norm() <= 1e-10 * q.norm(), "{e} vs {q}");
    }

    #[test]
    fn reduction_is_unitarily_covariant(seed in any::<u64>(), three in any::<bool>(), k in 1u32..=120) {
        let mut r = rng(seed);
        let n = if three { 3 } else { 2 };
        let a = random::squeeze_matrix(&mut r, n, 0.95);
        let w = random::sphere_point(&mut r, n);
        let z = random::sphere_point(&mut r, n);
        let g = random::unitary(&mut r, n);
        let (ga, gw) = unitary_covariance(&g, &a, &w).unwrap();
        let lhs = reduce_exact(&ga, &gw, k, &z).unwrap();
        let rhs = reduce_exact(&a, &w, k, &right_mul(&z, &g)).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm());
    }

    #[test]
    fn reduction_inherits_micro_support(seed in any::<u64>(), three in any::<bool>(), k in 1u32..=400) {
        let mut r = rng(seed);
        let n = if three { 3 } else { 2 };
        let a = random::squeeze_matrix(&mut r, n, 0.99);
        let w = random::sphere_point(&mut r, n);
        let z = random::sphere_point(&mut r, n);
        let d = fiber_distance(&z, &w);
        let bound = (-(k as f64) * (1.0 - a.kappa()) * d * d / 2.0).exp();
        prop_assert!(reduce_exact(&a, &w, k, &z).unwrap().norm() <= bound * (1.0 + 1e-9));
    }

    #[test]
    fn symbol_forms_agree(seed in any::<u64>(), three in any::<bool>()) {
        let mut r = rng(seed);
        let n = if three { 3 } else { 2 };
        let a = random::squeeze_matrix(&mut r, n, 0.9);
        let w = random::sphere_point(&mut r, n);
        let sym = reduce_symbol_matrix(&a, &w).unwrap();
        let eta = random::horizontal_vector(&mut r, &w, 2.5);
        let closed = symbol_eval_closed(&sym, &eta).unwrap();
        let integral = symbol_eval_integral(&a, &w, &eta).unwrap();
        prop_assert!((closed - integral).norm() <= 1e-10);
    }

    #[test]
    fn symbol_frame_is_orthonormal_and_horizontal(seed in any::<u64>(), n in 2usize..5) {
        let mut r = rng(seed);
        let a = random::squeeze_matrix(&mut r, n, 0.9);
        let w = random::sphere_point(&mut r, n);
        let sym = reduce_symbol_matrix(&a, &w).unwrap();
        let frame = sym.frame();
        prop_assert_eq!(frame.len(), n - 1);
        for (i, f) in frame.iter().enumerate() {
            prop_assert!(hermitian(f, &w).norm() < 1e-12);
            for (j, g) in frame.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((hermitian(f, g) - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn su2_action_is_a_representation(seed in any::<u64>(), k in 1u32..40) {
        let mut r = rng(seed);
        let (g1, g2) = (random::special_unitary_2(&mut r), random::special_unitary_2(&mut r));
        let s = random_state(&mut r, k);
        let joint = su2_action(&(&g1 * &g2), &s).unwrap();
        let nested = su2_action(&g1, &su2_action(&g2, &s).unwrap()).unwrap();
        prop_assert!(joint.distance(&nested).unwrap() < 1e-12);
        prop_assert!((joint.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quantum_propagation_is_unitary(seed in any::<u64>(), k in 1u32..40, t in -5.0f64..5.0) {
        let mut r = rng(seed);
        let h = random_hamiltonian(&mut r);
        let s = random_state(&mut r, k);
        let out = quantum_propagate(&s, &h, t).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classical_flow_stays_on_the_sphere(seed in any::<u64>(), t in 0.0f64..3.0) {
        let mut r = rng(seed);
        let h = random_hamiltonian(&mut r);
        let w0 = random::sphere_point(&mut r, 2);
        let traj = hamilton_flow(&h, &w0, t, 1e-3).unwrap();
        for y in &traj.states {
            let nrm: f64 = y.iter().map(|c| c.norm_sqr()).sum();
            prop_assert!((nrm.sqrt() - 1.0).abs() < 1e-8);
        }
    }
}

#[test]
fn reduced_squeeze_parameter_stays_in_the_disk() {
    let mut r = rng(5);
    for i in 0..500 {
        let n = 2 + i % 3;
        let a = random::squeeze_matrix(&mut r, n, 0.9999);
        let w = random::sphere_point(&mut r, n);
        let sym = reduce_symbol_matrix(&a, &w).unwrap();
        assert!(takagi_radius(sym.matrix().matrix()).unwrap() < 1.0);
    }
}

#[test]
fn periodic_trapezoid_converges_geometrically() {
    let f = |t: f64| Complex64::new(0.0, 1.0 * t.sin()).exp() * (1.0 / (1.25 - t.cos()));
    let exact = periodic_trapezoid_fixed(f, 1024);
    let errs: Vec<f64> = [8, 16, 32].iter().map(|&n| (periodic_trapezoid_fixed(f, n) - exact).norm()).collect();
    // Each doubling squares the error ratio rather than dividing by a fixed power of two.
    assert!(errs[1] / errs[0] < 1e-2, "{errs:?}");
    assert!(errs[2] / errs[1] < errs[1] / errs[0], "{errs:?}");
}

#[test]
fn rk4_is_fourth_order() {
    let field = |_: f64, y: &[Complex64]| vec![-y[0]];
    let err = |h: f64| {
        let tr = rk4_solve(field, &[Complex64::new(1.0, 0.0)], 1.0, h).unwrap();
        (tr.last().1[0] - (-1.0f64).exp()).norm()
    };
    let steps = [0.1, 0.05, 0.025, 0.0125];
    let errs: Vec<f64> = steps.iter().map(|&h| err(h)).collect();
    let n = steps.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = steps.iter().zip(&errs).map(|(h, e)| (h.ln(), e.ln())).unzip();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let slope = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((3.8..=4.2).contains(&slope), "slope {slope}");
}

#[test]
fn scaled_reduction_of_lower_corner_approaches_ket() {
    // || k/sqrt(pi) Psi_[mu] - |o,mu> || / || |o,mu> || times sqrt(k) stays bounded.
    let mu = Complex64::new(0.5, 0.25);
    let a = SqueezeMatrix::lower_corner(mu).unwrap();
    let mut scaled = Vec::new();
    for k in [25u32, 100, 400] {
        let kf = k as f64;
        let red = reduced_to_state(&a, k).unwrap().scaled(Complex64::new(kf / PI.sqrt(), 0.0));
        let ket = ket_mu(k, SqueezeParameter::new(mu).unwrap()).unwrap();
        scaled.push(red.distance(&ket).unwrap() / ket.norm() * kf.sqrt());
    }
    assert!(scaled.iter().all(|&s| s <= 3.0 * scaled[0]), "{scaled:?}");
}

#[test]
fn reduced_state_depends_on_the_corner_combination_only() {
    // ||Psi_{A,(1,0)} - (1+a)^{-1/2} Psi_[mu]|| / ||Psi_[mu]|| = O(1/sqrt k) with mu = b - c^2/(1+a).
    // Without the scalar (1+a)^{-1/2} the two differ at leading order, as the center values show.
    let mut r = rng(16);
    for _ in 0..20 {
        let a = random::squeeze_matrix(&mut r, 2, 0.8);
        let m = a.matrix();
        let mu = m[(1, 1)] - m[(0, 1)] * m[(0, 1)] / (m[(0, 0)] + 1.0);
        let corner = SqueezeMatrix::lower_corner(mu).unwrap();
        let mut scaled = Vec::new();
        for k in [25u32, 100, 400] {
            let full = reduced_to_state(&a, k).unwrap();
            let reduced = reduced_to_state(&corner, k).unwrap().scaled(principal_sqrt(m[(0, 0)] + 1.0).inv());
            scaled.push(full.distance(&reduced).unwrap() / reduced.norm() * (k as f64).sqrt());
        }
        assert!(scaled.iter().all(|&s| s <= 3.0 * scaled[0]), "{scaled:?}");
    }
}

#[test]
fn quantized_l3_acts_by_its_value_at_the_center() {
    // || (l3^ - l3(o)) Psi || / ||Psi|| = O(1/sqrt k) for reduced states centred at o = [1:0].
    let mut r = rng(17);
    let h = HamiltonianSpec::coordinate(3).unwrap();
    for _ in 0..5 {
        let a = random::squeeze_matrix(&mut r, 2, 0.8);
        let mut scaled = Vec::new();
        for k in [25u32, 100, 400] {
            let s = reduced_to_state(&a, k).unwrap().normalized().unwrap();
            let l3 = quantize(&h, k).unwrap();
            let v = s.to_vector();
            let residual = (&l3 * &v - v.map(|x| x * 0.5)).norm();
            scaled.push(residual * (k as f64).sqrt());
        }
        assert!(scaled.iter().all(|&s| s <= 3.0 * scaled[0]), "{scaled:?}");
    }
    let top = SpinState::basis(30, 30).unwrap();
    let l3 = quantize(&h, 30).unwrap();
    assert!((&l3 * top.to_vector() - top.to_vector().map(|x| x * 0.5)).norm() < 1e-15);
}
