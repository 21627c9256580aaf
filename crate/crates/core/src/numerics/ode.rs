//! Fixed-step classical Runge-Kutta for complex state vectors.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
}

impl Trajectory {
    pub fn last(&self) -> (f64, &[Complex64]) {
        let i = self.times.len() - 1;
        (self.times[i], &self.states[i])
    }
}

fn axpy(y: &[Complex64], h: f64, k: &[Complex64]) -> Vec<Complex64> {
    y.iter().zip(k).map(|(a, b)| a + b * h).collect()
}

/// Integrates `dy/dt = field(t, y)` from `t = 0` to `t_final` with RK4.
///
/// The last step is shortened so that `t_final` is hit exactly.
pub fn rk4_solve<F>(field: F, y0: &[Complex64], t_final: f64, step: f64) -> Result<Trajectory>
where
    F: Fn(f64, &[Complex64]) -> Vec<Complex64>,
{
    rk4_solve_guarded(field, y0, t_final, step, |_, _| Ok(()))
}

/// As [`rk4_solve`], calling `guard` on every accepted state (including the
/// initial one); an error from the guard aborts the integration.
pub fn rk4_solve_guarded<F, G>(
    field: F,
    y0: &[Complex64],
    t_final: f64,
    step: f64,
    mut guard: G,
) -> Result<Trajectory>
where
    F: Fn(f64, &[Complex64]) -> Vec<Complex64>,
    G: FnMut(f64, &[Complex64]) -> Result<()>,
{
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::invalid(format!("step must be positive, got {step}")));
    }
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::invalid(format!("final time must be finite and >= 0, got {t_final}")));
    }
    guard(0.0, y0)?;
    let steps = (t_final / step).ceil() as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(y0.to_vec());
    let mut y = y0.to_vec();
    for i in 0..steps {
        let t = i as f64 * step;
        let t_next = if i + 1 == steps { t_final } else { (i + 1) as f64 * step };
        let h = t_next - t;
        if h <= 0.0 {
            continue;
        }
        let k1 = field(t, &y);
        let k2 = field(t + 0.5 * h, &axpy(&y, 0.5 * h, &k1));
        let k3 = field(t + 0.5 * h, &axpy(&y, 0.5 * h, &k2));
        let k4 = field(t + h, &axpy(&y, h, &k3));
        for j in 0..y.len() {
            y[j] += (k1[j] + (k2[j] + k3[j]) * 2.0 + k4[j]) * (h / 6.0);
        }
        if y.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::BlowUp { t: t_next });
        }
        guard(t_next, &y)?;
        times.push(t_next);
        states.push(y.clone());
    }
    Ok(Trajectory { times, states })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(x: f64) -> Vec<Complex64> {
        vec![Complex64::new(x, 0.0)]
    }

    #[test]
    fn zero_field_keeps_state() {
        let y0 = vec![Complex64::new(0.3, -2.0)];
        let tr = rk4_solve(|_, y| vec![Complex64::new(0.0, 0.0); y.len()], &y0, 2.5, 0.1).unwrap();
        assert_eq!(tr.last().1, &y0[..]);
        assert_eq!(tr.last().0, 2.5);
    }

    #[test]
    fn final_time_hit_exactly() {
        let tr = rk4_solve(|_, y| y.iter().map(|v| -v).collect(), &one(1.0), 1.0, 0.3).unwrap();
        assert_eq!(tr.times.len(), 5);
        assert_eq!(*tr.times.last().unwrap(), 1.0);
        assert!((tr.last().1[0].re - (-1f64).exp()).abs() < 1e-4);
    }

    #[test]
    fn blow_up_is_reported() {
        let err = rk4_solve(|_, y| y.iter().map(|v| v * v * 1e3).collect(), &one(1.0), 10.0, 0.01)
            .unwrap_err();
        assert!(matches!(err, Error::BlowUp { .. }));
    }

    #[test]
    fn rejects_bad_step() {
        assert!(rk4_solve(|_, y| y.to_vec(), &one(1.0), 1.0, 0.0).is_err());
        assert!(rk4_solve(|_, y| y.to_vec(), &one(1.0), 1.0, -1.0).is_err());
    }
}
