use nalgebra::{DMatrix, DVector};

use super::DiscreteSystem;
use crate::error::{precondition, Error, Result};

/// Coefficient vectors at the requested output times.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DVector<f64>>,
}

/// Advances M c′ = F(t) − A c from c(0) = c0 with the SSP third-order Runge-Kutta scheme.
///
/// Each interval between consecutive output times is split into equal steps no longer than h.
pub fn rk3_integrate(system: &DiscreteSystem, c0: &DVector<f64>, h: f64, times: &[f64]) -> Result<Trajectory> {
    if !(h > 0.0) || !h.is_finite() {
        return precondition(format!("time step must be positive, got {h}"));
    }
    if c0.len() != system.dimension() {
        return precondition("initial state dimension does not match the system");
    }
    if times.iter().any(|t| !(*t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return precondition("output times must be non-negative and non-decreasing");
    }
    let k: DMatrix<f64> = system.factor.solve(&system.stiffness);
    let g: Vec<DVector<f64>> = system.load.iter().map(|(_, b)| system.solve_mass(b)).collect();
    let rhs = |t: f64, c: &DVector<f64>| -> DVector<f64> {
        let mut out = -(&k * c);
        for ((a, _), gk) in system.load.iter().zip(&g) {
            out.axpy(a(t), gk, 1.0);
        }
        out
    };
    let mut c = c0.clone();
    let mut t = 0.0;
    let mut states = Vec::with_capacity(times.len());
    for &target in times {
        let span = target - t;
        let steps = (span / h - 1e-9).ceil().max(0.0) as usize;
        if steps > 0 {
            let dt = span / steps as f64;
            for _ in 0..steps {
                let u1 = &c + rhs(t, &c) * dt;
                let u2 = &c * 0.75 + (&u1 + rhs(t + dt, &u1) * dt) * 0.25;
                c = &c * (1.0 / 3.0) + (&u2 + rhs(t + 0.5 * dt, &u2) * dt) * (2.0 / 3.0);
                t += dt;
                if c.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Unstable { time: t });
                }
            }
        }
        t = target;
        states.push(c.clone());
    }
    Ok(Trajectory { times: times.to_vec(), states })
}
