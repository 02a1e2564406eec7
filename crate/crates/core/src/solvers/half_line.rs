use nalgebra::{DMatrix, DVector};

use super::{rk3_integrate, DiscreteSystem, Separable, TfdeProblem, Trajectory};
use crate::approx::glf_moments;
use crate::error::{precondition, Result};
use crate::glf::{GLFExpansion, GLFParams};
use crate::oracle::Callable1D;
use crate::specfun::{gamma_ratio, gauss_laguerre, laguerre_sequence_unchecked};

/// ∂ₜu + 𝔻^{μ,λ}u − λ^μ u = f on ℝ⁺ with u(0,t) = 0, discretized in 𝓕_N^{ν,λ}.
#[derive(Debug, Clone)]
pub struct HalfLineTFDE {
    pub mu: f64,
    pub lambda: f64,
    pub nu: f64,
    pub f: Separable<Callable1D>,
    pub u0: Callable1D,
    pub t_final: f64,
}

impl HalfLineTFDE {
    pub fn new(mu: f64, lambda: f64, f: Separable<Callable1D>, u0: Callable1D, t_final: f64) -> Result<Self> {
        Self { mu, lambda, nu: 1.0, f, u0, t_final }.validated()
    }

    pub fn with_nu(self, nu: f64) -> Result<Self> {
        Self { nu, ..self }.validated()
    }

    fn validated(self) -> Result<Self> {
        if !(self.mu > 0.0 && self.mu < 1.0) {
            return precondition(format!("half-line order mu must lie in (0, 1), got {}", self.mu));
        }
        GLFParams::new(-self.nu, self.lambda)?;
        let lower = (self.mu - 0.5).max(0.0);
        if !(self.nu > lower && self.nu <= 1.0) {
            return precondition(format!(
                "basis exponent nu must satisfy max(0, mu - 1/2) < nu <= 1, got nu = {} with mu = {}",
                self.nu, self.mu
            ));
        }
        if !(self.t_final > 0.0) {
            return precondition(format!("final time must be positive, got {}", self.t_final));
        }
        Ok(self)
    }

    pub fn basis_params(&self) -> GLFParams {
        GLFParams { alpha: -self.nu, lambda: self.lambda }
    }
}

/// Gram-type matrix ∫ x^p e^{−2λx} L_m^{(b)}(2λx) L_n^{(a)}(2λx) dx, rows m (test), columns n (trial).
fn laguerre_gram(p: f64, a: f64, b: f64, lambda: f64, n: usize) -> Result<DMatrix<f64>> {
    let rule = gauss_laguerre(p, n + 2)?;
    let trial: Vec<Vec<f64>> = rule.nodes.iter().map(|&y| laguerre_sequence_unchecked(a, n, y)).collect();
    let test: Vec<Vec<f64>> = rule.nodes.iter().map(|&y| laguerre_sequence_unchecked(b, n, y)).collect();
    let scale = (2.0 * lambda).powf(-p - 1.0);
    Ok(DMatrix::from_fn(n + 1, n + 1, |m, k| {
        rule.weights
            .iter()
            .enumerate()
            .map(|(i, w)| w * test[i][m] * trial[i][k])
            .sum::<f64>()
            * scale
    }))
}

fn load_vector(g: &Callable1D, nu: f64, lambda: f64, n: usize) -> Result<DVector<f64>> {
    Ok(DVector::from_vec(glf_moments(g, nu, lambda, nu, n, "half-line load")?))
}

/// M_{mn} = (φ_n, φ_m), A_{mn} = (𝔻^{μ,λ}φ_n, φ_m) − λ^μ M_{mn} with φ_n = 𝓛_n^{(−ν,λ)}.
pub fn assemble_half_line(problem: &HalfLineTFDE, n: usize) -> Result<DiscreteSystem> {
    let (mu, nu, lambda) = (problem.mu, problem.nu, problem.lambda);
    let mass = laguerre_gram(2.0 * nu, nu, nu, lambda, n)?;
    let mut derivative = laguerre_gram(2.0 * nu - mu, nu - mu, nu, lambda, n)?;
    for k in 0..=n {
        let h = gamma_ratio(nu, mu, k)?;
        derivative.column_mut(k).scale_mut(h);
    }
    let stiffness = derivative - &mass * lambda.powf(mu);
    let load = problem
        .f
        .terms
        .iter()
        .map(|(a, g)| Ok((a.clone(), load_vector(g, nu, lambda, n)?)))
        .collect::<Result<Vec<_>>>()?;
    DiscreteSystem::new(mass, stiffness, load)
}

#[derive(Debug, Clone)]
pub struct HalfLineSolution {
    pub params: GLFParams,
    pub trajectory: Trajectory,
}

impl HalfLineSolution {
    pub fn expansion(&self, k: usize) -> GLFExpansion {
        GLFExpansion { params: self.params, coeffs: self.trajectory.states[k].iter().copied().collect() }
    }

    /// u_N(x, t_k).
    pub fn eval(&self, x: f64, k: usize) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.expansion(k).eval(x)
    }
}

impl TfdeProblem for HalfLineTFDE {
    type Discretization = usize;
    type Solution = HalfLineSolution;

    fn solve(&self, n: &usize, h: f64, times: &[f64]) -> Result<HalfLineSolution> {
        let n = *n;
        let system = assemble_half_line(self, n)?;
        let b0 = load_vector(&self.u0, self.nu, self.lambda, n)?;
        let c0 = system.solve_mass(&b0);
        let trajectory = rk3_integrate(&system, &c0, h, times)?;
        Ok(HalfLineSolution { params: self.basis_params(), trajectory })
    }
}
