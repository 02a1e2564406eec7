use crate::approx::project_natural;
use crate::error::{domain, Result};
use crate::glf::{GLFExpansion, GLFParams};
use crate::oracle::{adaptive_jacobi, Callable1D};
use crate::specfun::{gamma, gamma_ratio};

/// 𝔻^{s,λ}u = f on ℝ⁺ with homogeneous initial conditions, s ∈ [0, 2).
#[derive(Debug, Clone)]
pub struct ModelProblem {
    pub s: f64,
    pub lambda: f64,
    pub f: Callable1D,
}

impl ModelProblem {
    pub fn new(s: f64, lambda: f64, f: Callable1D) -> Result<Self> {
        if !(0.0..2.0).contains(&s) {
            return domain(format!("model problem order s must lie in [0, 2), got {s}"));
        }
        GLFParams::new(0.0, lambda)?;
        Ok(Self { s, lambda, f })
    }
}

/// Petrov-Galerkin solution in 𝓕_N^{s,λ}: û_n = f̂_n / h_n^{s,s} with f̂ the 𝓛^{(0,λ)} coefficients of f.
pub fn solve_model(problem: &ModelProblem, n: usize) -> Result<GLFExpansion> {
    let s = problem.s;
    let f_hat = project_natural(&problem.f, GLFParams::new(0.0, problem.lambda)?, n)?;
    let coeffs = f_hat
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| Ok(c / gamma_ratio(s, s, k)?))
        .collect::<Result<Vec<f64>>>()?;
    GLFExpansion::new(GLFParams::new(-s, problem.lambda)?, coeffs)
}

/// u(x) = (x^s/Γ(s)) ∫₀¹ (1−t)^{s−1} e^{−λ(1−t)x} f(xt) dt.
pub fn exact_model_solution(problem: &ModelProblem, x: f64) -> Result<f64> {
    let s = problem.s;
    if s == 0.0 {
        return domain("the exact solution has no integral form at s = 0");
    }
    if x < 0.0 {
        return domain(format!("exact model solution is defined for x >= 0, got {x}"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let lambda = problem.lambda;
    let integral = adaptive_jacobi(s - 1.0, 0.0, "exact model solution", |t| {
        (-lambda * (1.0 - t) * x).exp() * problem.f.eval(x * t)
    })?;
    Ok(x.powf(s) / gamma(s)? * integral)
}
