//! Weighted projections onto GLF spaces, weighted errors and rate fits.

use nalgebra::{DMatrix, DVector};

use crate::error::{domain, precondition, Error, Result};
use crate::glf::{orthogonality_constant, GLFExpansion, GLFParams};
use crate::oracle::{quad_cap, Callable1D};
use crate::specfun::{gauss_jacobi, gauss_laguerre, laguerre_sequence_unchecked};

const EXTRA_POINTS: usize = 16;
const PROJECTION_AGREEMENT: f64 = 1e-13;
const ERROR_AGREEMENT: f64 = 1e-6;
const ERROR_FLOOR: f64 = 1e-26;

/// Weight ω^a(x) = x^a.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedNorm {
    pub exponent: f64,
    pub lambda: Option<f64>,
}

impl WeightedNorm {
    pub fn new(exponent: f64) -> Self {
        Self { exponent, lambda: None }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }
}

/// Moments ∫₀^∞ x^p e^{−r x} g(x) b_k(x) dx, k < count, by Gauss-Laguerre in y = r x.
///
/// The rule is doubled from `start` points until successive moment vectors agree to
/// `agreement` relative to their largest entry, or to within `floor` or the roundoff level of the sums.
#[allow(clippy::too_many_arguments)]
pub(crate) fn laguerre_moments(
    p: f64,
    r: f64,
    start: usize,
    count: usize,
    agreement: f64,
    floor: f64,
    context: &str,
    g: impl Fn(f64) -> f64,
    basis: impl Fn(f64) -> Vec<f64>,
) -> Result<Vec<f64>> {
    if !(p > -1.0) {
        return domain(format!("{context}: integrand x^{p} is not integrable at 0"));
    }
    if !(r > 0.0) {
        return domain(format!("{context}: decay rate must be positive, got {r}"));
    }
    let cap = quad_cap().max(start);
    let scale = r.powf(-p - 1.0);
    let evaluate = |points: usize| -> Result<(Vec<f64>, f64)> {
        let rule = gauss_laguerre(p, points)?;
        let mut acc = vec![0.0; count];
        let mut mass = 0.0f64;
        for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
            if w == 0.0 {
                continue;
            }
            let x = y / r;
            let gx = g(x);
            if gx == 0.0 {
                continue;
            }
            let factor = w * gx;
            for (a, b) in acc.iter_mut().zip(basis(x)) {
                *a += factor * b;
                mass = mass.max((factor * b).abs());
            }
        }
        Ok((acc.into_iter().map(|a| a * scale).collect(), mass * scale))
    };
    let mut points = start.max(2);
    let (mut previous, _) = evaluate(points)?;
    loop {
        let next_points = points * 2;
        if next_points > cap {
            let (a, b) = worst_pair(&previous, &previous);
            return Err(Error::NonConvergence { context: context.into(), previous: a, current: b, points });
        }
        let (current, mass) = evaluate(next_points)?;
        let size = current.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let floor = floor.max(1e3 * f64::EPSILON * mass);
        let diff = current.iter().zip(&previous).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if current.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("{context}: non-finite moment")));
        }
        if diff <= (agreement * size).max(floor) || diff == 0.0 {
            return Ok(current);
        }
        if next_points * 2 > cap {
            let (a, b) = worst_pair(&previous, &current);
            return Err(Error::NonConvergence { context: context.into(), previous: a, current: b, points: next_points });
        }
        previous = current;
        points = next_points;
    }
}

fn worst_pair(a: &[f64], b: &[f64]) -> (f64, f64) {
    a.iter()
        .zip(b)
        .max_by(|x, y| (x.0 - x.1).abs().total_cmp(&(y.0 - y.1).abs()))
        .map(|(x, y)| (*x, *y))
        .unwrap_or((0.0, 0.0))
}

/// u(x) x^{−β} e^{d x}, with underflowed tails mapped to zero.
fn tilted(u: &Callable1D, x: f64, beta: f64, d: f64) -> f64 {
    let ux = u.eval(x);
    if ux == 0.0 {
        return 0.0;
    }
    ux.signum() * (ux.abs().ln() - beta * x.ln() + d * x).exp()
}

fn decay_of(u: &Callable1D, lambda: f64) -> f64 {
    u.decay_rate.unwrap_or(lambda)
}

/// ∫₀^∞ u(x) x^w e^{−λx} L_k^{(a)}(2λx) dx for k ≤ n.
pub(crate) fn glf_moments(u: &Callable1D, w: f64, lambda: f64, a: f64, n: usize, context: &str) -> Result<Vec<f64>> {
    let beta = u.origin_power;
    let r = lambda + decay_of(u, lambda);
    laguerre_moments(
        w + beta,
        r,
        n + 1 + EXTRA_POINTS,
        n + 1,
        PROJECTION_AGREEMENT,
        0.0,
        context,
        |x| tilted(u, x, beta, r - lambda),
        |x| laguerre_sequence_unchecked(a, n, 2.0 * lambda * x),
    )
}

/// Orthogonal projection onto span{𝓛_n^{(α,λ)}} under the natural weight ω^α.
pub fn project_natural(u: &Callable1D, params: GLFParams, n: usize) -> Result<GLFExpansion> {
    let a = params.laguerre_alpha();
    let moments = glf_moments(u, params.alpha.max(0.0), params.lambda, a, n, "GLF projection")?;
    let coeffs = moments
        .iter()
        .enumerate()
        .map(|(k, m)| m / orthogonality_constant(params, k))
        .collect();
    GLFExpansion::new(params, coeffs)
}

/// π_N^{−ν,λ} u: projection onto 𝓕_N^{ν,λ} = {x^ν e^{−λx} p} under ω^{−ν}.
pub fn project_neg(u: &Callable1D, nu: f64, lambda: f64, n: usize) -> Result<GLFExpansion> {
    if !(nu > 0.0) {
        return domain(format!("project_neg needs nu > 0, got {nu}"));
    }
    project_natural(u, GLFParams::new(-nu, lambda)?, n)
}

/// Π_N^{ν,λ} u: projection onto {e^{−λx} p} under ω^ν via the Gram system.
pub fn project_pos(u: &Callable1D, nu: f64, lambda: f64, n: usize) -> Result<GLFExpansion> {
    if !(nu >= 0.0) {
        return domain(format!("project_pos needs nu >= 0, got {nu}"));
    }
    let params = GLFParams::new(0.0, lambda)?;
    if nu == 0.0 {
        return project_natural(u, params, n);
    }
    let rule = gauss_laguerre(nu, n + 2)?;
    let values: Vec<Vec<f64>> = rule.nodes.iter().map(|&y| laguerre_sequence_unchecked(0.0, n, y)).collect();
    let scale = (2.0 * lambda).powf(-nu - 1.0);
    let gram = DMatrix::from_fn(n + 1, n + 1, |i, j| {
        values.iter().zip(&rule.weights).map(|(v, w)| w * v[i] * v[j]).sum::<f64>() * scale
    });
    let rhs = glf_moments(u, nu, lambda, 0.0, n, "weighted GLF projection")?;
    let chol = gram
        .cholesky()
        .ok_or_else(|| Error::Numeric("Gram matrix is not positive definite".into()))?;
    let coeffs = chol.solve(&DVector::from_vec(rhs));
    GLFExpansion::new(params, coeffs.iter().copied().collect())
}

/// ∫₀^∞ x^p e^{−r x} h(x) dx split at y = r x = 1: Gauss-Jacobi with weight y^p on the
/// head, shifted Gauss-Laguerre on the tail, each doubled until agreement.
fn split_integral(
    p: f64,
    r: f64,
    start: usize,
    floor: f64,
    context: &str,
    h: impl Fn(f64) -> f64,
) -> Result<f64> {
    if !(p > -1.0) {
        return domain(format!("{context}: integrand x^{p} is not integrable at 0"));
    }
    let head = adaptive_sum(start, floor, context, |n| {
        let rule = gauss_jacobi(0.0, p, n)?;
        Ok(rule.integrate(|t| finite_or_zero((-t).exp(), h(t / r))))
    })?;
    let tail = adaptive_sum(start, floor, context, |n| {
        let rule = gauss_laguerre(0.0, n)?;
        Ok(rule.integrate(|z| finite_or_zero((-1.0f64).exp() * (1.0 + z).powf(p), h((1.0 + z) / r))))
    })?;
    Ok((head + tail) * r.powf(-p - 1.0))
}

fn finite_or_zero(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        0.0
    } else {
        a * b
    }
}

fn adaptive_sum(start: usize, floor: f64, context: &str, estimate: impl Fn(usize) -> Result<f64>) -> Result<f64> {
    let cap = quad_cap().max(start);
    let mut points = start.max(2);
    let mut previous = estimate(points)?;
    while points * 2 <= cap {
        points *= 2;
        let current = estimate(points)?;
        if !current.is_finite() {
            return Err(Error::Numeric(format!("{context}: non-finite estimate")));
        }
        if (current - previous).abs() <= (ERROR_AGREEMENT * current.abs()).max(floor) {
            return Ok(current);
        }
        previous = current;
        if points * 2 > cap {
            return Err(Error::NonConvergence { context: context.into(), previous, current, points });
        }
    }
    Err(Error::NonConvergence { context: context.into(), previous, current: previous, points })
}

/// ∥u − v∥_{ω^a}.
pub fn weighted_error(u: &Callable1D, v: &GLFExpansion, norm: WeightedNorm) -> Result<f64> {
    let lambda = v.params.lambda;
    let beta = v.params.x_power().min(u.origin_power);
    let p = norm.exponent + 2.0 * beta;
    let r = 2.0 * decay_of(u, lambda).min(lambda);
    let start = v.degree() + 1 + EXTRA_POINTS;
    let tilt = |d: f64, x: f64| {
        if d == 0.0 {
            0.0
        } else {
            (2.0 * d.abs().ln() - 2.0 * beta * x.ln() + r * x).exp()
        }
    };
    let reference = split_integral(p, r, start, 0.0, "weighted error", |x| tilt(u.eval(x).hypot(v.eval(x)), x))?;
    let sq = split_integral(p, r, start, ERROR_FLOOR * reference, "weighted error", |x| {
        tilt(u.eval(x) - v.eval(x), x)
    })?;
    Ok(sq.max(0.0).sqrt())
}

/// Least-squares slope of log e against log N.
pub fn rate_fit(errors: &[(usize, f64)]) -> Result<f64> {
    if errors.len() < 3 {
        return precondition(format!("rate_fit needs at least 3 points, got {}", errors.len()));
    }
    if let Some((n, e)) = errors.iter().find(|(_, e)| !(*e > 0.0)) {
        return domain(format!("rate_fit needs positive errors, got {e} at N = {n}"));
    }
    let pts: Vec<(f64, f64)> = errors.iter().map(|&(n, e)| ((n as f64).ln(), e.ln())).collect();
    let m = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / m, b + y / m));
    let (sxy, sxx) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    if sxx == 0.0 {
        return domain("rate_fit needs at least two distinct N");
    }
    Ok(sxy / sxx)
}

/// rate_fit after discarding the two smallest N.
pub fn asymptotic_rate_fit(errors: &[(usize, f64)]) -> Result<f64> {
    let mut sorted = errors.to_vec();
    sorted.sort_by_key(|&(n, _)| n);
    rate_fit(sorted.get(2..).unwrap_or(&[]))
}

/// ν_n^{a,b} with Γ(n+a)/Γ(n+b) ≤ ν_n^{a,b} n^{a−b}.
pub fn upsilon_constant(a: f64, b: f64, n: usize) -> Result<f64> {
    let nf = n as f64;
    if n < 1 || !(nf + a > 1.0) || !(nf + b > 1.0) {
        return domain(format!("upsilon_constant needs n >= 1, n+a > 1, n+b > 1; got a={a}, b={b}, n={n}"));
    }
    let d = a - b;
    Ok((d / (2.0 * (nf + b - 1.0)) + 1.0 / (12.0 * (nf + a - 1.0)) + d * d / nf).exp())
}
