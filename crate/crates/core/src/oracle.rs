//! Quadrature-based tempered fractional calculus for arbitrary callables.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, precondition, Error, Result};
use crate::specfun::{gamma, gauss_jacobi};

pub const DEFAULT_QUAD_CAP: usize = 1600;
const START_POINTS: usize = 200;
const AGREEMENT: f64 = 1e-11;
const ENVELOPE_FLOOR: f64 = 1e-18;
/// Below this total |weight·integrand| mass the estimate is treated as converged.
const NEGLIGIBLE_MASS: f64 = 1e-280;

/// A real function with hints for quadrature.
#[derive(Clone)]
pub struct Callable1D {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Rate r with |f(y)| ≲ e^{−r|y|} toward the infinite end of the domain.
    pub decay_rate: Option<f64>,
    /// Exponent β with f(y) ~ y^β as y → 0⁺.
    pub origin_power: f64,
}

impl fmt::Debug for Callable1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Callable1D")
            .field("decay_rate", &self.decay_rate)
            .field("origin_power", &self.origin_power)
            .finish_non_exhaustive()
    }
}

impl Callable1D {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), decay_rate: None, origin_power: 0.0 }
    }

    pub fn with_decay(mut self, rate: f64) -> Self {
        self.decay_rate = Some(rate);
        self
    }

    pub fn with_origin_power(mut self, beta: f64) -> Self {
        self.origin_power = beta;
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    Zero,
    NegInfinity,
}

/// Oracle quadrature cap, overridable through TEMPLAG_QUAD_CAP.
pub fn quad_cap() -> usize {
    std::env::var("TEMPLAG_QUAD_CAP")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v >= 2)
        .unwrap_or(DEFAULT_QUAD_CAP)
}

/// ∫₀¹ (1−t)^a t^b g(t) dt with point doubling until successive estimates agree.
pub fn adaptive_jacobi(a: f64, b: f64, context: &str, g: impl Fn(f64) -> f64) -> Result<f64> {
    let cap = quad_cap();
    let mut n = START_POINTS.min(cap / 2).max(1);
    let estimate = |n: usize| -> Result<(f64, f64)> {
        let rule = gauss_jacobi(a, b, n)?;
        let (mut sum, mut mass) = (0.0, 0.0);
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let v = w * g(t);
            sum += v;
            mass += v.abs();
        }
        Ok((sum, mass))
    };
    let (mut prev, _) = estimate(n)?;
    loop {
        let next_n = 2 * n;
        if next_n > cap {
            return Err(Error::NonConvergence {
                context: context.to_string(),
                previous: prev,
                current: prev,
                points: n,
            });
        }
        let (cur, mass) = estimate(next_n)?;
        if !cur.is_finite() {
            return Err(Error::Numeric(format!("{context}: non-finite quadrature estimate")));
        }
        if (cur - prev).abs() <= AGREEMENT * cur.abs().max(mass) || mass < NEGLIGIBLE_MASS {
            return Ok(cur);
        }
        prev = cur;
        n = next_n;
    }
}

/// Length L beyond which the envelope stays below the floor relative to its peak.
fn truncation_length(start: f64, envelope: impl Fn(f64) -> f64) -> f64 {
    let mut len = start;
    for _ in 0..80 {
        let peak = (1..=256)
            .map(|i| envelope(len * i as f64 / 256.0).abs())
            .fold(0.0, f64::max);
        let tail = (0..8)
            .map(|i| envelope(len * (1.0 - 0.01 * i as f64)).abs())
            .fold(0.0, f64::max);
        if peak == 0.0 || tail <= ENVELOPE_FLOOR * peak {
            return len;
        }
        len *= 1.5;
    }
    len
}

fn check_order(mu: f64) -> Result<()> {
    if !(mu > 0.0) || !mu.is_finite() {
        return domain(format!("fractional order must be positive, got {mu}"));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return domain(format!("tempering rate must be non-negative, got {lambda}"));
    }
    Ok(())
}

/// Left Riemann-Liouville integral (1/Γ(μ)) ∫ₐˣ f(y)(x−y)^{μ−1} dy.
pub fn rl_left_integral(f: &Callable1D, a: f64, mu: f64, x: f64) -> Result<f64> {
    check_order(mu)?;
    if !(x > a) {
        return domain(format!("rl_left_integral needs x > a, got x = {x}, a = {a}"));
    }
    let len = x - a;
    let beta = if a == 0.0 { f.origin_power } else { 0.0 };
    let integral = adaptive_jacobi(mu - 1.0, beta, "left Riemann-Liouville integral", |t| {
        let v = f.eval(a + len * t);
        if beta == 0.0 { v } else { v * t.powf(-beta) }
    })?;
    Ok(len.powf(mu) / gamma(mu)? * integral)
}

/// Left tempered integral 𝕀^{μ,λ} with lower limit 0 or −∞.
/// From −∞ the range is split at the origin, where whole-line data may have a kink.
pub fn tempered_left_integral(f: &Callable1D, mu: f64, lambda: f64, base: Base, x: f64) -> Result<f64> {
    check_order(mu)?;
    check_lambda(lambda)?;
    match base {
        Base::Zero => {
            if !(x > 0.0) {
                return domain(format!("left integral from 0 needs x > 0, got {x}"));
            }
            let beta = f.origin_power;
            let integral = adaptive_jacobi(mu - 1.0, beta, "left tempered integral", |t| {
                let v = f.eval(x * t) * (-lambda * x * (1.0 - t)).exp();
                if beta == 0.0 { v } else { v * t.powf(-beta) }
            })?;
            Ok(x.powf(mu) / gamma(mu)? * integral)
        }
        Base::NegInfinity => {
            let rate = f.decay_rate.ok_or_else(|| {
                Error::Precondition("left integral from -infinity needs a decay hint".into())
            })?;
            if x <= 0.0 {
                return infinite_tail(f, mu, lambda, rate, x, -1.0, "left tempered integral from -infinity");
            }
            let context = "left tempered integral from -infinity";
            let near = adaptive_jacobi(mu - 1.0, 0.0, context, |t| {
                f.eval(x * t) * (-lambda * x * (1.0 - t)).exp()
            })?;
            let total = lambda + rate.max(0.0);
            let len = truncation_length(-ENVELOPE_FLOOR.ln() / total, |r| {
                (-lambda * (x + r)).exp() * (x + r).powf(mu - 1.0) * f.eval(-r)
            });
            let far = adaptive_jacobi(0.0, 0.0, context, |tau| {
                let r = len * tau;
                (-lambda * (x + r)).exp() * (x + r).powf(mu - 1.0) * f.eval(-r)
            })?;
            Ok((x.powf(mu) * near + len * far) / gamma(mu)?)
        }
    }
}

/// (1/Γ(μ)) ∫₀^∞ e^{−λs} s^{μ−1} f(x + dir·s) ds.
fn infinite_tail(
    f: &Callable1D,
    mu: f64,
    lambda: f64,
    rate: f64,
    x: f64,
    dir: f64,
    context: &str,
) -> Result<f64> {
    let total = lambda + rate.max(0.0);
    if !(total > 0.0) {
        return precondition(format!("{context}: tempering plus decay rate must be positive"));
    }
    let start = -ENVELOPE_FLOOR.ln() / total;
    let len = truncation_length(start, |s| {
        (-lambda * s).exp() * s.powf(mu - 1.0).min(1e300) * f.eval(x + dir * s)
    });
    let integral = adaptive_jacobi(0.0, mu - 1.0, context, |tau| {
        let s = len * tau;
        (-lambda * s).exp() * f.eval(x + dir * s)
    })?;
    Ok(len.powf(mu) / gamma(mu)? * integral)
}

/// Right tempered integral ∫ₓ^∞ e^{−λ(y−x)}(y−x)^{μ−1} f(y) dy / Γ(μ).
pub fn tempered_right_integral(f: &Callable1D, mu: f64, lambda: f64, x: f64) -> Result<f64> {
    check_order(mu)?;
    check_lambda(lambda)?;
    let rate = f
        .decay_rate
        .ok_or_else(|| Error::Precondition("right integral needs a decay hint".into()))?;
    infinite_tail(f, mu, lambda, rate, x, 1.0, "right tempered integral")
}

/// First and second derivatives of g at x by Richardson-extrapolated 5-point differences,
/// returned for steps h and 2h.
fn differences(g: &dyn Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<[[f64; 3]; 2]> {
    let mut cache: Vec<(f64, f64)> = Vec::new();
    let mut at = |offset: f64| -> Result<f64> {
        if let Some(&(_, v)) = cache.iter().find(|(o, _)| *o == offset) {
            return Ok(v);
        }
        let v = g(x + offset * h)?;
        cache.push((offset, v));
        Ok(v)
    };
    let mut stencil = |step: f64| -> Result<[f64; 3]> {
        let (m2, m1, c, p1, p2) = (at(-2.0 * step)?, at(-step)?, at(0.0)?, at(step)?, at(2.0 * step)?);
        let hs = step * h;
        let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * hs);
        let d2 = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * hs * hs);
        Ok([c, d1, d2])
    };
    let half = stencil(0.5)?;
    let full = stencil(1.0)?;
    let double = stencil(2.0)?;
    let rich = |fine: [f64; 3], coarse: [f64; 3]| {
        [fine[0], (16.0 * fine[1] - coarse[1]) / 15.0, (16.0 * fine[2] - coarse[2]) / 15.0]
    };
    Ok([rich(half, full), rich(full, double)])
}

/// Applies (D + sign·λ)^k using derivative estimates of the tempered integral.
fn shifted_power(d: [f64; 3], k: usize, lambda: f64, sign: f64) -> f64 {
    match k {
        1 => d[1] + sign * lambda * d[0],
        _ => d[2] + 2.0 * sign * lambda * d[1] + lambda * lambda * d[0],
    }
}

fn derivative_from_integral(
    integral: &dyn Fn(f64) -> Result<f64>,
    x: f64,
    h: f64,
    k: usize,
    lambda: f64,
    sign: f64,
    overall: f64,
    context: &str,
) -> Result<f64> {
    let [fine, coarse] = differences(integral, x, h)?;
    let v1 = overall * shifted_power(fine, k, lambda, sign);
    let v2 = overall * shifted_power(coarse, k, lambda, sign);
    let scale = fine[0].abs() / h.powi(k as i32) * 1e-9 + v1.abs();
    if (v1 - v2).abs() > 1e-4 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NonConvergence {
            context: format!("{context}: difference stencil"),
            previous: v2,
            current: v1,
            points: 5,
        });
    }
    Ok(v1)
}

/// Splits μ into k and the integral order k − μ; integer μ ≥ 1 gives a zero integral order.
fn split_order(mu: f64) -> Result<(usize, f64)> {
    if !(mu >= 0.0) || !(mu <= 2.0) {
        return domain(format!("derivative order must lie in [0, 2], got {mu}"));
    }
    if mu >= 1.0 && mu.fract() == 0.0 {
        return Ok((mu as usize, 0.0));
    }
    let k = mu.floor() as usize + 1;
    Ok((k, k as f64 - mu))
}

/// Left tempered derivative (D+λ)^k 𝕀^{k−μ,λ} f.
pub fn tempered_left_derivative(f: &Callable1D, mu: f64, lambda: f64, base: Base, x: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let (k, rest) = split_order(mu)?;
    let h = match base {
        Base::Zero => {
            if !(x > 0.0) {
                return domain(format!("left derivative from 0 needs x > 0, got {x}"));
            }
            0.01 * x.min(1.0)
        }
        Base::NegInfinity => 0.01,
    };
    let integral = |y: f64| {
        if rest == 0.0 {
            Ok(f.eval(y))
        } else {
            tempered_left_integral(f, rest, lambda, base, y)
        }
    };
    derivative_from_integral(&integral, x, h, k, lambda, 1.0, 1.0, "left tempered derivative")
}

/// Right tempered derivative (λ−D)^k 𝕀_R^{k−μ,λ} f.
pub fn tempered_right_derivative(f: &Callable1D, mu: f64, lambda: f64, x: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let (k, rest) = split_order(mu)?;
    let integral = |y: f64| {
        if rest == 0.0 {
            Ok(f.eval(y))
        } else {
            tempered_right_integral(f, rest, lambda, y)
        }
    };
    // (λ − D)^k = (−1)^k (D − λ)^k
    let overall = if k % 2 == 0 { 1.0 } else { -1.0 };
    derivative_from_integral(&integral, x, 0.01, k, lambda, -1.0, overall, "right tempered derivative")
}
