use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use super::{GLFExpansion, GLFParams};
use crate::error::{domain, precondition, Result};
use crate::specfun::gamma_ratio;

const TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Integral,
    Derivative,
}

/// Tempered fractional integral or derivative of a given order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperedOperator {
    pub side: Side,
    pub kind: OpKind,
    pub order: f64,
    pub lambda: f64,
}

impl TemperedOperator {
    pub fn new(side: Side, kind: OpKind, order: f64, lambda: f64) -> Result<Self> {
        if !(order >= 0.0) || !order.is_finite() {
            return domain(format!("operator order must be non-negative, got {order}"));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return domain(format!("tempering rate must be positive, got {lambda}"));
        }
        Ok(Self { side, kind, order, lambda })
    }
}

/// The branch of the coefficient map selected for a given input.
#[derive(Debug, Clone, Copy)]
enum Branch {
    LeftIntegral { nu: f64 },
    LeftDerivative { nu: f64 },
    LeftDerivativeShift { nu: f64, k: usize },
    RightIntegral,
    RightDerivative,
}

fn near_integer(x: f64) -> Option<usize> {
    let r = x.round();
    ((x - r).abs() <= TOL && r >= 1.0).then_some(r as usize)
}

fn classify(op: &TemperedOperator, params: &GLFParams) -> Result<Branch> {
    if (params.lambda - op.lambda).abs() > TOL * op.lambda {
        return precondition(format!(
            "expansion lambda {} differs from operator lambda {}",
            params.lambda, op.lambda
        ));
    }
    let mu = op.order;
    match op.side {
        Side::Left => {
            if params.alpha > TOL {
                return precondition(format!(
                    "left operators act on the singular family alpha = -nu <= 0, got alpha = {}",
                    params.alpha
                ));
            }
            let nu = (-params.alpha).max(0.0);
            match op.kind {
                OpKind::Integral => Ok(Branch::LeftIntegral { nu }),
                OpKind::Derivative if nu + TOL >= mu => Ok(Branch::LeftDerivative { nu }),
                OpKind::Derivative => match near_integer(mu - nu) {
                    Some(k) => Ok(Branch::LeftDerivativeShift { nu, k }),
                    None => precondition(format!(
                        "left derivative of order {mu} needs nu >= order or order - nu a positive integer, got nu = {nu}"
                    )),
                },
            }
        }
        Side::Right => {
            if params.alpha < -TOL {
                return precondition(format!(
                    "right operators act on the regular family alpha = nu >= 0, got alpha = {}",
                    params.alpha
                ));
            }
            let nu = params.alpha.max(0.0);
            match op.kind {
                OpKind::Integral if nu + TOL >= mu => Ok(Branch::RightIntegral),
                OpKind::Integral => precondition(format!(
                    "right integral of order {mu} needs nu >= order, got nu = {nu}"
                )),
                OpKind::Derivative => Ok(Branch::RightDerivative),
            }
        }
    }
}

type MapKey = (u8, u64, u64, u64, usize);

fn map_cache() -> &'static RwLock<HashMap<MapKey, Arc<Vec<f64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<MapKey, Arc<Vec<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn multipliers(
    tag: u8,
    nu: f64,
    mu: f64,
    lambda: f64,
    len: usize,
    entry: impl Fn(usize) -> f64,
) -> Arc<Vec<f64>> {
    let key = (tag, nu.to_bits(), mu.to_bits(), lambda.to_bits(), len);
    if let Some(v) = map_cache().read().expect("map cache poisoned").get(&key) {
        return v.clone();
    }
    let v = Arc::new((0..len).map(entry).collect::<Vec<_>>());
    map_cache().write().expect("map cache poisoned").entry(key).or_insert(v).clone()
}

fn h(a: f64, b: f64, n: usize) -> f64 {
    gamma_ratio(a, b, n).expect("admissible operator keeps Gamma arguments positive")
}

/// Number of low modes an operator annihilates on the given expansion family.
pub fn annihilated_modes(op: &TemperedOperator, u: &GLFExpansion) -> Result<usize> {
    Ok(match classify(op, &u.params)? {
        Branch::LeftDerivativeShift { k, .. } => k,
        _ => 0,
    })
}

/// Exact image of a GLF expansion under a tempered operator.
pub fn apply_tempered(op: &TemperedOperator, u: &GLFExpansion) -> Result<GLFExpansion> {
    let mu = op.order;
    let lambda = op.lambda;
    let len = u.coeffs.len();
    let with = |alpha: f64, coeffs: Vec<f64>| GLFExpansion {
        params: GLFParams { alpha, lambda: u.params.lambda },
        coeffs,
    };
    let scale_all = |m: &[f64]| u.coeffs.iter().zip(m).map(|(c, m)| c * m).collect::<Vec<_>>();
    match classify(op, &u.params)? {
        Branch::LeftIntegral { nu } => {
            let m = multipliers(0, nu, mu, lambda, len, |n| h(nu, -mu, n));
            Ok(with(-nu - mu, scale_all(&m)))
        }
        Branch::LeftDerivative { nu } => {
            let m = multipliers(1, nu, mu, lambda, len, |n| h(nu, mu, n));
            Ok(with(mu - nu, scale_all(&m)))
        }
        Branch::LeftDerivativeShift { nu, k } => {
            if len <= k {
                return precondition(format!(
                    "order-{mu} left derivative annihilates all {len} modes (needs degree >= {k})"
                ));
            }
            let factor = (-2.0 * lambda).powi(k as i32);
            let m = multipliers(2, nu, mu, lambda, len, |n| {
                if n < k {
                    0.0
                } else {
                    factor * h(nu, nu, n)
                }
            });
            let coeffs = (k..len).map(|n| m[n] * u.coeffs[n]).collect();
            Ok(with(k as f64, coeffs))
        }
        Branch::RightIntegral => {
            let f = (2.0 * lambda).powf(-mu);
            Ok(with(u.params.alpha - mu, u.coeffs.iter().map(|c| c * f).collect()))
        }
        Branch::RightDerivative => {
            let f = (2.0 * lambda).powf(mu);
            Ok(with(u.params.alpha + mu, u.coeffs.iter().map(|c| c * f).collect()))
        }
    }
}

/// Integer-order left or right derivative of an expansion in 𝓛_n^{(−ν,λ)} with k ≤ ν.
pub fn apply_integer_derivative(side: Side, k: usize, u: &GLFExpansion) -> Result<GLFExpansion> {
    let nu = -u.params.alpha;
    if k == 0 {
        return domain("integer derivative order must be at least 1");
    }
    if u.params.alpha > TOL || (k as f64) > nu + TOL {
        return precondition(format!(
            "integer derivative of order {k} needs alpha = -nu with nu >= {k}, got alpha = {}",
            u.params.alpha
        ));
    }
    let alpha_out = k as f64 - nu;
    let kf = k as f64;
    let coeffs = match side {
        Side::Left => u.coeffs.iter().enumerate().map(|(n, c)| h(nu, kf, n) * c).collect(),
        Side::Right => {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let mut out = vec![0.0; u.coeffs.len() + k];
            for (n, c) in u.coeffs.iter().enumerate() {
                out[n + k] = sign * h(0.0, -kf, n).recip() * c;
            }
            out
        }
    };
    Ok(GLFExpansion { params: GLFParams { alpha: alpha_out, lambda: u.params.lambda }, coeffs })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlBranch {
    /// Left derivative applied first.
    LeftFirst,
    /// Right derivative applied first.
    RightFirst,
}

/// Eigenvalue of the tempered Sturm-Liouville chains on mode n.
pub fn sl_eigenvalue(branch: SlBranch, s: f64, nu: f64, lambda: f64, n: usize) -> Result<f64> {
    if !(s >= 0.0) || !(nu >= 0.0) || !(lambda > 0.0) {
        return domain(format!("sl_eigenvalue needs s, nu >= 0 and lambda > 0, got s = {s}, nu = {nu}, lambda = {lambda}"));
    }
    let scale = (2.0 * lambda).powf(s);
    match branch {
        SlBranch::LeftFirst => {
            if nu + TOL < s {
                return precondition(format!("left-first chain needs nu >= s, got nu = {nu}, s = {s}"));
            }
            Ok(scale * gamma_ratio(nu, s, n)?)
        }
        SlBranch::RightFirst => Ok(scale * gamma_ratio(nu + s, s, n)?),
    }
}
