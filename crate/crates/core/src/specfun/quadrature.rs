use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{domain, Error, Result};
use crate::specfun::gamma::log_gamma;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuleKind {
    /// Weight x^α e^{−x} on [0, ∞).
    Laguerre { alpha: f64 },
    /// Weight (1−t)^a t^b on [0, 1].
    Jacobi { a: f64, b: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    /// Σ w_i f(x_i).
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Three-term recurrence of the orthonormal family: diagonal a_k and off-diagonal b_k.
trait Recurrence {
    fn diag(&self, k: usize) -> f64;
    /// b_k for k ≥ 1.
    fn off(&self, k: usize) -> f64;
    fn ln_mass(&self) -> f64;
}

struct LaguerreRec {
    alpha: f64,
}

impl Recurrence for LaguerreRec {
    fn diag(&self, k: usize) -> f64 {
        2.0 * k as f64 + self.alpha + 1.0
    }
    fn off(&self, k: usize) -> f64 {
        let k = k as f64;
        (k * (k + self.alpha)).sqrt()
    }
    fn ln_mass(&self) -> f64 {
        log_gamma(self.alpha + 1.0).unwrap_or(f64::NAN)
    }
}

/// Jacobi polynomials on [−1, 1] with weight (1−x)^a (1+x)^b.
struct JacobiRec {
    a: f64,
    b: f64,
}

impl Recurrence for JacobiRec {
    fn diag(&self, k: usize) -> f64 {
        let (a, b) = (self.a, self.b);
        if k == 0 {
            return (b - a) / (a + b + 2.0);
        }
        let s = 2.0 * k as f64 + a + b;
        (b * b - a * a) / (s * (s + 2.0))
    }
    fn off(&self, k: usize) -> f64 {
        let (a, b) = (self.a, self.b);
        if k == 1 {
            return (4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))).sqrt();
        }
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        (4.0 * kf * (kf + a) * (kf + b) * (kf + a + b) / (s * s * (s + 1.0) * (s - 1.0))).sqrt()
    }
    fn ln_mass(&self) -> f64 {
        let (a, b) = (self.a, self.b);
        let lg = |x: f64| log_gamma(x).unwrap_or(f64::NAN);
        (a + b + 1.0) * std::f64::consts::LN_2 + lg(a + 1.0) + lg(b + 1.0) - lg(a + b + 2.0)
    }
}

/// Eigenvalues and squared first eigenvector components of a symmetric tridiagonal matrix
/// by implicit QL iteration.
fn tridiagonal_eigen(mut d: Vec<f64>, off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = d.len();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&off[..n - 1]);
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(Error::Numeric(format!(
                    "tridiagonal eigen-solve did not converge for eigenvalue {l} of {n}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    let mut pairs: Vec<(f64, f64)> = d.into_iter().zip(z.into_iter().map(|v| v * v)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs.into_iter().unzip())
}

/// Orthonormal recurrence at x: returns (p_n/p_n', ln Σ_{k<n} p_k²).
fn orthonormal_probe(rec: &dyn Recurrence, n: usize, x: f64) -> (f64, f64) {
    const BIG: f64 = 1e150;
    let mut scale_ln = -0.5 * rec.ln_mass();
    let (mut p_prev, mut p_cur) = (0.0, 1.0);
    let (mut d_prev, mut d_cur) = (0.0, 0.0);
    let mut sum = 0.0;
    for k in 0..n {
        sum += p_cur * p_cur;
        let b_k = if k == 0 { 0.0 } else { rec.off(k) };
        let b_next = rec.off(k + 1);
        let shift = x - rec.diag(k);
        let p_next = (shift * p_cur - b_k * p_prev) / b_next;
        let d_next = (p_cur + shift * d_cur - b_k * d_prev) / b_next;
        p_prev = p_cur;
        p_cur = p_next;
        d_prev = d_cur;
        d_cur = d_next;
        if p_cur.abs() > BIG || d_cur.abs() > BIG {
            p_prev /= BIG;
            p_cur /= BIG;
            d_prev /= BIG;
            d_cur /= BIG;
            sum /= BIG * BIG;
            scale_ln += BIG.ln();
        }
    }
    (p_cur / d_cur, sum.ln() + 2.0 * scale_ln)
}

fn gauss_rule(rec: &dyn Recurrence, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let diag: Vec<f64> = (0..n).map(|k| rec.diag(k)).collect();
    let off: Vec<f64> = (1..=n).map(|k| rec.off(k)).collect();
    let (mut nodes, _) = tridiagonal_eigen(diag, &off)?;
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..8 {
            let (step, _) = orthonormal_probe(rec, n, *x);
            *x -= step;
            if step.abs() <= 1e-15 * x.abs().max(1e-300) {
                break;
            }
        }
        let (_, ln_sum) = orthonormal_probe(rec, n, *x);
        weights.push((-ln_sum).exp());
    }
    if nodes.windows(2).any(|w| !(w[0] < w[1])) || nodes.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric(format!(
            "Gauss rule of size {n}: refined nodes lost strict ordering"
        )));
    }
    Ok((nodes, weights))
}

type CacheKey = (u8, u64, u64, usize);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<QuadratureRule>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<QuadratureRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cached(key: CacheKey, build: impl FnOnce() -> Result<QuadratureRule>) -> Result<Arc<QuadratureRule>> {
    if let Some(rule) = cache().read().expect("quadrature cache poisoned").get(&key) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(build()?);
    let mut map = cache().write().expect("quadrature cache poisoned");
    Ok(map.entry(key).or_insert(rule).clone())
}

/// Generalized Gauss-Laguerre rule for the weight x^α e^{−x}.
pub fn gauss_laguerre(alpha: f64, n: usize) -> Result<Arc<QuadratureRule>> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return domain(format!("gauss_laguerre requires alpha > -1, got {alpha}"));
    }
    if n == 0 {
        return domain("gauss_laguerre requires at least one node");
    }
    cached((0, alpha.to_bits(), 0, n), || {
        let (nodes, weights) = gauss_rule(&LaguerreRec { alpha }, n)?;
        Ok(QuadratureRule { kind: RuleKind::Laguerre { alpha }, nodes, weights })
    })
}

/// Gauss-Jacobi rule on [0, 1] for the weight (1−t)^a t^b.
pub fn gauss_jacobi(a: f64, b: f64, n: usize) -> Result<Arc<QuadratureRule>> {
    if !(a > -1.0) || !(b > -1.0) || !a.is_finite() || !b.is_finite() {
        return domain(format!("gauss_jacobi requires a, b > -1, got a = {a}, b = {b}"));
    }
    if n == 0 {
        return domain("gauss_jacobi requires at least one node");
    }
    cached((1, a.to_bits(), b.to_bits(), n), || {
        let (x, w) = gauss_rule(&JacobiRec { a, b }, n)?;
        let scale = 0.5f64.powf(a + b + 1.0);
        let nodes = x.iter().map(|&x| 0.5 * (1.0 + x)).collect();
        let weights = w.iter().map(|&w| w * scale).collect();
        Ok(QuadratureRule { kind: RuleKind::Jacobi { a, b }, nodes, weights })
    })
}

/// Gauss-Legendre rule on [0, 1].
pub fn gauss_legendre(n: usize) -> Result<Arc<QuadratureRule>> {
    gauss_jacobi(0.0, 0.0, n)
}
