use crate::error::{domain, Result};

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > -1.0) {
        return domain(format!("Laguerre parameter must exceed -1, got {alpha}"));
    }
    Ok(())
}

/// L_n^{(α)}(x) by upward three-term recurrence.
pub fn laguerre(alpha: f64, n: usize, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(laguerre_unchecked(alpha, n, x))
}

pub(crate) fn laguerre_unchecked(alpha: f64, n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Values L_0^{(α)}(x), ..., L_n^{(α)}(x).
pub fn laguerre_sequence(alpha: f64, n: usize, x: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    Ok(laguerre_sequence_unchecked(alpha, n, x))
}

pub(crate) fn laguerre_sequence_unchecked(alpha: f64, n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(1.0 + alpha - x);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * out[k] - (kf + alpha) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// d/dx L_n^{(α)}(x) = −L_{n−1}^{(α+1)}(x).
pub fn laguerre_derivative(alpha: f64, n: usize, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if n == 0 {
        return Ok(0.0);
    }
    Ok(-laguerre_unchecked(alpha + 1.0, n - 1, x))
}

/// Σ c_n L_n^{(α)}(x) by Clenshaw summation.
pub(crate) fn laguerre_series(alpha: f64, coeffs: &[f64], x: f64) -> f64 {
    // L_{k+1} = A_k L_k + B_k L_{k-1}, A_k = (2k+1+α−x)/(k+1), B_k = −(k+α)/(k+1)
    let n = coeffs.len();
    if n == 0 {
        return 0.0;
    }
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for k in (1..n).rev() {
        let kf = k as f64;
        let a_k = (2.0 * kf + 1.0 + alpha - x) / (kf + 1.0);
        let b_k1 = -(kf + 1.0 + alpha) / (kf + 2.0);
        let bk = coeffs[k] + a_k * b1 + b_k1 * b2;
        b2 = b1;
        b1 = bk;
    }
    let b_1 = -(1.0 + alpha) / 2.0;
    coeffs[0] + (1.0 + alpha - x) * b1 + b_1 * b2
}
