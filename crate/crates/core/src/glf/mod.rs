//! Generalized Laguerre functions and exact coefficient-space operator actions.

mod ops;
mod reflect;

pub use ops::{
    annihilated_modes, apply_integer_derivative, apply_tempered, sl_eigenvalue, OpKind, Side,
    SlBranch, TemperedOperator,
};
pub use reflect::{reflect, Reflected};

use crate::error::{domain, Result};
use crate::specfun::{gamma_ratio, gauss_laguerre, laguerre_series, laguerre_unchecked};

/// Basis family 𝓛_n^{(α,λ)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GLFParams {
    pub alpha: f64,
    pub lambda: f64,
}

impl GLFParams {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return domain(format!("GLF parameter alpha must be finite, got {alpha}"));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return domain(format!("tempering rate lambda must be positive, got {lambda}"));
        }
        Ok(Self { alpha, lambda })
    }

    /// Exponent of the polynomial factor, |α|.
    pub fn laguerre_alpha(&self) -> f64 {
        self.alpha.abs()
    }

    /// Power of x multiplying the exponential: −α on the singular branch, 0 otherwise.
    pub fn x_power(&self) -> f64 {
        if self.alpha < 0.0 {
            -self.alpha
        } else {
            0.0
        }
    }

    fn envelope(&self, x: f64) -> f64 {
        let exp = (-self.lambda * x).exp();
        if self.alpha < 0.0 {
            x.powf(-self.alpha) * exp
        } else {
            exp
        }
    }
}

/// 𝓛_n^{(α,λ)}(x).
pub fn glf_eval(params: GLFParams, n: usize, x: f64) -> f64 {
    params.envelope(x) * laguerre_unchecked(params.laguerre_alpha(), n, 2.0 * params.lambda * x)
}

/// γ_n^{|α|,λ} = Γ(n+|α|+1) / ((2λ)^{|α|+1} Γ(n+1)).
pub fn orthogonality_constant(params: GLFParams, n: usize) -> f64 {
    let a = params.laguerre_alpha();
    gamma_ratio(a, a, n).expect("|alpha| >= 0 keeps the Gamma arguments positive")
        / (2.0 * params.lambda).powf(a + 1.0)
}

/// A finite expansion Σ c_n 𝓛_n^{(α,λ)}.
#[derive(Debug, Clone, PartialEq)]
pub struct GLFExpansion {
    pub params: GLFParams,
    pub coeffs: Vec<f64>,
}

impl GLFExpansion {
    pub fn new(params: GLFParams, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return domain("an expansion needs at least one coefficient");
        }
        Ok(Self { params, coeffs })
    }

    pub fn zero(params: GLFParams, degree: usize) -> Self {
        Self { params, coeffs: vec![0.0; degree + 1] }
    }

    pub fn unit(params: GLFParams, n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        Self { params, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Σ c_n 𝓛_n^{(α,λ)}(x) by Clenshaw summation.
    pub fn eval(&self, x: f64) -> f64 {
        let p = &self.params;
        p.envelope(x) * laguerre_series(p.laguerre_alpha(), &self.coeffs, 2.0 * p.lambda * x)
    }

    /// Squared weighted norm Σ c_n² γ_n^{|α|,λ} under the weight x^α.
    pub fn norm_squared(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * c * orthogonality_constant(self.params, n))
            .sum()
    }

    /// Multiplies by x^α, which exchanges 𝓛_n^{(α,λ)} and 𝓛_n^{(−α,λ)}.
    pub fn absorb_power(&self) -> Self {
        Self {
            params: GLFParams { alpha: -self.params.alpha, ..self.params },
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { params: self.params, coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }
}

/// ∫₀^∞ u v x^w dx, exact for expansions sharing λ.
pub fn inner_product(u: &GLFExpansion, v: &GLFExpansion, w: f64) -> Result<f64> {
    let lambda = u.params.lambda;
    if (v.params.lambda - lambda).abs() > 1e-12 * lambda {
        return domain("inner_product needs expansions with equal lambda");
    }
    let power = u.params.x_power() + v.params.x_power() + w;
    if !(power > -1.0) {
        return domain(format!("inner_product integrand x^{power} is not integrable at 0"));
    }
    let rule = gauss_laguerre(power, (u.degree() + v.degree()) / 2 + 2)?;
    let (au, av) = (u.params.laguerre_alpha(), v.params.laguerre_alpha());
    let sum = rule.integrate(|y| {
        laguerre_series(au, &u.coeffs, y) * laguerre_series(av, &v.coeffs, y)
    });
    Ok(sum / (2.0 * lambda).powf(power + 1.0))
}

/// Evaluates a single basis function through the expansion path.
pub fn expansion_eval(u: &GLFExpansion, x: f64) -> f64 {
    u.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_formulas_coincide_at_zero_alpha() {
        let p = GLFParams::new(0.0, 0.8).unwrap();
        for n in 0..6 {
            for &x in &[0.0f64, 0.5, 3.0] {
                let singular = x.powf(0.0) * (-0.8 * x).exp() * laguerre_unchecked(0.0, n, 1.6 * x);
                assert!((glf_eval(p, n, x) - singular).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn simple_values() {
        let p0 = GLFParams::new(0.0, 1.3).unwrap();
        assert_eq!(glf_eval(p0, 4, 0.0), 1.0);
        let pm = GLFParams::new(-1.0, 0.7).unwrap();
        assert!((glf_eval(pm, 0, 2.0) - 2.0 * (-1.4f64).exp()).abs() < 1e-15);
        assert_eq!(glf_eval(GLFParams::new(-0.4, 1.0).unwrap(), 3, 0.0), 0.0);
    }

    #[test]
    fn orthogonality_constants() {
        let c = |a: f64, n: usize| orthogonality_constant(GLFParams::new(a, 0.5).unwrap(), n);
        assert!((c(0.0, 7) - 1.0).abs() < 1e-14);
        assert!((c(1.0, 2) - 3.0).abs() < 1e-14);
        assert!((c(-1.0, 2) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn expansion_eval_cases() {
        let p = GLFParams::new(0.0, 0.9).unwrap();
        let u = GLFExpansion::unit(p, 0);
        assert!((u.eval(1.2) - glf_eval(p, 0, 1.2)).abs() < 1e-15);
        assert_eq!(GLFExpansion::zero(p, 5).eval(2.0), 0.0);
        let v = GLFExpansion::new(p, vec![0.3, -0.1, 2.0, 0.25]).unwrap();
        assert!((v.eval(0.0) - 2.45).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(GLFParams::new(0.0, 0.0).is_err());
        assert!(GLFParams::new(f64::NAN, 1.0).is_err());
        assert!(GLFExpansion::new(GLFParams::new(0.0, 1.0).unwrap(), vec![]).is_err());
    }
}
