use templag_core::glf::*;
use templag_core::oracle::{
    tempered_left_derivative, tempered_left_integral, tempered_right_derivative, tempered_right_integral, Base,
    Callable1D,
};

use crate::config::Config;
use crate::error::Result;
use crate::table::{num, Table};

#[derive(Clone, Copy)]
enum Reference {
    LeftIntegral,
    LeftDerivative,
    RightIntegral,
    RightDerivative,
}

fn sample_points() -> Vec<f64> {
    (0..10).map(|j| 0.1 * 100f64.powf((j + 1) as f64 / 10.0)).collect()
}

fn params(alpha: f64, lambda: f64) -> Result<GLFParams> {
    Ok(GLFParams::new(alpha, lambda)?)
}

/// Max error of a coefficient-space image against the oracle, scaled by the oracle's size.
fn image_error(image: &GLFExpansion, input: GLFParams, n: usize, order: f64, reference: Reference) -> Result<f64> {
    let lambda = input.lambda;
    let f = Callable1D::new(move |x| glf_eval(input, n, x)).with_decay(lambda).with_origin_power(input.x_power());
    let mut pairs = Vec::new();
    for x in sample_points() {
        let r = match reference {
            Reference::LeftIntegral => tempered_left_integral(&f, order, lambda, Base::Zero, x)?,
            Reference::LeftDerivative => tempered_left_derivative(&f, order, lambda, Base::Zero, x)?,
            Reference::RightIntegral => tempered_right_integral(&f, order, lambda, x)?,
            Reference::RightDerivative => tempered_right_derivative(&f, order, lambda, x)?,
        };
        pairs.push((image.eval(x), r));
    }
    let scale = pairs.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    Ok(pairs.iter().map(|(a, b)| (a - b).abs() / scale).fold(0.0, f64::max))
}

struct Suite {
    table: Table,
    failures: usize,
}

impl Suite {
    fn record(&mut self, identity: &str, parameters: String, error: f64, tolerance: f64) {
        let pass = error < tolerance;
        if !pass {
            self.failures += 1;
        }
        self.table.push(vec![
            identity.to_string(),
            parameters,
            num(error),
            num(tolerance),
            if pass { "PASS" } else { "FAIL" }.to_string(),
        ]);
    }
}

fn coefficient_gap(a: &GLFExpansion, b: &GLFExpansion) -> f64 {
    a.coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| (x - y).abs() / y.abs().max(1e-300))
        .fold((a.params.alpha - b.params.alpha).abs(), f64::max)
}

fn run_suite(lambda: f64, n_max: usize) -> Result<Suite> {
    let mut suite = Suite {
        table: Table::new(&["identity", "parameters", "max_error", "tolerance", "status"]),
        failures: 0,
    };
    for &alpha in &[-1.5, -0.6, 0.0, 0.7] {
        let p = params(alpha, lambda)?;
        let mut worst = 0.0f64;
        for n in 0..=n_max {
            for m in 0..=n {
                let g = inner_product(&GLFExpansion::unit(p, n), &GLFExpansion::unit(p, m), alpha)?;
                let (gn, gm) = (orthogonality_constant(p, n), orthogonality_constant(p, m));
                let target = if n == m { gn } else { 0.0 };
                worst = worst.max((g - target).abs() / (gn * gm).sqrt());
            }
        }
        suite.record("orthogonality", format!("alpha={alpha}"), worst, 1e-10);
    }
    let op = |side, kind, order| TemperedOperator::new(side, kind, order, lambda);
    for &nu in &[1.0, 2.0] {
        let singular = params(-nu, lambda)?;
        let regular = params(nu, lambda)?;
        for &mu in &[0.3, 0.5, 0.9, 1.5] {
            let mut maps = vec![
                ("left-integral", Side::Left, OpKind::Integral, singular, Reference::LeftIntegral),
                ("right-derivative", Side::Right, OpKind::Derivative, regular, Reference::RightDerivative),
            ];
            if nu >= mu {
                maps.push(("left-derivative", Side::Left, OpKind::Derivative, singular, Reference::LeftDerivative));
                maps.push(("right-integral", Side::Right, OpKind::Integral, regular, Reference::RightIntegral));
            }
            for (name, side, kind, input, reference) in maps {
                let mut worst = 0.0f64;
                for n in 0..=n_max {
                    let image = apply_tempered(&op(side, kind, mu)?, &GLFExpansion::unit(input, n))?;
                    worst = worst.max(image_error(&image, input, n, mu, reference)?);
                }
                suite.record(name, format!("mu={mu};nu={nu}"), worst, 1e-6);
            }
        }
        for k in 1..=(nu as usize) {
            let mut worst = 0.0f64;
            for n in 0..=n_max {
                let image = apply_integer_derivative(Side::Left, k, &GLFExpansion::unit(singular, n))?;
                worst = worst.max(image_error(&image, singular, n, k as f64, Reference::LeftDerivative)?);
            }
            suite.record("integer-left-derivative", format!("k={k};nu={nu}"), worst, 1e-6);
        }
    }
    for &mu in &[0.3, 0.5, 0.9] {
        let family = params(-mu, lambda)?;
        let mut worst = 0.0f64;
        for n in 1..=n_max.max(1) {
            let image = apply_tempered(&op(Side::Left, OpKind::Derivative, mu + 1.0)?, &GLFExpansion::unit(family, n))?;
            worst = worst.max(image_error(&image, family, n, mu + 1.0, Reference::LeftDerivative)?);
        }
        suite.record("shifted-left-derivative", format!("order={};nu={mu}", mu + 1.0), worst, 1e-6);
    }
    let coeffs: Vec<f64> = (0..=n_max).map(|n| 1.0 / (n as f64 + 1.0)).collect();
    for &(m1, m2) in &[(0.3, 0.9), (0.7, 1.4)] {
        let u = GLFExpansion::new(params(-1.0, lambda)?, coeffs.clone())?;
        let li = |m: f64, u: &GLFExpansion| apply_tempered(&op(Side::Left, OpKind::Integral, m)?, u);
        let gap = coefficient_gap(&li(m1, &li(m2, &u)?)?, &li(m1 + m2, &u)?);
        suite.record("semigroup-left-integral", format!("mu1={m1};mu2={m2}"), gap, 1e-12);
        let back = apply_tempered(&op(Side::Left, OpKind::Derivative, m1)?, &li(m1, &u)?)?;
        suite.record("inversion-left", format!("mu={m1}"), coefficient_gap(&back, &u), 1e-12);
    }
    for (name, branch, first, second, sign) in [
        ("sturm-liouville-left-first", SlBranch::LeftFirst, Side::Left, Side::Right, -1.0),
        ("sturm-liouville-right-first", SlBranch::RightFirst, Side::Right, Side::Left, 1.0),
    ] {
        for &(s, nu) in &[(0.3, 1.0), (0.8, 1.5)] {
            let mut worst = 0.0f64;
            for n in 0..=n_max {
                let mode = params(sign * nu, lambda)?;
                let a = apply_tempered(&op(first, OpKind::Derivative, s)?, &GLFExpansion::unit(mode, n))?;
                let chain = apply_tempered(&op(second, OpKind::Derivative, s)?, &a.absorb_power())?.absorb_power();
                let eig = sl_eigenvalue(branch, s, nu, lambda, n)?;
                let scale = sample_points().iter().map(|&x| (eig * glf_eval(mode, n, x)).abs()).fold(0.0, f64::max);
                for x in sample_points() {
                    worst = worst.max((chain.eval(x) - eig * glf_eval(mode, n, x)).abs() / scale);
                }
            }
            suite.record(name, format!("s={s};nu={nu}"), worst, 1e-8);
        }
    }
    Ok(suite)
}

/// Runs the identity suite; returns the table and the number of failed checks.
pub fn operator_check(config: &mut Config) -> Result<impl FnOnce() -> Result<(Table, usize)>> {
    let lambda = config.take_f64("lambda", 1.0)?;
    let n_max: usize = config.take("n_max", 10)?;
    if !(lambda > 0.0) {
        return crate::error::config_err("constraint violated: lambda > 0");
    }
    Ok(move || {
        let suite = run_suite(lambda, n_max)?;
        Ok((suite.table, suite.failures))
    })
}
