use proptest::prelude::*;
use templag_core::glf::*;
use templag_core::oracle::{tempered_left_derivative, tempered_right_derivative, Base, Callable1D};
use templag_core::specfun::{gamma, gamma_ratio};

fn params(alpha: f64, lambda: f64) -> GLFParams {
    GLFParams::new(alpha, lambda).unwrap()
}

fn op(side: Side, kind: OpKind, order: f64, lambda: f64) -> TemperedOperator {
    TemperedOperator::new(side, kind, order, lambda).unwrap()
}

fn sample_points() -> Vec<f64> {
    (0..10).map(|j| 0.1 * 100f64.powf((j + 1) as f64 / 10.0)).collect()
}

#[test]
fn orthogonality_by_inner_product() {
    for &alpha in &[-1.5, -0.6, 0.0, 0.7] {
        for &lambda in &[0.5, 2.5] {
            let p = params(alpha, lambda);
            for n in 0..12 {
                for m in 0..=n {
                    let g = inner_product(&GLFExpansion::unit(p, n), &GLFExpansion::unit(p, m), alpha).unwrap();
                    let gamma_n = orthogonality_constant(p, n);
                    let target = if n == m { gamma_n } else { 0.0 };
                    assert!((g - target).abs() < 1e-11 * gamma_n, "{alpha} {lambda} {n} {m}");
                }
            }
        }
    }
}

#[test]
fn left_derivative_single_mode() {
    let (nu, s, lambda, n) = (1.6, 0.7, 0.8, 4);
    let u = GLFExpansion::unit(params(-nu, lambda), n);
    let d = apply_tempered(&op(Side::Left, OpKind::Derivative, s, lambda), &u).unwrap();
    assert!((d.params.alpha - (s - nu)).abs() < 1e-15);
    assert!((d.coeffs[n] - gamma_ratio(nu, s, n).unwrap()).abs() < 1e-13);
    assert!(d.coeffs[..n].iter().all(|&c| c == 0.0));
}

#[test]
fn right_derivative_then_integral_is_identity() {
    let lambda = 1.3;
    let u = GLFExpansion::new(params(0.4, lambda), vec![1.0, -0.5, 0.25, 2.0]).unwrap();
    let d = apply_tempered(&op(Side::Right, OpKind::Derivative, 0.6, lambda), &u).unwrap();
    let back = apply_tempered(&op(Side::Right, OpKind::Integral, 0.6, lambda), &d).unwrap();
    assert!((back.params.alpha - 0.4).abs() < 1e-15);
    for (a, b) in back.coeffs.iter().zip(&u.coeffs) {
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn zero_order_is_identity() {
    let lambda = 0.9;
    let left = GLFExpansion::new(params(-1.0, lambda), vec![0.3, 1.1, -0.2]).unwrap();
    let right = GLFExpansion::new(params(1.0, lambda), vec![0.3, 1.1, -0.2]).unwrap();
    for (side, u) in [(Side::Left, &left), (Side::Right, &right)] {
        for kind in [OpKind::Integral, OpKind::Derivative] {
            let out = apply_tempered(&op(side, kind, 0.0, lambda), u).unwrap();
            assert_eq!(out.params.alpha, u.params.alpha);
            for (a, b) in out.coeffs.iter().zip(&u.coeffs) {
                assert!((a - b).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn admissibility_violations_are_reported() {
    let lambda = 1.0;
    let regular = GLFExpansion::unit(params(0.5, lambda), 2);
    let singular = GLFExpansion::unit(params(-0.5, lambda), 2);
    assert!(apply_tempered(&op(Side::Left, OpKind::Integral, 0.3, lambda), &regular).is_err());
    assert!(apply_tempered(&op(Side::Left, OpKind::Derivative, 0.8, lambda), &singular).is_err());
    assert!(apply_tempered(&op(Side::Right, OpKind::Derivative, 0.3, lambda), &singular).is_err());
    assert!(apply_tempered(&op(Side::Right, OpKind::Integral, 0.8, lambda), &regular).is_err());
    assert!(apply_tempered(&op(Side::Left, OpKind::Integral, 0.3, 2.0), &singular).is_err());
    assert!(apply_integer_derivative(Side::Left, 1, &singular).is_err());
}

#[test]
fn shifted_left_derivative_drops_low_modes() {
    let (mu, lambda) = (0.4, 0.7);
    let u = GLFExpansion::new(params(-mu, lambda), vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    let d = op(Side::Left, OpKind::Derivative, mu + 1.0, lambda);
    assert_eq!(annihilated_modes(&d, &u).unwrap(), 1);
    let out = apply_tempered(&d, &u).unwrap();
    assert_eq!(out.degree(), 2);
    assert_eq!(out.params.alpha, 1.0);
    for (j, c) in out.coeffs.iter().enumerate() {
        let n = j + 1;
        let expected = -2.0 * lambda * gamma_ratio(mu, mu, n).unwrap() * u.coeffs[n];
        assert!((c - expected).abs() < 1e-13 * expected.abs());
    }
}

#[test]
fn integer_derivative_examples() {
    let lambda = 0.6;
    let n = 3;
    let u = GLFExpansion::unit(params(-1.0, lambda), n);
    let r = apply_integer_derivative(Side::Right, 1, &u).unwrap();
    assert_eq!(r.params.alpha, 0.0);
    assert!((r.coeffs[n + 1] + (n as f64 + 1.0)).abs() < 1e-13);
    let l = apply_integer_derivative(Side::Left, 1, &u).unwrap();
    assert!((l.coeffs[n] - (n as f64 + 1.0)).abs() < 1e-13);
    let nu = 2.0;
    let w = GLFExpansion::unit(params(-nu, lambda), 0);
    let l2 = apply_integer_derivative(Side::Left, 2, &w).unwrap();
    assert!((l2.coeffs[0] - gamma(nu + 1.0).unwrap()).abs() < 1e-13);
}

#[test]
fn sl_eigenvalue_examples() {
    assert!((sl_eigenvalue(SlBranch::LeftFirst, 0.0, 0.7, 1.3, 5).unwrap() - 1.0).abs() < 1e-14);
    assert!((sl_eigenvalue(SlBranch::RightFirst, 0.0, 0.7, 1.3, 5).unwrap() - 1.0).abs() < 1e-14);
    for n in 0..10 {
        let v = sl_eigenvalue(SlBranch::LeftFirst, 1.0, 1.0, 0.5, n).unwrap();
        assert!((v - (n as f64 + 1.0)).abs() < 1e-12);
    }
    let big = sl_eigenvalue(SlBranch::LeftFirst, 0.5, 1.0, 0.8, 1000).unwrap();
    let asym = (2.0f64 * 0.8 * 1000.0).sqrt();
    assert!((big / asym - 1.0).abs() < 0.1);
    assert!(sl_eigenvalue(SlBranch::LeftFirst, 1.2, 1.0, 1.0, 0).is_err());
}

fn sl_chain(branch: SlBranch, s: f64, nu: f64, lambda: f64, n: usize) -> GLFExpansion {
    match branch {
        SlBranch::LeftFirst => {
            let u = GLFExpansion::unit(params(-nu, lambda), n);
            let a = apply_tempered(&op(Side::Left, OpKind::Derivative, s, lambda), &u).unwrap();
            let b = apply_tempered(&op(Side::Right, OpKind::Derivative, s, lambda), &a.absorb_power()).unwrap();
            b.absorb_power()
        }
        SlBranch::RightFirst => {
            let u = GLFExpansion::unit(params(nu, lambda), n);
            let a = apply_tempered(&op(Side::Right, OpKind::Derivative, s, lambda), &u).unwrap();
            let b = apply_tempered(&op(Side::Left, OpKind::Derivative, s, lambda), &a.absorb_power()).unwrap();
            b.absorb_power()
        }
    }
}

#[test]
fn sturm_liouville_chains() {
    for branch in [SlBranch::LeftFirst, SlBranch::RightFirst] {
        for &(s, nu, lambda) in &[(0.3, 1.0, 0.5), (0.8, 1.5, 2.0), (1.4, 2.0, 1.0)] {
            for n in [0, 3, 11] {
                let chain = sl_chain(branch, s, nu, lambda, n);
                let alpha = if branch == SlBranch::LeftFirst { -nu } else { nu };
                assert!((chain.params.alpha - alpha).abs() < 1e-14);
                let eig = sl_eigenvalue(branch, s, nu, lambda, n).unwrap();
                let mode = params(alpha, lambda);
                for x in sample_points() {
                    let lhs = chain.eval(x);
                    let rhs = eig * glf_eval(mode, n, x);
                    assert!((lhs - rhs).abs() < 1e-8 * rhs.abs().max(1e-12), "{branch:?} {s} {nu} {n} {x}");
                }
            }
        }
    }
}

#[test]
fn reflection_examples() {
    let lambda = 0.75;
    let u = GLFExpansion::unit(params(-1.0, lambda), 0);
    let r = reflect(&u);
    assert!((r.eval(-2.0) - 2.0 * (-2.0 * lambda).exp()).abs() < 1e-15);
    let back = r.reflect();
    for &x in &[0.0, 0.3, 4.0] {
        assert_eq!(back.eval(x), u.eval(x));
    }
}

#[test]
fn reflection_swaps_operator_sides() {
    let lambda = 0.9;
    let u = GLFExpansion::new(params(0.0, lambda), vec![0.5, -1.0, 0.3]).unwrap();
    let r = reflect(&u);
    let s = 0.6;
    let image = r.apply(&op(Side::Left, OpKind::Derivative, s, lambda)).unwrap();
    let handle = {
        let r = r.clone();
        Callable1D::new(move |y: f64| r.eval(y)).with_decay(lambda)
    };
    for &y in &[-0.4, -1.0, -2.2, -3.5, -6.0] {
        let oracle = tempered_left_derivative(&handle, s, lambda, Base::NegInfinity, y).unwrap();
        let direct = {
            let uu = u.clone();
            let f = Callable1D::new(move |x: f64| uu.eval(x)).with_decay(lambda);
            tempered_right_derivative(&f, s, lambda, -y).unwrap()
        };
        assert!((image.eval(y) - oracle).abs() < 1e-8 * oracle.abs().max(1e-3), "{y}");
        assert!((direct - oracle).abs() < 1e-8 * oracle.abs().max(1e-3), "{y}");
    }
}

#[test]
fn operator_images_against_oracle_subset() {
    let lambda = 1.0;
    for &(nu, mu) in &[(1.0, 0.5), (2.0, 1.5)] {
        for n in [0, 5, 10] {
            let u = GLFExpansion::unit(params(-nu, lambda), n);
            let f = Callable1D::new(move |x: f64| glf_eval(params(-nu, lambda), n, x)).with_origin_power(nu);
            let d = apply_tempered(&op(Side::Left, OpKind::Derivative, mu, lambda), &u).unwrap();
            let pairs: Vec<(f64, f64)> = sample_points()
                .iter()
                .map(|&x| (d.eval(x), tempered_left_derivative(&f, mu, lambda, Base::Zero, x).unwrap()))
                .collect();
            let scale = pairs.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
            for (a, b) in pairs {
                assert!((a - b).abs() < 1e-6 * scale, "{nu} {mu} {n}");
            }
        }
    }
}

#[test]
fn integration_by_parts_on_expansions() {
    let lambda = 0.7;
    for &mu in &[0.3, 0.8, 1.4] {
        let u = GLFExpansion::new(params(-2.0, lambda), vec![0.4, -1.2, 0.8, 0.1]).unwrap();
        let v = GLFExpansion::new(params(0.5, lambda), vec![1.0, 0.3, -0.6]).unwrap();
        let du = apply_tempered(&op(Side::Left, OpKind::Derivative, mu, lambda), &u).unwrap();
        let dv = apply_tempered(&op(Side::Right, OpKind::Derivative, mu, lambda), &v).unwrap();
        let lhs = inner_product(&du, &v, 0.0).unwrap();
        let rhs = inner_product(&u, &dv, 0.0).unwrap();
        assert!((lhs - rhs).abs() < 1e-8 * lhs.abs().max(rhs.abs()), "{mu}: {lhs} {rhs}");
    }
}

proptest! {
    #[test]
    fn left_integral_semigroup(nu in 0.0f64..2.0, m1 in 0.0f64..1.5, m2 in 0.0f64..1.5, lambda in 0.2f64..3.0,
                               coeffs in proptest::collection::vec(-2.0f64..2.0, 1..40)) {
        let u = GLFExpansion::new(params(-nu, lambda), coeffs).unwrap();
        let a = apply_tempered(&op(Side::Left, OpKind::Integral, m1, lambda),
                               &apply_tempered(&op(Side::Left, OpKind::Integral, m2, lambda), &u).unwrap()).unwrap();
        let b = apply_tempered(&op(Side::Left, OpKind::Integral, m1 + m2, lambda), &u).unwrap();
        prop_assert!((a.params.alpha - b.params.alpha).abs() < 1e-12);
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            prop_assert!((x - y).abs() <= 1e-12 * y.abs().max(1e-300));
        }
    }

    #[test]
    fn right_integral_semigroup(nu in 3.0f64..4.0, m1 in 0.0f64..1.5, m2 in 0.0f64..1.5, lambda in 0.2f64..3.0,
                                coeffs in proptest::collection::vec(-2.0f64..2.0, 1..40)) {
        let u = GLFExpansion::new(params(nu, lambda), coeffs).unwrap();
        let a = apply_tempered(&op(Side::Right, OpKind::Integral, m1, lambda),
                               &apply_tempered(&op(Side::Right, OpKind::Integral, m2, lambda), &u).unwrap()).unwrap();
        let b = apply_tempered(&op(Side::Right, OpKind::Integral, m1 + m2, lambda), &u).unwrap();
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            prop_assert!((x - y).abs() <= 1e-12 * y.abs().max(1e-300));
        }
    }

    #[test]
    fn left_inversion(nu in 0.0f64..2.0, mu in 0.0f64..1.9, lambda in 0.2f64..3.0,
                      coeffs in proptest::collection::vec(-2.0f64..2.0, 1..40)) {
        let u = GLFExpansion::new(params(-nu, lambda), coeffs).unwrap();
        let i = apply_tempered(&op(Side::Left, OpKind::Integral, mu, lambda), &u).unwrap();
        let back = apply_tempered(&op(Side::Left, OpKind::Derivative, mu, lambda), &i).unwrap();
        prop_assert!((back.params.alpha + nu).abs() < 1e-12);
        for (x, y) in back.coeffs.iter().zip(&u.coeffs) {
            prop_assert!((x - y).abs() <= 1e-12 * y.abs().max(1e-300));
        }
    }

    #[test]
    fn expansion_parseval(alpha in -1.9f64..2.0, lambda in 0.3f64..3.0,
                          coeffs in proptest::collection::vec(-2.0f64..2.0, 1..20)) {
        let u = GLFExpansion::new(params(alpha, lambda), coeffs).unwrap();
        let direct = inner_product(&u, &u, alpha).unwrap();
        let parseval = u.norm_squared();
        prop_assert!((direct - parseval).abs() <= 1e-10 * parseval);
    }
}
