use nalgebra::{DMatrix, DVector};

use super::{rk3_integrate, DiscreteSystem, LineFunction, Separable, TfdeProblem, Trajectory};
use crate::approx::glf_moments;
use crate::error::{domain, precondition, Error, Result};
use crate::glf::GLFParams;
use crate::oracle::adaptive_jacobi;
use crate::specfun::{gamma, gamma_ratio, gauss_jacobi, gauss_laguerre, laguerre_sequence_unchecked, laguerre_unchecked};

const TAIL_AGREEMENT: f64 = 1e-14;

/// ∂ₜu = (−1)^k C_T {p ∂₊^{μ,λ} + q ∂₋^{μ,λ}} u + f on ℝ, μ ∈ (k−1, k).
#[derive(Debug, Clone)]
pub struct WholeLineTFDE {
    pub mu: f64,
    pub lambda: f64,
    pub p: f64,
    pub q: f64,
    pub c_t: f64,
    pub f: Separable<LineFunction>,
    pub u0: LineFunction,
    pub t_final: f64,
}

impl WholeLineTFDE {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        mu: f64,
        lambda: f64,
        p: f64,
        q: f64,
        c_t: f64,
        f: Separable<LineFunction>,
        u0: LineFunction,
        t_final: f64,
    ) -> Result<Self> {
        if !(mu > 0.0 && mu < 2.0) || mu == 1.0 {
            return domain(format!("whole-line order mu must lie in (0, 1) or (1, 2), got {mu}"));
        }
        GLFParams::new(0.0, lambda)?;
        if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) || (p + q - 1.0).abs() > 1e-12 {
            return precondition(format!("weights must satisfy 0 <= p, q <= 1 and p + q = 1, got p = {p}, q = {q}"));
        }
        if !c_t.is_finite() {
            return precondition("diffusion constant C_T must be finite");
        }
        if !(t_final > 0.0) {
            return precondition(format!("final time must be positive, got {t_final}"));
        }
        Ok(Self { mu, lambda, p, q, c_t, f, u0, t_final })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfLine {
    Negative,
    Positive,
}

/// coef · r^β e^{−λr} L_m^{(a)}(2λr) on one half-line, r = |x|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub side: HalfLine,
    pub coef: f64,
    pub beta: f64,
    pub alpha: f64,
    pub degree: usize,
}

impl Piece {
    fn new(side: HalfLine, coef: f64, beta: f64, alpha: f64, degree: usize) -> Self {
        Self { side, coef, beta, alpha, degree }
    }

    fn at_radius(&self, r: f64, lambda: f64) -> f64 {
        let power = if self.beta == 0.0 { 1.0 } else { r.powf(self.beta) };
        self.coef * power * (-lambda * r).exp() * laguerre_unchecked(self.alpha, self.degree, 2.0 * lambda * r)
    }

    pub fn eval(&self, x: f64, lambda: f64) -> f64 {
        match (self.side, x <= 0.0) {
            (HalfLine::Negative, true) => self.at_radius(-x, lambda),
            (HalfLine::Positive, false) => self.at_radius(x, lambda),
            _ => 0.0,
        }
    }
}

/// coef · e^{λx} ∫ₓ^∞ L_k^{(0)}(2λ(t−x)) e^{−2λt} t^{−s} dt for x > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tail {
    pub coef: f64,
    pub kernel_degree: usize,
    pub s: f64,
}

impl Tail {
    pub fn eval(&self, x: f64, lambda: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        let (k, s) = (self.kernel_degree, self.s);
        let two_l = 2.0 * lambda;
        let integral = if two_l * x > 2.0 {
            // e^{−λx} ∫₀^∞ K(τ) e^{−2λτ} (x+τ)^{−s} dτ
            let estimate = |n: usize| -> Result<f64> {
                let rule = gauss_laguerre(0.0, n)?;
                Ok(rule.integrate(|y| laguerre_unchecked(0.0, k, y) * (x + y / two_l).powf(-s)) / two_l)
            };
            let mut n = k + 24;
            let mut prev = estimate(n)?;
            loop {
                n *= 2;
                let cur = estimate(n)?;
                if (cur - prev).abs() <= TAIL_AGREEMENT * cur.abs().max(1e-300) || n > 1024 {
                    break (-lambda * x).exp() * cur;
                }
                prev = cur;
            }
        } else {
            // e^{λx} [∫₀^∞ − ∫₀^x] K(t−x) e^{−2λt} t^{−s} dt
            let full = gauss_laguerre(-s, k / 2 + 2)?
                .integrate(|y| laguerre_unchecked(0.0, k, y - two_l * x))
                / two_l.powf(1.0 - s);
            let head = adaptive_jacobi(0.0, -s, "tail head integral", |u| {
                laguerre_unchecked(0.0, k, two_l * x * (u - 1.0)) * (-two_l * x * u).exp()
            })? * x.powf(1.0 - s);
            (lambda * x).exp() * (full - head)
        };
        Ok(self.coef * integral)
    }
}

/// Image of a basis function under an operator: pieces plus an optional x > 0 tail.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisImage {
    pub pieces: Vec<Piece>,
    pub tail: Option<Tail>,
}

impl BasisImage {
    fn pieces(pieces: Vec<Piece>) -> Self {
        Self { pieces, tail: None }
    }

    pub fn eval(&self, x: f64, lambda: f64) -> Result<f64> {
        let mut v: f64 = self.pieces.iter().map(|p| p.eval(x, lambda)).sum();
        if let Some(t) = &self.tail {
            v += t.eval(x, lambda)?;
        }
        Ok(v)
    }
}

/// Basis {φ*, φ⁻₀..φ⁻_{N₁−1}, φ⁺₀..φ⁺_{N₂−1}} of the two-domain space, in this order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoDomainBasis {
    pub lambda: f64,
    pub n1: usize,
    pub n2: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisMember {
    Star,
    Minus(usize),
    Plus(usize),
}

pub fn build_two_domain_basis(lambda: f64, n1: usize, n2: usize) -> Result<TwoDomainBasis> {
    GLFParams::new(0.0, lambda)?;
    if n1 < 1 || n2 < 1 {
        return precondition(format!("subdomain degrees must be at least 1, got N1 = {n1}, N2 = {n2}"));
    }
    Ok(TwoDomainBasis { lambda, n1, n2 })
}

impl TwoDomainBasis {
    pub fn dimension(&self) -> usize {
        1 + self.n1 + self.n2
    }

    pub fn member(&self, j: usize) -> BasisMember {
        if j == 0 {
            BasisMember::Star
        } else if j <= self.n1 {
            BasisMember::Minus(j - 1)
        } else {
            BasisMember::Plus(j - 1 - self.n1)
        }
    }

    pub fn index(&self, member: BasisMember) -> usize {
        match member {
            BasisMember::Star => 0,
            BasisMember::Minus(n) => 1 + n,
            BasisMember::Plus(n) => 1 + self.n1 + n,
        }
    }

    /// Index of the reflected basis function x ↦ φ_j(−x); requires N₁ = N₂.
    pub fn reflected_index(&self, j: usize) -> Option<usize> {
        if self.n1 != self.n2 {
            return None;
        }
        Some(match self.member(j) {
            BasisMember::Star => 0,
            BasisMember::Minus(n) => self.index(BasisMember::Plus(n)),
            BasisMember::Plus(n) => self.index(BasisMember::Minus(n)),
        })
    }

    pub fn pieces(&self, j: usize) -> Vec<Piece> {
        use HalfLine::*;
        match self.member(j) {
            BasisMember::Star => vec![Piece::new(Negative, 1.0, 0.0, 0.0, 0), Piece::new(Positive, 1.0, 0.0, 0.0, 0)],
            BasisMember::Minus(n) => vec![Piece::new(Negative, 1.0, 1.0, 1.0, n)],
            BasisMember::Plus(n) => vec![Piece::new(Positive, 1.0, 1.0, 1.0, n)],
        }
    }

    pub fn eval(&self, j: usize, x: f64) -> f64 {
        self.pieces(j).iter().map(|p| p.eval(x, self.lambda)).sum()
    }

    /// Σ c_j φ_j(x).
    pub fn eval_expansion(&self, c: &DVector<f64>, x: f64) -> f64 {
        let lambda = self.lambda;
        let r = x.abs();
        let star = c[0] * (-lambda * r).exp();
        if x == 0.0 {
            return star;
        }
        let (offset, count) = if x < 0.0 { (1, self.n1) } else { (1 + self.n1, self.n2) };
        let l = laguerre_sequence_unchecked(1.0, count - 1, 2.0 * lambda * r);
        let sum: f64 = (0..count).map(|n| c[offset + n] * l[n]).sum();
        star + r * (-lambda * r).exp() * sum
    }
}

/// 𝔻^s_left, 𝔻^1_right and 𝔻^1_left images of every basis function.
#[derive(Debug, Clone)]
pub struct BasisDerivatives {
    pub s: f64,
    pub left_fractional: Vec<BasisImage>,
    pub right_first: Vec<BasisImage>,
    pub left_first: Vec<BasisImage>,
}

pub fn basis_tempered_derivatives(basis: &TwoDomainBasis, s: f64) -> Result<BasisDerivatives> {
    use HalfLine::*;
    if !(s > 0.0 && s < 1.0) {
        return precondition(format!("basis derivative order s must lie in (0, 1), got {s}"));
    }
    let two_l = 2.0 * basis.lambda;
    let g1s = gamma(1.0 - s)?;
    let mut left_fractional = Vec::with_capacity(basis.dimension());
    let mut right_first = Vec::with_capacity(basis.dimension());
    let mut left_first = Vec::with_capacity(basis.dimension());
    for j in 0..basis.dimension() {
        match basis.member(j) {
            BasisMember::Star => {
                left_fractional.push(BasisImage {
                    pieces: vec![Piece::new(Negative, two_l.powf(s), 0.0, 0.0, 0)],
                    tail: Some(Tail { coef: two_l / g1s, kernel_degree: 0, s }),
                });
                right_first.push(BasisImage::pieces(vec![Piece::new(Positive, two_l, 0.0, 0.0, 0)]));
                left_first.push(BasisImage::pieces(vec![Piece::new(Negative, two_l, 0.0, 0.0, 0)]));
            }
            BasisMember::Minus(n) => {
                let np1 = n as f64 + 1.0;
                left_fractional.push(BasisImage {
                    pieces: vec![Piece::new(Negative, -np1 * two_l.powf(s - 1.0), 0.0, s - 1.0, n + 1)],
                    tail: Some(Tail { coef: -np1 / g1s, kernel_degree: n + 1, s }),
                });
                right_first.push(BasisImage::pieces(vec![Piece::new(Negative, np1, 0.0, 0.0, n)]));
                left_first.push(BasisImage::pieces(vec![Piece::new(Negative, -np1, 0.0, 0.0, n + 1)]));
            }
            BasisMember::Plus(n) => {
                let np1 = n as f64 + 1.0;
                left_fractional.push(BasisImage::pieces(vec![Piece::new(
                    Positive,
                    gamma_ratio(1.0, s, n)?,
                    1.0 - s,
                    1.0 - s,
                    n,
                )]));
                right_first.push(BasisImage::pieces(vec![Piece::new(Positive, -np1, 0.0, 0.0, n + 1)]));
                left_first.push(BasisImage::pieces(vec![Piece::new(Positive, np1, 0.0, 0.0, n)]));
            }
        }
    }
    Ok(BasisDerivatives { s, left_fractional, right_first, left_first })
}

/// ∫ u v over the shared half-line of two pieces.
fn piece_inner(u: &Piece, v: &Piece, lambda: f64) -> Result<f64> {
    if u.side != v.side {
        return Ok(0.0);
    }
    let power = u.beta + v.beta;
    let rule = gauss_laguerre(power, (u.degree + v.degree) / 2 + 2)?;
    let sum = rule.integrate(|y| laguerre_unchecked(u.alpha, u.degree, y) * laguerre_unchecked(v.alpha, v.degree, y));
    Ok(u.coef * v.coef * sum / (2.0 * lambda).powf(power + 1.0))
}

/// ∫₀^∞ T(x) v(x) dx = c ∫₀^∞ t^{1+β−s} e^{−2λt} ∫₀¹ ξ^β Q(tξ) K(t(1−ξ)) dξ dt.
fn tail_inner(tail: &Tail, v: &Piece, lambda: f64) -> Result<f64> {
    if v.side != HalfLine::Positive {
        return Ok(0.0);
    }
    let two_l = 2.0 * lambda;
    let degree = v.degree + tail.kernel_degree;
    let power = 1.0 + v.beta - tail.s;
    let outer = gauss_laguerre(power, degree / 2 + 2)?;
    let inner = gauss_jacobi(0.0, v.beta, degree / 2 + 2)?;
    let mut sum = 0.0;
    for (&y, &w) in outer.nodes.iter().zip(&outer.weights) {
        let p: f64 = inner
            .nodes
            .iter()
            .zip(&inner.weights)
            .map(|(&xi, &wi)| {
                wi * laguerre_unchecked(v.alpha, v.degree, y * xi)
                    * laguerre_unchecked(0.0, tail.kernel_degree, y * (1.0 - xi))
            })
            .sum();
        sum += w * p;
    }
    Ok(tail.coef * v.coef * sum / two_l.powf(power + 1.0))
}

/// (u, Σ pieces) where u may carry a tail.
fn image_inner(u: &BasisImage, v: &[Piece], lambda: f64) -> Result<f64> {
    let mut total = 0.0;
    for pv in v {
        for pu in &u.pieces {
            total += piece_inner(pu, pv, lambda)?;
        }
        if let Some(t) = &u.tail {
            total += tail_inner(t, pv, lambda)?;
        }
    }
    Ok(total)
}

/// Matrix with entries (image_j, test_i).
fn pairing(images: &[BasisImage], tests: &[Vec<Piece>], lambda: f64, block: &str) -> Result<DMatrix<f64>> {
    let n = images.len();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = image_inner(&images[j], &tests[i], lambda)?;
            if !v.is_finite() {
                return Err(Error::Numeric(format!("non-finite entry ({i}, {j}) in {block}")));
            }
            out[(i, j)] = v;
        }
    }
    Ok(out)
}

/// Whole-line matrices: mass M, fractional pairing S or B, and the advection pairing G.
#[derive(Debug, Clone)]
pub struct WholeLineBlocks {
    pub mass: DMatrix<f64>,
    /// (𝔻^μ_left φ_j, φ_i) for μ < 1, or (𝔻^{μ−1}_left φ_j, 𝔻^1_right φ_i) for μ > 1.
    pub fractional: DMatrix<f64>,
    /// (∂ₓφ_j, φ_i).
    pub advection: DMatrix<f64>,
}

pub fn whole_line_blocks(basis: &TwoDomainBasis, mu: f64) -> Result<WholeLineBlocks> {
    if !(mu > 0.0 && mu < 2.0) || mu == 1.0 {
        return domain(format!("whole-line order mu must lie in (0, 1) or (1, 2), got {mu}"));
    }
    let lambda = basis.lambda;
    let s = if mu < 1.0 { mu } else { mu - 1.0 };
    let d = basis_tempered_derivatives(basis, s)?;
    let members: Vec<BasisImage> = (0..basis.dimension()).map(|j| BasisImage::pieces(basis.pieces(j))).collect();
    let tests: Vec<Vec<Piece>> = (0..basis.dimension()).map(|j| basis.pieces(j)).collect();
    let mass = pairing(&members, &tests, lambda, "mass")?;
    let fractional = if mu < 1.0 {
        pairing(&d.left_fractional, &tests, lambda, "fractional stiffness")?
    } else {
        let right: Vec<Vec<Piece>> = d.right_first.iter().map(|im| im.pieces.clone()).collect();
        pairing(&d.left_fractional, &right, lambda, "fractional stiffness")?
    };
    let advection = pairing(&d.left_first, &tests, lambda, "advection")? - &mass * lambda;
    Ok(WholeLineBlocks { mass, fractional, advection })
}

fn line_moments(g: &LineFunction, basis: &TwoDomainBasis) -> Result<DVector<f64>> {
    let lambda = basis.lambda;
    let mut out = DVector::zeros(basis.dimension());
    for (h, count, offset) in [(&g.left, basis.n1, 1), (&g.right, basis.n2, 1 + basis.n1)] {
        let star = glf_moments(h, 0.0, lambda, 0.0, 0, "whole-line projection")?;
        out[0] += star[0];
        let m = glf_moments(h, 1.0, lambda, 1.0, count - 1, "whole-line projection")?;
        for (k, v) in m.into_iter().enumerate() {
            out[offset + k] = v;
        }
    }
    Ok(out)
}

/// Galerkin system of the two-domain scheme.
pub fn assemble_whole_line(problem: &WholeLineTFDE, basis: &TwoDomainBasis) -> Result<DiscreteSystem> {
    if (basis.lambda - problem.lambda).abs() > 1e-12 * problem.lambda {
        return precondition("basis and problem use different lambda");
    }
    let (mu, lambda, p, q, c_t) = (problem.mu, problem.lambda, problem.p, problem.q, problem.c_t);
    let blocks = whole_line_blocks(basis, mu)?;
    let WholeLineBlocks { mass, fractional, advection } = blocks;
    let sym = &fractional * p + fractional.transpose() * q;
    let stiffness = if mu < 1.0 {
        (sym - &mass * lambda.powf(mu)) * c_t
    } else {
        (-sym + &mass * lambda.powf(mu) + advection * ((p - q) * mu * lambda.powf(mu - 1.0))) * c_t
    };
    let load = problem
        .f
        .terms
        .iter()
        .map(|(a, g)| Ok((a.clone(), line_moments(g, basis)?)))
        .collect::<Result<Vec<_>>>()?;
    DiscreteSystem::new(mass, stiffness, load)
}

#[derive(Debug, Clone)]
pub struct WholeLineSolution {
    pub basis: TwoDomainBasis,
    pub trajectory: Trajectory,
}

impl WholeLineSolution {
    /// u_N(x, t_k).
    pub fn eval(&self, x: f64, k: usize) -> f64 {
        self.basis.eval_expansion(&self.trajectory.states[k], x)
    }
}

impl TfdeProblem for WholeLineTFDE {
    type Discretization = TwoDomainBasis;
    type Solution = WholeLineSolution;

    fn solve(&self, basis: &TwoDomainBasis, h: f64, times: &[f64]) -> Result<WholeLineSolution> {
        let system = assemble_whole_line(self, basis)?;
        let c0 = system.solve_mass(&line_moments(&self.u0, basis)?);
        let trajectory = rk3_integrate(&system, &c0, h, times)?;
        Ok(WholeLineSolution { basis: *basis, trajectory })
    }
}
