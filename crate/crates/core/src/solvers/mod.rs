//! Discrete schemes: the half-line model problem, the half-line tempered diffusion
//! Galerkin solver and the two-domain whole-line spectral-element solver.

mod half_line;
mod model;
mod rk3;
mod whole_line;

use std::fmt;
use std::sync::Arc;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};
use crate::oracle::Callable1D;

pub use half_line::{assemble_half_line, HalfLineSolution, HalfLineTFDE};
pub use model::{exact_model_solution, solve_model, ModelProblem};
pub use rk3::{rk3_integrate, Trajectory};
pub use whole_line::{
    assemble_whole_line, basis_tempered_derivatives, build_two_domain_basis, whole_line_blocks, BasisDerivatives,
    BasisImage, BasisMember, HalfLine, Piece, Tail, TwoDomainBasis, WholeLineBlocks, WholeLineSolution,
    WholeLineTFDE,
};

pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A function on ℝ given by its restrictions r ↦ u(−r) and r ↦ u(r), r > 0.
#[derive(Clone, Debug)]
pub struct LineFunction {
    pub left: Callable1D,
    pub right: Callable1D,
}

impl LineFunction {
    pub fn new(left: Callable1D, right: Callable1D) -> Self {
        Self { left, right }
    }

    /// An even function from its right restriction.
    pub fn even(right: Callable1D) -> Self {
        Self { left: right.clone(), right }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.left.eval(-x)
        } else {
            self.right.eval(x)
        }
    }
}

/// Σ a_k(t) g_k(x).
#[derive(Clone)]
pub struct Separable<S> {
    pub terms: Vec<(TimeFn, S)>,
}

impl<S> Default for Separable<S> {
    fn default() -> Self {
        Self { terms: Vec::new() }
    }
}

impl<S> fmt::Debug for Separable<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Separable").field("terms", &self.terms.len()).finish()
    }
}

impl<S> Separable<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(mut self, time: impl Fn(f64) -> f64 + Send + Sync + 'static, space: S) -> Self {
        self.terms.push((Arc::new(time), space));
        self
    }
}

impl Separable<Callable1D> {
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        self.terms.iter().map(|(a, g)| a(t) * g.eval(x)).sum()
    }
}

impl Separable<LineFunction> {
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        self.terms.iter().map(|(a, g)| a(t) * g.eval(x)).sum()
    }
}

/// A time-dependent problem with a spatial discretization.
pub trait TfdeProblem {
    type Discretization;
    type Solution;

    fn solve(&self, discretization: &Self::Discretization, h: f64, times: &[f64]) -> Result<Self::Solution>;
}

/// Galerkin projection of u₀, then RK3 to each output time.
pub fn solve_tfde<P: TfdeProblem>(
    problem: &P,
    discretization: &P::Discretization,
    h: f64,
    times: &[f64],
) -> Result<P::Solution> {
    problem.solve(discretization, h, times)
}

/// M c′ + A c = F(t) with F(t) = Σ a_k(t) b_k.
#[derive(Clone)]
pub struct DiscreteSystem {
    pub mass: DMatrix<f64>,
    pub stiffness: DMatrix<f64>,
    pub load: Vec<(TimeFn, DVector<f64>)>,
    factor: Cholesky<f64, Dyn>,
}

impl fmt::Debug for DiscreteSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiscreteSystem")
            .field("dimension", &self.dimension())
            .field("load_terms", &self.load.len())
            .finish_non_exhaustive()
    }
}

impl DiscreteSystem {
    pub fn new(mass: DMatrix<f64>, stiffness: DMatrix<f64>, load: Vec<(TimeFn, DVector<f64>)>) -> Result<Self> {
        let n = mass.nrows();
        if mass.ncols() != n || stiffness.shape() != (n, n) || load.iter().any(|(_, b)| b.len() != n) {
            return Err(Error::Precondition("mass, stiffness and load dimensions disagree".into()));
        }
        let factor = mass
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Numeric("mass matrix is not positive definite".into()))?;
        Ok(Self { mass, stiffness, load, factor })
    }

    pub fn dimension(&self) -> usize {
        self.mass.nrows()
    }

    pub fn load_at(&self, t: f64) -> DVector<f64> {
        let mut f = DVector::zeros(self.dimension());
        for (a, b) in &self.load {
            f.axpy(a(t), b, 1.0);
        }
        f
    }

    /// M⁻¹ v.
    pub fn solve_mass(&self, v: &DVector<f64>) -> DVector<f64> {
        self.factor.solve(v)
    }
}
