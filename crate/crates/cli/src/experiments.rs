use templag_core::approx::{rate_fit, weighted_error, WeightedNorm};
use templag_core::oracle::Callable1D;
use templag_core::solvers::*;

use crate::catalog::{self, Entry};
use crate::config::Config;
use crate::error::{config_err, CliError, Result};
use crate::table::{num, Table};

fn require(ok: bool, constraint: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        config_err(format!("constraint violated: {constraint}"))
    }
}

/// Uniform output grid.
#[derive(Debug, Clone, Copy)]
struct Grid {
    lo: f64,
    hi: f64,
    points: usize,
}

impl Grid {
    fn take(config: &mut Config, lambda: f64, whole_line: bool) -> Result<Self> {
        let x_max = config.take_f64("x_max", 10.0 / lambda)?;
        let points: usize = config.take("grid_points", 401)?;
        require(x_max > 0.0, "x_max > 0")?;
        require(points >= 2, "grid_points >= 2")?;
        Ok(Self { lo: if whole_line { -x_max } else { 0.0 }, hi: x_max, points })
    }

    fn nodes(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.lo + step * i as f64).collect()
    }
}

#[derive(Debug, Clone)]
struct Clock {
    h: f64,
    t_final: f64,
    times: Vec<f64>,
}

impl Clock {
    fn take(config: &mut Config, t_default: f64) -> Result<Self> {
        let h = config.take_f64("h", 1e-3)?;
        let t_final = config.take_f64("t_final", t_default)?;
        let times = config.take_f64_list("times", vec![t_final])?;
        require(h > 0.0, "h > 0")?;
        require(t_final > 0.0, "t_final > 0")?;
        require(h <= t_final, "h <= t_final")?;
        require(!times.is_empty(), "times must list at least one output time")?;
        require(times.iter().all(|&t| t > 0.0 && t <= t_final), "every output time t satisfies 0 < t <= t_final")?;
        require(times.windows(2).all(|w| w[0] < w[1]), "output times strictly increasing")?;
        Ok(Self { h, t_final, times })
    }
}

fn take_entry(config: &mut Config, key: &str, default: Entry) -> Result<Entry> {
    match config.take_opt::<String>(key)? {
        Some(v) => v.parse(),
        None => Ok(default),
    }
}

fn take_lambda(config: &mut Config, default: f64) -> Result<f64> {
    let lambda = config.take_f64("lambda", default)?;
    require(lambda > 0.0, "lambda > 0")?;
    Ok(lambda)
}

fn snapshot_table(times: &[f64], grid: &Grid, eval: impl Fn(f64, usize) -> f64) -> Table {
    let mut table = Table::new(&["t", "x", "u"]);
    for (k, &t) in times.iter().enumerate() {
        for x in grid.nodes() {
            table.push(vec![num(t), num(x), num(eval(x, k))]);
        }
    }
    table
}

struct ModelSetup {
    s: f64,
    lambda: f64,
    source: Entry,
}

fn take_model_source(config: &mut Config) -> Result<Entry> {
    take_entry(config, "source", Entry::ESinx)
}

fn check_model_order(s: f64) -> Result<()> {
    require(s > 0.0 && s < 2.0, "0 < s < 2")
}

fn model_problem(setup: &ModelSetup) -> Result<(ModelProblem, Callable1D)> {
    let f = catalog::model_source(setup.source)?;
    let decay = f.decay_rate.unwrap_or(setup.lambda);
    let problem = ModelProblem::new(setup.s, setup.lambda, f)?;
    let p = problem.clone();
    let exact = Callable1D::new(move |x| exact_model_solution(&p, x).unwrap_or(f64::NAN))
        .with_decay(setup.lambda.min(decay))
        .with_origin_power(setup.s);
    Ok((problem, exact))
}

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Numeric(format!("{what} is not finite")))
    }
}

pub fn model(config: &mut Config) -> Result<impl FnOnce() -> Result<Table>> {
    let s = config.take_f64("s", 0.7)?;
    let lambda = take_lambda(config, 1.0)?;
    let n: usize = config.take("n", 32)?;
    let source = take_model_source(config)?;
    let grid = Grid::take(config, lambda, false)?;
    check_model_order(s)?;
    require(n >= 1, "n >= 1")?;
    catalog::model_source(source)?;
    Ok(move || {
        let (problem, exact) = model_problem(&ModelSetup { s, lambda, source })?;
        let u = solve_model(&problem, n)?;
        let mut table = Table::new(&["x", "u", "exact", "abs_error"]);
        for x in grid.nodes() {
            let (a, b) = (u.eval(x), finite(exact.eval(x), "exact solution")?);
            table.push(vec![num(x), num(a), num(b), num((a - b).abs())]);
        }
        Ok(table)
    })
}

struct HalfLineSetup {
    mu: f64,
    lambda: f64,
    source: Entry,
    initial: Entry,
    clock: Clock,
}

impl HalfLineSetup {
    fn take(config: &mut Config) -> Result<Self> {
        let mu = config.take_f64("mu", 2.0 / 3.0)?;
        let lambda = take_lambda(config, 2.0 / 3.0)?;
        let source = take_entry(config, "source", Entry::CaseI)?;
        let initial_default = if source == Entry::CaseI { Entry::CaseI } else { Entry::ZeroF };
        let initial = take_entry(config, "initial", initial_default)?;
        let clock = Clock::take(config, 1.0)?;
        require(mu > 0.0 && mu < 1.0, "0 < mu < 1")?;
        catalog::half_line_source(source, mu, lambda)?;
        catalog::half_line_initial(initial, lambda)?;
        Ok(Self { mu, lambda, source, initial, clock })
    }

    fn problem(&self, nu: f64) -> Result<HalfLineTFDE> {
        let f = catalog::half_line_source(self.source, self.mu, self.lambda)?;
        let u0 = catalog::half_line_initial(self.initial, self.lambda)?;
        Ok(HalfLineTFDE::new(self.mu, self.lambda, f, u0, self.clock.t_final)?.with_nu(nu)?)
    }
}

fn check_nu(nu: f64, mu: f64) -> Result<()> {
    require(nu > (mu - 0.5).max(0.0) && nu <= 1.0, "max(0, mu - 1/2) < nu <= 1")
}

pub fn half_line(config: &mut Config) -> Result<impl FnOnce() -> Result<Table>> {
    let setup = HalfLineSetup::take(config)?;
    let nu = config.take_f64("nu", 1.0)?;
    let n: usize = config.take("n", 32)?;
    let grid = Grid::take(config, setup.lambda, false)?;
    check_nu(nu, setup.mu)?;
    require(n >= 1, "n >= 1")?;
    Ok(move || {
        let sol = solve_tfde(&setup.problem(nu)?, &n, setup.clock.h, &setup.clock.times)?;
        Ok(snapshot_table(&setup.clock.times, &grid, |x, k| sol.eval(x, k)))
    })
}

struct WholeLineSetup {
    mu: f64,
    lambda: f64,
    p: f64,
    q: f64,
    c_t: f64,
    source: Entry,
    initial: Entry,
    clock: Clock,
}

impl WholeLineSetup {
    fn take(config: &mut Config) -> Result<Self> {
        let mu = config.take_f64("mu", 1.5)?;
        let lambda = take_lambda(config, 1.0)?;
        let p = config.take_f64("p", 0.5)?;
        let q = config.take_f64_opt("q")?.unwrap_or(1.0 - p);
        let c_t = config.take_f64("c_t", 1.0)?;
        let source = take_entry(config, "source", Entry::ZeroF)?;
        let initial = take_entry(config, "initial", Entry::ExpAbs)?;
        let clock = Clock::take(config, 1.0)?;
        require(mu > 0.0 && mu < 2.0 && mu != 1.0, "0 < mu < 2 and mu != 1")?;
        require((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q), "0 <= p, q <= 1")?;
        require((p + q - 1.0).abs() <= 1e-12, "p + q = 1")?;
        require(c_t.is_finite(), "c_t finite")?;
        catalog::whole_line_source(source)?;
        catalog::whole_line_initial(initial)?;
        Ok(Self { mu, lambda, p, q, c_t, source, initial, clock })
    }

    fn solve(&self, n1: usize, n2: usize) -> Result<WholeLineSolution> {
        let problem = WholeLineTFDE::new(
            self.mu,
            self.lambda,
            self.p,
            self.q,
            self.c_t,
            catalog::whole_line_source(self.source)?,
            catalog::whole_line_initial(self.initial)?,
            self.clock.t_final,
        )?;
        let basis = build_two_domain_basis(self.lambda, n1, n2)?;
        Ok(solve_tfde(&problem, &basis, self.clock.h, &self.clock.times)?)
    }
}

pub fn whole_line(config: &mut Config) -> Result<impl FnOnce() -> Result<Table>> {
    let setup = WholeLineSetup::take(config)?;
    let n: usize = config.take("n", 32)?;
    let n1: usize = config.take("n1", n)?;
    let n2: usize = config.take("n2", n)?;
    let grid = Grid::take(config, setup.lambda, true)?;
    require(n1 >= 1 && n2 >= 1, "n1 >= 1 and n2 >= 1")?;
    Ok(move || {
        let sol = setup.solve(n1, n2)?;
        Ok(snapshot_table(&setup.clock.times, &grid, |x, k| sol.eval(x, k)))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    Model,
    HalfLine,
    WholeLine,
}

fn take_target(config: &mut Config) -> Result<Target> {
    match config.take("target", "model".to_string())?.as_str() {
        "model" | "model-problem" => Ok(Target::Model),
        "half-line" => Ok(Target::HalfLine),
        "whole-line" => Ok(Target::WholeLine),
        other => config_err(format!("target {other:?} is not one of model, half-line, whole-line")),
    }
}

fn max_difference(grid: &Grid, a: impl Fn(f64) -> f64, b: impl Fn(f64) -> f64) -> f64 {
    grid.nodes().into_iter().map(|x| (a(x) - b(x)).abs()).fold(0.0, f64::max)
}

fn convergence_rows(table: &mut Table, label: String, errors: Vec<(usize, f64)>) {
    let slope = rate_fit(&errors).map(num).unwrap_or_default();
    for (n, e) in errors {
        table.push(vec![label.clone(), n.to_string(), num(e), slope.clone()]);
    }
}

pub fn convergence(config: &mut Config) -> Result<Box<dyn FnOnce() -> Result<Table>>> {
    let target = take_target(config)?;
    let n_list: Vec<usize> = config.take_list("n_list", vec![8, 16, 32, 64])?;
    require(!n_list.is_empty() && n_list.iter().all(|&n| n >= 1), "n_list holds at least one N >= 1")?;
    let n_max = *n_list.iter().max().unwrap_or(&1);
    let header = ["label", "N", "error", "fitted_slope"];
    match target {
        Target::Model => {
            let s_list = config.take_f64_list("s", vec![0.4, 0.7, 1.5])?;
            let lambda = take_lambda(config, 1.0)?;
            let source = take_model_source(config)?;
            for &s in &s_list {
                check_model_order(s)?;
            }
            catalog::model_source(source)?;
            Ok(Box::new(move || {
                let mut table = Table::new(&header);
                for s in s_list {
                    let (problem, exact) = model_problem(&ModelSetup { s, lambda, source })?;
                    let errors = n_list
                        .iter()
                        .map(|&n| Ok((n, weighted_error(&exact, &solve_model(&problem, n)?, WeightedNorm::new(-s))?)))
                        .collect::<Result<Vec<_>>>()?;
                    convergence_rows(&mut table, format!("s={s}"), errors);
                }
                Ok(table)
            }))
        }
        Target::HalfLine => {
            let setup = HalfLineSetup::take(config)?;
            let nu_list = config.take_f64_list("nu", vec![1.0])?;
            let n_ref: usize = config.take("n_ref", 2 * n_max)?;
            let grid = Grid::take(config, setup.lambda, false)?;
            for &nu in &nu_list {
                check_nu(nu, setup.mu)?;
            }
            require(n_ref > n_max, "n_ref > max(n_list)")?;
            Ok(Box::new(move || {
                let mut table = Table::new(&header);
                let last = setup.clock.times.len() - 1;
                let t = setup.clock.times[last];
                let exact = catalog::half_line_exact(setup.source, setup.initial, setup.lambda);
                for nu in nu_list {
                    let problem = setup.problem(nu)?;
                    let reference = match exact {
                        Some(_) => None,
                        None => Some(solve_tfde(&problem, &n_ref, setup.clock.h, &setup.clock.times)?),
                    };
                    let errors = n_list
                        .iter()
                        .map(|&n| {
                            let sol = solve_tfde(&problem, &n, setup.clock.h, &setup.clock.times)?;
                            let err = match (&exact, &reference) {
                                (Some(u), _) => max_difference(&grid, |x| sol.eval(x, last), |x| u(x, t)),
                                (None, Some(r)) => max_difference(&grid, |x| sol.eval(x, last), |x| r.eval(x, last)),
                                (None, None) => unreachable!(),
                            };
                            Ok((n, err))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    convergence_rows(&mut table, format!("nu={nu}"), errors);
                }
                Ok(table)
            }))
        }
        Target::WholeLine => {
            let setup = WholeLineSetup::take(config)?;
            let n_ref: usize = config.take("n_ref", 2 * n_max)?;
            let grid = Grid::take(config, setup.lambda, true)?;
            require(n_ref > n_max, "n_ref > max(n_list)")?;
            Ok(Box::new(move || {
                let mut table = Table::new(&header);
                let last = setup.clock.times.len() - 1;
                let reference = setup.solve(n_ref, n_ref)?;
                let errors = n_list
                    .iter()
                    .map(|&n| {
                        let sol = setup.solve(n, n)?;
                        Ok((n, max_difference(&grid, |x| sol.eval(x, last), |x| reference.eval(x, last))))
                    })
                    .collect::<Result<Vec<_>>>()?;
                convergence_rows(&mut table, format!("mu={};p={}", setup.mu, setup.p), errors);
                Ok(table)
            }))
        }
    }
}
