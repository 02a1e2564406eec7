use std::fmt;
use std::str::FromStr;

use templag_core::oracle::Callable1D;
use templag_core::solvers::{LineFunction, Separable};
use templag_core::specfun::gamma;

use crate::error::{config_err, CliError, Result};

/// Named data sets for sources and initial conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entry {
    ESinx,
    CaseI,
    CaseII,
    CaseIII,
    ZeroF,
    Gaussian,
    ExpAbs,
}

const NAMES: [(&str, Entry); 7] = [
    ("e-sinx", Entry::ESinx),
    ("case-i", Entry::CaseI),
    ("case-ii", Entry::CaseII),
    ("case-iii", Entry::CaseIII),
    ("zero-f", Entry::ZeroF),
    ("gaussian", Entry::Gaussian),
    ("exp-abs", Entry::ExpAbs),
];

impl FromStr for Entry {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        NAMES.iter().find(|(n, _)| *n == s).map(|(_, e)| *e).ok_or_else(|| {
            let all: Vec<&str> = NAMES.iter().map(|(n, _)| *n).collect();
            CliError::Config(format!("unknown catalog entry {s:?} (known: {})", all.join(", ")))
        })
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = NAMES.iter().find(|(_, e)| e == self).map(|(n, _)| *n).unwrap_or("?");
        f.write_str(name)
    }
}

fn unavailable<T>(role: &str, entry: Entry, allowed: &[Entry]) -> Result<T> {
    let names: Vec<String> = allowed.iter().map(Entry::to_string).collect();
    config_err(format!("{role} {entry} is not available here (choose one of: {})", names.join(", ")))
}

fn gaussian_decay() -> f64 {
    2.0
}

/// f(x) for the model problem.
pub fn model_source(entry: Entry) -> Result<Callable1D> {
    Ok(match entry {
        Entry::ESinx => Callable1D::new(|y: f64| (-y).exp() * y.sin()).with_decay(1.0).with_origin_power(1.0),
        Entry::ExpAbs => Callable1D::new(|y: f64| (-y).exp()).with_decay(1.0),
        Entry::Gaussian => Callable1D::new(|y: f64| (-y * y).exp()).with_decay(gaussian_decay()),
        Entry::ZeroF => Callable1D::new(|_| 0.0).with_decay(1.0),
        other => return unavailable("model source", other, &[Entry::ESinx, Entry::ExpAbs, Entry::Gaussian, Entry::ZeroF]),
    })
}

/// f(x, t) on the half line.
pub fn half_line_source(entry: Entry, mu: f64, lambda: f64) -> Result<Separable<Callable1D>> {
    let phi = move || Callable1D::new(move |x: f64| x * (-lambda * x).exp()).with_decay(lambda).with_origin_power(1.0);
    Ok(match entry {
        Entry::CaseI => {
            let c = gamma(2.0).map_err(CliError::from)? / gamma(2.0 - mu).map_err(CliError::from)?;
            Separable::zero()
                .term(|t: f64| -t.sin(), phi())
                .term(
                    move |t: f64| c * t.cos(),
                    Callable1D::new(move |x: f64| x.powf(1.0 - mu) * (-lambda * x).exp())
                        .with_decay(lambda)
                        .with_origin_power(1.0 - mu),
                )
                .term(move |t: f64| -lambda.powf(mu) * t.cos(), phi())
        }
        Entry::CaseII => Separable::zero().term(|t: f64| t.sin(), Callable1D::new(|x: f64| x.cos() * (-x).exp()).with_decay(1.0)),
        Entry::Gaussian => Separable::zero()
            .term(|t: f64| t.cos(), Callable1D::new(|x: f64| (-x * x).exp()).with_decay(gaussian_decay())),
        Entry::ZeroF => Separable::zero(),
        other => return unavailable("half-line source", other, &[Entry::CaseI, Entry::CaseII, Entry::Gaussian, Entry::ZeroF]),
    })
}

/// u₀(x) on the half line.
pub fn half_line_initial(entry: Entry, lambda: f64) -> Result<Callable1D> {
    Ok(match entry {
        Entry::CaseI => Callable1D::new(move |x: f64| x * (-lambda * x).exp()).with_decay(lambda).with_origin_power(1.0),
        Entry::CaseIII => Callable1D::new(|x: f64| x * (-x).exp()).with_decay(1.0).with_origin_power(1.0),
        Entry::ZeroF => Callable1D::new(|_| 0.0),
        other => return unavailable("half-line initial condition", other, &[Entry::CaseI, Entry::CaseIII, Entry::ZeroF]),
    })
}

/// Exact half-line solution when the catalog provides one.
pub fn half_line_exact(source: Entry, initial: Entry, lambda: f64) -> Option<impl Fn(f64, f64) -> f64> {
    (source == Entry::CaseI && initial == Entry::CaseI).then_some(move |x: f64, t: f64| x * (-lambda * x).exp() * t.cos())
}

/// f(x, t) on the whole line.
pub fn whole_line_source(entry: Entry) -> Result<Separable<LineFunction>> {
    Ok(match entry {
        Entry::Gaussian => Separable::zero().term(
            |t: f64| t.cos(),
            LineFunction::even(Callable1D::new(|r: f64| (-r * r).exp()).with_decay(gaussian_decay())),
        ),
        Entry::ZeroF => Separable::zero(),
        other => return unavailable("whole-line source", other, &[Entry::Gaussian, Entry::ZeroF]),
    })
}

/// u₀(x) on the whole line.
pub fn whole_line_initial(entry: Entry) -> Result<LineFunction> {
    Ok(match entry {
        Entry::ExpAbs => LineFunction::even(Callable1D::new(|r: f64| 10.0 * (-5.0 * r).exp()).with_decay(5.0)),
        Entry::Gaussian => LineFunction::even(Callable1D::new(|r: f64| 10.0 * (-4.0 * r * r).exp()).with_decay(gaussian_decay())),
        Entry::ZeroF => LineFunction::even(Callable1D::new(|_| 0.0)),
        other => return unavailable("whole-line initial condition", other, &[Entry::ExpAbs, Entry::Gaussian, Entry::ZeroF]),
    })
}
