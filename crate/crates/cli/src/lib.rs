pub mod catalog;
pub mod checks;
pub mod config;
pub mod error;
pub mod experiments;
pub mod table;

use clap::ValueEnum;

pub use config::Config;
pub use error::{CliError, Result};
pub use table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    ModelProblem,
    HalfLine,
    WholeLine,
    Convergence,
    OperatorCheck,
}

fn check_quad_cap() -> Result<()> {
    match std::env::var("TEMPLAG_QUAD_CAP") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 2 => Ok(()),
            _ => error::config_err(format!("TEMPLAG_QUAD_CAP must be an integer >= 2, got {v:?}")),
        },
        Err(_) => Ok(()),
    }
}

type Job = Box<dyn FnOnce() -> Result<(Table, usize)>>;

/// A validated experiment ready to run.
pub struct Plan {
    pub output: String,
    job: Job,
}

fn boxed<F: FnOnce() -> Result<Table> + 'static>(f: F) -> Job {
    Box::new(move || Ok((f()?, 0)))
}

/// Validates the config (all keys consumed, admissibility checked) without running anything.
pub fn plan(experiment: Experiment, mut config: Config) -> Result<Plan> {
    check_quad_cap()?;
    if let Some(named) = config.take_opt::<String>("experiment")? {
        let expected = experiment.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
        if named != expected {
            return error::config_err(format!("config is for experiment {named:?}, but {expected:?} was requested"));
        }
    }
    let output: String = config.take("output", "-".to_string())?;
    let job: Job = match experiment {
        Experiment::ModelProblem => boxed(experiments::model(&mut config)?),
        Experiment::HalfLine => boxed(experiments::half_line(&mut config)?),
        Experiment::WholeLine => boxed(experiments::whole_line(&mut config)?),
        Experiment::Convergence => boxed(experiments::convergence(&mut config)?),
        Experiment::OperatorCheck => Box::new(checks::operator_check(&mut config)?),
    };
    config.finish()?;
    Ok(Plan { output, job })
}

impl Plan {
    /// Runs the experiment and returns its table and the number of failed checks.
    pub fn execute(self) -> Result<(Table, usize)> {
        (self.job)()
    }
}

/// Validates, runs and writes the CSV.
pub fn run(experiment: Experiment, config: Config) -> Result<()> {
    let plan = plan(experiment, config)?;
    let output = plan.output.clone();
    let (table, failures) = plan.execute()?;
    table.write(&output)?;
    if failures > 0 {
        return Err(CliError::Numeric(format!("{failures} identity check(s) failed")));
    }
    Ok(())
}
