//! `run` and `sweep`.

use std::fs;
use std::path::Path;

use hetnet_core::engine::{run_scenario, run_scenario_observed, RunSummary, ScenarioReport};
use hetnet_core::scenario::Scenario;
use rayon::prelude::*;

use crate::config::{parse_scenario_with, serialize_scenario};
use crate::error::CliError;
use crate::output::{self, SweepRow, TraceWriter};

pub fn sweep_row(value: f64, label: &str, report: &ScenarioReport) -> SweepRow {
    let s = report.summary();
    SweepRow {
        threshold: value,
        topology: label.to_string(),
        ee_mean: s.ee_mean,
        ee_std: s.ee_std,
        capacity_mean: s.capacity_mean,
        power_mean: s.power_mean,
    }
}

/// The same point seen from the pico layer alone.
pub fn pico_only_row(value: f64, label: &str, report: &ScenarioReport) -> SweepRow {
    let s = report.summary();
    SweepRow {
        threshold: value,
        topology: format!("{label}_pico_only"),
        ee_mean: s.pico_ee_mean,
        ee_std: s.pico_ee_std,
        capacity_mean: s.pico_capacity_mean,
        power_mean: s.pico_power_mean,
    }
}

/// Runs one scenario and writes `slots.csv`, `users.csv`, `summary.json`
/// and the resolved `scenario.toml` into `out`, plus the optional traces.
pub fn run(s: &Scenario, out: &Path, trace_users: bool, trace_picos: bool) -> Result<RunSummary, CliError> {
    fs::create_dir_all(out)?;
    let report = if trace_users || trace_picos {
        let users_path = out.join("trace_users.csv");
        let picos_path = out.join("trace_picos.csv");
        let mut tracer = TraceWriter::new(
            trace_users.then_some(users_path.as_path()),
            trace_picos.then_some(picos_path.as_path()),
        )?;
        let report = run_scenario_observed(s, &mut tracer)?;
        tracer.finish()?;
        report
    } else {
        run_scenario(s)?
    };
    let summary = report.summary();
    output::write_slot_csv(&out.join("slots.csv"), &report)?;
    output::write_user_csv(&out.join("users.csv"), &report)?;
    output::write_json(&out.join("summary.json"), &summary)?;
    fs::write(out.join("scenario.toml"), serialize_scenario(s))?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRange {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

impl SweepRange {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        if !(self.step > 0.0) || !self.from.is_finite() || !self.to.is_finite() || self.from > self.to {
            return Err(CliError::Sweep(
                "need finite from <= to and a positive step".into(),
            ));
        }
        let n = ((self.to - self.from) / self.step + 1e-9).floor() as usize;
        Ok((0..=n).map(|i| self.from + i as f64 * self.step).collect())
    }
}

fn format_value(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// Every sweep point is the scenario text with the base overrides plus
/// `param=value`, validated independently. Points run concurrently.
pub fn sweep(text: &str, overrides: &[String], range: &SweepRange) -> Result<Vec<SweepRow>, CliError> {
    let scenarios = range
        .values()?
        .into_iter()
        .map(|v| {
            let mut all = overrides.to_vec();
            all.push(format!("{}={}", range.param, format_value(v)));
            Ok((v, parse_scenario_with(text, &all)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    scenarios
        .par_iter()
        .map(|(v, s)| Ok(sweep_row(*v, s.topology.label(), &run_scenario(s)?)))
        .collect()
}

pub fn write_sweep(out: &Path, rows: &[SweepRow]) -> Result<(), CliError> {
    fs::create_dir_all(out)?;
    output::write_sweep_csv(&out.join("sweep.csv"), rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_values_inclusive() {
        let s = SweepRange {
            param: "x".into(),
            from: 0.0,
            to: 1.0,
            step: 0.1,
        };
        assert_eq!(s.values().unwrap().len(), 11);
        let s = SweepRange { step: 0.0, ..s };
        assert!(s.values().is_err());
    }

    #[test]
    fn integral_values_print_as_integers() {
        assert_eq!(format_value(5.0), "5");
        assert_eq!(format_value(8.6), "8.6");
    }
}
