//! CSV and JSON writers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use hetnet_core::engine::{ScenarioReport, SlotObserver, SlotOutcome, World};
use hetnet_core::mobility::UserKind;
use hetnet_core::stats::RateHistogram;
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Serialize)]
struct SlotRow {
    slot: u64,
    n_active_picos: f64,
    macro_active_users: f64,
    pico_active_users: f64,
    capacity_bps: f64,
    power_w: f64,
    ee_bits_per_joule: f64,
}

#[derive(Debug, Serialize)]
struct UserRow {
    user_id: usize,
    kind: &'static str,
    mean_rate_bps: f64,
    frac_slots_on_pico: f64,
}

/// One line of a sweep table. `threshold` holds the swept value.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub threshold: f64,
    pub topology: String,
    pub ee_mean: f64,
    pub ee_std: f64,
    pub capacity_mean: f64,
    pub power_mean: f64,
}

#[derive(Debug, Serialize)]
struct HistogramRow {
    bin_lo_bps: f64,
    bin_hi_bps: f64,
    count: u64,
}

fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Per-slot trace averaged across realizations.
pub fn write_slot_csv(path: &Path, report: &ScenarioReport) -> Result<(), CliError> {
    write_rows(
        path,
        report.trace.iter().map(|m| SlotRow {
            slot: m.slot,
            n_active_picos: m.n_active_picos,
            macro_active_users: m.n_macro_served_active,
            pico_active_users: m.n_pico_served_active,
            capacity_bps: m.total_capacity_bps,
            power_w: m.total_power_w,
            ee_bits_per_joule: m.ee_bits_per_joule,
        }),
    )
}

/// Pico layer alone, in the per-slot schema; the macro columns are zero.
pub fn write_pico_only_slot_csv(path: &Path, report: &ScenarioReport) -> Result<(), CliError> {
    write_rows(
        path,
        report.trace.iter().map(|m| SlotRow {
            slot: m.slot,
            n_active_picos: m.n_active_picos,
            macro_active_users: 0.0,
            pico_active_users: m.n_pico_served_active,
            capacity_bps: m.pico_capacity_bps,
            power_w: m.pico_power_w,
            ee_bits_per_joule: m.pico_ee_bits_per_joule,
        }),
    )
}

/// Per-user means over active slots; users never active report 0.
pub fn write_user_csv(path: &Path, report: &ScenarioReport) -> Result<(), CliError> {
    write_rows(
        path,
        report.users.iter().map(|u| UserRow {
            user_id: u.user_id,
            kind: match u.kind {
                Some(UserKind::Hotspot) => "hotspot",
                _ => "uniform",
            },
            mean_rate_bps: u.mean_rate_bps().unwrap_or(0.0),
            frac_slots_on_pico: u.frac_slots_on_pico(),
        }),
    )
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<(), CliError> {
    write_rows(path, rows.iter())
}

pub fn write_histogram_csv(path: &Path, h: &RateHistogram) -> Result<(), CliError> {
    let bins = h.counts.iter().enumerate().map(|(i, &count)| HistogramRow {
        bin_lo_bps: i as f64 * h.bin_width,
        bin_hi_bps: (i + 1) as f64 * h.bin_width,
        count,
    });
    let overflow = HistogramRow {
        bin_lo_bps: h.counts.len() as f64 * h.bin_width,
        bin_hi_bps: f64::INFINITY,
        count: h.overflow,
    };
    write_rows(path, bins.chain(std::iter::once(overflow)))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// Streams user and pico state of realization 0 to CSV as slots complete.
pub struct TraceWriter {
    users: Option<csv::Writer<File>>,
    picos: Option<csv::Writer<File>>,
    error: Option<csv::Error>,
}

#[derive(Serialize)]
struct UserTraceRow {
    slot: u64,
    user_id: usize,
    x: f64,
    y: f64,
    active: bool,
    serving_cell: String,
}

#[derive(Serialize)]
struct PicoTraceRow {
    slot: u64,
    pico_id: usize,
    mode: &'static str,
}

impl TraceWriter {
    pub fn new(users: Option<&Path>, picos: Option<&Path>) -> Result<Self, CliError> {
        Ok(Self {
            users: users.map(csv::Writer::from_path).transpose()?,
            picos: picos.map(csv::Writer::from_path).transpose()?,
            error: None,
        })
    }

    pub fn finish(self) -> Result<(), CliError> {
        if let Some(e) = self.error {
            return Err(e.into());
        }
        for mut w in self.users.into_iter().chain(self.picos) {
            w.flush()?;
        }
        Ok(())
    }

    fn record(&mut self, world: &World, outcome: &SlotOutcome) -> Result<(), csv::Error> {
        let slot = outcome.metrics.slot;
        if let Some(w) = self.users.as_mut() {
            for (u, r) in world.users().iter().zip(&outcome.users) {
                w.serialize(UserTraceRow {
                    slot,
                    user_id: u.id,
                    x: u.pos.x,
                    y: u.pos.y,
                    active: u.active,
                    serving_cell: r.serving.label(),
                })?;
            }
        }
        if let Some(w) = self.picos.as_mut() {
            for (id, state) in world.pico_states().iter().enumerate() {
                w.serialize(PicoTraceRow {
                    slot,
                    pico_id: id,
                    mode: state.mode.label(),
                })?;
            }
        }
        Ok(())
    }
}

impl SlotObserver for TraceWriter {
    fn observe(&mut self, world: &World, outcome: &SlotOutcome) {
        if world.realization() != 0 || self.error.is_some() {
            return;
        }
        if let Err(e) = self.record(world, outcome) {
            self.error = Some(e);
        }
    }
}
