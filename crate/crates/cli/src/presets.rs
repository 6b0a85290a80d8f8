//! Named experiment families. Each preset writes its tables into an output
//! directory together with a `manifest.json` from which [`replay`]
//! regenerates byte-identical CSVs.

use std::fs;
use std::path::Path;

use hetnet_core::activity_control::ThresholdPolicy;
use hetnet_core::engine::{run_scenario, ScenarioReport};
use hetnet_core::mobility::{ActivityParams, HotspotStart};
use hetnet_core::scenario::{Scenario, ScenarioTopology};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::commands::{pico_only_row, sweep_row};
use crate::error::CliError;
use crate::output::{self, SweepRow};

pub const PRESETS: [&str; 7] = [
    "table5",
    "fig12_threshold_sweep",
    "fig18_22_sleep_sweep",
    "fig23_26_hotspot_sweep",
    "fig27_28_timeseries",
    "fig29_30_occupancy",
    "fig35_42_policy_compare",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresetOptions {
    pub seed: u64,
    /// Replaces each preset's own realization count when set.
    pub realizations: Option<u32>,
}

impl Default for PresetOptions {
    fn default() -> Self {
        Self {
            seed: 1,
            realizations: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub preset: String,
    pub seed: u64,
    pub realizations: Option<u32>,
    pub grid: Value,
    pub version: String,
}

impl Manifest {
    pub fn options(&self) -> PresetOptions {
        PresetOptions {
            seed: self.seed,
            realizations: self.realizations,
        }
    }
}

pub fn version_string() -> String {
    format!("v{}", env!("CARGO_PKG_VERSION"))
}

pub fn run_preset(name: &str, opts: PresetOptions, out: &Path) -> Result<Manifest, CliError> {
    let grid = match name {
        "table5" => table5(opts, out)?,
        "fig12_threshold_sweep" => threshold_sweep(opts, out)?,
        "fig18_22_sleep_sweep" => sleep_sweep(opts, out)?,
        "fig23_26_hotspot_sweep" => hotspot_sweep(opts, out)?,
        "fig27_28_timeseries" => timeseries(opts, out)?,
        "fig29_30_occupancy" => occupancy(opts, out)?,
        "fig35_42_policy_compare" => policy_compare(opts, out)?,
        other => return Err(CliError::UnknownPreset(other.to_string())),
    };
    let manifest = Manifest {
        preset: name.to_string(),
        seed: opts.seed,
        realizations: opts.realizations,
        grid,
        version: version_string(),
    };
    output::write_json(&out.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

pub fn read_manifest(path: &Path) -> Result<Manifest, CliError> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn replay(manifest: &Path, out: &Path) -> Result<Manifest, CliError> {
    let m = read_manifest(manifest)?;
    run_preset(&m.preset, m.options(), out)
}

const ALWAYS_ON: ActivityParams = ActivityParams {
    uniform_prob: 1.0,
    hotspot_prob: 1.0,
};

/// One-slot snapshots: picos decide and serve within the same slot.
fn snapshot(opts: PresetOptions, default_realizations: u32) -> Scenario {
    Scenario {
        slots: 1,
        realizations: opts.realizations.unwrap_or(default_realizations),
        seed: opts.seed,
        boot_duration: 0,
        ..Scenario::default()
    }
}

/// Full-day runs with hotspot users.
fn day(opts: PresetOptions) -> Scenario {
    Scenario {
        n_hotspot: 500,
        realizations: opts.realizations.unwrap_or(1),
        seed: opts.seed,
        ..Scenario::default()
    }
}

fn run_all(points: &[Scenario]) -> Result<Vec<ScenarioReport>, CliError> {
    points
        .par_iter()
        .map(|s| run_scenario(s).map_err(CliError::from))
        .collect()
}

fn thresholds() -> Vec<u32> {
    (0..=30).collect()
}

const UNIFORM_TOPOLOGIES: [ScenarioTopology; 3] =
    [ScenarioTopology::MoNet, ScenarioTopology::Coe, ScenarioTopology::Udc];

const HOTSPOT_TOPOLOGIES: [ScenarioTopology; 4] = [
    ScenarioTopology::MoNetWithCoeUsers,
    ScenarioTopology::MoNetWithUdcUsers,
    ScenarioTopology::Coe,
    ScenarioTopology::Udc,
];

fn has_picos(t: ScenarioTopology) -> bool {
    matches!(t, ScenarioTopology::Coe | ScenarioTopology::Udc)
}

type TaggedReport = (u32, ScenarioTopology, ScenarioReport);

/// Threshold-by-topology grid under one-threshold control, one table row
/// per point plus pico-only rows for the two-tier layouts.
fn threshold_table(
    base: &Scenario,
    topologies: &[ScenarioTopology],
    ts: &[u32],
) -> Result<(Vec<SweepRow>, Vec<TaggedReport>), CliError> {
    let keys: Vec<(u32, ScenarioTopology)> = ts
        .iter()
        .flat_map(|&t| topologies.iter().map(move |&topo| (t, topo)))
        .collect();
    let points: Vec<Scenario> = keys
        .iter()
        .map(|&(t, topology)| Scenario {
            topology,
            policy: ThresholdPolicy::one_threshold(t),
            ..base.clone()
        })
        .collect();
    let reports = run_all(&points)?;
    let mut rows = Vec::new();
    for (&(t, topo), r) in keys.iter().zip(&reports) {
        rows.push(sweep_row(f64::from(t), topo.label(), r));
    }
    for (&(t, topo), r) in keys.iter().zip(&reports) {
        if has_picos(topo) {
            rows.push(pico_only_row(f64::from(t), topo.label(), r));
        }
    }
    let tagged = keys.into_iter().zip(reports).map(|((t, topo), r)| (t, topo, r)).collect();
    Ok((rows, tagged))
}

fn create(out: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out)?;
    Ok(())
}

fn table5(opts: PresetOptions, out: &Path) -> Result<Value, CliError> {
    create(out)?;
    let base = Scenario {
        p_sleep: 0.0,
        activity: ALWAYS_ON,
        ..snapshot(opts, 100)
    };
    let ts = [0, 8, 13];
    let (rows, _) = threshold_table(&base, &UNIFORM_TOPOLOGIES, &ts)?;
    let rows: Vec<SweepRow> = rows.into_iter().filter(|r| !r.topology.ends_with("_pico_only")).collect();
    output::write_sweep_csv(&out.join("table5.csv"), &rows)?;
    Ok(json!({
        "thresholds": ts,
        "topologies": UNIFORM_TOPOLOGIES.map(|t| t.label()),
        "realizations": base.realizations,
        "slots": 1,
        "p_sleep": 0.0,
        "activity": 1.0,
    }))
}

#[derive(Serialize)]
struct ActivePicoRow {
    threshold: u32,
    topology: &'static str,
    active_picos_mean: f64,
}

fn threshold_sweep(opts: PresetOptions, out: &Path) -> Result<Value, CliError> {
    create(out)?;
    let ts = thresholds();
    let sleeps = [0.0, 8.6];
    for p_sleep in sleeps {
        let base = Scenario {
            p_sleep,
            activity: ALWAYS_ON,
            ..snapshot(opts, 100)
        };
        let (rows, reports) = threshold_table(&base, &UNIFORM_TOPOLOGIES, &ts)?;
        output::write_sweep_csv(&out.join(format!("sweep_psleep_{p_sleep}.csv")), &rows)?;
        if p_sleep == 0.0 {
            let mut w = csv::Writer::from_path(out.join("active_picos.csv"))?;
            for (t, topo, r) in reports.iter().filter(|(_, topo, _)| has_picos(*topo)) {
                w.serialize(ActivePicoRow {
                    threshold: *t,
                    topology: topo.label(),
                    active_picos_mean: r.summary().active_picos_mean,
                })?;
            }
            w.flush()?;
        }
    }
    Ok(json!({
        "thresholds": ts,
        "topologies": UNIFORM_TOPOLOGIES.map(|t| t.label()),
        "p_sleep": sleeps,
        "realizations": opts.realizations.unwrap_or(100),
        "slots": 1,
        "activity": 1.0,
    }))
}

/// Hotspot snapshots: hotspot users start at work inside their pico.
fn hotspot_snapshot(opts: PresetOptions, n_hotspot: usize, p_sleep: f64) -> Scenario {
    let mut s = Scenario {
        n_hotspot,
        p_sleep,
        ..snapshot(opts, 100)
    };
    s.mobility.hotspot_start = HotspotStart::AtWork;
    s
}

fn sleep_sweep(opts: PresetOptions, out: &Path) -> Result<Value, CliError> {
    create(out)?;
    let ts = thresholds();
    let sleeps = [0.0, 2.0, 4.0, 6.0, 8.6];
    for p_sleep in sleeps {
        let base = hotspot_snapshot(opts, 500, p_sleep);
        let (rows, _) = threshold_table(&base, &HOTSPOT_TOPOLOGIES, &ts)?;
        output::write_sweep_csv(&out.join(format!("sweep_psleep_{p_sleep}.csv")), &rows)?;
    }
    Ok(json!({
        "thresholds": ts,
        "topologies": HOTSPOT_TOPOLOGIES.map(|t| t.label()),
        "p_sleep": sleeps,
        "n_hotspot": 500,
        "hotspot_start": "at_work",
        "realizations": opts.realizations.unwrap_or(100),
        "slots": 1,
    }))
}

fn hotspot_sweep(opts: PresetOptions, out: &Path) -> Result<Value, CliError> {
    create(out)?;
    let ts = thresholds();
    let counts = [250usize, 750];
    let sleeps = [0.0, 8.6];
    for n in counts {
        for p_sleep in sleeps {
            let base = hotspot_snapshot(opts, n, p_sleep);
            let (rows, _) = threshold_table(&base, &HOTSPOT_TOPOLOGIES, &ts)?;
            output::write_sweep_csv(
                &out.join(format!("sweep_hotspot_{n}_psleep_{p_sleep}.csv")),
                &rows,
            )?;
        }
    }
    let hist_ts = [5u32, 21, 27];
    let base = hotspot_snapshot(opts, 500, 8.6);
    let (_, reports) = threshold_table(&base, &HOTSPOT_TOPOLOGIES, &hist_ts)?;
    for (t, topo, r) in &reports {
        output::write_histogram_csv(
            &out.join(format!("hist_{}_t{t}.csv", topo.label())),
            &r.sample_histogram,
        )?;
    }
    Ok(json!({
        "thresholds": ts,
        "topologies": HOTSPOT_TOPOLOGIES.map(|t| t.label()),
        "n_hotspot": counts,
        "p_sleep": sleeps,
        "histogram_thresholds": hist_ts,
        "histogram_n_hotspot": 500,
        "hotspot_start": "at_work",
        "realizations": opts.realizations.unwrap_or(100),
        "slots": 1,
    }))
}

fn write_day(out: &Path, stem: &str, topo: ScenarioTopology, r: &ScenarioReport) -> Result<(), CliError> {
    output::write_slot_csv(&out.join(format!("slots_{stem}.csv")), r)?;
    if has_picos(topo) {
        output::write_pico_only_slot_csv(&out.join(format!("slots_{stem}_pico_only.csv")), r)?;
    }
    Ok(())
}

fn timeseries(opts: PresetOptions, out: &Path) -> Result<Value, CliError> {
    create(out)?;
    let sleeps = [0.0, 8.6];
    let keys: Vec<(f64, ScenarioTopology)> = sleeps
        .iter()
        .flat_map(|&p| HOTSPOT_TOPOLOGIES.iter().map(move |&t| (p, t)))
        .collect();
    let points: Vec<Scenario> = keys
        .iter()
        .map(|&(p_sleep, topology)| Scenario {
            topology,
            p_sleep,
            ..day(opts)
        })
        .collect();
    let reports = run_all(&points)?;
    for (&(p, topo), r) in keys.iter().zip(&reports) {
        write_day(out, &format!("{}_psleep_{p}", topo.label()), topo, r)?;
    }
    let base = day(opts);
    Ok(json!({
        "topologies": HOTSPOT_TOPOLOGIES.map(|t| t.label()),
        "p_sleep": sleeps,
        "policy": base.policy,
        "n_hotspot": base.n_hotspot,
        "slots": base.slots,
        "realizations": base.realizations,
    }))
}

/// Policy used for the occupancy traces: without a hysteresis band a pico
/// sleeps as soon as its crowd falls below the wake level.
pub fn occupancy_policy() -> ThresholdPolicy {
    ThresholdPolicy::one_threshold(9)
}

fn occupancy(opts: PresetOptions, out: &Path) -> Result<Value, CliError> {
    create(out)?;
    let topologies = [ScenarioTopology::Udc, ScenarioTopology::Coe];
    let points: Vec<Scenario> = topologies
        .iter()
        .map(|&topology| Scenario {
            topology,
            policy: occupancy_policy(),
            ..day(opts)
        })
        .collect();
    let reports = run_all(&points)?;
    for (topo, r) in topologies.iter().zip(&reports) {
        output::write_slot_csv(&out.join(format!("slots_{}.csv", topo.label())), r)?;
        output::write_user_csv(&out.join(format!("users_{}.csv", topo.label())), r)?;
    }
    Ok(json!({
        "topologies": topologies.map(|t| t.label()),
        "policy": occupancy_policy(),
        "n_hotspot": points[0].n_hotspot,
        "slots": points[0].slots,
        "realizations": points[0].realizations,
    }))
}

#[derive(Serialize)]
struct PolicyRow {
    t_activate: u32,
    t_deactivate: u32,
    p_sleep: f64,
    topology: &'static str,
    ee_mean: f64,
    ee_std: f64,
    capacity_mean: f64,
    power_mean: f64,
}

fn policy_compare(opts: PresetOptions, out: &Path) -> Result<Value, CliError> {
    create(out)?;
    let pairs = [(5u32, 4u32), (9, 4), (9, 8), (12, 11)];
    let sleeps = [0.0, 8.6];
    let mut keys = Vec::new();
    for &(a, d) in &pairs {
        for &p in &sleeps {
            for &t in &HOTSPOT_TOPOLOGIES {
                keys.push((a, d, p, t));
            }
        }
    }
    let points = keys
        .iter()
        .map(|&(a, d, p_sleep, topology)| {
            Ok(Scenario {
                topology,
                p_sleep,
                policy: ThresholdPolicy::two_threshold(a, d)
                    .map_err(|e| CliError::Sweep(e.to_string()))?,
                ..day(opts)
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let reports = run_all(&points)?;
    let mut w = csv::Writer::from_path(out.join("summary.csv"))?;
    for (&(a, d, p, topo), r) in keys.iter().zip(&reports) {
        write_day(out, &format!("{}_a{a}_d{d}_psleep_{p}", topo.label()), topo, r)?;
        let s = r.summary();
        w.serialize(PolicyRow {
            t_activate: a,
            t_deactivate: d,
            p_sleep: p,
            topology: topo.label(),
            ee_mean: s.ee_mean,
            ee_std: s.ee_std,
            capacity_mean: s.capacity_mean,
            power_mean: s.power_mean,
        })?;
    }
    w.flush()?;
    Ok(json!({
        "policies": pairs.map(|(a, d)| json!({"t_activate": a, "t_deactivate": d})),
        "topologies": HOTSPOT_TOPOLOGIES.map(|t| t.label()),
        "p_sleep": sleeps,
        "n_hotspot": 500,
        "slots": points[0].slots,
        "realizations": points[0].realizations,
    }))
}
