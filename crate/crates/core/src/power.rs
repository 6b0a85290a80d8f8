//! Load-dependent eNB power consumption.
//!
//! Active sites draw `N_sec * (P0 + delta_p * P_max * load)` where the load
//! is the served active user count over the site's user capacity, clamped
//! to 1. Sleeping and booting sites draw `N_sec * P_sleep`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerParams {
    pub n_sectors: u32,
    /// Maximum RF output power per sector, W.
    pub p_max: f64,
    /// Supply power at minimum non-zero output, W.
    pub p0: f64,
    pub delta_p: f64,
    pub p_sleep: f64,
    /// Served users corresponding to full RF load.
    pub user_capacity: u32,
}

impl PowerParams {
    /// Three-sector macro: 780 W at zero load, 1350 W at 1000 users.
    pub const fn macro_default() -> Self {
        Self {
            n_sectors: 3,
            p_max: 40.0,
            p0: 260.0,
            delta_p: 4.75,
            p_sleep: 150.0,
            user_capacity: 1000,
        }
    }

    pub const fn pico_default() -> Self {
        Self {
            n_sectors: 1,
            p_max: 0.25,
            p0: 13.6,
            delta_p: 4.0,
            p_sleep: 8.6,
            user_capacity: 50,
        }
    }

    /// Alternate six-transceiver macro fit. Not used by any preset.
    pub const fn earth_macro() -> Self {
        Self {
            n_sectors: 6,
            p_max: 20.0,
            p0: 130.0,
            delta_p: 4.7,
            p_sleep: 75.0,
            user_capacity: 1000,
        }
    }

    /// Alternate two-transceiver pico fit. Not used by any preset.
    pub const fn earth_pico() -> Self {
        Self {
            n_sectors: 2,
            p_max: 0.13,
            p0: 6.8,
            delta_p: 4.0,
            p_sleep: 4.3,
            user_capacity: 50,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.p0 >= 0.0 && self.p0.is_finite()) {
            return Err("p0 must be a finite non-negative number".into());
        }
        if !(self.p_sleep >= 0.0 && self.p_sleep.is_finite()) {
            return Err("p_sleep must be a finite non-negative number".into());
        }
        if !(self.p_max > 0.0 && self.p_max.is_finite()) {
            return Err("p_max must be positive".into());
        }
        if !(self.delta_p >= 0.0 && self.delta_p.is_finite()) {
            return Err("delta_p must be a finite non-negative number".into());
        }
        if self.user_capacity == 0 {
            return Err("user_capacity must be at least 1".into());
        }
        if self.n_sectors == 0 {
            return Err("n_sectors must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnbMode {
    Active(usize),
    Sleep,
    Boot,
}

pub fn consumed_power(params: &PowerParams, mode: EnbMode) -> f64 {
    let sectors = f64::from(params.n_sectors);
    match mode {
        EnbMode::Active(served) => {
            let load = served.min(params.user_capacity as usize) as f64
                / f64::from(params.user_capacity);
            sectors * (params.p0 + params.delta_p * params.p_max * load)
        }
        EnbMode::Sleep | EnbMode::Boot => sectors * params.p_sleep,
    }
}

pub fn slot_energy(power_w: f64, slot_duration_s: f64) -> f64 {
    power_w * slot_duration_s
}
