//! Downlink link budget: distance path loss, lognormal shadowing, thermal
//! noise over the user's bandwidth share and Shannon capacity.
//!
//! All dB quantities reference 1 mW (dBm) and use base-10 conversions.
//! The legacy free-space transmit-power model used by the early,
//! offset-free experiments lives at the bottom of the module.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::topology::CellKind;

/// Distances below this are evaluated at this value; the log-distance
/// formulas diverge at zero.
pub const MIN_DISTANCE_M: f64 = 1.0;

pub const BOLTZMANN: f64 = 1.380649e-23;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("link distance must be positive, got {0} m")]
    NonPositiveDistance(f64),
    #[error("bandwidth share must be positive, got {0} Hz")]
    NonPositiveBandwidth(f64),
    #[error("bandwidth cannot be shared among zero users")]
    ZeroUsers,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelParams {
    pub macro_tx_power_dbm: f64,
    pub pico_tx_power_dbm: f64,
    pub macro_antenna_gain_dbi: f64,
    pub pico_antenna_gain_dbi: f64,
    pub ue_antenna_gain_dbi: f64,
    pub macro_shadow_std_db: f64,
    pub pico_shadow_std_db: f64,
    pub system_bandwidth_hz: f64,
    pub temperature_k: f64,
    pub boltzmann: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            macro_tx_power_dbm: 46.0,
            pico_tx_power_dbm: 30.0,
            macro_antenna_gain_dbi: 14.0,
            pico_antenna_gain_dbi: 5.0,
            ue_antenna_gain_dbi: 0.0,
            macro_shadow_std_db: 8.0,
            pico_shadow_std_db: 10.0,
            system_bandwidth_hz: 20e6,
            temperature_k: 290.0,
            boltzmann: BOLTZMANN,
        }
    }
}

impl ChannelParams {
    pub fn tx_power_dbm(&self, kind: CellKind) -> f64 {
        match kind {
            CellKind::Macro => self.macro_tx_power_dbm,
            CellKind::Pico => self.pico_tx_power_dbm,
        }
    }

    pub fn antenna_gain_dbi(&self, kind: CellKind) -> f64 {
        match kind {
            CellKind::Macro => self.macro_antenna_gain_dbi,
            CellKind::Pico => self.pico_antenna_gain_dbi,
        }
    }

    pub fn shadow_std_db(&self, kind: CellKind) -> f64 {
        match kind {
            CellKind::Macro => self.macro_shadow_std_db,
            CellKind::Pico => self.pico_shadow_std_db,
        }
    }

    /// Returns a description of the first invalid field.
    pub fn validate(&self) -> Result<(), String> {
        let finite = [
            ("macro_tx_power_dbm", self.macro_tx_power_dbm),
            ("pico_tx_power_dbm", self.pico_tx_power_dbm),
            ("macro_antenna_gain_dbi", self.macro_antenna_gain_dbi),
            ("pico_antenna_gain_dbi", self.pico_antenna_gain_dbi),
            ("ue_antenna_gain_dbi", self.ue_antenna_gain_dbi),
        ];
        for (key, v) in finite {
            if !v.is_finite() {
                return Err(format!("{key} must be finite"));
            }
        }
        let non_negative = [
            ("macro_shadow_std_db", self.macro_shadow_std_db),
            ("pico_shadow_std_db", self.pico_shadow_std_db),
        ];
        for (key, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(format!("{key} must be a finite non-negative number"));
            }
        }
        let positive = [
            ("system_bandwidth_hz", self.system_bandwidth_hz),
            ("temperature_k", self.temperature_k),
            ("boltzmann", self.boltzmann),
        ];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{key} must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub path_loss_db: f64,
    pub shadow_db: f64,
    pub rx_power_dbm: f64,
    pub noise_power_dbm: f64,
    pub snr_linear: f64,
    pub capacity_bps: f64,
    pub bandwidth_share_hz: f64,
}

/// Log-distance path loss at 2 GHz: macro `140.7 + 36.7 log10(d_km)`,
/// pico `128.1 + 37.6 log10(d_km)`.
pub fn path_loss_db(kind: CellKind, distance_m: f64) -> Result<f64, ChannelError> {
    if !(distance_m > 0.0) {
        return Err(ChannelError::NonPositiveDistance(distance_m));
    }
    let d_km = distance_m.max(MIN_DISTANCE_M) / 1000.0;
    Ok(match kind {
        CellKind::Macro => 140.7 + 36.7 * d_km.log10(),
        CellKind::Pico => 128.1 + 37.6 * d_km.log10(),
    })
}

/// Zero-mean Gaussian in dB with the kind's shadowing deviation.
pub fn sample_shadow_db<R: Rng + ?Sized>(kind: CellKind, params: &ChannelParams, rng: &mut R) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    params.shadow_std_db(kind) * z
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * (watts / 1e-3).log10()
}

/// Thermal noise `k T w` in dBm.
pub fn noise_power_dbm(bandwidth_hz: f64, params: &ChannelParams) -> f64 {
    watts_to_dbm(params.boltzmann * params.temperature_k * bandwidth_hz)
}

pub fn shannon_capacity(bandwidth_hz: f64, snr_linear: f64) -> f64 {
    bandwidth_hz * (1.0 + snr_linear).log2()
}

pub fn evaluate_link(
    kind: CellKind,
    distance_m: f64,
    bandwidth_share_hz: f64,
    shadow_db: f64,
    params: &ChannelParams,
) -> Result<LinkBudget, ChannelError> {
    if !(bandwidth_share_hz > 0.0) {
        return Err(ChannelError::NonPositiveBandwidth(bandwidth_share_hz));
    }
    let path_loss = path_loss_db(kind, distance_m)?;
    let rx = params.tx_power_dbm(kind) + params.antenna_gain_dbi(kind) + params.ue_antenna_gain_dbi
        - path_loss
        + shadow_db;
    let noise = noise_power_dbm(bandwidth_share_hz, params);
    let snr_linear = 10f64.powf((rx - noise) / 10.0);
    Ok(LinkBudget {
        path_loss_db: path_loss,
        shadow_db,
        rx_power_dbm: rx,
        noise_power_dbm: noise,
        snr_linear,
        capacity_bps: shannon_capacity(bandwidth_share_hz, snr_linear),
        bandwidth_share_hz,
    })
}

/// Equal bandwidth share `W / N` over the configured population.
pub fn user_bandwidth(total_bandwidth_hz: f64, n_total_users: usize) -> Result<f64, ChannelError> {
    if n_total_users == 0 {
        return Err(ChannelError::ZeroUsers);
    }
    Ok(total_bandwidth_hz / n_total_users as f64)
}

/// Parameters of the legacy distance-only transmit power model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeSpaceParams {
    pub alpha: f64,
    pub beta: f64,
    pub breakpoint_m: f64,
    pub k: f64,
    /// Target received power, W.
    pub target_rx_w: f64,
    /// Transmit power cap, W.
    pub max_tx_w: f64,
}

impl FreeSpaceParams {
    pub fn small_cell() -> Self {
        Self {
            alpha: 1.8,
            beta: 1.8,
            breakpoint_m: 300.0,
            k: 1.0,
            target_rx_w: 0.8e-6,
            max_tx_w: 1.0,
        }
    }

    pub fn macro_cell() -> Self {
        Self {
            alpha: 2.0,
            beta: 2.0,
            breakpoint_m: 600.0,
            k: 1.0,
            target_rx_w: 0.8e-6,
            max_tx_w: 1.0,
        }
    }

    pub fn for_kind(kind: CellKind) -> Self {
        match kind {
            CellKind::Macro => Self::macro_cell(),
            CellKind::Pico => Self::small_cell(),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.alpha >= 0.0 && self.beta >= 0.0) {
            return Err("alpha and beta must be non-negative".into());
        }
        if !(self.breakpoint_m > 0.0 && self.k > 0.0) {
            return Err("breakpoint_m and k must be positive".into());
        }
        if !(self.target_rx_w >= 0.0 && self.max_tx_w > 0.0) {
            return Err("target_rx_w must be non-negative and max_tx_w positive".into());
        }
        Ok(())
    }

    fn attenuation(&self, r: f64) -> f64 {
        r.powf(self.alpha) * (1.0 + r / self.breakpoint_m).powf(self.beta)
    }
}

/// `P_rx = P_tx K / (r^alpha (1 + r/g)^beta)`.
pub fn freespace_rx_power(tx_w: f64, r: f64, p: &FreeSpaceParams) -> Result<f64, ChannelError> {
    if !(r > 0.0) {
        return Err(ChannelError::NonPositiveDistance(r));
    }
    Ok(tx_w * p.k / p.attenuation(r))
}

/// Transmit power needed to deliver the target received power, capped at
/// `max_tx_w`.
pub fn freespace_tx_power(r: f64, p: &FreeSpaceParams) -> Result<f64, ChannelError> {
    if !(r > 0.0) {
        return Err(ChannelError::NonPositiveDistance(r));
    }
    Ok(p.max_tx_w.min(p.target_rx_w * p.attenuation(r) / p.k))
}
