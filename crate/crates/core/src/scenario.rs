//! Experiment configuration.
//!
//! A [`Scenario`] is the full, self-contained description of a run. Every
//! field has a default taken from the reference parameter set, so a
//! scenario document only has to name its topology. Validation reports the
//! offending key path.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::activity_control::ThresholdPolicy;
use crate::channel::{ChannelParams, FreeSpaceParams};
use crate::mobility::{ActivityParams, MobilityParams};
use crate::power::PowerParams;
use crate::topology::{build_coe, TopologyKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioTopology {
    #[serde(rename = "monet")]
    MoNet,
    #[serde(rename = "coe")]
    Coe,
    #[serde(rename = "udc")]
    Udc,
    /// Macro-only serving layer over the COE user population.
    #[serde(rename = "monet_coe_users")]
    MoNetWithCoeUsers,
    /// Macro-only serving layer over the UDC user population.
    #[serde(rename = "monet_udc_users")]
    MoNetWithUdcUsers,
}

impl ScenarioTopology {
    pub const ALL: [ScenarioTopology; 5] = [
        ScenarioTopology::MoNet,
        ScenarioTopology::Coe,
        ScenarioTopology::Udc,
        ScenarioTopology::MoNetWithCoeUsers,
        ScenarioTopology::MoNetWithUdcUsers,
    ];

    /// Layout that serves users.
    pub fn serving_kind(&self) -> TopologyKind {
        match self {
            ScenarioTopology::Coe => TopologyKind::Coe,
            ScenarioTopology::Udc => TopologyKind::Udc,
            _ => TopologyKind::MoNet,
        }
    }

    /// Layout that hotspot users are assigned to.
    pub fn user_layout_kind(&self) -> TopologyKind {
        match self {
            ScenarioTopology::MoNet => TopologyKind::MoNet,
            ScenarioTopology::Coe | ScenarioTopology::MoNetWithCoeUsers => TopologyKind::Coe,
            ScenarioTopology::Udc | ScenarioTopology::MoNetWithUdcUsers => TopologyKind::Udc,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ScenarioTopology::MoNet => "monet",
            ScenarioTopology::Coe => "coe",
            ScenarioTopology::Udc => "udc",
            ScenarioTopology::MoNetWithCoeUsers => "monet_coe_users",
            ScenarioTopology::MoNetWithUdcUsers => "monet_udc_users",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.label() == label)
    }
}

impl fmt::Display for ScenarioTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryParams {
    pub macro_radius: f64,
    pub pico_radius: f64,
    pub n_picos: usize,
}

impl Default for GeometryParams {
    fn default() -> Self {
        Self {
            macro_radius: 500.0,
            pico_radius: 50.0,
            n_picos: 28,
        }
    }
}

/// Load model of one site type. Sleep power is configured separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LoadModel {
    pub n_sectors: u32,
    pub p_max: f64,
    pub p0: f64,
    pub delta_p: f64,
    pub user_capacity: u32,
}

impl LoadModel {
    pub fn from_params(p: &PowerParams) -> Self {
        Self {
            n_sectors: p.n_sectors,
            p_max: p.p_max,
            p0: p.p0,
            delta_p: p.delta_p,
            user_capacity: p.user_capacity,
        }
    }

    pub fn with_sleep(&self, p_sleep: f64) -> PowerParams {
        PowerParams {
            n_sectors: self.n_sectors,
            p_max: self.p_max,
            p0: self.p0,
            delta_p: self.delta_p,
            p_sleep,
            user_capacity: self.user_capacity,
        }
    }
}

impl Default for LoadModel {
    fn default() -> Self {
        Self::from_params(&PowerParams::pico_default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PowerSection {
    #[serde(rename = "macro")]
    pub macro_site: LoadModel,
    pub pico: LoadModel,
}

impl Default for PowerSection {
    fn default() -> Self {
        Self {
            macro_site: LoadModel::from_params(&PowerParams::macro_default()),
            pico: LoadModel::from_params(&PowerParams::pico_default()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LegacySection {
    #[serde(rename = "macro")]
    pub macro_site: FreeSpaceParams,
    pub pico: FreeSpaceParams,
}

impl Default for LegacySection {
    fn default() -> Self {
        Self {
            macro_site: FreeSpaceParams::macro_cell(),
            pico: FreeSpaceParams::small_cell(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub topology: ScenarioTopology,
    pub n_users: usize,
    /// Users `0..n_hotspot` are hotspot users, the rest uniform.
    pub n_hotspot: usize,
    pub policy: ThresholdPolicy,
    /// Pico sleep and boot power, W.
    pub p_sleep: f64,
    pub slots: u64,
    pub realizations: u32,
    pub seed: u64,
    pub slot_duration_s: f64,
    pub boot_duration: u32,
    /// Offset-free free-space transmit power accounting; picos stay on.
    pub legacy_mode: bool,
    pub geometry: GeometryParams,
    pub mobility: MobilityParams,
    pub activity: ActivityParams,
    pub channel: ChannelParams,
    pub power: PowerSection,
    pub legacy: LegacySection,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            topology: ScenarioTopology::Udc,
            n_users: 1000,
            n_hotspot: 0,
            policy: ThresholdPolicy::TwoThreshold {
                t_activate: 9,
                t_deactivate: 4,
            },
            p_sleep: PowerParams::pico_default().p_sleep,
            slots: 1000,
            realizations: 1,
            seed: 1,
            slot_duration_s: 1.0,
            boot_duration: 1,
            legacy_mode: false,
            geometry: GeometryParams::default(),
            mobility: MobilityParams::default(),
            activity: ActivityParams::default(),
            channel: ChannelParams::default(),
            power: PowerSection::default(),
            legacy: LegacySection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError {
    pub key: String,
    pub message: String,
}

impl ValidationError {
    fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.key, self.message)
    }
}

impl std::error::Error for ValidationError {}

fn section(prefix: &str, r: Result<(), String>) -> Result<(), ValidationError> {
    r.map_err(|msg| {
        let key = msg
            .split_whitespace()
            .next()
            .filter(|w| w.chars().all(|c| c.is_ascii_lowercase() || c == '_'))
            .map(|w| format!("{prefix}.{w}"))
            .unwrap_or_else(|| prefix.to_string());
        ValidationError::new(key, msg)
    })
}

impl Scenario {
    pub fn macro_power(&self) -> PowerParams {
        self.power
            .macro_site
            .with_sleep(PowerParams::macro_default().p_sleep)
    }

    pub fn pico_power(&self) -> PowerParams {
        self.power.pico.with_sleep(self.p_sleep)
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        if self.n_users == 0 {
            return Err(ValidationError::new("n_users", "must be at least 1"));
        }
        if self.n_hotspot > self.n_users {
            return Err(ValidationError::new(
                "n_hotspot",
                format!("{} exceeds n_users = {}", self.n_hotspot, self.n_users),
            ));
        }
        if self.n_hotspot > 0 && self.topology == ScenarioTopology::MoNet {
            return Err(ValidationError::new(
                "n_hotspot",
                "plain monet has no picos for hotspot users; use monet_coe_users or monet_udc_users",
            ));
        }
        if self.n_hotspot > 0 && self.geometry.n_picos == 0 {
            return Err(ValidationError::new(
                "n_hotspot",
                "hotspot users need geometry.n_picos >= 1",
            ));
        }
        if self.slots == 0 {
            return Err(ValidationError::new("slots", "must be at least 1"));
        }
        if self.realizations == 0 {
            return Err(ValidationError::new("realizations", "must be at least 1"));
        }
        if !(self.slot_duration_s > 0.0 && self.slot_duration_s.is_finite()) {
            return Err(ValidationError::new("slot_duration_s", "must be positive"));
        }
        if !(self.p_sleep >= 0.0 && self.p_sleep.is_finite()) {
            return Err(ValidationError::new("p_sleep", "must be a finite non-negative number"));
        }
        self.policy
            .validate()
            .map_err(|e| ValidationError::new("policy.t_deactivate", e.to_string()))?;

        let g = &self.geometry;
        if !(g.macro_radius > 0.0 && g.macro_radius.is_finite()) {
            return Err(ValidationError::new("geometry.macro_radius", "must be positive"));
        }
        if !(g.pico_radius > 0.0 && g.pico_radius < g.macro_radius) {
            return Err(ValidationError::new(
                "geometry.pico_radius",
                "must be positive and smaller than macro_radius",
            ));
        }
        if self.topology.user_layout_kind() == TopologyKind::Coe {
            build_coe(g.macro_radius, g.pico_radius, g.n_picos)
                .map_err(|e| ValidationError::new("geometry.n_picos", e.to_string()))?;
        }

        section("mobility", self.mobility.validate())?;
        section("activity", self.activity.validate())?;
        section("channel", self.channel.validate())?;
        section("power.macro", self.macro_power().validate())?;
        section("power.pico", self.pico_power().validate())?;
        section("legacy.macro", self.legacy.macro_site.validate())?;
        section("legacy.pico", self.legacy.pico.validate())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let s = Scenario::default();
        s.validate().unwrap();
        assert_eq!(s.n_users, 1000);
        assert_eq!(s.geometry.n_picos, 28);
        assert_eq!(s.p_sleep, 8.6);
        assert_eq!(s.channel.system_bandwidth_hz, 20e6);
        assert_eq!(s.pico_power(), PowerParams::pico_default());
        assert_eq!(s.macro_power(), PowerParams::macro_default());
    }

    #[test]
    fn rejects_bad_values_with_key() {
        let s = Scenario {
            policy: ThresholdPolicy::TwoThreshold {
                t_activate: 5,
                t_deactivate: 5,
            },
            ..Scenario::default()
        };
        assert_eq!(s.validate().unwrap_err().key, "policy.t_deactivate");

        let s = Scenario {
            n_hotspot: 1500,
            ..Scenario::default()
        };
        assert_eq!(s.validate().unwrap_err().key, "n_hotspot");

        let s = Scenario {
            topology: ScenarioTopology::Coe,
            geometry: GeometryParams {
                n_picos: 29,
                ..GeometryParams::default()
            },
            ..Scenario::default()
        };
        assert_eq!(s.validate().unwrap_err().key, "geometry.n_picos");

        let mut s = Scenario::default();
        s.activity.uniform_prob = 1.5;
        assert_eq!(s.validate().unwrap_err().key, "activity.uniform_prob");

        let s = Scenario {
            topology: ScenarioTopology::MoNet,
            n_hotspot: 10,
            ..Scenario::default()
        };
        assert!(s.validate().is_err());
    }

    #[test]
    fn labels_roundtrip() {
        for t in ScenarioTopology::ALL {
            assert_eq!(ScenarioTopology::from_label(t.label()), Some(t));
        }
    }
}
