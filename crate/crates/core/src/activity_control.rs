//! Pico sleep control: a Sleep -> Boot -> Active state machine driven by
//! the number of active users inside each pico cell.
//!
//! Two policies are supported. The one-threshold policy wakes a pico when
//! the count reaches `t` and puts it to sleep when the count drops strictly
//! below `t`. The two-threshold policy wakes at `count >= t_activate` and
//! sleeps at `count <= t_deactivate`; the gap between the thresholds is the
//! hysteresis band in which the mode never changes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mobility::UserState;
use crate::power::EnbMode;
use crate::topology::Cell;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolicyError {
    #[error("t_deactivate ({t_deactivate}) must be strictly below t_activate ({t_activate})")]
    InvalidPolicy { t_activate: u32, t_deactivate: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolicyDoc", into = "PolicyDoc")]
pub enum ThresholdPolicy {
    OneThreshold { threshold: u32 },
    TwoThreshold { t_activate: u32, t_deactivate: u32 },
}

impl ThresholdPolicy {
    pub fn one_threshold(threshold: u32) -> Self {
        Self::OneThreshold { threshold }
    }

    pub fn two_threshold(t_activate: u32, t_deactivate: u32) -> Result<Self, PolicyError> {
        let p = Self::TwoThreshold {
            t_activate,
            t_deactivate,
        };
        p.validate()?;
        Ok(p)
    }

    /// A policy that never wakes a pico.
    pub fn never() -> Self {
        Self::OneThreshold { threshold: u32::MAX }
    }

    pub fn validate(&self) -> Result<(), PolicyError> {
        match *self {
            Self::TwoThreshold {
                t_activate,
                t_deactivate,
            } if t_deactivate >= t_activate => Err(PolicyError::InvalidPolicy {
                t_activate,
                t_deactivate,
            }),
            _ => Ok(()),
        }
    }

    pub fn activation_threshold(&self) -> u32 {
        match *self {
            Self::OneThreshold { threshold } => threshold,
            Self::TwoThreshold { t_activate, .. } => t_activate,
        }
    }

    pub fn should_activate(&self, count: usize) -> bool {
        count as u64 >= u64::from(self.activation_threshold())
    }

    pub fn should_deactivate(&self, count: usize) -> bool {
        match *self {
            Self::OneThreshold { threshold } => (count as u64) < u64::from(threshold),
            Self::TwoThreshold { t_deactivate, .. } => count as u64 <= u64::from(t_deactivate),
        }
    }
}

/// Serialized form: either `{ threshold = t }` or
/// `{ t_activate = a, t_deactivate = d }`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_activate: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_deactivate: Option<u32>,
}

impl TryFrom<PolicyDoc> for ThresholdPolicy {
    type Error = String;

    // Ordering of the two thresholds is checked by scenario validation so
    // that it is reported with its key path.
    fn try_from(doc: PolicyDoc) -> Result<Self, Self::Error> {
        match (doc.threshold, doc.t_activate, doc.t_deactivate) {
            (Some(threshold), None, None) => Ok(Self::OneThreshold { threshold }),
            (None, Some(t_activate), Some(t_deactivate)) => Ok(Self::TwoThreshold {
                t_activate,
                t_deactivate,
            }),
            (None, Some(threshold), None) => Ok(Self::OneThreshold { threshold }),
            _ => Err(
                "policy needs either `threshold` or both `t_activate` and `t_deactivate`".into(),
            ),
        }
    }
}

impl From<ThresholdPolicy> for PolicyDoc {
    fn from(p: ThresholdPolicy) -> Self {
        match p {
            ThresholdPolicy::OneThreshold { threshold } => PolicyDoc {
                threshold: Some(threshold),
                ..PolicyDoc::default()
            },
            ThresholdPolicy::TwoThreshold {
                t_activate,
                t_deactivate,
            } => PolicyDoc {
                threshold: None,
                t_activate: Some(t_activate),
                t_deactivate: Some(t_deactivate),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PicoMode {
    Sleep,
    Boot,
    Active,
}

impl PicoMode {
    pub fn label(&self) -> &'static str {
        match self {
            PicoMode::Sleep => "sleep",
            PicoMode::Boot => "boot",
            PicoMode::Active => "active",
        }
    }

    pub fn with_load(self, served: usize) -> EnbMode {
        match self {
            PicoMode::Sleep => EnbMode::Sleep,
            PicoMode::Boot => EnbMode::Boot,
            PicoMode::Active => EnbMode::Active(served),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PicoControlState {
    pub mode: PicoMode,
    /// Non-zero exactly while booting.
    pub boot_remaining: u32,
}

impl PicoControlState {
    pub const fn sleeping() -> Self {
        Self {
            mode: PicoMode::Sleep,
            boot_remaining: 0,
        }
    }

    pub const fn active() -> Self {
        Self {
            mode: PicoMode::Active,
            boot_remaining: 0,
        }
    }
}

impl Default for PicoControlState {
    fn default() -> Self {
        Self::sleeping()
    }
}

/// One slot of the state machine. With `boot_duration == 0` a waking pico
/// goes straight to Active.
pub fn step_state(
    state: PicoControlState,
    active_users_in_range: usize,
    policy: &ThresholdPolicy,
    boot_duration: u32,
) -> PicoControlState {
    match state.mode {
        PicoMode::Sleep if policy.should_activate(active_users_in_range) => {
            if boot_duration == 0 {
                PicoControlState::active()
            } else {
                PicoControlState {
                    mode: PicoMode::Boot,
                    boot_remaining: boot_duration,
                }
            }
        }
        PicoMode::Sleep => state,
        PicoMode::Boot => {
            let remaining = state.boot_remaining.saturating_sub(1);
            if remaining == 0 {
                PicoControlState::active()
            } else {
                PicoControlState {
                    mode: PicoMode::Boot,
                    boot_remaining: remaining,
                }
            }
        }
        PicoMode::Active if policy.should_deactivate(active_users_in_range) => {
            PicoControlState::sleeping()
        }
        PicoMode::Active => state,
    }
}

/// Active users strictly inside the pico disc.
pub fn count_active_in_range(pico: &Cell, users: &[UserState]) -> usize {
    users
        .iter()
        .filter(|u| u.active && pico.contains(&u.pos))
        .count()
}
