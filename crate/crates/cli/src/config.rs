//! Scenario documents: TOML text in, validated [`Scenario`] out.
//!
//! Overrides of the form `key.path=value` are applied to the parsed
//! document before it is deserialized, so an override naming an unknown
//! key fails exactly like a typo in the file would.

use hetnet_core::scenario::{Scenario, ValidationError};
use serde::Deserialize;
use thiserror::Error;
use toml::{Table, Value};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("malformed scenario: {0}")]
    Parse(String),
    #[error("invalid override `{0}`: expected key=value")]
    Override(String),
    #[error("invalid scenario: {0}")]
    Validation(#[from] ValidationError),
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ConfigError> {
    parse_scenario_with::<&str>(text, &[])
}

pub fn parse_scenario_with<S: AsRef<str>>(text: &str, overrides: &[S]) -> Result<Scenario, ConfigError> {
    let file: Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
    let mut doc = Table::try_from(Scenario::default()).expect("defaults serialize to a table");
    merge(&mut doc, file);
    for o in overrides {
        apply_override(&mut doc, o.as_ref())?;
    }
    let scenario = Scenario::deserialize(doc).map_err(|e| ConfigError::Parse(e.to_string()))?;
    scenario.validate()?;
    Ok(scenario)
}

/// Overlays `file` on `base`. Sections merge key by key; the policy is
/// replaced whole because its two shapes are mutually exclusive.
fn merge(base: &mut Table, file: Table) {
    for (key, value) in file {
        match (base.get_mut(&key), value) {
            (Some(Value::Table(b)), Value::Table(f)) if key != "policy" => merge(b, f),
            (_, v) => {
                base.insert(key, v);
            }
        }
    }
}

/// Sets `key.path=value` inside `doc`, creating intermediate tables.
///
/// The value is read as a TOML value when possible (`5`, `0.4`, `true`,
/// `[0, 42]`, `{ threshold = 9 }`) and as a bare string otherwise, so
/// `topology=coe` works without quotes. For a one-threshold policy,
/// `policy.t_activate` addresses its single threshold.
pub fn apply_override(doc: &mut Table, assignment: &str) -> Result<(), ConfigError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| ConfigError::Override(assignment.to_string()))?;
    let path: Vec<&str> = key.trim().split('.').map(str::trim).collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(ConfigError::Override(assignment.to_string()));
    }
    let value = parse_value(raw.trim());

    let (last, parents) = path.split_last().expect("split yields at least one segment");
    let mut table = doc;
    for seg in parents {
        let entry = table
            .entry(seg.to_string())
            .or_insert_with(|| Value::Table(Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| ConfigError::Override(assignment.to_string()))?;
    }
    let target = if path == ["policy", "t_activate"]
        && table.contains_key("threshold")
        && !table.contains_key("t_deactivate")
    {
        "threshold"
    } else {
        last
    };
    table.insert(target.to_string(), value);
    Ok(())
}

fn parse_value(raw: &str) -> Value {
    format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()))
}

pub fn serialize_scenario(s: &Scenario) -> String {
    toml::to_string(s).expect("scenario always serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use hetnet_core::activity_control::ThresholdPolicy;
    use hetnet_core::scenario::ScenarioTopology;

    #[test]
    fn minimal_document_gets_defaults() {
        let s = parse_scenario("topology = \"udc\"").unwrap();
        assert_eq!(s, Scenario::default());
        assert_eq!(s.n_users, 1000);
        assert_eq!(s.geometry.n_picos, 28);
        assert_eq!(s.p_sleep, 8.6);
        assert_eq!(s.channel.system_bandwidth_hz, 20.0e6);
    }

    #[test]
    fn policy_order_is_checked_with_key() {
        let err = parse_scenario("policy = { t_activate = 5, t_deactivate = 5 }").unwrap_err();
        match err {
            ConfigError::Validation(v) => assert_eq!(v.key, "policy.t_deactivate"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn too_many_hotspot_users() {
        let err = parse_scenario("n_hotspot = 1500\nn_users = 1000").unwrap_err();
        assert!(matches!(err, ConfigError::Validation(ref v) if v.key == "n_hotspot"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(parse_scenario("n_user = 10"), Err(ConfigError::Parse(_))));
        assert!(matches!(
            parse_scenario("[channel]\nbandwith = 1"),
            Err(ConfigError::Parse(_))
        ));
        assert!(matches!(
            parse_scenario_with("", &["mobility.speed=3"]),
            Err(ConfigError::Parse(_))
        ));
    }

    #[test]
    fn malformed_document() {
        assert!(matches!(parse_scenario("topology = "), Err(ConfigError::Parse(_))));
        assert!(matches!(parse_scenario("topology = \"ring\""), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn overrides_apply_before_validation() {
        let s = parse_scenario_with(
            "topology = \"udc\"",
            &["topology=coe", "n_hotspot=200", "activity.uniform_prob=1", "policy={threshold = 7}"],
        )
        .unwrap();
        assert_eq!(s.topology, ScenarioTopology::Coe);
        assert_eq!(s.n_hotspot, 200);
        assert_eq!(s.activity.uniform_prob, 1.0);
        assert_eq!(s.policy, ThresholdPolicy::one_threshold(7));

        let s = parse_scenario_with("policy = { threshold = 9 }", &["policy.t_activate=12"]).unwrap();
        assert_eq!(s.policy, ThresholdPolicy::one_threshold(12));
        let s = parse_scenario_with("", &["policy.t_activate=12"]).unwrap();
        assert_eq!(s.policy, ThresholdPolicy::two_threshold(12, 4).unwrap());
        let s = parse_scenario_with("[channel]\nmacro_tx_power_dbm = 43", &["channel.pico_tx_power_dbm=24"]).unwrap();
        assert_eq!(s.channel.macro_tx_power_dbm, 43.0);
        assert_eq!(s.channel.pico_tx_power_dbm, 24.0);
        assert_eq!(s.channel.macro_antenna_gain_dbi, 14.0);

        assert!(matches!(
            parse_scenario_with("", &["policy.t_activate=3"]),
            Err(ConfigError::Validation(_))
        ));
        assert!(matches!(parse_scenario_with("", &["seed"]), Err(ConfigError::Override(_))));
    }

    #[test]
    fn default_round_trip() {
        let s = Scenario::default();
        assert_eq!(parse_scenario(&serialize_scenario(&s)).unwrap(), s);
    }
}
