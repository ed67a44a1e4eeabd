//! Built-in scenarios, one annotated TOML file each.

use std::path::Path;

use qpair::{Error, Result};

use crate::config::ScenarioConfig;

const PRESETS: [(&str, &str); 11] = [
    ("fig2a", include_str!("../presets/fig2a.toml")),
    ("fig2b", include_str!("../presets/fig2b.toml")),
    ("fig3", include_str!("../presets/fig3.toml")),
    ("fig4", include_str!("../presets/fig4.toml")),
    ("fig5a", include_str!("../presets/fig5a.toml")),
    ("fig5b", include_str!("../presets/fig5b.toml")),
    ("fig6a", include_str!("../presets/fig6a.toml")),
    ("fig6b", include_str!("../presets/fig6b.toml")),
    ("fig7a", include_str!("../presets/fig7a.toml")),
    ("fig7b", include_str!("../presets/fig7b.toml")),
    ("table1_scan", include_str!("../presets/table1_scan.toml")),
];

/// One row of the preset listing.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetInfo {
    pub name: &'static str,
    pub mode: &'static str,
    pub description: String,
}

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

/// The TOML source of a preset.
pub fn source(name: &str) -> Result<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .ok_or_else(|| Error::Config(format!("unknown preset `{name}`; valid presets: {}", names().join(", "))))
}

pub fn preset(name: &str) -> Result<ScenarioConfig> {
    ScenarioConfig::from_toml(source(name)?)
}

pub fn list_presets() -> Result<Vec<PresetInfo>> {
    PRESETS
        .iter()
        .map(|(name, _)| {
            let c = preset(name)?;
            Ok(PresetInfo {
                name,
                mode: c.run.mode(),
                description: c.description,
            })
        })
        .collect()
}

/// Loads a scenario from a file path, or from a preset when no such file
/// exists.
pub fn load(arg: &str) -> Result<ScenarioConfig> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        let mut c = ScenarioConfig::from_toml(&text)?;
        if c.name.is_empty() {
            c.name = path.file_stem().map_or("scenario".into(), |s| s.to_string_lossy().into_owned());
        }
        return Ok(c);
    }
    source(arg).map_err(|_| {
        Error::Config(format!(
            "`{arg}` is neither a file nor a preset; valid presets: {}",
            names().join(", ")
        ))
    })?;
    preset(arg)
}
