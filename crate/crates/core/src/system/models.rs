//! Built-in case-study models.

use std::fmt;
use std::str::FromStr;

use super::{parse_model, TransitionSystem};

const TRAFFIC_LIGHT: &str = include_str!("../../models/traffic_light.model");
const PEDESTRIAN_CROSSING: &str = include_str!("../../models/pedestrian_crossing.model");
const HEART_TEMPLATE: &str = include_str!("../../models/heart_abstract.model");

/// Four-phase intersection controller with an unbounded EW extension branch.
pub fn traffic_light() -> TransitionSystem {
    parse_model(TRAFFIC_LIGHT).expect("built-in model parses")
}

/// Crossing that serves pedestrians only once three are waiting.
pub fn pedestrian_crossing() -> TransitionSystem {
    parse_model(PEDESTRIAN_CROSSING).expect("built-in model parses")
}

/// Conduction configurations of the abstract heart model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeartConfig {
    Healthy,
    AvBlock,
    LbbBlock,
    RbbBlock,
}

impl HeartConfig {
    pub const ALL: [HeartConfig; 4] = [
        HeartConfig::Healthy,
        HeartConfig::AvBlock,
        HeartConfig::LbbBlock,
        HeartConfig::RbbBlock,
    ];

    /// Range of the atrioventricular delay in ticks.
    pub fn av_delay(self) -> (u32, u32) {
        match self {
            HeartConfig::Healthy => (190, 230),
            HeartConfig::AvBlock => (260, 300),
            HeartConfig::LbbBlock => (250, 280),
            HeartConfig::RbbBlock => (230, 270),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HeartConfig::Healthy => "healthy",
            HeartConfig::AvBlock => "av_block",
            HeartConfig::LbbBlock => "lbb_block",
            HeartConfig::RbbBlock => "rbb_block",
        }
    }

    /// Model text for this configuration.
    pub fn source(self) -> String {
        let (lo, hi) = self.av_delay();
        HEART_TEMPLATE
            .replace("CONFIG", self.name())
            .replace("AV_MIN", &lo.to_string())
            .replace("AV_MAX", &hi.to_string())
    }
}

impl fmt::Display for HeartConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HeartConfig {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        HeartConfig::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown heart configuration `{s}`"))
    }
}

pub fn heart_abstract(config: HeartConfig) -> TransitionSystem {
    parse_model(&config.source()).expect("built-in model parses")
}

/// Source text of a built-in model by name, e.g. `traffic_light` or
/// `heart_abstract:av_block`.
pub fn builtin_source(name: &str) -> Option<String> {
    match name {
        "traffic_light" => Some(TRAFFIC_LIGHT.to_string()),
        "pedestrian_crossing" => Some(PEDESTRIAN_CROSSING.to_string()),
        "heart_abstract" => Some(HeartConfig::Healthy.source()),
        _ => {
            let config = name.strip_prefix("heart_abstract:")?;
            config.parse::<HeartConfig>().ok().map(HeartConfig::source)
        }
    }
}

/// Names accepted by [`builtin_source`].
pub const BUILTIN_NAMES: [&str; 6] = [
    "traffic_light",
    "pedestrian_crossing",
    "heart_abstract:healthy",
    "heart_abstract:av_block",
    "heart_abstract:lbb_block",
    "heart_abstract:rbb_block",
];
