//! Monte-Carlo experiment drivers and their tabular output.
//!
//! Each realization draws fresh user channels from its own random streams,
//! evaluates every (architecture, pattern, SNR) combination on them, and
//! returns a flat list of samples. Realizations run in parallel; samples
//! are then aggregated in realization order so the output does not depend
//! on the thread count.

mod config;
mod run;
mod table;

pub use config::{ExperimentConfig, Validated, DEFAULT_PHI_MAX, DEFAULT_SEED};
pub use run::{evaluate_realization, replay_from_dump, run_experiment, Sample, Setup};
pub use table::{ResultTable, Row, TABLE_HEADER};

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentId {
    Beampattern,
    UlSingle,
    UlMultiSmall,
    UlMultiLarge,
    Convergence,
    DlMaxMin,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 6] = [
        ExperimentId::Beampattern,
        ExperimentId::UlSingle,
        ExperimentId::UlMultiSmall,
        ExperimentId::UlMultiLarge,
        ExperimentId::Convergence,
        ExperimentId::DlMaxMin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Beampattern => "fig_beampattern",
            Self::UlSingle => "fig_ul_single",
            Self::UlMultiSmall => "fig_ul_multi_small",
            Self::UlMultiLarge => "fig_ul_multi_large",
            Self::Convergence => "fig_convergence",
            Self::DlMaxMin => "fig_dl_maxmin",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Self::Beampattern => "sULA beam magnitude |f(phi, eta)| versus angle",
            Self::UlSingle => "single-user uplink SNR, RAA vs ULA, directional and isotropic",
            Self::UlMultiSmall => "multi-user uplink sum rate, greedy vs exhaustive selection",
            Self::UlMultiLarge => "multi-user uplink sum rate with greedy selection",
            Self::Convergence => "downlink max-min SINR per outer iteration",
            Self::DlMaxMin => "downlink max-min SINR versus transmit SNR",
        }
    }

    pub fn is_multi_user(self) -> bool {
        !matches!(self, Self::Beampattern | Self::UlSingle)
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Architecture {
    Raa,
    Ula,
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Raa => "raa",
            Self::Ula => "ula",
        })
    }
}

impl FromStr for Architecture {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "raa" => Ok(Self::Raa),
            "ula" => Ok(Self::Ula),
            other => Err(format!("unknown architecture '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternKind {
    Directional,
    Isotropic,
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Directional => "directional",
            Self::Isotropic => "isotropic",
        })
    }
}

impl FromStr for PatternKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "directional" => Ok(Self::Directional),
            "isotropic" => Ok(Self::Isotropic),
            other => Err(format!("unknown pattern '{other}'")),
        }
    }
}

/// `(name, description)` for every experiment.
pub fn list_experiments() -> Vec<(&'static str, &'static str)> {
    ExperimentId::ALL
        .iter()
        .map(|e| (e.name(), e.description()))
        .collect()
}
