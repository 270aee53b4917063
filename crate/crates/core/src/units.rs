//! Conversions between tabulated frequencies (ω/2π) and angular rates.
//!
//! Time is in ns throughout, so an angular frequency is in rad/ns and a
//! frequency given in GHz maps to `2π·f` rad/ns.

use std::f64::consts::TAU;

pub fn ghz_to_angular(f_ghz: f64) -> f64 {
    TAU * f_ghz
}

pub fn angular_to_ghz(w: f64) -> f64 {
    w / TAU
}

pub fn angular_to_mhz(w: f64) -> f64 {
    1e3 * w / TAU
}

/// Interpretation of a decay-rate axis value given in kHz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateConvention {
    /// The value is γ/2π; the rate entering the master equation is `2π·value`.
    OverTwoPi,
    /// The value is the rate γ itself, in units of 10³ s⁻¹.
    Angular,
}

impl RateConvention {
    /// Rate in 1/ns for a value given in kHz.
    pub fn khz_to_per_ns(self, value_khz: f64) -> f64 {
        match self {
            RateConvention::OverTwoPi => TAU * value_khz * 1e-6,
            RateConvention::Angular => value_khz * 1e-6,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            RateConvention::OverTwoPi => "decay rates in kHz as gamma/2pi (rate = 2pi * value)",
            RateConvention::Angular => "decay rates in kHz as gamma (rate = value * 1e3 / s)",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            RateConvention::OverTwoPi => "over_2pi",
            RateConvention::Angular => "angular",
        }
    }
}

impl std::str::FromStr for RateConvention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "over_2pi" => Ok(Self::OverTwoPi),
            "angular" => Ok(Self::Angular),
            other => Err(format!("unknown rate convention `{other}` (expected over_2pi or angular)")),
        }
    }
}

/// Metadata lines describing unit conventions, for embedding in outputs.
pub fn metadata_lines(rates: RateConvention) -> Vec<String> {
    vec![
        "frequencies: GHz as omega/2pi; internal angular rad/ns".to_string(),
        "couplings and shifts: MHz as value/2pi where reported in MHz".to_string(),
        "time: ns".to_string(),
        rates.describe().to_string(),
    ]
}
