//! Validation report and resonance table.

use std::fmt::Write as _;

use sideband::effective::{build_vqq, dispersive_shifts, ResonanceCondition};
use sideband::system::SystemParams;
use sideband::units::{angular_to_ghz, angular_to_mhz};

use crate::output::fmt_sig;

/// One derived quantity, keyed by a stable machine-readable name.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub key: String,
    pub value: f64,
    pub unit: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub condition: ResonanceCondition,
    pub rows: Vec<Row>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn value(&self, key: &str) -> Option<f64> {
        self.rows.iter().find(|r| r.key == key).map(|r| r.value)
    }

    /// `key = value` lines, then warnings as `#` comments.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "condition = {}", self.condition);
        for r in &self.rows {
            let _ = writeln!(s, "{} = {}", r.key, fmt_sig(r.value));
        }
        for w in &self.warnings {
            let _ = writeln!(s, "# warning: {w}");
        }
        s
    }
}

/// Derived quantities of `sys` under `cond`: detunings and sidebands in GHz,
/// 𝒥 and χⱼ in MHz, periods in ns.
pub fn validation_report(sys: &SystemParams, cond: ResonanceCondition) -> ValidationReport {
    let mut rows = Vec::new();
    let mut push = |key: String, value: f64, unit| rows.push(Row { key, value, unit });
    for j in 0..2 {
        let d = sys.dressed(j);
        let n = j + 1;
        push(format!("delta{n}_ghz"), angular_to_ghz(d.big_delta), "GHz");
        push(format!("delta{n}_plus_ghz"), angular_to_ghz(d.big_delta + d.w), "GHz");
        push(format!("delta{n}_minus_ghz"), angular_to_ghz(d.big_delta - d.w), "GHz");
        push(format!("w{n}_ghz"), angular_to_ghz(d.w), "GHz");
        push(format!("g{n}_ghz"), angular_to_ghz(d.g), "GHz");
    }
    let mut warnings = sys.warnings();
    match build_vqq(sys, cond) {
        Ok((_, j)) => push("j_mhz".into(), angular_to_mhz(j), "MHz"),
        Err(e) => warnings.push(format!("J unavailable: {e}")),
    }
    match dispersive_shifts(sys) {
        Ok(sh) => {
            push("chi1_mhz".into(), angular_to_mhz(sh.lambda[0]), "MHz");
            push("chi2_mhz".into(), angular_to_mhz(sh.lambda[1]), "MHz");
        }
        Err(e) => warnings.push(format!("shifts unavailable: {e}")),
    }
    push("tau_ns".into(), sys.tau(), "ns");
    push("tau_m_ns".into(), sys.tau_m(), "ns");
    ValidationReport { condition: cond, rows, warnings }
}

/// All nine resonance conditions with constraint, interaction and gate.
pub fn resonance_table() -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<4} {:<16} {:<14} {:<30} gate", "id", "resonance", "constraint", "interaction");
    for c in ResonanceCondition::all() {
        let _ = writeln!(
            s,
            "{:<4} {:<16} {:<14} {:<30} {}",
            c.id(),
            c.relation_label(),
            c.constraint_label(),
            c.interaction_label(),
            c.gate().name()
        );
    }
    s
}
