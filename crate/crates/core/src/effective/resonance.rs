//! The nine centre/sideband resonance conditions and their exchange terms.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use super::EffectiveError;
use crate::operators::{single_qubit, tensor, OperatorMatrix, PauliKind};
use crate::system::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    ControlledPhase,
    CnotClass,
    ISwap,
    DoubleExcitation,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::ControlledPhase => "Controlled-phase",
            GateKind::CnotClass => "CNOT",
            GateKind::ISwap => "iSWAP",
            GateKind::DoubleExcitation => "Double-excitation",
        }
    }
}

/// Resonance between line `s₁` of qubit 1 and line `s₂` of qubit 2, where
/// line `s` sits at Δ + sW.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResonanceCondition(u8);

const LINES: [(i8, i8); 9] =
    [(0, 0), (0, 1), (0, -1), (1, 0), (-1, 0), (1, 1), (-1, -1), (1, -1), (-1, 1)];

impl ResonanceCondition {
    pub fn new(id: u8) -> Result<Self, EffectiveError> {
        if (1..=9).contains(&id) {
            Ok(Self(id))
        } else {
            Err(EffectiveError::UnknownCondition(id.to_string()))
        }
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (1..=9).map(Self)
    }

    pub fn id(self) -> u8 {
        self.0
    }

    /// Line indices `(s₁, s₂)`.
    pub fn lines(self) -> (i8, i8) {
        LINES[usize::from(self.0 - 1)]
    }

    pub fn gate(self) -> GateKind {
        match self.0 {
            1 => GateKind::ControlledPhase,
            2..=5 => GateKind::CnotClass,
            6 | 7 => GateKind::ISwap,
            _ => GateKind::DoubleExcitation,
        }
    }

    /// Whether the resonance equality holds on the integer grid.
    pub fn holds(self, p: [i64; 2], q: [i64; 2]) -> bool {
        let (s1, s2) = self.lines();
        p[0] + i64::from(s1) * q[0] == p[1] + i64::from(s2) * q[1]
    }

    /// The W-constraint that keeps every other condition from holding.
    pub fn constraint_holds(self, q: [i64; 2]) -> bool {
        let (w1, w2) = (q[0], q[1]);
        let pm = |a: i64, b: i64| a != b && a != -b;
        match self.0 {
            1 => pm(w1, w2),
            2 | 3 => pm(w1, w2) && pm(w1, 2 * w2),
            4 | 5 => pm(w1, w2) && pm(2 * w1, w2),
            6 | 7 => w1 != w2 && w1 != 2 * w2 && 2 * w1 != w2,
            _ => w1 != -w2 && w1 != -2 * w2 && 2 * w1 != -w2,
        }
    }

    fn line_name(qubit: u8, s: i8) -> String {
        match s {
            0 => format!("Δ{qubit}"),
            1 => format!("Δ{qubit}⁺"),
            _ => format!("Δ{qubit}⁻"),
        }
    }

    pub fn relation_label(self) -> String {
        let (s1, s2) = self.lines();
        format!("{}={}", Self::line_name(1, s1), Self::line_name(2, s2))
    }

    pub fn constraint_label(self) -> &'static str {
        match self.0 {
            1 => "W₁≠±W₂",
            2 | 3 => "W₁≠±W₂,±2W₂",
            4 | 5 => "W₁≠±W₂,±W₂/2",
            6 | 7 => "W₁≠W₂,2W₂,W₂/2",
            _ => "W₁≠−W₂,−2W₂,−W₂/2",
        }
    }

    /// Interaction at resonant driving, δⱼ = 0.
    pub fn interaction_label(self) -> &'static str {
        match self.0 {
            1 => "−2𝒥σ₁ᶻσ₂ᶻ",
            2 => "𝒥σ₁ᶻσ₂ˣ",
            3 => "−𝒥σ₁ᶻσ₂ˣ",
            4 => "𝒥σ₁ˣσ₂ᶻ",
            5 => "−𝒥σ₁ˣσ₂ᶻ",
            6 | 7 => "−𝒥(σ₁⁺σ₂⁻+σ₁⁻σ₂⁺)",
            _ => "𝒥(σ₁⁺σ₂⁺+σ₁⁻σ₂⁻)",
        }
    }
}

impl fmt::Display for ResonanceCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rc{}", self.0)
    }
}

impl FromStr for ResonanceCondition {
    type Err = EffectiveError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        let digits = t.strip_prefix("rc").unwrap_or(&t);
        digits
            .parse::<u8>()
            .ok()
            .and_then(|id| Self::new(id).ok())
            .ok_or_else(|| EffectiveError::UnknownCondition(s.trim().to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub condition: ResonanceCondition,
    pub holds: bool,
    pub constraints_satisfied: bool,
}

/// Evaluates all nine equalities and their constraints on the grid integers.
pub fn classify_resonance(sys: &SystemParams) -> Vec<Classification> {
    let (p, q) = (sys.grid.p, sys.grid.q);
    ResonanceCondition::all()
        .map(|c| Classification {
            condition: c,
            holds: c.holds(p, q),
            constraints_satisfied: c.constraint_holds(q),
        })
        .collect()
}

/// Operator of line `s` on one qubit: σᶻ, σ⁺ or σ⁻.
fn line_operator(s: i8) -> PauliKind {
    match s {
        0 => PauliKind::Z,
        1 => PauliKind::Plus,
        _ => PauliKind::Minus,
    }
}

/// `−κ(O₁†O₂ + O₂†O₁)` for unit coupling κ = 1 and the lines of `cond`.
pub(crate) fn exchange_structure(cond: ResonanceCondition) -> OperatorMatrix {
    let (s1, s2) = cond.lines();
    let o1 = single_qubit(line_operator(s1));
    let o2 = single_qubit(line_operator(s2));
    let a = tensor(&[&o1.adjoint(), &o2]).expect("two-qubit layout");
    let b = tensor(&[&o1, &o2.adjoint()]).expect("two-qubit layout");
    -(a + b)
}

/// Exchange coupling 𝒥 = g₁g₂/(4μ) for resonant line frequency μ.
pub fn exchange_coupling(g1: f64, g2: f64, mu: f64) -> f64 {
    g1 * g2 / (4.0 * mu)
}

/// Two-qubit interaction and coupling 𝒥 (rad/ns) for a satisfied condition.
///
/// Uses the full off-resonant-drive prefactors, so sinθⱼ and 1 ± cosθⱼ enter.
pub fn build_vqq(
    sys: &SystemParams,
    cond: ResonanceCondition,
) -> Result<(OperatorMatrix, f64), EffectiveError> {
    sys.check_grid()?;
    super::require_zero_phase(sys)?;
    let (p, q) = (sys.grid.p, sys.grid.q);
    if !cond.holds(p, q) {
        return Err(EffectiveError::ConditionNotSatisfied(cond));
    }
    if !cond.constraint_holds(q) {
        return Err(EffectiveError::ConstraintViolated(cond));
    }
    let (s1, s2) = cond.lines();
    let (d1, d2) = (sys.dressed(0), sys.dressed(1));
    let mu = d1.line(s1);
    if (mu / sys.eta).abs() < 0.5 {
        return Err(EffectiveError::ZeroResonantDetuning(cond));
    }
    let j = exchange_coupling(d1.g, d2.g, mu);
    let prefactor = d1.line_amplitude(s1) * d2.line_amplitude(s2);
    Ok((exchange_structure(cond).scale(C64::new(j * prefactor, 0.0)), j))
}

/// Interaction of `cond` at resonant driving with coupling `j`.
pub fn resonant_vqq(cond: ResonanceCondition, j: f64) -> OperatorMatrix {
    let (s1, s2) = cond.lines();
    let amp = |s: i8| match s {
        0 => 1.0,
        1 => -1.0,
        _ => 1.0,
    };
    exchange_structure(cond).scale(C64::new(j * amp(s1) * amp(s2), 0.0))
}
