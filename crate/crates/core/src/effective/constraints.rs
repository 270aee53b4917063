//! Gate-time and shift-cancellation constraints, and their exact solution.

use std::f64::consts::{FRAC_PI_2, TAU};

use super::resonance::{build_vqq, ResonanceCondition};
use super::shifts::dispersive_shifts;
use super::EffectiveError;
use crate::system::SystemParams;
use crate::units::{angular_to_ghz, angular_to_mhz};

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub passed: bool,
    /// Reported only; not part of the overall verdict.
    pub informational: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub condition: ResonanceCondition,
    pub checks: Vec<ConstraintCheck>,
}

impl ConstraintReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.informational || c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&ConstraintCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn relative_check(name: &str, lhs: f64, rhs: f64, rel_tol: f64) -> ConstraintCheck {
    let residual = lhs - rhs;
    let scale = lhs.abs().max(rhs.abs());
    ConstraintCheck {
        name: name.to_string(),
        lhs,
        rhs,
        residual,
        passed: residual.abs() <= rel_tol * scale,
        informational: false,
    }
}

fn exact_check(name: &str, ok: bool, lhs: f64, rhs: f64) -> ConstraintCheck {
    ConstraintCheck { name: name.to_string(), lhs, rhs, residual: lhs - rhs, passed: ok, informational: false }
}

/// Sign s in g₁g₂ = s(w/m)η² and the ratio target g₂²/g₁².
fn cancellation_targets(cond: ResonanceCondition, sys: &SystemParams) -> Option<(f64, f64)> {
    let w = sys.grid.w as f64;
    let (q1, q2) = (sys.grid.q[0] as f64, sys.grid.q[1] as f64);
    match cond.id() {
        7 => Some((1.0, (2.0 + w / q2) / (2.0 + w / q1))),
        9 => Some((-1.0, (2.0 - w / q2) / (2.0 + w / q1))),
        _ => None,
    }
}

/// Checks every constraint attached to `cond` at relative tolerance `rel_tol`.
///
/// Couplings are compared in GHz², shifts and 𝒥 in MHz.
pub fn check_constraints(
    sys: &SystemParams,
    cond: ResonanceCondition,
    rel_tol: f64,
) -> ConstraintReport {
    let (p, q) = (sys.grid.p, sys.grid.q);
    let (s1, s2) = cond.lines();
    let line1 = p[0] + i64::from(s1) * q[0];
    let line2 = p[1] + i64::from(s2) * q[1];
    let mut checks = vec![
        exact_check("resonance", line1 == line2, line1 as f64, line2 as f64),
        exact_check("w", line1 == sys.grid.w, sys.grid.w as f64, line1 as f64),
        exact_check("W-constraint", cond.constraint_holds(q), 1.0, 1.0),
    ];
    checks.push(match sys.check_grid() {
        Ok(()) => exact_check("grid", true, 0.0, 0.0),
        Err(_) => exact_check("grid", false, 1.0, 0.0),
    });

    let eta = angular_to_ghz(sys.eta);
    let g = [angular_to_ghz(sys.qubits[0].g), angular_to_ghz(sys.qubits[1].g)];
    let shifts = dispersive_shifts(sys).ok();
    let coupling = build_vqq(sys, cond).ok().map(|(_, j)| j);
    let tau_m = sys.tau_m();

    if let Some((sign, ratio)) = cancellation_targets(cond, sys) {
        let w = sys.grid.w as f64;
        let m = f64::from(sys.grid.m);
        checks.push(relative_check("g1*g2", g[0] * g[1], sign * w / m * eta * eta, rel_tol));
        checks.push(relative_check("g2^2/g1^2", g[1] * g[1] / (g[0] * g[0]), ratio, rel_tol));
        if let Some(sh) = shifts {
            let (c1, c2) = (angular_to_mhz(sh.lambda[0]), angular_to_mhz(sh.lambda[1]));
            let (name, combo) = if sign > 0.0 { ("chi1-chi2", c1 - c2) } else { ("chi1+chi2", c1 + c2) };
            let scale = c1.abs().max(c2.abs());
            checks.push(ConstraintCheck {
                name: name.to_string(),
                lhs: combo,
                rhs: 0.0,
                residual: combo,
                passed: combo.abs() <= 2.0 * rel_tol * scale,
                informational: false,
            });
        }
        if let Some(j) = coupling {
            checks.push(relative_check("J*tau_m", j * tau_m, sign * FRAC_PI_2, rel_tol));
        }
    }

    if cond.id() == 1 {
        if let Some(sh) = shifts {
            for (k, lam) in sh.lambda.iter().enumerate() {
                let phase = lam * tau_m;
                let nearest = (phase / TAU).round() * TAU;
                checks.push(ConstraintCheck {
                    name: format!("chi{}*tau_m in 2piZ", k + 1),
                    lhs: phase,
                    rhs: nearest,
                    residual: phase - nearest,
                    passed: (phase - nearest).abs() <= rel_tol * TAU,
                    informational: true,
                });
            }
        }
        if let Some(j) = coupling {
            let phi = 8.0 * j * tau_m;
            checks.push(ConstraintCheck {
                name: "phi = 8*J*tau_m".to_string(),
                lhs: phi,
                rhs: phi,
                residual: 0.0,
                passed: true,
                informational: true,
            });
        }
    }
    ConstraintReport { condition: cond, checks }
}

/// Couplings (rad/ns) solving both cancellation equations exactly.
pub fn exact_couplings(sys: &SystemParams, cond: ResonanceCondition) -> Result<(f64, f64), EffectiveError> {
    let (sign, ratio) = cancellation_targets(cond, sys).ok_or(EffectiveError::UnsupportedCondition(cond))?;
    let product = sign * sys.grid.w as f64 / f64::from(sys.grid.m) * sys.eta * sys.eta;
    if product <= 0.0 || ratio <= 0.0 || !ratio.is_finite() {
        return Err(EffectiveError::Infeasible(format!(
            "g1*g2 = {product:.3e}, g2^2/g1^2 = {ratio:.3e} admit no positive couplings"
        )));
    }
    let r = ratio.sqrt();
    Ok(((product / r).sqrt(), (product * r).sqrt()))
}

/// Returns `sys` with both couplings replaced by the exact constraint solution.
pub fn exactify(sys: &SystemParams, cond: ResonanceCondition) -> Result<SystemParams, EffectiveError> {
    let (g1, g2) = exact_couplings(sys, cond)?;
    Ok(sys.with_couplings(g1, g2))
}
