//! Enumeration of integer operating points for the iSWAP and
//! double-excitation gates.

use rayon::prelude::*;

use super::constraints::exact_couplings;
use super::resonance::{exchange_coupling, ResonanceCondition};
use super::shifts::resonant_chi;
use super::EffectiveError;
use crate::system::{Grid, SystemError, SystemParams};
use crate::units::{angular_to_ghz, angular_to_mhz, ghz_to_angular};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchBounds {
    pub q_max: i64,
    pub p_max: i64,
    pub m_max: u32,
    /// Inclusive range of w; defaults to ±p_max.
    pub w_range: Option<(i64, i64)>,
    pub eta_ghz: f64,
    pub g_min_ghz: f64,
    pub g_max_ghz: f64,
    pub max_g_over_w: f64,
}

impl SearchBounds {
    pub fn new(q_max: i64, p_max: i64, m_max: u32, eta_ghz: f64) -> Self {
        Self {
            q_max,
            p_max,
            m_max,
            w_range: None,
            eta_ghz,
            g_min_ghz: 1e-3,
            g_max_ghz: 0.1,
            max_g_over_w: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub condition: ResonanceCondition,
    pub grid: Grid,
    pub g_ghz: [f64; 2],
    pub tau_m_ns: f64,
    pub j_mhz: f64,
    pub chi_mhz: [f64; 2],
}

impl Candidate {
    /// Resonantly driven system realising this candidate.
    pub fn to_system(&self, omega_c_ghz: f64, eta_ghz: f64, n_max: usize) -> Result<SystemParams, SystemError> {
        SystemParams::resonant_on_grid(omega_c_ghz, eta_ghz, self.grid, self.g_ghz, n_max)
    }
}

fn well_defined(p: i64, q: i64) -> bool {
    p != 0 && q != p.abs() && q != 2 * p.abs()
}

/// All feasible points, ordered by (τ_m, p₁, p₂, q₁, q₂).
pub fn search_parameters(
    cond: ResonanceCondition,
    bounds: &SearchBounds,
) -> Result<Vec<Candidate>, EffectiveError> {
    if ![7, 9].contains(&cond.id()) {
        return Err(EffectiveError::UnsupportedCondition(cond));
    }
    if bounds.eta_ghz.is_nan() || bounds.eta_ghz <= 0.0 {
        return Err(EffectiveError::Infeasible("eta must be positive".into()));
    }
    let (w_lo, w_hi) = bounds.w_range.unwrap_or((-bounds.p_max, bounds.p_max));
    let (s1, s2) = cond.lines();
    let eta = ghz_to_angular(bounds.eta_ghz);

    let mut out: Vec<Candidate> = (1..=bounds.q_max)
        .into_par_iter()
        .flat_map_iter(|q1| {
            let mut local = Vec::new();
            for q2 in 1..=bounds.q_max {
                let q = [q1, q2];
                if !cond.constraint_holds(q) {
                    continue;
                }
                for w in w_lo..=w_hi {
                    if w == 0 {
                        continue;
                    }
                    let p = [w - i64::from(s1) * q1, w - i64::from(s2) * q2];
                    if p.iter().any(|x| x.abs() > bounds.p_max) || !well_defined(p[0], q1) || !well_defined(p[1], q2) {
                        continue;
                    }
                    let unique = ResonanceCondition::all().filter(|c| c.holds(p, q)).count() == 1;
                    if !unique {
                        continue;
                    }
                    for m in 1..=bounds.m_max {
                        if let Some(c) = evaluate(cond, Grid { p, q, w, m }, eta, bounds) {
                            local.push(c);
                        }
                    }
                }
            }
            local
        })
        .collect();

    out.sort_by(|a, b| {
        a.grid
            .m
            .cmp(&b.grid.m)
            .then(a.grid.p.cmp(&b.grid.p))
            .then(a.grid.q.cmp(&b.grid.q))
    });
    Ok(out)
}

fn evaluate(cond: ResonanceCondition, grid: Grid, eta: f64, bounds: &SearchBounds) -> Option<Candidate> {
    // A placeholder system carries the grid; couplings come from the constraints.
    let sys = SystemParams::resonant_on_grid(10.0, bounds.eta_ghz, grid, [0.0, 0.0], 0).ok()?;
    let (g1, g2) = exact_couplings(&sys, cond).ok()?;
    let g_ghz = [angular_to_ghz(g1), angular_to_ghz(g2)];
    if g_ghz.iter().any(|g| *g < bounds.g_min_ghz || *g > bounds.g_max_ghz) {
        return None;
    }
    let w_ang = [grid.q[0] as f64 * eta, grid.q[1] as f64 * eta];
    if g1 / w_ang[0] > bounds.max_g_over_w || g2 / w_ang[1] > bounds.max_g_over_w {
        return None;
    }
    let mu = grid.w as f64 * eta;
    let j = exchange_coupling(g1, g2, mu);
    let chi = [
        resonant_chi(g1, 0.5 * w_ang[0], grid.p[0] as f64 * eta),
        resonant_chi(g2, 0.5 * w_ang[1], grid.p[1] as f64 * eta),
    ];
    Some(Candidate {
        condition: cond,
        grid,
        g_ghz,
        tau_m_ns: f64::from(grid.m) / bounds.eta_ghz,
        j_mhz: angular_to_mhz(j),
        chi_mhz: chi.map(angular_to_mhz),
    })
}
