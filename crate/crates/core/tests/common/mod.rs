#![allow(dead_code)]

use rand::Rng;
use sideband::effective::ResonanceCondition;
use sideband::system::{DrivenQubitParams, Grid, SystemParams};
use sideband::units::ghz_to_angular;
use sideband_oracles::Qubit;

pub const ETA_GHZ: f64 = 0.05;
pub const OMEGA_C_GHZ: f64 = 7.0;

fn well_defined(p: i64, q: i64) -> bool {
    p != 0 && q != p.abs() && q != 2 * p.abs()
}

/// Random integer grid on which `cond` is the only resonance and its
/// W-constraint holds.
pub fn random_grid(cond: ResonanceCondition, rng: &mut impl Rng) -> Grid {
    let (s1, s2) = cond.lines();
    loop {
        let q = [rng.gen_range(1..=12i64), rng.gen_range(1..=12i64)];
        let w = rng.gen_range(-25..=25i64);
        if w == 0 {
            continue;
        }
        let p = [w - i64::from(s1) * q[0], w - i64::from(s2) * q[1]];
        if p.iter().any(|x| x.abs() > 30) || !well_defined(p[0], q[0]) || !well_defined(p[1], q[1]) {
            continue;
        }
        if !cond.constraint_holds(q) {
            continue;
        }
        if ResonanceCondition::all().filter(|c| c.holds(p, q)).count() != 1 {
            continue;
        }
        return Grid { p, q, w, m: rng.gen_range(1..=40) };
    }
}

/// System realising `grid` with qubit-drive detunings δⱼ = rⱼWⱼ, |rⱼ| < 1.
pub fn system_on_grid(grid: Grid, detuning_ratio: [f64; 2], g_ghz: [f64; 2], n_max: usize) -> SystemParams {
    let q = |j: usize| {
        let w = grid.q[j] as f64 * ETA_GHZ;
        let wd = OMEGA_C_GHZ - grid.p[j] as f64 * ETA_GHZ;
        let delta = detuning_ratio[j] * w;
        let rabi = 0.5 * (w * w - delta * delta).sqrt();
        DrivenQubitParams::from_ghz(wd + delta, wd, g_ghz[j], rabi, 0.0)
    };
    SystemParams::new([q(0), q(1)], ghz_to_angular(OMEGA_C_GHZ), ghz_to_angular(ETA_GHZ), grid, n_max)
        .expect("valid construction")
}

pub fn oracle_qubits(sys: &SystemParams) -> [Qubit; 2] {
    sys.qubits.map(|q| Qubit { omega: q.omega, omega_d: q.omega_d, g: q.g, rabi: q.rabi, phase: q.phase })
}

pub fn rel_max_diff(a: &nalgebra::DMatrix<num_complex::Complex64>, b: &nalgebra::DMatrix<num_complex::Complex64>) -> f64 {
    sideband_oracles::max_abs(&(a - b)) / sideband_oracles::max_abs(b)
}
