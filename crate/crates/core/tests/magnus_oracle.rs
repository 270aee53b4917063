//! Second-order period average from nested quadrature against the assembled
//! exchange and dispersive-shift terms, and the vanishing first-order term.

mod common;

use common::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use sideband::effective::{build_effective_hamiltonian, first_order_magnus, ResonanceCondition};
use sideband_oracles as oracle;

fn quadrature_block(sys: &sideband::SystemParams, n: usize) -> nalgebra::DMatrix<num_complex::Complex64> {
    let harm = oracle::harmonics(&oracle_qubits(sys), sys.omega_c, sys.n_max);
    let h2 = oracle::second_order_average(&harm, sys.tau(), 400);
    oracle::traceless(&oracle::photon_block(&h2, n, sys.n_max))
}

#[test]
fn nested_quadrature_matches_effective_hamiltonian() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut cases = 0;
    let mut worst: f64 = 0.0;
    for cond in ResonanceCondition::all() {
        for ratios in [[0.0, 0.0], [0.37, -0.52]] {
            let grid = random_grid(cond, &mut rng);
            let sys = system_on_grid(grid, ratios, [0.021, 0.034], 2);
            for n in 0..2 {
                let oracle_block = quadrature_block(&sys, n);
                let built = build_effective_hamiltonian(&sys, cond, n).unwrap();
                let err = rel_max_diff(built.matrix(), &oracle_block);
                worst = worst.max(err);
                assert!(err <= 1e-6, "{cond} grid {grid:?} delta ratios {ratios:?} n={n}: rel err {err:.3e}");
            }
            cases += 1;
        }
    }
    // Two further grids with unequal detunings on the gate conditions.
    for id in [7, 9] {
        let cond = ResonanceCondition::new(id).unwrap();
        let sys = system_on_grid(random_grid(cond, &mut rng), [-0.21, 0.64], [0.03, 0.017], 2);
        let err = rel_max_diff(build_effective_hamiltonian(&sys, cond, 1).unwrap().matrix(), &quadrature_block(&sys, 1));
        assert!(err <= 1e-6, "{cond}: {err:.3e}");
        cases += 1;
    }
    assert!(cases >= 20);
    eprintln!("magnus oracle: {cases} grids, worst relative error {worst:.2e}");
}

#[test]
fn reference_points_match_quadrature() {
    for (sys, id) in [(sideband::system::presets::rc7(), 7), (sideband::system::presets::rc9(), 9)] {
        let cond = ResonanceCondition::new(id).unwrap();
        let err = rel_max_diff(build_effective_hamiltonian(&sys, cond, 0).unwrap().matrix(), &quadrature_block(&sys, 0));
        assert!(err <= 1e-6, "rc{id}: {err:.3e}");
    }
}

fn condition_strategy() -> impl Strategy<Value = ResonanceCondition> {
    (1u8..=9).prop_map(|id| ResonanceCondition::new(id).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn first_order_vanishes_on_grid(cond in condition_strategy(), seed in any::<u64>(), r1 in -0.9f64..0.9, r2 in -0.9f64..0.9) {
        let mut rng = StdRng::seed_from_u64(seed);
        let sys = system_on_grid(random_grid(cond, &mut rng), [r1, r2], [0.03, 0.02], 2);
        prop_assert!(first_order_magnus(&sys).max_abs() <= 1e-12);
    }

    #[test]
    fn first_order_survives_half_integer_shift(cond in condition_strategy(), seed in any::<u64>(), which in 0usize..4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut sys = system_on_grid(random_grid(cond, &mut rng), [0.0, 0.0], [0.03, 0.02], 2);
        let j = which % 2;
        let half = 0.5 * sys.eta;
        if which < 2 {
            // p_j + 1/2: move the drive and qubit together.
            sys.qubits[j].omega_d -= half;
            sys.qubits[j].omega -= half;
        } else {
            // q_j + 1/2 at resonant driving.
            sys.qubits[j].rabi += 0.5 * half;
        }
        let m = first_order_magnus(&sys);
        prop_assert!(m.max_abs() > 1e-6, "max {:.3e}", m.max_abs());
    }
}

#[test]
fn first_order_agrees_with_quadrature_off_grid() {
    let mut sys = sideband::system::presets::rc9();
    sys.omega_c += 0.3 * sys.eta;
    let harm = oracle::harmonics(&oracle_qubits(&sys), sys.omega_c, sys.n_max);
    let q = oracle::first_order_average(&harm, sys.tau(), 200);
    let err = rel_max_diff(first_order_magnus(&sys).matrix(), &q);
    assert!(err < 1e-10, "{err:.3e}");
}
