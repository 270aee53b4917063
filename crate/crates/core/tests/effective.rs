mod common;

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, TAU};

use common::*;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use sideband::effective::*;
use sideband::operators::{BasisDescriptor, OperatorMatrix, TwoQubitState};
use sideband::system::{presets, Dressed};
use sideband::units::angular_to_mhz;
use sideband_oracles as oracle;

const ETA: f64 = TAU * ETA_GHZ;

fn h_oracle(mu: f64, mu_prime: f64, tau: f64) -> C64 {
    let i = oracle::nested_integrals(&[-mu, mu_prime], tau, 200, 10);
    i[(0, 1)] / C64::new(0.0, 2.0 * tau)
}

proptest! {
    #[test]
    fn f_integral_matches_quadrature(mu in -20.0f64..20.0) {
        let tau = TAU / ETA;
        let q = oracle::integrate(|t| C64::from_polar(1.0, mu * t), 0.0, tau, 200, 10) / tau;
        prop_assert!((f_integral(mu, tau) - q).norm() <= 1e-11);
    }

    #[test]
    fn h_integral_matches_nested_quadrature(a in -30i64..30, b in -30i64..30, da in -0.5f64..0.5, db in -0.5f64..0.5) {
        let tau = TAU / ETA;
        for (mu, mup) in [(a as f64 * ETA, b as f64 * ETA), ((a as f64 + da) * ETA, (b as f64 + db) * ETA)] {
            match h_integral(mu, mup, tau) {
                Ok(h) => {
                    let scale = 1.0 / mu.abs().max(mup.abs()).max(ETA);
                    prop_assert!((h - h_oracle(mu, mup, tau)).norm() <= 1e-9 * scale);
                }
                Err(EffectiveError::UndefinedIntegral) => prop_assert!(mu == 0.0 && mup == 0.0),
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }
    }

    #[test]
    fn h_on_lattice(a in -30i64..30, b in -30i64..30) {
        prop_assume!(a != 0 || b != 0);
        let tau = TAU / ETA;
        let (mu, mup) = (a as f64 * ETA, b as f64 * ETA);
        let h = h_integral(mu, mup, tau).unwrap();
        let expected = if a == b {
            -1.0 / (2.0 * mu)
        } else if b == 0 {
            1.0 / (2.0 * mu)
        } else if a == 0 {
            1.0 / (2.0 * mup)
        } else {
            0.0
        };
        prop_assert!((h - C64::new(expected, 0.0)).norm() <= 1e-12 / ETA);
    }

    #[test]
    fn at_most_one_condition_survives_its_constraint(p1 in -30i64..30, p2 in -30i64..30, q1 in 1i64..15, q2 in 1i64..15) {
        let (p, q) = ([p1, p2], [q1, q2]);
        let holding: Vec<_> = ResonanceCondition::all().filter(|c| c.holds(p, q)).collect();
        for c in &holding {
            if c.constraint_holds(q) {
                prop_assert_eq!(holding.len(), 1, "{} at p={:?} q={:?} alongside {:?}", c, p, q, holding);
            }
        }
    }
}

#[test]
fn undefined_integral_at_double_zero() {
    assert_eq!(h_integral(0.0, 0.0, 20.0), Err(EffectiveError::UndefinedIntegral));
}

fn dressed(p: i64, q: i64, delta_ratio: f64) -> Dressed {
    let w = q as f64 * ETA;
    Dressed {
        g: TAU * 0.02,
        delta: delta_ratio * w,
        big_delta: p as f64 * ETA,
        w,
        sin_theta: (1.0 - delta_ratio * delta_ratio).sqrt(),
        cos_theta: delta_ratio,
        phase: 0.0,
    }
}

#[test]
fn one_qubit_families_follow_table() {
    use TermFamily::*;
    let tau = TAU / ETA;
    let cases: [(i64, i64, &[TermFamily]); 4] = [
        (7, 3, &[]),
        (3, 6, &[SigmaPlusA2, SigmaMinusAdag2]),
        (-4, 8, &[SigmaMinusA2, SigmaPlusAdag2]),
        (0, 5, &[SigmaZA2, SigmaZAdag2]),
    ];
    for (p, q, extra) in cases {
        let d = dressed(p, q, 0.0);
        let mut expected = BTreeSet::from([SigmaZNumber, SigmaZ]);
        expected.extend(extra.iter().copied());
        assert_eq!(one_qubit_term_classes(d.big_delta, d.w), expected, "p={p} q={q}");
        if p != 0 {
            let terms = one_qubit_terms(&d, tau).unwrap();
            assert_eq!(terms.families(1e-9 * d.g * d.g / ETA), expected, "assembled p={p} q={q}");
        }
    }
}

/// ⟨row| H₂ |col⟩ for a single active qubit, from nested quadrature.
fn quadrature_element(d: &Dressed, row: (usize, usize), col: (usize, usize)) -> C64 {
    let n_max = 3;
    let wd = 7.0 * TAU;
    let rabi = 0.5 * (d.w * d.w - d.delta * d.delta).sqrt();
    let q1 = oracle::Qubit { omega: wd + d.delta, omega_d: wd, g: d.g, rabi, phase: 0.0 };
    let q2 = oracle::Qubit { g: 0.0, ..q1 };
    let harm = oracle::harmonics(&[q1, q2], wd + d.big_delta, n_max);
    let h2 = oracle::second_order_average(&harm, TAU / ETA, 400);
    // Qubit 2 sits in |e⟩; index = 2·q₁·(n_max+1) + n.
    h2[(2 * row.0 * (n_max + 1) + row.1, 2 * col.0 * (n_max + 1) + col.1)]
}

#[test]
fn assembled_one_qubit_terms_match_quadrature() {
    let tau = TAU / ETA;
    let (e, g) = (0, 1);
    for (p, q, r) in [(7, 3, 0.0), (3, 6, 0.0), (-4, 8, 0.0), (0, 5, 0.0), (5, 9, 0.3)] {
        let d = dressed(p, q, r);
        let t = one_qubit_terms(&d, tau).unwrap();
        let scale = d.g * d.g / ETA;
        let s2 = 2f64.sqrt();
        let checks = [
            (quadrature_element(&d, (e, 2), (g, 0)), t.adag2_plus * s2),
            (quadrature_element(&d, (g, 2), (e, 0)), t.adag2_minus * s2),
            (quadrature_element(&d, (e, 2), (e, 0)), t.adag2_z * s2),
        ];
        for (k, (oracle_value, built)) in checks.iter().enumerate() {
            assert!((oracle_value - built).norm() <= 1e-9 * scale, "p={p} q={q} term {k}: {oracle_value} vs {built}");
        }
    }
}

#[test]
fn number_coefficient_is_lambda() {
    let tau = TAU / ETA;
    for (p, q, r) in [(20, 7, 0.0), (-13, 11, 0.0), (9, 5, 0.4), (-6, 17, -0.7)] {
        let d = dressed(p, q, r);
        let terms = one_qubit_terms(&d, tau).unwrap();
        let lam = lambda_coefficient(&d);
        assert!((terms.number_z - lam).abs() <= 1e-12 * lam.abs(), "p={p} q={q}: {} vs {lam}", terms.number_z);
        assert!((terms.const_z - 0.5 * lam).abs() <= 1e-12 * lam.abs(), "p={p} q={q}: {} vs {}", terms.const_z, lam / 2.0);
    }
}

#[test]
fn shift_vanishes_at_its_detuning_roots() {
    let (big, w) = (5.0 * ETA, 3.0 * ETA);
    for delta in shift_free_detuning(big, w) {
        let d = Dressed { delta, ..dressed(5, 3, 0.0) };
        assert!(lambda_coefficient(&d).abs() < 1e-15);
    }
}

fn fs_direct(sys: &sideband::SystemParams, cond: ResonanceCondition, state: TwoQubitState, n: usize) -> f64 {
    let (v, _) = build_vqq(sys, cond).unwrap();
    let lam = dispersive_shifts(sys).unwrap().lambda_n(n);
    let mut psi = nalgebra::DVector::zeros(4);
    psi[state.index()] = C64::new(1.0, 0.0);
    oracle::shift_overlap(v.matrix(), lam.matrix(), sys.tau_m(), &psi)
}

#[test]
fn fs_closed_form_matches_direct_evolution() {
    let mut rng = StdRng::seed_from_u64(11);
    for id in [1u8, 4, 7, 9] {
        let cond = ResonanceCondition::new(id).unwrap();
        for _ in 0..3 {
            let sys = system_on_grid(random_grid(cond, &mut rng), [0.0, 0.0], [0.025, 0.03], 2);
            for n in 0..=2 {
                for state in TwoQubitState::ALL {
                    let analytic = fs_analytic(&sys, cond, state, n).unwrap();
                    let direct = fs_direct(&sys, cond, state, n);
                    assert!((analytic - direct).abs() <= 1e-10, "{cond} {state:?} n={n}: {analytic} vs {direct}");
                }
            }
        }
    }
}

#[test]
fn fs_phase_only_matches_direct_evolution() {
    let mut rng = StdRng::seed_from_u64(3);
    let cond = ResonanceCondition::new(1).unwrap();
    let sys = system_on_grid(random_grid(cond, &mut rng), [0.0, 0.0], [0.025, 0.03], 2);
    let (v, _) = build_vqq(&sys, cond).unwrap();
    let shifts = dispersive_shifts(&sys).unwrap();
    let coeffs = [C64::new(0.5, 0.1), C64::new(-0.2, 0.4), C64::new(0.3, 0.0), C64::new(0.0, -0.6)];
    let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let psi = nalgebra::DVector::from_iterator(4, coeffs.iter().map(|c| c / norm));
    for n in 0..=2 {
        let direct = oracle::shift_overlap(v.matrix(), shifts.lambda_n(n).matrix(), sys.tau_m(), &psi);
        let analytic = fs_phase_only(&coeffs, &shifts, sys.tau_m(), n);
        assert!((direct - analytic).abs() <= 1e-10, "n={n}: {analytic} vs {direct}");
    }
}

#[test]
fn fs_is_one_at_cancellation_points() {
    for (sys, id) in [(presets::rc7(), 7), (presets::rc9(), 9)] {
        let cond = ResonanceCondition::new(id).unwrap();
        let sys = exactify(&sys, cond).unwrap();
        let sh = dispersive_shifts(&sys).unwrap();
        let combo = if id == 7 { sh.lambda[0] - sh.lambda[1] } else { sh.lambda[0] + sh.lambda[1] };
        assert!(combo.abs() <= 1e-13 * sh.lambda[0].abs());
        for n in 0..=2 {
            for state in TwoQubitState::ALL {
                let fs = fs_analytic(&sys, cond, state, n).unwrap();
                assert!((fs - 1.0).abs() <= 1e-12, "rc{id} {state:?} n={n}: {fs}");
            }
        }
    }
}

#[test]
fn fs_reduces_to_gate_time_form() {
    // At 𝒥τ_m = π/2 only the transfer amplitude survives:
    // F = (𝒥/Ω̄)² sin²(Ω̄τ_m) with Ω̄ = √(h² + 𝒥²).
    let (j, tau_m) = (0.7, FRAC_PI_2 / 0.7);
    let cond = ResonanceCondition::new(7).unwrap();
    for chi_diff in [0.0, 0.05, 0.2, 0.9] {
        let shifts = ShiftCoefficients { lambda: [0.3 + chi_diff, 0.3], resonant: [true, true] };
        let hz = 0.5 * chi_diff;
        let om = hz.hypot(j);
        let expected = (om * tau_m).sin().powi(2) * (j / om).powi(2);
        let fs = fs_closed_form(cond, j, &shifts, tau_m, TwoQubitState::EG, 0).unwrap();
        assert!((fs - expected).abs() < 1e-14, "{chi_diff}: {fs} vs {expected}");
    }
}

#[test]
fn ideal_gates_at_exact_points() {
    let i7 = ResonanceCondition::new(7).unwrap();
    let s7 = exactify(&presets::rc7(), i7).unwrap();
    let (_, j) = build_vqq(&s7, i7).unwrap();
    assert!((ideal_gate(i7, s7.tau_m(), j) - iswap()).max_abs() < 1e-12);
    let i9 = ResonanceCondition::new(9).unwrap();
    let s9 = exactify(&presets::rc9(), i9).unwrap();
    let (_, j) = build_vqq(&s9, i9).unwrap();
    assert!((ideal_gate(i9, s9.tau_m(), j) - double_excitation()).max_abs() < 1e-12);
}

#[test]
fn exchange_terms_match_resonant_forms_at_zero_detuning() {
    let mut rng = StdRng::seed_from_u64(5);
    for cond in ResonanceCondition::all() {
        let sys = system_on_grid(random_grid(cond, &mut rng), [0.0, 0.0], [0.02, 0.02], 2);
        let (v, j) = build_vqq(&sys, cond).unwrap();
        assert!((v - resonant_vqq(cond, j)).max_abs() <= 1e-15);
    }
}

#[test]
fn table_values_from_exact_couplings() {
    let i9 = ResonanceCondition::new(9).unwrap();
    let s9 = exactify(&presets::rc9(), i9).unwrap();
    let (_, j) = build_vqq(&s9, i9).unwrap();
    assert!((angular_to_mhz(j) + 1.25).abs() < 0.005);
    let sh = dispersive_shifts(&s9).unwrap();
    assert!((angular_to_mhz(sh.lambda[0]) - 1.25).abs() < 0.005);
    assert!((angular_to_mhz(sh.lambda[1]) + 1.25).abs() < 0.005);
}

#[test]
fn nonzero_phase_is_rejected() {
    let mut sys = presets::rc7();
    sys.qubits[1].phase = 0.3;
    assert_eq!(
        build_vqq(&sys, ResonanceCondition::new(7).unwrap()).unwrap_err(),
        EffectiveError::NonzeroPhase(2)
    );
}

#[test]
fn wrong_condition_is_rejected() {
    let err = build_vqq(&presets::rc7(), ResonanceCondition::new(9).unwrap()).unwrap_err();
    assert!(matches!(err, EffectiveError::ConditionNotSatisfied(_)));
}

#[test]
fn search_recovers_reference_tuples() {
    let i7 = ResonanceCondition::new(7).unwrap();
    let found = search_parameters(i7, &SearchBounds::new(8, 20, 50, 0.05)).unwrap();
    let hit = found.iter().find(|c| c.grid == presets::rc7().grid).expect("rc7 tuple");
    assert!((hit.g_ghz[0] - 0.026).abs() < 0.0005 && (hit.g_ghz[1] - 0.031).abs() < 0.0005);
    assert!((hit.tau_m_ns - 800.0).abs() < 1e-9);

    let i9 = ResonanceCondition::new(9).unwrap();
    let found = search_parameters(i9, &SearchBounds::new(12, 15, 12, 0.05)).unwrap();
    let hit = found.iter().find(|c| c.grid == presets::rc9().grid).expect("rc9 tuple");
    assert!((hit.j_mhz + 1.25).abs() < 0.005);

    let sys = hit.to_system(6.2, 0.05, 2).unwrap();
    let (_, j) = build_vqq(&sys, i9).unwrap();
    assert!((j * sys.tau_m() + FRAC_PI_2).abs() <= 1e-12);
    assert!(check_constraints(&sys, i9, 1e-9).all_passed());
}

#[test]
fn search_candidates_all_satisfy_constraints() {
    let i7 = ResonanceCondition::new(7).unwrap();
    let found = search_parameters(i7, &SearchBounds::new(6, 12, 20, 0.05)).unwrap();
    assert!(!found.is_empty());
    for c in &found {
        let sys = c.to_system(7.0, 0.05, 2).unwrap();
        let rep = check_constraints(&sys, i7, 1e-9);
        assert!(rep.all_passed(), "{:?}", c.grid);
        let (_, j) = build_vqq(&sys, i7).unwrap();
        assert!((j * sys.tau_m() - FRAC_PI_2).abs() <= 1e-12);
    }
    let ordered = found.windows(2).all(|w| w[0].grid.m <= w[1].grid.m);
    assert!(ordered);
}

#[test]
fn lambda_matrix_is_traceless_and_diagonal() {
    let sh = dispersive_shifts(&presets::rc9()).unwrap();
    let m = sh.lambda_n(2);
    assert!(m.trace().norm() < 1e-15);
    let diag: Vec<C64> = (0..4).map(|i| m.get(i, i)).collect();
    let rebuilt = OperatorMatrix::from_diagonal(&diag, BasisDescriptor::TWO_QUBIT).unwrap();
    assert_eq!(rebuilt, m);
}

