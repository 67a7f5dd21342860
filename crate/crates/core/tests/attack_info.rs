mod common;

use common::*;
use pingpong_core::attack::eve_accessible_state;
use pingpong_core::protocol::{run_control_round, run_message_round};
use pingpong_core::quantum::{gates, partial_trace, von_neumann_entropy};
use pingpong_core::search::{sample_product_attack, sample_random_attack};
use pingpong_core::{
    binary_entropy, builtin_attack, detection_probability, entropy_inequality_check, holevo_bound,
    information_report, monte_carlo, post_encoding_ensemble, AttackSpec, BuiltinAttack, CMatrix,
    EncodingSet, Mode, ProtocolConfig, StateVector, Subsystem,
};

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn counterexample() -> AttackSpec {
    builtin_attack(BuiltinAttack::PaperCounterexample)
}

#[test]
fn bell_mode_detection_by_hand() {
    // (I ⊗ R ⊗ I)(|ψ+> ⊗ |+>), summing |amp|² over home == travel
    let r = [[H, -H], [H, H]];
    let psi = [0.0, H, H, 0.0];
    let chi = [H, H];
    let mut amps = [0.0f64; 8];
    for home in 0..2 {
        for t_out in 0..2 {
            for anc in 0..2 {
                let mut a = 0.0;
                for t_in in 0..2 {
                    a += r[t_out][t_in] * psi[2 * home + t_in] * chi[anc];
                }
                amps[4 * home + 2 * t_out + anc] = a;
            }
        }
    }
    let oracle: f64 = (0..8)
        .filter(|i| (i >> 2) == ((i >> 1) & 1))
        .map(|i| amps[i] * amps[i])
        .sum();
    assert!((oracle - 0.5).abs() < 1e-15);
    let d = detection_probability(&counterexample(), &ProtocolConfig::bell()).unwrap();
    assert!((d - oracle).abs() < 1e-12);
}

#[test]
fn cnot_on_zero_is_undetected() {
    let d = detection_probability(
        &builtin_attack(BuiltinAttack::Cnot),
        &ProtocolConfig::simplified(),
    )
    .unwrap();
    assert_eq!(d, 0.0);
}

#[test]
fn noiseless_protocol_is_correct_in_both_modes() {
    let id = builtin_attack(BuiltinAttack::Identity);
    for mode in [Mode::Simplified, Mode::Bell] {
        let cfg = ProtocolConfig::for_mode(mode);
        assert_eq!(
            run_control_round(&cfg, &id).unwrap().detection_probability,
            0.0
        );
    }
    // simplified mode decodes whenever Bob's encoded states are orthogonal
    let cfgs = [
        ProtocolConfig::bell(),
        ProtocolConfig::bell().with_encoding(EncodingSet::Paulis),
        ProtocolConfig::simplified()
            .with_bob_initial(StateVector::plus())
            .unwrap(),
    ];
    for cfg in cfgs {
        for bit in 0..cfg.encodings.len() {
            assert_eq!(
                run_message_round(&cfg, &id, bit).unwrap().decoded_bit(),
                Some(bit)
            );
        }
    }
}

#[test]
fn simplified_encodings_coincide_on_zero() {
    let zero = StateVector::basis(2, 0).unwrap();
    let a = zero.to_density();
    let b = gates::pauli_z().conjugate(&zero.to_density()).unwrap();
    assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
}

#[test]
fn analytic_and_empirical_detection_agree() {
    for b in BuiltinAttack::ALL {
        for cfg in [ProtocolConfig::simplified(), ProtocolConfig::bell()] {
            let s = monte_carlo(&cfg, &builtin_attack(b), 100_000, 2024).unwrap();
            let sigma = (s.analytic_d * (1.0 - s.analytic_d) / 100_000.0).sqrt();
            assert!(
                (s.empirical_d - s.analytic_d).abs() <= 4.0 * sigma,
                "{} {:?}: {} vs {}",
                b.name(),
                cfg.mode,
                s.empirical_d,
                s.analytic_d
            );
        }
    }
}

#[test]
fn detection_is_a_probability_and_phase_blind() {
    for s in 0..100u64 {
        let a = sample_random_attack(1 + s as usize % 3, s).unwrap();
        for cfg in [ProtocolConfig::simplified(), ProtocolConfig::bell()] {
            let d = detection_probability(&a, &cfg).unwrap();
            assert!((0.0..=1.0).contains(&d));
            let dp = detection_probability(&a.with_global_phase(1.234), &cfg).unwrap();
            assert!((d - dp).abs() < 1e-12);
        }
    }
}

#[test]
fn global_phase_leaves_ensemble_unchanged() {
    for s in 0..50u64 {
        let a = sample_random_attack(2, s).unwrap();
        let b = a.with_global_phase(0.1 + s as f64);
        for cfg in [ProtocolConfig::simplified(), ProtocolConfig::bell()] {
            let ea = post_encoding_ensemble(&a, &cfg).unwrap();
            let eb = post_encoding_ensemble(&b, &cfg).unwrap();
            for ((pa, ma), (pb, mb)) in ea.members.iter().zip(&eb.members) {
                assert_eq!(pa, pb);
                assert!(ma.matrix().max_abs_diff(mb.matrix()) < 1e-12);
            }
            let ra = information_report(&a, &cfg).unwrap();
            let rb = information_report(&b, &cfg).unwrap();
            assert!((ra.i0c - rb.i0c).abs() < 1e-12 && (ra.i0t - rb.i0t).abs() < 1e-12);
        }
    }
}

#[test]
fn product_attacks_keep_ancilla_pure() {
    for s in 0..100u64 {
        let a = sample_product_attack(2, s).unwrap();
        let cfg = ProtocolConfig::simplified();
        let ens = post_encoding_ensemble(&a, &cfg).unwrap();
        for (_, m) in &ens.members {
            let anc = partial_trace(m, &[2, 2], 1).unwrap();
            assert!(von_neumann_entropy(&anc).unwrap().abs() < 1e-8);
        }
        let r = information_report(&a, &cfg).unwrap();
        assert!(r.i0a.abs() < 1e-8);
        assert!(
            (r.i0c - r.i0t).abs() < 1e-8,
            "seed {s}: {} vs {}",
            r.i0c,
            r.i0t
        );
    }
}

#[test]
fn encoding_average_dephases_travel() {
    for s in 0..100u64 {
        let a = sample_random_attack(2, s).unwrap();
        let ens = post_encoding_ensemble(&a, &ProtocolConfig::simplified()).unwrap();
        let t = ens.average(Subsystem::Travel).unwrap();
        assert!(t.matrix()[(0, 1)].norm() <= 1e-12 && t.matrix()[(1, 0)].norm() <= 1e-12);
    }
}

#[test]
fn travel_entropy_is_binary_entropy_of_detection() {
    for s in 0..300u64 {
        let a = sample_random_attack(1 + s as usize % 3, s).unwrap();
        let r = information_report(&a, &ProtocolConfig::simplified()).unwrap();
        assert!((r.i0t - h(r.d)).abs() < 1e-10, "seed {s}");
        assert!((r.i0t - binary_entropy(r.d).unwrap()).abs() < 1e-10);
    }
}

/// Two 2x2 diagonal blocks of `½(ρ' + Zρ'Z)`, diagonalized in closed form.
fn dephased_composite_entropy(a: &AttackSpec) -> f64 {
    let rho = eve_accessible_state(a, &ProtocolConfig::simplified()).unwrap();
    let m = rho.matrix();
    let mut spec = Vec::new();
    for t in 0..2 {
        let o = 2 * t;
        spec.extend(eig2(m[(o, o)].re, m[(o, o + 1)], m[(o + 1, o + 1)].re));
    }
    oracle_entropy(&spec)
}

#[test]
fn composite_entropy_by_two_paths() {
    let mut attacks = vec![counterexample()];
    attacks.extend((0..50).map(|s| sample_random_attack(2, s).unwrap()));
    for a in &attacks {
        let r = information_report(a, &ProtocolConfig::simplified()).unwrap();
        assert!((r.i0c - dephased_composite_entropy(a)).abs() < 1e-10);
    }
}

#[test]
fn counterexample_composite_state_is_half_identity_times_plus() {
    let ens = post_encoding_ensemble(&counterexample(), &ProtocolConfig::simplified()).unwrap();
    let avg = ens.average(Subsystem::Composite).unwrap();
    let expected = CMatrix::diag(&[0.5, 0.5]).kron(StateVector::plus().to_density().matrix());
    assert!(avg.matrix().max_abs_diff(&expected) < 1e-15);
}

#[test]
fn holevo_contrast_by_assembled_states() {
    // simplified: |++> and |-+> are orthogonal, equal priors → 1 bit
    let plus = StateVector::plus();
    let minus = StateVector::from_real(&[H, -H]).unwrap();
    let overlap = plus.tensor(&plus).inner(&minus.tensor(&plus));
    assert!(overlap.norm() < 1e-15);
    let ens = post_encoding_ensemble(&counterexample(), &ProtocolConfig::simplified()).unwrap();
    assert!((holevo_bound(&ens, Subsystem::Composite).unwrap() - 1.0).abs() < 1e-10);

    // Bell mode: both conditional states equal (I/2) ⊗ |+><+|
    let ens = post_encoding_ensemble(&counterexample(), &ProtocolConfig::bell()).unwrap();
    let expected = CMatrix::diag(&[0.5, 0.5]).kron(plus.to_density().matrix());
    for (_, m) in &ens.members {
        assert!(m.matrix().max_abs_diff(&expected) < 1e-12);
    }
    assert!(holevo_bound(&ens, Subsystem::Composite).unwrap().abs() < 1e-10);
}

#[test]
fn holevo_never_exceeds_entropy() {
    for s in 0..200u64 {
        let a = sample_random_attack(1 + s as usize % 3, s).unwrap();
        for cfg in [
            ProtocolConfig::simplified(),
            ProtocolConfig::bell().with_encoding(EncodingSet::Paulis),
        ] {
            let r = information_report(&a, &cfg).unwrap();
            assert!(r.holevo_t <= r.i0t + 1e-8 && r.holevo_c <= r.i0c + 1e-8);
            assert!(r.i0t <= 1.0 + 1e-9);
            assert!(r.i0a <= (a.ancilla_dim as f64).log2() + 1e-9);
            assert!(r.i0c <= (2.0 * a.ancilla_dim as f64).log2() + 1e-9);
        }
    }
}

#[test]
fn entropy_inequalities_hold_for_random_attacks() {
    for s in 0..500u64 {
        let a = sample_random_attack(2, 10_000 + s).unwrap();
        for cfg in [ProtocolConfig::simplified(), ProtocolConfig::bell()] {
            let d = entropy_inequality_check(&information_report(&a, &cfg).unwrap());
            assert!(d.subadditivity_ok && d.araki_lieb_ok, "seed {s}: {d:?}");
        }
    }
}

#[test]
fn attack_with_complex_entries_round_trips_through_parts() {
    let chi = rand_state(5, 3);
    let e = rand_unitary(6, 6);
    let a = AttackSpec::from_parts(&chi, &e).unwrap();
    assert_eq!(a.ancilla_dim, 3);
    assert!(a.chi.iter().any(|z| z.im != 0.0));
    assert_eq!(a.chi_state().unwrap(), chi);
}
