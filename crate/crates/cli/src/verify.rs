//! Invariant suites run by `pingpong verify`.
//!
//! Every suite measures a worst-case deviation against a tolerance; the
//! margin is `tolerance - deviation`, so a negative margin is a failure.
//! Entropies of reduced states go through a pluggable function so a faulty
//! implementation can be swapped in and caught.

use std::fmt::Write as _;

use pingpong_core::quantum::{
    computational_basis, measure_state, partial_trace, von_neumann_entropy,
};
use pingpong_core::search::{
    evaluate, maximize_information, parameterize_unitary, sample_random_attack,
};
use pingpong_core::{
    binary_entropy, builtin_attack, detection_probability, holevo_bound, monte_carlo,
    post_encoding_ensemble, AttackFamily, AttackSpec, BuiltinAttack, DensityMatrix, Mode,
    Objective, ProtocolConfig, StateVector, Subsystem, SweepConfig, UnitaryOperator,
};

use crate::commands::Output;
use crate::formats::{curve_csv, parse_attack, AttackFile};

pub type EntropyFn = fn(&DensityMatrix) -> pingpong_core::Result<f64>;

type Measure = pingpong_core::Result<(f64, f64)>;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub deviation: f64,
    pub tolerance: f64,
    pub error: Option<String>,
}

impl SuiteResult {
    pub fn margin(&self) -> f64 {
        self.tolerance - self.deviation
    }
}

struct Suite {
    name: &'static str,
    run: fn(EntropyFn) -> Measure,
}

const SEEDS: std::ops::Range<u64> = 0..60;

fn attack(seed: u64) -> pingpong_core::Result<AttackSpec> {
    sample_random_attack(1 + seed as usize % 3, 7_000 + seed)
}

fn random_state(seed: u64, dim: usize) -> pingpong_core::Result<StateVector> {
    sample_random_attack(dim, 9_000 + seed)?.chi_state()
}

fn random_unitary(seed: u64, half_dim: usize) -> pingpong_core::Result<UnitaryOperator> {
    sample_random_attack(half_dim, 11_000 + seed)?.unitary_op()
}

fn modes() -> [ProtocolConfig; 2] {
    [ProtocolConfig::simplified(), ProtocolConfig::bell()]
}

fn state_normalization(_: EntropyFn) -> Measure {
    let mut worst = 0.0f64;
    for s in SEEDS {
        let a = random_state(s, 1 + s as usize % 5)?;
        let b = random_state(500 + s, 2)?;
        worst = worst
            .max((a.norm() - 1.0).abs())
            .max((a.tensor(&b).norm() - 1.0).abs());
    }
    Ok((worst, 1e-12))
}

fn unitarity(_: EntropyFn) -> Measure {
    let mut worst = 0.0f64;
    for s in SEEDS {
        let u = random_unitary(s, 1 + s as usize % 4)?;
        worst = worst.max(u.matrix().unitarity_deviation()?);
    }
    Ok((worst, 1e-10))
}

fn norm_preservation(_: EntropyFn) -> Measure {
    let mut worst = 0.0f64;
    for s in SEEDS {
        let k = 1 + s as usize % 3;
        let psi = random_state(s, 2 * k)?;
        worst = worst.max((random_unitary(s, k)?.apply(&psi)?.norm() - 1.0).abs());
    }
    Ok((worst, 1e-12))
}

fn partial_trace_suite(_: EntropyFn) -> Measure {
    let mut worst = 0.0f64;
    for s in SEEDS {
        let rho = random_state(s, 4)?.to_density();
        for keep in 0..2 {
            let r = partial_trace(&rho, &[2, 2], keep)?;
            worst = worst.max((r.trace() - 1.0).abs());
            let min = r.eigenvalues()?.into_iter().fold(f64::INFINITY, f64::min);
            worst = worst.max(-min);
        }
    }
    Ok((worst, 1e-10))
}

fn pure_state_entropy(entropy: EntropyFn) -> Measure {
    let mut worst = 0.0f64;
    for s in SEEDS {
        worst = worst.max(entropy(&random_state(s, 2 + s as usize % 4)?.to_density())?.abs());
    }
    Ok((worst, 1e-10))
}

fn maximal_mixing(entropy: EntropyFn) -> Measure {
    let mut worst = 0.0f64;
    for n in [2usize, 3, 4, 8] {
        worst = worst.max((entropy(&DensityMatrix::maximally_mixed(n))? - (n as f64).log2()).abs());
    }
    Ok((worst, 1e-12))
}

fn bell_marginal(entropy: EntropyFn) -> Measure {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let rho = StateVector::from_real(&[h, 0.0, 0.0, h])?.to_density();
    let mut worst = 0.0f64;
    for keep in 0..2 {
        worst = worst.max((entropy(&partial_trace(&rho, &[2, 2], keep)?)? - 1.0).abs());
    }
    Ok((worst, 1e-12))
}

fn additivity(entropy: EntropyFn) -> Measure {
    let mut worst = 0.0f64;
    for s in SEEDS {
        let ens = post_encoding_ensemble(&attack(s)?, &ProtocolConfig::simplified())?;
        let a = ens.average(Subsystem::Travel)?;
        let b = ens.average(Subsystem::Ancilla)?;
        let joint = entropy(&a.tensor(&b))?;
        worst = worst.max((joint - entropy(&a)? - entropy(&b)?).abs());
    }
    Ok((worst, 1e-8))
}

fn unitary_invariance(entropy: EntropyFn) -> Measure {
    let mut worst = 0.0f64;
    for s in SEEDS {
        let a = attack(s)?;
        let rho = post_encoding_ensemble(&a, &ProtocolConfig::simplified())?
            .average(Subsystem::Composite)?;
        let u = random_unitary(s, a.ancilla_dim)?;
        worst = worst.max((entropy(&u.conjugate(&rho)?)? - entropy(&rho)?).abs());
    }
    Ok((worst, 1e-8))
}

fn noiseless_protocol(_: EntropyFn) -> Measure {
    let id = builtin_attack(BuiltinAttack::Identity);
    let mut worst = 0.0f64;
    for cfg in modes() {
        worst = worst.max(detection_probability(&id, &cfg)?);
        if cfg.mode == Mode::Bell {
            for bit in 0..cfg.encodings.len() {
                let r = pingpong_core::protocol::run_message_round(&cfg, &id, bit)?;
                if r.decoded_bit() != Some(bit) {
                    worst = worst.max(1.0);
                }
            }
        }
    }
    Ok((worst, 0.0))
}

fn counterexample(entropy: EntropyFn) -> Measure {
    let a = builtin_attack(BuiltinAttack::PaperCounterexample);
    let cfg = ProtocolConfig::simplified();
    let ens = post_encoding_ensemble(&a, &cfg)?;
    let d = detection_probability(&a, &cfg)?;
    let worst = (d - 0.5)
        .abs()
        .max((entropy(&ens.average(Subsystem::Travel)?)? - 1.0).abs())
        .max(entropy(&ens.average(Subsystem::Ancilla)?)?.abs());
    Ok((worst, 1e-12))
}

fn phase_invariance(entropy: EntropyFn) -> Measure {
    let mut worst = 0.0f64;
    for s in SEEDS {
        let a = attack(s)?;
        let b = a.with_global_phase(0.7 + s as f64);
        for cfg in modes() {
            worst = worst
                .max((detection_probability(&a, &cfg)? - detection_probability(&b, &cfg)?).abs());
            let sa = entropy(&post_encoding_ensemble(&a, &cfg)?.average(Subsystem::Composite)?)?;
            let sb = entropy(&post_encoding_ensemble(&b, &cfg)?.average(Subsystem::Composite)?)?;
            worst = worst.max((sa - sb).abs());
        }
    }
    Ok((worst, 1e-10))
}

fn travel_binary_entropy(entropy: EntropyFn) -> Measure {
    let cfg = ProtocolConfig::simplified();
    let mut worst = 0.0f64;
    for s in SEEDS {
        let a = attack(s)?;
        let i0t = entropy(&post_encoding_ensemble(&a, &cfg)?.average(Subsystem::Travel)?)?;
        worst = worst.max((i0t - binary_entropy(detection_probability(&a, &cfg)?)?).abs());
    }
    Ok((worst, 1e-10))
}

fn inequalities(entropy: EntropyFn) -> Measure {
    let mut worst = f64::NEG_INFINITY;
    for s in SEEDS {
        let a = attack(s)?;
        for cfg in modes() {
            let ens = post_encoding_ensemble(&a, &cfg)?;
            let t = entropy(&ens.average(Subsystem::Travel)?)?;
            let an = entropy(&ens.average(Subsystem::Ancilla)?)?;
            let c = entropy(&ens.average(Subsystem::Composite)?)?;
            worst = worst.max(c - t - an).max((t - an).abs() - c);
        }
    }
    Ok((worst.max(0.0), 1e-8))
}

fn holevo_bounds(entropy: EntropyFn) -> Measure {
    let mut worst = 0.0f64;
    for s in SEEDS {
        let a = attack(s)?;
        for cfg in modes() {
            let ens = post_encoding_ensemble(&a, &cfg)?;
            for sub in [Subsystem::Travel, Subsystem::Composite] {
                let chi = holevo_bound(&ens, sub)?;
                let s_avg = entropy(&ens.average(sub)?)?;
                worst = worst.max(chi - s_avg).max(-chi);
            }
        }
    }
    Ok((worst, 1e-8))
}

fn monte_carlo_suite(_: EntropyFn) -> Measure {
    let a = builtin_attack(BuiltinAttack::PaperCounterexample);
    let mut worst = 0.0f64;
    for cfg in modes() {
        worst = worst.max(monte_carlo(&cfg, &a, 20_000, 7)?.z_score().abs());
    }
    Ok((worst, 4.0))
}

fn measurement(_: EntropyFn) -> Measure {
    let mut worst = 0.0f64;
    for s in SEEDS {
        let psi = random_state(s, 2 + s as usize % 4)?;
        let p = measure_state(&psi, &computational_basis(psi.dim()))?;
        worst = worst.max((p.iter().sum::<f64>() - 1.0).abs());
        worst = worst.max(-p.iter().copied().fold(f64::INFINITY, f64::min));
    }
    Ok((worst, 1e-12))
}

fn parameterization(_: EntropyFn) -> Measure {
    let mut worst = 0.0f64;
    for s in SEEDS {
        let dim = 2 + s as usize % 5;
        let theta: Vec<f64> = (0..dim * dim)
            .map(|i| ((s * 31 + i as u64) as f64).sin() * 3.0)
            .collect();
        worst = worst.max(
            parameterize_unitary(&theta, dim)?
                .matrix()
                .unitarity_deviation()?,
        );
    }
    Ok((worst, 1e-10))
}

fn search_reproducibility(_: EntropyFn) -> Measure {
    let fam = AttackFamily::general(2);
    let cfg = ProtocolConfig::simplified();
    let sweep_cfg = SweepConfig {
        d_grid: vec![0.3],
        restarts: 2,
        budget_per_restart: 200,
        seed: 5,
        ..SweepConfig::default()
    };
    let a = maximize_information(&fam, &cfg, Objective::I0t, 0.3, &sweep_cfg)?;
    let b = maximize_information(&fam, &cfg, Objective::I0t, 0.3, &sweep_cfg)?;
    let mut worst: f64 = if a == b { 0.0 } else { 1.0 };
    if let Some(p) = a.point() {
        let e = evaluate(&fam, &cfg, &p.theta_best)?;
        worst = worst.max((e.i0t - p.best_value()).abs());
        worst = worst.max(((e.d - 0.3).abs() - sweep_cfg.detection_tolerance).max(0.0));
    }
    Ok((worst, 1e-10))
}

fn attack_file_roundtrip(_: EntropyFn) -> Measure {
    let mut worst = 0.0f64;
    let mut attacks: Vec<AttackSpec> = BuiltinAttack::ALL
        .iter()
        .map(|&b| builtin_attack(b))
        .collect();
    for s in 0..10 {
        attacks.push(attack(s)?);
    }
    for a in &attacks {
        let once = parse_attack(&AttackFile::from_spec(a).to_json())
            .map_err(|e| pingpong_core::Error::InvalidArgument(e.to_string()))?;
        let twice = parse_attack(&AttackFile::from_spec(&once).to_json())
            .map_err(|e| pingpong_core::Error::InvalidArgument(e.to_string()))?;
        worst = worst.max(a.unitary.max_abs_diff(&twice.unitary));
        for (x, y) in a.chi.iter().zip(&twice.chi) {
            worst = worst.max((x - y).norm());
        }
    }
    Ok((worst, 1e-12))
}

fn csv_roundtrip(_: EntropyFn) -> Measure {
    let fam = AttackFamily::general(1);
    let cfg = SweepConfig {
        d_grid: vec![0.0, 0.2],
        restarts: 1,
        budget_per_restart: 100,
        objectives: vec![Objective::I0t, Objective::I0c],
        ..SweepConfig::default()
    };
    let result = pingpong_core::sweep(&fam, &ProtocolConfig::simplified(), &cfg)?;
    let text = curve_csv(&result.points);
    let mut worst = 0.0f64;
    let mut rows = 0;
    for (line, p) in text.lines().skip(1).zip(&result.points) {
        rows += 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Ok((1.0, 1e-9));
        }
        let d: f64 = fields[0].parse().unwrap_or(f64::NAN);
        let v: f64 = fields[3].parse().unwrap_or(f64::NAN);
        let expected = p.point().map_or(f64::NAN, |c| c.best_value());
        worst = worst.max((d - p.d_target()).abs());
        if !(v.is_nan() && expected.is_nan()) {
            worst = worst.max((v - expected).abs());
        }
    }
    if rows != result.points.len() || worst.is_nan() {
        worst = 1.0;
    }
    Ok((worst, 1e-9))
}

const SUITES: &[Suite] = &[
    Suite {
        name: "state.normalization",
        run: state_normalization,
    },
    Suite {
        name: "unitary.unitarity",
        run: unitarity,
    },
    Suite {
        name: "unitary.norm_preservation",
        run: norm_preservation,
    },
    Suite {
        name: "density.partial_trace",
        run: partial_trace_suite,
    },
    Suite {
        name: "measurement.probabilities",
        run: measurement,
    },
    Suite {
        name: "entropy.pure_state",
        run: pure_state_entropy,
    },
    Suite {
        name: "entropy.maximal_mixing",
        run: maximal_mixing,
    },
    Suite {
        name: "entropy.bell_marginal",
        run: bell_marginal,
    },
    Suite {
        name: "entropy.additivity",
        run: additivity,
    },
    Suite {
        name: "entropy.unitary_invariance",
        run: unitary_invariance,
    },
    Suite {
        name: "protocol.noiseless",
        run: noiseless_protocol,
    },
    Suite {
        name: "protocol.monte_carlo",
        run: monte_carlo_suite,
    },
    Suite {
        name: "attack.counterexample",
        run: counterexample,
    },
    Suite {
        name: "attack.phase_invariance",
        run: phase_invariance,
    },
    Suite {
        name: "info.travel_binary_entropy",
        run: travel_binary_entropy,
    },
    Suite {
        name: "info.inequalities",
        run: inequalities,
    },
    Suite {
        name: "info.holevo_bounds",
        run: holevo_bounds,
    },
    Suite {
        name: "search.parameterization",
        run: parameterization,
    },
    Suite {
        name: "search.reproducibility",
        run: search_reproducibility,
    },
    Suite {
        name: "files.attack_roundtrip",
        run: attack_file_roundtrip,
    },
    Suite {
        name: "files.csv_roundtrip",
        run: csv_roundtrip,
    },
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

pub fn run_suites(entropy: EntropyFn) -> Vec<SuiteResult> {
    SUITES
        .iter()
        .map(|s| match (s.run)(entropy) {
            Ok((deviation, tolerance)) => SuiteResult {
                name: s.name,
                passed: deviation <= tolerance,
                deviation,
                tolerance,
                error: None,
            },
            Err(e) => SuiteResult {
                name: s.name,
                passed: false,
                deviation: f64::NAN,
                tolerance: f64::NAN,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

pub fn verify_with(entropy: EntropyFn) -> Output {
    let results = run_suites(entropy);
    let mut t = String::new();
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        match &r.error {
            None => writeln!(
                t,
                "{status} {:<28} deviation {:.3e}  tolerance {:.1e}  margin {:.3e}",
                r.name,
                r.deviation + 0.0,
                r.tolerance,
                r.margin()
            ),
            Some(e) => writeln!(t, "{status} {:<28} error: {e}", r.name),
        }
        .unwrap();
    }
    let failed: Vec<&str> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.name)
        .collect();
    writeln!(t, "{} suites, {} failed", results.len(), failed.len()).unwrap();
    if !failed.is_empty() {
        writeln!(t, "failed: {}", failed.join(", ")).unwrap();
    }
    Output {
        code: if failed.is_empty() { 0 } else { 3 },
        text: t,
    }
}

pub fn verify() -> Output {
    verify_with(von_neumann_entropy)
}
