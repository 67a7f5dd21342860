//! Acceptance criteria, one line each. Exits non-zero if any criterion fails
//! or exceeds its runtime limit.

use std::time::{Duration, Instant};

use num_complex::Complex64 as C;
use pingpong_cli::demo;
use pingpong_core::attack::eve_accessible_state;
use pingpong_core::search::sample_random_attack;
use pingpong_core::{
    builtin_attack, detection_probability, entropy_inequality_check, holevo_bound,
    information_report, maximize_information, monte_carlo, post_encoding_ensemble, AttackFamily,
    AttackSpec, BuiltinAttack, DensityMatrix, Objective, ProtocolConfig, Subsystem, SweepConfig,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, u64);

fn counterexample() -> AttackSpec {
    builtin_attack(BuiltinAttack::PaperCounterexample)
}

/// `−Σ λ log₂ λ` through natural logs.
fn entropy_of(spectrum: &[f64]) -> f64 {
    spectrum
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln() / std::f64::consts::LN_2)
        .sum()
}

fn h(x: f64) -> f64 {
    entropy_of(&[x, 1.0 - x])
}

fn eig2(a: f64, b: C, d: f64) -> [f64; 2] {
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean + r, mean - r]
}

/// Composite entropy after averaging over {I, Z}: the travel coherences
/// vanish, leaving two ancilla-sized diagonal blocks.
fn dephased_oracle(a: &AttackSpec) -> f64 {
    assert_eq!(a.ancilla_dim, 2);
    let rho = eve_accessible_state(a, &ProtocolConfig::simplified()).unwrap();
    let m = rho.matrix();
    let mut spectrum = Vec::new();
    for t in 0..2 {
        let o = 2 * t;
        spectrum.extend(eig2(m[(o, o)].re, m[(o, o + 1)], m[(o + 1, o + 1)].re));
    }
    entropy_of(&spectrum)
}

fn within(label: &str, got: f64, want: f64, tol: f64) -> Check {
    let err = (got - want).abs();
    if err <= tol {
        Ok(format!(
            "{label} = {got:.15} (|err| {err:.1e} <= {tol:.1e})"
        ))
    } else {
        Err(format!(
            "{label} = {got:.15}, expected {want} within {tol:.0e}"
        ))
    }
}

fn c1() -> Check {
    let d = detection_probability(&counterexample(), &ProtocolConfig::simplified())
        .map_err(|e| e.to_string())?;
    within("d", d, 0.5, 1e-12)
}

fn c2() -> Check {
    let r = information_report(&counterexample(), &ProtocolConfig::simplified())
        .map_err(|e| e.to_string())?;
    within("I0t", r.i0t, 1.0, 1e-12)
}

fn c3() -> Check {
    let r = information_report(&counterexample(), &ProtocolConfig::simplified())
        .map_err(|e| e.to_string())?;
    within("I0a", r.i0a, 0.0, 1e-12)
}

fn c4() -> Check {
    let mut attacks = vec![counterexample()];
    attacks.extend((0..20).map(|s| sample_random_attack(2, 40_000 + s).unwrap()));
    let mut worst = 0.0f64;
    for a in &attacks {
        let r = information_report(a, &ProtocolConfig::simplified()).map_err(|e| e.to_string())?;
        worst = worst.max((r.i0c - dephased_oracle(a)).abs());
    }
    if worst > 1e-10 {
        return Err(format!("path disagreement {worst:.2e} > 1e-10"));
    }
    let i0c = dephased_oracle(&counterexample());
    let out = demo().map_err(|e| e.to_string())?;
    let emitted = out.text.contains("[claimed vs computed] I0c")
        && out.text.contains("claimed  = 2")
        && out.text.contains("WARNING");
    if !emitted {
        return Err("demo did not emit the claimed-vs-computed I0c block".into());
    }
    Ok(format!(
        "paths agree to {worst:.1e}; S(rho_c) = {i0c:.12} vs claimed 2, deviation flagged by demo"
    ))
}

fn c5() -> Check {
    let cfg = ProtocolConfig::simplified();
    let mut worst = 0.0f64;
    for s in 0..300u64 {
        let a = sample_random_attack(1 + s as usize % 3, 50_000 + s).map_err(|e| e.to_string())?;
        let r = information_report(&a, &cfg).map_err(|e| e.to_string())?;
        worst = worst.max((r.i0t - h(r.d)).abs());
    }
    if worst <= 1e-10 {
        Ok(format!("max |I0t - H(d)| = {worst:.1e} over 300 attacks"))
    } else {
        Err(format!("max |I0t - H(d)| = {worst:.2e} > 1e-10"))
    }
}

fn c6() -> Check {
    let n = 100_000u64;
    let s = monte_carlo(&ProtocolConfig::simplified(), &counterexample(), n, 7)
        .map_err(|e| e.to_string())?;
    let bound = 4.0 * (0.25 / n as f64).sqrt();
    within("empirical_d", s.empirical_d, 0.5, bound)
}

fn c7() -> Check {
    let mut worst = f64::INFINITY;
    for s in 0..500u64 {
        let a = sample_random_attack(2, 60_000 + s).map_err(|e| e.to_string())?;
        for cfg in [ProtocolConfig::simplified(), ProtocolConfig::bell()] {
            let r = information_report(&a, &cfg).map_err(|e| e.to_string())?;
            let d = entropy_inequality_check(&r);
            // recompute the margins from the reported entropies
            let sub = r.i0t + r.i0a - r.i0c;
            let al = r.i0c - (r.i0t - r.i0a).abs();
            if (sub - d.subadditivity_margin).abs() > 1e-15
                || (al - d.araki_lieb_margin).abs() > 1e-15
            {
                return Err(format!(
                    "seed {s}: diagnostics disagree with reported entropies"
                ));
            }
            worst = worst.min(sub).min(al);
        }
    }
    if worst >= -1e-8 {
        Ok(format!(
            "minimum margin {worst:.3e} over 500 attacks x 2 modes"
        ))
    } else {
        Err(format!("minimum margin {worst:.3e} < -1e-8"))
    }
}

fn c8() -> Check {
    let fam = AttackFamily::general(2);
    let cfg = ProtocolConfig::simplified();
    let sweep_cfg = SweepConfig::default();
    let mut values = Vec::new();
    for d in [0.5, 0.0] {
        let r = maximize_information(&fam, &cfg, Objective::I0t, d, &sweep_cfg)
            .map_err(|e| e.to_string())?;
        let p = r
            .point()
            .ok_or_else(|| format!("no feasible point at d = {d}"))?;
        values.push(p.best_i0t);
    }
    let (top, bottom) = (values[0], values[1]);
    if (0.99..=1.0).contains(&top) && bottom <= 0.02 {
        Ok(format!("best I0t at d=0.5: {top:.6}; at d=0: {bottom:.6}"))
    } else {
        Err(format!("best I0t at d=0.5: {top}; at d=0: {bottom}"))
    }
}

fn c9() -> Check {
    let mut parts = Vec::new();
    for (cfg, want) in [
        (ProtocolConfig::simplified(), 1.0),
        (ProtocolConfig::bell(), 0.0),
    ] {
        let ens = post_encoding_ensemble(&counterexample(), &cfg).map_err(|e| e.to_string())?;
        let chi = holevo_bound(&ens, Subsystem::Composite).map_err(|e| e.to_string())?;
        parts.push(within(cfg.mode.name(), chi, want, 1e-10)?);
    }
    Ok(parts.join("; "))
}

fn c10() -> Check {
    let mut worst = 0.0f64;
    for n in [2usize, 3, 4, 8] {
        let s = pingpong_core::quantum::von_neumann_entropy(&DensityMatrix::maximally_mixed(n))
            .map_err(|e| e.to_string())?;
        worst = worst.max((s - (n as f64).log2()).abs());
    }
    if worst <= 1e-12 {
        Ok(format!(
            "max |S(I/n) - log2 n| = {worst:.1e} for n in {{2,3,4,8}}"
        ))
    } else {
        Err(format!("max |S(I/n) - log2 n| = {worst:.2e}"))
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 counterexample detection probability", c1, 1),
        ("2 counterexample travel entropy", c2, 1),
        ("3 ancilla entropy", c3, 1),
        ("4 composite entropy audit", c4, 1),
        ("5 simplified-mode identity I0t = H(d)", c5, 30),
        ("6 Monte Carlo consistency", c6, 10),
        ("7 entropy inequalities", c7, 60),
        ("8 frontier sanity", c8, 300),
        ("9 Holevo contrast", c9, 1),
        ("10 maximal-mixing anchor", c10, 1),
    ];
    let mut failures = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let slow = elapsed > Duration::from_secs(limit);
        let (status, detail) = match (&result, slow) {
            (Ok(msg), false) => ("PASS", msg.clone()),
            (Ok(msg), true) => ("FAIL", format!("{msg}; took {elapsed:.2?} > {limit} s")),
            (Err(msg), _) => ("FAIL", msg.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("[{status}] criterion {name}: {detail} ({elapsed:.2?})");
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
