//! The subcommands. Each returns the text for stdout and an exit code so
//! the binary stays a thin shell and tests can call them directly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use pingpong_core::search::RESULT_LABEL;
use pingpong_core::{
    builtin_attack, entropy_inequality_check, information_report, monte_carlo, sweep, AttackFamily,
    AttackSpec, BuiltinAttack, EncodingSet, InfoReport, Mode, Objective, ProtocolConfig,
    SweepConfig,
};
use serde::Serialize;

use crate::error::CliError;
use crate::formats::{curve_csv, fmt_sig, load_attack, parse_grid, CSV_HEADER};

/// Tolerance for the demo's hard check of `d` and `I0t`.
pub const DEMO_TOL: f64 = 1e-9;
/// Largest |z| accepted by `simulate`.
pub const MAX_Z: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub text: String,
}

impl Output {
    fn new(ok: bool, text: String) -> Self {
        let code = if ok {
            CliError::SUCCESS
        } else {
            CliError::VALIDATION
        };
        Self { code, text }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Protocol {
    pub mode: Mode,
    pub encoding: EncodingSet,
}

impl Default for Protocol {
    fn default() -> Self {
        Self {
            mode: Mode::Simplified,
            encoding: EncodingSet::Iz,
        }
    }
}

impl Protocol {
    pub fn config(&self) -> ProtocolConfig {
        ProtocolConfig::for_mode(self.mode).with_encoding(self.encoding)
    }
}

/// Fixed-point with 12 decimals; negative zero prints as zero.
fn f12(x: f64) -> String {
    format!("{:.12}", x + 0.0)
}

fn render_report(out: &mut String, r: &InfoReport) {
    let diag = entropy_inequality_check(r);
    let rows = [
        ("d", r.d),
        ("I0t", r.i0t),
        ("I0a", r.i0a),
        ("I0c", r.i0c),
        ("holevo_travel", r.holevo_t),
        ("holevo_composite", r.holevo_c),
        ("subadditivity_margin", diag.subadditivity_margin),
        ("araki_lieb_margin", diag.araki_lieb_margin),
    ];
    for (name, v) in rows {
        writeln!(out, "{name} = {}", f12(v)).unwrap();
    }
    if let Some(c) = &r.paper_claim_deviation {
        writeln!(out).unwrap();
        writeln!(out, "[claimed vs computed] I0c").unwrap();
        writeln!(out, "  claimed  = {}", c.claimed).unwrap();
        writeln!(out, "  computed = {}", f12(c.computed)).unwrap();
        writeln!(out, "  delta    = {}", f12(c.delta)).unwrap();
        if c.delta.abs() > DEMO_TOL {
            writeln!(
                out,
                "  WARNING: I0c computed from the averaged composite state is {}, not the claimed {}",
                f12(c.computed),
                c.claimed
            )
            .unwrap();
        }
    }
}

pub fn demo() -> Result<Output, CliError> {
    let attack = builtin_attack(BuiltinAttack::PaperCounterexample);
    let r = information_report(&attack, &ProtocolConfig::simplified())?;
    let mut text = String::new();
    writeln!(text, "attack = paper_counterexample (E = R x I, chi = |+>)").unwrap();
    writeln!(text, "mode = simplified, encoding = iz, bob_initial = |0>").unwrap();
    render_report(&mut text, &r);
    let ok = (r.d - 0.5).abs() <= DEMO_TOL && (r.i0t - 1.0).abs() <= DEMO_TOL;
    writeln!(text).unwrap();
    if ok {
        writeln!(text, "check: d = 1/2 and I0t = 1 reproduced").unwrap();
    } else {
        writeln!(
            text,
            "check FAILED: expected d = 0.5 and I0t = 1.0 within {DEMO_TOL:e}"
        )
        .unwrap();
    }
    Ok(Output::new(ok, text))
}

#[derive(Debug, Serialize)]
struct JsonClaim {
    claimed: f64,
    computed: f64,
    delta: f64,
}

#[derive(Debug, Serialize)]
struct JsonReport {
    mode: &'static str,
    encoding: &'static str,
    d: f64,
    i0t: f64,
    i0a: f64,
    i0c: f64,
    holevo_t: f64,
    holevo_c: f64,
    ancilla_dim: usize,
    paper_claim_deviation: Option<JsonClaim>,
}

pub fn report(file: &Path, protocol: Protocol, json: bool) -> Result<Output, CliError> {
    let attack = load_attack(file)?;
    let r = information_report(&attack, &protocol.config())?;
    let text = if json {
        let j = JsonReport {
            mode: protocol.mode.name(),
            encoding: protocol.encoding.name(),
            d: r.d,
            i0t: r.i0t,
            i0a: r.i0a,
            i0c: r.i0c,
            holevo_t: r.holevo_t,
            holevo_c: r.holevo_c,
            ancilla_dim: r.ancilla_dim,
            paper_claim_deviation: r.paper_claim_deviation.map(|c| JsonClaim {
                claimed: c.claimed,
                computed: c.computed,
                delta: c.delta,
            }),
        };
        serde_json::to_string_pretty(&j).expect("report serializes") + "\n"
    } else {
        let mut t = String::new();
        writeln!(t, "attack = {}", file.display()).unwrap();
        writeln!(
            t,
            "mode = {}, encoding = {}, ancilla_dim = {}",
            protocol.mode.name(),
            protocol.encoding.name(),
            r.ancilla_dim
        )
        .unwrap();
        render_report(&mut t, &r);
        t
    };
    Ok(Output::new(true, text))
}

pub fn simulate(
    file: &Path,
    protocol: Protocol,
    rounds: u64,
    seed: u64,
) -> Result<Output, CliError> {
    if rounds == 0 {
        return Err(CliError::Usage("--rounds must be at least 1".into()));
    }
    let attack = load_attack(file)?;
    simulate_attack(&attack, protocol, rounds, seed)
}

pub fn simulate_attack(
    attack: &AttackSpec,
    protocol: Protocol,
    rounds: u64,
    seed: u64,
) -> Result<Output, CliError> {
    let s = monte_carlo(&protocol.config(), attack, rounds, seed)?;
    let z = s.z_score();
    let mut t = String::new();
    writeln!(t, "control_rounds = {}", s.control_rounds).unwrap();
    writeln!(t, "detections = {}", s.detections).unwrap();
    writeln!(t, "message_rounds = {}", s.message_rounds).unwrap();
    if let Some(acc) = s.decode_accuracy {
        writeln!(t, "decode_accuracy = {}", f12(acc)).unwrap();
    }
    writeln!(t, "empirical_d = {}", f12(s.empirical_d)).unwrap();
    writeln!(t, "analytic_d = {}", f12(s.analytic_d)).unwrap();
    writeln!(t, "sigma = {}", f12(s.sigma())).unwrap();
    writeln!(t, "z = {z:.6}").unwrap();
    let ok = z.abs() <= MAX_Z;
    if !ok {
        writeln!(t, "FAIL: |z| > {MAX_Z}").unwrap();
    }
    Ok(Output::new(ok, t))
}

#[derive(Debug, Clone)]
pub struct SweepArgs {
    pub grid: String,
    pub objectives: Vec<Objective>,
    pub seed: u64,
    pub out: PathBuf,
    pub protocol: Protocol,
    pub ancilla_dim: usize,
    pub restarts: Option<usize>,
    pub budget: Option<usize>,
}

impl SweepArgs {
    pub fn new(grid: impl Into<String>, out: impl Into<PathBuf>) -> Self {
        Self {
            grid: grid.into(),
            objectives: vec![Objective::I0t],
            seed: 0,
            out: out.into(),
            protocol: Protocol::default(),
            ancilla_dim: 2,
            restarts: None,
            budget: None,
        }
    }
}

pub fn sweep_cmd(args: &SweepArgs) -> Result<Output, CliError> {
    let d_grid = parse_grid(&args.grid)?;
    if args.objectives.is_empty() {
        return Err(CliError::Usage(
            "at least one --objective is required".into(),
        ));
    }
    if args.ancilla_dim == 0 {
        return Err(CliError::Usage("--ancilla-dim must be at least 1".into()));
    }
    let defaults = SweepConfig::default();
    let cfg = SweepConfig {
        d_grid,
        seed: args.seed,
        objectives: args.objectives.clone(),
        restarts: args.restarts.unwrap_or(defaults.restarts),
        budget_per_restart: args.budget.unwrap_or(defaults.budget_per_restart),
        ..defaults
    };
    let result = sweep(
        &AttackFamily::general(args.ancilla_dim),
        &args.protocol.config(),
        &cfg,
    )?;
    std::fs::write(&args.out, curve_csv(&result.points)).map_err(|source| CliError::Io {
        path: args.out.clone(),
        source,
    })?;

    let mut t = String::new();
    writeln!(
        t,
        "wrote {} rows to {}",
        result.points.len(),
        args.out.display()
    )
    .unwrap();
    writeln!(t, "columns: {}", CSV_HEADER.join(",")).unwrap();
    writeln!(t).unwrap();
    writeln!(t, "summary ({RESULT_LABEL}):").unwrap();
    writeln!(t, "d_target,max_i0t,max_i0a,max_i0c,i0a>i0t,i0c>i0t").unwrap();
    for row in &result.summary {
        writeln!(
            t,
            "{},{},{},{},{},{}",
            fmt_sig(row.d_target),
            fmt_sig(row.best_i0t),
            fmt_sig(row.best_i0a),
            fmt_sig(row.best_i0c),
            row.i0a_exceeds_i0t,
            row.i0c_exceeds_i0t
        )
        .unwrap();
    }
    let flagged: Vec<String> = result.flagged().map(|r| fmt_sig(r.d_target)).collect();
    if flagged.is_empty() {
        writeln!(
            t,
            "no grid point with i0a or i0c above i0t by more than the margin"
        )
        .unwrap();
    } else {
        writeln!(
            t,
            "i0a or i0c above i0t at d_target = {}",
            flagged.join(", ")
        )
        .unwrap();
    }
    for p in result.infeasible() {
        writeln!(
            t,
            "infeasible: d_target = {}, objective = {}",
            fmt_sig(p.d_target()),
            p.objective()
        )
        .unwrap();
    }
    Ok(Output::new(true, t))
}
