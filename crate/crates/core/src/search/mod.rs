//! Empirical information-versus-detection frontier.
//!
//! For a target detection probability `d*`, maximize one of `i0t`, `i0a`,
//! `i0c` over a parameterized attack family subject to `|d − d*| ≤ tol`.
//! The search is a bounded Nelder–Mead with random restarts on the
//! penalized objective `I − w · max(0, |d − d*| − tol)²`; when a run ends
//! outside the tolerance band the weight is raised tenfold and the run
//! continues from its best point. Every evaluated feasible point is a
//! candidate, so results are lower bounds on the true frontier.

pub mod nelder_mead;
pub mod unitary;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::attack::AttackSpec;
use crate::error::{Error, Result};
use crate::info::{entropies, Entropies};
use crate::protocol::ProtocolConfig;
use crate::quantum::StateVector;
use nelder_mead::{minimize, NelderMeadOptions};
pub use unitary::{parameterize_unitary, sample_product_attack, sample_random_attack};

use std::f64::consts::PI;

/// Label for search results; they are not certified suprema.
pub const RESULT_LABEL: &str = "empirical max found";

/// Margin above `best_i0t` that counts as "exceeds" in a sweep summary.
pub const EXCEED_MARGIN: f64 = 0.01;

const MAX_PENALTY: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Objective {
    I0t,
    I0a,
    I0c,
}

impl Objective {
    pub const ALL: [Objective; 3] = [Objective::I0t, Objective::I0a, Objective::I0c];

    pub fn name(self) -> &'static str {
        match self {
            Objective::I0t => "i0t",
            Objective::I0a => "i0a",
            Objective::I0c => "i0c",
        }
    }

    pub fn pick(self, e: &Entropies) -> f64 {
        match self {
            Objective::I0t => e.i0t,
            Objective::I0a => e.i0a,
            Objective::I0c => e.i0c,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown objective `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// Any unitary on travel ⊗ ancilla.
    General,
    /// `E = U_t ⊗ U_a`; never entangles.
    Product,
}

/// A deterministic map from `θ ∈ [−π, π]^n` to attacks. The ancilla always
/// starts in `|0>`; a general `E` can absorb any preparation of `|χ>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttackFamily {
    pub kind: FamilyKind,
    pub ancilla_dim: usize,
}

impl AttackFamily {
    pub fn general(ancilla_dim: usize) -> Self {
        Self {
            kind: FamilyKind::General,
            ancilla_dim,
        }
    }

    pub fn product(ancilla_dim: usize) -> Self {
        Self {
            kind: FamilyKind::Product,
            ancilla_dim,
        }
    }

    pub fn param_count(&self) -> usize {
        let k = self.ancilla_dim;
        match self.kind {
            FamilyKind::General => 4 * k * k,
            FamilyKind::Product => 4 + k * k,
        }
    }

    pub fn build(&self, theta: &[f64]) -> Result<AttackSpec> {
        if theta.len() != self.param_count() {
            return Err(Error::ParameterCount {
                expected: self.param_count(),
                found: theta.len(),
            });
        }
        let k = self.ancilla_dim;
        let e = match self.kind {
            FamilyKind::General => parameterize_unitary(theta, 2 * k)?,
            FamilyKind::Product => {
                let ut = parameterize_unitary(&theta[..4], 2)?;
                let ua = parameterize_unitary(&theta[4..], k)?;
                ut.tensor(&ua)
            }
        };
        AttackSpec::from_parts(&StateVector::basis(k, 0)?, &e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub d_grid: Vec<f64>,
    pub detection_tolerance: f64,
    pub restarts: usize,
    pub budget_per_restart: usize,
    pub seed: u64,
    pub objectives: Vec<Objective>,
    pub penalty_weight: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            d_grid: Vec::new(),
            detection_tolerance: 1e-3,
            restarts: 20,
            budget_per_restart: 2000,
            seed: 0,
            objectives: vec![Objective::I0t],
            penalty_weight: 100.0,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(&bad) = self.d_grid.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return Err(Error::OutOfRange {
                value: bad,
                lo: 0.0,
                hi: 1.0,
            });
        }
        if self.d_grid.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument("d grid must be sorted".into()));
        }
        if self.detection_tolerance < 0.0 || self.penalty_weight <= 0.0 {
            return Err(Error::InvalidArgument(
                "tolerance must be non-negative and penalty weight positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub objective: Objective,
    pub d_target: f64,
    pub d_achieved: f64,
    pub best_i0t: f64,
    pub best_i0a: f64,
    pub best_i0c: f64,
    pub theta_best: Vec<f64>,
    pub evaluations: usize,
}

impl CurvePoint {
    pub fn best_value(&self) -> f64 {
        match self.objective {
            Objective::I0t => self.best_i0t,
            Objective::I0a => self.best_i0a,
            Objective::I0c => self.best_i0c,
        }
    }
}

/// Outcome for one `(d_target, objective)` pair.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchResult {
    Found(CurvePoint),
    /// No evaluated point came within the detection tolerance.
    Infeasible {
        objective: Objective,
        d_target: f64,
        closest_d: f64,
        evaluations: usize,
    },
}

impl SearchResult {
    pub fn objective(&self) -> Objective {
        match self {
            SearchResult::Found(p) => p.objective,
            SearchResult::Infeasible { objective, .. } => *objective,
        }
    }

    pub fn d_target(&self) -> f64 {
        match self {
            SearchResult::Found(p) => p.d_target,
            SearchResult::Infeasible { d_target, .. } => *d_target,
        }
    }

    pub fn evaluations(&self) -> usize {
        match self {
            SearchResult::Found(p) => p.evaluations,
            SearchResult::Infeasible { evaluations, .. } => *evaluations,
        }
    }

    pub fn point(&self) -> Option<&CurvePoint> {
        match self {
            SearchResult::Found(p) => Some(p),
            SearchResult::Infeasible { .. } => None,
        }
    }
}

/// SplitMix64 over the master seed and a task path.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    path.iter().fold(mix(master), |acc, &p| mix(acc ^ mix(p)))
}

struct Candidate {
    value: f64,
    theta: Vec<f64>,
    eval: Entropies,
}

struct RestartOutcome {
    best: Option<Candidate>,
    closest_d: f64,
    evaluations: usize,
}

/// Evaluates the attack built from `theta`.
pub fn evaluate(
    family: &AttackFamily,
    config: &ProtocolConfig,
    theta: &[f64],
) -> Result<Entropies> {
    entropies(&family.build(theta)?, config)
}

fn run_restart(
    family: &AttackFamily,
    config: &ProtocolConfig,
    objective: Objective,
    d_target: f64,
    cfg: &SweepConfig,
    start: Vec<f64>,
) -> RestartOutcome {
    let tol = cfg.detection_tolerance;
    let mut best: Option<Candidate> = None;
    let mut closest_d = f64::NAN;
    let mut used = 0usize;
    let mut weight = cfg.penalty_weight;
    let mut x = start;

    while used < cfg.budget_per_restart {
        let mut stage_best_feasible = false;
        let opts = NelderMeadOptions {
            max_evals: cfg.budget_per_restart - used,
            lower: -PI,
            upper: PI,
            ..Default::default()
        };
        let m = minimize(
            |theta| {
                let Ok(e) = evaluate(family, config, theta) else {
                    return f64::INFINITY;
                };
                let miss = (e.d - d_target).abs();
                if closest_d.is_nan() || miss < (closest_d - d_target).abs() {
                    closest_d = e.d;
                }
                let value = objective.pick(&e);
                if miss <= tol && best.as_ref().is_none_or(|b| value > b.value) {
                    best = Some(Candidate {
                        value,
                        theta: theta.to_vec(),
                        eval: e,
                    });
                }
                let excess = (miss - tol).max(0.0);
                -(value - weight * excess * excess)
            },
            &x,
            &opts,
        );
        used += m.evaluations;
        if let Ok(e) = evaluate(family, config, &m.x) {
            stage_best_feasible = (e.d - d_target).abs() <= tol;
        }
        if stage_best_feasible || weight >= MAX_PENALTY || m.evaluations == 0 {
            break;
        }
        weight *= 10.0;
        x = m.x;
    }
    RestartOutcome {
        best,
        closest_d,
        evaluations: used,
    }
}

/// Best feasible attack found for one detection target.
pub fn maximize_information(
    family: &AttackFamily,
    config: &ProtocolConfig,
    objective: Objective,
    d_target: f64,
    cfg: &SweepConfig,
) -> Result<SearchResult> {
    if !(0.0..=1.0).contains(&d_target) {
        return Err(Error::OutOfRange {
            value: d_target,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let n = family.param_count();
    // fail early on structural problems instead of inside the search
    evaluate(family, config, &vec![0.0; n])?;

    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let start = if r == 0 {
                vec![0.0; n]
            } else {
                let seed = derive_seed(cfg.seed, &[d_target.to_bits(), objective as u64, r as u64]);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..n).map(|_| rng.random_range(-PI..PI)).collect()
            };
            run_restart(family, config, objective, d_target, cfg, start)
        })
        .collect();

    let evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    let mut best: Option<Candidate> = None;
    let mut closest_d = f64::NAN;
    for o in outcomes {
        if closest_d.is_nan() || (o.closest_d - d_target).abs() < (closest_d - d_target).abs() {
            closest_d = o.closest_d;
        }
        if let Some(c) = o.best {
            if best.as_ref().is_none_or(|b| c.value > b.value) {
                best = Some(c);
            }
        }
    }
    Ok(match best {
        Some(c) => SearchResult::Found(CurvePoint {
            objective,
            d_target,
            d_achieved: c.eval.d,
            best_i0t: c.eval.i0t,
            best_i0a: c.eval.i0a,
            best_i0c: c.eval.i0c,
            theta_best: c.theta,
            evaluations,
        }),
        None => SearchResult::Infeasible {
            objective,
            d_target,
            closest_d,
            evaluations,
        },
    })
}

/// Per-grid-value comparison: each `best_*` is the largest value of that
/// quantity over every feasible point found at this target.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub d_target: f64,
    pub best_i0t: f64,
    pub best_i0a: f64,
    pub best_i0c: f64,
    pub i0c_exceeds_i0t: bool,
    pub i0a_exceeds_i0t: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Sorted by grid value, then objective.
    pub points: Vec<SearchResult>,
    pub summary: Vec<SummaryRow>,
}

impl SweepResult {
    pub fn flagged(&self) -> impl Iterator<Item = &SummaryRow> {
        self.summary
            .iter()
            .filter(|r| r.i0c_exceeds_i0t || r.i0a_exceeds_i0t)
    }

    pub fn infeasible(&self) -> impl Iterator<Item = &SearchResult> {
        self.points.iter().filter(|p| p.point().is_none())
    }
}

pub fn sweep(
    family: &AttackFamily,
    config: &ProtocolConfig,
    cfg: &SweepConfig,
) -> Result<SweepResult> {
    cfg.validate()?;
    let mut objectives = cfg.objectives.clone();
    objectives.sort();
    objectives.dedup();
    let tasks: Vec<(usize, Objective)> = (0..cfg.d_grid.len())
        .flat_map(|i| objectives.iter().map(move |&o| (i, o)))
        .collect();
    let mut points: Vec<(usize, SearchResult)> = tasks
        .par_iter()
        .map(|&(i, o)| {
            Ok((
                i,
                maximize_information(family, config, o, cfg.d_grid[i], cfg)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    points.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.objective().cmp(&b.1.objective())));

    let mut summary = Vec::new();
    for (i, &d_target) in cfg.d_grid.iter().enumerate() {
        let found: Vec<&CurvePoint> = points
            .iter()
            .filter(|(j, _)| *j == i)
            .filter_map(|(_, p)| p.point())
            .collect();
        if found.is_empty() {
            continue;
        }
        let max_of = |f: fn(&CurvePoint) -> f64| {
            found.iter().map(|p| f(p)).fold(f64::NEG_INFINITY, f64::max)
        };
        let best_i0t = max_of(|p| p.best_i0t);
        let best_i0a = max_of(|p| p.best_i0a);
        let best_i0c = max_of(|p| p.best_i0c);
        summary.push(SummaryRow {
            d_target,
            best_i0t,
            best_i0a,
            best_i0c,
            i0c_exceeds_i0t: best_i0c > best_i0t + EXCEED_MARGIN,
            i0a_exceeds_i0t: best_i0a > best_i0t + EXCEED_MARGIN,
        });
    }
    Ok(SweepResult {
        points: points.into_iter().map(|(_, p)| p).collect(),
        summary,
    })
}
