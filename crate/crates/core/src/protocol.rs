//! Ping-pong protocol rounds.
//!
//! Bob prepares either a single travel qubit (simplified mode) or the pair
//! `(|01> + |10>)/√2` over (home, travel) (Bell mode) and sends the travel
//! qubit to Alice. Eve may act on the forward leg only. In a control round
//! Alice measures the travel qubit; in a message round she applies one of the
//! encoding unitaries and returns the qubit to Bob, who decodes.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::attack::{apply_attack, composite_dims, AttackSpec};
use crate::error::{Error, Result};
use crate::quantum::state::{
    computational_basis, measure_projective, reduce, DensityMatrix, StateVector, UnitaryOperator,
};
use crate::quantum::{gates, C64};

/// Orthogonality tolerance when deciding whether encoded states can be
/// told apart.
const ORTHOGONAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Simplified,
    Bell,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Simplified => "simplified",
            Mode::Bell => "bell",
        }
    }
}

/// Named encoding sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EncodingSet {
    /// `{I, σ_z}`, one bit per round.
    Iz,
    /// `{I, σ_x, iσ_y, σ_z}`, two bits per round.
    Paulis,
}

impl EncodingSet {
    pub fn name(self) -> &'static str {
        match self {
            EncodingSet::Iz => "iz",
            EncodingSet::Paulis => "paulis",
        }
    }

    pub fn encodings(self) -> Vec<Encoding> {
        match self {
            EncodingSet::Iz => vec![
                Encoding::new("I", gates::identity(), 0.5),
                Encoding::new("Z", gates::pauli_z(), 0.5),
            ],
            EncodingSet::Paulis => vec![
                Encoding::new("I", gates::identity(), 0.25),
                Encoding::new("X", gates::pauli_x(), 0.25),
                Encoding::new("iY", gates::i_pauli_y(), 0.25),
                Encoding::new("Z", gates::pauli_z(), 0.25),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Encoding {
    pub label: String,
    pub op: UnitaryOperator,
    pub prior: f64,
}

impl Encoding {
    pub fn new(label: impl Into<String>, op: UnitaryOperator, prior: f64) -> Self {
        Self {
            label: label.into(),
            op,
            prior,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub mode: Mode,
    /// Travel qubit in simplified mode; the Bell pair in Bell mode.
    pub bob_initial: StateVector,
    pub encodings: Vec<Encoding>,
    /// Probability that a Monte Carlo round is a control round.
    pub control_probability: f64,
}

pub const DEFAULT_CONTROL_PROBABILITY: f64 = 0.5;

/// `(|01> + |10>)/√2` over (home, travel).
pub fn psi_plus() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_real(&[0.0, h, h, 0.0]).expect("normalized")
}

impl ProtocolConfig {
    /// Validates priors, encoding unitaries and the initial state.
    pub fn new(
        mode: Mode,
        bob_initial: StateVector,
        encodings: Vec<Encoding>,
        control_probability: f64,
    ) -> Result<Self> {
        if encodings.is_empty() {
            return Err(Error::InvalidArgument("no encoding operations".into()));
        }
        let total: f64 = encodings.iter().map(|e| e.prior).sum();
        if (total - 1.0).abs() > 1e-12 || encodings.iter().any(|e| e.prior < 0.0) {
            return Err(Error::BadProbabilities { sum: total });
        }
        if let Some(e) = encodings.iter().find(|e| e.op.dim() != 2) {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: e.op.dim(),
            });
        }
        let expected = match mode {
            Mode::Simplified => 2,
            Mode::Bell => 4,
        };
        if bob_initial.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: bob_initial.dim(),
            });
        }
        if !(0.0..=1.0).contains(&control_probability) {
            return Err(Error::OutOfRange {
                value: control_probability,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(Self {
            mode,
            bob_initial,
            encodings,
            control_probability,
        })
    }

    /// Bob sends `|0>`, Alice encodes with `{I, σ_z}`.
    pub fn simplified() -> Self {
        Self {
            mode: Mode::Simplified,
            bob_initial: StateVector::basis(2, 0).expect("|0>"),
            encodings: EncodingSet::Iz.encodings(),
            control_probability: DEFAULT_CONTROL_PROBABILITY,
        }
    }

    pub fn bell() -> Self {
        Self {
            mode: Mode::Bell,
            bob_initial: psi_plus(),
            encodings: EncodingSet::Iz.encodings(),
            control_probability: DEFAULT_CONTROL_PROBABILITY,
        }
    }

    pub fn for_mode(mode: Mode) -> Self {
        match mode {
            Mode::Simplified => Self::simplified(),
            Mode::Bell => Self::bell(),
        }
    }

    pub fn with_encoding(mut self, set: EncodingSet) -> Self {
        self.encodings = set.encodings();
        self
    }

    /// Replaces the travel qubit Bob sends (simplified mode only).
    pub fn with_bob_initial(self, state: StateVector) -> Result<Self> {
        if self.mode == Mode::Bell {
            return Err(Error::InvalidArgument(
                "Bell mode always starts from (|01> + |10>)/√2".into(),
            ));
        }
        Self::new(self.mode, state, self.encodings, self.control_probability)
    }

    pub fn with_control_probability(self, p: f64) -> Result<Self> {
        Self::new(self.mode, self.bob_initial, self.encodings, p)
    }

    /// Dimensions of everything Bob holds at the end of a round.
    fn bob_dims(&self) -> usize {
        match self.mode {
            Mode::Simplified => 2,
            Mode::Bell => 4,
        }
    }

    /// Subsystem indices of Bob's qubits inside the attacked composite.
    fn bob_subsystems(&self) -> &'static [usize] {
        match self.mode {
            Mode::Simplified => &[0],
            Mode::Bell => &[0, 1],
        }
    }

    /// Encoding op lifted onto the full composite (home ⊗ travel ⊗ ancilla).
    fn lift(&self, op: &UnitaryOperator, ancilla_dim: usize) -> UnitaryOperator {
        let on_travel = op.tensor(&UnitaryOperator::identity(ancilla_dim));
        match self.mode {
            Mode::Simplified => on_travel,
            Mode::Bell => UnitaryOperator::identity(2).tensor(&on_travel),
        }
    }

    fn check_attack(&self, attack: &AttackSpec) -> Result<()> {
        attack.validate()
    }
}

pub fn prepare_initial(config: &ProtocolConfig) -> StateVector {
    match config.mode {
        Mode::Simplified => config.bob_initial.clone(),
        Mode::Bell => psi_plus(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Actor {
    Bob,
    Eve,
    Alice,
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Actor::Bob => "Bob",
            Actor::Eve => "Eve",
            Actor::Alice => "Alice",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TranscriptEntry {
    pub actor: Actor,
    pub action: &'static str,
    pub data: String,
}

fn entry(actor: Actor, action: &'static str, data: impl Into<String>) -> TranscriptEntry {
    TranscriptEntry {
        actor,
        action,
        data: data.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundKind {
    Control {
        detected: bool,
    },
    /// `decoded` is `None` when Bob cannot distinguish the encodings.
    Message {
        sent: usize,
        decoded: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundOutcome {
    pub kind: RoundKind,
    pub transcript: Vec<TranscriptEntry>,
}

impl RoundOutcome {
    pub fn is_control(&self) -> bool {
        matches!(self.kind, RoundKind::Control { .. })
    }

    pub fn detected(&self) -> Option<bool> {
        match self.kind {
            RoundKind::Control { detected } => Some(detected),
            RoundKind::Message { .. } => None,
        }
    }

    pub fn decoded_bit(&self) -> Option<usize> {
        match self.kind {
            RoundKind::Control { .. } => None,
            RoundKind::Message { decoded, .. } => decoded,
        }
    }
}

/// One joint outcome of a control measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlOutcome {
    /// Bob's home-qubit reading (Bell mode only).
    pub home: Option<usize>,
    /// Alice's reading: in simplified mode 0 means "found Bob's state".
    pub travel: usize,
    pub probability: f64,
    pub detected: bool,
}

/// Exact control-round statistics for one attack.
#[derive(Debug, Clone)]
pub struct ControlRound {
    pub mode: Mode,
    pub detection_probability: f64,
    pub outcomes: Vec<ControlOutcome>,
}

impl ControlRound {
    fn pick<R: Rng + ?Sized>(&self, rng: &mut R) -> &ControlOutcome {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for o in &self.outcomes {
            acc += o.probability;
            if u < acc {
                return o;
            }
        }
        self.outcomes.last().expect("at least one outcome")
    }

    pub fn sample_detected<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        self.pick(rng).detected
    }

    /// Draws one control round from the exact joint distribution.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> RoundOutcome {
        let o = *self.pick(rng);
        let mut transcript = vec![
            entry(Actor::Bob, "prepare", self.mode.name()),
            entry(Actor::Eve, "attack", "forward leg"),
            entry(Actor::Alice, "measure", format!("travel={}", o.travel)),
        ];
        if let Some(h) = o.home {
            transcript.push(entry(Actor::Bob, "measure", format!("home={h}")));
        }
        transcript.push(entry(
            Actor::Bob,
            "compare",
            if o.detected { "mismatch" } else { "consistent" },
        ));
        RoundOutcome {
            kind: RoundKind::Control {
                detected: o.detected,
            },
            transcript,
        }
    }
}

/// Analytic control round. In simplified mode Alice measures in the basis
/// `{b, b⊥}` and `d = 1 - <b|ρ_t|b>`. In Bell mode both parties measure in
/// the computational basis and equal results expose Eve.
pub fn run_control_round(config: &ProtocolConfig, attack: &AttackSpec) -> Result<ControlRound> {
    config.check_attack(attack)?;
    let rho = apply_attack(attack, config)?;
    let dims = composite_dims(config.mode, attack.ancilla_dim);
    let outcomes = match config.mode {
        Mode::Simplified => {
            let travel = reduce(&rho, &dims, &[0])?;
            let b = &config.bob_initial;
            let a = b.amplitudes();
            let perp = StateVector::new(vec![-a[1].conj(), a[0].conj()])?;
            let p = measure_projective(&travel, &[b.clone(), perp])?;
            let stay = p[0].clamp(0.0, 1.0);
            vec![
                ControlOutcome {
                    home: None,
                    travel: 0,
                    probability: stay,
                    detected: false,
                },
                ControlOutcome {
                    home: None,
                    travel: 1,
                    probability: 1.0 - stay,
                    detected: true,
                },
            ]
        }
        Mode::Bell => {
            let pair = reduce(&rho, &dims, &[0, 1])?;
            let p = measure_projective(&pair, &computational_basis(4))?;
            (0..4)
                .map(|i| ControlOutcome {
                    home: Some(i >> 1),
                    travel: i & 1,
                    probability: p[i].clamp(0.0, 1.0),
                    detected: (i >> 1) == (i & 1),
                })
                .collect()
        }
    };
    let d: f64 = outcomes
        .iter()
        .filter(|o| o.detected)
        .map(|o| o.probability)
        .sum();
    Ok(ControlRound {
        mode: config.mode,
        detection_probability: d.clamp(0.0, 1.0),
        outcomes,
    })
}

/// Noiseless post-encoding states on Bob's side, if mutually orthogonal.
pub fn decoding_basis(config: &ProtocolConfig) -> Result<Option<Vec<StateVector>>> {
    let init = prepare_initial(config);
    let states = config
        .encodings
        .iter()
        .map(|e| config.lift(&e.op, 1).apply(&init))
        .collect::<Result<Vec<_>>>()?;
    for (i, a) in states.iter().enumerate() {
        for b in &states[i + 1..] {
            if a.inner(b).norm() > ORTHOGONAL_TOL {
                return Ok(None);
            }
        }
    }
    Ok(Some(states))
}

/// Analytic message round for one encoded symbol.
#[derive(Debug, Clone)]
pub struct MessageRound {
    pub sent: usize,
    /// Joint state after the return leg, over (home,) travel, ancilla.
    pub final_state: DensityMatrix,
    /// Probability Bob reads each symbol; `None` if the encodings are not
    /// distinguishable.
    pub symbol_probabilities: Option<Vec<f64>>,
}

impl MessageRound {
    /// Bob's most likely reading, or `None` if he cannot decode at all.
    pub fn decoded_bit(&self) -> Option<usize> {
        let probs = self.symbol_probabilities.as_ref()?;
        probs
            .iter()
            .enumerate()
            .fold(None, |best: Option<(usize, f64)>, (i, &p)| match best {
                Some((_, bp)) if bp >= p => best,
                _ => Some((i, p)),
            })
            .map(|(i, _)| i)
    }

    /// Probability that Bob's measurement is inconclusive.
    pub fn inconclusive_probability(&self) -> Option<f64> {
        self.symbol_probabilities
            .as_ref()
            .map(|p| (1.0 - p.iter().sum::<f64>()).max(0.0))
    }

    pub fn sample_decoded<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        let probs = self.symbol_probabilities.as_ref()?;
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return Some(i);
            }
        }
        None
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, mode: Mode) -> RoundOutcome {
        let decoded = self.sample_decoded(rng);
        let transcript = vec![
            entry(Actor::Bob, "prepare", mode.name()),
            entry(Actor::Eve, "attack", "forward leg"),
            entry(Actor::Alice, "encode", format!("symbol={}", self.sent)),
            entry(
                Actor::Bob,
                "decode",
                decoded.map_or_else(|| "none".to_string(), |d| format!("symbol={d}")),
            ),
        ];
        RoundOutcome {
            kind: RoundKind::Message {
                sent: self.sent,
                decoded,
            },
            transcript,
        }
    }
}

/// Prepare, attack, encode `symbol`, return, decode.
pub fn run_message_round(
    config: &ProtocolConfig,
    attack: &AttackSpec,
    symbol: usize,
) -> Result<MessageRound> {
    let enc = config.encodings.get(symbol).ok_or(Error::InvalidSymbol {
        index: symbol,
        count: config.encodings.len(),
    })?;
    config.check_attack(attack)?;
    let attacked = apply_attack(attack, config)?;
    let final_state = config
        .lift(&enc.op, attack.ancilla_dim)
        .conjugate(&attacked)?;
    let symbol_probabilities = match decoding_basis(config)? {
        None => None,
        Some(basis) => {
            let dims = composite_dims(config.mode, attack.ancilla_dim);
            let bob = reduce(&final_state, &dims, config.bob_subsystems())?;
            debug_assert_eq!(bob.dim(), config.bob_dims());
            Some(
                basis
                    .iter()
                    .map(|s| {
                        let rs = bob.matrix().mul_vec(s.amplitudes())?;
                        let p: C64 = s
                            .amplitudes()
                            .iter()
                            .zip(&rs)
                            .map(|(a, b)| a.conj() * b)
                            .sum();
                        Ok(p.re.clamp(0.0, 1.0))
                    })
                    .collect::<Result<Vec<_>>>()?,
            )
        }
    };
    Ok(MessageRound {
        sent: symbol,
        final_state,
        symbol_probabilities,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloStats {
    pub control_rounds: u64,
    pub detections: u64,
    pub message_rounds: u64,
    pub correct_decodes: u64,
    pub undecoded: u64,
    pub empirical_d: f64,
    /// `None` when no message round was scheduled.
    pub decode_accuracy: Option<f64>,
    pub analytic_d: f64,
}

impl MonteCarloStats {
    /// Binomial standard error of `empirical_d` around the analytic value.
    pub fn sigma(&self) -> f64 {
        (self.analytic_d * (1.0 - self.analytic_d) / self.control_rounds as f64).sqrt()
    }

    /// `(empirical - analytic) / sigma`; zero when both agree exactly.
    pub fn z_score(&self) -> f64 {
        let delta = self.empirical_d - self.analytic_d;
        let sigma = self.sigma();
        if sigma == 0.0 {
            if delta == 0.0 {
                0.0
            } else {
                f64::INFINITY.copysign(delta)
            }
        } else {
            delta / sigma
        }
    }
}

/// Runs rounds until `control_rounds` control rounds have been executed,
/// interleaving message rounds with probability `1 - control_probability`.
pub fn monte_carlo(
    config: &ProtocolConfig,
    attack: &AttackSpec,
    control_rounds: u64,
    seed: u64,
) -> Result<MonteCarloStats> {
    if control_rounds < 1 {
        return Err(Error::InvalidArgument("rounds must be at least 1".into()));
    }
    if config.control_probability <= 0.0 {
        return Err(Error::InvalidArgument(
            "control_probability must be positive to schedule control rounds".into(),
        ));
    }
    let control = run_control_round(config, attack)?;
    let messages = (0..config.encodings.len())
        .map(|s| run_message_round(config, attack, s))
        .collect::<Result<Vec<_>>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = MonteCarloStats {
        control_rounds: 0,
        detections: 0,
        message_rounds: 0,
        correct_decodes: 0,
        undecoded: 0,
        empirical_d: 0.0,
        decode_accuracy: None,
        analytic_d: control.detection_probability,
    };
    while stats.control_rounds < control_rounds {
        if rng.random::<f64>() < config.control_probability {
            stats.control_rounds += 1;
            if control.sample_detected(&mut rng) {
                stats.detections += 1;
            }
        } else {
            stats.message_rounds += 1;
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut symbol = config.encodings.len() - 1;
            for (i, e) in config.encodings.iter().enumerate() {
                acc += e.prior;
                if u < acc {
                    symbol = i;
                    break;
                }
            }
            match messages[symbol].sample_decoded(&mut rng) {
                Some(d) if d == symbol => stats.correct_decodes += 1,
                Some(_) => {}
                None => stats.undecoded += 1,
            }
        }
    }
    stats.empirical_d = stats.detections as f64 / stats.control_rounds as f64;
    if stats.message_rounds > 0 {
        stats.decode_accuracy = Some(stats.correct_decodes as f64 / stats.message_rounds as f64);
    }
    Ok(stats)
}
