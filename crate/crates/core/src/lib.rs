//! Simulation and analysis toolkit for the ping-pong quantum direct
//! communication protocol under ancilla-based eavesdropping.
//!
//! * [`quantum`]: states, operators, partial traces, eigen-solver, entropy.
//! * [`protocol`]: preparation, control and message rounds, Monte Carlo.
//! * [`attack`]: Eve's attack, its validation and the post-encoding ensemble.
//! * [`info`]: entropies `i0t`/`i0a`/`i0c`, Holevo bounds, inequality checks.
//! * [`search`]: numerical frontier of information versus detection.

pub mod attack;
pub mod error;
pub mod info;
pub mod protocol;
pub mod quantum;
pub mod search;

pub use attack::{
    apply_attack, builtin_attack, detection_probability, post_encoding_ensemble, validate_attack,
    AttackSpec, BuiltinAttack, EncodingEnsemble, Subsystem, Violation,
};
pub use error::{Error, Result};
pub use info::{
    binary_entropy, entropies, entropy_inequality_check, holevo_bound, information_report,
    ClaimDeviation, Entropies, InequalityDiagnostics, InfoReport,
};
pub use protocol::{
    monte_carlo, prepare_initial, run_control_round, run_message_round, EncodingSet, Mode,
    MonteCarloStats, ProtocolConfig, RoundOutcome,
};
pub use quantum::{CMatrix, DensityMatrix, StateVector, UnitaryOperator, C64};
pub use search::{
    maximize_information, sweep, AttackFamily, CurvePoint, Objective, SearchResult, SweepConfig,
    SweepResult,
};
