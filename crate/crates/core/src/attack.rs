//! Eve's ancilla attack on the forward leg of the protocol.
//!
//! Eve prepares an ancilla in `|χ>` and applies a unitary `E` to
//! travel ⊗ ancilla. Everything information-theoretic is computed from the
//! post-encoding ensemble built here.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::protocol::{self, Mode, ProtocolConfig};
use crate::quantum::matrix::{norm, CMatrix, C64};
use crate::quantum::state::{reduce, DensityMatrix, StateVector, UnitaryOperator, STATE_TOL};
use crate::quantum::{gates, partial_trace};

/// An attack as supplied by a caller; may be invalid until checked with
/// [`validate_attack`].
#[derive(Debug, Clone, PartialEq)]
pub struct AttackSpec {
    pub ancilla_dim: usize,
    /// Ancilla initial state `|χ>`.
    pub chi: Vec<C64>,
    /// Unitary on travel ⊗ ancilla, dimension `2 * ancilla_dim`.
    pub unitary: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    AncillaDim {
        found: usize,
    },
    ChiDimension {
        expected: usize,
        found: usize,
    },
    ChiNorm {
        norm: f64,
    },
    UnitaryShape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    NotUnitary {
        deviation: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AncillaDim { found } => write!(f, "ancilla_dim {found} < 1"),
            Violation::ChiDimension { expected, found } => {
                write!(f, "chi has {found} amplitudes, expected {expected}")
            }
            Violation::ChiNorm { norm } => write!(f, "chi norm {norm:.6} ≠ 1"),
            Violation::UnitaryShape {
                expected,
                rows,
                cols,
            } => write!(
                f,
                "unitary is {rows}x{cols}, expected {expected}x{expected}"
            ),
            Violation::NotUnitary { deviation } => {
                write!(
                    f,
                    "unitary is not unitary (max |E†E - I| = {deviation:.3e})"
                )
            }
        }
    }
}

/// Checks every invariant of an attack and reports each violation with its
/// measured deviation.
pub fn validate_attack(spec: &AttackSpec) -> std::result::Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    if spec.ancilla_dim < 1 {
        out.push(Violation::AncillaDim {
            found: spec.ancilla_dim,
        });
    }
    if spec.chi.len() != spec.ancilla_dim {
        out.push(Violation::ChiDimension {
            expected: spec.ancilla_dim,
            found: spec.chi.len(),
        });
    }
    let n = norm(&spec.chi);
    if (n - 1.0).abs() > STATE_TOL {
        out.push(Violation::ChiNorm { norm: n });
    }
    let dim = 2 * spec.ancilla_dim;
    let (rows, cols) = (spec.unitary.rows(), spec.unitary.cols());
    if rows != dim || cols != dim {
        out.push(Violation::UnitaryShape {
            expected: dim,
            rows,
            cols,
        });
    }
    if let Ok(deviation) = spec.unitary.unitarity_deviation() {
        if deviation > STATE_TOL {
            out.push(Violation::NotUnitary { deviation });
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

impl AttackSpec {
    pub fn new(ancilla_dim: usize, chi: Vec<C64>, unitary: CMatrix) -> Result<Self> {
        let spec = Self {
            ancilla_dim,
            chi,
            unitary,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_parts(chi: &StateVector, unitary: &UnitaryOperator) -> Result<Self> {
        Self::new(
            chi.dim(),
            chi.amplitudes().to_vec(),
            unitary.matrix().clone(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        validate_attack(self).map_err(Error::InvalidAttack)
    }

    pub fn chi_state(&self) -> Result<StateVector> {
        self.validate()?;
        StateVector::new(self.chi.clone())
    }

    pub fn unitary_op(&self) -> Result<UnitaryOperator> {
        self.validate()?;
        UnitaryOperator::new(self.unitary.clone())
    }

    /// Same attack with `E` multiplied by `e^{iφ}`.
    pub fn with_global_phase(&self, phi: f64) -> Self {
        Self {
            unitary: self.unitary.scale(C64::from_polar(1.0, phi)),
            ..self.clone()
        }
    }

    /// Entry-wise comparison of χ and E.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.ancilla_dim == other.ancilla_dim
            && self.chi.len() == other.chi.len()
            && self
                .chi
                .iter()
                .zip(&other.chi)
                .all(|(a, b)| (a - b).norm() <= tol)
            && self.unitary.max_abs_diff(&other.unitary) <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinAttack {
    Identity,
    PaperCounterexample,
    Cnot,
}

impl BuiltinAttack {
    pub const ALL: [BuiltinAttack; 3] = [
        BuiltinAttack::Identity,
        BuiltinAttack::PaperCounterexample,
        BuiltinAttack::Cnot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinAttack::Identity => "identity",
            BuiltinAttack::PaperCounterexample => "paper_counterexample",
            BuiltinAttack::Cnot => "cnot",
        }
    }
}

impl FromStr for BuiltinAttack {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownAttack(s.to_string()))
    }
}

/// The entangling-free counterexample attack: ancilla `|+>` and
/// `E = (√2/2)(|00><00| - |00><10| + |01><01| - |01><11| + |10><00| + |10><10| + |11><01| + |11><11|)`.
fn counterexample_unitary() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let ket = |i: usize| StateVector::basis(4, i).expect("index < 4");
    let terms: [(usize, usize, f64); 8] = [
        (0b00, 0b00, 1.0),
        (0b00, 0b10, -1.0),
        (0b01, 0b01, 1.0),
        (0b01, 0b11, -1.0),
        (0b10, 0b00, 1.0),
        (0b10, 0b10, 1.0),
        (0b11, 0b01, 1.0),
        (0b11, 0b11, 1.0),
    ];
    terms
        .iter()
        .fold(CMatrix::zeros(4, 4), |acc, &(out, inp, sign)| {
            let t = CMatrix::outer(ket(out).amplitudes(), ket(inp).amplitudes());
            &acc + &t.scale_real(sign * h)
        })
}

pub fn builtin_attack(which: BuiltinAttack) -> AttackSpec {
    let zero = StateVector::basis(2, 0).expect("|0>");
    let (chi, unitary) = match which {
        BuiltinAttack::Identity => (zero, UnitaryOperator::identity(4)),
        BuiltinAttack::PaperCounterexample => (
            StateVector::plus(),
            UnitaryOperator::new(counterexample_unitary()).expect("counterexample is unitary"),
        ),
        BuiltinAttack::Cnot => (zero, gates::cnot()),
    };
    AttackSpec::from_parts(&chi, &unitary).expect("built-in attacks are valid")
}

/// Subsystem dimensions of the attacked composite for a protocol mode.
pub fn composite_dims(mode: Mode, ancilla_dim: usize) -> Vec<usize> {
    match mode {
        Mode::Simplified => vec![2, ancilla_dim],
        Mode::Bell => vec![2, 2, ancilla_dim],
    }
}

/// Pure attacked state before Alice acts: `E(|b> ⊗ |χ>)` or, in Bell mode,
/// `(I_home ⊗ E)(|ψ+> ⊗ |χ>)`.
pub fn attacked_state(spec: &AttackSpec, config: &ProtocolConfig) -> Result<StateVector> {
    let chi = spec.chi_state()?;
    let e = spec.unitary_op()?;
    let initial = protocol::prepare_initial(config);
    let op = match config.mode {
        Mode::Simplified => e,
        Mode::Bell => UnitaryOperator::identity(2).tensor(&e),
    };
    op.apply(&initial.tensor(&chi))
}

pub fn apply_attack(spec: &AttackSpec, config: &ProtocolConfig) -> Result<DensityMatrix> {
    Ok(attacked_state(spec, config)?.to_density())
}

/// Travel ⊗ ancilla state Eve has access to after her attack (Bell mode
/// traces out the home qubit).
pub fn eve_accessible_state(spec: &AttackSpec, config: &ProtocolConfig) -> Result<DensityMatrix> {
    let rho = apply_attack(spec, config)?;
    match config.mode {
        Mode::Simplified => Ok(rho),
        Mode::Bell => reduce(&rho, &composite_dims(Mode::Bell, spec.ancilla_dim), &[1, 2]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    Travel,
    Ancilla,
    Composite,
}

impl Subsystem {
    pub const ALL: [Subsystem; 3] = [Subsystem::Travel, Subsystem::Ancilla, Subsystem::Composite];
}

/// Post-encoding states on travel ⊗ ancilla, one per encoding operation.
#[derive(Debug, Clone)]
pub struct EncodingEnsemble {
    pub members: Vec<(f64, DensityMatrix)>,
    pub ancilla_dim: usize,
    pub config: ProtocolConfig,
}

impl EncodingEnsemble {
    pub fn total_probability(&self) -> f64 {
        self.members.iter().map(|(p, _)| p).sum()
    }

    fn reduce_one(&self, rho: &DensityMatrix, sub: Subsystem) -> Result<DensityMatrix> {
        let dims = [2, self.ancilla_dim];
        match sub {
            Subsystem::Travel => partial_trace(rho, &dims, 0),
            Subsystem::Ancilla => partial_trace(rho, &dims, 1),
            Subsystem::Composite => Ok(rho.clone()),
        }
    }

    /// Members reduced onto one subsystem.
    pub fn reduced_members(&self, sub: Subsystem) -> Result<Vec<(f64, DensityMatrix)>> {
        self.members
            .iter()
            .map(|(p, rho)| Ok((*p, self.reduce_one(rho, sub)?)))
            .collect()
    }

    /// Encoding-averaged state on one subsystem.
    pub fn average(&self, sub: Subsystem) -> Result<DensityMatrix> {
        let reduced = self.reduced_members(sub)?;
        let refs: Vec<(f64, &DensityMatrix)> = reduced.iter().map(|(p, r)| (*p, r)).collect();
        DensityMatrix::mixture(&refs)
    }
}

pub fn post_encoding_ensemble(
    spec: &AttackSpec,
    config: &ProtocolConfig,
) -> Result<EncodingEnsemble> {
    let rho = eve_accessible_state(spec, config)?;
    let anc = UnitaryOperator::identity(spec.ancilla_dim);
    let members = config
        .encodings
        .iter()
        .map(|enc| {
            let op = enc.op.tensor(&anc);
            Ok((enc.prior, op.conjugate(&rho)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EncodingEnsemble {
        members,
        ancilla_dim: spec.ancilla_dim,
        config: config.clone(),
    })
}

/// Probability that a single control round exposes the attack.
pub fn detection_probability(spec: &AttackSpec, config: &ProtocolConfig) -> Result<f64> {
    Ok(protocol::run_control_round(config, spec)?.detection_probability)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::EncodingSet;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn simplified() -> ProtocolConfig {
        ProtocolConfig::simplified()
    }

    #[test]
    fn counterexample_equals_rotation_tensor_identity() {
        let e = builtin_attack(BuiltinAttack::PaperCounterexample);
        let expected = gates::rotation_quarter().tensor(&UnitaryOperator::identity(2));
        assert!(e.unitary.max_abs_diff(expected.matrix()) <= 1e-15);
        assert!(validate_attack(&e).is_ok());
    }

    #[test]
    fn builtins_validate() {
        for b in BuiltinAttack::ALL {
            assert!(validate_attack(&builtin_attack(b)).is_ok(), "{}", b.name());
            assert_eq!(b.name().parse::<BuiltinAttack>().unwrap(), b);
        }
        assert_eq!(
            builtin_attack(BuiltinAttack::Identity).unitary,
            CMatrix::identity(4)
        );
        assert!(matches!(
            "nope".parse::<BuiltinAttack>(),
            Err(Error::UnknownAttack(_))
        ));
    }

    #[test]
    fn unnormalized_chi_reported() {
        let mut spec = builtin_attack(BuiltinAttack::Identity);
        spec.chi = vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
        let v = validate_attack(&spec).unwrap_err();
        assert_eq!(v.len(), 1);
        let msg = v[0].to_string();
        assert!(msg.starts_with("chi norm 1.414"), "{msg}");
    }

    #[test]
    fn zero_unitary_reported() {
        let mut spec = builtin_attack(BuiltinAttack::Identity);
        spec.unitary = CMatrix::zeros(4, 4);
        let v = validate_attack(&spec).unwrap_err();
        assert!(v.iter().any(|x| x.to_string().contains("not unitary")));
    }

    #[test]
    fn shape_violations_collected() {
        let spec = AttackSpec {
            ancilla_dim: 3,
            chi: vec![C64::new(1.0, 0.0)],
            unitary: CMatrix::identity(4),
        };
        let v = validate_attack(&spec).unwrap_err();
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::ChiDimension { .. })));
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::UnitaryShape { .. })));
        assert!(matches!(
            apply_attack(&spec, &simplified()),
            Err(Error::InvalidAttack(_))
        ));
    }

    #[test]
    fn counterexample_attacked_state_is_plus_plus() {
        let rho = apply_attack(
            &builtin_attack(BuiltinAttack::PaperCounterexample),
            &simplified(),
        )
        .unwrap();
        let pp = StateVector::plus()
            .tensor(&StateVector::plus())
            .to_density();
        assert!(rho.matrix().max_abs_diff(pp.matrix()) < 1e-15);
    }

    #[test]
    fn identity_attack_leaves_product() {
        let spec = builtin_attack(BuiltinAttack::Identity);
        let rho = apply_attack(&spec, &simplified()).unwrap();
        let expected = StateVector::basis(2, 0)
            .unwrap()
            .tensor(&spec.chi_state().unwrap())
            .to_density();
        assert_eq!(rho, expected);
        assert!((rho.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn counterexample_ensemble_members() {
        let ens = post_encoding_ensemble(
            &builtin_attack(BuiltinAttack::PaperCounterexample),
            &simplified(),
        )
        .unwrap();
        let plus = StateVector::plus();
        let minus = StateVector::from_real(&[H, -H]).unwrap();
        let m0 = plus.tensor(&plus).to_density();
        let m1 = minus.tensor(&plus).to_density();
        assert_eq!(ens.members.len(), 2);
        assert!((ens.members[0].0 - 0.5).abs() < 1e-15);
        assert!(ens.members[0].1.matrix().max_abs_diff(m0.matrix()) < 1e-15);
        assert!(ens.members[1].1.matrix().max_abs_diff(m1.matrix()) < 1e-15);
    }

    #[test]
    fn identity_ensemble_members_coincide() {
        let spec = builtin_attack(BuiltinAttack::Identity);
        let ens = post_encoding_ensemble(&spec, &simplified()).unwrap();
        let expected = apply_attack(&spec, &simplified()).unwrap();
        for (_, m) in &ens.members {
            assert!(m.matrix().max_abs_diff(expected.matrix()) < 1e-15);
        }
        assert!((ens.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_mode_ensemble_lives_on_travel_and_ancilla() {
        let cfg = ProtocolConfig::bell().with_encoding(EncodingSet::Paulis);
        let ens = post_encoding_ensemble(&builtin_attack(BuiltinAttack::Cnot), &cfg).unwrap();
        assert_eq!(ens.members.len(), 4);
        assert!(ens.members.iter().all(|(_, m)| m.dim() == 4));
        assert!((ens.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn detection_of_builtins() {
        let cfg = simplified();
        let d = |b| detection_probability(&builtin_attack(b), &cfg).unwrap();
        assert!((d(BuiltinAttack::PaperCounterexample) - 0.5).abs() < 1e-15);
        assert_eq!(d(BuiltinAttack::Identity), 0.0);
        assert!(d(BuiltinAttack::Cnot).abs() < 1e-15);
    }
}
