//! Validated carriers for pure states, mixed states and unitaries.
//!
//! Subsystem order is fixed across the crate: in a composite the travel
//! qubit is subsystem 0 and Eve's ancilla is subsystem 1. When Bob's home
//! qubit is present it is prepended as subsystem 0 and the others shift up by
//! one. The first factor of every tensor product is the most significant
//! index.

use super::matrix::{inner, kron_vec, norm, CMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Tolerance used by every invariant check on states and operators.
pub const STATE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        let n = norm(&amps);
        if (n - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self { amps })
    }

    /// Rescales any nonzero vector onto the unit sphere.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let n = norm(&amps);
        if amps.is_empty() || n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self {
            amps: amps.into_iter().map(|a| a / n).collect(),
        })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidSubsystem { index, count: dim });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { amps })
    }

    /// `(|0> + |1>)/√2`.
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amps: vec![C64::new(h, 0.0), C64::new(h, 0.0)],
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    pub fn inner(&self, other: &Self) -> C64 {
        inner(&self.amps, &other.amps)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            amps: kron_vec(&self.amps, &other.amps),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            m: CMatrix::outer(&self.amps, &self.amps),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    m: CMatrix,
}

impl UnitaryOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        let deviation = m.unitarity_deviation()?;
        if deviation > STATE_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { m })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: CMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            m: self.m.kron(&other.m),
        }
    }

    pub fn compose(&self, after: &Self) -> Result<Self> {
        Ok(Self {
            m: after.m.matmul(&self.m)?,
        })
    }

    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        apply_unitary(self, s)
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        Ok(DensityMatrix {
            m: rho.m.conjugate_by(&self.m)?,
        })
    }

    /// Multiplies by a global phase `e^{iφ}`.
    pub fn with_phase(&self, phi: f64) -> Self {
        Self {
            m: self.m.scale(C64::from_polar(1.0, phi)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let deviation = m.hermiticity_deviation();
        if deviation > STATE_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::BadTrace { trace: tr.re });
        }
        let rho = Self { m };
        rho.eigenvalues()?;
        Ok(rho)
    }

    /// `I_n / n`.
    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            m: CMatrix::identity(n).scale_real(1.0 / n as f64),
        }
    }

    #[cfg(test)]
    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.m.as_slice().iter().map(C64::norm_sqr).sum()
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            m: self.m.kron(&other.m),
        }
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        super::entropy::hermitian_eigenvalues(self)
    }

    pub fn entropy(&self) -> Result<f64> {
        super::entropy::von_neumann_entropy(self)
    }

    /// Convex combination `Σ p_i ρ_i`.
    pub fn mixture(members: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let dim = first.1.dim();
        let total: f64 = members.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::BadProbabilities { sum: total });
        }
        let mut m = CMatrix::zeros(dim, dim);
        for (p, rho) in members {
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: rho.dim(),
                });
            }
            m = &m + &rho.m.scale_real(*p);
        }
        Ok(Self { m })
    }
}

/// Any of the three carriers, for code that combines them dynamically.
#[derive(Debug, Clone, PartialEq)]
pub enum Operand {
    State(StateVector),
    Density(DensityMatrix),
    Unitary(UnitaryOperator),
}

impl Operand {
    fn kind(&self) -> &'static str {
        match self {
            Operand::State(_) => "state vector",
            Operand::Density(_) => "density matrix",
            Operand::Unitary(_) => "unitary operator",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Operand::State(s) => s.dim(),
            Operand::Density(d) => d.dim(),
            Operand::Unitary(u) => u.dim(),
        }
    }
}

/// Kronecker product of two operands of the same kind.
pub fn tensor_product(a: &Operand, b: &Operand) -> Result<Operand> {
    match (a, b) {
        (Operand::State(x), Operand::State(y)) => Ok(Operand::State(x.tensor(y))),
        (Operand::Density(x), Operand::Density(y)) => Ok(Operand::Density(x.tensor(y))),
        (Operand::Unitary(x), Operand::Unitary(y)) => Ok(Operand::Unitary(x.tensor(y))),
        _ => Err(Error::KindMismatch {
            left: a.kind(),
            right: b.kind(),
        }),
    }
}

pub fn apply_unitary(u: &UnitaryOperator, s: &StateVector) -> Result<StateVector> {
    if u.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: s.dim(),
        });
    }
    Ok(StateVector {
        amps: u.m.mul_vec(&s.amps)?,
    })
}

pub fn to_density(s: &StateVector) -> DensityMatrix {
    s.to_density()
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> Result<bool> {
    Ok(m.unitarity_deviation()? <= tol)
}

/// Reduces `rho` onto the subsystems listed in `keep` (in ascending order),
/// tracing out the rest.
pub fn reduce(rho: &DensityMatrix, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || total != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: total,
        });
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if let Some(&bad) = keep_sorted.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::InvalidSubsystem {
            index: bad,
            count: dims.len(),
        });
    }
    let traced: Vec<usize> = (0..dims.len())
        .filter(|i| !keep_sorted.contains(i))
        .collect();
    let kept_dim: usize = keep_sorted.iter().map(|&i| dims[i]).product();
    let traced_dim: usize = traced.iter().map(|&i| dims[i]).product();

    // strides of each subsystem in the full index
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let compose = |subs: &[usize], digits_of: usize, out: &mut usize| {
        let mut rem = digits_of;
        for &s in subs.iter().rev() {
            *out += (rem % dims[s]) * strides[s];
            rem /= dims[s];
        }
    };

    let mut out = CMatrix::zeros(kept_dim, kept_dim);
    for r in 0..kept_dim {
        let mut row_base = 0;
        compose(&keep_sorted, r, &mut row_base);
        for c in 0..kept_dim {
            let mut col_base = 0;
            compose(&keep_sorted, c, &mut col_base);
            let mut acc = ZERO;
            for t in 0..traced_dim {
                let mut off = 0;
                compose(&traced, t, &mut off);
                acc += rho.m[(row_base + off, col_base + off)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(DensityMatrix { m: out })
}

/// Partial trace over every subsystem except `keep`.
pub fn partial_trace(rho: &DensityMatrix, dims: &[usize], keep: usize) -> Result<DensityMatrix> {
    if keep >= dims.len() {
        return Err(Error::InvalidSubsystem {
            index: keep,
            count: dims.len(),
        });
    }
    reduce(rho, dims, &[keep])
}

/// Born probabilities of `rho` in an orthonormal basis.
pub fn measure_projective(rho: &DensityMatrix, basis: &[StateVector]) -> Result<Vec<f64>> {
    let n = rho.dim();
    if basis.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: basis.len(),
        });
    }
    let mut deviation = 0.0_f64;
    for (i, a) in basis.iter().enumerate() {
        if a.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: a.dim(),
            });
        }
        for (j, b) in basis.iter().enumerate().skip(i) {
            let target = if i == j { ONE } else { ZERO };
            deviation = deviation.max((a.inner(b) - target).norm());
        }
    }
    if deviation > STATE_TOL {
        return Err(Error::NonOrthonormalBasis { deviation });
    }
    basis
        .iter()
        .map(|b| {
            let rb = rho.m.mul_vec(&b.amps)?;
            Ok(inner(&b.amps, &rb).re)
        })
        .collect()
}

/// Convenience wrapper measuring a pure state.
pub fn measure_state(s: &StateVector, basis: &[StateVector]) -> Result<Vec<f64>> {
    measure_projective(&s.to_density(), basis)
}

pub fn computational_basis(dim: usize) -> Vec<StateVector> {
    (0..dim)
        .map(|i| StateVector::basis(dim, i).expect("index < dim"))
        .collect()
}
