//! Fixed single- and two-qubit operators used by the protocol and attacks.

use super::matrix::{CMatrix, C64, ONE, ZERO};
use super::state::UnitaryOperator;

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn from_rows(rows: &[Vec<C64>]) -> UnitaryOperator {
    UnitaryOperator::new(CMatrix::from_rows(rows).expect("square literal"))
        .expect("unitary literal")
}

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn identity() -> UnitaryOperator {
    UnitaryOperator::identity(2)
}

pub fn pauli_x() -> UnitaryOperator {
    from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]])
}

/// `iσ_y = [[0, 1], [-1, 0]]`, the real form used for dense coding.
pub fn i_pauli_y() -> UnitaryOperator {
    from_rows(&[vec![ZERO, ONE], vec![-ONE, ZERO]])
}

pub fn pauli_z() -> UnitaryOperator {
    from_rows(&[vec![ONE, ZERO], vec![ZERO, -ONE]])
}

/// The π/4 rotation `(√2/2)[[1, -1], [1, 1]]`.
pub fn rotation_quarter() -> UnitaryOperator {
    from_rows(&[vec![r(H), r(-H)], vec![r(H), r(H)]])
}

/// Controlled-NOT with subsystem 0 as control.
pub fn cnot() -> UnitaryOperator {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    UnitaryOperator::new(m).expect("permutation matrix")
}
