//! Finite-dimensional complex linear algebra for quantum states.

pub mod eigen;
pub mod entropy;
pub mod gates;
pub mod matrix;
pub mod state;

pub use eigen::{expi_hermitian, hermitian_eigen, HermitianEigen};
pub use entropy::{hermitian_eigenvalues, shannon_bits, von_neumann_entropy};
pub use matrix::{CMatrix, C64};
pub use state::{
    apply_unitary, computational_basis, is_unitary, measure_projective, measure_state,
    partial_trace, reduce, tensor_product, to_density, DensityMatrix, Operand, StateVector,
    UnitaryOperator, STATE_TOL,
};
