//! Parameterized and random unitaries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::attack::AttackSpec;
use crate::error::{Error, Result};
use crate::quantum::matrix::{inner, norm, CMatrix, C64};
use crate::quantum::{expi_hermitian, StateVector, UnitaryOperator};

/// Number of real parameters of a `dim`-dimensional generator.
pub fn generator_param_count(dim: usize) -> usize {
    dim * dim
}

/// Hermitian generator: `theta[..dim]` on the diagonal, then one
/// `(re, im)` pair per upper-triangular entry in row-major order.
pub fn hermitian_generator(theta: &[f64], dim: usize) -> Result<CMatrix> {
    let expected = generator_param_count(dim);
    if theta.len() != expected {
        return Err(Error::ParameterCount {
            expected,
            found: theta.len(),
        });
    }
    let mut h = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        h[(i, i)] = C64::new(theta[i], 0.0);
    }
    let mut k = dim;
    for i in 0..dim {
        for j in (i + 1)..dim {
            let z = C64::new(theta[k], theta[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    Ok(h)
}

/// `U(θ) = exp(i H(θ))`; `θ = 0` gives the identity.
pub fn parameterize_unitary(theta: &[f64], dim: usize) -> Result<UnitaryOperator> {
    let h = hermitian_generator(theta, dim)?;
    UnitaryOperator::new(expi_hermitian(&h)?)
}

fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im)
        })
        .collect()
}

/// Haar-distributed unitary: Gram–Schmidt on the columns of a complex
/// Ginibre matrix. Modified Gram–Schmidt yields the QR factor with a
/// positive real diagonal in R, which fixes the phase ambiguity.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> UnitaryOperator {
    loop {
        let mut cols: Vec<Vec<C64>> = (0..dim).map(|_| gaussian_vector(rng, dim)).collect();
        let mut degenerate = false;
        for j in 0..dim {
            let (done, rest) = cols.split_at_mut(j);
            let v = &mut rest[0];
            for q in done.iter() {
                let r = inner(q, v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= r * qi;
                }
            }
            let n = norm(v);
            if n < 1e-12 {
                degenerate = true;
                break;
            }
            for vi in v.iter_mut() {
                *vi /= n;
            }
        }
        if degenerate {
            continue;
        }
        let mut m = CMatrix::zeros(dim, dim);
        for (j, col) in cols.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        return UnitaryOperator::new(m).expect("orthonormal columns");
    }
}

/// Uniformly random pure state.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> StateVector {
    loop {
        if let Ok(s) = StateVector::normalized(gaussian_vector(rng, dim)) {
            return s;
        }
    }
}

/// Random attack with a Haar unitary on travel ⊗ ancilla and a uniformly
/// random ancilla state; reproducible per seed.
pub fn sample_random_attack(ancilla_dim: usize, seed: u64) -> Result<AttackSpec> {
    if ancilla_dim < 1 {
        return Err(Error::DimensionTooSmall {
            min: 1,
            found: ancilla_dim,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = haar_unitary(&mut rng, 2 * ancilla_dim);
    let chi = random_state(&mut rng, ancilla_dim);
    AttackSpec::from_parts(&chi, &e)
}

/// Random product attack `U_t ⊗ U_a` with a random pure ancilla.
pub fn sample_product_attack(ancilla_dim: usize, seed: u64) -> Result<AttackSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ut = haar_unitary(&mut rng, 2);
    let ua = haar_unitary(&mut rng, ancilla_dim);
    let chi = random_state(&mut rng, ancilla_dim);
    AttackSpec::from_parts(&chi, &ut.tensor(&ua))
}
