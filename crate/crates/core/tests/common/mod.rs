//! Test-only helpers: random inputs and oracles that avoid the crate's own
//! linear algebra.

#![allow(dead_code)]

use num_complex::Complex64 as C;
use pingpong_core::search::unitary::{haar_unitary, random_state};
use pingpong_core::{CMatrix, DensityMatrix, StateVector, UnitaryOperator};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_state(seed: u64, dim: usize) -> StateVector {
    random_state(&mut rng(seed), dim)
}

pub fn rand_unitary(seed: u64, dim: usize) -> UnitaryOperator {
    haar_unitary(&mut rng(seed), dim)
}

/// Full-rank random density matrix `G G† / Tr(G G†)`.
pub fn rand_density(seed: u64, dim: usize) -> DensityMatrix {
    let mut r = rng(seed);
    let g: Vec<C> = (0..dim * dim)
        .map(|_| C::new(StandardNormal.sample(&mut r), StandardNormal.sample(&mut r)))
        .collect();
    let g = CMatrix::from_vec(dim, dim, g).unwrap();
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    DensityMatrix::new(gg.scale_real(1.0 / tr)).unwrap()
}

pub type Plain = Vec<Vec<C>>;

pub fn plain(m: &CMatrix) -> Plain {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

pub fn plain_mul(a: &Plain, b: &Plain) -> Plain {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    let mut out = vec![vec![C::new(0.0, 0.0); m]; n];
    for i in 0..n {
        for j in 0..m {
            for t in 0..k {
                out[i][j] += a[i][t] * b[t][j];
            }
        }
    }
    out
}

pub fn plain_mul_vec(a: &Plain, v: &[C]) -> Vec<C> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn plain_adjoint(a: &Plain) -> Plain {
    let n = a.len();
    let m = a[0].len();
    (0..m)
        .map(|j| (0..n).map(|i| a[i][j].conj()).collect())
        .collect()
}

/// Coefficients `c_0..c_n` of `det(λI − A) = Σ c_k λ^k` by Faddeev–LeVerrier.
pub fn char_poly(a: &Plain) -> Vec<C> {
    let n = a.len();
    let mut c = vec![C::new(0.0, 0.0); n + 1];
    c[n] = C::new(1.0, 0.0);
    let mut m = vec![vec![C::new(0.0, 0.0); n]; n];
    for k in 1..=n {
        let mut next = plain_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c[n - k + 1];
        }
        let am = plain_mul(a, &next);
        let tr: C = (0..n).map(|i| am[i][i]).sum();
        c[n - k] = -tr / k as f64;
        m = next;
    }
    c
}

/// Roots of a monic polynomial by Durand–Kerner iteration.
pub fn poly_roots(c: &[C]) -> Vec<C> {
    let n = c.len() - 1;
    let eval = |z: C| c.iter().rev().fold(C::new(0.0, 0.0), |acc, &k| acc * z + k);
    let seed = C::new(0.4, 0.9);
    let mut z: Vec<C> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = C::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-16 {
            break;
        }
    }
    z
}

/// Spectrum of a small Hermitian matrix via its characteristic polynomial.
pub fn oracle_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = poly_roots(&char_poly(&plain(m)))
        .iter()
        .map(|z| z.re)
        .collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// `−Σ λ log₂ λ` over an explicit spectrum.
pub fn oracle_entropy(spectrum: &[f64]) -> f64 {
    spectrum
        .iter()
        .filter(|&&l| l > 1e-300)
        .map(|&l| -l * l.ln() / std::f64::consts::LN_2)
        .sum()
}

/// Closed-form eigenvalues of a 2×2 Hermitian block `[[a, b], [b*, d]]`.
pub fn eig2(a: f64, b: C, d: f64) -> [f64; 2] {
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean + r, mean - r]
}

pub fn h(x: f64) -> f64 {
    oracle_entropy(&[x, 1.0 - x])
}
