//! Seeded random draws used by the property suites and the entangling check.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::tensor::{kron_vec, CMat, ZERO};

pub const DEFAULT_SEED: u64 = 0x5eed_0001;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (unit variance).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn unit_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Gaussian with modulus kept away from zero.
pub fn nonzero_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    loop {
        let z = complex_gaussian(rng);
        if z.norm() > 0.2 {
            return z;
        }
    }
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    CMat::from_fn(n, n, |_, _| complex_gaussian(rng))
}

/// Gaussian matrix with condition estimate below `1e6`.
pub fn invertible_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    loop {
        let m = gaussian_matrix(rng, n);
        if matches!(m.condition_1(), Ok(c) if c < 1e6) {
            return m;
        }
    }
}

/// Unitary from Gram-Schmidt on a Gaussian matrix.
pub fn unitary_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let g = invertible_matrix(rng, n);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        // two passes keep the columns orthogonal to machine precision
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    CMat::from_fn(n, n, |i, j| cols[j][i])
}

pub fn normalized_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// `v_1 ⊗ … ⊗ v_k` with each `v_i` a normalized Gaussian in `C^d`.
pub fn product_state<R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> Vec<Complex64> {
    (0..k).fold(vec![Complex64::new(1.0, 0.0)], |acc, _| kron_vec(&acc, &normalized_vector(rng, d)))
}

/// Invertible diagonal `n×n` matrix whose entries are not all equal.
pub fn nonscalar_diagonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    loop {
        let entries: Vec<Complex64> = (0..n).map(|_| nonzero_complex(rng)).collect();
        let spread = entries.iter().map(|z| (z - entries[0]).norm()).fold(0.0, f64::max);
        if spread > 0.1 && entries.iter().all(|z| *z != ZERO) {
            return CMat::diag(&entries);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::is_unitary;

    #[test]
    fn unitary_draws_are_unitary() {
        let mut r = rng(7);
        for n in 1..=9 {
            assert!(is_unitary(&unitary_matrix(&mut r, n), 1e-12).unwrap());
        }
    }

    #[test]
    fn seeded_draws_repeat() {
        let a = gaussian_matrix(&mut rng(3), 4);
        let b = gaussian_matrix(&mut rng(3), 4);
        assert_eq!(a, b);
    }

    #[test]
    fn product_states_are_normalized() {
        let v = product_state(&mut rng(1), 3, 3);
        assert_eq!(v.len(), 27);
        let n: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-12);
    }
}
