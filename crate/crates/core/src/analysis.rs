//! Entanglement witnesses, the controlled-increment factorization check, and
//! detectors for the rigidity results on scalar and diagonal solutions.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::build_rd;
use crate::sampling::{normalized_vector, rng, DEFAULT_SEED};
use crate::tensor::{controlled_increment, fourier, integer_root, is_scalar_identity, kron, kron_pow, CMat, ONE};
use crate::verify::{
    verify_aybe_matrix, verify_bybe, verify_gybe, Equation, GybeSignature, Residual, VerifyReport,
};

/// Singular values at or below this count as zero.
pub const SCHMIDT_THRESHOLD: f64 = 1e-10;

/// Random product states tried on top of the structured witnesses.
pub const RANDOM_WITNESSES: usize = 20;

/// Number of singular values above `threshold` of the `rows×cols` reshaping.
pub fn schmidt_rank(state: &[Complex64], rows: usize, cols: usize, threshold: f64) -> Result<usize> {
    if state.len() != rows * cols {
        return Err(Error::DimensionMismatch { expected: rows * cols, found: state.len() });
    }
    let m = DMatrix::from_fn(rows, cols, |i, j| state[i * cols + j]);
    Ok(m.singular_values().iter().filter(|&&s| s > threshold).count())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub label: String,
    pub schmidt_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub gate_dim: usize,
    /// Factors on the first side of the cut, zero-based.
    pub bipartition: Vec<usize>,
    pub witnesses: Vec<Witness>,
    pub entangling: bool,
}

impl EntanglementReport {
    pub fn max_rank(&self) -> usize {
        self.witnesses.iter().map(|w| w.schmidt_rank).max().unwrap_or(0)
    }

    pub fn witness(&self, label: &str) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.label == label)
    }
}

#[derive(Clone, Debug)]
pub struct EntanglementOptions {
    pub seed: u64,
    pub random_witnesses: usize,
    pub threshold: f64,
}

impl Default for EntanglementOptions {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, random_witnesses: RANDOM_WITNESSES, threshold: SCHMIDT_THRESHOLD }
    }
}

fn digits(mut idx: usize, d: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = idx % d;
        idx /= d;
    }
    out
}

/// `k` with `d^k = n` and `k ≥ 2`.
fn factor_count(n: usize, d: usize) -> Result<usize> {
    if d < 2 {
        return Err(Error::InvalidArgument("local dimension must be at least 2".into()));
    }
    let mut k = 0;
    let mut p = 1;
    while p < n {
        p *= d;
        k += 1;
    }
    if p != n || k < 2 {
        return Err(Error::NotPerfectPower { dim: n, exponent: k.max(2) as u32 });
    }
    Ok(k)
}

/// Product inputs: every basis state, every basis state with one factor
/// replaced by the uniform superposition `|+>`, then seeded random products.
fn witness_inputs(d: usize, k: usize, opts: &EntanglementOptions) -> Vec<(String, Vec<Complex64>)> {
    let plus = vec![Complex64::new(1.0 / (d as f64).sqrt(), 0.0); d];
    let unit = |j: usize| {
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[j] = ONE;
        v
    };
    let product = |factors: &[Vec<Complex64>]| {
        factors.iter().fold(vec![ONE], |acc, f| crate::tensor::kron_vec(&acc, f))
    };
    let mut out = Vec::new();
    let total = d.pow(k as u32);
    for idx in 0..total {
        let ds = digits(idx, d, k);
        let label: String = ds.iter().map(|x| x.to_string()).collect();
        out.push((format!("|{label}>"), product(&ds.iter().map(|&j| unit(j)).collect::<Vec<_>>())));
    }
    for pos in 0..k {
        for idx in 0..d.pow(k as u32 - 1) {
            let mut ds = digits(idx, d, k - 1);
            ds.insert(pos, usize::MAX);
            let label: String = ds.iter().map(|&x| if x == usize::MAX { "+".into() } else { x.to_string() }).collect();
            let factors: Vec<Vec<Complex64>> =
                ds.iter().map(|&j| if j == usize::MAX { plus.clone() } else { unit(j) }).collect();
            out.push((format!("|{label}>"), product(&factors)));
        }
    }
    let mut r = rng(opts.seed);
    for i in 0..opts.random_witnesses {
        let factors: Vec<Vec<Complex64>> = (0..k).map(|_| normalized_vector(&mut r, d)).collect();
        out.push((format!("random#{i}"), product(&factors)));
    }
    out
}

/// Schmidt ranks of `u|ψ>` across the cut `part_a | rest` for product inputs
/// `|ψ>` on `k` factors of dimension `d`.
pub fn entanglement_across(
    u: &CMat,
    d: usize,
    part_a: &[usize],
    opts: &EntanglementOptions,
) -> Result<EntanglementReport> {
    let n = u.require_square()?;
    let k = factor_count(n, d)?;
    let mut part_a: Vec<usize> = part_a.to_vec();
    part_a.sort_unstable();
    part_a.dedup();
    if part_a.is_empty() || part_a.len() == k || part_a.iter().any(|&f| f >= k) {
        return Err(Error::InvalidArgument(format!("bipartition {part_a:?} is not a proper cut of {k} factors")));
    }
    let part_b: Vec<usize> = (0..k).filter(|f| !part_a.contains(f)).collect();
    let rows = d.pow(part_a.len() as u32);
    let cols = d.pow(part_b.len() as u32);
    let inputs = witness_inputs(d, k, opts);
    let witnesses = inputs
        .par_iter()
        .map(|(label, psi)| {
            let out = u.apply(psi);
            let mut reshaped = vec![Complex64::new(0.0, 0.0); n];
            for (idx, z) in out.iter().enumerate() {
                let ds = digits(idx, d, k);
                let r = part_a.iter().fold(0, |acc, &f| acc * d + ds[f]);
                let c = part_b.iter().fold(0, |acc, &f| acc * d + ds[f]);
                reshaped[r * cols + c] = *z;
            }
            schmidt_rank(&reshaped, rows, cols, opts.threshold)
                .map(|schmidt_rank| Witness { label: label.clone(), schmidt_rank })
        })
        .collect::<Result<Vec<_>>>()?;
    let entangling = witnesses.iter().any(|w| w.schmidt_rank >= 2);
    Ok(EntanglementReport { gate_dim: n, bipartition: part_a, witnesses, entangling })
}

/// Two-qudit criterion: `u` on `C^d ⊗ C^d` is entangling iff some product
/// input leaves with Schmidt rank at least 2.
pub fn is_entangling(u: &CMat, d: usize) -> Result<EntanglementReport> {
    is_entangling_with(u, d, &EntanglementOptions::default())
}

pub fn is_entangling_with(u: &CMat, d: usize, opts: &EntanglementOptions) -> Result<EntanglementReport> {
    let n = u.require_square()?;
    if n != d * d {
        return Err(Error::DimensionMismatch { expected: d * d, found: n });
    }
    entanglement_across(u, d, &[0], opts)
}

/// One report per cut `{i} | rest` of a gate on `k` factors.
pub fn bipartition_reports(u: &CMat, d: usize, opts: &EntanglementOptions) -> Result<Vec<EntanglementReport>> {
    let k = factor_count(u.require_square()?, d)?;
    (0..k).map(|i| entanglement_across(u, d, &[i], opts)).collect()
}

/// Compares the controlled increment against `(I⊗F†) R (I⊗F)` with the given
/// diagonal `R`.
pub fn check_cnot_decomposition_with(rd: &CMat, d: usize, tol: f64) -> Result<VerifyReport> {
    if d < 2 {
        return Err(Error::InvalidArgument("d must be at least 2".into()));
    }
    let id = CMat::identity(d);
    let f = fourier(d);
    let rhs = kron(&id, &f.adjoint()).matmul(rd)?.matmul(&kron(&id, &f))?;
    let lhs = controlled_increment(2, d)?;
    Ok(VerifyReport::new(Equation::CnotDecomposition, d * d, Residual::of_difference(&lhs, &rhs), 1.0, tol))
}

pub fn check_cnot_decomposition(d: usize, tol: f64) -> Result<VerifyReport> {
    check_cnot_decomposition_with(&build_rd(d)?, d, tol)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarRigidityVerdict {
    pub passes: bool,
    pub residual: f64,
    pub scalar: Option<Complex64>,
    /// `‖R⊗I_{d^l} − I_{d^l}⊗R‖_max`.
    pub commutation_residual: f64,
    /// A non-scalar invertible matrix passing the equation.
    pub violation: bool,
}

/// Every invertible solution is scalar when the padding is at least as wide
/// as `R`; this reports whether `r` contradicts that.
pub fn scalar_rigidity_detector(r: &CMat, sig: GybeSignature, tol: f64) -> Result<ScalarRigidityVerdict> {
    if sig.l < sig.m {
        return Err(Error::InvalidArgument(format!("padding l={} is narrower than m={}", sig.l, sig.m)));
    }
    sig.check_matrix(r)?;
    if r.det()?.norm() == 0.0 {
        return Err(Error::Singular);
    }
    let rep = verify_gybe(r, sig, tol)?;
    let scalar = is_scalar_identity(r, tol)?;
    let pad = kron_pow(&CMat::identity(sig.d), sig.l);
    let commutation_residual = kron(r, &pad).max_abs_diff(&kron(&pad, r));
    Ok(ScalarRigidityVerdict {
        passes: rep.passed,
        residual: rep.residual_max,
        scalar,
        commutation_residual,
        violation: rep.passed && scalar.is_none(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalRigidityVerdict {
    pub bybe_passes: bool,
    pub aybe_passes: bool,
    pub scalar: Option<Complex64>,
    /// Braided pass without being scalar, scalar without passing, or an
    /// algebraic failure.
    pub violation: bool,
}

/// Invertible diagonal matrices always solve the algebraic equation and solve
/// the braided one only when scalar.
pub fn diagonal_rigidity_detector(r: &CMat, tol: f64) -> Result<DiagonalRigidityVerdict> {
    let n = r.require_square()?;
    if !r.is_diagonal(0.0) {
        return Err(Error::NotDiagonal);
    }
    if integer_root(n, 2).is_none() {
        return Err(Error::NotPerfectPower { dim: n, exponent: 2 });
    }
    if r.diagonal().iter().any(|z| z.norm() == 0.0) {
        return Err(Error::Singular);
    }
    let bybe_passes = verify_bybe(r, tol)?.passed;
    let aybe_passes = verify_aybe_matrix(r, tol)?.passed;
    let scalar = is_scalar_identity(r, tol)?;
    Ok(DiagonalRigidityVerdict {
        bybe_passes,
        aybe_passes,
        scalar,
        violation: bybe_passes != scalar.is_some() || !aybe_passes,
    })
}
