//! Dense complex matrices with the Kronecker and multi-index conventions used
//! throughout the crate, plus the primitive gates every other module consumes.
//!
//! A basis vector `e_{i_1} ⊗ … ⊗ e_{i_k}` over `C^d` has the zero-based flat
//! index `Σ i_p · d^{k-p}` (first factor most significant). For a `d²×d²`
//! operator the entry at row `(a, b)` and column `(i, j)` is `R_{ij}^{ab}`, so
//! column `(i, j)` is the image of `e_i ⊗ e_j`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance for construction self-checks.
pub const CONSTRUCTION_TOL: f64 = 1e-12;

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct CMat {
    nrows: usize,
    ncols: usize,
    data: Vec<Complex64>,
}

/// On-disk interchange layout: `{"nrows": N, "ncols": M, "entries": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    nrows: usize,
    ncols: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixJson> for CMat {
    type Error = Error;

    fn try_from(m: MatrixJson) -> Result<Self> {
        if m.nrows == 0 || m.ncols == 0 {
            return Err(Error::InvalidArgument("matrix dimensions must be positive".into()));
        }
        let data = m.entries.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        CMat::from_vec(m.nrows, m.ncols, data)
    }
}

impl From<CMat> for MatrixJson {
    fn from(m: CMat) -> Self {
        MatrixJson {
            nrows: m.nrows,
            ncols: m.ncols,
            entries: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

/// A pair of one-based indices in `[1, d]` packed as `d·(first−1) + (second−1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PairIndex {
    pub d: usize,
    pub first: usize,
    pub second: usize,
}

impl PairIndex {
    pub fn new(d: usize, first: usize, second: usize) -> Result<Self> {
        if d == 0 || !(1..=d).contains(&first) || !(1..=d).contains(&second) {
            return Err(Error::InvalidArgument(format!(
                "pair ({first}, {second}) out of range for d = {d}"
            )));
        }
        Ok(Self { d, first, second })
    }

    pub fn flat(&self) -> usize {
        self.d * (self.first - 1) + (self.second - 1)
    }

    pub fn from_flat(d: usize, flat: usize) -> Result<Self> {
        if d == 0 || flat >= d * d {
            return Err(Error::InvalidArgument(format!("flat index {flat} out of range for d = {d}")));
        }
        Ok(Self { d, first: flat / d + 1, second: flat % d + 1 })
    }
}

impl CMat {
    pub fn from_vec(nrows: usize, ncols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != nrows * ncols {
            return Err(Error::EntryCount { nrows, ncols, found: data.len() });
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: k / ncols, col: k % ncols });
        }
        Ok(Self { nrows, ncols, data })
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, data: vec![ZERO; nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn scalar_identity(n: usize, lambda: Complex64) -> Self {
        Self::diag(&vec![lambda; n])
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(nrows * ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                data.push(f(i, j));
            }
        }
        Self { nrows, ncols, data }
    }

    /// Panics when rows have unequal lengths.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self { nrows, ncols, data: rows.concat() }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let rows: Vec<Vec<Complex64>> =
            rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Permutation matrix sending `e_j` to `e_{perm[j]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m[(i, j)] = ONE;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.nrows).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.nrows.min(self.ncols)).map(|i| self[(i, i)]).collect()
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.nrows)
        } else {
            Err(Error::NotSquare { nrows: self.nrows, ncols: self.ncols })
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self { nrows: self.nrows, ncols: self.ncols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { nrows: self.nrows, ncols: self.ncols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self − other`. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols), "shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..self.nrows).all(|i| (0..self.ncols).all(|j| i == j || self[(i, j)].norm() <= tol))
    }

    pub fn matmul(&self, other: &CMat) -> Result<CMat> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch { expected: self.ncols, found: other.nrows });
        }
        let mut out = CMat::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            let orow = &mut out.data[i * other.ncols..(i + 1) * other.ncols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in orow.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.ncols, v.len(), "vector length mismatch");
        (0..self.nrows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `self^k` by repeated squaring; `k = 0` gives the identity.
    pub fn pow(&self, mut k: u32) -> Result<CMat> {
        let n = self.require_square()?;
        let mut base = self.clone();
        let mut acc = CMat::identity(n);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        Ok(acc)
    }

    fn lu(&self) -> Result<Lu> {
        let n = self.require_square()?;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let scale = self.max_abs();
        for col in 0..n {
            let (p, pmax) = (col..n)
                .map(|r| (r, a[r * n + col].norm()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax <= f64::EPSILON * scale * n as f64 || pmax == 0.0 {
                return Err(Error::Singular);
            }
            if p != col {
                for j in 0..n {
                    a.swap(p * n + j, col * n + j);
                }
                perm.swap(p, col);
                sign = -sign;
            }
            let pivot = a[col * n + col];
            for r in col + 1..n {
                let f = a[r * n + col] / pivot;
                a[r * n + col] = f;
                if f != ZERO {
                    for j in col + 1..n {
                        let u = a[col * n + j];
                        a[r * n + j] -= f * u;
                    }
                }
            }
        }
        Ok(Lu { n, a, perm, sign })
    }

    /// Determinant by LU with partial pivoting; singular input yields zero.
    pub fn det(&self) -> Result<Complex64> {
        match self.lu() {
            Ok(lu) => Ok((0..lu.n).map(|i| lu.a[i * lu.n + i]).product::<Complex64>() * lu.sign),
            Err(Error::Singular) => Ok(ZERO),
            Err(e) => Err(e),
        }
    }

    pub fn inverse(&self) -> Result<CMat> {
        let lu = self.lu()?;
        let n = lu.n;
        let mut inv = CMat::zeros(n, n);
        for c in 0..n {
            let mut x: Vec<Complex64> = (0..n).map(|i| if lu.perm[i] == c { ONE } else { ZERO }).collect();
            for i in 0..n {
                let s: Complex64 = (0..i).map(|k| lu.a[i * n + k] * x[k]).sum();
                x[i] -= s;
            }
            for i in (0..n).rev() {
                let s: Complex64 = (i + 1..n).map(|k| lu.a[i * n + k] * x[k]).sum();
                x[i] = (x[i] - s) / lu.a[i * n + i];
            }
            for (i, xi) in x.into_iter().enumerate() {
                inv[(i, c)] = xi;
            }
        }
        if let Some(k) = inv.data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: k / n, col: k % n });
        }
        Ok(inv)
    }

    /// 1-norm condition estimate `‖A‖₁·‖A⁻¹‖₁`.
    pub fn condition_1(&self) -> Result<f64> {
        let inv = self.inverse()?;
        Ok(self.norm_1() * inv.norm_1())
    }

    fn norm_1(&self) -> f64 {
        (0..self.ncols).map(|j| (0..self.nrows).map(|i| self[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

struct Lu {
    n: usize,
    a: Vec<Complex64>,
    perm: Vec<usize>,
    sign: f64,
}

impl Index<(usize, usize)> for CMat {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.nrows && j < self.ncols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.ncols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.nrows && j < self.ncols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.ncols + j]
    }
}

impl Mul for &CMat {
    type Output = CMat;

    fn mul(self, rhs: &CMat) -> CMat {
        self.matmul(rhs).expect("inner dimensions must agree")
    }
}

impl Add for &CMat {
    type Output = CMat;

    fn add(self, rhs: &CMat) -> CMat {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols), "shape mismatch");
        CMat { nrows: self.nrows, ncols: self.ncols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CMat {
    type Output = CMat;

    fn sub(self, rhs: &CMat) -> CMat {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols), "shape mismatch");
        CMat { nrows: self.nrows, ncols: self.ncols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.nrows, self.ncols)?;
        for i in 0..self.nrows {
            write!(f, " ")?;
            for z in self.row(i) {
                write!(f, " {:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product: block `(i, j)` of the result is `a[i, j]·b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac, br, bc) = (a.nrows, a.ncols, b.nrows, b.ncols);
    let mut out = CMat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let s = a[(i, j)];
            if s == ZERO {
                continue;
            }
            for p in 0..br {
                for q in 0..bc {
                    out[(i * br + p, j * bc + q)] = s * b[(p, q)];
                }
            }
        }
    }
    out
}

/// `a ⊗ a ⊗ … ⊗ a` with `k` factors, left-associated; `k = 0` is the 1×1 identity.
pub fn kron_pow(a: &CMat, k: usize) -> CMat {
    (0..k).fold(CMat::identity(1), |acc, _| kron(&acc, a))
}

/// Swap `P: e_i ⊗ e_j ↦ e_j ⊗ e_i` on `C^d ⊗ C^d`.
pub fn swap_operator(d: usize) -> CMat {
    let perm: Vec<usize> = (0..d * d).map(|k| (k % d) * d + k / d).collect();
    CMat::permutation(&perm)
}

/// Discrete Fourier transform `F_d`, entry `(j, k) = ω^{jk}/√d` with `ω = e^{2πi/d}`.
pub fn fourier(d: usize) -> CMat {
    let norm = 1.0 / (d as f64).sqrt();
    CMat::from_fn(d, d, |j, k| {
        // reduce the exponent first so large d keeps full phase accuracy
        let e = (j * k) % d;
        Complex64::from_polar(norm, 2.0 * PI * e as f64 / d as f64)
    })
}

/// Increment `X_d`: `e_j ↦ e_{(j+1) mod d}`.
pub fn increment(d: usize) -> CMat {
    let perm: Vec<usize> = (0..d).map(|j| (j + 1) % d).collect();
    CMat::permutation(&perm)
}

/// Controlled increment `C^n_{X,d}`: `C^1 = X_d`, and `C^n` is block diagonal
/// with blocks `I, C^{n−1}, I, …, I` of size `d^{n−1}`.
pub fn controlled_increment(n: usize, d: usize) -> Result<CMat> {
    if n == 0 {
        return Err(Error::InvalidArgument("controlled increment needs n >= 1".into()));
    }
    if d < 2 {
        return Err(Error::InvalidArgument("controlled increment needs d >= 2".into()));
    }
    let mut c = increment(d);
    for _ in 1..n {
        let block = c.nrows;
        let mut next = CMat::identity(block * d);
        for i in 0..block {
            for j in 0..block {
                next[(block + i, block + j)] = c[(i, j)];
            }
        }
        c = next;
    }
    Ok(c)
}

pub fn is_unitary(m: &CMat, tol: f64) -> Result<bool> {
    Ok(unitarity_defect(m)? <= tol)
}

/// `max |m·m† − I|`.
pub fn unitarity_defect(m: &CMat) -> Result<f64> {
    let n = m.require_square()?;
    Ok((&(m * &m.adjoint()) - &CMat::identity(n)).max_abs())
}

/// Returns `λ` (the mean of the diagonal) when `max |m − λI| ≤ tol`.
pub fn is_scalar_identity(m: &CMat, tol: f64) -> Result<Option<Complex64>> {
    let n = m.require_square()?;
    let lambda = m.diagonal().iter().sum::<Complex64>() / n as f64;
    let dev = (&CMat::scalar_identity(n, lambda) - m).max_abs();
    Ok((dev <= tol).then_some(lambda))
}

/// Basis vector `e_k` of length `n`.
pub fn basis(n: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; n];
    v[k] = ONE;
    v
}

/// Kronecker product of vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Integer `base` with `base^exponent == dim`, if one exists.
pub fn integer_root(dim: usize, exponent: u32) -> Option<usize> {
    if exponent == 0 {
        return None;
    }
    let guess = (dim as f64).powf(1.0 / exponent as f64).round() as usize;
    (guess.saturating_sub(1)..=guess + 1).find(|b| *b >= 1 && b.checked_pow(exponent) == Some(dim))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_identities() {
        assert_eq!(kron(&CMat::identity(2), &CMat::identity(2)), CMat::identity(4));
        let x = increment(2);
        let k = kron(&x, &CMat::identity(2));
        let expected = CMat::from_real_rows(&[
            &[0., 0., 1., 0.],
            &[0., 0., 0., 1.],
            &[1., 0., 0., 0.],
            &[0., 1., 0., 0.],
        ]);
        assert_eq!(k, expected);
    }

    #[test]
    fn kron_fourier_on_ground_state_is_uniform() {
        let f = kron(&fourier(2), &fourier(2));
        let out = f.apply(&basis(4, 0));
        for z in out {
            assert!((z - c(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn kron_pow_cases() {
        assert_eq!(kron_pow(&CMat::identity(2), 3), CMat::identity(8));
        assert_eq!(kron_pow(&CMat::identity(5), 0), CMat::identity(1));
        let m = CMat::from_fn(3, 2, |i, j| c(i as f64, j as f64 + 1.0));
        assert_eq!(kron_pow(&m, 1), m);
        // basis images enumerated by hand: (i, j) -> (i+1 mod 2, j+1 mod 2)
        let x2 = kron_pow(&increment(2), 2);
        let images = [3usize, 2, 1, 0];
        for (col, &row) in images.iter().enumerate() {
            assert_eq!(x2.apply(&basis(4, col)), basis(4, row));
        }
    }

    #[test]
    fn swap_cases() {
        assert_eq!(swap_operator(1), CMat::identity(1));
        let p2 = swap_operator(2);
        let expected = CMat::from_real_rows(&[
            &[1., 0., 0., 0.],
            &[0., 0., 1., 0.],
            &[0., 1., 0., 0.],
            &[0., 0., 0., 1.],
        ]);
        assert_eq!(p2, expected);
        // e_1 ⊗ e_3 -> e_3 ⊗ e_1 (one-based), i.e. flat 2 -> flat 6
        let p3 = swap_operator(3);
        let src = PairIndex::new(3, 1, 3).unwrap().flat();
        let dst = PairIndex::new(3, 3, 1).unwrap().flat();
        assert_eq!(p3.apply(&basis(9, src)), basis(9, dst));
        for d in 1..6 {
            let p = swap_operator(d);
            assert_eq!(&p * &p, CMat::identity(d * d));
        }
    }

    #[test]
    fn fourier_cases() {
        assert_eq!(fourier(1), CMat::identity(1));
        let h = 1.0 / 2f64.sqrt();
        let f2 = CMat::from_real_rows(&[&[h, h], &[h, -h]]);
        assert!(fourier(2).max_abs_diff(&f2) < 1e-15);
        let f4 = fourier(4);
        assert!((&f4 * &f4.adjoint()).max_abs_diff(&CMat::identity(4)) < 1e-12);
        assert!(is_unitary(&fourier(7), 1e-12).unwrap());
    }

    #[test]
    fn fourier_diagonalizes_increment() {
        for d in 2..=8 {
            let f = fourier(d);
            let m = &(&f.adjoint() * &increment(d)) * &f;
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        assert!(m[(i, j)].norm() <= 1e-12, "d={d} ({i},{j})");
                    }
                }
            }
            // eigenvalue ordering fixed by the column order of F_d: ω^{-k}
            for k in 0..d {
                let w = Complex64::from_polar(1.0, -2.0 * PI * k as f64 / d as f64);
                assert!((m[(k, k)] - w).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn increment_cases() {
        assert_eq!(increment(2), CMat::from_real_rows(&[&[0., 1.], &[1., 0.]]));
        // X_3 e_3 = e_1 (one-based): top-right corner
        assert_eq!(increment(3).apply(&basis(3, 2)), basis(3, 0));
        for d in 2..=5 {
            assert_eq!(increment(d).pow(d as u32).unwrap(), CMat::identity(d));
        }
    }

    #[test]
    fn controlled_increment_cases() {
        assert_eq!(controlled_increment(1, 3).unwrap(), increment(3));
        let cnot = CMat::from_real_rows(&[
            &[1., 0., 0., 0.],
            &[0., 1., 0., 0.],
            &[0., 0., 0., 1.],
            &[0., 0., 1., 0.],
        ]);
        assert_eq!(controlled_increment(2, 2).unwrap(), cnot);
        let input: Vec<Complex64> = [1., 0., 1., 0.].iter().map(|&x| c(x, 0.)).collect();
        let output: Vec<Complex64> = [1., 0., 0., 1.].iter().map(|&x| c(x, 0.)).collect();
        assert_eq!(cnot.apply(&input), output);
        assert!(controlled_increment(0, 2).is_err());
        assert!(controlled_increment(2, 1).is_err());
    }

    #[test]
    fn controlled_increment_is_permutation() {
        for n in 1..=4 {
            for d in 2..=4 {
                let m = controlled_increment(n, d).unwrap();
                let size = d.pow(n as u32);
                assert_eq!(m.nrows(), size);
                for i in 0..size {
                    let ones_row = m.row(i).iter().filter(|z| **z == ONE).count();
                    let zeros_row = m.row(i).iter().filter(|z| **z == ZERO).count();
                    assert_eq!((ones_row, zeros_row), (1, size - 1));
                    let ones_col = m.column(i).iter().filter(|z| **z == ONE).count();
                    assert_eq!(ones_col, 1);
                }
                assert!(is_unitary(&m, 0.0).unwrap());
            }
        }
    }

    #[test]
    fn unitary_and_scalar_checks() {
        assert!(is_unitary(&CMat::identity(5), 1e-12).unwrap());
        assert!(!is_unitary(&CMat::identity(2).scale(c(2., 0.)), 1e-12).unwrap());
        assert!(matches!(is_unitary(&CMat::zeros(2, 3), 1e-12), Err(Error::NotSquare { .. })));

        let lam = c(3., 4.);
        assert_eq!(is_scalar_identity(&CMat::scalar_identity(9, lam), 1e-12).unwrap(), Some(lam));
        assert_eq!(is_scalar_identity(&CMat::diag(&[ONE, c(2., 0.)]), 1e-12).unwrap(), None);
        assert_eq!(is_scalar_identity(&swap_operator(2), 1e-12).unwrap(), None);
        assert!(is_scalar_identity(&CMat::zeros(1, 2), 1e-12).is_err());
    }

    #[test]
    fn inverse_and_det() {
        let m = CMat::from_rows(&[vec![c(1., 2.), c(0., 1.)], vec![c(3., 0.), c(-1., 1.)]]);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).max_abs_diff(&CMat::identity(2)) < 1e-14);
        let det = m.det().unwrap();
        let expected = c(1., 2.) * c(-1., 1.) - c(0., 1.) * c(3., 0.);
        assert!((det - expected).norm() < 1e-14);
        let sing = CMat::from_real_rows(&[&[1., 2.], &[2., 4.]]);
        assert!(matches!(sing.inverse(), Err(Error::Singular)));
        assert_eq!(sing.det().unwrap(), ZERO);
    }

    #[test]
    fn pair_index_bijective() {
        for d in 1..5 {
            let mut seen = vec![false; d * d];
            for a in 1..=d {
                for b in 1..=d {
                    let p = PairIndex::new(d, a, b).unwrap();
                    assert!(!seen[p.flat()]);
                    seen[p.flat()] = true;
                    assert_eq!(PairIndex::from_flat(d, p.flat()).unwrap(), p);
                }
            }
        }
        assert!(PairIndex::new(3, 0, 1).is_err());
        assert!(PairIndex::new(3, 1, 4).is_err());
    }

    #[test]
    fn json_rejects_bad_lengths() {
        let bad = r#"{"nrows": 2, "ncols": 2, "entries": [[1,0],[0,0],[0,0]]}"#;
        assert!(CMat::from_json(bad).is_err());
        let good = r#"{"nrows": 1, "ncols": 2, "entries": [[1,0],[0,-1]]}"#;
        let m = CMat::from_json(good).unwrap();
        assert_eq!(m[(0, 1)], c(0., -1.));
        assert_eq!(CMat::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn integer_roots() {
        assert_eq!(integer_root(81, 2), Some(9));
        assert_eq!(integer_root(8, 3), Some(2));
        assert_eq!(integer_root(8, 2), None);
        assert_eq!(integer_root(1, 2), Some(1));
    }
}
