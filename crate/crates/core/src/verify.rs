//! Residual checks for the braided, algebraic and generalized Yang-Baxter
//! equations, and for the braid relations of the induced representations.
//!
//! Residuals are reported raw and normalized by `max(1, ‖R‖_max³)` (or the
//! square for two-generator words); pass/fail uses the normalized max-abs.
//!
//! The gYBE and braid checks never materialize the big operators: each side of
//! the equation is applied to one basis column at a time with `R` acting on a
//! contiguous group of tensor factors. The dense routines here are kept as an
//! oracle for small instances.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{integer_root, kron, kron_pow, swap_operator, CMat, ZERO};

/// Default verification tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Braid checks refuse representations larger than this unless forced.
pub const BRAID_DIM_CAP: u128 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Equation {
    Bybe,
    AybeMatrix,
    AybeIndex,
    Gybe,
    BraidRel,
    FarComm,
    CnotDecomposition,
}

/// The `(d, m, l)` of a generalized Yang-Baxter equation: `R` acts on
/// `(C^d)^{⊗m}` and the two placements are offset by `l` factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GybeSignature {
    pub d: usize,
    pub m: usize,
    pub l: usize,
}

impl GybeSignature {
    pub fn new(d: usize, m: usize, l: usize) -> Result<Self> {
        if d < 2 || m < 1 || l < 1 {
            return Err(Error::InvalidArgument(format!(
                "signature ({d},{m},{l}) needs d >= 2, m >= 1, l >= 1"
            )));
        }
        Ok(Self { d, m, l })
    }

    /// The braided equation on `C^d ⊗ C^d`.
    pub fn braided(d: usize) -> Result<Self> {
        Self::new(d, 2, 1)
    }

    /// Side length of `R`.
    pub fn r_dim(&self) -> usize {
        self.d.pow(self.m as u32)
    }

    /// Side length of the operators in the equation, `d^{m+l}`.
    pub fn equation_dim(&self) -> usize {
        self.d.pow((self.m + self.l) as u32)
    }

    /// Whether the represented generators commute automatically when far apart.
    pub fn far_commutativity_guaranteed(&self) -> bool {
        2 * self.l > self.m
    }

    pub fn check_matrix(&self, r: &CMat) -> Result<()> {
        let n = r.require_square()?;
        if n != self.r_dim() {
            return Err(Error::DimensionMismatch { expected: self.r_dim(), found: n });
        }
        Ok(())
    }
}

impl std::fmt::Display for GybeSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{}", self.d, self.m, self.l)
    }
}

impl std::str::FromStr for GybeSignature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad signature `{s}`"))))
            .collect::<Result<_>>()?;
        match parts[..] {
            [d, m, l] => Self::new(d, m, l),
            _ => Err(Error::Parse(format!("signature `{s}` must be d,m,l"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub equation: Equation,
    pub lhs_dim: usize,
    /// Normalized max-abs residual; `passed` is keyed to this.
    pub residual_max: f64,
    pub residual_fro: f64,
    pub raw_max: f64,
    pub raw_fro: f64,
    pub tol: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub relation: Option<String>,
}

impl VerifyReport {
    pub(crate) fn new(equation: Equation, lhs_dim: usize, raw: Residual, scale: f64, tol: f64) -> Self {
        let residual_max = raw.max / scale;
        Self {
            equation,
            lhs_dim,
            residual_max,
            residual_fro: raw.fro / scale,
            raw_max: raw.max,
            raw_fro: raw.fro,
            tol,
            passed: residual_max <= tol,
            relation: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization is infallible")
    }
}

/// Max-abs and Frobenius norm of a difference.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Residual {
    pub max: f64,
    pub fro: f64,
}

impl Residual {
    pub fn of_difference(a: &CMat, b: &CMat) -> Self {
        let diff = a - b;
        Self { max: diff.max_abs(), fro: diff.frobenius() }
    }
}

pub(crate) fn cube_scale(r: &CMat) -> f64 {
    r.max_abs().powi(3).max(1.0)
}

fn square_scale(r: &CMat) -> f64 {
    r.max_abs().powi(2).max(1.0)
}

/// `R` acting on factors `[offset, offset + m)` of a `d^factors` space.
#[derive(Clone, Copy, Debug)]
struct Placement {
    /// `d^(factors − offset − m)`: stride of the block index.
    inner: usize,
    block: usize,
}

impl Placement {
    fn new(d: usize, m: usize, factors: usize, offset: usize) -> Self {
        debug_assert!(offset + m <= factors);
        Self { inner: d.pow((factors - offset - m) as u32), block: d.pow(m as u32) }
    }

    fn apply(&self, r: &CMat, v: &[Complex64], out: &mut [Complex64]) {
        let (inner, block) = (self.inner, self.block);
        let chunk = block * inner;
        out.fill(ZERO);
        for (vin, vout) in v.chunks_exact(chunk).zip(out.chunks_exact_mut(chunk)) {
            for b in 0..block {
                let src = &vin[b * inner..(b + 1) * inner];
                if src.iter().all(|z| *z == ZERO) {
                    continue;
                }
                for a in 0..block {
                    let coef = r[(a, b)];
                    if coef == ZERO {
                        continue;
                    }
                    let dst = &mut vout[a * inner..(a + 1) * inner];
                    for (o, s) in dst.iter_mut().zip(src) {
                        *o += coef * s;
                    }
                }
            }
        }
    }
}

/// Residual between two words in placed copies of `r`, written in matrix-product
/// order, evaluated column by column over a `dim`-dimensional space.
fn word_residual(r: &CMat, dim: usize, lhs: &[Placement], rhs: &[Placement]) -> Residual {
    let run = |word: &[Placement], col: usize, a: &mut Vec<Complex64>, b: &mut Vec<Complex64>| {
        a.fill(ZERO);
        a[col] = Complex64::new(1.0, 0.0);
        for p in word.iter().rev() {
            p.apply(r, a, b);
            std::mem::swap(a, b);
        }
    };
    let per_column: Vec<(f64, f64)> = (0..dim)
        .into_par_iter()
        .map_init(
            || (vec![ZERO; dim], vec![ZERO; dim], vec![ZERO; dim], vec![ZERO; dim]),
            |(l, lt, rr, rt), col| {
                run(lhs, col, l, lt);
                run(rhs, col, rr, rt);
                l.iter().zip(rr.iter()).fold((0.0f64, 0.0f64), |(mx, ss), (x, y)| {
                    let e = (x - y).norm();
                    (mx.max(e), ss + e * e)
                })
            },
        )
        .collect();
    // sequential reduction keeps the Frobenius sum order fixed
    let (max, ss) = per_column.iter().fold((0.0f64, 0.0f64), |(m, s), (cm, cs)| (m.max(*cm), s + cs));
    Residual { max, fro: ss.sqrt() }
}

fn gybe_residual_structured(r: &CMat, d: usize, m: usize, l: usize) -> Residual {
    let factors = m + l;
    let a = Placement::new(d, m, factors, 0);
    let b = Placement::new(d, m, factors, l);
    word_residual(r, d.pow(factors as u32), &[a, b, a], &[b, a, b])
}

/// Dense evaluation of the gYBE residual; the oracle for the structured path.
pub fn gybe_residual_dense(r: &CMat, sig: GybeSignature) -> Result<Residual> {
    sig.check_matrix(r)?;
    let pad = CMat::identity(sig.d.pow(sig.l as u32));
    let a = kron(r, &pad);
    let b = kron(&pad, r);
    let lhs = &(&a * &b) * &a;
    let rhs = &(&b * &a) * &b;
    Ok(Residual::of_difference(&lhs, &rhs))
}

/// `(R⊗I)(I⊗R)(R⊗I) = (I⊗R)(R⊗I)(I⊗R)` on `(C^d)^{⊗3}`.
pub fn verify_bybe(r: &CMat, tol: f64) -> Result<VerifyReport> {
    let n = r.require_square()?;
    let d = integer_root(n, 2).ok_or(Error::NotPerfectPower { dim: n, exponent: 2 })?;
    let raw = gybe_residual_structured(r, d, 2, 1);
    Ok(VerifyReport::new(Equation::Bybe, d.pow(3), raw, cube_scale(r), tol))
}

/// The `(d, m, l)` generalized equation.
pub fn verify_gybe(r: &CMat, sig: GybeSignature, tol: f64) -> Result<VerifyReport> {
    sig.check_matrix(r)?;
    let raw = gybe_residual_structured(r, sig.d, sig.m, sig.l);
    Ok(VerifyReport::new(Equation::Gybe, sig.equation_dim(), raw, cube_scale(r), tol))
}

/// `R₁₂, R₁₃, R₂₃` on `(C^d)^{⊗3}`, with `R₁₃ = (I⊗P)(R⊗I)(I⊗P)`.
pub fn aybe_placements(r: &CMat) -> Result<(CMat, CMat, CMat)> {
    let n = r.require_square()?;
    let d = integer_root(n, 2).ok_or(Error::NotPerfectPower { dim: n, exponent: 2 })?;
    let id = CMat::identity(d);
    let r12 = kron(r, &id);
    let r23 = kron(&id, r);
    let ip = kron(&id, &swap_operator(d));
    let r13 = &(&ip * &r12) * &ip;
    Ok((r12, r13, r23))
}

/// `R₁₂R₁₃R₂₃ = R₂₃R₁₃R₁₂` evaluated as dense matrix products.
pub fn verify_aybe_matrix(r: &CMat, tol: f64) -> Result<VerifyReport> {
    let (r12, r13, r23) = aybe_placements(r)?;
    let lhs = &(&r12 * &r13) * &r23;
    let rhs = &(&r23 * &r13) * &r12;
    let raw = Residual::of_difference(&lhs, &rhs);
    Ok(VerifyReport::new(Equation::AybeMatrix, lhs.nrows(), raw, cube_scale(r), tol))
}

/// The component form: for every `(j₁,j₂,j₃,l₁,l₂,l₃)`,
/// `Σ_k R_{j₁j₂}^{k₁k₂} R_{k₁j₃}^{l₁k₃} R_{k₂k₃}^{l₂l₃} = Σ_k R_{j₂j₃}^{k₂k₃} R_{j₁k₃}^{k₁l₃} R_{k₁k₂}^{l₁l₂}`.
pub fn verify_aybe_index(r: &CMat, tol: f64) -> Result<VerifyReport> {
    let n = r.require_square()?;
    let d = integer_root(n, 2).ok_or(Error::NotPerfectPower { dim: n, exponent: 2 })?;
    // R_{ij}^{ab} sits at row (a,b), column (i,j)
    let e = |lower: (usize, usize), upper: (usize, usize)| r[(upper.0 * d + upper.1, lower.0 * d + lower.1)];
    let mut max = 0.0f64;
    let mut ss = 0.0f64;
    for j1 in 0..d {
        for j2 in 0..d {
            for j3 in 0..d {
                for l1 in 0..d {
                    for l2 in 0..d {
                        for l3 in 0..d {
                            let mut lhs = ZERO;
                            let mut rhs = ZERO;
                            for k1 in 0..d {
                                for k2 in 0..d {
                                    for k3 in 0..d {
                                        lhs += e((j1, j2), (k1, k2)) * e((k1, j3), (l1, k3)) * e((k2, k3), (l2, l3));
                                        rhs += e((j2, j3), (k2, k3)) * e((j1, k3), (k1, l3)) * e((k1, k2), (l1, l2));
                                    }
                                }
                            }
                            let res = (lhs - rhs).norm();
                            max = max.max(res);
                            ss += res * res;
                        }
                    }
                }
            }
        }
    }
    let raw = Residual { max, fro: ss.sqrt() };
    Ok(VerifyReport::new(Equation::AybeIndex, d.pow(3), raw, cube_scale(r), tol))
}

/// Number of tensor factors in the `n`-strand representation.
fn braid_factors(sig: GybeSignature, n_strands: usize) -> usize {
    sig.l * (n_strands - 2) + sig.m
}

/// Side length `d^{l(n−2)+m}` of the `n`-strand representation.
pub fn braid_dimension(sig: GybeSignature, n_strands: usize) -> u128 {
    (sig.d as u128).saturating_pow(braid_factors(sig, n_strands.max(2)) as u32)
}

/// Image of `σ_i` (one-based): `I_{d^l}^{⊗(i−1)} ⊗ R ⊗ I_{d^l}^{⊗(n−i−1)}`.
pub fn braid_representation(r: &CMat, sig: GybeSignature, n_strands: usize, i: usize) -> Result<CMat> {
    sig.check_matrix(r)?;
    if n_strands < 2 || i == 0 || i >= n_strands {
        return Err(Error::InvalidArgument(format!(
            "generator index {i} out of range for {n_strands} strands"
        )));
    }
    let pad = CMat::identity(sig.d.pow(sig.l as u32));
    let left = kron_pow(&pad, i - 1);
    let right = kron_pow(&pad, n_strands - i - 1);
    Ok(kron(&kron(&left, r), &right))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BraidRelationsReport {
    pub n_strands: usize,
    pub dim: usize,
    /// Yang-Baxter relations `σ_iσ_{i+1}σ_i = σ_{i+1}σ_iσ_{i+1}`.
    pub adjacent: Vec<VerifyReport>,
    /// Far commutativity `σ_iσ_j = σ_jσ_i`, `|i−j| > 1`.
    pub far: Vec<VerifyReport>,
    pub worst_relation: String,
    pub worst_residual: f64,
    pub passed: bool,
}

impl BraidRelationsReport {
    pub fn adjacent_passed(&self) -> bool {
        self.adjacent.iter().all(|r| r.passed)
    }

    pub fn far_passed(&self) -> bool {
        self.far.iter().all(|r| r.passed)
    }
}

/// Checks every adjacent and far-commutativity relation of the `n`-strand
/// representation built from `r`. Refuses dimensions above [`BRAID_DIM_CAP`]
/// unless `force` is set.
pub fn verify_braid_relations(
    r: &CMat,
    sig: GybeSignature,
    n_strands: usize,
    tol: f64,
    force: bool,
) -> Result<BraidRelationsReport> {
    sig.check_matrix(r)?;
    if n_strands < 3 {
        return Err(Error::InvalidArgument("braid relations need at least 3 strands".into()));
    }
    let dim = braid_dimension(sig, n_strands);
    if dim > BRAID_DIM_CAP && !force {
        return Err(Error::CapExceeded { dim, cap: BRAID_DIM_CAP });
    }
    let dim = usize::try_from(dim).map_err(|_| Error::CapExceeded { dim, cap: usize::MAX as u128 })?;
    let factors = braid_factors(sig, n_strands);
    let gen = |i: usize| Placement::new(sig.d, sig.m, factors, (i - 1) * sig.l);

    let mut adjacent = Vec::new();
    for i in 1..n_strands - 1 {
        let (a, b) = (gen(i), gen(i + 1));
        let raw = word_residual(r, dim, &[a, b, a], &[b, a, b]);
        let mut rep = VerifyReport::new(Equation::BraidRel, dim, raw, cube_scale(r), tol);
        rep.relation = Some(format!("s{i} s{} s{i} = s{} s{i} s{}", i + 1, i + 1, i + 1));
        adjacent.push(rep);
    }
    let mut far = Vec::new();
    for i in 1..n_strands {
        for j in i + 2..n_strands {
            let (a, b) = (gen(i), gen(j));
            let raw = word_residual(r, dim, &[a, b], &[b, a]);
            let mut rep = VerifyReport::new(Equation::FarComm, dim, raw, square_scale(r), tol);
            rep.relation = Some(format!("s{i} s{j} = s{j} s{i}"));
            far.push(rep);
        }
    }
    let worst = adjacent
        .iter()
        .chain(&far)
        .max_by(|a, b| a.residual_max.total_cmp(&b.residual_max))
        .expect("at least one relation for n >= 3");
    Ok(BraidRelationsReport {
        n_strands,
        dim,
        worst_relation: worst.relation.clone().unwrap_or_default(),
        worst_residual: worst.residual_max,
        passed: adjacent.iter().chain(&far).all(|r| r.passed),
        adjacent,
        far,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::ONE;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn kl1() -> CMat {
        CMat::diag(&[ONE, ONE, ONE, -ONE])
    }

    #[test]
    fn bybe_examples() {
        let kl2 = &kl1() * &swap_operator(2);
        let rep = verify_bybe(&kl2, 1e-12).unwrap();
        assert!(rep.passed && rep.raw_max == 0.0);
        assert!(!verify_bybe(&kl1(), 1e-12).unwrap().passed);
        for d in 1..=4 {
            let rep = verify_bybe(&CMat::identity(d * d), 1e-12).unwrap();
            assert!(rep.passed);
            assert_eq!(rep.raw_max, 0.0);
        }
        let rep = verify_bybe(&CMat::diag(&[c(1., 0.), c(2., 0.), c(3., 0.), c(4., 0.)]), 1e-10).unwrap();
        assert!(!rep.passed);
        assert!(matches!(verify_bybe(&CMat::identity(3), 1e-10), Err(Error::NotPerfectPower { .. })));
    }

    #[test]
    fn aybe_identity_and_diag_phase() {
        for r in [CMat::identity(4), CMat::diag(&[ONE, c(0., 1.), c(0., 1.), ONE])] {
            assert!(verify_aybe_index(&r, 1e-12).unwrap().passed);
            assert!(verify_aybe_matrix(&r, 1e-12).unwrap().passed);
        }
        assert_eq!(verify_aybe_index(&CMat::identity(4), 0.0).unwrap().raw_max, 0.0);
    }

    #[test]
    fn aybe_swap_composition_direction() {
        // P·diag(1,1,1,−1) and diag(1,1,1,−1)·P coincide here (the diagonal
        // is swap-symmetric), and the product solves the braided form.
        let d = kl1();
        let p = swap_operator(2);
        let dp = &d * &p;
        let pd = &p * &d;
        assert_eq!(dp, pd);
        assert!(verify_bybe(&dp, 1e-12).unwrap().passed);
        assert!(!verify_aybe_matrix(&dp, 1e-10).unwrap().passed);
    }

    #[test]
    fn gybe_scalar_identity() {
        for (d, m, l) in [(2, 2, 1), (2, 3, 2), (3, 2, 2), (2, 2, 3)] {
            let sig = GybeSignature::new(d, m, l).unwrap();
            let r = CMat::scalar_identity(sig.r_dim(), c(2., -1.));
            let rep = verify_gybe(&r, sig, 1e-12).unwrap();
            assert!(rep.passed);
            assert_eq!(rep.raw_max, 0.0);
        }
    }

    #[test]
    fn gybe_rejects_mismatched_dimension() {
        let sig = GybeSignature::new(2, 3, 2).unwrap();
        assert!(matches!(verify_gybe(&CMat::identity(4), sig, 1e-10), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn braided_signature_matches_bybe_exactly() {
        let r = CMat::from_fn(9, 9, |i, j| c((i * 7 + j * 3) as f64 % 5.0 - 2.0, (i + 2 * j) as f64 % 3.0));
        let a = verify_bybe(&r, 1e-10).unwrap();
        let b = verify_gybe(&r, GybeSignature::braided(3).unwrap(), 1e-10).unwrap();
        assert_eq!(a.raw_max, b.raw_max);
        assert_eq!(a.raw_fro, b.raw_fro);
    }

    #[test]
    fn signature_parsing_and_flag() {
        let s: GybeSignature = "2,3,2".parse().unwrap();
        assert_eq!(s, GybeSignature { d: 2, m: 3, l: 2 });
        assert!(s.far_commutativity_guaranteed());
        assert!(!GybeSignature::new(2, 3, 1).unwrap().far_commutativity_guaranteed());
        assert!("2,3".parse::<GybeSignature>().is_err());
        assert!("1,2,1".parse::<GybeSignature>().is_err());
    }

    #[test]
    fn braid_representation_shapes() {
        let r = CMat::from_fn(4, 4, |i, j| c(i as f64 + 1.0, j as f64));
        let sig = GybeSignature::braided(2).unwrap();
        let s1 = braid_representation(&r, sig, 3, 1).unwrap();
        assert_eq!(s1, kron(&r, &CMat::identity(2)));
        assert_eq!(braid_representation(&r, sig, 2, 1).unwrap(), r);
        assert!(braid_representation(&r, sig, 3, 3).is_err());
        assert!(braid_representation(&r, sig, 3, 0).is_err());

        let r8 = CMat::from_fn(8, 8, |i, j| c((i ^ j) as f64, 0.0));
        let sig = GybeSignature::new(2, 3, 2).unwrap();
        let s2 = braid_representation(&r8, sig, 3, 2).unwrap();
        assert_eq!(s2, kron(&CMat::identity(4), &r8));
    }

    #[test]
    fn braid_cap_enforced() {
        let sig = GybeSignature::braided(2).unwrap();
        let err = verify_braid_relations(&CMat::identity(4), sig, 18, 1e-10, false).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn structured_braid_relation_matches_dense() {
        let r = CMat::from_fn(4, 4, |i, j| c((3 * i + j) as f64 % 4.0 - 1.5, (i * j) as f64 % 3.0 - 1.0));
        let sig = GybeSignature::braided(2).unwrap();
        let rep = verify_braid_relations(&r, sig, 4, 1e-10, false).unwrap();
        let s: Vec<CMat> = (1..4).map(|i| braid_representation(&r, sig, 4, i).unwrap()).collect();
        let dense = Residual::of_difference(&(&(&s[0] * &s[1]) * &s[0]), &(&(&s[1] * &s[0]) * &s[1]));
        assert!((rep.adjacent[0].raw_max - dense.max).abs() < 1e-9);
        let dense_far = Residual::of_difference(&(&s[0] * &s[2]), &(&s[2] * &s[0]));
        assert!(dense_far.max < 1e-12);
        assert!(rep.far_passed());
        assert!(!rep.adjacent_passed());
    }
}
