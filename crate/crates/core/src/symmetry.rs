//! Transformations that map solutions of a (d,m,l) equation to solutions of
//! the same equation: nonzero scaling, inverse, conjugate, transpose, adjoint,
//! and local conjugation `Q^{⊗m} R (Q⁻¹)^{⊗m}`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{kron_pow, CMat, ZERO};
use crate::verify::{verify_gybe, GybeSignature};

/// Local conjugations with a worse 1-norm condition estimate are refused.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Clone, Debug, PartialEq)]
pub enum SymmetryOp {
    Scale(Complex64),
    Inverse,
    Conjugate,
    Transpose,
    Adjoint,
    LocalConjugate { q: CMat, m: usize },
}

impl fmt::Display for SymmetryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetryOp::Scale(z) => write!(f, "scale({},{})", z.re, z.im),
            SymmetryOp::Inverse => f.write_str("inverse"),
            SymmetryOp::Conjugate => f.write_str("conjugate"),
            SymmetryOp::Transpose => f.write_str("transpose"),
            SymmetryOp::Adjoint => f.write_str("adjoint"),
            SymmetryOp::LocalConjugate { q, m } => write!(f, "localconj(q {}x{}, m={m})", q.nrows(), q.ncols()),
        }
    }
}

pub fn apply_symmetry(op: &SymmetryOp, r: &CMat) -> Result<CMat> {
    let n = r.require_square()?;
    match op {
        SymmetryOp::Scale(z) if *z == ZERO => Err(Error::InvalidArgument("scale factor must be nonzero".into())),
        SymmetryOp::Scale(z) => Ok(r.scale(*z)),
        SymmetryOp::Inverse => r.inverse(),
        SymmetryOp::Conjugate => Ok(r.conj()),
        SymmetryOp::Transpose => Ok(r.transpose()),
        SymmetryOp::Adjoint => Ok(r.adjoint()),
        SymmetryOp::LocalConjugate { q, m } => {
            let d = q.require_square()?;
            let expected = d.checked_pow(*m as u32).unwrap_or(usize::MAX);
            if expected != n {
                return Err(Error::DimensionMismatch { expected, found: n });
            }
            let q_inv = q.inverse()?;
            let cond = q.condition_1()?;
            if cond > MAX_CONDITION {
                return Err(Error::IllConditioned(cond));
            }
            Ok(&(&kron_pow(q, *m) * r) * &kron_pow(&q_inv, *m))
        }
    }
}

/// Applies `ops` left to right, returning every intermediate matrix. Each one
/// is checked against `sig`; a failure means a transcription bug somewhere,
/// because the set of solutions is closed under these maps.
pub fn orbit_sample(r: &CMat, sig: GybeSignature, ops: &[SymmetryOp], tol: f64) -> Result<Vec<CMat>> {
    let mut current = r.clone();
    let mut out = Vec::with_capacity(ops.len());
    for (step, op) in ops.iter().enumerate() {
        current = apply_symmetry(op, &current)?;
        let rep = verify_gybe(&current, sig, tol)?;
        if !rep.passed {
            return Err(Error::OrbitBroken { step, op: op.to_string(), residual: rep.residual_max, tol });
        }
        out.push(current.clone());
    }
    Ok(out)
}

/// Parses `scale:re,im;inverse;conj;transpose;adjoint;localconj:@q.json`.
/// `load` resolves the `@file` reference of a local conjugation; `m` is the
/// arity used for it.
pub fn parse_script(script: &str, m: usize, load: impl Fn(&str) -> Result<CMat>) -> Result<Vec<SymmetryOp>> {
    script
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|step| {
            let (name, arg) = match step.split_once(':') {
                Some((n, a)) => (n.trim(), Some(a.trim())),
                None => (step, None),
            };
            match (name, arg) {
                ("scale", Some(a)) => parse_complex(a).map(SymmetryOp::Scale),
                ("inverse" | "inv", None) => Ok(SymmetryOp::Inverse),
                ("conj" | "conjugate", None) => Ok(SymmetryOp::Conjugate),
                ("transpose", None) => Ok(SymmetryOp::Transpose),
                ("adjoint" | "dagger", None) => Ok(SymmetryOp::Adjoint),
                ("localconj", Some(a)) => {
                    let path = a.strip_prefix('@').unwrap_or(a);
                    Ok(SymmetryOp::LocalConjugate { q: load(path)?, m })
                }
                _ => Err(Error::Parse(format!("bad symmetry step `{step}`"))),
            }
        })
        .collect()
}

/// `re,im` or a bare real.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("bad complex number `{s}`"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| bad());
    match parts[..] {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(bad()),
    }
}
