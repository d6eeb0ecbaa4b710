//! Named solution families: the diagonal aYBE solution `R_d`, the three
//! Kauffman–Lomonaco two-qubit matrices, Rowell's X-shaped `R_X`, and the seven
//! X-shaped families `X_1 … X_7` of the (2,3,2) equation.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{unitarity_defect, CMat, I, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Rd,
    Kl1,
    Kl2,
    Kl3,
    Rx,
    X1,
    X2,
    X3,
    X4,
    X5,
    X6,
    X7,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::Rd,
        Family::Kl1,
        Family::Kl2,
        Family::Kl3,
        Family::Rx,
        Family::X1,
        Family::X2,
        Family::X3,
        Family::X4,
        Family::X5,
        Family::X6,
        Family::X7,
    ];

    pub const X_SHAPED: [Family; 7] =
        [Family::X1, Family::X2, Family::X3, Family::X4, Family::X5, Family::X6, Family::X7];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Rd => "rd",
            Family::Kl1 => "kl1",
            Family::Kl2 => "kl2",
            Family::Kl3 => "kl3",
            Family::Rx => "rx",
            Family::X1 => "x1",
            Family::X2 => "x2",
            Family::X3 => "x3",
            Family::X4 => "x4",
            Family::X5 => "x5",
            Family::X6 => "x6",
            Family::X7 => "x7",
        }
    }

    pub fn is_x_shaped(&self) -> bool {
        Self::X_SHAPED.contains(self)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.name() == lower)
            .ok_or_else(|| Error::Parse(format!("unknown family `{s}`")))
    }
}

/// Family tag plus the complex parameters. Parameters a family does not use
/// are carried along untouched.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub family: Family,
    pub d: Option<usize>,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
    pub lambda: Complex64,
}

impl FamilyParams {
    pub fn new(family: Family) -> Self {
        Self { family, d: None, alpha: ONE, beta: ONE, gamma: ONE, delta: ONE, lambda: ONE }
    }

    pub fn rd(d: usize) -> Self {
        Self { d: Some(d), ..Self::new(Family::Rd) }
    }

    pub fn x(family: Family, alpha: Complex64, beta: Complex64) -> Self {
        Self { alpha, beta, ..Self::new(family) }
    }

    pub fn with_gamma(mut self, gamma: Complex64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_delta(mut self, delta: Complex64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_lambda(mut self, lambda: Complex64) -> Self {
        self.lambda = lambda;
        self
    }

    fn reject(&self, constraint: impl Into<String>) -> Error {
        Error::InvalidParameter { family: self.family.to_string(), constraint: constraint.into() }
    }

    fn require_nonzero(&self, name: &str, z: Complex64) -> Result<()> {
        if z == ZERO {
            Err(self.reject(format!("{name} must be nonzero")))
        } else {
            Ok(())
        }
    }

    /// Rejects parameter values that zero an entry of the X shape or a denominator.
    pub fn validate(&self) -> Result<()> {
        self.require_nonzero("lambda", self.lambda)?;
        match self.family {
            Family::Rd => match self.d {
                Some(d) if d >= 2 => Ok(()),
                Some(d) => Err(self.reject(format!("d must be >= 2, got {d}"))),
                None => Err(self.reject("d is required")),
            },
            Family::Kl1 | Family::Kl2 | Family::Kl3 | Family::Rx => Ok(()),
            Family::X2 | Family::X3 | Family::X5 | Family::X6 => {
                self.require_nonzero("alpha", self.alpha)?;
                self.require_nonzero("beta", self.beta)
            }
            Family::X1 => {
                self.require_nonzero("alpha", self.alpha)?;
                self.require_nonzero("beta", self.beta)?;
                self.require_nonzero("delta", self.delta)
            }
            Family::X7 => {
                self.require_nonzero("alpha", self.alpha)?;
                self.require_nonzero("beta", self.beta)?;
                self.require_nonzero("gamma", self.gamma)
            }
            Family::X4 => {
                self.require_nonzero("alpha", self.alpha)?;
                self.require_nonzero("beta", self.beta)?;
                self.require_nonzero("delta", self.delta)?;
                if self.delta == Complex64::new(2.0, 0.0) {
                    return Err(self.reject("delta = 2 zeroes 2 - delta"));
                }
                if x4_f(self.delta) == ZERO {
                    return Err(self.reject("delta^2 - 2 delta + 2 must be nonzero (delta = 1 +/- i excluded)"));
                }
                Ok(())
            }
        }
    }
}

/// `f(δ) = δ² − 2δ + 2`, the recurring factor of `X_4`.
fn x4_f(delta: Complex64) -> Complex64 {
    delta * delta - 2.0 * delta + 2.0
}

/// `e^{2πik/d}`, exact at multiples of a quarter turn.
pub fn root_of_unity(k: usize, d: usize) -> Complex64 {
    let k = k % d;
    if (4 * k) % d == 0 {
        return match 4 * k / d {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64)
}

/// `R_d = (I⊗F_d) C²_{X,d} (I⊗F_d†)`, written out in its block-diagonal form:
/// identity blocks except the second, which is `F_d X_d F_d† = diag(ω^k)`.
pub fn build_rd(d: usize) -> Result<CMat> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("R_d needs d >= 2, got {d}")));
    }
    let mut diag = vec![ONE; d * d];
    for k in 0..d {
        diag[d + k] = root_of_unity(k, d);
    }
    Ok(CMat::diag(&diag))
}

pub fn build_kl(which: u8) -> Result<CMat> {
    match which {
        1 => Ok(CMat::from_real_rows(&[
            &[1., 0., 0., 0.],
            &[0., 1., 0., 0.],
            &[0., 0., 1., 0.],
            &[0., 0., 0., -1.],
        ])),
        2 => Ok(CMat::from_real_rows(&[
            &[1., 0., 0., 0.],
            &[0., 0., 1., 0.],
            &[0., 1., 0., 0.],
            &[0., 0., 0., -1.],
        ])),
        3 => {
            let h = FRAC_1_SQRT_2;
            Ok(CMat::from_real_rows(&[
                &[h, 0., 0., h],
                &[0., h, h, 0.],
                &[0., h, -h, 0.],
                &[-h, 0., 0., h],
            ]))
        }
        _ => Err(Error::InvalidArgument(format!("no Kauffman-Lomonaco matrix {which}"))),
    }
}

/// Rowell's X-shaped solution of the (2,3,2) equation.
pub fn build_rx() -> CMat {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    x_shape(&[h; 8], &[h, h, h, h, -h, -h, -h, -h])
}

/// 8×8 matrix with `diag` on the main diagonal and `anti[i]` at `(i, 7 − i)`.
fn x_shape(diag: &[Complex64; 8], anti: &[Complex64; 8]) -> CMat {
    let mut m = CMat::zeros(8, 8);
    for i in 0..8 {
        m[(i, i)] = diag[i];
        m[(i, 7 - i)] = anti[i];
    }
    m
}

/// One of the X-shaped families, scaled by `λ`.
pub fn build_x_family(p: &FamilyParams) -> Result<CMat> {
    if !p.family.is_x_shaped() {
        return Err(Error::InvalidArgument(format!("{} is not an X-shaped family", p.family)));
    }
    p.validate()?;
    let (a, b, g, dl) = (p.alpha, p.beta, p.gamma, p.delta);
    let ab2 = a * b * b;
    // anti-diagonal listed by row: r18, r27, r36, r45, r54, r63, r72, r81
    let (diag, anti): ([Complex64; 8], [Complex64; 8]) = match p.family {
        Family::X1 => {
            let d2 = dl * dl;
            ([dl, ONE, dl, ONE, ONE, dl, ONE, dl], [ab2 / d2, b, a, d2 / b, b, ONE / a, d2 / b, d2 / ab2])
        }
        Family::X2 => (
            [-I, ONE, ONE, -I, ONE, -I, -I, ONE],
            [I * ab2, b, a, I / b, b, I / a, I / b, ONE / ab2],
        ),
        Family::X3 => ([ONE; 8], [ab2, -b, a, -ONE / b, b, -ONE / a, ONE / b, -ONE / ab2]),
        Family::X4 => {
            let f = x4_f(dl);
            let t = 2.0 - dl;
            ([t, ONE, t, ONE, ONE, dl, ONE, dl], [ab2 / f, b, a, f / b, b, ONE / a, f / b, f / ab2])
        }
        Family::X5 => (
            [I, ONE, ONE, I, ONE, I, I, ONE],
            [-I * ab2, b, a, -I / b, b, -I / a, -I / b, ONE / ab2],
        ),
        Family::X6 => ([ONE; 8], [ab2, b, a, ONE / b, b, ONE / a, ONE / b, ONE / ab2]),
        Family::X7 => (
            [ONE, ONE, g, g, ONE, ONE, g, g],
            [ab2 / g, b, a, g / b, b, g / a, g / b, g * g / ab2],
        ),
        _ => unreachable!(),
    };
    Ok(x_shape(&diag, &anti).scale(p.lambda))
}

/// Any family, scaled by `λ`.
pub fn build(p: &FamilyParams) -> Result<CMat> {
    p.validate()?;
    let base = match p.family {
        Family::Rd => build_rd(p.d.expect("validated"))?,
        Family::Kl1 => build_kl(1)?,
        Family::Kl2 => build_kl(2)?,
        Family::Kl3 => build_kl(3)?,
        Family::Rx => build_rx(),
        _ => return build_x_family(p),
    };
    Ok(if p.lambda == ONE { base } else { base.scale(p.lambda) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Clause {
    pub description: String,
    pub defect: f64,
    pub satisfied: bool,
}

/// Clause-by-clause evaluation of a unitarity condition, with the numeric
/// unitarity of `λX` as the arbiter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitarityCondition {
    pub family: Family,
    pub constraints: Vec<Clause>,
    pub clauses_satisfied: bool,
    /// `max |λX(λX)† − I|`.
    pub unitarity_defect: f64,
    /// Whether `λX` is unitary within tolerance.
    pub satisfied: bool,
}

/// `δ` values listed for `X_4`, with the last two read as `5/4 ± i√7/4`.
pub fn x4_listed_deltas() -> [Complex64; 5] {
    let s = 7f64.sqrt() / 4.0;
    [
        Complex64::new(1.0, 1.0),
        Complex64::new(1.0, -1.0),
        ONE,
        Complex64::new(1.25, s),
        Complex64::new(1.25, -s),
    ]
}

pub fn unitarity_conditions(p: &FamilyParams, tol: f64) -> Result<UnitarityCondition> {
    let (a, b, dl, lam) = (p.alpha, p.beta, p.delta, p.lambda);
    let lam2 = lam.norm_sqr();
    let clause = |description: &str, defect: f64| Clause {
        description: description.to_string(),
        defect,
        satisfied: defect <= tol,
    };
    let constraints = match p.family {
        Family::X1 => vec![
            clause("Re(delta) = 0", dl.re.abs()),
            clause("delta^2 = -|beta|^2", (dl * dl + b.norm_sqr()).norm()),
            clause("|alpha| = 1", (a.norm() - 1.0).abs()),
            clause("|lambda|^2 = 1/(1+|delta|^2)", (lam2 - 1.0 / (1.0 + dl.norm_sqr())).abs()),
        ],
        // X5 = 2·X2(iα, iβ)⁻¹, so it inherits the X2 conditions through the inverse symmetry.
        Family::X2 | Family::X3 | Family::X5 => vec![
            clause("|alpha| = 1", (a.norm() - 1.0).abs()),
            clause("|beta| = 1", (b.norm() - 1.0).abs()),
            clause("|lambda|^2 = 1/2", (lam2 - 0.5).abs()),
        ],
        Family::X4 => {
            let dl_bar = dl.conj();
            let listed = x4_listed_deltas().iter().map(|z| (z - dl).norm()).fold(f64::INFINITY, f64::min);
            vec![
                clause("|alpha|^2 = (delta-2)/conj(delta)", (a.norm_sqr() - (dl - 2.0) / dl_bar).norm()),
                clause(
                    "|beta|^2 = conj(delta)^2 - 2 conj(delta) + 2",
                    (b.norm_sqr() - x4_f(dl_bar)).norm(),
                ),
                clause("|lambda|^2 = 1/(1+|beta|^2)", (lam2 - 1.0 / (1.0 + b.norm_sqr())).abs()),
                clause("delta in {1+i, 1-i, 1, 5/4+i sqrt7/4, 5/4-i sqrt7/4}", listed),
            ]
        }
        other => {
            return Err(Error::InvalidArgument(format!("no unitarity conditions are stated for {other}")));
        }
    };
    let m = build_x_family(p)?;
    let defect = unitarity_defect(&m)?;
    Ok(UnitarityCondition {
        family: p.family,
        clauses_satisfied: constraints.iter().all(|c| c.satisfied),
        constraints,
        unitarity_defect: defect,
        satisfied: defect <= tol,
    })
}
