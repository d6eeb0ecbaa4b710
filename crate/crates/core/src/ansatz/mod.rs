//! Exact enumeration of the component equations of a (d,m,l) equation under a
//! sparsity ansatz, with substitution, numeric evaluation and a brute-force
//! search over permutation matrices.

mod gauss;
mod poly;
mod search;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::CMat;
use crate::verify::GybeSignature;

pub use gauss::GaussRational;
pub use poly::{Monomial, SparsePoly};
pub use search::{search_permutation_images, search_permutation_solutions, SearchOptions, SEARCH_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
    pub name: String,
}

/// Which entries of an `dim×dim` matrix are free variables; all others are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsityPattern {
    dim: usize,
    cells: Vec<Cell>,
}

fn cell_name(row: usize, col: usize) -> String {
    format!("r{}{}", row + 1, col + 1)
}

impl SparsityPattern {
    /// Cells are kept in row-major order; duplicates and out-of-range cells
    /// are rejected.
    pub fn new(dim: usize, mut cells: Vec<Cell>) -> Result<Self> {
        cells.sort_by_key(|c| (c.row, c.col));
        for w in cells.windows(2) {
            if (w[0].row, w[0].col) == (w[1].row, w[1].col) {
                return Err(Error::InvalidArgument(format!("duplicate cell ({}, {})", w[0].row, w[0].col)));
            }
        }
        if let Some(c) = cells.iter().find(|c| c.row >= dim || c.col >= dim) {
            return Err(Error::InvalidArgument(format!("cell ({}, {}) outside {dim}x{dim}", c.row, c.col)));
        }
        let mut names = HashSet::new();
        if let Some(c) = cells.iter().find(|c| !names.insert(c.name.clone())) {
            return Err(Error::InvalidArgument(format!("duplicate variable name {}", c.name)));
        }
        if cells.len() > u16::MAX as usize {
            return Err(Error::InvalidArgument("too many variables".into()));
        }
        Ok(Self { dim, cells })
    }

    /// Variables `r{i}{j}` (one-based) at each listed position.
    pub fn from_positions(dim: usize, positions: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let cells = positions.into_iter().map(|(row, col)| Cell { row, col, name: cell_name(row, col) }).collect();
        Self::new(dim, cells)
    }

    /// Main diagonal plus anti-diagonal.
    pub fn x_shape(dim: usize) -> Self {
        let mut pos: BTreeSet<(usize, usize)> = (0..dim).map(|i| (i, i)).collect();
        pos.extend((0..dim).map(|i| (i, dim - 1 - i)));
        Self::from_positions(dim, pos).expect("x-shape cells are valid")
    }

    pub fn diagonal(dim: usize) -> Self {
        Self::from_positions(dim, (0..dim).map(|i| (i, i))).expect("diagonal cells are valid")
    }

    pub fn full(dim: usize) -> Self {
        Self::from_positions(dim, (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j)))).expect("cells are valid")
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, cells: Vec::new() }
    }

    /// `xshape`, `diagonal`, `full` or `empty`.
    pub fn named(name: &str, dim: usize) -> Result<Self> {
        match name {
            "xshape" | "x" => Ok(Self::x_shape(dim)),
            "diagonal" | "diag" => Ok(Self::diagonal(dim)),
            "full" => Ok(Self::full(dim)),
            "empty" | "zero" => Ok(Self::empty(dim)),
            other => Err(Error::InvalidArgument(format!("unknown pattern `{other}`"))),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn names(&self) -> Vec<String> {
        self.cells.iter().map(|c| c.name.clone()).collect()
    }

    /// Fills the pattern with values looked up by variable name.
    pub fn assemble(&self, point: &BTreeMap<String, Complex64>) -> Result<CMat> {
        let mut m = CMat::zeros(self.dim, self.dim);
        for c in &self.cells {
            m[(c.row, c.col)] = *point.get(&c.name).ok_or_else(|| Error::MissingVariable(c.name.clone()))?;
        }
        Ok(m)
    }

    /// Reads the pattern's cells off a concrete matrix.
    pub fn sample(&self, m: &CMat) -> Result<BTreeMap<String, Complex64>> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: m.nrows() });
        }
        Ok(self.cells.iter().map(|c| (c.name.clone(), m[(c.row, c.col)])).collect())
    }
}

/// Deduplicated nonzero polynomial equations `p = 0`, in order of first
/// appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzSystem {
    variables: Vec<String>,
    equations: Vec<SparsePoly>,
}

impl AnsatzSystem {
    /// Drops zeros and exact repeats. Two equations that differ by a sign or
    /// another scalar are kept apart.
    pub fn from_polys(variables: Vec<String>, polys: impl IntoIterator<Item = SparsePoly>) -> Self {
        let mut seen = HashSet::new();
        let equations = polys.into_iter().filter(|p| !p.is_zero() && seen.insert(p.clone())).collect();
        Self { variables, equations }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn equations(&self) -> &[SparsePoly] {
        &self.equations
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Names of the variables that occur in at least one equation.
    pub fn active_variables(&self) -> Vec<String> {
        let ids: BTreeSet<u16> = self.equations.iter().flat_map(|p| p.variables()).collect();
        ids.into_iter().map(|v| self.variables[v as usize].clone()).collect()
    }

    /// Number of equations each variable occurs in, in variable order.
    pub fn occurrences(&self) -> Vec<(String, usize)> {
        let mut counts = vec![0usize; self.variables.len()];
        for p in &self.equations {
            for v in p.variables() {
                counts[v as usize] += 1;
            }
        }
        self.variables.iter().cloned().zip(counts).collect()
    }

    pub fn var_id(&self, name: &str) -> Result<u16> {
        self.variables
            .iter()
            .position(|v| v == name)
            .map(|i| i as u16)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Builds a polynomial over this system's variables from
    /// `(coefficient, names)` terms.
    pub fn poly(&self, terms: &[(GaussRational, &[&str])]) -> Result<SparsePoly> {
        let mut p = SparsePoly::zero();
        for (c, names) in terms {
            let ids = names.iter().map(|n| self.var_id(n)).collect::<Result<Vec<_>>>()?;
            p.add_term(ids, *c);
        }
        Ok(p)
    }

    pub fn display(&self, p: &SparsePoly) -> String {
        p.display_with(&self.variables)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let equations: Vec<Vec<TermJson>> = self
            .equations
            .iter()
            .map(|p| {
                p.terms()
                    .map(|(m, c)| TermJson {
                        monomial: m.iter().map(|&v| self.variables[v as usize].clone()).collect(),
                        coeff: c.to_triple(),
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({ "variables": self.variables, "equations": equations })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct SystemJson {
            variables: Vec<String>,
            equations: Vec<Vec<TermJson>>,
        }
        let raw: SystemJson = serde_json::from_value(value.clone())?;
        let shell = Self { variables: raw.variables, equations: Vec::new() };
        let mut polys = Vec::with_capacity(raw.equations.len());
        for eq in raw.equations {
            let mut p = SparsePoly::zero();
            for t in eq {
                let c = GaussRational::from_triple(t.coeff)
                    .ok_or_else(|| Error::Parse("zero denominator in coefficient".into()))?;
                let ids = t.monomial.iter().map(|n| shell.var_id(n)).collect::<Result<Vec<_>>>()?;
                p.add_term(ids, c);
            }
            polys.push(p);
        }
        Ok(Self::from_polys(shell.variables, polys))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    monomial: Vec<String>,
    coeff: [i64; 3],
}

type SymRow = BTreeMap<usize, SparsePoly>;

fn sym_matmul(a: &[SymRow], b: &[SymRow]) -> Vec<SymRow> {
    a.iter()
        .map(|row| {
            let mut out = SymRow::new();
            for (&k, a_ik) in row {
                for (&j, b_kj) in &b[k] {
                    let term = a_ik.mul(b_kj);
                    let slot = out.entry(j).or_default();
                    *slot = slot.add(&term);
                }
            }
            out.retain(|_, p| !p.is_zero());
            out
        })
        .collect()
}

/// Expands `(R⊗I)(I⊗R)(R⊗I) − (I⊗R)(R⊗I)(I⊗R)` with symbolic entries at the
/// pattern's cells, entry by entry in row-major order.
pub fn enumerate_equations(pattern: &SparsityPattern, sig: GybeSignature) -> Result<AnsatzSystem> {
    let n = sig.r_dim();
    if pattern.dim != n {
        return Err(Error::DimensionMismatch { expected: n, found: pattern.dim });
    }
    let pad = sig.d.pow(sig.l as u32);
    let total = n * pad;
    let mut r_rows: Vec<Vec<(usize, u16)>> = vec![Vec::new(); n];
    for (id, c) in pattern.cells.iter().enumerate() {
        r_rows[c.row].push((c.col, id as u16));
    }
    let mut a = vec![SymRow::new(); total];
    let mut b = vec![SymRow::new(); total];
    for (i, row) in r_rows.iter().enumerate() {
        for &(j, v) in row {
            for k in 0..pad {
                a[i * pad + k].insert(j * pad + k, SparsePoly::var(v));
                b[k * n + i].insert(k * n + j, SparsePoly::var(v));
            }
        }
    }
    let lhs = sym_matmul(&sym_matmul(&a, &b), &a);
    let rhs = sym_matmul(&sym_matmul(&b, &a), &b);
    let zero = SparsePoly::zero();
    let mut polys = Vec::new();
    for (l_row, r_row) in lhs.iter().zip(&rhs) {
        let cols: BTreeSet<usize> = l_row.keys().chain(r_row.keys()).copied().collect();
        for c in cols {
            polys.push(l_row.get(&c).unwrap_or(&zero).sub(r_row.get(&c).unwrap_or(&zero)));
        }
    }
    Ok(AnsatzSystem::from_polys(pattern.names(), polys))
}

/// Whether some equation of `sys` is a nonzero multiple of `poly`.
pub fn contains_equation(sys: &AnsatzSystem, poly: &SparsePoly) -> Result<bool> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let target = poly.monic();
    Ok(sys.equations.iter().any(|p| p.monic() == target))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Assignment {
    Value(GaussRational),
    Var(String),
}

/// Parses `r22=1,r55=1,r77=r44`. Values are integers, `p/q`, `i`, `-i` or a
/// variable name.
pub fn parse_assignments(s: &str) -> Result<BTreeMap<String, Assignment>> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("bad assignment `{part}`")))?;
        let (k, v) = (k.trim(), v.trim());
        let value = match parse_gauss(v) {
            Some(g) => Assignment::Value(g),
            None if v.chars().next().is_some_and(char::is_alphabetic) && v != "i" => Assignment::Var(v.to_string()),
            None => return Err(Error::Parse(format!("bad value `{v}`"))),
        };
        out.insert(k.to_string(), value);
    }
    Ok(out)
}

fn parse_gauss(s: &str) -> Option<GaussRational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let g = if body == "i" {
        GaussRational::i()
    } else {
        let r = match body.split_once('/') {
            Some((p, q)) => {
                let q: i64 = q.parse().ok()?;
                let p: i64 = p.parse().ok()?;
                (q != 0).then(|| Ratio::new(p, q))?
            }
            None => Ratio::from_integer(body.parse().ok()?),
        };
        GaussRational::new(r, Ratio::from_integer(0))
    };
    Some(if neg { -g } else { g })
}

/// Substitutes values or other variables, following chains `a→b→c`. Cycles
/// are rejected. The result is re-deduplicated.
pub fn substitute(sys: &AnsatzSystem, assignments: &BTreeMap<String, Assignment>) -> Result<AnsatzSystem> {
    let mut resolved: BTreeMap<u16, SparsePoly> = BTreeMap::new();
    for name in assignments.keys() {
        let start = sys.var_id(name)?;
        let mut seen = vec![start];
        let mut current = name;
        let image = loop {
            match assignments.get(current) {
                Some(Assignment::Value(g)) => break SparsePoly::constant(*g),
                Some(Assignment::Var(next)) => {
                    let id = sys.var_id(next)?;
                    if seen.contains(&id) {
                        return Err(Error::CyclicSubstitution(name.clone()));
                    }
                    seen.push(id);
                    current = next;
                }
                None => break SparsePoly::var(sys.var_id(current)?),
            }
        };
        resolved.insert(start, image);
    }
    let f = |v: u16| resolved.get(&v).cloned();
    let polys: Vec<SparsePoly> = sys.equations.iter().map(|p| p.substitute(&f)).collect();
    Ok(AnsatzSystem::from_polys(sys.variables.clone(), polys))
}

/// Largest `|p(point)|` over the system. Every variable that occurs must be
/// assigned.
pub fn evaluate_system(sys: &AnsatzSystem, point: &BTreeMap<String, Complex64>) -> Result<f64> {
    let values: Vec<Option<Complex64>> = sys.variables.iter().map(|n| point.get(n).copied()).collect();
    if let Some(missing) = sys.active_variables().into_iter().find(|n| !point.contains_key(n)) {
        return Err(Error::MissingVariable(missing));
    }
    let lookup = |v: u16| values[v as usize].expect("checked above");
    Ok(sys.equations.iter().map(|p| p.eval(&lookup).norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_x_family, Family, FamilyParams};
    use crate::verify::verify_gybe;

    fn xsys() -> AnsatzSystem {
        enumerate_equations(&SparsityPattern::x_shape(8), GybeSignature::new(2, 3, 2).unwrap()).unwrap()
    }

    fn g(re: i64) -> GaussRational {
        GaussRational::integer(re, 0)
    }

    fn scaling_subs() -> BTreeMap<String, Assignment> {
        parse_assignments("r22=1, r55=1, r77=r44").unwrap()
    }

    #[test]
    fn x_shape_counts() {
        let sys = xsys();
        assert_eq!(sys.len(), 116);
        assert_eq!(sys.active_variables().len(), 16);
        let reduced = substitute(&sys, &scaling_subs()).unwrap();
        assert_eq!(reduced.len(), 108);
    }

    #[test]
    fn coefficients_are_plus_minus_one_before_substitution() {
        for p in xsys().equations() {
            for (m, c) in p.terms() {
                assert!(*c == g(1) || *c == g(-1));
                assert_eq!(m.len(), 3);
            }
        }
    }

    #[test]
    fn displayed_equations_present_after_fixing_r22() {
        let sys = xsys();
        let one = parse_assignments("r22=1").unwrap();
        let fixed = substitute(&sys, &one).unwrap();
        let first = sys.poly(&[(g(-1), &["r36", "r63", "r55"]), (g(1), &["r36", "r63"])]).unwrap();
        let second = sys.poly(&[(g(1), &["r36", "r63", "r44"]), (g(-1), &["r36", "r63", "r77"])]).unwrap();
        assert!(contains_equation(&fixed, &first).unwrap());
        assert!(contains_equation(&fixed, &second).unwrap());
        assert!(!contains_equation(&sys, &first).unwrap());
    }

    #[test]
    fn absent_and_rejected_queries() {
        let sys = xsys();
        let p = sys.poly(&[(g(1), &["r11"]), (g(-1), &[])]).unwrap();
        assert!(!contains_equation(&sys, &p).unwrap());
        assert!(matches!(contains_equation(&sys, &SparsePoly::zero()), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn empty_pattern_and_empty_substitution() {
        let sig = GybeSignature::new(2, 3, 2).unwrap();
        assert!(enumerate_equations(&SparsityPattern::empty(8), sig).unwrap().is_empty());
        let sys = xsys();
        assert_eq!(substitute(&sys, &BTreeMap::new()).unwrap(), sys);
        assert!(enumerate_equations(&SparsityPattern::x_shape(4), sig).is_err());
    }

    #[test]
    fn identity_satisfies_diagonal_system() {
        let pat = SparsityPattern::diagonal(4);
        let sys = enumerate_equations(&pat, GybeSignature::braided(2).unwrap()).unwrap();
        assert!(!sys.is_empty());
        let point = pat.sample(&CMat::identity(4)).unwrap();
        assert_eq!(evaluate_system(&sys, &point).unwrap(), 0.0);
    }

    #[test]
    fn x2_entries_annihilate_the_system() {
        let pat = SparsityPattern::x_shape(8);
        let sys = xsys();
        let x2 = build_x_family(&FamilyParams::x(Family::X2, crate::tensor::ONE, crate::tensor::ONE)).unwrap();
        let point = pat.sample(&x2).unwrap();
        assert!(evaluate_system(&sys, &point).unwrap() <= 1e-12);
        let exact: BTreeMap<String, Assignment> = point
            .iter()
            .map(|(k, z)| {
                let g = GaussRational::integer(z.re.round() as i64, z.im.round() as i64);
                assert!((g.to_complex() - z).norm() < 1e-15, "X2 at unit parameters has Gaussian-integer entries");
                (k.clone(), Assignment::Value(g))
            })
            .collect();
        assert!(substitute(&sys, &exact).unwrap().is_empty());
    }

    #[test]
    fn numeric_and_symbolic_residuals_agree() {
        let pat = SparsityPattern::x_shape(8);
        let sys = xsys();
        let sig = GybeSignature::new(2, 3, 2).unwrap();
        let mut rng = crate::sampling::rng(5);
        for _ in 0..10 {
            let point: BTreeMap<String, Complex64> =
                pat.names().into_iter().map(|n| (n, crate::sampling::complex_gaussian(&mut rng))).collect();
            let m = pat.assemble(&point).unwrap();
            let rep = verify_gybe(&m, sig, 1e-10).unwrap();
            assert!((evaluate_system(&sys, &point).unwrap() - rep.raw_max).abs() < 1e-9);
        }
    }

    #[test]
    fn substitution_errors() {
        let sys = xsys();
        assert!(matches!(
            substitute(&sys, &parse_assignments("r22=r33,r33=r22").unwrap()),
            Err(Error::CyclicSubstitution(_))
        ));
        assert!(matches!(substitute(&sys, &parse_assignments("q=1").unwrap()), Err(Error::UnknownVariable(_))));
        let mut point = BTreeMap::new();
        point.insert("r11".to_string(), Complex64::new(1.0, 0.0));
        assert!(matches!(evaluate_system(&sys, &point), Err(Error::MissingVariable(_))));
    }

    #[test]
    fn chains_resolve_transitively() {
        let sys = xsys();
        let a = substitute(&sys, &parse_assignments("r77=r44,r44=r55,r55=1").unwrap()).unwrap();
        let b = substitute(&sys, &parse_assignments("r77=1,r44=1,r55=1").unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn assignment_parsing() {
        let a = parse_assignments("a=-3/4, b=i, c=-i, d=x").unwrap();
        assert_eq!(a["a"], Assignment::Value(GaussRational::new(Ratio::new(-3, 4), Ratio::from_integer(0))));
        assert_eq!(a["b"], Assignment::Value(GaussRational::i()));
        assert_eq!(a["c"], Assignment::Value(-GaussRational::i()));
        assert_eq!(a["d"], Assignment::Var("x".into()));
        assert!(parse_assignments("a=1/0").is_err());
        assert!(parse_assignments("a").is_err());
    }

    #[test]
    fn json_round_trip() {
        let sys = xsys();
        let back = AnsatzSystem::from_json(&sys.to_json()).unwrap();
        assert_eq!(back, sys);
    }
}
