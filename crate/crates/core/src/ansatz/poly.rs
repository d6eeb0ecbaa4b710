use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_complex::Complex64;

use super::gauss::GaussRational;

/// Multiset of variable ids, kept sorted.
pub type Monomial = Vec<u16>;

/// Sparse multivariate polynomial with Gaussian-rational coefficients. Zero
/// coefficients are never stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparsePoly {
    terms: BTreeMap<Monomial, GaussRational>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: GaussRational) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(id: u16) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![id], GaussRational::one());
        p
    }

    /// Builds from `(coefficient, variable ids)` pairs; ids need not be sorted.
    pub fn from_terms<'a>(terms: impl IntoIterator<Item = (GaussRational, &'a [u16])>) -> Self {
        let mut p = Self::zero();
        for (c, vars) in terms {
            p.add_term(vars.to_vec(), c);
        }
        p
    }

    pub fn add_term(&mut self, mut mono: Monomial, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        mono.sort_unstable();
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn variables(&self) -> impl Iterator<Item = u16> + '_ {
        let mut seen: Vec<u16> = self.terms.keys().flatten().copied().collect();
        seen.sort_unstable();
        seen.dedup();
        seen.into_iter()
    }

    pub fn scale(&self, c: GaussRational) -> Self {
        let mut p = Self::zero();
        for (m, v) in &self.terms {
            p.add_term(m.clone(), *v * c);
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (m, v) in &other.terms {
            p.add_term(m.clone(), *v);
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-GaussRational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero();
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                let mut m = ma.clone();
                m.extend_from_slice(mb);
                p.add_term(m, *a * *b);
            }
        }
        p
    }

    /// Divides through by the coefficient of the least monomial, giving a
    /// representative of the polynomial's class up to nonzero scalars.
    pub fn monic(&self) -> Self {
        match self.terms.values().next() {
            Some(lead) => {
                let inv = GaussRational::one() / *lead;
                self.scale(inv)
            }
            None => Self::zero(),
        }
    }

    pub fn same_up_to_scalar(&self, other: &Self) -> bool {
        self.monic() == other.monic()
    }

    /// Replaces each variable by a polynomial from `f`; `None` leaves it.
    pub fn substitute(&self, f: &impl Fn(u16) -> Option<SparsePoly>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut term = SparsePoly::constant(*c);
            for &v in m {
                let factor = f(v).unwrap_or_else(|| SparsePoly::var(v));
                term = term.mul(&factor);
            }
            out = out.add(&term);
        }
        out
    }

    pub fn eval(&self, point: &impl Fn(u16) -> Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| m.iter().fold(c.to_complex(), |acc, &v| acc * point(v)))
            .sum()
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<&str> = m.iter().map(|&v| names[v as usize].as_str()).collect();
                if vars.is_empty() {
                    c.to_string()
                } else if *c == GaussRational::one() {
                    vars.join("*")
                } else {
                    format!("{c}*{}", vars.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussRational {
        GaussRational::integer(re, im)
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = SparsePoly::from_terms([(g(1, 0), &[0u16, 1][..]), (g(-1, 0), &[1, 0][..])]);
        assert!(p.is_zero());
    }

    #[test]
    fn monic_identifies_scalar_multiples() {
        let p = SparsePoly::from_terms([(g(2, 0), &[0u16][..]), (g(0, 3), &[1, 1][..])]);
        let q = p.scale(g(1, -4));
        assert!(p.same_up_to_scalar(&q));
        assert_ne!(p, q);
        let r = p.add(&SparsePoly::var(2));
        assert!(!p.same_up_to_scalar(&r));
    }

    #[test]
    fn substitute_and_eval() {
        // x0*x1 - x1 with x1 -> 1 gives x0 - 1
        let p = SparsePoly::from_terms([(g(1, 0), &[0u16, 1][..]), (g(-1, 0), &[1][..])]);
        let q = p.substitute(&|v| (v == 1).then(|| SparsePoly::constant(g(1, 0))));
        let expected = SparsePoly::from_terms([(g(1, 0), &[0u16][..]), (g(-1, 0), &[][..])]);
        assert_eq!(q, expected);
        let val = p.eval(&|v| if v == 0 { Complex64::new(2.0, 0.0) } else { Complex64::new(0.0, 1.0) });
        assert!((val - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(p.degree(), 2);
    }
}
