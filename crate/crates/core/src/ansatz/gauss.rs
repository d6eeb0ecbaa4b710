use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Complex number with rational real and imaginary parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussRational {
    pub re: Ratio<i64>,
    pub im: Ratio<i64>,
}

impl GaussRational {
    pub fn new(re: Ratio<i64>, im: Ratio<i64>) -> Self {
        Self { re, im }
    }

    pub fn integer(re: i64, im: i64) -> Self {
        Self { re: Ratio::from_integer(re), im: Ratio::from_integer(im) }
    }

    pub fn zero() -> Self {
        Self::integer(0, 0)
    }

    pub fn one() -> Self {
        Self::integer(1, 0)
    }

    pub fn i() -> Self {
        Self::integer(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re, im: -self.im }
    }

    pub fn norm_sqr(&self) -> Ratio<i64> {
        self.re * self.re + self.im * self.im
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    /// `[num_re, num_im, den]` over the least common denominator.
    pub fn to_triple(&self) -> [i64; 3] {
        let den = num_integer_lcm(*self.re.denom(), *self.im.denom());
        [self.re.numer() * (den / self.re.denom()), self.im.numer() * (den / self.im.denom()), den]
    }

    pub fn from_triple([re, im, den]: [i64; 3]) -> Option<Self> {
        (den != 0).then(|| Self { re: Ratio::new(re, den), im: Ratio::new(im, den) })
    }
}

fn num_integer_lcm(a: i64, b: i64) -> i64 {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    (a / gcd(a, b) * b).abs()
}

impl Add for GaussRational {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl AddAssign for GaussRational {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for GaussRational {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Neg for GaussRational {
    type Output = Self;

    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl Mul for GaussRational {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Div for GaussRational {
    type Output = Self;

    /// Panics on division by zero.
    fn div(self, rhs: Self) -> Self {
        let n = rhs.norm_sqr();
        assert!(!n.is_zero(), "division by zero");
        let num = self * rhs.conj();
        Self { re: num.re / n, im: num.im / n }
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) if self.im.is_one() => write!(f, "i"),
            (true, false) if (-self.im).is_one() => write!(f, "-i"),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({}{sign}{}i)", self.re, self.im.abs())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_operations() {
        let a = GaussRational::new(Ratio::new(1, 2), Ratio::new(-3, 4));
        let b = GaussRational::integer(2, 1);
        assert_eq!((a * b) / b, a);
        assert_eq!(a + (-a), GaussRational::zero());
        assert_eq!(GaussRational::i() * GaussRational::i(), -GaussRational::one());
        assert_eq!(a.to_triple(), [2, -3, 4]);
        assert_eq!(GaussRational::from_triple(a.to_triple()), Some(a));
        assert!((a.to_complex() - Complex64::new(0.5, -0.75)).norm() < 1e-15);
    }

    #[test]
    fn display() {
        assert_eq!(GaussRational::integer(-1, 0).to_string(), "-1");
        assert_eq!(GaussRational::integer(0, -1).to_string(), "-i");
        assert_eq!(GaussRational::integer(2, -3).to_string(), "(2-3i)");
    }
}
