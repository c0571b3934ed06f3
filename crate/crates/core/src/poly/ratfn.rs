//! Exact quotients of polynomials. Never reduced to lowest terms; equality
//! is tested by cross-multiplication so no multivariate gcd is needed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::Polynomial;
use crate::error::{Error, Result};
use crate::Rat;

#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Pole);
        }
        assert_eq!(num.ambient_dim(), den.ambient_dim(), "ambient dim mismatch");
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let den = Polynomial::one(p.ambient_dim());
        RationalFunction { num: p, den }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self::from_poly(Polynomial::zero(ambient_dim))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn ambient_dim(&self) -> usize {
        self.num.ambient_dim()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is the constant 1 (not merely constant).
    pub fn is_polynomial(&self) -> bool {
        self.den == Polynomial::one(self.den.ambient_dim())
    }

    /// A linear form in the strict sense used by the pencil construction:
    /// denominator 1 and every term of degree exactly 1.
    pub fn is_linear_form(&self) -> bool {
        self.is_polynomial() && (self.num.is_zero() || self.num.homogeneous_degree() == Some(1))
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        RationalFunction {
            num: self.num.scaled(c),
            den: self.den.clone(),
        }
    }
}

impl PartialEq for RationalFunction {
    /// Cross-multiplied equality: `a/b == c/d` iff `a*d == c*b` as polynomials.
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: Self) -> RationalFunction {
        RationalFunction {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: Self) -> RationalFunction {
        RationalFunction {
            num: &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: Self) -> RationalFunction {
        RationalFunction {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::{rat_int, rat_vec};

    fn x(dim: usize, i: u32) -> Polynomial {
        Polynomial::variable(dim, i).unwrap()
    }

    #[test]
    fn cross_multiplied_equality() {
        // x1/x2 == x1*x3 / (x2*x3) without reduction
        let a = RationalFunction::new(x(3, 1), x(3, 2)).unwrap();
        let b = RationalFunction::new(&x(3, 1) * &x(3, 3), &x(3, 2) * &x(3, 3)).unwrap();
        assert_eq!(a, b);
        let c = RationalFunction::new(x(3, 3), x(3, 2)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RationalFunction::new(x(2, 1), Polynomial::zero(2)).is_err());
    }

    #[test]
    fn pole_reported() {
        let q = RationalFunction::new(x(2, 1), x(2, 2)).unwrap();
        assert_eq!(q.eval(&rat_vec(&[3, 2])).unwrap(), Rat::new(3.into(), 2.into()));
        assert!(matches!(q.eval(&rat_vec(&[3, 0])), Err(Error::Pole)));
    }

    #[test]
    fn arithmetic_keeps_exactness() {
        // x1/x2 + x2/x1 = (x1^2 + x2^2) / (x1 x2)
        let a = RationalFunction::new(x(2, 1), x(2, 2)).unwrap();
        let b = RationalFunction::new(x(2, 2), x(2, 1)).unwrap();
        let s = &a + &b;
        let expect =
            RationalFunction::new(&x(2, 1).pow(2) + &x(2, 2).pow(2), &x(2, 1) * &x(2, 2)).unwrap();
        assert_eq!(s, expect);
        assert_eq!(s.eval(&rat_vec(&[1, 2])).unwrap(), Rat::new(5.into(), 2.into()));
    }

    #[test]
    fn linear_form_detection() {
        let lf = RationalFunction::from_poly(Polynomial::linear_form(&rat_vec(&[2, 0, 1])));
        assert!(lf.is_linear_form());
        let nonlin = RationalFunction::from_poly(x(3, 1).pow(2));
        assert!(!nonlin.is_linear_form());
        let quot = RationalFunction::new(x(3, 1), x(3, 2)).unwrap();
        assert!(!quot.is_linear_form());
        assert!(!quot.is_polynomial());
        let c = rat_int(5);
        let scaled = lf.scaled(&c);
        assert_eq!(scaled.eval(&rat_vec(&[1, 1, 1])).unwrap(), rat_int(15));
    }
}
