//! Univariate polynomials over exact rationals, with Sturm-sequence root
//! counting. All root-location verdicts in this crate go through these
//! routines; no floating point is involved.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::Rat;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    /// `coeffs[i]` is the coefficient of `t^i`; trailing zeros trimmed.
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> Rat {
        self.coeffs.first().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rat::from_integer(i.into()))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.degree().unwrap();
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Rat::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() / &lead;
            if !factor.is_zero() {
                quo[k] = factor.clone();
                for (i, c) in divisor.coeffs.iter().enumerate() {
                    let delta = c * &factor;
                    rem[k + i] -= delta;
                }
            }
            rem.pop();
        }
        (Self::from_coeffs(quo), Self::from_coeffs(rem))
    }

    /// Scales so the leading coefficient has absolute value one, preserving
    /// all signs. Keeps Sturm-chain coefficients small.
    fn sign_normalized(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let scale = l.abs();
                UniPoly {
                    coeffs: self.coeffs.iter().map(|c| c / &scale).collect(),
                }
            }
        }
    }

    /// Standard Sturm chain: `p, p', -rem(...)` until the remainder vanishes.
    pub fn sturm_chain(&self) -> Vec<UniPoly> {
        let mut chain = vec![self.sign_normalized()];
        let d = self.derivative();
        if d.is_zero() {
            return chain;
        }
        chain.push(d.sign_normalized());
        loop {
            let n = chain.len();
            let (_, rem) = chain[n - 2].div_rem(&chain[n - 1]);
            if rem.is_zero() {
                break;
            }
            chain.push(rem.neg().sign_normalized());
        }
        chain
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for s in signs {
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    fn sign_at(p: &UniPoly, t: &Rat) -> i8 {
        let v = p.eval(t);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    fn sign_at_pos_inf(p: &UniPoly) -> i8 {
        match p.leading() {
            None => 0,
            Some(l) => {
                if l.is_positive() {
                    1
                } else {
                    -1
                }
            }
        }
    }

    fn sign_at_neg_inf(p: &UniPoly) -> i8 {
        let s = Self::sign_at_pos_inf(p);
        if p.degree().unwrap_or(0) % 2 == 1 {
            -s
        } else {
            s
        }
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots_in(&self, a: &Rat, b: &Rat) -> usize {
        assert!(a < b);
        let chain = self.sturm_chain();
        let va = Self::variations(chain.iter().map(|p| Self::sign_at(p, a)));
        let vb = Self::variations(chain.iter().map(|p| Self::sign_at(p, b)));
        va - vb
    }

    /// Number of distinct real roots on the whole line.
    pub fn count_distinct_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let chain = self.sturm_chain();
        let vn = Self::variations(chain.iter().map(Self::sign_at_neg_inf));
        let vp = Self::variations(chain.iter().map(Self::sign_at_pos_inf));
        vn - vp
    }

    /// Number of distinct roots in `(0, +inf)`. A root at zero is stripped
    /// first so the Sturm endpoint is regular.
    pub fn count_positive_roots(&self) -> usize {
        let p = self.strip_zero_roots();
        if p.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let chain = p.sturm_chain();
        let zero = Rat::zero();
        let v0 = Self::variations(chain.iter().map(|q| Self::sign_at(q, &zero)));
        let vp = Self::variations(chain.iter().map(Self::sign_at_pos_inf));
        v0 - vp
    }

    /// Divides out the highest power of `t` dividing the polynomial.
    pub fn strip_zero_roots(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let first_nonzero = self.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        Self::from_coeffs(self.coeffs[first_nonzero..].to_vec())
    }

    /// True iff every complex root is real: the number of distinct real roots
    /// must equal `deg p - deg gcd(p, p')`. Nonzero constants count as
    /// real-rooted; the zero polynomial does not.
    pub fn is_real_rooted(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.degree() == Some(0) {
            return true;
        }
        let chain = self.sturm_chain();
        // last chain element is gcd(p, p') up to a positive scalar
        let gcd_deg = chain.last().unwrap().degree().unwrap_or(0);
        let distinct_total = self.degree().unwrap() - gcd_deg;
        self.count_distinct_real_roots() == distinct_total
    }

    pub fn has_zero_root(&self) -> bool {
        !self.is_zero() && self.constant_term().is_zero()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            match i {
                0 => write!(f, "{abs}")?,
                1 if abs.is_one() => write!(f, "t")?,
                1 => write!(f, "{abs}*t")?,
                _ if abs.is_one() => write!(f, "t^{i}")?,
                _ => write!(f, "{abs}*t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::rat_int;

    fn upoly(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    #[test]
    fn division_invariant() {
        let a = upoly(&[2, 0, -3, 1, 5]);
        let b = upoly(&[1, 4, 2]);
        let (q, r) = a.div_rem(&b);
        // a = q*b + r, deg r < deg b; check at a few points
        for t in [-2i64, 0, 1, 3] {
            let t = rat_int(t);
            assert_eq!(a.eval(&t), q.eval(&t) * b.eval(&t) + r.eval(&t));
        }
        assert!(r.degree().unwrap_or(0) < b.degree().unwrap());
    }

    #[test]
    fn counts_roots_of_quadratic() {
        // 3t^2 + 2t - 1 = (3t - 1)(t + 1): roots -1 and 1/3
        let p = upoly(&[-1, 2, 3]);
        assert!(p.is_real_rooted());
        assert_eq!(p.count_distinct_real_roots(), 2);
        assert_eq!(p.count_positive_roots(), 1);
        assert_eq!(p.count_roots_in(&rat_int(-2), &rat_int(0)), 1);
        assert!(!p.has_zero_root());
    }

    #[test]
    fn complex_roots_detected() {
        let p = upoly(&[1, 0, 1]); // t^2 + 1
        assert!(!p.is_real_rooted());
        assert_eq!(p.count_distinct_real_roots(), 0);
    }

    #[test]
    fn multiple_roots_counted_once_but_still_real() {
        let p = upoly(&[1, 2, 1]); // (t+1)^2
        assert!(p.is_real_rooted());
        assert_eq!(p.count_distinct_real_roots(), 1);
        assert_eq!(p.count_positive_roots(), 0);
        let q = upoly(&[0, 0, 1, 1]); // t^2 (t + 1)
        assert!(q.is_real_rooted());
        assert!(q.has_zero_root());
        assert_eq!(q.count_positive_roots(), 0);
    }

    #[test]
    fn positive_roots_with_zero_root_present() {
        // t (t - 2) = t^2 - 2t
        let p = upoly(&[0, -2, 1]);
        assert!(p.has_zero_root());
        assert_eq!(p.count_positive_roots(), 1);
    }

    #[test]
    fn twenty_known_integer_roots() {
        // (t-1)(t-2)...(t-6)
        let mut p = UniPoly::constant(rat_int(1));
        for r in 1..=6i64 {
            let factor = upoly(&[-r, 1]);
            let mut coeffs = vec![Rat::zero(); p.coeffs().len() + 1];
            for (i, c) in p.coeffs().iter().enumerate() {
                coeffs[i] += c * &factor.coeffs()[0];
                coeffs[i + 1] += c * &factor.coeffs()[1];
            }
            p = UniPoly::from_coeffs(coeffs);
        }
        assert!(p.is_real_rooted());
        assert_eq!(p.count_distinct_real_roots(), 6);
        assert_eq!(p.count_positive_roots(), 6);
        assert_eq!(p.count_roots_in(&rat_int(1), &rat_int(4)), 3);
    }
}
