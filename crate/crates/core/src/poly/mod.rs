//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables are 1-based indices into an ambient dimension fixed per
//! polynomial; monomials are kept in graded-lexicographic order so equal
//! polynomials have identical term maps.

mod elem;
mod ratfn;
mod univariate;

pub use elem::{
    check_ratio_recursion, elem_sym_ratio, elementary_symmetric, factor_list, factor_product_eval,
    factor_product_exponent, factor_product_poly, gamma_eval, gamma_poly, RecursionCheck,
};
pub use ratfn::RationalFunction;
pub use univariate::UniPoly;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::util::binomial;
use crate::{Int, Rat};

/// A power product of variables. Stored sparse: `(variable, exponent)` pairs
/// sorted by variable index, exponents strictly positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    powers: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { powers: Vec::new() }
    }

    pub fn var(i: u32) -> Self {
        assert!(i >= 1, "variables are 1-based");
        Monomial {
            powers: vec![(i, 1)],
        }
    }

    pub fn from_pairs(pairs: &[(u32, u32)]) -> Self {
        let mut powers: Vec<(u32, u32)> = pairs.iter().copied().filter(|&(_, e)| e > 0).collect();
        powers.sort_by_key(|&(v, _)| v);
        for w in powers.windows(2) {
            assert!(w[0].0 != w[1].0, "duplicate variable in monomial");
        }
        Monomial { powers }
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.powers.iter().map(|&(_, e)| e).sum()
    }

    pub fn powers(&self) -> &[(u32, u32)] {
        &self.powers
    }

    pub fn exponent_of(&self, var: u32) -> u32 {
        self.powers
            .iter()
            .find(|&&(v, _)| v == var)
            .map_or(0, |&(_, e)| e)
    }

    pub fn max_var(&self) -> u32 {
        self.powers.last().map_or(0, |&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut powers = Vec::with_capacity(self.powers.len() + other.powers.len());
        let mut a = self.powers.iter().peekable();
        let mut b = other.powers.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        powers.push((va, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        powers.push((vb, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        powers.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(&&p), None) => {
                    powers.push(p);
                    a.next();
                }
                (None, Some(&&p)) => {
                    powers.push(p);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial { powers }
    }

    /// Removes one power of `var`; returns the old exponent and the reduced
    /// monomial, or `None` when `var` does not occur.
    fn reduce_by(&self, var: u32) -> Option<(u32, Monomial)> {
        let idx = self.powers.iter().position(|&(v, _)| v == var)?;
        let (_, e) = self.powers[idx];
        let mut powers = self.powers.clone();
        if e == 1 {
            powers.remove(idx);
        } else {
            powers[idx].1 = e - 1;
        }
        Some((e, Monomial { powers }))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order with `x1 > x2 > ...`.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let mut a = self.powers.iter();
        let mut b = other.powers.iter();
        loop {
            match (a.next(), b.next()) {
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    // positive exponent on an earlier variable wins
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(&eb) {
                        Ordering::Equal => {}
                        ord => return ord,
                    },
                },
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (None, None) => return Ordering::Equal,
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over exact rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    ambient_dim: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero(ambient_dim: usize) -> Self {
        Polynomial {
            ambient_dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ambient_dim: usize) -> Self {
        Self::constant(ambient_dim, Rat::one())
    }

    pub fn constant(ambient_dim: usize, c: Rat) -> Self {
        let mut p = Self::zero(ambient_dim);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn variable(ambient_dim: usize, var: u32) -> Result<Self> {
        if var < 1 || var as usize > ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                got: var as usize,
            });
        }
        let mut p = Self::zero(ambient_dim);
        p.terms.insert(Monomial::var(var), Rat::one());
        Ok(p)
    }

    /// `c_1 x_1 + ... + c_n x_n` with ambient dimension `coeffs.len()`.
    pub fn linear_form(coeffs: &[Rat]) -> Self {
        let mut p = Self::zero(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(i as u32 + 1), c.clone());
        }
        p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// `Some(d)` when every term has total degree `d`; `None` for the zero
    /// polynomial or inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::total_degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        debug_assert!(m.max_var() as usize <= self.ambient_dim);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.ambient_dim);
        }
        Polynomial {
            ambient_dim: self.ambient_dim,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(self.ambient_dim);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(
            point.len(),
            self.ambient_dim,
            "evaluation point has wrong dimension"
        );
        // cache powers per variable
        let mut powers: Vec<Vec<Rat>> = vec![Vec::new(); self.ambient_dim];
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &(v, e) in m.powers() {
                let cache = &mut powers[v as usize - 1];
                if cache.is_empty() {
                    cache.push(Rat::one());
                }
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * &point[v as usize - 1];
                    cache.push(next);
                }
                term *= &cache[e as usize];
            }
            acc += term;
        }
        acc
    }

    pub fn partial(&self, var: u32) -> Self {
        let mut out = Self::zero(self.ambient_dim);
        for (m, c) in &self.terms {
            if let Some((e, reduced)) = m.reduce_by(var) {
                out.add_term(reduced, c * Rat::from_integer(Int::from(e)));
            }
        }
        out
    }

    /// Mixed partial over a set of variables, one derivative each.
    pub fn partial_set(&self, vars: &BTreeSet<u32>) -> Self {
        let mut out = self.clone();
        for &v in vars {
            out = out.partial(v);
        }
        out
    }

    pub fn directional_derivative(&self, dir: &[Rat]) -> Self {
        assert_eq!(dir.len(), self.ambient_dim, "direction has wrong dimension");
        let mut out = Self::zero(self.ambient_dim);
        for (i, d) in dir.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let p = self.partial(i as u32 + 1);
            out = &out + &p.scaled(d);
        }
        out
    }

    /// Coefficients of `t -> p(base + t*dir)` as an exact univariate polynomial.
    pub fn restrict_to_line(&self, base: &[Rat], dir: &[Rat]) -> UniPoly {
        assert_eq!(base.len(), self.ambient_dim);
        assert_eq!(dir.len(), self.ambient_dim);
        let deg = self.total_degree().unwrap_or(0) as usize;
        let mut acc = vec![Rat::zero(); deg + 1];
        for (m, c) in &self.terms {
            // expand prod_v (base_v + dir_v t)^e_v
            let mut term = vec![c.clone()];
            for &(v, e) in m.powers() {
                let a = &base[v as usize - 1];
                let d = &dir[v as usize - 1];
                // binomial expansion of (a + d t)^e
                let mut factor = vec![Rat::zero(); e as usize + 1];
                for j in 0..=e {
                    let coef = Rat::from_integer(binomial(e as usize, j as usize));
                    let mut val = coef;
                    for _ in 0..(e - j) {
                        val *= a;
                    }
                    for _ in 0..j {
                        val *= d;
                    }
                    factor[j as usize] = val;
                }
                term = mul_coeff_vecs(&term, &factor);
            }
            for (i, v) in term.into_iter().enumerate() {
                acc[i] += v;
            }
        }
        UniPoly::from_coeffs(acc)
    }

    /// Substitutes variable `i` by `forms[i-1]` for every variable; all forms
    /// must share an ambient dimension, which becomes the result's.
    pub fn compose(&self, forms: &[Polynomial]) -> Result<Self> {
        if forms.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: forms.len(),
            });
        }
        let target_dim = forms.first().map_or(0, Polynomial::ambient_dim);
        for f in forms {
            if f.ambient_dim() != target_dim {
                return Err(Error::DimensionMismatch {
                    expected: target_dim,
                    got: f.ambient_dim(),
                });
            }
        }
        let mut out = Self::zero(target_dim);
        for (m, c) in &self.terms {
            let mut term = Self::constant(target_dim, c.clone());
            for &(v, e) in m.powers() {
                term = &term * &forms[v as usize - 1].pow(e);
            }
            out = &out + &term;
        }
        Ok(out)
    }
}

fn mul_coeff_vecs(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Self) -> Polynomial {
        assert_eq!(self.ambient_dim, rhs.ambient_dim, "ambient dim mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Self) -> Polynomial {
        assert_eq!(self.ambient_dim, rhs.ambient_dim, "ambient dim mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Self) -> Polynomial {
        assert_eq!(self.ambient_dim, rhs.ambient_dim, "ambient dim mismatch");
        let mut out = Polynomial::zero(self.ambient_dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ambient_dim: self.ambient_dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
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
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                let mut firstv = true;
                for &(v, e) in m.powers() {
                    if !firstv {
                        write!(f, "*")?;
                    }
                    firstv = false;
                    if e == 1 {
                        write!(f, "x{v}")?;
                    } else {
                        write!(f, "x{v}^{e}")?;
                    }
                }
            }
        }
        Ok(())
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
    fn monomial_order_is_graded_lex() {
        let one = Monomial::one();
        let x1 = Monomial::var(1);
        let x2 = Monomial::var(2);
        let x1x2 = x1.mul(&x2);
        let x1sq = x1.mul(&x1);
        assert!(x1 > one);
        assert!(x1 > x2);
        assert!(x1sq > x1x2);
        assert!(x1x2 > x1); // higher degree
        let x1x3 = x1.mul(&Monomial::var(3));
        assert!(x1x2 > x1x3);
    }

    #[test]
    fn arithmetic_cancels_to_zero() {
        let p = &x(2, 1) + &x(2, 2);
        let q = &p - &p;
        assert!(q.is_zero());
        assert_eq!(q.num_terms(), 0);
    }

    #[test]
    fn multiplication_expands() {
        // (x1 + x2)^2 = x1^2 + 2 x1 x2 + x2^2
        let p = &x(2, 1) + &x(2, 2);
        let sq = &p * &p;
        assert_eq!(sq.num_terms(), 3);
        assert_eq!(
            sq.coeff(&Monomial::var(1).mul(&Monomial::var(2))),
            rat_int(2)
        );
        assert_eq!(sq, p.pow(2));
        assert_eq!(sq.homogeneous_degree(), Some(2));
    }

    #[test]
    fn eval_and_partial() {
        // p = x1^2 x2 - 3 x3
        let p = &(&x(3, 1).pow(2) * &x(3, 2)) - &x(3, 3).scaled(&rat_int(3));
        assert_eq!(p.eval(&rat_vec(&[2, 5, 1])), rat_int(17));
        let dp1 = p.partial(1); // 2 x1 x2
        assert_eq!(dp1.eval(&rat_vec(&[2, 5, 1])), rat_int(20));
        let dp3 = p.partial(3);
        assert_eq!(dp3, Polynomial::constant(3, rat_int(-3)));
        assert!(p.partial(2).partial(2).is_zero());
    }

    #[test]
    fn restriction_matches_direct_eval() {
        let p = &(&x(3, 1) * &x(3, 2)) + &x(3, 3).pow(3);
        let base = rat_vec(&[1, -2, 3]);
        let dir = rat_vec(&[2, 1, -1]);
        let u = p.restrict_to_line(&base, &dir);
        for t in [-3i64, -1, 0, 2, 7] {
            let pt: Vec<Rat> = base
                .iter()
                .zip(&dir)
                .map(|(b, d)| b + d * rat_int(t))
                .collect();
            assert_eq!(u.eval(&rat_int(t)), p.eval(&pt));
        }
    }

    #[test]
    fn compose_with_linear_forms() {
        // p(y1,y2) = y1 y2, y1 = x1+x2, y2 = x1-x2  =>  x1^2 - x2^2
        let p = &x(2, 1) * &x(2, 2);
        let f1 = Polynomial::linear_form(&rat_vec(&[1, 1]));
        let f2 = Polynomial::linear_form(&rat_vec(&[1, -1]));
        let q = p.compose(&[f1, f2]).unwrap();
        let expect = &x(2, 1).pow(2) - &x(2, 2).pow(2);
        assert_eq!(q, expect);
    }

    #[test]
    fn directional_derivative_sums_partials() {
        let p = &x(2, 1).pow(2) + &(&x(2, 1) * &x(2, 2));
        let d = p.directional_derivative(&rat_vec(&[1, 1]));
        // d/dt p(x + t*1) at t=0 equals 3 x1 + x2... check by evaluation
        let pt = rat_vec(&[4, 7]);
        assert_eq!(d.eval(&pt), rat_int(3 * 4 + 7));
    }

    #[test]
    fn display_is_readable() {
        let p = &x(2, 1).pow(2).scaled(&rat_int(2)) - &x(2, 2);
        assert_eq!(format!("{p}"), "2*x1^2 - x2");
    }
}
