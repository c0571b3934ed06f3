//! Elementary symmetric polynomials over variable subsets and the derived
//! quantities the pencil construction is built from.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::{Polynomial, RationalFunction};
use crate::error::{Error, Result};
use crate::util::{factorial, full_set, subsets_of_size, subsets_up_to};
use crate::{Int, Rat};

/// `e_k(S)`: the sum over all k-subsets `T` of `S` of the product of the
/// variables indexed by `T`. `e_0(S) = 1`. Asking for `k > |S|` is treated as
/// a caller error rather than returning zero.
pub fn elementary_symmetric(ambient_dim: usize, set: &BTreeSet<u32>, k: usize) -> Result<Polynomial> {
    for &v in set {
        if v < 1 || v as usize > ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                got: v as usize,
            });
        }
    }
    if k > set.len() {
        return Err(Error::DegreeExceedsSetSize { k, size: set.len() });
    }
    let mut p = Polynomial::zero(ambient_dim);
    for subset in subsets_of_size(set, k) {
        let pairs: Vec<(u32, u32)> = subset.iter().map(|&v| (v, 1)).collect();
        p.add_term(super::Monomial::from_pairs(&pairs), Rat::one());
    }
    Ok(p)
}

/// `q_k(S) = e_k(S) / e_{k-1}(S)`, unreduced.
pub fn elem_sym_ratio(ambient_dim: usize, set: &BTreeSet<u32>, k: usize) -> Result<RationalFunction> {
    if k == 0 {
        return Err(Error::KOutOfRange {
            n: set.len(),
            k,
            min: 1,
            max: set.len(),
        });
    }
    let num = elementary_symmetric(ambient_dim, set, k)?;
    let den = elementary_symmetric(ambient_dim, set, k - 1)?;
    RationalFunction::new(num, den)
}

/// Outcome of a pointwise check of the series-parallel ratio recursion
/// `k q_k(S) = sum_j x_j q_{k-1}(S\{j}) / (x_j + q_{k-1}(S\{j}))`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RecursionCheck {
    Holds,
    Fails,
    /// Some intermediate denominator vanished at the point; the sample must
    /// be skipped, which is distinct from a failed identity.
    Pole,
}

pub fn check_ratio_recursion(
    ambient_dim: usize,
    set: &BTreeSet<u32>,
    k: usize,
    point: &[Rat],
) -> Result<RecursionCheck> {
    assert!(k >= 2, "recursion starts at k = 2");
    let lhs_q = elem_sym_ratio(ambient_dim, set, k)?;
    let lhs = match lhs_q.eval(point) {
        Ok(v) => v * Rat::from_integer(Int::from(k)),
        Err(Error::Pole) => return Ok(RecursionCheck::Pole),
        Err(e) => return Err(e),
    };
    let mut rhs = Rat::zero();
    for &j in set {
        let mut rest = set.clone();
        rest.remove(&j);
        let q_prev = elem_sym_ratio(ambient_dim, &rest, k - 1)?;
        let qv = match q_prev.eval(point) {
            Ok(v) => v,
            Err(Error::Pole) => return Ok(RecursionCheck::Pole),
            Err(e) => return Err(e),
        };
        let xj = point[j as usize - 1].clone();
        let den = &xj + &qv;
        if den.is_zero() {
            return Ok(RecursionCheck::Pole);
        }
        rhs += xj * qv / den;
    }
    Ok(if lhs == rhs {
        RecursionCheck::Holds
    } else {
        RecursionCheck::Fails
    })
}

/// Exponent of the factor indexed by a subset of size `j` in the determinant
/// factorization: `j! * (n - j - 1)`.
pub fn factor_product_exponent(j: usize, n: usize) -> u64 {
    let f: u64 = (1..=j as u64).product();
    f * (n - j - 1) as u64
}

/// The factors of the pencil determinant for parameters `(n, k)`:
/// `e_{k+1}` with exponent 1, then one mixed partial of `e_k` per subset of
/// size at most `k-1`, with exponent `|S|! (n-|S|-1)`.
pub fn factor_list(n: usize, k: usize) -> Result<Vec<(Polynomial, u64)>> {
    let full = full_set(n);
    let ek1 = elementary_symmetric(n, &full, k + 1)?;
    let ek = elementary_symmetric(n, &full, k)?;
    let mut out = vec![(ek1, 1)];
    if k >= 1 {
        for set in subsets_up_to(n, k - 1) {
            let exp = factor_product_exponent(set.len(), n);
            out.push((ek.partial_set(&set), exp));
        }
    }
    Ok(out)
}

/// Evaluates the full factor product at a point.
pub fn factor_product_eval(n: usize, k: usize, point: &[Rat]) -> Result<Rat> {
    let mut acc = Rat::one();
    for (p, exp) in factor_list(n, k)? {
        let v = p.eval(point);
        for _ in 0..exp {
            acc *= &v;
        }
    }
    Ok(acc)
}

/// The factor product expanded as one polynomial. Only sensible for small
/// `(n, k)`; the degree equals the pencil size.
pub fn factor_product_poly(n: usize, k: usize) -> Result<Polynomial> {
    let mut acc = Polynomial::one(n);
    for (p, exp) in factor_list(n, k)? {
        for _ in 0..exp {
            acc = &acc * &p;
        }
    }
    Ok(acc)
}

/// `gamma_{k,r}` evaluated at a point: the product over all k-subsets `S` of
/// `[n]` of `e_{r-k}(S')^{k!}` where `S'` is the complement.
pub fn gamma_eval(n: usize, k: usize, r: usize, point: &[Rat]) -> Result<Rat> {
    let exp = factorial(k);
    let mut acc = Rat::one();
    for set in subsets_of_size(&full_set(n), k) {
        let complement: BTreeSet<u32> = full_set(n).difference(&set).copied().collect();
        let v = elementary_symmetric(n, &complement, r - k)?.eval(point);
        let mut e = Int::zero();
        while e < exp {
            acc *= &v;
            e += 1;
        }
    }
    Ok(acc)
}

/// Symbolic `gamma_{k,r}`; guarded to small cases by the caller.
pub fn gamma_poly(n: usize, k: usize, r: usize) -> Result<Polynomial> {
    let exp_big = factorial(k);
    let exp: u32 = exp_big
        .to_string()
        .parse()
        .map_err(|_| Error::IntOverflow("gamma exponent"))?;
    let mut acc = Polynomial::one(n);
    for set in subsets_of_size(&full_set(n), k) {
        let complement: BTreeSet<u32> = full_set(n).difference(&set).copied().collect();
        let p = elementary_symmetric(n, &complement, r - k)?;
        acc = &acc * &p.pow(exp);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::{ones, rat_int, rat_vec};

    fn fs(items: &[u32]) -> BTreeSet<u32> {
        items.iter().copied().collect()
    }

    #[test]
    fn expansion_matches_definition() {
        // e_2({1,2,3}) = x1x2 + x1x3 + x2x3
        let p = elementary_symmetric(3, &fs(&[1, 2, 3]), 2).unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.eval(&rat_vec(&[1, 1, 1])), rat_int(3));
        // e_1({1,2,3}) inside ambient dimension 4
        let p = elementary_symmetric(4, &fs(&[1, 2, 3]), 1).unwrap();
        assert_eq!(p, {
            let x1 = Polynomial::variable(4, 1).unwrap();
            let x2 = Polynomial::variable(4, 2).unwrap();
            let x3 = Polynomial::variable(4, 3).unwrap();
            &(&x1 + &x2) + &x3
        });
        // e_3([4]) at all-ones is C(4,3)
        let p = elementary_symmetric(4, &fs(&[1, 2, 3, 4]), 3).unwrap();
        assert_eq!(p.eval(&ones(4)), rat_int(4));
    }

    #[test]
    fn degree_exceeding_set_size_is_an_error() {
        assert!(matches!(
            elementary_symmetric(3, &fs(&[1, 2]), 3),
            Err(Error::DegreeExceedsSetSize { k: 3, size: 2 })
        ));
        // e_0 of the empty set is 1
        let p = elementary_symmetric(3, &fs(&[]), 0).unwrap();
        assert_eq!(p, Polynomial::one(3));
    }

    #[test]
    fn partial_derivative_identity() {
        // d/dx{1} e_2([3]) = x2 + x3
        let e2 = elementary_symmetric(3, &fs(&[1, 2, 3]), 2).unwrap();
        let d = e2.partial_set(&fs(&[1]));
        assert_eq!(d, elementary_symmetric(3, &fs(&[2, 3]), 1).unwrap());
        // d^2/dx1 dx2 e_2([4]) = 1
        let e2 = elementary_symmetric(4, &fs(&[1, 2, 3, 4]), 2).unwrap();
        assert_eq!(e2.partial_set(&fs(&[1, 2])), Polynomial::one(4));
        // d/dx4 e_3([4]) = e_2({1,2,3})
        let e3 = elementary_symmetric(4, &fs(&[1, 2, 3, 4]), 3).unwrap();
        assert_eq!(
            e3.partial_set(&fs(&[4])),
            elementary_symmetric(4, &fs(&[1, 2, 3]), 2).unwrap()
        );
    }

    #[test]
    fn ratio_examples() {
        // q_1({1,2}) = (x1+x2)/1
        let q = elem_sym_ratio(2, &fs(&[1, 2]), 1).unwrap();
        assert_eq!(q.eval(&rat_vec(&[5, 7])).unwrap(), rat_int(12));
        assert!(q.is_polynomial());
        // q_2({1,2,3}) at ones = 3/3 = 1
        let q = elem_sym_ratio(3, &fs(&[1, 2, 3]), 2).unwrap();
        assert_eq!(q.eval(&ones(3)).unwrap(), rat_int(1));
        // q_2([4]\{4}) = e_2({1,2,3}) / e_1({1,2,3}) in ambient dim 4
        let q = elem_sym_ratio(4, &fs(&[1, 2, 3]), 2).unwrap();
        assert_eq!(
            q.numerator(),
            &elementary_symmetric(4, &fs(&[1, 2, 3]), 2).unwrap()
        );
        assert_eq!(
            q.denominator(),
            &elementary_symmetric(4, &fs(&[1, 2, 3]), 1).unwrap()
        );
        assert!(elem_sym_ratio(3, &fs(&[1, 2, 3]), 0).is_err());
        // q_2([3]) at (1,1,-1) = (1-1-1)/(1+1-1) = -1
        let q = elem_sym_ratio(3, &fs(&[1, 2, 3]), 2).unwrap();
        assert_eq!(q.eval(&rat_vec(&[1, 1, -1])).unwrap(), rat_int(-1));
    }

    #[test]
    fn evaluation_oracle_values() {
        // e_3([4]) at (1,2,3,4): hand expansion 2*3*4 + 1*3*4 + 1*2*4 + 1*2*3 = 50
        let e3 = elementary_symmetric(4, &fs(&[1, 2, 3, 4]), 3).unwrap();
        assert_eq!(e3.eval(&rat_vec(&[1, 2, 3, 4])), rat_int(50));
    }

    #[test]
    fn ratio_recursion_at_points() {
        let s3 = fs(&[1, 2, 3]);
        assert_eq!(
            check_ratio_recursion(3, &s3, 2, &ones(3)).unwrap(),
            RecursionCheck::Holds
        );
        let s4 = fs(&[1, 2, 3, 4]);
        assert_eq!(
            check_ratio_recursion(4, &s4, 3, &rat_vec(&[1, 2, 3, 4])).unwrap(),
            RecursionCheck::Holds
        );
        // (1,1,-2): e_1({1,2}) etc stay nonzero; either holds or hits a pole
        let r = check_ratio_recursion(3, &s3, 2, &rat_vec(&[1, 1, -2])).unwrap();
        assert_ne!(r, RecursionCheck::Fails);
    }

    #[test]
    fn factor_product_small_cases() {
        // (n,k) = (3,1): e_2 * e_1^2, degree 4
        let p = factor_product_poly(3, 1).unwrap();
        assert_eq!(p.homogeneous_degree(), Some(4));
        assert_eq!(p.eval(&ones(3)), rat_int(27)); // 3 * 9
        assert_eq!(factor_product_eval(3, 1, &ones(3)).unwrap(), rat_int(27));
        // (n,k) = (4,2): degree 17 = pencil size
        let v = rat_vec(&[1, 2, 3, 4]);
        let direct = factor_product_eval(4, 2, &v).unwrap();
        let via_poly = factor_product_poly(4, 2).unwrap().eval(&v);
        assert_eq!(direct, via_poly);
    }

    #[test]
    fn gamma_boundary_identities() {
        // gamma_{0,r} = e_r([n]) and gamma_{r,r} = 1 as exact polynomials
        for n in 2..=5usize {
            for r in 1..n {
                let g0 = gamma_poly(n, 0, r).unwrap();
                let er = elementary_symmetric(n, &full_set(n), r).unwrap();
                assert_eq!(g0, er, "gamma_0r != e_r for n={n} r={r}");
                let grr = gamma_poly(n, r, r).unwrap();
                assert_eq!(grr, Polynomial::one(n), "gamma_rr != 1 for n={n} r={r}");
            }
        }
    }

    #[test]
    fn gamma_eval_matches_poly() {
        let point = rat_vec(&[2, -1, 3, 5]);
        for (k, r) in [(1usize, 2usize), (1, 3), (2, 3), (2, 2)] {
            let by_eval = gamma_eval(4, k, r, &point).unwrap();
            let by_poly = gamma_poly(4, k, r).unwrap().eval(&point);
            assert_eq!(by_eval, by_poly, "k={k} r={r}");
        }
    }
}
