//! Small numeric helpers shared across modules.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::{Int, Rat};

pub fn factorial(n: usize) -> Int {
    let mut acc = Int::one();
    for i in 2..=n {
        acc *= Int::from(i);
    }
    acc
}

pub fn binomial(n: usize, k: usize) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 0..k {
        acc = acc * Int::from(n - i) / Int::from(i + 1);
    }
    acc
}

/// All size-`k` subsets of `set`, in lexicographic order of their sorted elements.
pub fn subsets_of_size(set: &BTreeSet<u32>, k: usize) -> Vec<BTreeSet<u32>> {
    use itertools::Itertools;
    let elems: Vec<u32> = set.iter().copied().collect();
    elems
        .into_iter()
        .combinations(k)
        .map(|c| c.into_iter().collect())
        .collect()
}

/// All subsets of `{1,..,n}` with at most `max_size` elements, smallest first.
pub fn subsets_up_to(n: usize, max_size: usize) -> Vec<BTreeSet<u32>> {
    let full = full_set(n);
    let mut out = Vec::new();
    for j in 0..=max_size.min(n) {
        out.extend(subsets_of_size(&full, j));
    }
    out
}

pub fn full_set(n: usize) -> BTreeSet<u32> {
    (1..=n as u32).collect()
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

pub fn ones(n: usize) -> Vec<Rat> {
    vec![rat_int(1); n]
}

/// `i`-th coordinate direction (1-based) in dimension `n`.
pub fn unit_vector(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i - 1] = Rat::one();
    v
}

/// Parses an exact rational from `"p/q"`, an integer, or a finite decimal
/// such as `"-1.25"`.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: Int = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d: Int = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let int_part = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            format!("{int_part}0")
        } else {
            int_part.to_string()
        };
        let i: Int = int_part
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal in {s:?}")))?;
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal in {s:?}")));
        }
        let f: Int = frac_part
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal in {s:?}")))?;
        let scale = Int::from(10u32).pow(frac_part.len() as u32);
        let frac = Rat::new(f, scale);
        let whole = Rat::from_integer(i.abs());
        let total = whole + frac;
        return Ok(if negative { -total } else { total });
    }
    let n: Int = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    Ok(Rat::from_integer(n))
}

/// Renders a rational as a finite decimal, failing when its denominator has
/// prime factors other than 2 and 5.
pub fn to_decimal_string(r: &Rat) -> Result<String> {
    let mut den = r.denom().clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    let two = Int::from(2);
    let five = Int::from(5);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return Err(Error::Parse(format!(
            "{r} has no finite decimal representation"
        )));
    }
    let digits = twos.max(fives);
    if digits == 0 {
        return Ok(r.numer().to_string());
    }
    let scaled: Int = r.numer() * Int::from(10u32).pow(digits) / r.denom();
    let neg = scaled.is_negative();
    let abs = scaled.abs().to_string();
    let abs = if abs.len() <= digits as usize {
        format!("{}{}", "0".repeat(digits as usize + 1 - abs.len()), abs)
    } else {
        abs
    };
    let split = abs.len() - digits as usize;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&abs[..split]);
    out.push('.');
    out.push_str(&abs[split..]);
    Ok(out)
}

/// Deterministic big-integer to `BigRational` vector conversion for tests.
pub fn rat_vec(vals: &[i64]) -> Vec<Rat> {
    vals.iter().map(|&v| rat_int(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials_and_binomials() {
        assert_eq!(factorial(0), Int::from(1));
        assert_eq!(factorial(5), Int::from(120));
        assert_eq!(binomial(4, 2), Int::from(6));
        assert_eq!(binomial(6, 0), Int::from(1));
        assert_eq!(binomial(3, 5), Int::from(0));
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("3").unwrap(), rat_int(3));
        assert_eq!(parse_rational("-2/5").unwrap(), Rat::new(Int::from(-2), Int::from(5)));
        assert_eq!(parse_rational("1.25").unwrap(), Rat::new(Int::from(5), Int::from(4)));
        assert_eq!(parse_rational("-0.5").unwrap(), Rat::new(Int::from(-1), Int::from(2)));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal_string(&rat_int(7)).unwrap(), "7");
        assert_eq!(to_decimal_string(&Rat::new(Int::from(5), Int::from(4))).unwrap(), "1.25");
        assert_eq!(to_decimal_string(&Rat::new(Int::from(-1), Int::from(2))).unwrap(), "-0.5");
        assert!(to_decimal_string(&Rat::new(Int::from(1), Int::from(3))).is_err());
    }

    #[test]
    fn subset_enumeration() {
        let s = full_set(4);
        assert_eq!(subsets_of_size(&s, 2).len(), 6);
        assert_eq!(subsets_up_to(4, 1).len(), 5);
    }
}
