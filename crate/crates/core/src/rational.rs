//! Exact rationals and a few helpers for building and printing them.
//!
//! Everything numeric that is not an integer goes through [`Rational`];
//! there is no floating point anywhere in the library.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational in lowest terms.
pub type Rational = num_rational::BigRational;

/// `num / den` as an exact rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `p/q` (q nonzero). Whitespace around the tokens is ignored.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = |detail: String| Error::Parse {
        what: "rational",
        detail,
    };
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| err(format!("bad numerator in {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| err(format!("bad denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(err(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Comma separated `p/q` list (integers print without a denominator).
pub fn format_list(values: &[Rational]) -> String {
    let mut out = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "{v}").unwrap();
    }
    out
}

/// Floor of a rational as an integer.
pub fn floor_i64(x: &Rational) -> i64 {
    i64::try_from(x.floor().to_integer()).expect("coordinate fits in i64")
}

pub fn ceil_i64(x: &Rational) -> i64 {
    i64::try_from(x.ceil().to_integer()).expect("coordinate fits in i64")
}

/// `base^exp` for a non-negative exponent.
pub fn pow(base: &Rational, exp: u64) -> Rational {
    let mut result = Rational::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    result
}

pub fn is_positive(x: &Rational) -> bool {
    x.is_positive()
}
