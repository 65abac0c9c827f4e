//! Exact rational scalars and a few helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn sign(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Parses an integer or a `p/q` fraction. Whitespace around the token is ignored.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Scales a rational vector by a positive factor so that it becomes a primitive
/// integer vector (gcd 1). The zero vector is returned unchanged.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for q in v {
        lcm = lcm.lcm(q.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|q| (q * &lcm).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Like [`primitive_integer`], but also flips the sign so the first nonzero entry is positive.
pub fn normalized_form(v: &[Rational]) -> Vec<BigInt> {
    let mut ints = primitive_integer(v);
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in ints.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    ints
}

pub fn to_rationals(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}
