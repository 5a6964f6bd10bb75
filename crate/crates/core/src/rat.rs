//! Exact rational scalars and parsing/formatting helpers.
//!
//! All arithmetic in this crate is exact; floating point is never used.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Exact rational scalar used everywhere in the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p/q`, or just `p` when the denominator is one.
pub fn q_str(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `p/q` or a decimal-free signed integer string.
pub fn parse_q(s: &str) -> Result<Q, Error> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt, Error> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("invalid rational `{s}`")))
    };
    match s.split_once('/') {
        None => Ok(Q::from_integer(parse_int(s)?)),
        Some((num, den)) => {
            let d = parse_int(den)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Q::new(parse_int(num)?, d))
        }
    }
}

/// Least common multiple of the denominators of a slice of rationals.
pub fn denom_lcm(xs: &[Q]) -> BigInt {
    let mut l = BigInt::one();
    for x in xs {
        l = num_integer::lcm(l, x.denom().clone());
    }
    l
}

/// Divides an integer vector by the gcd of its entries, keeping orientation.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in v {
        g = num_integer::gcd(g, x.abs());
    }
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive_of_rational(v: &[Q]) -> Vec<BigInt> {
    let l = denom_lcm(v);
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    primitive(&ints)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-7/2", "0", "22/7"] {
            let x = parse_q(s).unwrap();
            assert_eq!(q_str(&x), s);
        }
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("a/b").is_err());
    }

    #[test]
    fn primitive_vectors() {
        let v = [BigInt::from(4), BigInt::from(-6), BigInt::from(2)];
        assert_eq!(
            primitive(&v),
            vec![BigInt::from(2), BigInt::from(-3), BigInt::from(1)]
        );
        assert_eq!(
            primitive_of_rational(&[frac(1, 2), frac(3, 4)]),
            vec![BigInt::from(2), BigInt::from(3)]
        );
    }
}
