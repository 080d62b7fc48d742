//! Arbitrary-precision rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type QRat = BigRational;

pub fn qi(n: i64) -> QRat {
    QRat::from_integer(BigInt::from(n))
}

pub fn q(n: i64, d: i64) -> QRat {
    QRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_qrat(s: &str) -> Result<QRat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().map_err(|_| bad())?;
            let d: BigInt = b.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(QRat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(QRat::from_integer(n))
        }
    }
}

/// Integer power with negative exponents allowed for nonzero bases.
pub fn qpow(x: &QRat, e: i64) -> Option<QRat> {
    if e >= 0 {
        let mut acc = QRat::one();
        for _ in 0..e {
            acc *= x;
        }
        Some(acc)
    } else if x.is_zero() {
        None
    } else {
        qpow(&x.recip(), -e)
    }
}

pub fn fmt_qrat(x: &QRat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &QRat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn is_integer(x: &QRat) -> bool {
    x.denom().is_one()
}

pub fn to_i64(x: &QRat) -> Option<i64> {
    if is_integer(x) {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn abs(x: &QRat) -> QRat {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_qrat("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_qrat("-4").unwrap(), qi(-4));
        assert!(parse_qrat("1/0").is_err());
        assert!(parse_qrat("x").is_err());
    }

    #[test]
    fn lowest_terms_positive_denominator() {
        let x = q(4, -6);
        assert_eq!(x.numer(), &BigInt::from(-2));
        assert_eq!(x.denom(), &BigInt::from(3));
        assert_eq!(fmt_qrat(&x), "-2/3");
    }

    #[test]
    fn negative_powers() {
        assert_eq!(qpow(&q(2, 3), -2).unwrap(), q(9, 4));
        assert!(qpow(&qi(0), -1).is_none());
    }
}
