//! Laurent polynomials and rational functions in the single variable t.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use super::qrat::{fmt_qrat, parse_qrat, qi, qpow, QRat};
use crate::error::{Error, Result};

/// Finite sum of c_k t^k with k ∈ ℤ and no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TPoly {
    coeffs: BTreeMap<i64, QRat>,
}

impl TPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(QRat::one())
    }

    pub fn constant(c: QRat) -> Self {
        Self::monomial(c, 0)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(qi(n))
    }

    pub fn monomial(c: QRat, k: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        Self { coeffs }
    }

    pub fn t_pow(k: i64) -> Self {
        Self::monomial(QRat::one(), k)
    }

    /// Builds from (exponent, coefficient) pairs, summing repeats.
    pub fn from_terms<I: IntoIterator<Item = (i64, QRat)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn add_term(&mut self, k: i64, c: QRat) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k).or_insert_with(QRat::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<QRat> {
        match self.coeffs.len() {
            0 => Some(QRat::zero()),
            1 => self.coeffs.get(&0).cloned(),
            _ => None,
        }
    }

    /// Returns (c, k) when the polynomial is the single term c t^k.
    pub fn as_monomial(&self) -> Option<(QRat, i64)> {
        if self.coeffs.len() == 1 {
            let (k, c) = self.coeffs.iter().next().unwrap();
            Some((c.clone(), *k))
        } else {
            None
        }
    }

    pub fn coeff(&self, k: i64) -> QRat {
        self.coeffs.get(&k).cloned().unwrap_or_else(QRat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &QRat)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_deg(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_deg(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Lowest term (c, k).
    pub fn lowest(&self) -> Option<(QRat, i64)> {
        self.coeffs.iter().next().map(|(k, c)| (c.clone(), *k))
    }

    pub fn scale(&self, c: &QRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn shift(&self, by: i64) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (k + by, v.clone()))
                .collect(),
        }
    }

    /// Substitutes t ↦ t^m.
    pub fn dilate(&self, m: i64) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(k, v)| (k * m, v.clone())))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Drops every term of degree above `order`.
    pub fn truncate(&self, order: i64) -> Self {
        Self {
            coeffs: self
                .coeffs
                .range(..=order)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Value at t = x; None when x = 0 meets a negative power.
    pub fn eval(&self, x: &QRat) -> Option<QRat> {
        let mut acc = QRat::zero();
        for (k, c) in &self.coeffs {
            acc += c * qpow(x, *k)?;
        }
        Some(acc)
    }

    /// Power series of 1/self through t^order.
    pub fn inverse_series(&self, order: i64) -> Result<Self> {
        let (c0, v) = self
            .lowest()
            .ok_or_else(|| Error::NotDivisible("inverse of zero".into()))?;
        let unit = self.shift(-v).scale(&c0.recip());
        let mut out: Vec<QRat> = Vec::new();
        let n = order + v;
        if n < 0 {
            return Ok(Self::zero());
        }
        for m in 0..=n {
            let mut s = if m == 0 { QRat::one() } else { QRat::zero() };
            if m > 0 {
                for (k, c) in unit.coeffs.range(1..=m) {
                    s -= c * &out[(m - k) as usize];
                }
            }
            out.push(s);
        }
        let c0inv = c0.recip();
        Ok(Self::from_terms(
            out.into_iter()
                .enumerate()
                .map(|(m, c)| (m as i64 - v, c * &c0inv)),
        ))
    }

    /// Exact quotient self / d when it is a Laurent polynomial.
    pub fn div_exact(&self, d: &TPoly) -> Option<TPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (a, sa) = to_dense(self);
        let (b, sb) = to_dense(d);
        let (qd, r) = dense_divrem(&a, &b);
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(from_dense(&qd, sa - sb))
    }

    /// Monic gcd of the polynomial parts, as an ordinary polynomial.
    pub fn gcd(&self, other: &TPoly) -> TPoly {
        if self.is_zero() {
            return monic(other);
        }
        if other.is_zero() {
            return monic(self);
        }
        let (mut a, _) = to_dense(self);
        let (mut b, _) = to_dense(other);
        while b.iter().any(|c| !c.is_zero()) {
            let (_, r) = dense_divrem(&a, &b);
            a = b;
            b = trim(r);
        }
        monic(&from_dense(&a, 0))
    }
}

fn monic(p: &TPoly) -> TPoly {
    match p.coeffs.iter().next_back() {
        None => TPoly::zero(),
        Some((_, c)) => {
            let (dense, _) = to_dense(p);
            from_dense(&dense, 0).scale(&c.recip())
        }
    }
}

fn trim(mut v: Vec<QRat>) -> Vec<QRat> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn to_dense(p: &TPoly) -> (Vec<QRat>, i64) {
    let lo = p.min_deg().unwrap_or(0);
    let hi = p.max_deg().unwrap_or(0);
    let mut v = vec![QRat::zero(); (hi - lo + 1) as usize];
    for (k, c) in &p.coeffs {
        v[(k - lo) as usize] = c.clone();
    }
    (v, lo)
}

fn from_dense(v: &[QRat], shift: i64) -> TPoly {
    TPoly::from_terms(
        v.iter()
            .enumerate()
            .map(|(i, c)| (i as i64 + shift, c.clone())),
    )
}

fn dense_divrem(a: &[QRat], b: &[QRat]) -> (Vec<QRat>, Vec<QRat>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut qv = vec![QRat::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[k + i] -= &c * bc;
        }
        qv[k] = c;
        r = trim(r);
    }
    (qv, r)
}

impl Add for &TPoly {
    type Output = TPoly;
    fn add(self, rhs: &TPoly) -> TPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &TPoly {
    type Output = TPoly;
    fn sub(self, rhs: &TPoly) -> TPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_term(*k, -c.clone());
        }
        out
    }
}

impl Mul for &TPoly {
    type Output = TPoly;
    fn mul(self, rhs: &TPoly) -> TPoly {
        let mut out = TPoly::zero();
        for (i, a) in &self.coeffs {
            for (j, b) in &rhs.coeffs {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

impl Neg for &TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        self.scale(&-QRat::one())
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
owned_ops!(TPoly);

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let tpart = match *k {
                0 => String::new(),
                1 => "t".to_string(),
                k => format!("t^{k}"),
            };
            if tpart.is_empty() {
                write!(f, "{}", fmt_qrat(&mag))?;
            } else if mag.is_one() {
                write!(f, "{tpart}")?;
            } else {
                write!(f, "{}*{tpart}", fmt_qrat(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TPoly({self})")
    }
}

impl FromStr for TPoly {
    type Err = Error;

    /// Parses the output of `Display`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let bad = || Error::Parse(format!("not a t-polynomial: {s:?}"));
        let mut out = TPoly::zero();
        let mut rest = s.to_string();
        let mut sign = QRat::one();
        if let Some(r) = rest.strip_prefix('-') {
            sign = -sign;
            rest = r.to_string();
        }
        let mut pieces: Vec<(QRat, String)> = Vec::new();
        let mut cur = String::new();
        let mut cur_sign = sign;
        let mut chars = rest.chars().peekable();
        while let Some(ch) = chars.next() {
            if ch == ' ' && matches!(chars.peek(), Some('+') | Some('-')) {
                let op = chars.next().unwrap();
                if chars.next() != Some(' ') {
                    return Err(bad());
                }
                pieces.push((cur_sign, std::mem::take(&mut cur)));
                cur_sign = if op == '-' { -QRat::one() } else { QRat::one() };
            } else {
                cur.push(ch);
            }
        }
        pieces.push((cur_sign, cur));
        for (sg, term) in pieces {
            let (coef, k) = if let Some((c, tp)) = term.split_once('*') {
                (parse_qrat(c)?, parse_tpart(tp).ok_or_else(bad)?)
            } else if term.starts_with('t') {
                (QRat::one(), parse_tpart(&term).ok_or_else(bad)?)
            } else {
                (parse_qrat(&term)?, 0)
            };
            out.add_term(k, sg * coef);
        }
        Ok(out)
    }
}

fn parse_tpart(s: &str) -> Option<i64> {
    if s == "t" {
        Some(1)
    } else {
        s.strip_prefix("t^")?.parse().ok()
    }
}

/// Rational function in t, kept reduced with a denominator whose lowest term is 1·t^0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TRat {
    num: TPoly,
    den: TPoly,
}

impl TRat {
    pub fn new(num: TPoly, den: TPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::PoleAtPoint("zero denominator in t".into()));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: TPoly, den: TPoly) -> Self {
        if num.is_zero() {
            return Self {
                num,
                den: TPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).expect("gcd divides numerator");
        let den = den.div_exact(&g).expect("gcd divides denominator");
        let (c, v) = den.lowest().expect("nonzero denominator");
        let inv = c.recip();
        Self {
            num: num.shift(-v).scale(&inv),
            den: den.shift(-v).scale(&inv),
        }
    }

    pub fn from_poly(p: TPoly) -> Self {
        Self {
            num: p,
            den: TPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(TPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(TPoly::one())
    }

    pub fn num(&self) -> &TPoly {
        &self.num
    }

    pub fn den(&self) -> &TPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&TPoly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn div(&self, rhs: &TRat) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn eval(&self, x: &QRat) -> Option<QRat> {
        let d = self.den.eval(x)?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x)? / d)
    }

    /// Power series through t^order.
    pub fn series(&self, order: i64) -> Result<TPoly> {
        let lo = self.num.min_deg().unwrap_or(0);
        let inv = self.den.inverse_series(order - lo)?;
        Ok((&self.num * &inv).truncate(order))
    }
}

impl Add for &TRat {
    type Output = TRat;
    fn add(self, rhs: &TRat) -> TRat {
        TRat::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &TRat {
    type Output = TRat;
    fn sub(self, rhs: &TRat) -> TRat {
        TRat::normalized(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &TRat {
    type Output = TRat;
    fn mul(self, rhs: &TRat) -> TRat {
        TRat::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &TRat {
    type Output = TRat;
    fn neg(self) -> TRat {
        TRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}
owned_ops!(TRat);

impl From<TPoly> for TRat {
    fn from(p: TPoly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for TRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for TRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TRat({self})")
    }
}

/// Shorthand for 1 + c t^k style polynomials in tests and fixtures.
pub fn tp(terms: &[(i64, i64)]) -> TPoly {
    TPoly::from_terms(terms.iter().map(|&(c, k)| (k, qi(c))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qrat::q;
    use proptest::prelude::*;

    #[test]
    fn display_roundtrip() {
        let p = TPoly::from_terms([(0, qi(1)), (2, q(-2, 3)), (-1, qi(1)), (1, qi(-1))]);
        let s = p.to_string();
        assert_eq!(s, "t^-1 + 1 - t - 2/3*t^2");
        assert_eq!(s.parse::<TPoly>().unwrap(), p);
        assert_eq!("-3".parse::<TPoly>().unwrap(), TPoly::int(-3));
    }

    #[test]
    fn exact_and_inexact_division() {
        let a = tp(&[(1, 0), (-1, 4)]);
        let b = tp(&[(1, 0), (-1, 2)]);
        assert_eq!(a.div_exact(&b).unwrap(), tp(&[(1, 0), (1, 2)]));
        assert!(b.div_exact(&a).is_none());
    }

    #[test]
    fn trat_reduces() {
        let r = TRat::new(tp(&[(1, 0), (-1, 4)]), tp(&[(1, 0), (-1, 2)])).unwrap();
        assert_eq!(r.as_poly().unwrap(), &tp(&[(1, 0), (1, 2)]));
        let s = TRat::new(tp(&[(2, 3)]), tp(&[(4, 1)])).unwrap();
        assert_eq!(s.as_poly().unwrap(), &TPoly::monomial(q(1, 2), 2));
    }

    #[test]
    fn inverse_series_geometric() {
        let p = tp(&[(1, 0), (-1, 2)]);
        assert_eq!(
            p.inverse_series(6).unwrap(),
            tp(&[(1, 0), (1, 2), (1, 4), (1, 6)])
        );
        let r = TPoly::t_pow(-2).inverse_series(3).unwrap();
        assert_eq!(r, TPoly::t_pow(2));
    }

    fn arb_tpoly() -> impl Strategy<Value = TPoly> {
        prop::collection::vec((-3i64..4, -4i64..5), 0..5)
            .prop_map(|v| TPoly::from_terms(v.into_iter().map(|(k, c)| (k, qi(c)))))
    }

    proptest! {
        #[test]
        fn product_divides_back(a in arb_tpoly(), b in arb_tpoly()) {
            prop_assume!(!b.is_zero());
            let p = &a * &b;
            prop_assert_eq!(p.div_exact(&b).unwrap(), a);
        }

        #[test]
        fn trat_field_ops(a in arb_tpoly(), b in arb_tpoly(), c in arb_tpoly()) {
            prop_assume!(!b.is_zero() && !c.is_zero());
            let x = TRat::new(a.clone(), b.clone()).unwrap();
            let y = TRat::new(c.clone(), b.clone()).unwrap();
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            let z = TRat::from_poly(c);
            prop_assert_eq!((&x * &z).div(&z).unwrap(), x);
        }
    }
}
