//! Laurent polynomials on the doubled lattice with coefficients in ℚ[t, t⁻¹].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::lattice::{self, IMat};
use super::tpoly::TPoly;
use crate::error::{Error, Result};

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exp(pub Vec<i64>);

impl Ord for Exp {
    fn cmp(&self, other: &Self) -> Ordering {
        let a: i64 = self.0.iter().sum();
        let b: i64 = other.0.iter().sum();
        a.cmp(&b).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusLaurent {
    rank: usize,
    terms: BTreeMap<Exp, TPoly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Ring operation with a rank check.
pub fn poly_arith(a: &TorusLaurent, b: &TorusLaurent, op: ArithOp) -> Result<TorusLaurent> {
    if a.rank != b.rank {
        return Err(Error::Dimension {
            expected: a.rank,
            found: b.rank,
        });
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    })
}

impl TorusLaurent {
    pub fn zero(rank: usize) -> Self {
        Self {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, TPoly::one())
    }

    pub fn constant(rank: usize, c: TPoly) -> Self {
        Self::monomial(vec![0; rank], c)
    }

    pub fn monomial(exp: Vec<i64>, c: TPoly) -> Self {
        let rank = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exp(exp), c);
        }
        Self { rank, terms }
    }

    /// The character e^{v}.
    pub fn e(exp: &[i64]) -> Self {
        Self::monomial(exp.to_vec(), TPoly::one())
    }

    /// 1 − c e^{v}.
    pub fn one_minus(c: TPoly, exp: &[i64]) -> Self {
        &Self::one(exp.len()) - &Self::monomial(exp.to_vec(), c)
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<i64>, TPoly)>>(rank: usize, terms: I) -> Self {
        let mut out = Self::zero(rank);
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn add_term(&mut self, exp: Vec<i64>, c: TPoly) {
        assert_eq!(exp.len(), self.rank, "exponent length");
        if c.is_zero() {
            return;
        }
        let key = Exp(exp);
        match self.terms.get_mut(&key) {
            Some(slot) => {
                let s = &*slot + &c;
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *slot = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[i64], &TPoly)> {
        self.terms.iter().map(|(e, c)| (e.0.as_slice(), c))
    }

    pub fn coeff(&self, exp: &[i64]) -> TPoly {
        self.terms
            .get(&Exp(exp.to_vec()))
            .cloned()
            .unwrap_or_else(TPoly::zero)
    }

    pub fn constant_term(&self) -> TPoly {
        self.coeff(&vec![0; self.rank])
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&[i64], &TPoly)> {
        self.terms
            .iter()
            .next_back()
            .map(|(e, c)| (e.0.as_slice(), c))
    }

    /// Trailing term in graded-lex order.
    pub fn trailing(&self) -> Option<(&[i64], &TPoly)> {
        self.terms.iter().next().map(|(e, c)| (e.0.as_slice(), c))
    }

    pub fn as_torus_constant(&self) -> Option<TPoly> {
        match self.terms.len() {
            0 => Some(TPoly::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                lattice::is_zero(&e.0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&[i64], &TPoly)> {
        (self.terms.len() == 1).then(|| self.leading().unwrap())
    }

    pub fn scale(&self, c: &TPoly) -> Self {
        if c.is_zero() {
            return Self::zero(self.rank);
        }
        Self {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by c·e^{v}.
    pub fn mul_monomial(&self, exp: &[i64], c: &TPoly) -> Self {
        if c.is_zero() {
            return Self::zero(self.rank);
        }
        Self {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (Exp(lattice::add(&e.0, exp)), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.rank);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces every exponent v by m·v; m may change the rank.
    pub fn map_exponents(&self, m: &IMat) -> Result<Self> {
        if m.iter().any(|r| r.len() != self.rank) {
            return Err(Error::Dimension {
                expected: self.rank,
                found: m.first().map_or(0, |r| r.len()),
            });
        }
        let mut out = Self::zero(m.len());
        for (e, c) in &self.terms {
            out.add_term(lattice::mat_vec(m, &e.0), c.clone());
        }
        Ok(out)
    }

    /// e^{v} ↦ e^{−v}.
    pub fn invert_exponents(&self) -> Self {
        Self {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (Exp(lattice::neg(&e.0)), c.clone()))
                .collect(),
        }
    }

    /// Applies a polynomial map to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&TPoly) -> TPoly) -> Self {
        Self::from_terms(
            self.rank,
            self.terms.iter().map(|(e, c)| (e.0.clone(), f(c))),
        )
    }

    /// Specializes e^{v} ↦ t^{⟨v, rho⟩ / 2}; the exponent must be integral.
    pub fn eval_rho(&self, rho: &[i64]) -> Result<TPoly> {
        let mut out = TPoly::zero();
        for (e, c) in &self.terms {
            let k = lattice::dot(&e.0, rho);
            if k % 2 != 0 {
                return Err(Error::Invalid(format!(
                    "monomial {:?} pairs to a half-integral power of t",
                    e.0
                )));
            }
            out = &out + &c.shift(k / 2);
        }
        Ok(out)
    }

    /// Coordinate-wise exponent bounds.
    pub fn newton_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let mut lo = first.0.clone();
        let mut hi = first.0.clone();
        for e in it {
            for i in 0..self.rank {
                lo[i] = lo[i].min(e.0[i]);
                hi[i] = hi[i].max(e.0[i]);
            }
        }
        Some((lo, hi))
    }

    /// Serialization as (exponent, t-polynomial string) pairs in graded-lex order.
    pub fn to_pairs(&self) -> Vec<(Vec<i64>, String)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.0.clone(), c.to_string()))
            .collect()
    }

    pub fn from_pairs(rank: usize, pairs: &[(Vec<i64>, String)]) -> Result<Self> {
        let mut out = Self::zero(rank);
        for (e, s) in pairs {
            if e.len() != rank {
                return Err(Error::Dimension {
                    expected: rank,
                    found: e.len(),
                });
            }
            out.add_term(e.clone(), s.parse()?);
        }
        Ok(out)
    }
}

/// Returns q with q·den = num, peeling graded-lex leading terms.
pub fn exact_divide(num: &TorusLaurent, den: &TorusLaurent) -> Result<TorusLaurent> {
    if num.rank != den.rank {
        return Err(Error::Dimension {
            expected: num.rank,
            found: den.rank,
        });
    }
    let (dlead, dcoef) = den
        .leading()
        .ok_or_else(|| Error::NotDivisible("division by zero".into()))?;
    let (dlo, dhi) = den.newton_box().unwrap();
    let mut quotient = TorusLaurent::zero(num.rank);
    let Some((nlo, nhi)) = num.newton_box() else {
        return Ok(quotient);
    };
    let qlo = lattice::sub(&nlo, &dlo);
    let qhi = lattice::sub(&nhi, &dhi);
    let mut rem = num.clone();
    while let Some((rlead, rcoef)) = rem.leading() {
        let m = lattice::sub(rlead, dlead);
        if (0..num.rank).any(|i| m[i] < qlo[i] || m[i] > qhi[i]) {
            return Err(Error::NotDivisible(format!(
                "quotient exponent {m:?} leaves the Newton box"
            )));
        }
        let c = rcoef.div_exact(dcoef).ok_or_else(|| {
            Error::NotDivisible(format!("coefficient {rcoef} is not divisible by {dcoef}"))
        })?;
        rem = &rem - &den.mul_monomial(&m, &c);
        quotient.add_term(m, c);
    }
    Ok(quotient)
}

impl Add for &TorusLaurent {
    type Output = TorusLaurent;
    fn add(self, rhs: &TorusLaurent) -> TorusLaurent {
        assert_eq!(self.rank, rhs.rank, "rank mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.0.clone(), c.clone());
        }
        out
    }
}

impl Sub for &TorusLaurent {
    type Output = TorusLaurent;
    fn sub(self, rhs: &TorusLaurent) -> TorusLaurent {
        assert_eq!(self.rank, rhs.rank, "rank mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.0.clone(), -c);
        }
        out
    }
}

impl Mul for &TorusLaurent {
    type Output = TorusLaurent;
    fn mul(self, rhs: &TorusLaurent) -> TorusLaurent {
        assert_eq!(self.rank, rhs.rank, "rank mismatch");
        let mut out = TorusLaurent::zero(self.rank);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(lattice::add(&ea.0, &eb.0), ca * cb);
            }
        }
        out
    }
}

impl Neg for &TorusLaurent {
    type Output = TorusLaurent;
    fn neg(self) -> TorusLaurent {
        self.scale(&TPoly::int(-1))
    }
}

impl Add for TorusLaurent {
    type Output = TorusLaurent;
    fn add(self, rhs: TorusLaurent) -> TorusLaurent {
        &self + &rhs
    }
}

impl Sub for TorusLaurent {
    type Output = TorusLaurent;
    fn sub(self, rhs: TorusLaurent) -> TorusLaurent {
        &self - &rhs
    }
}

impl Mul for TorusLaurent {
    type Output = TorusLaurent;
    fn mul(self, rhs: TorusLaurent) -> TorusLaurent {
        &self * &rhs
    }
}

impl Neg for TorusLaurent {
    type Output = TorusLaurent;
    fn neg(self) -> TorusLaurent {
        -&self
    }
}

impl fmt::Display for TorusLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if lattice::is_zero(&e.0) {
                write!(f, "({c})")?;
            } else if c.is_one() {
                write!(f, "e{:?}", e.0)?;
            } else {
                write!(f, "({c})*e{:?}", e.0)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TorusLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusLaurent[{}]({self})", self.rank)
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    rank: usize,
    terms: Vec<(Vec<i64>, String)>,
}

impl Serialize for TorusLaurent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentRepr {
            rank: self.rank,
            terms: self.to_pairs(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusLaurent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = LaurentRepr::deserialize(d)?;
        TorusLaurent::from_pairs(r.rank, &r.terms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exact::qrat::qi;
    use crate::exact::tpoly::tp;
    use proptest::prelude::*;

    fn z(k: i64) -> TorusLaurent {
        TorusLaurent::e(&[k])
    }

    #[test]
    fn difference_of_squares() {
        let one = TorusLaurent::one(1);
        let p = poly_arith(&(&one - &z(1)), &(&one + &z(1)), ArithOp::Mul).unwrap();
        assert_eq!(p, &one - &z(2));
        let zero = TorusLaurent::zero(1);
        assert!(poly_arith(&p, &zero, ArithOp::Mul).unwrap().is_zero());
        assert!(poly_arith(&p, &TorusLaurent::one(2), ArithOp::Add).is_err());
    }

    #[test]
    fn hand_expansion_of_paired_binomials() {
        let t2 = tp(&[(1, 2)]);
        let a = TorusLaurent::one_minus(t2.clone(), &[2]);
        let b = TorusLaurent::one_minus(t2.clone(), &[-2]);
        let expected = TorusLaurent::from_terms(
            1,
            [
                (vec![0], tp(&[(1, 0), (1, 4)])),
                (vec![2], tp(&[(-1, 2)])),
                (vec![-2], tp(&[(-1, 2)])),
            ],
        );
        assert_eq!(&a * &b, expected);
    }

    #[test]
    fn division_examples() {
        let one = TorusLaurent::one(1);
        let q = exact_divide(&(&one - &z(2)), &(&one - &z(1))).unwrap();
        assert_eq!(q, &one + &z(1));
        let q = exact_divide(&(&one - &z(3)), &(&one - &z(1))).unwrap();
        assert_eq!(q, &(&one + &z(1)) + &z(2));
        assert!(matches!(
            exact_divide(&(&one - &z(2)), &(&one - &z(3))),
            Err(Error::NotDivisible(_))
        ));
    }

    #[test]
    fn weyl_examples() {
        let f = &z(2) + &z(-2).scale(&TPoly::int(2));
        assert_eq!(f.map_exponents(&vec![vec![1]]).unwrap(), f);
        let g = f.map_exponents(&vec![vec![-1]]).unwrap();
        assert_eq!(g, &z(-2) + &z(2).scale(&TPoly::int(2)));
        assert_eq!(g.map_exponents(&vec![vec![-1]]).unwrap(), f);
    }

    #[test]
    fn serialization_roundtrip() {
        let f = TorusLaurent::from_terms(
            2,
            [
                (vec![1, -2], tp(&[(1, 0), (-3, 2)])),
                (vec![0, 0], tp(&[(2, -1)])),
            ],
        );
        let s = serde_json::to_string(&f).unwrap();
        let g: TorusLaurent = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
        assert_eq!(serde_json::to_string(&g).unwrap(), s);
    }

    pub(crate) fn arb_laurent(rank: usize) -> impl Strategy<Value = TorusLaurent> {
        prop::collection::vec(
            (prop::collection::vec(-2i64..3, rank), -2i64..3, -3i64..4),
            0..5,
        )
        .prop_map(move |v| {
            TorusLaurent::from_terms(
                rank,
                v.into_iter()
                    .map(|(e, k, c)| (e, TPoly::monomial(qi(c), k))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_laurent(2), b in arb_laurent(2), c in arb_laurent(2)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn divide_product_back(a in arb_laurent(2), b in arb_laurent(2)) {
            prop_assume!(!b.is_zero());
            let p = &a * &b;
            prop_assert_eq!(exact_divide(&p, &b).unwrap(), a);
        }

        #[test]
        fn lattice_action_is_a_group_action(f in arb_laurent(2)) {
            let s1: IMat = vec![vec![-1, 0], vec![1, 1]];
            let s2: IMat = vec![vec![1, 1], vec![0, -1]];
            let both = lattice::mat_mul(&s1, &s2);
            let lhs = f.map_exponents(&s2).unwrap().map_exponents(&s1).unwrap();
            prop_assert_eq!(lhs, f.map_exponents(&both).unwrap());
        }
    }
}
