//! Rational functions on the torus: a numerator over a multiset of denominator factors.

use std::fmt;

use num_traits::{One, Zero};

use super::lattice::{self, IMat};
use super::laurent::{exact_divide, TorusLaurent};
use super::qrat::{qpow, QRat};
use super::tpoly::{TPoly, TRat};
use crate::error::{Error, Result};

/// Denominator factors are stored in canonical form: the graded-lex trailing
/// term is e^0 and its lowest t-coefficient is 1·t^0. Units never appear as factors.
/// (exponent, coefficient) pairs in graded-lex order.
pub type Pairs = Vec<(Vec<i64>, String)>;

#[derive(Clone)]
pub struct TorusRational {
    num: TorusLaurent,
    den: Vec<TorusLaurent>,
}

/// Splits f = c·t^a·e^m · g with g canonical; returns (m, c·t^a, g).
fn canonicalize(f: &TorusLaurent) -> (Vec<i64>, TPoly, TorusLaurent) {
    let (m, coef) = f.trailing().expect("nonzero factor");
    let m = m.to_vec();
    let (c, a) = coef.lowest().expect("nonzero coefficient");
    let unit = TPoly::monomial(c.clone(), a);
    let inv = TPoly::monomial(c.recip(), -a);
    let g = f.mul_monomial(&lattice::neg(&m), &inv);
    (m, unit, g)
}

impl TorusRational {
    pub fn from_laurent(num: TorusLaurent) -> Self {
        Self { num, den: vec![] }
    }

    pub fn zero(rank: usize) -> Self {
        Self::from_laurent(TorusLaurent::zero(rank))
    }

    pub fn one(rank: usize) -> Self {
        Self::from_laurent(TorusLaurent::one(rank))
    }

    /// num / ∏ den.
    pub fn new(num: TorusLaurent, den: Vec<TorusLaurent>) -> Result<Self> {
        let mut out = Self::from_laurent(num);
        for d in den {
            out.push_den(d)?;
        }
        Ok(out)
    }

    /// ∏ nums / ∏ dens.
    pub fn from_factors(rank: usize, nums: &[TorusLaurent], dens: &[TorusLaurent]) -> Result<Self> {
        let mut num = TorusLaurent::one(rank);
        for n in nums {
            num = &num * n;
        }
        Self::new(num, dens.to_vec())
    }

    fn push_den(&mut self, d: TorusLaurent) -> Result<()> {
        if d.rank() != self.num.rank() {
            return Err(Error::Dimension {
                expected: self.num.rank(),
                found: d.rank(),
            });
        }
        if d.is_zero() {
            return Err(Error::PoleAtPoint("zero denominator".into()));
        }
        let (m, unit, g) = canonicalize(&d);
        let (c, a) = unit.as_monomial().unwrap();
        self.num = self
            .num
            .mul_monomial(&lattice::neg(&m), &TPoly::monomial(c.recip(), -a));
        if !g.as_torus_constant().is_some_and(|p| p.is_one()) {
            let pos = self.den.partition_point(|x| x < &g);
            self.den.insert(pos, g);
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.num.rank()
    }

    pub fn numerator(&self) -> &TorusLaurent {
        &self.num
    }

    pub fn den_factors(&self) -> &[TorusLaurent] {
        &self.den
    }

    pub fn denominator(&self) -> TorusLaurent {
        let mut d = TorusLaurent::one(self.rank());
        for f in &self.den {
            d = &d * f;
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The Laurent polynomial this equals, when the division is exact.
    pub fn as_laurent(&self) -> Option<TorusLaurent> {
        if self.den.is_empty() {
            return Some(self.num.clone());
        }
        exact_divide(&self.num, &self.denominator()).ok()
    }

    /// Cancels denominator factors that divide the numerator exactly.
    pub fn simplify(&self) -> Self {
        let mut num = self.num.clone();
        let mut den = Vec::new();
        for f in &self.den {
            match exact_divide(&num, f) {
                Ok(q) => num = q,
                Err(_) => den.push(f.clone()),
            }
        }
        Self { num, den }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::PoleAtPoint("reciprocal of zero".into()));
        }
        let mut out = Self::from_laurent(self.denominator());
        out.push_den(self.num.clone())?;
        Ok(out)
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    /// Replaces each exponent v by m·v (a lattice map, possibly changing rank).
    pub fn map_exponents(&self, m: &IMat) -> Result<Self> {
        let num = self.num.map_exponents(m)?;
        let den = self
            .den
            .iter()
            .map(|f| f.map_exponents(m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(num, den)
    }

    /// χ ↦ χ⁻¹.
    pub fn invert_exponents(&self) -> Self {
        Self::new(
            self.num.invert_exponents(),
            self.den.iter().map(|f| f.invert_exponents()).collect(),
        )
        .expect("inversion keeps factors nonzero")
    }

    pub fn scale(&self, c: &TPoly) -> Self {
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Specializes e^{v} ↦ t^{⟨v,rho⟩/2}.
    pub fn eval_rho(&self, rho: &[i64]) -> Result<TRat> {
        let mut den = TPoly::one();
        for f in &self.den {
            let v = f.eval_rho(rho)?;
            if v.is_zero() {
                return Err(Error::PoleAtPoint(format!("factor {f} vanishes")));
            }
            den = &den * &v;
        }
        TRat::new(self.num.eval_rho(rho)?, den)
    }

    /// Sorted (exponent, coefficient) pairs of num and each factor.
    pub fn to_parts(&self) -> (Pairs, Vec<Pairs>) {
        (
            self.num.to_pairs(),
            self.den.iter().map(|f| f.to_pairs()).collect(),
        )
    }
}

/// Cancels the shared part of two sorted factor lists.
fn cancel_common(a: &[TorusLaurent], b: &[TorusLaurent]) -> (Vec<TorusLaurent>, Vec<TorusLaurent>) {
    let (mut i, mut j) = (0, 0);
    let (mut ra, mut rb) = (Vec::new(), Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => {
                ra.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                rb.push(b[j].clone());
                j += 1;
            }
        }
    }
    ra.extend_from_slice(&a[i..]);
    rb.extend_from_slice(&b[j..]);
    (ra, rb)
}

fn product(rank: usize, fs: &[TorusLaurent]) -> TorusLaurent {
    fs.iter().fold(TorusLaurent::one(rank), |acc, f| &acc * f)
}

impl PartialEq for TorusRational {
    /// a/b = c/d iff a·d = c·b after cancelling shared factors.
    fn eq(&self, other: &Self) -> bool {
        if self.rank() != other.rank() {
            return false;
        }
        let (ra, rb) = cancel_common(&self.den, &other.den);
        let lhs = &self.num * &product(self.rank(), &rb);
        let rhs = &other.num * &product(self.rank(), &ra);
        lhs == rhs
    }
}

impl Eq for TorusRational {}

impl std::ops::Mul for &TorusRational {
    type Output = TorusRational;
    fn mul(self, rhs: &TorusRational) -> TorusRational {
        let mut den: Vec<TorusLaurent> = self.den.iter().chain(&rhs.den).cloned().collect();
        den.sort();
        TorusRational {
            num: &self.num * &rhs.num,
            den,
        }
    }
}

impl std::ops::Add for &TorusRational {
    type Output = TorusRational;
    fn add(self, rhs: &TorusRational) -> TorusRational {
        let (ra, rb) = cancel_common(&self.den, &rhs.den);
        let rank = self.rank();
        let num = &(&self.num * &product(rank, &rb)) + &(&rhs.num * &product(rank, &ra));
        let mut den: Vec<TorusLaurent> = self.den.iter().chain(&rb).cloned().collect();
        den.sort();
        TorusRational { num, den }
    }
}

impl std::ops::Neg for &TorusRational {
    type Output = TorusRational;
    fn neg(self) -> TorusRational {
        TorusRational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl std::ops::Sub for &TorusRational {
    type Output = TorusRational;
    fn sub(self, rhs: &TorusRational) -> TorusRational {
        self + &(-rhs)
    }
}

impl From<TorusLaurent> for TorusRational {
    fn from(f: TorusLaurent) -> Self {
        Self::from_laurent(f)
    }
}

impl fmt::Display for TorusRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "[{}] / ", self.num)?;
        for (i, d) in self.den.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "[{d}]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TorusRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusRational({self})")
    }
}

/// Weyl twist: every exponent v ↦ action·v.
pub fn weyl_substitute(f: &TorusLaurent, action: &IMat) -> Result<TorusLaurent> {
    lattice::inverse_unimodular(action)?;
    f.map_exponents(action)
}

/// Exact value of f at t = t_value with the monomial values fixed on generators.
pub fn substitute_point(
    f: &TorusRational,
    t_value: &QRat,
    generators: &[(Vec<i64>, QRat)],
) -> Result<QRat> {
    let eval = |g: &TorusLaurent| -> Result<QRat> {
        let mut acc = QRat::zero();
        for (e, c) in g.terms() {
            let tv = c
                .eval(t_value)
                .ok_or_else(|| Error::PoleAtPoint("t = 0 in a negative power".into()))?;
            let coords = solve_integral(generators, e)?;
            let mut mv = QRat::one();
            for (n, (_, val)) in coords.iter().zip(generators) {
                mv *= qpow(val, *n)
                    .ok_or_else(|| Error::PoleAtPoint(format!("monomial {e:?} at zero")))?;
            }
            acc += tv * mv;
        }
        Ok(acc)
    };
    let mut den = QRat::one();
    for d in f.den_factors() {
        let v = eval(d)?;
        if v.is_zero() {
            return Err(Error::PoleAtPoint(format!("factor {d} vanishes")));
        }
        den *= v;
    }
    Ok(eval(f.numerator())? / den)
}

/// Integer coordinates of v in terms of linearly independent generators.
fn solve_integral(generators: &[(Vec<i64>, QRat)], v: &[i64]) -> Result<Vec<i64>> {
    let n = v.len();
    let k = generators.len();
    if lattice::is_zero(v) {
        return Ok(vec![0; k]);
    }
    let mut rows: Vec<Vec<QRat>> = (0..n)
        .map(|i| {
            let mut r: Vec<QRat> = generators
                .iter()
                .map(|(g, _)| QRat::from_integer(g[i].into()))
                .collect();
            r.push(QRat::from_integer(v[i].into()));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..n).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row, p);
        let inv = rows[row][col].recip();
        for x in rows[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                let pivot_row = rows[row].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot_row) {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if rows[row..].iter().any(|r| !r[k].is_zero()) {
        return Err(Error::Invalid(format!(
            "monomial {v:?} is outside the span of the assignment"
        )));
    }
    let mut out = vec![0; k];
    for (r, &c) in pivots.iter().enumerate() {
        let x = &rows[r][k];
        if !x.denom().is_one() {
            return Err(Error::Invalid(format!(
                "monomial {v:?} is not an integral combination of the assignment"
            )));
        }
        out[c] = x
            .numer()
            .try_into()
            .map_err(|_| Error::Invalid("overflow".into()))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qrat::{q, qi};
    use crate::exact::tpoly::tp;
    use proptest::prelude::*;

    fn e(v: i64) -> TorusLaurent {
        TorusLaurent::e(&[v])
    }

    #[test]
    fn point_examples() {
        let t2 = tp(&[(1, 2)]);
        let one = TorusLaurent::one(1);
        let f = TorusRational::new(
            &one - &e(2),
            vec![TorusLaurent::one_minus(t2.clone(), &[2])],
        )
        .unwrap();
        let at = vec![(vec![2], qi(1))];
        assert_eq!(substitute_point(&f, &q(1, 2), &at).unwrap(), qi(0));

        let g = TorusRational::new(one.clone(), vec![TorusLaurent::one_minus(t2, &[2])]).unwrap();
        let tv = q(1, 3);
        let pole = vec![(vec![2], q(9, 1))];
        assert!(matches!(
            substitute_point(&g, &tv, &pole),
            Err(Error::PoleAtPoint(_))
        ));

        let h = TorusRational::from_laurent(&e(2) + &e(-2));
        let at3 = vec![(vec![2], qi(3))];
        assert_eq!(substitute_point(&h, &q(1, 2), &at3).unwrap(), q(10, 3));
    }

    #[test]
    fn associated_factors_are_identified() {
        let t2 = tp(&[(1, 2)]);
        let a = TorusLaurent::one_minus(t2.clone(), &[2]);
        let b = TorusLaurent::one_minus(tp(&[(1, -2)]), &[-2]);
        let x = TorusRational::new(TorusLaurent::one(1), vec![a]).unwrap();
        let y = TorusRational::new(TorusLaurent::one(1), vec![b]).unwrap();
        assert_eq!(x.den_factors(), y.den_factors());
        let ratio = x.div(&y).unwrap().simplify();
        assert_eq!(
            ratio.as_laurent().unwrap(),
            TorusLaurent::monomial(vec![-2], tp(&[(-1, -2)]))
        );
    }

    #[test]
    fn cross_multiplication_equality() {
        let one = TorusLaurent::one(1);
        let x = TorusRational::new(&one - &e(4), vec![&one - &e(2)]).unwrap();
        let y = TorusRational::from_laurent(&one + &e(2));
        assert_eq!(x, y);
        assert_ne!(x, TorusRational::from_laurent(one));
    }

    fn arb_rational() -> impl Strategy<Value = TorusRational> {
        (
            crate::exact::laurent::tests::arb_laurent(1),
            prop::collection::vec((1i64..3, -2i64..3, prop::bool::ANY), 0..3),
        )
            .prop_map(|(n, dens)| {
                let dens = dens
                    .into_iter()
                    .map(|(k, v, s)| {
                        let c = if s { tp(&[(1, k)]) } else { tp(&[(-1, k)]) };
                        TorusLaurent::one_minus(c, &[if v == 0 { 1 } else { v }])
                    })
                    .collect();
                TorusRational::new(n, dens).unwrap()
            })
    }

    proptest! {
        #[test]
        fn point_evaluation_is_multiplicative(f in arb_rational(), g in arb_rational()) {
            let at = vec![(vec![1], q(3, 7))];
            let tv = q(2, 5);
            let fv = substitute_point(&f, &tv, &at).unwrap();
            let gv = substitute_point(&g, &tv, &at).unwrap();
            prop_assert_eq!(substitute_point(&(&f * &g), &tv, &at).unwrap(), fv * gv);
        }

        #[test]
        fn field_identities(f in arb_rational(), g in arb_rational()) {
            prop_assert_eq!(&(&f + &g) - &g, f.clone());
            prop_assume!(!g.is_zero());
            prop_assert_eq!((&f * &g).div(&g).unwrap(), f);
        }
    }
}
