//! Constant terms of geometric expansions.

use std::collections::HashMap;

use num_traits::{One, Signed};

use super::lattice;
use super::laurent::TorusLaurent;
use super::qrat::{qi, QRat};
use super::rational::TorusRational;
use super::tpoly::TPoly;
use crate::error::{Error, Result};

pub const DEFAULT_ORDER: i64 = 24;

/// One factor 1/(1 − σ t^{r2} e^{θ}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedDen {
    pub sign: i64,
    pub r2: i64,
    pub theta: Vec<i64>,
}

fn pair(ell: &[QRat], v: &[i64]) -> QRat {
    ell.iter()
        .zip(v)
        .map(|(a, b)| a * QRat::from_integer((*b).into()))
        .sum()
}

/// Exact constant term of numerator · ∏ 1/(1 − σ t^{r2} e^{θ}), each factor
/// expanded as a geometric series in e^{θ}; ℓ certifies ℓ(θ) ≥ 1 for every θ.
pub fn ct_exact(numerator: &TorusLaurent, dens: &[PointedDen], ell: &[QRat]) -> Result<TPoly> {
    let rank = numerator.rank();
    if ell.len() != rank {
        return Err(Error::Dimension {
            expected: rank,
            found: ell.len(),
        });
    }
    for d in dens {
        if d.theta.len() != rank {
            return Err(Error::Dimension {
                expected: rank,
                found: d.theta.len(),
            });
        }
        if pair(ell, &d.theta) < QRat::one() {
            return Err(Error::NotPointed(format!(
                "functional pairs to {} with {:?}",
                pair(ell, &d.theta),
                d.theta
            )));
        }
    }
    let mut states: HashMap<Vec<i64>, TPoly> = HashMap::new();
    for (e, c) in numerator.terms() {
        if !pair(ell, e).is_positive() {
            states.insert(e.to_vec(), c.clone());
        }
    }
    for d in dens {
        let mut next: HashMap<Vec<i64>, TPoly> = HashMap::new();
        let step = TPoly::monomial(qi(d.sign), d.r2);
        for (s, c) in states {
            let mut cur = s;
            let mut coef = c;
            while !pair(ell, &cur).is_positive() {
                let slot = next.entry(cur.clone()).or_insert_with(TPoly::zero);
                *slot = &*slot + &coef;
                cur = lattice::add(&cur, &d.theta);
                coef = &coef * &step;
            }
        }
        next.retain(|_, c| !c.is_zero());
        states = next;
    }
    Ok(states.remove(&vec![0; rank]).unwrap_or_else(TPoly::zero))
}

/// A denominator factor in geometric form unit · (1 − a t^{r} e^{θ}), r ≥ 1, or a torus constant.
enum SeriesFactor {
    Geometric { a: QRat, r: i64, theta: Vec<i64> },
    Constant(TPoly),
}

/// Writes factor = unit · (geometric form); returns the unit's inverse as (exponent, coefficient).
fn to_series_factor(f: &TorusLaurent) -> Result<((Vec<i64>, TPoly), SeriesFactor)> {
    let rank = f.rank();
    if let Some(c) = f.as_torus_constant() {
        let (c0, v) = c.lowest().expect("nonzero factor");
        let unit_inv = (vec![0; rank], TPoly::monomial(c0.recip(), -v));
        let normalized = c.shift(-v).scale(&c0.recip());
        return Ok((unit_inv, SeriesFactor::Constant(normalized)));
    }
    let bad = || Error::NotTAdic(format!("factor {f} is not a binomial 1 − a t^r e^θ"));
    if f.len() != 2 {
        return Err(bad());
    }
    let mut it = f.terms();
    let (e0, c0) = it.next().unwrap();
    let (e1, c1) = it.next().unwrap();
    let (c0, k0) = c0.as_monomial().ok_or_else(bad)?;
    let (c1, k1) = c1.as_monomial().ok_or_else(bad)?;
    if k0 == k1 {
        return Err(Error::NotTAdic(format!(
            "factor {f} has equal t-orders on both terms"
        )));
    }
    let ((eu, cu, ku), (eo, co, ko)) = if k0 < k1 {
        ((e0, c0, k0), (e1, c1, k1))
    } else {
        ((e1, c1, k1), (e0, c0, k0))
    };
    let unit_inv = (lattice::neg(eu), TPoly::monomial(cu.recip(), -ku));
    let theta = lattice::sub(eo, eu);
    let a = -(co / &cu);
    Ok((
        unit_inv,
        SeriesFactor::Geometric {
            a,
            r: ko - ku,
            theta,
        },
    ))
}

/// Series coefficients D_n (n = 0..=order) of ∏ 1/factor, each a Laurent polynomial on the torus.
fn expand(rank: usize, factors: &[SeriesFactor], order: i64) -> Result<Vec<TorusLaurent>> {
    let n = order.max(-1) + 1;
    let mut h: Vec<TorusLaurent> = (0..n)
        .map(|i| {
            if i == 0 {
                TorusLaurent::one(rank)
            } else {
                TorusLaurent::zero(rank)
            }
        })
        .collect();
    for f in factors {
        match f {
            SeriesFactor::Geometric { a, r, theta } => {
                let step = TPoly::constant(a.clone());
                for i in (*r as usize)..(n as usize) {
                    let prev = h[i - *r as usize].mul_monomial(theta, &step);
                    h[i] = &h[i] + &prev;
                }
            }
            SeriesFactor::Constant(p) => {
                let inv = p.inverse_series(order)?;
                let old = h.clone();
                for (i, slot) in h.iter_mut().enumerate() {
                    let mut acc = TorusLaurent::zero(rank);
                    for (k, c) in inv.terms() {
                        if k >= 0 && (k as usize) <= i {
                            acc = &acc + &old[i - k as usize].scale(&TPoly::constant(c.clone()));
                        }
                    }
                    *slot = acc;
                }
            }
        }
    }
    Ok(h)
}

/// Constant term in the torus variables of the t-adic expansion of f, through t^order.
pub fn ct_series(f: &TorusRational, order: i64) -> Result<TPoly> {
    let rank = f.rank();
    let mut num = f.numerator().clone();
    let mut factors = Vec::new();
    for d in f.den_factors() {
        let ((e, c), sf) = to_series_factor(d)?;
        num = num.mul_monomial(&e, &c);
        factors.push(sf);
    }
    let lo = num
        .terms()
        .filter_map(|(_, c)| c.min_deg())
        .min()
        .unwrap_or(0);
    let depth = order - lo;
    let series = expand(rank, &factors, depth)?;
    let mut out = TPoly::zero();
    for (e, c) in num.terms() {
        let target = lattice::neg(e);
        for (n, layer) in series.iter().enumerate() {
            let d = layer.coeff(&target);
            if !d.is_zero() {
                out = &out + &(c * &d.shift(n as i64));
            }
        }
    }
    Ok(out.truncate(order))
}

/// Sign of a rational as ±1.
pub fn sign_of(x: &QRat) -> i64 {
    if x.is_negative() {
        -1
    } else {
        1
    }
}
