//! Brute-force p-adic integration on finite grids for the rank-one identities.
//!
//! A point of ϖ^{−m}𝔬 modulo ϖ^{n} is stored as an integer a ∈ [0, p^{m+n}) standing for a·p^{−m}.

mod fourier;
mod shell;
mod tate;
mod verify;

pub use fourier::{fourier_1d, fourier_k2, fourier_k2_with, DEFAULT_GRID_CAP};
pub use shell::{
    dist_pair, dist_pair_exact, eval_trat, unit_ball_integral, Density, Measure1, QuadForm,
    ShellMeasureParams,
};
pub use tate::{gauss_circle, gauss_sum, tate_factor, tate_pair, tate_verify, TateCharacter};
pub use verify::{
    default_exponents, eval_on_basis, verify_case, OracleParams, OracleReport, DEFAULT_TOLERANCE,
};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::qrat::QRat;

/// A locally constant function on ϖ^{−m}𝔬^{dim}, constant on ϖ^{n}𝔬^{dim}-cosets.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction<V> {
    pub p: u64,
    pub dim: usize,
    pub m: u32,
    pub n: u32,
    values: Vec<V>,
}

/// The coset center + ϖ^{level}𝔬, with center ∈ ℤ[1/p].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    pub center: QRat,
    pub level: i64,
}

impl Coset {
    pub fn new(center: QRat, level: i64) -> Self {
        Self { center, level }
    }

    pub fn ball(level: i64) -> Self {
        Self::new(QRat::zero(), level)
    }
}

impl<V: Clone + Zero> StepFunction<V> {
    pub fn zero(p: u64, dim: usize, m: u32, n: u32) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::Invalid(format!("dimension {dim} is not 1 or 2")));
        }
        check_prime(p)?;
        let side = side_len(p, m, n)?;
        let total = side
            .checked_pow(dim as u32)
            .ok_or_else(|| Error::CapExceeded("grid size overflows".into()))?;
        if total > DEFAULT_GRID_CAP as u64 {
            return Err(Error::CapExceeded(format!(
                "grid of {total} points exceeds {DEFAULT_GRID_CAP}"
            )));
        }
        Ok(Self {
            p,
            dim,
            m,
            n,
            values: vec![V::zero(); total as usize],
        })
    }

    pub fn from_values(p: u64, dim: usize, m: u32, n: u32, values: Vec<V>) -> Result<Self> {
        let mut f = Self::zero(p, dim, m, n)?;
        if values.len() != f.values.len() {
            return Err(Error::Invalid(format!(
                "expected {} values, found {}",
                f.values.len(),
                values.len()
            )));
        }
        f.values = values;
        Ok(f)
    }

    /// Number of grid points per coordinate, p^{m+n}.
    pub fn side(&self) -> usize {
        (self.p as usize).pow(self.m + self.n)
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn get(&self, idx: &[usize]) -> &V {
        &self.values[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: V) {
        let k = self.flat(idx);
        self.values[k] = v;
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, i| acc * self.side() + i)
    }

    /// Maps every value through f.
    pub fn map<W: Clone + Zero>(&self, f: impl Fn(&V) -> W) -> StepFunction<W> {
        StepFunction {
            p: self.p,
            dim: self.dim,
            m: self.m,
            n: self.n,
            values: self.values.iter().map(f).collect(),
        }
    }
}

impl<V: Clone + Zero + One> StepFunction<V> {
    /// Indicator of a product of cosets, one per coordinate.
    pub fn indicator(p: u64, m: u32, n: u32, boxes: &[Coset]) -> Result<Self> {
        let mut f = Self::zero(p, boxes.len(), m, n)?;
        let members: Vec<Vec<bool>> = boxes
            .iter()
            .map(|c| coset_members(p, m, n, c))
            .collect::<Result<_>>()?;
        let side = f.side();
        for (k, slot) in f.values.iter_mut().enumerate() {
            let (i, j) = if boxes.len() == 2 {
                (k / side, k % side)
            } else {
                (k, 0)
            };
            let inside = members[0][i] && (boxes.len() == 1 || members[1][j]);
            if inside {
                *slot = V::one();
            }
        }
        Ok(f)
    }
}

impl StepFunction<Complex64> {
    pub fn from_rational(f: &StepFunction<QRat>) -> Self {
        f.map(|v| Complex64::new(crate::exact::qrat::to_f64(v), 0.0))
    }

    /// Zeroes every value below eps times the largest modulus.
    pub fn chop(mut self, eps: f64) -> Self {
        let top = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for v in &mut self.values {
            if v.norm() < eps * top {
                *v = Complex64::zero();
            }
        }
        self
    }

    /// Maximum absolute difference of values on a common grid.
    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        if (self.p, self.dim, self.m, self.n) != (other.p, other.dim, other.m, other.n) {
            return Err(Error::Invalid(
                "step functions live on different grids".into(),
            ));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Membership of every grid point of one coordinate in the coset.
fn coset_members(p: u64, m: u32, n: u32, c: &Coset) -> Result<Vec<bool>> {
    if c.level > n as i64 {
        return Err(Error::Invalid(format!(
            "coset level {} is finer than the smoothness exponent {n}",
            c.level
        )));
    }
    if c.level < -(m as i64) {
        return Err(Error::Invalid(format!(
            "coset level {} exceeds the support exponent {m}",
            c.level
        )));
    }
    let scaled = &c.center * QRat::from_integer((p as i64).pow(m).into());
    if !scaled.is_integer() {
        return Err(Error::Invalid(format!(
            "coset center {} is outside ϖ^-{m}𝔬",
            c.center
        )));
    }
    let big: i128 = scaled
        .to_integer()
        .try_into()
        .map_err(|_| Error::Invalid("coset center too large".into()))?;
    let modulus = (p as i128).pow((c.level + m as i64) as u32);
    let side = side_len(p, m, n)? as i128;
    Ok((0..side)
        .map(|a| (a - big).rem_euclid(modulus) == 0)
        .collect())
}

pub(crate) fn side_len(p: u64, m: u32, n: u32) -> Result<u64> {
    p.checked_pow(m + n)
        .ok_or_else(|| Error::CapExceeded("grid size overflows".into()))
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if p < 3 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        return Err(Error::Invalid(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// p-adic valuation of a nonzero integer.
pub(crate) fn val(mut a: u64, p: u64) -> u32 {
    let mut v = 0;
    while a.is_multiple_of(p) {
        a /= p;
        v += 1;
    }
    v
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Legendre symbol (a/p) for a prime to p.
pub(crate) fn legendre(a: i64, p: u64) -> i64 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Inverse of a unit modulo m.
pub(crate) fn inv_mod(a: u64, m: u64) -> u64 {
    use num_integer::Integer;
    let e = (a as i128).extended_gcd(&(m as i128));
    e.x.rem_euclid(m as i128) as u64
}

/// exp(2πi·k/modulus).
pub(crate) fn e_frac(k: u64, modulus: u64) -> Complex64 {
    let x = std::f64::consts::TAU * (k % modulus) as f64 / modulus as f64;
    Complex64::new(x.cos(), x.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qrat::q;

    #[test]
    fn indicator_membership() {
        let f: StepFunction<QRat> =
            StepFunction::indicator(3, 1, 1, &[Coset::ball(1), Coset::ball(0)]).unwrap();
        let ones = f.values().iter().filter(|v| v.is_one()).count();
        assert_eq!(ones, 3);
        let g: StepFunction<QRat> =
            StepFunction::indicator(3, 1, 1, &[Coset::new(q(1, 3), 0)]).unwrap();
        assert_eq!(*g.get(&[1]), QRat::one());
        assert_eq!(*g.get(&[4]), QRat::one());
        assert_eq!(*g.get(&[0]), QRat::zero());
        assert!(StepFunction::<QRat>::indicator(3, 1, 1, &[Coset::ball(2)]).is_err());
        assert!(StepFunction::<QRat>::indicator(3, 1, 1, &[Coset::new(q(1, 9), 0)]).is_err());
    }

    #[test]
    fn arithmetic_helpers() {
        assert_eq!(val(18, 3), 2);
        assert_eq!(legendre(2, 3), -1);
        assert_eq!(legendre(-1, 5), 1);
        assert_eq!(inv_mod(2, 9), 5);
        assert!(check_prime(9).is_err());
        assert!(check_prime(2).is_err());
        assert!(check_prime(7).is_ok());
    }
}
