//! Pairings of eigen-distributions on k² with grid step functions, by shell decomposition.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{check_prime, e_frac, inv_mod, legendre, val, StepFunction};
use crate::error::{Error, Result};
use crate::exact::qrat::{qi, to_f64, QRat};
use crate::exact::tpoly::{TPoly, TRat};

const WHITTAKER_CAP: u64 = 50_000_000;

/// A measure on k: the point mass at 0, or scale·χ(x)d^×x with χ(ϖ) = z,
/// χ trivial or the Legendre symbol on units, and Vol(𝔬^×) = 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Measure1 {
    Delta0,
    Mult {
        z: Complex64,
        ramified: bool,
        scale: Complex64,
    },
}

impl Measure1 {
    pub fn multiplicative(z: Complex64, ramified: bool) -> Self {
        Measure1::Mult {
            z,
            ramified,
            scale: Complex64::one(),
        }
    }

    /// |x|^s dx with w = q^{−s}.
    pub fn power_dx(p: u64, w: Complex64) -> Self {
        let q = p as f64;
        Measure1::Mult {
            z: w / q,
            ramified: false,
            scale: Complex64::new(1.0 - 1.0 / q, 0.0),
        }
    }

    /// The additive Haar measure with Vol(𝔬) = 1.
    pub fn additive(p: u64) -> Self {
        Self::power_dx(p, Complex64::one())
    }

    /// Mass of every grid cell of one coordinate; the cell at 0 carries the closed-form tail.
    pub fn weights(&self, p: u64, m: u32, n: u32) -> Result<Vec<Complex64>> {
        let side = (p as usize).pow(m + n);
        match *self {
            Measure1::Delta0 => Ok((0..side)
                .map(|a| {
                    if a == 0 {
                        Complex64::one()
                    } else {
                        Complex64::zero()
                    }
                })
                .collect()),
            Measure1::Mult { z, ramified, scale } => {
                let q = p as f64;
                let origin = if ramified {
                    Complex64::zero()
                } else {
                    if (Complex64::one() - z).norm() < 1e-300 {
                        return Err(Error::PoleAtPoint("χ(ϖ) = 1".into()));
                    }
                    scale * z.powi(n as i32) / (Complex64::one() - z)
                };
                Ok((0..side as u64)
                    .map(|a| {
                        if a == 0 {
                            return origin;
                        }
                        let v = val(a, p);
                        let k = v as i32 - m as i32;
                        let unit = (a / p.pow(v)) % p;
                        let eta = if ramified {
                            legendre(unit as i64, p) as f64
                        } else {
                            1.0
                        };
                        scale * z.powi(k) * eta * q.powi(k - n as i32) / (1.0 - 1.0 / q)
                    })
                    .collect())
            }
        }
    }
}

/// Anisotropic binary forms: x² + κy² with −κ a non-square unit, or x² + ϖy².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadForm {
    Nonsplit { kappa: i64 },
    Nonintegral,
}

impl QuadForm {
    pub fn check(&self, p: u64) -> Result<()> {
        if let QuadForm::Nonsplit { kappa } = self {
            if kappa.rem_euclid(p as i64) == 0 || legendre(-kappa, p) != -1 {
                return Err(Error::Invalid(format!(
                    "κ = {kappa} is not a unit with −κ a non-square mod {p}"
                )));
            }
        }
        Ok(())
    }

    /// The smallest positive κ with −κ a non-square mod p.
    pub fn default_nonsplit(p: u64) -> Self {
        let kappa = (1..p as i64).find(|k| legendre(-k, p) == -1).unwrap_or(1);
        QuadForm::Nonsplit { kappa }
    }
}

/// Integrand η₂(Q)|Q|^{s/2} dx dy, η₂ trivial or the Legendre symbol on units with η₂(ϖ) = 1;
/// pairings are rational functions of the symbol u = q^{−s/2}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellMeasureParams {
    pub p: u64,
    pub form: QuadForm,
    pub ramified: bool,
}

impl ShellMeasureParams {
    pub fn check(&self) -> Result<()> {
        check_prime(self.p)?;
        self.form.check(self.p)?;
        if self.ramified && self.form == QuadForm::Nonintegral {
            return Err(Error::Invalid(
                "ramified characters on the non-integral form are not supported".into(),
            ));
        }
        Ok(())
    }
}

/// An eigen-distribution on k².
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Density {
    Product(Measure1, Measure1),
    Quadratic {
        params: ShellMeasureParams,
        u: Complex64,
    },
    /// |x|^s ψ^{−1}(y/x) dx dy with w = q^{−s}.
    Whittaker {
        w: Complex64,
    },
}

/// Sign class and valuation of Q on the cell (a, b) off the origin.
fn quad_class(params: &ShellMeasureParams, m: u32, a: u64, b: u64) -> (i64, i64) {
    let p = params.p;
    let va = if a == 0 { u32::MAX } else { val(a, p) };
    let vb = if b == 0 { u32::MAX } else { val(b, p) };
    match params.form {
        QuadForm::Nonsplit { kappa } => {
            let k = va.min(vb);
            let unit = |x: u64, v: u32| if v == k { (x / p.pow(k)) % p } else { 0 };
            let (x, y) = (unit(a, va) as i64, unit(b, vb) as i64);
            let e = 2 * (k as i64 - m as i64);
            let sign = if params.ramified {
                legendre(x * x + kappa * y * y, p)
            } else {
                1
            };
            (sign, e)
        }
        QuadForm::Nonintegral => {
            let ex = if a == 0 {
                i64::MAX
            } else {
                2 * (va as i64 - m as i64)
            };
            let ey = if b == 0 {
                i64::MAX
            } else {
                2 * (vb as i64 - m as i64) + 1
            };
            (1, ex.min(ey))
        }
    }
}

/// ∫_{𝔬²} η₂(Q)|Q|^{s/2} as a rational function of u, from the unit shell and self-similarity.
pub fn unit_ball_integral(params: &ShellMeasureParams) -> Result<TRat> {
    params.check()?;
    let p = params.p;
    let mut shell = TPoly::zero();
    for a in 0..p {
        for b in 0..p {
            if a == 0 && b == 0 {
                continue;
            }
            let (sign, e) = quad_class(params, 0, a, b);
            shell.add_term(e, QRat::new(sign.into(), (p * p).into()));
        }
    }
    let scaling = TPoly::from_terms([(0, qi(1)), (2, -QRat::new(1.into(), (p * p).into()))]);
    TRat::new(shell, scaling)
}

/// Collects Σ g·sign by valuation, plus the value at the origin cell.
fn quad_buckets<V: Clone + Zero>(
    params: &ShellMeasureParams,
    g: &StepFunction<V>,
    add: impl Fn(&mut V, &V, i64),
    zero: V,
) -> Result<(BTreeMap<i64, V>, V)> {
    params.check()?;
    if g.dim != 2 || g.p != params.p {
        return Err(Error::Invalid(
            "quadratic pairing needs a step function on k²".into(),
        ));
    }
    let side = g.side() as u64;
    let mut buckets: BTreeMap<i64, V> = BTreeMap::new();
    for a in 0..side {
        for b in 0..side {
            if a == 0 && b == 0 {
                continue;
            }
            let v = g.get(&[a as usize, b as usize]);
            let (sign, e) = quad_class(params, g.m, a, b);
            if sign == 0 {
                continue;
            }
            let slot = buckets.entry(e).or_insert_with(|| zero.clone());
            add(slot, v, sign);
        }
    }
    Ok((buckets, g.get(&[0, 0]).clone()))
}

/// Exact pairing ⟨η₂(Q)|Q|^{s/2}dxdy, f⟩ as a rational function of u = q^{−s/2}.
pub fn dist_pair_exact(params: &ShellMeasureParams, f: &StepFunction<QRat>) -> Result<TRat> {
    let (buckets, origin) = quad_buckets(params, f, |s, v, sign| *s += v * qi(sign), QRat::zero())?;
    let p = params.p;
    let cell = QRat::new(1.into(), num_bigint::BigInt::from(p).pow(2 * f.n));
    let mut poly = TPoly::zero();
    for (e, c) in buckets {
        poly.add_term(e, c * &cell);
    }
    let head = TRat::from_poly(poly);
    if origin.is_zero() {
        return Ok(head);
    }
    let tail = &unit_ball_integral(params)?
        * &TRat::from_poly(TPoly::monomial(origin * cell, 2 * f.n as i64));
    Ok(&head + &tail)
}

/// Value of a rational function in one variable at a complex point.
pub fn eval_trat(r: &TRat, x: Complex64) -> Complex64 {
    let ev = |p: &TPoly| {
        p.terms()
            .map(|(k, c)| x.powi(k as i32) * to_f64(c))
            .sum::<Complex64>()
    };
    ev(r.num()) / ev(r.den())
}

fn pair_quadratic(
    params: &ShellMeasureParams,
    u: Complex64,
    g: &StepFunction<Complex64>,
) -> Result<Complex64> {
    let (buckets, origin) = quad_buckets(
        params,
        g,
        |s, v, sign| *s += v * sign as f64,
        Complex64::zero(),
    )?;
    let cell = (params.p as f64).powi(-2 * g.n as i32);
    let mut acc: Complex64 = buckets
        .into_iter()
        .map(|(e, c)| c * u.powi(e as i32))
        .sum::<Complex64>()
        * cell;
    if origin != Complex64::zero() {
        let i0 = eval_trat(&unit_ball_integral(params)?, u);
        acc += origin * cell * u.powi(2 * g.n as i32) * i0;
    }
    Ok(acc)
}

fn pair_whittaker(w: Complex64, g: &StepFunction<Complex64>) -> Result<Complex64> {
    let (p, m, n) = (g.p, g.m, g.n);
    let side = g.side() as u64;
    let fine = m + 2 * n;
    let xs = p.pow(m + fine);
    if xs.saturating_mul(side) > WHITTAKER_CAP {
        return Err(Error::CapExceeded(format!(
            "Whittaker pairing needs {} terms; lower m or n",
            xs * side
        )));
    }
    let weight = (p as f64).powi(-(fine as i32) - n as i32);
    let mut acc = Complex64::zero();
    for big_a in 1..xs {
        let v = val(big_a, p);
        let k = v as i32 - m as i32;
        if k > n as i32 {
            continue;
        }
        let a = (big_a % side) as usize;
        let modulus = p.pow(v);
        let eps_inv = if v == 0 {
            0
        } else {
            inv_mod((big_a / modulus) % modulus, modulus)
        };
        let mut inner = Complex64::zero();
        for b in 0..side {
            let gv = g.get(&[a, b as usize]);
            if *gv == Complex64::zero() {
                continue;
            }
            let phase = if v == 0 {
                0
            } else {
                modulus - ((b % modulus) * eps_inv) % modulus
            };
            inner += gv * e_frac(phase, modulus.max(1));
        }
        acc += inner * w.powi(k);
    }
    Ok(acc * weight)
}

/// ⟨Δ, g⟩ for a step function g on k².
pub fn dist_pair(d: &Density, g: &StepFunction<Complex64>) -> Result<Complex64> {
    if g.dim != 2 {
        return Err(Error::Invalid("distributions live on k²".into()));
    }
    match d {
        Density::Product(mx, my) => {
            let wx = mx.weights(g.p, g.m, g.n)?;
            let wy = my.weights(g.p, g.m, g.n)?;
            let side = g.side();
            let mut acc = Complex64::zero();
            for (a, x) in wx.iter().enumerate() {
                if *x == Complex64::zero() {
                    continue;
                }
                let row: Complex64 = (0..side).map(|b| g.get(&[a, b]) * wy[b]).sum();
                acc += row * x;
            }
            Ok(acc)
        }
        Density::Quadratic { params, u } => pair_quadratic(params, *u, g),
        Density::Whittaker { w } => pair_whittaker(*w, g),
    }
}

#[cfg(test)]
mod tests {
    use super::super::Coset;
    use super::*;
    use crate::exact::qrat::q;

    fn nonsplit(p: u64, ramified: bool) -> ShellMeasureParams {
        ShellMeasureParams {
            p,
            form: QuadForm::default_nonsplit(p),
            ramified,
        }
    }

    fn box2(p: u64, m: u32, n: u32, x: Coset, y: Coset) -> StepFunction<QRat> {
        StepFunction::indicator(p, m, n, &[x, y]).unwrap()
    }

    #[test]
    fn nonsplit_unit_ball() {
        for p in [3, 5, 7] {
            let params = nonsplit(p, false);
            let f = box2(p, 1, 2, Coset::ball(0), Coset::ball(0));
            let got = dist_pair_exact(&params, &f).unwrap();
            let q2 = QRat::new(1.into(), (p * p).into());
            let expected = TRat::new(
                TPoly::constant(QRat::one() - &q2),
                TPoly::from_terms([(0, qi(1)), (2, -q2)]),
            )
            .unwrap();
            assert_eq!(got, expected);
        }
        let got = dist_pair_exact(
            &nonsplit(3, false),
            &box2(3, 1, 1, Coset::ball(0), Coset::ball(0)),
        )
        .unwrap();
        assert_eq!(got.eval(&q(1, 3)), Some(q(9, 10)));
    }

    #[test]
    fn nonsplit_ramified_values() {
        for p in [3, 5, 7] {
            let params = nonsplit(p, true);
            let kappa = match params.form {
                QuadForm::Nonsplit { kappa } => kappa,
                _ => unreachable!(),
            };
            let ball = box2(p, 1, 2, Coset::ball(0), Coset::ball(0));
            assert!(dist_pair_exact(&params, &ball).unwrap().is_zero());
            let outer = box2(p, 1, 2, Coset::ball(1), Coset::ball(0));
            let inner = box2(p, 1, 2, Coset::ball(1), Coset::ball(1));
            let diff: Vec<QRat> = outer
                .values()
                .iter()
                .zip(inner.values())
                .map(|(a, b)| a - b)
                .collect();
            let phi = StepFunction::from_values(p, 2, 1, 2, diff).unwrap();
            let got = dist_pair_exact(&params, &phi).unwrap();
            let qq = QRat::from_integer(p.into());
            let expected = (QRat::one() - qq.recip()) / &qq * qi(legendre(kappa, p));
            assert_eq!(got, TRat::from_poly(TPoly::constant(expected)));
        }
    }

    #[test]
    fn nonintegral_unit_ball() {
        for p in [3, 5] {
            let params = ShellMeasureParams {
                p,
                form: QuadForm::Nonintegral,
                ramified: false,
            };
            let got =
                dist_pair_exact(&params, &box2(p, 1, 2, Coset::ball(0), Coset::ball(0))).unwrap();
            let qinv = QRat::new(1.into(), p.into());
            let expected = TRat::new(
                TPoly::constant(QRat::one() - &qinv),
                TPoly::from_terms([(0, qi(1)), (1, -qinv)]),
            )
            .unwrap();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn bad_parameters_rejected() {
        let bad = ShellMeasureParams {
            p: 5,
            form: QuadForm::Nonsplit { kappa: 1 },
            ramified: false,
        };
        assert!(bad.check().is_err());
        let n_ram = ShellMeasureParams {
            p: 3,
            form: QuadForm::Nonintegral,
            ramified: true,
        };
        assert!(n_ram.check().is_err());
    }

    fn qval(x: &QRat, p: i64) -> i32 {
        let count = |mut n: num_bigint::BigInt| {
            let mut v = 0;
            while (&n % p).is_zero() {
                n /= p;
                v += 1;
            }
            v
        };
        count(x.numer().clone()) - count(x.denom().clone())
    }

    #[test]
    fn shell_sum_matches_brute_force() {
        let params = nonsplit(5, false);
        let u = Complex64::new(0.4, 0.0);
        let (bx, by) = (Coset::ball(-1), Coset::new(qi(1), 1));
        let f = box2(5, 1, 1, bx.clone(), by.clone());
        let exact = eval_trat(&dist_pair_exact(&params, &f).unwrap(), u);
        let fine = box2(5, 1, 3, bx, by);
        let side = fine.side() as i64;
        let mut brute = Complex64::zero();
        for a in 0..side {
            for b in 0..side {
                if fine.get(&[a as usize, b as usize]).is_zero() {
                    continue;
                }
                let x = QRat::new(a.into(), 5.into());
                let y = QRat::new(b.into(), 5.into());
                let qv = &x * &x + &y * &y * qi(2);
                brute += u.powi(qval(&qv, 5)) * 5f64.powi(-6);
            }
        }
        assert!((exact - brute).norm() < 1e-12 * brute.norm());
    }

    #[test]
    fn equivariance_under_scaling() {
        let params = nonsplit(3, false);
        let u = Complex64::new(0.3, 0.0);
        let f = box2(3, 2, 2, Coset::new(qi(1), 1), Coset::ball(0));
        let scaled = box2(3, 2, 2, Coset::new(q(1, 3), 0), Coset::ball(-1));
        let d = Density::Quadratic { params, u };
        let a = dist_pair(&d, &StepFunction::from_rational(&f)).unwrap();
        let b = dist_pair(&d, &StepFunction::from_rational(&scaled)).unwrap();
        assert!((b - a * 9.0 / (u * u)).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn product_measures() {
        let tate = Measure1::multiplicative(Complex64::new(0.5, 0.0), false);
        let d = Density::Product(tate, Measure1::additive(3));
        let f = box2(3, 1, 2, Coset::ball(0), Coset::ball(0));
        let got = dist_pair(&d, &StepFunction::from_rational(&f)).unwrap();
        assert!((got - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        let delta = Density::Product(Measure1::Delta0, Measure1::additive(3));
        let got = dist_pair(&delta, &StepFunction::from_rational(&f)).unwrap();
        assert!((got - Complex64::one()).norm() < 1e-12);
    }
}
