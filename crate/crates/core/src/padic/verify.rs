//! Numeric check of F_{w_α}Δ = b·Δ' against the symbolic coefficients of the rank-one module.
//!
//! Symbol conventions per case, with u a rational sample and q = p:
//! - U, U-psi, T-nonsplit, N-nonintegral: u = q^{−s/2}; for U, U-psi and T-nonsplit
//!   q^{s+1} = e^{−α̌}(χ), so e^{α̌}(χ) = u²/q.
//! - N-nonintegral: q^{s/2} = q^{−1/2}·e^{−u⁺}(χ) on the extra coordinate u⁺.
//! - T-split: η_D(ϖ) = u and η_{D'}(ϖ) = `second`; unramified η_D(ϖ) = t^{k_D}e^{v̌_D}(χ),
//!   ramified q·η_D(ϖ)η_{D'}(ϖ) = e^{α̌}(χ).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::shell::{Density, Measure1, QuadForm, ShellMeasureParams};
use super::{check_prime, dist_pair, fourier_k2, Coset, StepFunction};
use crate::error::{Error, Result};
use crate::exact::lattice::{self, IVec};
use crate::exact::qrat::{q, qi, to_f64, QRat};
use crate::exact::rational::TorusRational;
use crate::exact::tpoly::TPoly;
use crate::rankone::{fe_coefficient, ratio_value, FeCase};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
const VANISHING: f64 = 1e-13;
/// Transforms of box indicators take values 0 or at least p^{−(m+n)} in modulus.
const CHOP: f64 = 1e-11;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub case: String,
    pub p: u64,
    pub samples: usize,
    pub max_rel_err: f64,
    pub pass: bool,
}

impl OracleReport {
    pub fn new(case: &str, p: u64, samples: usize, max_rel_err: f64, tolerance: f64) -> Self {
        Self {
            case: case.to_string(),
            p,
            samples,
            max_rel_err,
            pass: samples > 0 && max_rel_err < tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleParams {
    pub p: u64,
    pub m: u32,
    pub n: u32,
    pub samples: Vec<QRat>,
    pub second: QRat,
    pub kappa: Option<i64>,
}

impl OracleParams {
    pub fn new(p: u64, case: &FeCase) -> Self {
        let (m, n) = default_exponents(p, case);
        Self {
            p,
            m,
            n,
            samples: vec![q(1, 2), q(2, 3), q(3, 4)],
            second: q(2, 5),
            kappa: None,
        }
    }
}

/// Grid exponents (M, N) keeping each run well under a second.
pub fn default_exponents(p: u64, case: &FeCase) -> (u32, u32) {
    if matches!(case, FeCase::UPsi) {
        return (1, 1);
    }
    match p {
        3 => (2, 2),
        5 => (1, 2),
        _ => (1, 1),
    }
}

/// |a − b| / max(|a|, |b|), zero when both sides vanish.
pub(crate) fn rel_err(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale < VANISHING {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

fn centers(p: u64, m: u32) -> Vec<QRat> {
    let p = p as i64;
    let mut out = vec![qi(0), qi(1), qi(2), qi(1 + p), q(1, p)];
    if m >= 2 {
        out.push(q(1, p * p));
    }
    out.push(q(p - 1, p));
    out
}

/// Coset indicators in one variable covering every admissible level.
pub(crate) fn battery_1d(p: u64, m: u32, n: u32) -> Vec<Vec<Coset>> {
    let mut out = Vec::new();
    for (i, c) in centers(p, m).into_iter().enumerate() {
        for level in -(m as i64)..=(n as i64) {
            if (i as i64 + level).rem_euclid(2) == 0 {
                out.push(vec![Coset::new(c.clone(), level)]);
            }
        }
    }
    out
}

/// Box indicators on k².
pub(crate) fn battery_2d(p: u64, m: u32, n: u32) -> Vec<Vec<Coset>> {
    let cs = centers(p, m);
    let levels: Vec<i64> = (-(m as i64)..=(n as i64)).collect();
    let mut out = vec![
        vec![Coset::ball(0), Coset::ball(0)],
        vec![Coset::ball(1), Coset::ball(0)],
        vec![Coset::ball(0), Coset::ball(1)],
    ];
    for (i, cx) in cs.iter().enumerate() {
        let cy = &cs[(i * 3 + 1) % cs.len()];
        let lx = levels[i % levels.len()];
        let ly = levels[(i * 2 + 1) % levels.len()];
        out.push(vec![Coset::new(cx.clone(), lx), Coset::new(cy.clone(), ly)]);
    }
    out
}

/// Solves e = Σ c_i b_i over the reals; None when e is outside the span.
fn solve_span(e: &[i64], basis: &[IVec]) -> Option<Vec<f64>> {
    let k = basis.len();
    let mut gram = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = lattice::dot(&basis[i], &basis[j]) as f64;
        }
        gram[i][k] = lattice::dot(&basis[i], e) as f64;
    }
    for col in 0..k {
        let piv = (col..k).max_by(|a, b| gram[*a][col].abs().total_cmp(&gram[*b][col].abs()))?;
        if gram[piv][col].abs() < 1e-12 {
            return None;
        }
        gram.swap(col, piv);
        for r in 0..k {
            if r != col {
                let f = gram[r][col] / gram[col][col];
                for c in col..=k {
                    gram[r][c] -= f * gram[col][c];
                }
            }
        }
    }
    let c: Vec<f64> = (0..k).map(|i| gram[i][k] / gram[i][i]).collect();
    let resid = e.iter().enumerate().all(|(d, x)| {
        let y: f64 = basis.iter().zip(&c).map(|(b, ci)| b[d] as f64 * ci).sum();
        (y - *x as f64).abs() < 1e-9
    });
    resid.then_some(c)
}

/// Value of a torus rational function at t and at the point where e^{b_i} takes the given values.
pub fn eval_on_basis(f: &TorusRational, t: f64, basis: &[(IVec, Complex64)]) -> Result<Complex64> {
    let vectors: Vec<IVec> = basis.iter().map(|(b, _)| b.clone()).collect();
    let tpoly = |c: &TPoly| -> Complex64 {
        c.terms()
            .map(|(k, x)| Complex64::new(to_f64(x) * t.powi(k as i32), 0.0))
            .sum()
    };
    let laurent = |l: &crate::exact::laurent::TorusLaurent| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in l.terms() {
            let coeffs = solve_span(e, &vectors).ok_or_else(|| {
                Error::Oracle(format!("exponent {e:?} is outside the sampled span"))
            })?;
            let mono: Complex64 = basis
                .iter()
                .zip(&coeffs)
                .map(|((_, v), ci)| {
                    if *ci == 0.0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        v.powf(*ci)
                    }
                })
                .product();
            acc += tpoly(c) * mono;
        }
        Ok(acc)
    };
    let mut value = laurent(f.numerator())?;
    for d in f.den_factors() {
        value /= laurent(d)?;
    }
    Ok(value)
}

struct Model {
    before: Density,
    after: Density,
    b: Complex64,
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn model(case: &FeCase, params: &OracleParams, u: f64) -> Result<Model> {
    let p = params.p;
    let qf = p as f64;
    let t = qf.powf(-0.5);
    let rank_one = vec![2];
    let alpha_value = c(u * u / qf);
    let unram = |z: f64| Measure1::multiplicative(c(z), false);
    let ram = |z: f64| Measure1::multiplicative(c(z), true);
    let coefficient = |alpha: &[i64], basis: &[(IVec, Complex64)]| -> Result<Complex64> {
        eval_on_basis(&fe_coefficient(case, alpha)?, t, basis)
    };
    let quadratic = |form: QuadForm, ramified: bool| -> Result<(Density, Density)> {
        let sp = ShellMeasureParams { p, form, ramified };
        sp.check()?;
        Ok((
            Density::Quadratic {
                params: sp,
                u: c(u),
            },
            Density::Quadratic {
                params: sp,
                u: c(qf / u),
            },
        ))
    };
    let nonsplit = || {
        params
            .kappa
            .map_or(QuadForm::default_nonsplit(p), |k| QuadForm::Nonsplit {
                kappa: k,
            })
    };
    let second = to_f64(&params.second);
    match case {
        FeCase::ULower => Ok(Model {
            before: Density::Product(Measure1::power_dx(p, c(u * u)), Measure1::additive(p)),
            after: Density::Product(Measure1::Delta0, Measure1::power_dx(p, c(qf / (u * u)))),
            b: coefficient(&rank_one, &[(rank_one.clone(), alpha_value)])?,
        }),
        FeCase::URaise => Ok(Model {
            before: Density::Product(Measure1::Delta0, Measure1::power_dx(p, c(u * u / qf))),
            after: Density::Product(
                Measure1::power_dx(p, c(qf * qf / (u * u))),
                Measure1::additive(p),
            ),
            b: coefficient(&rank_one, &[(rank_one.clone(), alpha_value)])?,
        }),
        FeCase::UPsi => Ok(Model {
            before: Density::Whittaker { w: c(u * u) },
            after: Density::Whittaker {
                w: c(qf * qf / (u * u)),
            },
            b: coefficient(&rank_one, &[(rank_one.clone(), alpha_value)])?,
        }),
        FeCase::TSplitUnram {
            v_d,
            k_d,
            v_dp,
            k_dp,
        } => {
            let alpha = lattice::add(v_d, v_dp);
            let basis = [
                (v_d.clone(), c(u / t.powi(*k_d as i32))),
                (v_dp.clone(), c(second / t.powi(*k_dp as i32))),
            ];
            Ok(Model {
                before: Density::Product(unram(u), unram(second)),
                after: Density::Product(unram(1.0 / (qf * second)), unram(1.0 / (qf * u))),
                b: coefficient(&alpha, &basis)?,
            })
        }
        FeCase::TSplitRam { m } => {
            if *m != 1 {
                return Err(Error::Oracle("only conductor 𝔭 is modeled".into()));
            }
            Ok(Model {
                before: Density::Product(ram(u), ram(second)),
                after: Density::Product(ram(1.0 / (qf * second)), ram(1.0 / (qf * u))),
                b: coefficient(&rank_one, &[(rank_one.clone(), c(qf * u * second))])?,
            })
        }
        FeCase::TNonsplitUnram | FeCase::TNonsplitRam => {
            let (before, after) = quadratic(nonsplit(), matches!(case, FeCase::TNonsplitRam))?;
            Ok(Model {
                before,
                after,
                b: coefficient(&rank_one, &[(rank_one.clone(), alpha_value)])?,
            })
        }
        FeCase::NNonintegral { ratio } => {
            let (before, after) = quadratic(QuadForm::Nonintegral, false)?;
            let r = to_f64(&ratio_value(ratio)?);
            let b = coefficient(&[2], &[(vec![0, 1], c(t * u))])? / r;
            Ok(Model { before, after, b })
        }
        other => Err(Error::Oracle(format!(
            "case {} has no local model in the oracle",
            other.tag()
        ))),
    }
}

/// Checks ⟨Δ, F f⟩ = b·⟨Δ', f⟩ over a battery of box indicators and every u sample.
pub fn verify_case(case: &FeCase, params: &OracleParams, tolerance: f64) -> Result<OracleReport> {
    check_prime(params.p)?;
    if params.m == 0 || params.n == 0 {
        return Err(Error::Oracle(
            "support and smoothness exponents must be at least 1; increase M and N".into(),
        ));
    }
    if params.samples.is_empty() {
        return Err(Error::Oracle("no u samples".into()));
    }
    let battery = battery_2d(params.p, params.m, params.n);
    let mut pairs = Vec::with_capacity(battery.len());
    for boxes in &battery {
        let f = StepFunction::<Complex64>::indicator(params.p, params.m, params.n, boxes)?;
        let ff = fourier_k2(&f)?.chop(CHOP);
        pairs.push((f, ff));
    }
    let mut max_err: f64 = 0.0;
    let mut samples = 0;
    let mut nonvanishing = 0;
    for u in &params.samples {
        let uf = to_f64(u);
        if uf <= 0.0 {
            return Err(Error::Oracle(format!("sample u = {u} is not positive")));
        }
        let md = model(case, params, uf)?;
        for (f, ff) in &pairs {
            let lhs = dist_pair(&md.before, ff)?;
            let rhs = md.b * dist_pair(&md.after, f)?;
            if lhs.norm().max(rhs.norm()) >= VANISHING {
                nonvanishing += 1;
            }
            max_err = max_err.max(rel_err(lhs, rhs));
            samples += 1;
        }
    }
    if nonvanishing == 0 {
        return Err(Error::Oracle(
            "every pairing vanished; enlarge the battery".into(),
        ));
    }
    Ok(OracleReport::new(
        case.tag(),
        params.p,
        samples,
        max_err,
        tolerance,
    ))
}
