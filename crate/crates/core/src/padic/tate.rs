//! Tate's local functional equation, Gauss sums and the Gauss circle sum.

use num_complex::Complex64;
use num_traits::Zero;

use super::shell::Measure1;
use super::verify::{battery_1d, OracleReport};
use super::{check_prime, e_frac, fourier_1d, legendre, StepFunction};
use crate::error::{Error, Result};
use crate::exact::qrat::{to_f64, QRat};

/// A character of k^× with χ(ϖ) = z, trivial or the Legendre symbol on units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TateCharacter {
    pub z: Complex64,
    pub ramified: bool,
}

impl TateCharacter {
    /// The character with χ(ϖ) = u².
    pub fn from_u(u: &QRat, ramified: bool) -> Self {
        let u = to_f64(u);
        Self {
            z: Complex64::new(u * u, 0.0),
            ramified,
        }
    }

    /// χ^{−1}|·|.
    pub fn dual(&self, p: u64) -> Self {
        Self {
            z: 1.0 / (self.z * p as f64),
            ramified: self.ramified,
        }
    }

    fn measure(&self) -> Measure1 {
        Measure1::multiplicative(self.z, self.ramified)
    }
}

fn pair_unchecked(chi: &TateCharacter, f: &StepFunction<Complex64>) -> Result<Complex64> {
    let w = chi.measure().weights(f.p, f.m, f.n)?;
    Ok(f.values().iter().zip(&w).map(|(a, b)| a * b).sum())
}

/// ⟨f, χ d^×x⟩ with Vol(𝔬^×) = 1.
pub fn tate_pair(chi: &TateCharacter, f: &StepFunction<Complex64>) -> Result<Complex64> {
    if f.dim != 1 {
        return Err(Error::Invalid(
            "tate_pair needs a one-dimensional function".into(),
        ));
    }
    if !chi.ramified && chi.z.norm() >= 1.0 && f.values()[0] != Complex64::zero() {
        return Err(Error::Invalid(format!(
            "the pairing diverges at χ(ϖ) = {}",
            chi.z
        )));
    }
    pair_unchecked(chi, f)
}

/// τ(χ) = Σ_{ε mod 𝔭} χ(ϖ^{−1}ε)ψ(ϖ^{−1}ε) for χ of conductor 𝔭.
pub fn gauss_sum(p: u64, chi: &TateCharacter) -> Result<Complex64> {
    check_prime(p)?;
    if !chi.ramified {
        return Err(Error::Invalid(
            "Gauss sums need a ramified character".into(),
        ));
    }
    let s: Complex64 = (1..p)
        .map(|e| e_frac(e, p) * legendre(e as i64, p) as f64)
        .sum();
    Ok(s / chi.z)
}

/// γ with F(χ d^×x) = γ·χ^{−1}|x| d^×x.
pub fn tate_factor(p: u64, chi: &TateCharacter) -> Result<Complex64> {
    let q = p as f64;
    if chi.ramified {
        Ok(gauss_sum(p, chi)? / q)
    } else {
        Ok((1.0 - 1.0 / (q * chi.z)) / (1.0 - chi.z))
    }
}

/// Checks ⟨χ d^×x, f̂⟩ = γ·⟨χ^{−1}|x| d^×x, f⟩ on a battery of coset indicators.
pub fn tate_verify(
    p: u64,
    chi: &TateCharacter,
    m: u32,
    n: u32,
    tolerance: f64,
) -> Result<OracleReport> {
    check_prime(p)?;
    let gamma = tate_factor(p, chi)?;
    let dual = chi.dual(p);
    let mut max_err: f64 = 0.0;
    let mut samples = 0;
    for cosets in battery_1d(p, m, n) {
        let f = StepFunction::<Complex64>::indicator(p, m, n, &cosets)?;
        let lhs = pair_unchecked(chi, &fourier_1d(&f)?)?;
        let rhs = gamma * pair_unchecked(&dual, &f)?;
        max_err = max_err.max(super::verify::rel_err(lhs, rhs));
        samples += 1;
    }
    let case = if chi.ramified {
        "tate-ramified"
    } else {
        "tate-unramified"
    };
    Ok(OracleReport::new(case, p, samples, max_err, tolerance))
}

/// ∫_{𝔬^×} η₂(κ + x²) dx for the Legendre character η₂.
pub fn gauss_circle(p: u64, kappa: i64) -> Result<QRat> {
    check_prime(p)?;
    if kappa.rem_euclid(p as i64) == 0 || legendre(-kappa, p) != -1 {
        return Err(Error::Invalid(format!(
            "κ = {kappa} is not a unit with −κ a non-square mod {p}"
        )));
    }
    let s: i64 = (1..p as i64).map(|x| legendre(kappa + x * x, p)).sum();
    Ok(QRat::new(s.into(), (p as i64).into()))
}
