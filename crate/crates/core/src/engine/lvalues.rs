use serde::{Deserialize, Serialize};

use crate::datum::SphericalDatum;
use crate::engine::cocycle::beta;
use crate::error::{Error, Result};
use crate::exact::lattice::{self, IVec};
use crate::exact::qrat::qi;
use crate::exact::{TPoly, TRat, TorusLaurent, TorusRational};

fn require_untwisted(d: &SphericalDatum) -> Result<()> {
    if d.doc.twisted {
        return Err(Error::Twisted);
    }
    if !d.doc.affine {
        return Err(Error::NotAffine);
    }
    Ok(())
}

/// c = β(δ_{P(X)}^{1/2})^{−1}.
pub fn constant_c(d: &SphericalDatum) -> Result<TRat> {
    require_untwisted(d)?;
    let b = beta(d)?.eval_rho(d.rho_px())?;
    if b.is_zero() {
        return Err(Error::PoleAtPoint("β vanishes at δ_{P(X)}^{1/2}".into()));
    }
    b.recip()
}

fn scale_rat(f: &TorusRational, c: &TRat) -> Result<TorusRational> {
    let rank = f.rank();
    let num = f.scale(c.num());
    num.div(&TorusRational::from_laurent(TorusLaurent::constant(
        rank,
        c.den().clone(),
    )))
}

/// L_X^{1/2} = c·β.
pub fn lhalf(d: &SphericalDatum) -> Result<TorusRational> {
    scale_rat(&beta(d)?, &constant_c(d)?)
}

/// L_X = c²·β(χ)·β(χ^{−1}).
pub fn lfull(d: &SphericalDatum) -> Result<TorusRational> {
    let b = beta(d)?;
    let c = constant_c(d)?;
    scale_rat(&(&b * &b.invert_exponents()), &(&c * &c))
}

/// (1 − σ t^{r2} e^{θ̌})^{exponent}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LFactor {
    pub sign: i64,
    pub r2: i64,
    pub coweight: IVec,
    pub exponent: i64,
}

impl LFactor {
    pub fn laurent(&self) -> TorusLaurent {
        TorusLaurent::one_minus(TPoly::monomial(qi(self.sign), self.r2), &self.coweight)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LFactorization {
    pub factors: Vec<LFactor>,
    pub constant: TRat,
}

impl LFactorization {
    pub fn expand(&self, rank: usize) -> Result<TorusRational> {
        let nums: Vec<TorusLaurent> = self
            .factors
            .iter()
            .filter(|f| f.exponent > 0)
            .flat_map(|f| std::iter::repeat_n(f.laurent(), f.exponent as usize))
            .collect();
        let dens: Vec<TorusLaurent> = self
            .factors
            .iter()
            .filter(|f| f.exponent < 0)
            .flat_map(|f| std::iter::repeat_n(f.laurent(), f.exponent.unsigned_abs() as usize))
            .collect();
        scale_rat(
            &TorusRational::from_factors(rank, &nums, &dens)?,
            &self.constant,
        )
    }

    /// Factors with θ̌ ≠ 0, sorted.
    pub fn modulo_zeta(&self) -> Vec<LFactor> {
        let mut out: Vec<LFactor> = self
            .factors
            .iter()
            .filter(|f| !lattice::is_zero(&f.coweight))
            .cloned()
            .collect();
        out.sort();
        out
    }
}

/// L_X as c² · ∏_{Φ̌_X}(1 − e^{γ̌}) / ∏_{Θ}(1 − σ t^{r2} e^{θ̌}).
pub fn lfactors(d: &SphericalDatum) -> Result<LFactorization> {
    let c = constant_c(d)?;
    let rs = d.roots()?;
    let mut factors: Vec<LFactor> = d
        .theta()
        .into_iter()
        .map(|t| LFactor {
            sign: t.sign,
            r2: t.r2,
            coweight: t.coweight,
            exponent: -1,
        })
        .collect();
    for g in &rs.pos_coroots {
        for v in [g.clone(), lattice::neg(g)] {
            factors.push(LFactor {
                sign: 1,
                r2: 0,
                coweight: v,
                exponent: 1,
            });
        }
    }
    factors.sort();
    Ok(LFactorization {
        factors,
        constant: &c * &c,
    })
}

/// Q = ∏_{α̌>0} (1 − t^{2+2h})/(1 − t^{2h}) with h = ⟨α̌, ρ⟩.
pub fn q_factor(rho_pairings: &[i64]) -> Result<TRat> {
    let mut out = TRat::one();
    for &h in rho_pairings {
        if h < 1 {
            return Err(Error::Invalid(format!("⟨α̌, ρ⟩ = {h} is not positive")));
        }
        let num = TPoly::one() - TPoly::t_pow(2 + 2 * h);
        let den = TPoly::one() - TPoly::t_pow(2 * h);
        out = &out * &TRat::new(num, den)?;
    }
    Ok(out)
}

/// Vol(X(𝔬)) = Q · c^{−1}.
pub fn volume(d: &SphericalDatum) -> Result<TRat> {
    let c = constant_c(d)?;
    q_factor(&d.ambient_rho_pairings)?.div(&c)
}

/// (1 − t²)^{rank} · Vol(X(𝔬)).
pub fn tamagawa_volume(d: &SphericalDatum) -> Result<TRat> {
    let base = TPoly::one() - TPoly::t_pow(2);
    Ok(&volume(d)? * &TRat::from_poly(base.pow(d.rank() as u32)))
}
