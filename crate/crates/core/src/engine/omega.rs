use serde::{Deserialize, Serialize};

use crate::datum::SphericalDatum;
use crate::engine::cocycle::{beta, bw_unchecked, twist_laurent};
use crate::engine::lvalues::constant_c;
use crate::error::{Error, Result};
use crate::exact::lattice::{self, IVec};
use crate::exact::qrat::qi;
use crate::exact::{TPoly, TRat, TorusLaurent, TorusRational};
use crate::par::Exec;
use crate::roots::{orbit_sum, schur_lowest};

pub const DEFAULT_SUBSET_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Sum,
    Schur,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OmegaValue {
    pub lambda: IVec,
    pub form_used: Form,
    /// k in the prefactor t^k.
    pub prefactor_exp: i64,
    /// The value without the prefactor; a Laurent polynomial for the Schur form.
    pub body: TorusRational,
    pub value: TorusRational,
}

impl OmegaValue {
    /// The Laurent part of a Schur-form value.
    pub fn laurent(&self) -> Option<TorusLaurent> {
        self.body.as_laurent()
    }
}

/// δ_{P(X)}^{−1/2}(x_λ̌) = t^{−2⟨λ̌,ρ_{P(X)}⟩}.
pub fn prefactor(d: &SphericalDatum, lambda: &[i64]) -> i64 {
    -d.rho_pairing2(lambda)
}

fn check_lambda(d: &SphericalDatum, lambda: &[i64]) -> Result<()> {
    if lambda.len() != d.rank() {
        return Err(Error::Dimension {
            expected: d.rank(),
            found: lambda.len(),
        });
    }
    if !d.is_antidominant(lambda) {
        return Err(Error::NotAntidominant(lambda.to_vec()));
    }
    Ok(())
}

fn finish(d: &SphericalDatum, lambda: &[i64], form: Form, body: TorusRational) -> OmegaValue {
    let k = prefactor(d, lambda);
    let value = body.scale(&TPoly::t_pow(k));
    OmegaValue {
        lambda: lambda.to_vec(),
        form_used: form,
        prefactor_exp: k,
        body,
        value,
    }
}

/// Ω(x_λ̌) = δ_{P(X)}^{−1/2}(x_λ̌) Σ_{W_X} B_w · e^{λ̌}∘w.
pub fn omega_sum(d: &SphericalDatum, lambda: &[i64]) -> Result<OmegaValue> {
    omega_sum_with(d, lambda, Exec::default())
}

pub fn omega_sum_with(d: &SphericalDatum, lambda: &[i64], exec: Exec) -> Result<OmegaValue> {
    check_lambda(d, lambda)?;
    let e_lambda = TorusLaurent::e(lambda);
    let terms = exec.map(&d.weyl, |w| -> Result<TorusRational> {
        let b = bw_unchecked(d, w)?;
        Ok(&b * &TorusRational::from_laurent(twist_laurent(&e_lambda, w)?))
    });
    let mut body = TorusRational::zero(d.rank());
    for t in terms {
        body = &body + &t?;
    }
    Ok(finish(d, lambda, Form::Sum, body.simplify()))
}

/// Ω/β = δ_{P(X)}^{−1/2}(x_λ̌) Σ_{I⊆Θ⁺} ∏_{θ∈I}(−σ_θ t^{r2_θ}) s_{λ̌+Σ_I θ̌}.
pub fn omega_schur(d: &SphericalDatum, lambda: &[i64]) -> Result<OmegaValue> {
    omega_schur_with(d, lambda, Exec::default(), DEFAULT_SUBSET_CAP)
}

pub fn omega_schur_with(
    d: &SphericalDatum,
    lambda: &[i64],
    exec: Exec,
    cap: usize,
) -> Result<OmegaValue> {
    check_lambda(d, lambda)?;
    let theta = d.theta_plus();
    if theta.len() > cap {
        return Err(Error::CapExceeded(format!(
            "|Θ⁺| = {} exceeds the subset cap {cap}; use the sum form instead",
            theta.len()
        )));
    }
    let rs = d.roots()?;
    let terms = exec.map_range(1usize << theta.len(), |mask| -> Result<TorusLaurent> {
        let mut shift = lambda.to_vec();
        let mut coeff = TPoly::one();
        for (j, t) in theta.iter().enumerate() {
            if mask >> j & 1 == 1 {
                shift = lattice::add(&shift, &t.coweight);
                coeff = &coeff * &TPoly::monomial(qi(-t.sign), t.r2);
            }
        }
        Ok(schur_lowest(rs, &d.weyl, &shift)?.scale(&coeff))
    });
    let mut body = TorusLaurent::zero(d.rank());
    for t in terms {
        body = &body + &t?;
    }
    Ok(finish(
        d,
        lambda,
        Form::Schur,
        TorusRational::from_laurent(body),
    ))
}

/// Ω(x_λ̌) at χ = δ_{P(X)}^{1/2}, computed as β(pt) · (Ω/β)(pt).
pub fn omega_at_delta(d: &SphericalDatum, lambda: &[i64]) -> Result<TRat> {
    let schur = omega_schur(d, lambda)?;
    let b = beta(d)?.eval_rho(d.rho_px())?;
    Ok(&b * &schur.value.eval_rho(d.rho_px())?)
}

/// P_λ̌ = c^{−1} · Ω/β; W_X-invariant, with P_0 = 1.
pub fn p_poly(d: &SphericalDatum, lambda: &[i64]) -> Result<TorusRational> {
    let c = constant_c(d)?;
    let schur = omega_schur(d, lambda)?;
    let scaled = schur.value.scale(c.den());
    let num_c = c.num();
    if let Some(l) = scaled.as_laurent() {
        let mut out = TorusLaurent::zero(d.rank());
        let mut exact = true;
        for (e, coef) in l.terms() {
            match coef.div_exact(num_c) {
                Some(q) => out.add_term(e.to_vec(), q),
                None => {
                    exact = false;
                    break;
                }
            }
        }
        if exact {
            return Ok(TorusRational::from_laurent(out));
        }
    }
    TorusRational::new(
        scaled.numerator().clone(),
        vec![TorusLaurent::constant(d.rank(), num_c.clone())],
    )
}

/// Exponents of the Schur form, minus the W_X-orbit sum of e^{λ̌}, that do not lie in λ̌ + 𝒯.
pub fn triangularity_defects(d: &SphericalDatum, lambda: &[i64]) -> Result<Vec<IVec>> {
    let schur = omega_schur(d, lambda)?;
    let laurent = schur
        .laurent()
        .ok_or_else(|| Error::Consistency("Schur form has a torus denominator".into()))?;
    let rest = &laurent - &orbit_sum(&d.weyl, lambda);
    Ok(rest
        .terms()
        .map(|(e, _)| e.to_vec())
        .filter(|e| !d.in_colors_cone(&lattice::sub(e, lambda)))
        .collect())
}
