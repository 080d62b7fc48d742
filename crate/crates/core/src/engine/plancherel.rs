use crate::datum::SphericalDatum;
use crate::engine::cocycle::beta;
use crate::engine::lvalues::constant_c;
use crate::engine::omega::{omega_schur, prefactor};
use crate::error::{Error, Result};
use crate::exact::lattice::{self, IVec};
use crate::exact::qrat::qi;
use crate::exact::{ct_exact, ct_series, PointedDen, TPoly, TRat, TorusLaurent};

#[derive(Clone, Debug, PartialEq)]
pub struct PlancherelValue {
    pub lambda: IVec,
    pub mu: IVec,
    /// CT[P_λ̌(χ) P_μ̌(χ^{−1}) L_X(χ)] through t^prec.
    pub series: TPoly,
    /// The exact value, available when μ̌ = 0.
    pub exact: Option<TRat>,
}

/// ⟨1_{x_λ̌K}, 1_{x_μ̌K}⟩ as the constant term of P_λ̌ P_μ̌^∨ L_X.
pub fn plancherel_pairing(
    d: &SphericalDatum,
    lambda: &[i64],
    mu: &[i64],
    prec: i64,
) -> Result<PlancherelValue> {
    if prec < 1 {
        return Err(Error::Invalid(format!(
            "precision {prec} must be at least 1"
        )));
    }
    let c = constant_c(d)?;
    let b = beta(d)?;
    let s_lambda = omega_schur(d, lambda)?.value;
    let s_mu = omega_schur(d, mu)?.value.invert_exponents();
    let f = &(&s_lambda * &s_mu) * &(&b * &b.invert_exponents());
    let series = ct_series(&f, prec)?;
    let exact = if lattice::is_zero(mu) {
        Some(exact_mu_zero(d, lambda, &c)?)
    } else {
        None
    };
    if let Some(e) = &exact {
        let expanded = e.series(prec)?;
        if expanded != series {
            return Err(Error::Consistency(format!(
                "Plancherel routes disagree at λ̌ = {lambda:?}: series {series}, exact {e}"
            )));
        }
    }
    Ok(PlancherelValue {
        lambda: lambda.to_vec(),
        mu: mu.to_vec(),
        series,
        exact,
    })
}

/// c · δ^{−1/2}(x_λ̌) · |W_X| · CT[e^{λ̌} β(χ^{−1})], expanded in the cone cut out by −ℓ.
fn exact_mu_zero(d: &SphericalDatum, lambda: &[i64], c: &TRat) -> Result<TRat> {
    let rs = d.roots()?;
    let ell = d
        .separation_functional()
        .ok_or_else(|| Error::NotPointed("Θ⁺ admits no separating functional".into()))?;
    let neg_ell: Vec<_> = ell.iter().map(|x| -x).collect();
    let mut num = TorusLaurent::e(lambda);
    for g in &rs.pos_coroots {
        num = &num * &TorusLaurent::one_minus(TPoly::one(), &lattice::neg(g));
    }
    let dens: Vec<PointedDen> = d
        .theta_plus()
        .iter()
        .map(|t| PointedDen {
            sign: t.sign,
            r2: t.r2,
            theta: lattice::neg(&t.coweight),
        })
        .collect();
    let ct = ct_exact(&num, &dens, &neg_ell)?;
    let scalar = TPoly::monomial(qi(d.weyl.len() as i64), prefactor(d, lambda));
    Ok(c * &TRat::from_poly(&ct * &scalar))
}
