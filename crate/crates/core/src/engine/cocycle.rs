use serde::{Deserialize, Serialize};

use crate::datum::{theta_flipped_by, RootKind, SphericalDatum, ThetaTriple};
use crate::error::{Error, Result};
use crate::exact::lattice::{self, IVec};
use crate::exact::qrat::qi;
use crate::exact::{weyl_substitute, TPoly, TorusLaurent, TorusRational};
use crate::roots::{pair2, WeylElement};

/// β = ∏_{γ̌ ∈ Φ̌_X⁺} (1 − e^{γ̌}) / ∏_{Θ⁺} (1 − σ t^{r2} e^{θ̌}).
pub fn beta(d: &SphericalDatum) -> Result<TorusRational> {
    let rs = d.roots()?;
    let nums: Vec<TorusLaurent> = rs
        .pos_coroots
        .iter()
        .map(|c| TorusLaurent::one_minus(TPoly::one(), c))
        .collect();
    let dens: Vec<TorusLaurent> = d
        .theta_plus()
        .iter()
        .map(|t| TorusLaurent::one_minus(TPoly::monomial(qi(t.sign), t.r2), &t.coweight))
        .collect();
    TorusRational::from_factors(d.rank(), &nums, &dens)
}

/// f ∘ w, i.e. χ ↦ f(^wχ); monomials transform as e^{μ̌} ↦ e^{w⁻¹μ̌}.
pub fn twist(f: &TorusRational, w: &WeylElement) -> Result<TorusRational> {
    lattice::inverse_unimodular(&w.inverse)?;
    f.map_exponents(&w.inverse)
}

/// Twist of a Laurent polynomial.
pub fn twist_laurent(f: &TorusLaurent, w: &WeylElement) -> Result<TorusLaurent> {
    weyl_substitute(f, &w.inverse)
}

/// B_w = β / (β ∘ w), without the statement cross-check.
pub fn bw_unchecked(d: &SphericalDatum, w: &WeylElement) -> Result<TorusRational> {
    let b = beta(d)?;
    Ok(b.div(&twist(&b, w)?)?.simplify())
}

/// B_w = β / (β ∘ w); simple reflections are cross-checked against the displayed statement.
pub fn bw(d: &SphericalDatum, w: &WeylElement) -> Result<TorusRational> {
    let value = bw_unchecked(d, w)?;
    if let [i] = w.reduced_word.as_slice() {
        let root = &d.doc.spherical_roots[*i];
        let colors = color_data(d, *i)?;
        let expected = bw_statement(
            root.kind,
            &root.gamma,
            &root.cogamma,
            colors.as_ref(),
            d.rho_px(),
        )?;
        if expected != value {
            return Err(Error::Consistency(format!(
                "B for simple reflection {i} is {value}, the statement gives {expected}"
            )));
        }
    }
    Ok(value)
}

/// The color θ̌ belonging to γ with its two exponents (as r2 values).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorData {
    pub theta: IVec,
    pub r2_a: i64,
    pub r2_b: i64,
}

/// Reads the statement's color data off the Θ⁺ elements flipped by w_γ.
pub fn color_data(d: &SphericalDatum, i: usize) -> Result<Option<ColorData>> {
    let root = &d.doc.spherical_roots[i];
    let flipped = theta_flipped_by(d, i)?;
    let mismatch = |what: &str| {
        Error::Consistency(format!(
            "root {i} ({:?}): flipped set {:?} {what}",
            root.kind,
            flipped.iter().map(|t| &t.coweight).collect::<Vec<_>>()
        ))
    };
    let all_plus = |f: &[ThetaTriple]| f.iter().all(|t| t.sign == 1);
    match root.kind {
        RootKind::UPsi => {
            if !flipped.is_empty() {
                return Err(mismatch("must be empty for a (U,ψ) root"));
            }
            Ok(None)
        }
        RootKind::G => match flipped.as_slice() {
            [t] if t.coweight == root.cogamma && t.sign == 1 => Ok(Some(ColorData {
                theta: t.coweight.clone(),
                r2_a: t.r2,
                r2_b: t.r2,
            })),
            _ => Err(mismatch("must be the single triple (γ̌, +, r)")),
        },
        RootKind::TSplit => match flipped.as_slice() {
            [a, b]
                if all_plus(&flipped) && lattice::add(&a.coweight, &b.coweight) == root.cogamma =>
            {
                let (first, second) = if pair2(&a.coweight, &root.gamma) == 2 {
                    (a, b)
                } else {
                    (b, a)
                };
                if pair2(&first.coweight, &root.gamma) != 2 {
                    return Err(mismatch("has no θ̌ with ⟨θ̌, γ⟩ = 1"));
                }
                Ok(Some(ColorData {
                    theta: first.coweight.clone(),
                    r2_a: first.r2,
                    r2_b: second.r2,
                }))
            }
            _ => Err(mismatch("must be two + triples summing to γ̌")),
        },
        RootKind::TNonsplit => {
            let half: IVec = root.cogamma.iter().map(|x| x / 2).collect();
            let plus = flipped.iter().find(|t| t.sign == 1 && t.coweight == half);
            let minus = flipped.iter().find(|t| t.sign == -1 && t.coweight == half);
            match (plus, minus, flipped.len()) {
                (Some(p), Some(m), 2) => Ok(Some(ColorData {
                    theta: half,
                    r2_a: p.r2,
                    r2_b: m.r2,
                })),
                _ => Err(mismatch("must be (γ̌/2, +, r) and (γ̌/2, −, r')")),
            }
        }
    }
}

fn binom(sign: i64, r2: i64, exp: &[i64]) -> TorusLaurent {
    TorusLaurent::one_minus(TPoly::monomial(qi(sign), r2), exp)
}

/// The displayed closed form of B_{w_γ} for each root type.
pub fn bw_statement(
    kind: RootKind,
    gamma: &[i64],
    cogamma: &[i64],
    color: Option<&ColorData>,
    rho_px: &[i64],
) -> Result<TorusRational> {
    let n = cogamma.len();
    let lead = TorusLaurent::monomial(cogamma.to_vec(), TPoly::int(-1));
    let positive = |r2: i64| -> Result<()> {
        if r2 < 1 {
            Err(Error::Invalid(format!(
                "exponent r2 = {r2} is not positive"
            )))
        } else {
            Ok(())
        }
    };
    match kind {
        RootKind::UPsi => Ok(TorusRational::from_laurent(lead)),
        RootKind::G => {
            let k = match color {
                Some(c) => {
                    if c.theta != cogamma {
                        return Err(Error::Invalid("type G color must be γ̌".into()));
                    }
                    c.r2_a
                }
                None => lattice::dot(cogamma, rho_px) / 2,
            };
            positive(k)?;
            TorusRational::from_factors(
                n,
                &[lead, binom(1, k, &lattice::neg(cogamma))],
                &[binom(1, k, cogamma)],
            )
        }
        RootKind::TSplit => {
            let c = color.ok_or_else(|| Error::Invalid("T-split root needs a color".into()))?;
            if pair2(&c.theta, gamma) != 2 {
                return Err(Error::Invalid(
                    "T-split color must satisfy ⟨θ̌, γ⟩ = 1".into(),
                ));
            }
            positive(c.r2_a)?;
            positive(c.r2_b)?;
            // w_γ θ̌ = θ̌ − γ̌.
            let w_theta = lattice::sub(&c.theta, cogamma);
            TorusRational::from_factors(
                n,
                &[
                    lead,
                    binom(1, c.r2_a, &lattice::neg(&c.theta)),
                    binom(1, c.r2_b, &w_theta),
                ],
                &[
                    binom(1, c.r2_b, &c.theta),
                    binom(1, c.r2_a, &lattice::neg(&w_theta)),
                ],
            )
        }
        RootKind::TNonsplit => {
            let c = color.ok_or_else(|| Error::Invalid("T-nonsplit root needs a color".into()))?;
            if lattice::scale(&c.theta, 2) != cogamma {
                return Err(Error::Invalid("T-nonsplit color must be γ̌/2".into()));
            }
            positive(c.r2_a)?;
            positive(c.r2_b)?;
            let w_theta = lattice::neg(&c.theta);
            TorusRational::from_factors(
                n,
                &[
                    lead,
                    binom(1, c.r2_a, &lattice::neg(&c.theta)),
                    binom(-1, c.r2_b, &w_theta),
                ],
                &[
                    binom(-1, c.r2_b, &c.theta),
                    binom(1, c.r2_a, &lattice::neg(&w_theta)),
                ],
            )
        }
    }
}
