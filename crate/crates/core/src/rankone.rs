//! Rank-one functional-equation coefficients and their composition along orbit paths.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::lattice::{self, IMat, IVec};
use crate::exact::qrat::{parse_qrat, qi};
use crate::exact::{weyl_substitute, QRat, TPoly, TorusLaurent, TorusRational};
use crate::roots::{RootSystem, WeylElement};

/// A rank-one case with its parameters; coweights are doubled simple-coroot coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", content = "params", deny_unknown_fields)]
pub enum FeCase {
    #[serde(rename = "U-lower")]
    ULower,
    #[serde(rename = "U-raise")]
    URaise,
    #[serde(rename = "U-psi")]
    UPsi,
    /// k_d, k_dp: e^{v̌}(δ^{1/2}δ_{(U_{P_α})_ξ}^{−1}) = t^k.
    #[serde(rename = "T-split-unram")]
    TSplitUnram {
        v_d: IVec,
        k_d: i64,
        v_dp: IVec,
        k_dp: i64,
    },
    #[serde(rename = "T-split-ram")]
    TSplitRam { m: i64 },
    #[serde(rename = "T-nonsplit-unram")]
    TNonsplitUnram,
    #[serde(rename = "T-nonsplit-ram")]
    TNonsplitRam,
    #[serde(rename = "N-split-int-unram")]
    NSplitIntUnram,
    /// ratio: χ̃∘e^{−α̌/2}(D(ζ)/D(ζ₀)).
    #[serde(rename = "N-split-int-ram")]
    NSplitIntRam { ratio: String },
    #[serde(rename = "N-nonsplit-int-unram")]
    NNonsplitIntUnram,
    #[serde(rename = "N-nonsplit-int-ram")]
    NNonsplitIntRam { ratio: String },
    /// Lives on the ambient torus plus one coordinate for u = χ̃∘e^{α̌/2}(−D(ζ)).
    #[serde(rename = "N-nonintegral")]
    NNonintegral { ratio: String },
}

impl FeCase {
    pub fn tag(&self) -> &'static str {
        match self {
            FeCase::ULower => "U-lower",
            FeCase::URaise => "U-raise",
            FeCase::UPsi => "U-psi",
            FeCase::TSplitUnram { .. } => "T-split-unram",
            FeCase::TSplitRam { .. } => "T-split-ram",
            FeCase::TNonsplitUnram => "T-nonsplit-unram",
            FeCase::TNonsplitRam => "T-nonsplit-ram",
            FeCase::NSplitIntUnram => "N-split-int-unram",
            FeCase::NSplitIntRam { .. } => "N-split-int-ram",
            FeCase::NNonsplitIntUnram => "N-nonsplit-int-unram",
            FeCase::NNonsplitIntRam { .. } => "N-nonsplit-int-ram",
            FeCase::NNonintegral { .. } => "N-nonintegral",
        }
    }
}

fn binom(c: TPoly, exp: &[i64]) -> TorusLaurent {
    TorusLaurent::one_minus(c, exp)
}

fn t(k: i64) -> TPoly {
    TPoly::t_pow(k)
}

pub fn ratio_value(s: &str) -> Result<QRat> {
    parse_qrat(s).map_err(|e| Error::Invalid(format!("ratio `{s}`: {e}")))
}

/// The coefficient b for a simple reflection with coroot α̌ (doubled coordinates).
pub fn fe_coefficient(case: &FeCase, alpha: &[i64]) -> Result<TorusRational> {
    let n = alpha.len();
    let neg = lattice::neg(alpha);
    let lead = |exp: &[i64], c: i64| TorusLaurent::monomial(exp.to_vec(), TPoly::int(c));
    let half = || -> Result<IVec> {
        if alpha.iter().any(|x| x % 2 != 0) {
            return Err(Error::Invalid("α̌/2 is not a lattice point".into()));
        }
        Ok(alpha.iter().map(|x| x / 2).collect())
    };
    match case {
        FeCase::ULower => TorusRational::from_factors(
            n,
            &[lead(&neg, -1), binom(t(2), &neg)],
            &[binom(TPoly::one(), &neg)],
        ),
        FeCase::URaise => TorusRational::from_factors(
            n,
            &[lead(&neg, -1), binom(TPoly::one(), alpha)],
            &[binom(t(2), alpha)],
        ),
        FeCase::UPsi => Ok(TorusRational::one(n)),
        FeCase::TSplitUnram {
            v_d,
            k_d,
            v_dp,
            k_dp,
        } => {
            for v in [v_d, v_dp] {
                if v.len() != n {
                    return Err(Error::Dimension {
                        expected: n,
                        found: v.len(),
                    });
                }
            }
            if lattice::add(v_d, v_dp) != alpha {
                return Err(Error::Invalid("v̌_D + v̌_D' must equal α̌".into()));
            }
            TorusRational::from_factors(
                n,
                &[
                    binom(t(2 - k_d), &lattice::neg(v_d)),
                    binom(t(2 - k_dp), &lattice::neg(v_dp)),
                ],
                &[binom(t(*k_d), v_d), binom(t(*k_dp), v_dp)],
            )
        }
        FeCase::TSplitRam { m } => Ok(TorusRational::from_laurent(lead(
            &lattice::scale(&neg, *m),
            1,
        ))),
        FeCase::TNonsplitUnram | FeCase::NNonsplitIntUnram => {
            TorusRational::from_factors(n, &[binom(t(2), &neg)], &[binom(t(2), alpha)])
        }
        FeCase::TNonsplitRam => Ok(TorusRational::from_laurent(lead(&neg, 1))),
        FeCase::NSplitIntUnram => {
            let h = half()?;
            let f = TorusRational::from_factors(
                n,
                &[binom(t(1), &lattice::neg(&h))],
                &[binom(t(1), &h)],
            )?;
            Ok(&f * &f)
        }
        FeCase::NSplitIntRam { ratio } | FeCase::NNonsplitIntRam { ratio } => {
            Ok(TorusRational::from_laurent(TorusLaurent::monomial(
                neg,
                TPoly::constant(ratio_value(ratio)?),
            )))
        }
        FeCase::NNonintegral { ratio } => {
            let mut u = vec![0; n + 1];
            u[n] = 1;
            let mut u_inv = vec![0; n + 1];
            u_inv[n] = -1;
            TorusRational::from_factors(
                n + 1,
                &[
                    TorusLaurent::constant(n + 1, TPoly::constant(ratio_value(ratio)?)),
                    binom(t(1), &u_inv),
                ],
                &[binom(t(1), &u)],
            )
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathStep {
    pub root_index: usize,
    #[serde(flatten)]
    pub case: FeCase,
}

/// A Brion path: steps are read from the open orbit downwards and back.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitPath {
    #[serde(default)]
    pub name: String,
    pub ambient: IMat,
    pub steps: Vec<PathStep>,
}

pub fn parse_path(text: &str) -> Result<OrbitPath> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de)
        .map_err(|e| Error::Parse(format!("at `{}`: {}", e.path(), e.inner())))
}

/// The Weyl element s_{i_k} ⋯ s_{i_1} of a path, checked to be reduced.
pub fn path_element(ambient: &RootSystem, path: &OrbitPath) -> Result<WeylElement> {
    let word: Vec<usize> = path.steps.iter().rev().map(|s| s.root_index).collect();
    if let Some(&bad) = word.iter().find(|&&i| i >= ambient.rank()) {
        return Err(Error::Invalid(format!("root index {bad} out of range")));
    }
    let w = ambient.element_from_word(&word)?;
    if ambient.length_of(&w) != word.len() {
        return Err(Error::NotReduced(format!("{word:?}")));
    }
    Ok(w)
}

/// b_w by the cocycle relation: step k is evaluated at ^{v_k}χ with v_k = s_{i_{k−1}} ⋯ s_{i_1}.
pub fn compose_path(ambient: &RootSystem, path: &OrbitPath) -> Result<TorusRational> {
    path_element(ambient, path)?;
    let n = ambient.lattice_rank();
    let mut out = TorusRational::one(n);
    let mut v = ambient.element_from_word(&[])?;
    for step in &path.steps {
        if matches!(step.case, FeCase::NNonintegral { .. }) {
            return Err(Error::Invalid(
                "N-nonintegral coefficients carry an extra symbol and are not composed".into(),
            ));
        }
        let alpha = &ambient.simple_coroots[step.root_index];
        let b = fe_coefficient(&step.case, alpha)?;
        out = &out * &b.map_exponents(&v.inverse)?;
        let mut word = vec![step.root_index];
        word.extend(&v.reduced_word);
        v = ambient.element_from_word(&word)?;
    }
    Ok(out.simplify())
}

/// `b_w = ∏_{ε̌>0, wε̌<0} (−e^{ε̌}) · b_w.
pub fn backtick_b(ambient: &RootSystem, path: &OrbitPath) -> Result<TorusRational> {
    let w = path_element(ambient, path)?;
    let b = compose_path(ambient, path)?;
    let mut pre = TorusLaurent::one(ambient.lattice_rank());
    for e in ambient.flipped_coroots(&w) {
        pre = pre.mul_monomial(&e, &TPoly::int(-1));
    }
    Ok((&TorusRational::from_laurent(pre) * &b).simplify())
}

/// Pulls back along e^{α̌_i} ↦ t^{shift_i} e^{image_i}; images are doubled X-lattice coweights.
pub fn restrict(f: &TorusRational, images: &[IVec], shifts: &[i64]) -> Result<TorusRational> {
    if images.len() != f.rank() || shifts.len() != f.rank() {
        return Err(Error::Dimension {
            expected: f.rank(),
            found: images.len(),
        });
    }
    let rank = images.first().map_or(0, |v| v.len());
    let map = |g: &TorusLaurent| -> Result<TorusLaurent> {
        let mut out = TorusLaurent::zero(rank);
        for (e, c) in g.terms() {
            let mut img = vec![0; rank];
            let mut tk = 0;
            for (i, &x) in e.iter().enumerate() {
                if x % 2 != 0 {
                    return Err(Error::Invalid(format!(
                        "exponent {e:?} is not in the coroot lattice"
                    )));
                }
                img = lattice::add(&img, &lattice::scale(&images[i], x / 2));
                tk += shifts[i] * (x / 2);
            }
            out.add_term(img, c.shift(tk));
        }
        Ok(out)
    };
    let num = map(f.numerator())?;
    let dens = f
        .den_factors()
        .iter()
        .map(map)
        .collect::<Result<Vec<_>>>()?;
    Ok(TorusRational::from_factors(rank, &[num], &dens)?.simplify())
}

/// f(^wχ) for an ambient Weyl element.
pub fn twist_ambient(f: &TorusLaurent, w: &WeylElement) -> Result<TorusLaurent> {
    weyl_substitute(f, &w.inverse)
}

/// Numeric u-evaluation of an N-nonintegral coefficient: ratio · (1 − t/u)/(1 − t u).
pub fn nonintegral_value(ratio: &QRat, t_val: &QRat, u: &QRat) -> Option<QRat> {
    let den = qi(1) - t_val * u;
    if den == qi(0) || *u == qi(0) {
        return None;
    }
    Some(ratio * (qi(1) - t_val / u) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    const SL3: &str = include_str!("../fixtures/paths/sl2-sl3.json");
    const SP4: &str = include_str!("../fixtures/paths/sp2-sp4.json");

    fn ratio2(n: usize, v: &[IVec]) -> TorusRational {
        let nums: Vec<_> = v.iter().map(|x| binom(t(2), &lattice::neg(x))).collect();
        let dens: Vec<_> = v.iter().map(|x| binom(t(2), x)).collect();
        TorusRational::from_factors(n, &nums, &dens).unwrap()
    }

    fn printed(lead: IVec, v: &[IVec]) -> TorusRational {
        let n = lead.len();
        &TorusRational::from_laurent(TorusLaurent::monomial(lead, TPoly::int(-1))) * &ratio2(n, v)
    }

    #[test]
    fn sl3_path_matches_display() {
        let p = parse_path(SL3).unwrap();
        let rs = RootSystem::from_cartan(&p.ambient).unwrap();
        let got = backtick_b(&rs, &p).unwrap();
        assert_eq!(got, printed(vec![2, 2], &[vec![2, 0], vec![0, 2]]));
    }

    #[test]
    fn sp4_path_matches_display() {
        let p = parse_path(SP4).unwrap();
        let rs = RootSystem::from_cartan(&p.ambient).unwrap();
        let got = backtick_b(&rs, &p).unwrap();
        assert_eq!(got, printed(vec![4, 2], &[vec![2, 0], vec![2, 2]]));
    }

    #[test]
    fn sp4_restriction_gives_half_integral_exponents() {
        let p = parse_path(SP4).unwrap();
        let rs = RootSystem::from_cartan(&p.ambient).unwrap();
        let got = restrict(&backtick_b(&rs, &p).unwrap(), &[vec![1], vec![0]], &[-1, 2]).unwrap();
        let expected = TorusRational::from_factors(
            1,
            &[
                TorusLaurent::monomial(vec![2], TPoly::int(-1)),
                binom(t(3), &[-1]),
                binom(t(1), &[-1]),
            ],
            &[binom(t(3), &[1]), binom(t(1), &[1])],
        )
        .unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn empty_path_is_one() {
        let p = OrbitPath {
            name: String::new(),
            ambient: vec![vec![2]],
            steps: vec![],
        };
        let rs = RootSystem::from_cartan(&p.ambient).unwrap();
        assert_eq!(compose_path(&rs, &p).unwrap(), TorusRational::one(1));
    }

    #[test]
    fn non_reduced_path_rejected() {
        let p = OrbitPath {
            name: String::new(),
            ambient: vec![vec![2]],
            steps: vec![
                PathStep {
                    root_index: 0,
                    case: FeCase::ULower,
                },
                PathStep {
                    root_index: 0,
                    case: FeCase::URaise,
                },
            ],
        };
        let rs = RootSystem::from_cartan(&p.ambient).unwrap();
        assert!(matches!(compose_path(&rs, &p), Err(Error::NotReduced(_))));
    }

    #[test]
    fn case_values() {
        let a = vec![2];
        let lower = fe_coefficient(&FeCase::ULower, &a).unwrap();
        let expected = TorusRational::from_factors(
            1,
            &[
                TorusLaurent::monomial(vec![-2], TPoly::int(-1)),
                binom(t(2), &[-2]),
            ],
            &[binom(TPoly::one(), &[-2])],
        )
        .unwrap();
        assert_eq!(lower, expected);
        assert_eq!(
            fe_coefficient(&FeCase::UPsi, &a).unwrap(),
            TorusRational::one(1)
        );
        assert_eq!(
            fe_coefficient(&FeCase::TNonsplitUnram, &a).unwrap(),
            ratio2(1, std::slice::from_ref(&a))
        );
        let n = fe_coefficient(&FeCase::NSplitIntUnram, &a).unwrap();
        let h =
            TorusRational::from_factors(1, &[binom(t(1), &[-1])], &[binom(t(1), &[1])]).unwrap();
        assert_eq!(n, &h * &h);
        assert!(fe_coefficient(
            &FeCase::TSplitUnram {
                v_d: vec![1],
                k_d: 0,
                v_dp: vec![0],
                k_dp: 0
            },
            &a
        )
        .is_err());
        let third = crate::exact::qrat::q(1, 3);
        assert!(nonintegral_value(&qi(1), &third, &qi(3)).is_none());
        assert_eq!(nonintegral_value(&qi(1), &third, &qi(1)), Some(qi(1)));
    }

    #[test]
    fn path_json_rejects_unknown_tag() {
        let bad = SL3.replace("U-raise", "U-sideways");
        assert!(parse_path(&bad).is_err());
    }
}
