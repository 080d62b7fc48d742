//! Per-fixture regression runs.

use serde::{Deserialize, Serialize};

use super::{
    get_fixture, statement_targets, Expected, Fixture, OmegaShape, Printed, SignRule, Target,
};
use crate::datum::{validate_datum, SphericalDatum};
use crate::engine::{
    beta, bw, bw_statement, bw_unchecked, lfactors, omega_at_delta, omega_schur, omega_sum,
    prefactor, twist, LFactor,
};
use crate::error::{Error, Result};
use crate::exact::lattice::{self, IVec};
use crate::exact::{TPoly, TRat, TorusLaurent, TorusRational};
use crate::par::Exec;
use crate::rankone::{backtick_b, restrict};
use crate::roots::{RootSystem, WeylElement};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub target: String,
    pub citation: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub fixture: String,
    pub entries: Vec<SuiteEntry>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

fn entry(target: &str, citation: &str, outcome: Result<Option<String>>) -> SuiteEntry {
    let (pass, detail) = match outcome {
        Ok(None) => (true, "ok".to_string()),
        Ok(Some(why)) => (false, why),
        Err(e) => (false, e.to_string()),
    };
    SuiteEntry {
        target: target.into(),
        citation: citation.into(),
        pass,
        detail,
    }
}

/// X-antidominant coweights with even doubled coordinates in [−2·bound, 0], by size.
pub fn antidominant_box(d: &SphericalDatum, bound: i64) -> Vec<IVec> {
    let mut all: Vec<IVec> = vec![vec![]];
    for _ in 0..d.rank() {
        all = all
            .into_iter()
            .flat_map(|v| {
                (0..=bound).map(move |k| {
                    let mut w = v.clone();
                    w.push(-2 * k);
                    w
                })
            })
            .collect();
    }
    all.retain(|v| d.is_antidominant(v));
    all.sort_by_key(|v| (v.iter().map(|x| x.abs()).sum::<i64>(), v.clone()));
    all
}

/// The first `count` X-antidominant coweights with even coordinates in [−8, 0], by size.
pub fn lambda_grid(d: &SphericalDatum, count: usize) -> Vec<IVec> {
    let mut all = antidominant_box(d, 4);
    all.truncate(count);
    all
}

fn find_element<'a>(d: &'a SphericalDatum, matrix: &[IVec]) -> Result<&'a WeylElement> {
    d.weyl
        .iter()
        .find(|w| w.matrix == matrix)
        .ok_or_else(|| Error::Consistency("product is not in W_X".into()))
}

fn check_consistency(d: &SphericalDatum, grid: &[IVec]) -> Result<Option<String>> {
    let b = beta(d)?;
    for l in grid {
        let sum = omega_sum(d, l)?;
        let schur = omega_schur(d, l)?;
        if sum.value != &b * &schur.value {
            return Ok(Some(format!("Σ-form ≠ β·Schur-form at λ̌ = {l:?}")));
        }
    }
    Ok(None)
}

fn check_pinning(d: &SphericalDatum, grid: &[IVec]) -> Result<Option<String>> {
    for l in grid {
        let v = omega_at_delta(d, l)?;
        if v != TRat::one() {
            return Ok(Some(format!("Ω(δ^{{1/2}}) = {v} at λ̌ = {l:?}")));
        }
    }
    Ok(None)
}

/// B_{w₁w₂} = (B_{w₁} ∘ w₂) · B_{w₂} over all pairs, and bw agrees with the statement on generators.
fn check_cocycle(d: &SphericalDatum) -> Result<Option<String>> {
    let all: Vec<TorusRational> = d
        .weyl
        .iter()
        .map(|w| {
            if w.length() == 1 {
                bw(d, w)
            } else {
                bw_unchecked(d, w)
            }
        })
        .collect::<Result<_>>()?;
    for (i, w1) in d.weyl.iter().enumerate() {
        for (j, w2) in d.weyl.iter().enumerate() {
            let prod = find_element(d, &lattice::mat_mul(&w1.matrix, &w2.matrix))?;
            let k = d.weyl.iter().position(|w| w == prod).unwrap_or(0);
            let rhs = &twist(&all[i], w2)? * &all[j];
            if all[k] != rhs {
                return Ok(Some(format!(
                    "cocycle fails for {:?}·{:?}",
                    w1.reduced_word, w2.reduced_word
                )));
            }
        }
    }
    Ok(None)
}

fn sign_of(rule: &SignRule, w: &WeylElement) -> i64 {
    match rule {
        SignRule::Trivial => 1,
        SignRule::Length => w.sign,
        SignRule::Generators(g) => w.reduced_word.iter().map(|&i| g[i]).product(),
    }
}

/// The printed W_X-sum at λ̌, including the δ_{P(X)}^{−1/2}(x_λ̌) prefactor.
pub(crate) fn shape_value(
    d: &SphericalDatum,
    shape: &OmegaShape,
    lambda: &[i64],
) -> Result<TorusRational> {
    let n = d.rank();
    let inner = Printed {
        coeff: 1,
        lead: lattice::add(lambda, &shape.shift),
        factors: shape.factors.clone(),
    }
    .value(n)?;
    let mut body = TorusRational::zero(n);
    for w in &d.weyl {
        let s = sign_of(&shape.sign, w);
        let term = twist(&inner, w)?.scale(&TPoly::int(s));
        body = &body + &term;
    }
    let outer = TorusLaurent::monomial(shape.outer.clone(), TPoly::t_pow(prefactor(d, lambda)));
    Ok((&TorusRational::from_laurent(outer) * &body).simplify())
}

fn check_shape(d: &SphericalDatum, shape: &OmegaShape) -> Result<Option<String>> {
    let grid = lambda_grid(d, 5);
    let pairs: Vec<(TorusRational, TorusRational)> = grid
        .iter()
        .map(|l| Ok((omega_sum(d, l)?.value, shape_value(d, shape, l)?)))
        .collect::<Result<_>>()?;
    if !shape.up_to_factor {
        for (l, (engine, printed)) in grid.iter().zip(&pairs) {
            if engine != printed {
                return Ok(Some(format!("Ω differs from the printed sum at λ̌ = {l:?}")));
            }
        }
        return Ok(None);
    }
    let (e0, p0) = &pairs[0];
    if e0.is_zero() || p0.is_zero() {
        return Ok(Some("vanishing value at the base point".into()));
    }
    for (l, (e, p)) in grid.iter().zip(&pairs).skip(1) {
        if (e * p0) != (e0 * p) {
            return Ok(Some(format!(
                "ratio Ω/printed at λ̌ = {l:?} differs from the one at λ̌ = {:?}",
                grid[0]
            )));
        }
    }
    Ok(None)
}

fn sorted(mut v: Vec<LFactor>) -> Vec<LFactor> {
    v.retain(|f| !lattice::is_zero(&f.coweight));
    v.sort();
    v
}

/// Multiplies L_X by L(π,Ad,0) and compares the remaining factors after the ζ-discard.
fn check_lmultiset(d: &SphericalDatum, expected: &[LFactor]) -> Result<Option<String>> {
    let got = lfactors(d)?.modulo_zeta();
    let (adjoint, rest): (Vec<LFactor>, Vec<LFactor>) = got
        .into_iter()
        .partition(|f| f.r2 == 0 && f.exponent == 1 && f.sign == 1);
    let rs = d.roots()?;
    let roots = sorted(
        rs.pos_coroots
            .iter()
            .flat_map(|c| [c.clone(), lattice::neg(c)])
            .map(|c| LFactor {
                sign: 1,
                r2: 0,
                coweight: c,
                exponent: 1,
            })
            .collect(),
    );
    if sorted(adjoint) != roots {
        return Ok(Some("the root factors are not L(π,Ad,0)^{−1}".into()));
    }
    let rest = sorted(rest);
    let want = sorted(expected.to_vec());
    if rest != want {
        return Ok(Some(format!("multiset {rest:?} ≠ {want:?}")));
    }
    Ok(None)
}

fn check_target(fx: &Fixture, t: &Target) -> Result<Option<String>> {
    let d = &fx.datum;
    match &t.expected {
        Expected::WeylOrder(n) => Ok((d.weyl.len() != *n)
            .then(|| format!("|W_X| = {}, expected {n}", d.weyl.len()))),
        Expected::Bw { word, printed } => {
            let w = d.roots()?.element_from_word(word)?;
            let w = find_element(d, &w.matrix)?;
            let got = bw(d, w)?;
            let want = printed.value(d.rank())?;
            Ok((got != want).then(|| format!("B_w = {got}, printed {want}")))
        }
        Expected::Omega(shape) => check_shape(d, shape),
        Expected::LMultiset(want) => check_lmultiset(d, want),
        Expected::Path {
            index,
            printed,
            restriction,
        } => {
            let path = fx
                .paths
                .get(*index)
                .ok_or_else(|| Error::Invalid(format!("no path {index}")))?;
            let rs = RootSystem::from_cartan(&path.ambient)?;
            let b = backtick_b(&rs, path)?;
            let want = printed.value(rs.lattice_rank())?;
            if b != want {
                return Ok(Some(format!("`b = {b}, printed {want}")));
            }
            if let Some(r) = restriction {
                let got = restrict(&b, &r.images, &r.shifts)?;
                let want = r.printed.value(got.rank())?;
                if got != want {
                    return Ok(Some(format!("restricted `b = {got}, printed {want}")));
                }
            }
            Ok(None)
        }
    }
}

/// Runs validation, the engine invariants and every transcribed target of a fixture.
pub fn regression_suite(name: &str) -> Result<SuiteReport> {
    let fx = get_fixture(name)?;
    let d = &fx.datum;
    let grid = lambda_grid(d, 5);
    let mut entries = Vec::new();
    let v = validate_datum(d);
    let failed: Vec<String> = v
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    entries.push(entry(
        "validate",
        "Cartan data, W_X-stable Θ, posneg, affine separation",
        Ok((!failed.is_empty()).then(|| failed.join("; "))),
    ));
    entries.push(entry(
        "consistency",
        "Ω as a W_X-sum equals β times the Schur form",
        check_consistency(d, &grid),
    ));
    if !d.doc.twisted && d.doc.affine {
        entries.push(entry(
            "pinning",
            "Ω at δ_{P(X)}^{1/2} is 1",
            check_pinning(d, &grid),
        ));
    }
    entries.push(entry(
        "cocycle",
        "B_{w₁w₂} = (B_{w₁}∘w₂)·B_{w₂}",
        check_cocycle(d),
    ));
    let targets = Exec::default().map(&fx.expected, |t| {
        entry(&t.name, &t.citation, check_target(&fx, t))
    });
    entries.extend(targets);
    Ok(SuiteReport {
        fixture: name.into(),
        entries,
    })
}

/// Checks the displayed rank-one B_{w_γ} that have no datum in the catalog.
pub fn statement_suite() -> SuiteReport {
    let entries = statement_targets()
        .iter()
        .map(|s| {
            let outcome = bw_statement(s.kind, &[2], &[2], Some(&s.color), &[0]).and_then(|got| {
                let want = s.printed.value(1)?;
                Ok((got != want).then(|| format!("statement {got}, printed {want}")))
            });
            entry(&s.name, &s.citation, outcome)
        })
        .collect();
    SuiteReport {
        fixture: "rank-one-statements".into(),
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::list_fixtures;

    #[test]
    fn every_fixture_suite_passes() {
        for name in list_fixtures() {
            let r = regression_suite(name).unwrap();
            for e in &r.entries {
                assert!(e.pass, "{name} {}: {}", e.target, e.detail);
            }
        }
    }

    #[test]
    fn statements_pass() {
        let r = statement_suite();
        assert_eq!(r.entries.len(), 9);
        for e in &r.entries {
            assert!(e.pass, "{}: {}", e.target, e.detail);
        }
    }

    #[test]
    fn grid_has_five_points() {
        for name in list_fixtures() {
            let d = crate::fixtures::load_datum(name).unwrap();
            let g = lambda_grid(&d, 5);
            assert_eq!(g.len(), 5, "{name}");
            assert!(g.iter().all(|l| d.is_antidominant(l)));
        }
    }

    #[test]
    fn shalika_literal_reading_fails() {
        let fx = get_fixture("shalika-gl4").unwrap();
        let Expected::Omega(mut shape) = fx.expected[1].expected.clone() else {
            panic!("shape target expected");
        };
        assert!(check_shape(&fx.datum, &shape).unwrap().is_none());
        for a in [[-2, 0], [-2, -2]] {
            shape.factors.push(LFactor {
                sign: 1,
                r2: 2,
                coweight: a.to_vec(),
                exponent: 1,
            });
        }
        assert!(check_shape(&fx.datum, &shape).unwrap().is_some());
        shape.sign = SignRule::Generators(vec![1, -1]);
        assert!(check_shape(&fx.datum, &shape).unwrap().is_some());
    }

    #[test]
    fn wrong_printed_value_fails() {
        let mut fx = get_fixture("gl3-sl4").unwrap();
        if let Expected::Bw { printed, .. } = &mut fx.expected[1].expected {
            printed.factors[0].r2 = 2;
        }
        let r = check_target(&fx, &fx.expected[1]).unwrap();
        assert!(r.is_some());
    }
}
