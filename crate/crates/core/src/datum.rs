//! Declarative combinatorial model of a spherical variety and its validation.

use serde::{Deserialize, Serialize};

use crate::cone;
use crate::error::{Error, Result};
use crate::exact::lattice::{self, IMat, IVec};
use crate::exact::QRat;
use crate::roots::{pair2, RootSystem, WeylElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootKind {
    G,
    #[serde(rename = "T-split")]
    TSplit,
    #[serde(rename = "T-nonsplit")]
    TNonsplit,
    #[serde(rename = "U-psi")]
    UPsi,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphericalRoot {
    pub gamma: IVec,
    pub cogamma: IVec,
    pub kind: RootKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaTriple {
    pub coweight: IVec,
    pub sign: i64,
    pub r2: i64,
}

impl ThetaTriple {
    pub fn new(coweight: IVec, sign: i64, r2: i64) -> Self {
        Self { coweight, sign, r2 }
    }

    pub fn negated(&self) -> Self {
        Self::new(lattice::neg(&self.coweight), self.sign, self.r2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cartan: Option<IMat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos_coroot_rho_pairings: Option<Vec<i64>>,
}

/// The datum file schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumDoc {
    pub name: String,
    pub affine: bool,
    pub twisted: bool,
    pub rank: usize,
    pub lattice_scale: i64,
    pub ambient: AmbientSpec,
    pub spherical_roots: Vec<SphericalRoot>,
    pub theta_plus: Vec<ThetaTriple>,
    pub colors: Vec<IVec>,
    #[serde(rename = "rho_pX")]
    pub rho_px: IVec,
}

#[derive(Clone, Debug)]
pub struct SphericalDatum {
    pub doc: DatumDoc,
    /// Φ_X, or the reason it could not be built.
    pub phi_x: std::result::Result<RootSystem, String>,
    pub weyl: Vec<WeylElement>,
    pub ambient: Option<RootSystem>,
    pub ambient_rho_pairings: Vec<i64>,
}

pub fn parse_datum(text: &str) -> Result<SphericalDatum> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: DatumDoc = serde_path_to_error::deserialize(de)
        .map_err(|e| Error::Parse(format!("at `{}`: {}", e.path(), e.inner())))?;
    SphericalDatum::from_doc(doc)
}

impl SphericalDatum {
    pub fn from_doc(doc: DatumDoc) -> Result<Self> {
        let n = doc.rank;
        let field_len = |field: &str, v: &[i64]| -> Result<()> {
            if v.len() != n {
                Err(Error::Parse(format!(
                    "at `{field}`: expected {n} entries, found {}",
                    v.len()
                )))
            } else {
                Ok(())
            }
        };
        if doc.lattice_scale != 2 {
            return Err(Error::Parse(format!(
                "at `lattice_scale`: must be 2, found {}",
                doc.lattice_scale
            )));
        }
        field_len("rho_pX", &doc.rho_px)?;
        for (i, r) in doc.spherical_roots.iter().enumerate() {
            field_len(&format!("spherical_roots[{i}].gamma"), &r.gamma)?;
            field_len(&format!("spherical_roots[{i}].cogamma"), &r.cogamma)?;
        }
        for (i, t) in doc.theta_plus.iter().enumerate() {
            field_len(&format!("theta_plus[{i}].coweight"), &t.coweight)?;
            if t.sign != 1 && t.sign != -1 {
                return Err(Error::Parse(format!(
                    "at `theta_plus[{i}].sign`: must be 1 or -1"
                )));
            }
        }
        for (i, c) in doc.colors.iter().enumerate() {
            field_len(&format!("colors[{i}]"), c)?;
        }
        let phi_x = RootSystem::new(
            doc.spherical_roots
                .iter()
                .map(|r| r.gamma.clone())
                .collect(),
            doc.spherical_roots
                .iter()
                .map(|r| r.cogamma.clone())
                .collect(),
        )
        .map_err(|e| e.to_string());
        let weyl = match &phi_x {
            Ok(rs) => rs.weyl_group()?,
            Err(_) => vec![],
        };
        let ambient = match &doc.ambient.cartan {
            Some(c) => Some(
                RootSystem::from_cartan(c)
                    .map_err(|e| Error::Parse(format!("at `ambient.cartan`: {e}")))?,
            ),
            None => None,
        };
        let ambient_rho_pairings = match (&ambient, &doc.ambient.pos_coroot_rho_pairings) {
            (Some(rs), _) => rs.rho.rho_pairings.clone(),
            (None, Some(p)) => p.clone(),
            (None, None) => {
                return Err(Error::Parse(
                    "at `ambient`: needs `cartan` or `pos_coroot_rho_pairings`".into(),
                ))
            }
        };
        Ok(Self {
            doc,
            phi_x,
            weyl,
            ambient,
            ambient_rho_pairings,
        })
    }

    pub fn name(&self) -> &str {
        &self.doc.name
    }

    pub fn rank(&self) -> usize {
        self.doc.rank
    }

    pub fn roots(&self) -> Result<&RootSystem> {
        self.phi_x
            .as_ref()
            .map_err(|e| Error::Invalid(format!("Φ_X is not a root system: {e}")))
    }

    pub fn theta_plus(&self) -> &[ThetaTriple] {
        &self.doc.theta_plus
    }

    pub fn rho_px(&self) -> &[i64] {
        &self.doc.rho_px
    }

    /// Θ = Θ⁺ ∪ (−Θ⁺), sorted.
    pub fn theta(&self) -> Vec<ThetaTriple> {
        let mut out: Vec<ThetaTriple> = self
            .doc
            .theta_plus
            .iter()
            .flat_map(|t| [t.clone(), t.negated()])
            .collect();
        out.sort();
        out
    }

    pub fn in_colors_cone(&self, v: &[i64]) -> bool {
        cone::in_cone(&self.doc.colors, v)
    }

    pub fn is_antidominant(&self, lambda: &[i64]) -> bool {
        self.doc
            .spherical_roots
            .iter()
            .all(|r| pair2(lambda, &r.gamma) <= 0)
    }

    /// The exponent k with e^{v̌}(δ_{P(X)}^{1/2}) = t^k, i.e. k = 2⟨v̌, ρ_{P(X)}⟩.
    pub fn rho_pairing2(&self, v: &[i64]) -> i64 {
        let s = lattice::dot(v, &self.doc.rho_px);
        debug_assert!(s % 2 == 0, "pairing with ρ_P(X) must be a half-integer");
        s / 2
    }

    /// ℓ = Σ c_i γ_i with c ≥ 0 and ⟨θ̌, ℓ⟩ ≥ 1 on Θ⁺, as a functional on doubled coweights.
    pub fn separation_functional(&self) -> Option<Vec<QRat>> {
        let roots = &self.doc.spherical_roots;
        let rows: Vec<Vec<QRat>> = self
            .doc
            .theta_plus
            .iter()
            .map(|t| {
                roots
                    .iter()
                    .map(|r| QRat::new(pair2(&t.coweight, &r.gamma).into(), 2.into()))
                    .collect()
            })
            .collect();
        let c = cone::separation_lp(&rows)?;
        let c = if c.len() == roots.len() {
            c
        } else {
            vec![QRat::from_integer(0.into()); roots.len()]
        };
        let mut ell = vec![QRat::from_integer(0.into()); self.rank()];
        for (ci, r) in c.iter().zip(roots) {
            for (k, g) in r.gamma.iter().enumerate() {
                ell[k] += ci * QRat::new((*g).into(), 2.into());
            }
        }
        Some(ell)
    }
}

/// {θ ∈ Θ⁺ : w_γ θ̌ ∈ −𝒯}, in Θ⁺ order.
pub fn theta_flipped_by(d: &SphericalDatum, gamma_index: usize) -> Result<Vec<ThetaTriple>> {
    let rs = d.roots()?;
    if gamma_index >= rs.rank() {
        return Err(Error::Invalid(format!(
            "spherical root index {gamma_index} out of range"
        )));
    }
    let s = rs.reflection(gamma_index)?;
    Ok(d.doc
        .theta_plus
        .iter()
        .filter(|t| d.in_colors_cone(&lattice::neg(&lattice::mat_vec(&s, &t.coweight))))
        .cloned()
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub datum: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const CHECK_CARTAN: &str = "cartan";
pub const CHECK_STABLE: &str = "theta-stable";
pub const CHECK_POSNEG: &str = "posneg";
pub const CHECK_CONVEX: &str = "convex";
pub const CHECK_SEPARATION: &str = "separation";
pub const CHECK_R2: &str = "r2-positive";

fn check(name: &str, failures: Vec<String>, ok_detail: &str) -> Check {
    Check {
        name: name.into(),
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            ok_detail.into()
        } else {
            failures.join("; ")
        },
    }
}

pub fn validate_datum(d: &SphericalDatum) -> ValidationReport {
    let doc = &d.doc;
    let mut checks = Vec::new();

    let mut f1 = Vec::new();
    if let Err(e) = &d.phi_x {
        f1.push(e.clone());
    }
    for (i, r) in doc.spherical_roots.iter().enumerate() {
        let p = pair2(&r.cogamma, &r.gamma);
        if p != 4 {
            f1.push(format!("⟨γ̌{i}, γ{i}⟩ = {}/2, expected 2", p));
        }
    }
    checks.push(check(
        CHECK_CARTAN,
        f1,
        "generalized Cartan matrix of finite type",
    ));

    let reflections: Vec<IMat> = match d.roots() {
        Ok(rs) => (0..rs.rank())
            .filter_map(|i| rs.reflection(i).ok())
            .collect(),
        Err(_) => vec![],
    };

    let theta = d.theta();
    let mut f2 = Vec::new();
    for (i, s) in reflections.iter().enumerate() {
        let mut img: Vec<ThetaTriple> = theta
            .iter()
            .map(|t| ThetaTriple::new(lattice::mat_vec(s, &t.coweight), t.sign, t.r2))
            .collect();
        img.sort();
        if img != theta {
            f2.push(format!("w_γ{i} does not preserve Θ"));
        }
    }
    checks.push(check(CHECK_STABLE, f2, "Θ is W_X-stable"));

    let mut f3 = Vec::new();
    for t in &doc.theta_plus {
        if !d.in_colors_cone(&t.coweight) {
            f3.push(format!("θ̌ {:?} of Θ⁺ is outside 𝒯", t.coweight));
        }
        for (i, s) in reflections.iter().enumerate() {
            let v = lattice::mat_vec(s, &t.coweight);
            if !d.in_colors_cone(&v) && !d.in_colors_cone(&lattice::neg(&v)) {
                f3.push(format!("w_γ{i}θ̌ = {v:?} lies in neither 𝒯 nor −𝒯"));
            }
        }
    }
    if d.roots().is_ok() {
        for (i, r) in doc.spherical_roots.iter().enumerate() {
            let flipped = theta_flipped_by(d, i).unwrap_or_default();
            if r.kind == RootKind::UPsi {
                if !flipped.is_empty() {
                    f3.push(format!("(U,ψ) root γ{i} flips elements of Θ⁺"));
                }
                continue;
            }
            if flipped.is_empty() {
                f3.push(format!("no element of Θ⁺ is flipped by w_γ{i}"));
            }
            for t in &flipped {
                if pair2(&t.coweight, &r.gamma) <= 0 {
                    f3.push(format!(
                        "w_γ{i} flips θ̌ {:?} although ⟨θ̌, γ{i}⟩ ≤ 0",
                        t.coweight
                    ));
                }
            }
            for c in &doc.colors {
                let in_theta = doc.theta_plus.iter().any(|t| &t.coweight == c);
                if in_theta && pair2(c, &r.gamma) > 0 && !flipped.iter().any(|t| &t.coweight == c) {
                    f3.push(format!(
                        "color {c:?} pairs positively with γ{i} but is not flipped"
                    ));
                }
            }
        }
    }
    checks.push(check(
        CHECK_POSNEG,
        f3,
        "sign dichotomy and flipped sets hold",
    ));

    let mut f4 = Vec::new();
    if doc.colors.iter().any(|c| lattice::is_zero(c)) {
        f4.push("0 is among the colors".into());
    }
    if !doc.colors.is_empty() && cone::pointed_certificate(&doc.colors).is_none() {
        f4.push("the cone 𝒯 contains a line".into());
    }
    checks.push(check(CHECK_CONVEX, f4, "𝒯 is strictly convex"));

    let mut f5 = Vec::new();
    if doc.affine && d.separation_functional().is_none() {
        f5.push("no ℓ = Σ cᵢγᵢ with cᵢ ≥ 0 separates Θ⁺".into());
    }
    checks.push(check(
        CHECK_SEPARATION,
        f5,
        if doc.affine {
            "Θ⁺ is separated by a hyperplane"
        } else {
            "not affine; skipped"
        },
    ));

    let f6: Vec<String> = doc
        .theta_plus
        .iter()
        .filter(|t| t.r2 < 1)
        .map(|t| format!("θ̌ {:?} has r2 = {}", t.coweight, t.r2))
        .collect();
    checks.push(check(CHECK_R2, f6, "every r2 ≥ 1"));

    ValidationReport {
        datum: doc.name.clone(),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIPLE: &str = r#"{
        "name": "triple-product", "affine": true, "twisted": false, "rank": 3, "lattice_scale": 2,
        "ambient": {"cartan": [[2,0,0],[0,2,0],[0,0,2]]},
        "spherical_roots": [
            {"gamma": [2,0,0], "cogamma": [2,0,0], "kind": "T-split"},
            {"gamma": [0,2,0], "cogamma": [0,2,0], "kind": "T-split"},
            {"gamma": [0,0,2], "cogamma": [0,0,2], "kind": "T-split"}],
        "theta_plus": [
            {"coweight": [1,1,-1], "sign": 1, "r2": 1},
            {"coweight": [1,-1,1], "sign": 1, "r2": 1},
            {"coweight": [-1,1,1], "sign": 1, "r2": 1},
            {"coweight": [1,1,1], "sign": 1, "r2": 1}],
        "colors": [[1,1,-1],[1,-1,1],[-1,1,1]],
        "rho_pX": [2,2,2]
    }"#;

    #[test]
    fn parses_and_validates_triple_product() {
        let d = parse_datum(TRIPLE).unwrap();
        assert_eq!(d.rank(), 3);
        assert_eq!(d.theta_plus().len(), 4);
        assert!(d
            .doc
            .spherical_roots
            .iter()
            .all(|r| r.kind == RootKind::TSplit));
        assert_eq!(d.weyl.len(), 8);
        let rep = validate_datum(&d);
        assert!(rep.all_pass(), "{rep:?}");
        assert_eq!(validate_datum(&d), rep);
        let f = theta_flipped_by(&d, 0).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|t| pair2(&t.coweight, &[2, 0, 0]) > 0));
    }

    #[test]
    fn parse_errors_name_the_field() {
        let missing = TRIPLE.replace(r#""rho_pX": [2,2,2]"#, r#""extra": 1"#);
        let e = parse_datum(&missing).unwrap_err().to_string();
        assert!(e.contains("extra") || e.contains("rho_pX"), "{e}");
        let short = TRIPLE.replace(r#""rho_pX": [2,2,2]"#, r#""rho_pX": [2,2]"#);
        let e = parse_datum(&short).unwrap_err().to_string();
        assert!(e.contains("rho_pX"), "{e}");
        let noroot = TRIPLE.replace(r#""rho_pX": [2,2,2]"#, r#""rho_pX": 3"#);
        let e = parse_datum(&noroot).unwrap_err().to_string();
        assert!(e.contains("rho_pX"), "{e}");
    }

    #[test]
    fn mutations_fail_the_right_checks() {
        let mut d = parse_datum(TRIPLE).unwrap();
        d.doc.theta_plus.pop();
        let rep = validate_datum(&d);
        assert!(!rep.get(CHECK_STABLE).unwrap().pass);

        let mut d = parse_datum(TRIPLE).unwrap();
        d.doc
            .theta_plus
            .push(ThetaTriple::new(vec![3, -1, -1], 1, 1));
        d.doc
            .theta_plus
            .push(ThetaTriple::new(vec![-3, 1, 1], 1, 1));
        let rep = validate_datum(&d);
        assert!(!rep.get(CHECK_POSNEG).unwrap().pass);
    }
}
