//! Built-in spherical data, orbit paths and regression targets.

mod suite;
mod targets;

pub use suite::{antidominant_box, lambda_grid, regression_suite, statement_suite, SuiteEntry, SuiteReport};
pub use targets::statement_targets;

use serde::{Deserialize, Serialize};

use crate::datum::{parse_datum, RootKind, SphericalDatum};
use crate::engine::{ColorData, LFactor};
use crate::error::{Error, Result};
use crate::exact::lattice::IVec;
use crate::exact::{TPoly, TorusLaurent, TorusRational};
use crate::rankone::{parse_path, OrbitPath};

const DATA: &[(&str, &str)] = &[
    (
        "whittaker-a1",
        include_str!("../../fixtures/whittaker-a1.json"),
    ),
    (
        "whittaker-a2",
        include_str!("../../fixtures/whittaker-a2.json"),
    ),
    ("group-a1", include_str!("../../fixtures/group-a1.json")),
    ("group-a2", include_str!("../../fixtures/group-a2.json")),
    (
        "shalika-gl4",
        include_str!("../../fixtures/shalika-gl4.json"),
    ),
    (
        "triple-product",
        include_str!("../../fixtures/triple-product.json"),
    ),
    ("gp-so3-so4", include_str!("../../fixtures/gp-so3-so4.json")),
    ("gl2-sl3", include_str!("../../fixtures/gl2-sl3.json")),
    ("gl3-sl4", include_str!("../../fixtures/gl3-sl4.json")),
    ("sp4-gl4", include_str!("../../fixtures/sp4-gl4.json")),
    (
        "sp2xsp2-sp4",
        include_str!("../../fixtures/sp2xsp2-sp4.json"),
    ),
];

const PATHS: &[(&str, &str)] = &[
    (
        "sl2-sl3",
        include_str!("../../fixtures/paths/sl2-sl3.json"),
    ),
    (
        "sp2-sp4",
        include_str!("../../fixtures/paths/sp2-sp4.json"),
    ),
];

pub fn list_fixtures() -> Vec<&'static str> {
    DATA.iter().map(|(n, _)| *n).collect()
}

/// The shipped JSON text of a datum.
pub fn datum_source(name: &str) -> Result<&'static str> {
    DATA.iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .ok_or_else(|| Error::UnknownFixture(name.to_string()))
}

pub fn load_datum(name: &str) -> Result<SphericalDatum> {
    parse_datum(datum_source(name)?)
}

pub fn list_paths() -> Vec<&'static str> {
    PATHS.iter().map(|(n, _)| *n).collect()
}

pub fn load_path(name: &str) -> Result<OrbitPath> {
    let text = PATHS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .ok_or_else(|| Error::UnknownFixture(name.to_string()))?;
    parse_path(text)
}

/// c · e^{lead} · ∏ (1 − σ t^{r2} e^{θ̌})^{exponent}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Printed {
    pub coeff: i64,
    pub lead: IVec,
    pub factors: Vec<LFactor>,
}

impl Printed {
    pub fn value(&self, rank: usize) -> Result<TorusRational> {
        let mut nums = vec![TorusLaurent::monomial(
            self.lead.clone(),
            TPoly::int(self.coeff),
        )];
        let mut dens = Vec::new();
        for f in &self.factors {
            if f.coweight.len() != rank {
                return Err(Error::Dimension {
                    expected: rank,
                    found: f.coweight.len(),
                });
            }
            let target = if f.exponent > 0 { &mut nums } else { &mut dens };
            for _ in 0..f.exponent.unsigned_abs() {
                target.push(f.laurent());
            }
        }
        TorusRational::from_factors(rank, &nums, &dens)
    }
}

/// Which sign σ(w) multiplies each summand of a printed W_X-sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignRule {
    Trivial,
    /// (−1)^{ℓ(w)} in W_X.
    Length,
    /// A character of W_X given by its values on the simple reflections.
    Generators(Vec<i64>),
}

/// e^{outer} · δ_{P(X)}^{−1/2}(x_λ̌) · Σ_{W_X} σ(w) [∏ factors · e^{λ̌ + shift}](^wχ).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaShape {
    pub sign: SignRule,
    pub factors: Vec<LFactor>,
    pub shift: IVec,
    pub outer: IVec,
    /// Compare up to a factor independent of λ̌ instead of exactly.
    pub up_to_factor: bool,
}

/// Pull-back of a path coefficient to the X-lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Restriction {
    pub images: Vec<IVec>,
    pub shifts: Vec<i64>,
    pub printed: Printed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expected {
    WeylOrder(usize),
    /// B_w for the W_X element with the given word.
    Bw { word: Vec<usize>, printed: Printed },
    Omega(OmegaShape),
    /// Weights of L(π,Ad,0)·L_X up to ζ-factors, each entering as (1 − σ t^{r2} e^{θ̌})^{−1}.
    LMultiset(Vec<LFactor>),
    /// `b_w of the fixture path with the given index, in ambient coordinates.
    Path {
        index: usize,
        printed: Printed,
        restriction: Option<Restriction>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Target {
    pub name: String,
    pub citation: String,
    pub expected: Expected,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub datum: SphericalDatum,
    pub expected: Vec<Target>,
    pub paths: Vec<OrbitPath>,
}

pub fn get_fixture(name: &str) -> Result<Fixture> {
    let datum = load_datum(name)?;
    let (expected, path_names) = targets::targets_for(name);
    let paths = path_names
        .iter()
        .map(|p| load_path(p))
        .collect::<Result<_>>()?;
    Ok(Fixture {
        datum,
        expected,
        paths,
    })
}

/// A displayed rank-one B_{w_γ} with γ = γ̌ = 2 in doubled coordinates, checked against the statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementTarget {
    pub name: String,
    pub citation: String,
    pub kind: RootKind,
    pub color: ColorData,
    pub printed: Printed,
}
