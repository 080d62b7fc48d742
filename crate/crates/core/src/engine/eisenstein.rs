use crate::error::Result;
use crate::exact::{TPoly, TorusLaurent, TorusRational};
use crate::roots::{RootSystem, WeylElement};

#[derive(Clone, Debug, PartialEq)]
pub struct EisensteinFactors {
    pub j_w: TorusRational,
    pub j_tilde_w: TorusRational,
    pub fw_tw_ratio: TorusRational,
}

/// j_w over α̌ > 0 with wα̌ < 0, j̃_w over the rest, and the F_w/T_w ratio.
pub fn eisenstein_factors(ambient: &RootSystem, w: &WeylElement) -> Result<EisensteinFactors> {
    let rank = ambient.lattice_rank();
    let one = TPoly::one();
    let t2 = TPoly::t_pow(2);
    let flipped = ambient.flipped_coroots(w);
    let kept: Vec<_> = ambient
        .pos_coroots
        .iter()
        .filter(|c| !flipped.contains(c))
        .cloned()
        .collect();
    let j = |set: &[Vec<i64>]| {
        let nums: Vec<_> = set
            .iter()
            .map(|c| TorusLaurent::one_minus(t2.clone(), c))
            .collect();
        let dens: Vec<_> = set
            .iter()
            .map(|c| TorusLaurent::one_minus(one.clone(), c))
            .collect();
        TorusRational::from_factors(rank, &nums, &dens)
    };
    let ratio_nums: Vec<_> = flipped
        .iter()
        .map(|c| TorusLaurent::one_minus(one.clone(), c))
        .collect();
    let ratio_dens: Vec<_> = flipped
        .iter()
        .map(|c| TorusLaurent::one_minus(t2.clone(), &crate::exact::lattice::neg(c)))
        .collect();
    Ok(EisensteinFactors {
        j_w: j(&flipped)?,
        j_tilde_w: j(&kept)?,
        fw_tw_ratio: TorusRational::from_factors(rank, &ratio_nums, &ratio_dens)?,
    })
}
