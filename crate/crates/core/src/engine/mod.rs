//! β, the cocycle B_w, both forms of Ω, L-values, volumes, Plancherel pairings and local factors.

mod cocycle;
mod eisenstein;
mod lvalues;
mod omega;
mod plancherel;

pub use cocycle::{beta, bw, bw_statement, bw_unchecked, color_data, twist, ColorData};
pub use eisenstein::{eisenstein_factors, EisensteinFactors};
pub use lvalues::{
    constant_c, lfactors, lfull, lhalf, q_factor, tamagawa_volume, volume, LFactor, LFactorization,
};
pub use omega::{
    omega_at_delta, omega_schur, omega_schur_with, omega_sum, omega_sum_with, p_poly, prefactor,
    triangularity_defects, Form, OmegaValue, DEFAULT_SUBSET_CAP,
};
pub use plancherel::{plancherel_pairing, PlancherelValue};


#[cfg(test)]
mod plancherel_tests {
    use super::*;
    use crate::exact::TRat;
    use crate::fixtures::{list_fixtures, load_datum};

    #[test]
    fn diagonal_and_vanishing() {
        for name in list_fixtures() {
            let d = load_datum(name).unwrap();
            if d.doc.twisted {
                continue;
            }
            let z = vec![0; d.rank()];
            let p = plancherel_pairing(&d, &z, &z, 12).unwrap();
            let c = constant_c(&d).unwrap();
            let expect = &c * &TRat::from_poly(crate::exact::TPoly::int(d.weyl.len() as i64));
            assert_eq!(p.exact.clone().unwrap(), expect, "{name}");
            let l: Vec<i64> = d.roots().unwrap().simple_coroots[0]
                .iter()
                .map(|x| -2 * x)
                .collect();
            if d.is_antidominant(&l) {
                let p = plancherel_pairing(&d, &l, &z, 12).unwrap();
                assert!(p.exact.unwrap().is_zero(), "{name}");
            }
        }
    }
}
