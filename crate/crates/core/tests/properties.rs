//! Property tests for the engine invariants on random inputs.

use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;
use sphericalis::datum::{validate_datum, SphericalDatum};
use sphericalis::engine::{
    beta, bw_unchecked, lfull, omega_schur, omega_schur_with, omega_sum, omega_sum_with,
    p_poly, plancherel_pairing, triangularity_defects, twist, DEFAULT_SUBSET_CAP,
};
use sphericalis::exact::qrat::{q, qi};
use sphericalis::exact::{
    ct_exact, ct_series, weyl_substitute, PointedDen, QRat, TPoly, TorusLaurent, TorusRational,
};
use sphericalis::fixtures::{antidominant_box, list_fixtures, load_datum};
use sphericalis::padic::{
    dist_pair, fourier_k2, Coset, Density, QuadForm, ShellMeasureParams, StepFunction,
};
use sphericalis::par::Exec;

fn data() -> &'static [SphericalDatum] {
    static DATA: OnceLock<Vec<SphericalDatum>> = OnceLock::new();
    DATA.get_or_init(|| {
        list_fixtures()
            .into_iter()
            .map(|n| load_datum(n).unwrap())
            .collect()
    })
}

fn untwisted() -> Vec<usize> {
    (0..data().len())
        .filter(|&i| data()[i].doc.affine && !data()[i].doc.twisted)
        .collect()
}

/// A fixture index with a λ̌ from its antidominant box of the given bound.
fn datum_and_lambda(pool: Vec<usize>, bound: i64) -> impl Strategy<Value = (usize, Vec<i64>)> {
    prop::sample::select(pool).prop_flat_map(move |i| {
        let lambdas = antidominant_box(&data()[i], bound);
        (Just(i), prop::sample::select(lambdas))
    })
}

fn all_indices() -> Vec<usize> {
    (0..data().len()).collect()
}

fn arb_laurent(rank: usize) -> impl Strategy<Value = TorusLaurent> {
    prop::collection::vec(
        (prop::collection::vec(-2i64..3, rank), 0i64..3, -3i64..4),
        0..5,
    )
    .prop_map(move |v| {
        TorusLaurent::from_terms(
            rank,
            v.into_iter().map(|(e, k, c)| (e, TPoly::monomial(qi(c), k))),
        )
    })
}

/// Denominators 1 − σ t^{r2} e^{θ} with ⟨(1, 1), θ⟩ ≥ 1.
fn arb_dens() -> impl Strategy<Value = Vec<PointedDen>> {
    let thetas = vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![2, -1], vec![-1, 2]];
    prop::collection::vec(
        (prop::sample::select(thetas), prop::bool::ANY, 1i64..3),
        0..3,
    )
    .prop_map(|v| {
        v.into_iter()
            .map(|(theta, neg, r2)| PointedDen {
                sign: if neg { -1 } else { 1 },
                r2,
                theta,
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ct_series_agrees_with_ct_exact(num in arb_laurent(2), dens in arb_dens(), order in 4i64..10) {
        let exact = ct_exact(&num, &dens, &[qi(1), qi(1)]).unwrap();
        let factors: Vec<TorusLaurent> = dens
            .iter()
            .map(|d| TorusLaurent::one_minus(TPoly::monomial(qi(d.sign), d.r2), &d.theta))
            .collect();
        let f = TorusRational::from_factors(2, &[num], &factors).unwrap();
        let series = ct_series(&f, order).unwrap();
        prop_assert_eq!(series, exact.truncate(order));
    }

    #[test]
    fn weyl_substitute_is_a_group_action(i in prop::sample::select(all_indices()), a in 0usize..48, b in 0usize..48, seed in 0u64..1000) {
        let d = &data()[i];
        let (w1, w2) = (&d.weyl[a % d.weyl.len()], &d.weyl[b % d.weyl.len()]);
        let f = TorusLaurent::from_terms(
            d.rank(),
            (0..3).map(|k| {
                let e: Vec<i64> = (0..d.rank()).map(|j| ((seed as i64 + 3 * k + j as i64) % 5) - 2).collect();
                (e, TPoly::int(k + 1))
            }),
        );
        let two_steps = weyl_substitute(&weyl_substitute(&f, &w1.matrix).unwrap(), &w2.matrix).unwrap();
        let product = sphericalis::exact::lattice::mat_mul(&w2.matrix, &w1.matrix);
        prop_assert_eq!(two_steps, weyl_substitute(&f, &product).unwrap());
    }

    #[test]
    fn cocycle_on_random_pairs(i in prop::sample::select(all_indices()), a in 0usize..48, b in 0usize..48) {
        let d = &data()[i];
        let (w1, w2) = (&d.weyl[a % d.weyl.len()], &d.weyl[b % d.weyl.len()]);
        let product = sphericalis::exact::lattice::mat_mul(&w1.matrix, &w2.matrix);
        let w12 = d.weyl.iter().find(|w| w.matrix == product).expect("W_X is closed");
        let lhs = bw_unchecked(d, w12).unwrap();
        let rhs = &twist(&bw_unchecked(d, w1).unwrap(), w2).unwrap() * &bw_unchecked(d, w2).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn validation_is_idempotent(i in prop::sample::select(all_indices())) {
        let d = &data()[i];
        prop_assert_eq!(validate_datum(d), validate_datum(d));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn consistency_and_triangularity((i, l) in datum_and_lambda(all_indices(), 3)) {
        let d = &data()[i];
        let schur = omega_schur(d, &l).unwrap();
        prop_assert_eq!(omega_sum(d, &l).unwrap().value, &beta(d).unwrap() * &schur.value);
        prop_assert!(triangularity_defects(d, &l).unwrap().is_empty());
    }

    #[test]
    fn parallel_matches_sequential((i, l) in datum_and_lambda(all_indices(), 2)) {
        let d = &data()[i];
        prop_assert_eq!(
            omega_sum_with(d, &l, Exec::Sequential).unwrap(),
            omega_sum_with(d, &l, Exec::Parallel).unwrap()
        );
        prop_assert_eq!(
            omega_schur_with(d, &l, Exec::Sequential, DEFAULT_SUBSET_CAP).unwrap(),
            omega_schur_with(d, &l, Exec::Parallel, DEFAULT_SUBSET_CAP).unwrap()
        );
    }

    #[test]
    fn p_poly_and_lfull_are_w_invariant((i, l) in datum_and_lambda(untwisted(), 2)) {
        let d = &data()[i];
        let p = p_poly(d, &l).unwrap();
        let lx = lfull(d).unwrap();
        for s in d.weyl.iter().filter(|w| w.length() == 1) {
            prop_assert_eq!(twist(&p, s).unwrap(), p.clone());
            prop_assert_eq!(twist(&lx, s).unwrap(), lx.clone());
        }
        let zero = vec![0; d.rank()];
        prop_assert_eq!(p_poly(d, &zero).unwrap(), TorusRational::one(d.rank()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn plancherel_diagonal_is_positive((i, l) in datum_and_lambda(untwisted(), 1)) {
        let d = &data()[i];
        let p = plancherel_pairing(d, &l, &l, 12).unwrap();
        let (c, _) = p.series.lowest().expect("nonzero diagonal");
        prop_assert!(c > QRat::from_integer(0.into()));
    }
}

fn arb_step(p: u64) -> impl Strategy<Value = StepFunction<Complex64>> {
    let side = (p * p) as usize;
    prop::collection::vec((-4.0f64..4.0, -4.0f64..4.0), side * side).prop_map(move |v| {
        let values = v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        StepFunction::from_values(p, 2, 1, 1, values).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn fourier_is_unitary_and_involutive(f in prop::sample::select(vec![3u64, 5]).prop_flat_map(arb_step)) {
        let ff = fourier_k2(&f).unwrap();
        let vol = |g: &StepFunction<Complex64>| {
            g.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * (g.p as f64).powi(-2 * g.n as i32)
        };
        prop_assert!((vol(&f) - vol(&ff)).abs() <= 1e-9 * vol(&f).max(1.0));
        prop_assert!(fourier_k2(&ff).unwrap().max_diff(&f).unwrap() < 1e-9);
    }

    #[test]
    fn shell_pairing_is_equivariant(p in prop::sample::select(vec![3u64, 5, 7]), a in 1i64..7, u in 0.1f64..0.9) {
        let a = 1 + (a - 1) % (p as i64 - 1);
        let params = ShellMeasureParams { p, form: QuadForm::default_nonsplit(p), ramified: false };
        let density = Density::Quadratic { params, u: Complex64::new(u, 0.0) };
        let boxes = |b: &[Coset]| StepFunction::from_rational(&StepFunction::<QRat>::indicator(p, 2, 2, b).unwrap());
        let f = boxes(&[Coset::new(qi(a), 1), Coset::ball(0)]);
        let scaled = boxes(&[Coset::new(q(a, p as i64), 0), Coset::ball(-1)]);
        let x = dist_pair(&density, &f).unwrap();
        let y = dist_pair(&density, &scaled).unwrap();
        let factor = (p * p) as f64 / (u * u);
        prop_assert!((y - x * factor).norm() < 1e-12 * y.norm().max(1.0));
    }
}
