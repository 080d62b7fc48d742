//! Finite Fourier transforms with ψ(x) = exp(2πi{x}_p) and self-dual measures.

use num_complex::Complex64;

use super::{e_frac, StepFunction};
use crate::error::{Error, Result};
use crate::par::Exec;

pub const DEFAULT_GRID_CAP: usize = 10_000_000;

fn twiddles(side: usize) -> Vec<Complex64> {
    (0..side as u64).map(|k| e_frac(k, side as u64)).collect()
}

/// f̂(ξ) = ∫ f(x)ψ(xξ)dx; the output has support and smoothness exponents swapped.
pub fn fourier_1d(f: &StepFunction<Complex64>) -> Result<StepFunction<Complex64>> {
    if f.dim != 1 {
        return Err(Error::Invalid(
            "fourier_1d needs a one-dimensional function".into(),
        ));
    }
    let side = f.side();
    let tw = twiddles(side);
    let vol = (f.p as f64).powi(-(f.n as i32));
    let values: Vec<Complex64> = (0..side)
        .map(|c| {
            f.values()
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != Complex64::new(0.0, 0.0))
                .map(|(a, v)| v * tw[(a * c) % side])
                .sum::<Complex64>()
                * vol
        })
        .collect();
    StepFunction::from_values(f.p, 1, f.n, f.m, values)
}

/// (Ff)(v, w) = ∫ f(x, y) ψ(−xw + yv) dx dy, as two separable passes.
pub fn fourier_k2(f: &StepFunction<Complex64>) -> Result<StepFunction<Complex64>> {
    fourier_k2_with(f, Exec::default())
}

pub fn fourier_k2_with(f: &StepFunction<Complex64>, exec: Exec) -> Result<StepFunction<Complex64>> {
    if f.dim != 2 {
        return Err(Error::Invalid(
            "fourier_k2 needs a two-dimensional function".into(),
        ));
    }
    let side = f.side();
    if side.saturating_mul(side) > DEFAULT_GRID_CAP {
        return Err(Error::CapExceeded(format!(
            "grid of {} points exceeds {DEFAULT_GRID_CAP}",
            side * side
        )));
    }
    let tw = twiddles(side);
    let zero = Complex64::new(0.0, 0.0);
    let rows: Vec<Vec<Complex64>> = exec.map_range(side, |a| {
        let row = &f.values()[a * side..(a + 1) * side];
        if row.iter().all(|v| *v == zero) {
            return Vec::new();
        }
        (0..side)
            .map(|iv| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != zero)
                    .map(|(b, v)| v * tw[(b * iv) % side])
                    .sum()
            })
            .collect()
    });
    let vol = (f.p as f64).powi(-2 * f.n as i32);
    let out: Vec<Vec<Complex64>> = exec.map_range(side, |iv| {
        (0..side)
            .map(|iw| {
                rows.iter()
                    .enumerate()
                    .filter(|(_, r)| !r.is_empty())
                    .map(|(a, r)| r[iv] * tw[(side - (a * iw) % side) % side])
                    .sum::<Complex64>()
                    * vol
            })
            .collect()
    });
    StepFunction::from_values(f.p, 2, f.n, f.m, out.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::super::Coset;
    use super::*;
    use crate::exact::qrat::QRat;

    fn ind(p: u64, m: u32, n: u32, b: &[Coset]) -> StepFunction<Complex64> {
        StepFunction::<Complex64>::indicator(p, m, n, b).unwrap()
    }

    #[test]
    fn lattice_indicators() {
        let f = ind(3, 2, 3, &[Coset::ball(1), Coset::ball(0)]);
        let ff = fourier_k2(&f).unwrap();
        let target = ind(3, 3, 2, &[Coset::ball(0), Coset::ball(-1)]).map(|v| v / 3.0);
        assert!(ff.max_diff(&target).unwrap() < 1e-12);
        let one = ind(3, 1, 1, &[Coset::ball(0), Coset::ball(0)]);
        assert!(fourier_k2(&one).unwrap().max_diff(&one).unwrap() < 1e-12);
    }

    #[test]
    fn inversion_and_unitarity() {
        let mut f = StepFunction::<Complex64>::zero(3, 2, 1, 2).unwrap();
        let side = f.side();
        for i in 0..side {
            for j in 0..side {
                let x = ((i * 7 + j * 13) % 11) as f64 - 5.0;
                f.set(&[i, j], Complex64::new(x, (i as f64) - (j as f64) * 0.5));
            }
        }
        let ff = fourier_k2(&f).unwrap();
        let fff = fourier_k2(&ff).unwrap();
        assert!(fff.max_diff(&f).unwrap() < 1e-9);
        let norm = |g: &StepFunction<Complex64>| {
            g.values().iter().map(|v| v.norm_sqr()).sum::<f64>()
                * (g.p as f64).powi(-2 * g.n as i32)
        };
        assert!((norm(&f) - norm(&ff)).abs() < 1e-9 * norm(&f));
        let seq = fourier_k2_with(&f, Exec::Sequential).unwrap();
        assert!(seq.max_diff(&ff).unwrap() < 1e-12);
    }

    #[test]
    fn one_dimensional() {
        let f = StepFunction::<QRat>::indicator(5, 1, 2, &[Coset::ball(0)]).unwrap();
        let g = fourier_1d(&StepFunction::from_rational(&f)).unwrap();
        for (k, v) in g.values().iter().enumerate() {
            let expected = if k % 25 == 0 { 1.0 } else { 0.0 };
            assert!((v - Complex64::new(expected, 0.0)).norm() < 1e-12);
        }
    }
}
