//! Exact rational linear programming for cone membership and separation.

use num_traits::{One, Signed, Zero};

use crate::exact::qrat::QRat;

fn qz(x: i64) -> QRat {
    QRat::from_integer(x.into())
}

/// A point x ≥ 0 with a·x = b, by phase-one simplex with Bland's rule.
pub fn feasible(a: &[Vec<QRat>], b: &[QRat]) -> Option<Vec<QRat>> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    if m == 0 {
        return Some(vec![QRat::zero(); n]);
    }
    // Tableau columns: n originals, m artificials, rhs.
    let width = n + m + 1;
    let mut tab: Vec<Vec<QRat>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = vec![QRat::zero(); width];
        for j in 0..n {
            row[j] = if flip {
                -a[i][j].clone()
            } else {
                a[i][j].clone()
            };
        }
        row[n + i] = QRat::one();
        row[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        tab.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Objective row: minimize the sum of artificials, stored as reduced costs.
    let mut obj = vec![QRat::zero(); width];
    for row in &tab {
        for j in 0..width {
            if j < n || j == width - 1 {
                obj[j] -= &row[j];
            }
        }
    }
    loop {
        let Some(enter) = (0..n + m).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, QRat)> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave?;
        let piv = tab[r][enter].clone();
        for x in tab[r].iter_mut() {
            *x /= &piv;
        }
        let pivot_row = tab[r].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (x, p) in obj.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        basis[r] = enter;
    }
    if !obj[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![QRat::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab[i][width - 1].clone();
        }
    }
    Some(x)
}

/// Whether `candidate` lies in the cone spanned by `generators`.
pub fn in_cone(generators: &[Vec<i64>], candidate: &[i64]) -> bool {
    if candidate.iter().all(|&c| c == 0) {
        return true;
    }
    let dim = candidate.len();
    let a: Vec<Vec<QRat>> = (0..dim)
        .map(|i| generators.iter().map(|g| qz(g[i])).collect())
        .collect();
    let b: Vec<QRat> = candidate.iter().map(|&c| qz(c)).collect();
    feasible(&a, &b).is_some()
}

/// A functional ℓ with ℓ(g) ≥ 1 for every generator, certifying a pointed cone.
pub fn pointed_certificate(generators: &[Vec<i64>]) -> Option<Vec<QRat>> {
    let dim = generators.first()?.len();
    // ℓ = p − q, slack s: ⟨g, p − q⟩ − s = 1.
    let k = generators.len();
    let a: Vec<Vec<QRat>> = generators
        .iter()
        .enumerate()
        .map(|(r, g)| {
            let mut row = vec![QRat::zero(); 2 * dim + k];
            for i in 0..dim {
                row[i] = qz(g[i]);
                row[dim + i] = -qz(g[i]);
            }
            row[2 * dim + r] = -QRat::one();
            row
        })
        .collect();
    let b = vec![QRat::one(); k];
    let x = feasible(&a, &b)?;
    Some((0..dim).map(|i| &x[i] - &x[dim + i]).collect())
}

/// Coefficients c ≥ 0 with Σ_j c_j·pairing[i][j] ≥ 1 for every row i.
pub fn separation_lp(pairing: &[Vec<QRat>]) -> Option<Vec<QRat>> {
    let k = pairing.len();
    let n = pairing.first().map_or(0, |r| r.len());
    if k == 0 {
        return Some(vec![QRat::zero(); n]);
    }
    let a: Vec<Vec<QRat>> = pairing
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut out = row.clone();
            out.extend((0..k).map(|j| if j == r { -QRat::one() } else { QRat::zero() }));
            out
        })
        .collect();
    let b = vec![QRat::one(); k];
    let x = feasible(&a, &b)?;
    Some(x[..n].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        let gens = vec![vec![1, 0], vec![1, 1]];
        assert!(in_cone(&gens, &[0, 0]));
        assert!(in_cone(&gens, &[3, 1]));
        assert!(!in_cone(&gens, &[-1, 0]));
        assert!(!in_cone(&gens, &[0, 1]));
    }

    #[test]
    fn pointedness() {
        assert!(pointed_certificate(&[vec![1, 0], vec![0, 1]]).is_some());
        assert!(pointed_certificate(&[vec![1, 0], vec![-1, 0]]).is_none());
        let ell = pointed_certificate(&[vec![1, -1], vec![0, 1]]).unwrap();
        assert!(&ell[0] - &ell[1] >= QRat::one());
    }

    #[test]
    fn separation() {
        let p = vec![vec![qz(1), qz(0)], vec![qz(0), qz(1)]];
        let c = separation_lp(&p).unwrap();
        assert!(c.iter().all(|x| !x.is_negative()));
        let bad = vec![vec![qz(1)], vec![qz(-1)]];
        assert!(separation_lp(&bad).is_none());
    }
}
