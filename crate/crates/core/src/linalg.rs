//! Small dense linear algebra: exact rational elimination, nonnegative least
//! squares, float null vectors.

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use crate::kernel::Rational;

/// Inverse by Gauss-Jordan elimination; `None` if singular.
pub fn rational_inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::from_integer(1.into())
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, piv);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        let pivot = a[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot) {
                *x -= &f * p;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(a: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot) {
                *x -= &f * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A nonzero `v` with `A v = 0`, or `None` if `A` has full column rank.
pub fn rational_null_vector(a: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rational::zero(); cols];
    v[free] = Rational::from_integer(1.into());
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[row][free].clone();
    }
    Some(v)
}

pub fn rational_rank(a: &[Vec<Rational>]) -> usize {
    let mut m = a.to_vec();
    rref(&mut m).len()
}

/// `min |A x - b|` subject to `x >= 0` (Lawson-Hanson active set).
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.ncols();
    let mut x = DVector::<f64>::zeros(n);
    let mut passive = vec![false; n];
    let scale = a.amax().max(1.0) * b.amax().max(1.0);
    let tol = 1e-12 * scale * n.max(1) as f64;

    let solve_passive = |passive: &[bool]| -> DVector<f64> {
        let idx: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
        let sub = a.select_columns(&idx);
        let sol = sub
            .svd(true, true)
            .solve(b, 1e-14)
            .unwrap_or_else(|_| DVector::zeros(idx.len()));
        let mut z = DVector::<f64>::zeros(n);
        for (k, &j) in idx.iter().enumerate() {
            z[j] = sol[k];
        }
        z
    };

    for _ in 0..3 * n + 10 {
        let w = a.transpose() * (b - a * &x);
        let Some(j) = (0..n)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&i, &k| w[i].total_cmp(&w[k]))
        else {
            break;
        };
        passive[j] = true;
        loop {
            let z = solve_passive(&passive);
            if (0..n).filter(|&i| passive[i]).all(|i| z[i] > 0.0) {
                x = z;
                break;
            }
            let mut alpha = f64::INFINITY;
            for i in 0..n {
                if passive[i] && z[i] <= 0.0 {
                    let denom = x[i] - z[i];
                    if denom > 0.0 {
                        alpha = alpha.min(x[i] / denom);
                    }
                }
            }
            if !alpha.is_finite() {
                alpha = 0.0;
            }
            x += (&z - &x) * alpha;
            for i in 0..n {
                if passive[i] && x[i] <= 1e-15 {
                    passive[i] = false;
                    x[i] = 0.0;
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
    }
    x
}

/// A unit `v` with `|A v|` below `rel_tol` times the largest singular value.
pub fn float_null_vector(a: &DMatrix<f64>, rel_tol: f64) -> Option<DVector<f64>> {
    let (m, n) = a.shape();
    // pad with zero rows so the SVD returns all n right singular vectors
    let padded = if m < n {
        let mut p = DMatrix::<f64>::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.as_ref()?;
    let s = &svd.singular_values;
    let smax = s.max();
    let (k, smin) = s
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .map(|(k, v)| (k, *v))?;
    if smin <= rel_tol * smax.max(1e-300) {
        Some(vt.row(k).transpose())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};

    #[test]
    fn inverse_roundtrip() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(1)]];
        let inv = rational_inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![int(1), int(-1)], vec![int(-1), int(2)]]);
        assert!(rational_inverse(&[vec![int(1), int(2)], vec![int(2), int(4)]]).is_none());
    }

    #[test]
    fn null_vector() {
        let a = vec![vec![int(1), int(1), int(1)], vec![int(1), int(-1), int(0)]];
        let v = rational_null_vector(&a).unwrap();
        for row in &a {
            let s: Rational = row.iter().zip(&v).map(|(x, y)| x * y).sum();
            assert!(s.is_zero());
        }
        assert!(rational_null_vector(&[vec![int(1), int(0)], vec![int(0), rat(1, 2)]]).is_none());
        assert_eq!(rational_rank(&a), 2);
    }

    #[test]
    fn nnls_recovers_nonnegative_solution() {
        let a = DMatrix::from_row_slice(
            3,
            4,
            &[1.0, 1.0, 1.0, 1.0, 1.0, -1.0, 0.0, 2.0, 0.0, 1.0, 1.0, 3.0],
        );
        let x_true = DVector::from_vec(vec![0.2, 0.0, 0.5, 0.3]);
        let b = &a * &x_true;
        let x = nnls(&a, &b);
        assert!(x.iter().all(|v| *v >= 0.0));
        assert!((&a * &x - &b).norm() < 1e-12);
    }

    #[test]
    fn nnls_respects_the_sign_constraint() {
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let b = DVector::from_vec(vec![-1.0]);
        let x = nnls(&a, &b);
        assert_eq!(x, DVector::zeros(2));
    }

    #[test]
    fn float_null() {
        let a = DMatrix::from_row_slice(2, 3, &[1.0, 1.0, 1.0, 1.0, -1.0, 0.0]);
        let v = float_null_vector(&a, 1e-12).unwrap();
        assert!((&a * &v).norm() < 1e-12);
        let full = DMatrix::<f64>::identity(3, 3);
        assert!(float_null_vector(&full, 1e-12).is_none());
    }
}
