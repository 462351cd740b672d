//! Small dense linear algebra helpers for dimensions 2 to 4.

use nalgebra::{DMatrix, SymmetricEigen};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn normalized(a: &[f64]) -> Vec<f64> {
    let l = norm(a);
    a.iter().map(|x| x / l).collect()
}

/// Orthonormal basis of the orthogonal complement of the unit vector `n`.
pub fn tangent_basis(n: &[f64]) -> Vec<Vec<f64>> {
    let dim = n.len();
    match dim {
        2 => vec![vec![-n[1], n[0]]],
        3 => {
            let pick = (0..3)
                .min_by(|&i, &j| n[i].abs().total_cmp(&n[j].abs()))
                .unwrap_or(0);
            let mut e = [0.0; 3];
            e[pick] = 1.0;
            let d = dot(&e, n);
            let t1 = normalized(&[e[0] - d * n[0], e[1] - d * n[1], e[2] - d * n[2]]);
            let t2 = vec![
                n[1] * t1[2] - n[2] * t1[1],
                n[2] * t1[0] - n[0] * t1[2],
                n[0] * t1[1] - n[1] * t1[0],
            ];
            vec![t1, t2]
        }
        _ => {
            // Gram-Schmidt against the coordinate vectors, skipping the most
            // aligned one.
            let skip = (0..dim)
                .max_by(|&i, &j| n[i].abs().total_cmp(&n[j].abs()))
                .unwrap_or(0);
            let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim - 1);
            for k in (0..dim).filter(|&k| k != skip) {
                let mut v = vec![0.0; dim];
                v[k] = 1.0;
                let d = dot(&v, n);
                v.iter_mut().zip(n).for_each(|(x, y)| *x -= d * y);
                for b in &basis {
                    let d = dot(&v, b);
                    v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
                }
                basis.push(normalized(&v));
            }
            basis
        }
    }
}

/// Eigenvalues (ascending) of a symmetric `m x m` matrix stored row-major.
pub fn sym_eigenvalues(mat: &[f64], m: usize) -> Vec<f64> {
    match m {
        0 => vec![],
        1 => vec![mat[0]],
        2 => {
            let (a, b, c) = (mat[0], 0.5 * (mat[1] + mat[2]), mat[3]);
            let mean = 0.5 * (a + c);
            let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
            vec![mean - rad, mean + rad]
        }
        _ => {
            let dm = DMatrix::from_row_slice(m, m, mat);
            let sym = (&dm + dm.transpose()) * 0.5;
            let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            ev
        }
    }
}

/// Restriction `B^T S B` of an `n x n` symmetric matrix (row-major) to a basis.
pub fn restrict(s: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let n = basis.first().map_or(0, Vec::len);
    let m = basis.len();
    let mut out = vec![0.0; m * m];
    for a in 0..m {
        for b in a..m {
            let mut acc = 0.0;
            for i in 0..n {
                for j in 0..n {
                    acc += basis[a][i] * s[i * n + j] * basis[b][j];
                }
            }
            out[a * m + b] = acc;
            out[b * m + a] = acc;
        }
    }
    out
}

/// Same as [`restrict`] for a diagonal matrix.
pub fn restrict_diag(diag: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let m = basis.len();
    let mut out = vec![0.0; m * m];
    for a in 0..m {
        for b in a..m {
            let acc: f64 = diag
                .iter()
                .enumerate()
                .map(|(i, d)| basis[a][i] * d * basis[b][i])
                .sum();
            out[a * m + b] = acc;
            out[b * m + a] = acc;
        }
    }
    out
}

/// Normalized elementary symmetric functions `e_j / binom(m, j)`, `j = 0..=m`.
pub fn normalized_esf(values: &[f64]) -> Vec<f64> {
    let m = values.len();
    let mut e = vec![0.0; m + 1];
    e[0] = 1.0;
    for (count, &v) in values.iter().enumerate() {
        for j in (1..=count + 1).rev() {
            e[j] += v * e[j - 1];
        }
    }
    let mut binom = 1.0;
    for (j, ej) in e.iter_mut().enumerate() {
        if j > 0 {
            binom = binom * (m - j + 1) as f64 / j as f64;
        }
        *ej /= binom;
    }
    e
}

/// Principal curvatures (ascending) of the level set `F = const` with
/// gradient `grad` and diagonal Hessian `hess_diag`, using the tangent basis of
/// the unit normal `grad / |grad|`.
pub fn implicit_curvatures_diag(grad: &[f64], hess_diag: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let g = norm(grad);
    let normal: Vec<f64> = grad.iter().map(|x| x / g).collect();
    let basis = tangent_basis(&normal);
    let mut shape = restrict_diag(hess_diag, &basis);
    shape.iter_mut().for_each(|x| *x /= g);
    let curv = sym_eigenvalues(&shape, basis.len());
    (normal, curv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tangent_bases_are_orthonormal() {
        for n in [
            vec![0.6, 0.8],
            vec![0.0, 0.0, 1.0],
            normalized(&[0.3, -1.0, 2.0]),
            normalized(&[1.0, 2.0, -0.5, 0.1]),
        ] {
            let b = tangent_basis(&n);
            assert_eq!(b.len(), n.len() - 1);
            for (i, bi) in b.iter().enumerate() {
                assert!(dot(bi, &n).abs() < 1e-14);
                for (j, bj) in b.iter().enumerate() {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((dot(bi, bj) - expect).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn esf_examples() {
        let h = normalized_esf(&[1.0, 2.0, 3.0]);
        assert_eq!(h, vec![1.0, 2.0, 11.0 / 3.0, 6.0]);
        assert_eq!(normalized_esf(&[4.0]), vec![1.0, 4.0]);
    }

    #[test]
    fn eigenvalues_sorted() {
        assert_eq!(sym_eigenvalues(&[2.0, 0.0, 0.0, 1.0], 2), vec![1.0, 2.0]);
        let ev = sym_eigenvalues(&[2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 5.0], 3);
        for (a, b) in ev.iter().zip([1.0, 3.0, 5.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
