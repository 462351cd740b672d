//! Finite-difference principal radii from a support function.

use super::geom::{sym_eigenvalues, tangent_basis};
use super::SphereJet;

/// Base step of the central differences; Richardson extrapolation combines
/// steps `FD_STEP` and `FD_STEP / 2`.
pub const FD_STEP: f64 = 1e-3;

/// Principal radii at `u` as eigenvalues of the Hessian of the 1-homogeneous
/// extension of `support`, restricted to the tangent space of the sphere.
pub fn fd_sphere_jet<F: Fn(&[f64]) -> f64>(support: F, u: &[f64], step: f64) -> SphereJet {
    let ext = |x: &[f64]| {
        let l = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let unit: Vec<f64> = x.iter().map(|v| v / l).collect();
        l * support(&unit)
    };
    let basis = tangent_basis(u);
    let m = basis.len();
    let shifted = |a: f64, i: usize, b: f64, j: usize| -> f64 {
        let x: Vec<f64> = (0..u.len())
            .map(|c| u[c] + a * basis[i][c] + b * basis[j][c])
            .collect();
        ext(&x)
    };
    let hessian = |d: f64| -> Vec<f64> {
        let mut out = vec![0.0; m * m];
        let h0 = ext(u);
        for i in 0..m {
            out[i * m + i] = (shifted(d, i, 0.0, i) - 2.0 * h0 + shifted(-d, i, 0.0, i)) / (d * d);
            for j in i + 1..m {
                let v = (shifted(d, i, d, j) - shifted(d, i, -d, j) - shifted(-d, i, d, j)
                    + shifted(-d, i, -d, j))
                    / (4.0 * d * d);
                out[i * m + j] = v;
                out[j * m + i] = v;
            }
        }
        out
    };
    let coarse = hessian(step);
    let fine = hessian(0.5 * step);
    let rich: Vec<f64> = fine.iter().zip(&coarse).map(|(f, c)| (4.0 * f - c) / 3.0).collect();
    SphereJet::new(support(u), sym_eigenvalues(&rich, m))
}
