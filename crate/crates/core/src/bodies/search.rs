//! Global optimization of smooth-ish functions on the sphere.
//!
//! A dense grid locates candidate basins; each of the best few candidates is
//! polished by a compass search with step halving. Non-finite values count as
//! worst.

use super::geom::{normalized, tangent_basis};
use crate::quadrature::sphere_rule;

const CANDIDATES: usize = 6;
const MIN_STEP: f64 = 1e-12;

fn grid_level(n: usize) -> u32 {
    match n {
        2 => 12,
        3 => 6,
        _ => 4,
    }
}

/// Maximizer and maximum of `f` over `S^{n-1}`.
pub fn maximize_on_sphere<F: Fn(&[f64]) -> f64>(n: usize, f: F) -> (Vec<f64>, f64) {
    let score = |u: &[f64]| {
        let v = f(u);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let rule = sphere_rule(n, grid_level(n)).expect("supported dimension");
    let mut scored: Vec<(f64, usize)> = (0..rule.len()).map(|i| (score(rule.point(i)), i)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let step0 = match n {
        2 => 2.0 * std::f64::consts::PI / rule.len() as f64,
        _ => 0.1,
    };
    let mut best = (rule.point(scored[0].1).to_vec(), scored[0].0);
    for &(v, i) in scored.iter().take(CANDIDATES) {
        let (u, value) = polish(rule.point(i).to_vec(), v, step0, &score);
        if value > best.1 {
            best = (u, value);
        }
    }
    best
}

/// Minimizer and minimum of `f` over `S^{n-1}`.
pub fn minimize_on_sphere<F: Fn(&[f64]) -> f64>(n: usize, f: F) -> (Vec<f64>, f64) {
    let (u, v) = maximize_on_sphere(n, |u| -f(u));
    (u, -v)
}

fn polish<F: Fn(&[f64]) -> f64>(mut u: Vec<f64>, mut value: f64, mut step: f64, f: &F) -> (Vec<f64>, f64) {
    while step > MIN_STEP {
        let basis = tangent_basis(&u);
        let mut moved = false;
        for t in &basis {
            for sign in [1.0, -1.0] {
                let cand: Vec<f64> = u.iter().zip(t).map(|(a, b)| a + sign * step * b).collect();
                let cand = normalized(&cand);
                let v = f(&cand);
                if v > value {
                    u = cand;
                    value = v;
                    moved = true;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (u, value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_linear_maximum() {
        let dir = normalized(&[0.3, -0.5, 0.8]);
        let (u, v) = maximize_on_sphere(3, |x| x.iter().zip(&dir).map(|(a, b)| a * b).sum());
        assert!((v - 1.0).abs() < 1e-12);
        for (a, b) in u.iter().zip(&dir) {
            assert!((a - b).abs() < 1e-6);
        }
        let (_, m) = minimize_on_sphere(2, |x| 2.0 + x[0] * 0.5 - x[1]);
        assert!((m - (2.0 - 1.25f64.sqrt())).abs() < 1e-12);
    }
}
