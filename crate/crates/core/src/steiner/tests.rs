use super::*;
use crate::bodies::{make_ball, make_box, make_ellipsoid, make_rounded_cube};
use crate::combinatorics::{c_npk_closed, f_m, rational};
use proptest::prelude::*;
use std::f64::consts::PI;

fn acc() -> Accuracy {
    Accuracy::default()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn exponents_and_pole() {
    let e = Exponents::new(2, PValue::Finite(1.0)).unwrap();
    assert_eq!((e.beta, e.q, e.gamma), (2.0 / 3.0, 1.0 / 3.0, 0.0));
    let inf = Exponents::new(3, PValue::PosInf).unwrap();
    assert_eq!((inf.beta, inf.q, inf.gamma, inf.alpha), (0.0, 1.0, -3.0, -3.0));
    assert!(matches!(Exponents::new(3, PValue::Finite(-3.0)), Err(Error::PoleAtMinusN { n: 3 })));
    assert_eq!(Exponents::new(2, PValue::Finite(-1.0)).unwrap().finite_sum_index(), Some(2));
    assert_eq!(Exponents::new(3, PValue::Finite(-2.0)).unwrap().finite_sum_index(), Some(3));
    assert_eq!(Exponents::new(2, PValue::Finite(1.0)).unwrap().finite_sum_index(), None);
    assert!(Exponents::new(2, PValue::Finite(-1.0)).unwrap().in_negative_band());
    assert_eq!("inf".parse::<PValue>().unwrap(), PValue::PosInf);
    assert_eq!("-inf".parse::<PValue>().unwrap(), PValue::NegInf);
    assert_eq!("7/2".parse::<PValue>().unwrap(), PValue::Finite(3.5));
    assert_eq!("0.25".parse::<PValue>().unwrap(), PValue::Finite(0.25));
    assert!("x".parse::<PValue>().is_err());
}

#[test]
fn flat_power_convention() {
    assert_eq!(flat_power(0.0, 0.5), 0.0);
    assert_eq!(flat_power(0.0, 0.0), 1.0);
    assert_eq!(flat_power(0.0, -0.5), f64::INFINITY);
    assert!((flat_power(4.0, 0.5) - 2.0).abs() < 1e-15);
}

#[test]
fn sphere_areas() {
    assert_eq!(sphere_area(2), 2.0 * PI);
    assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-15);
    assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-14);
}

proptest! {
    #[test]
    fn product_form_matches_composition_sum(
        k in proptest::collection::vec(0.0f64..3.0, 1..5),
        beta in -3.0f64..3.0,
    ) {
        let n = k.len() + 1;
        let m_max = 6u32;
        let table = CompositionTable::new(n, beta, m_max);
        let mut g = vec![0.0; m_max as usize + 1];
        curvature_series(&k, beta, &mut g);
        let h = crate::bodies::geom::normalized_esf(&k);
        for m in 0..=m_max as usize {
            let c = table.eval(m, &h);
            // the composition sum cancels; scale by the size of its terms
            let scale = ((1.0 + k.iter().sum::<f64>()) * (1.0 + beta.abs())).powi(m as i32);
            prop_assert!((c - g[m]).abs() <= 1e-13 * scale, "m={} {} vs {}", m, c, g[m]);
        }
    }
}

#[test]
fn ball_affine_surface_area() {
    for n in [2usize, 3] {
        let b = make_ball(n, 1.0, &vec![0.0; n]).unwrap();
        for p in [PValue::Finite(0.5), PValue::Finite(2.0), PValue::Finite(-5.0), PValue::PosInf] {
            let r = asp_boundary(&b, p, &acc()).unwrap();
            assert!(rel(r.value, sphere_area(n)) < 1e-13, "{}", r.id);
            let s = asp_sphere(&b, p, &acc()).unwrap();
            assert!(rel(s.value, sphere_area(n)) < 1e-13);
        }
    }
}

#[test]
fn ellipse_affine_surface_area() {
    let (a, b) = (1.0, 2.0);
    let e = make_ellipsoid(&[a, b]).unwrap();
    // equi-affine image of the disk
    let r = asp_boundary(&e, PValue::Finite(1.0), &acc()).unwrap();
    assert!(rel(r.value, 2.0 * PI * (a * b).powf(1.0 / 3.0)) < 1e-12, "{}", r.value);
    let r = asp_sphere(&e, PValue::Finite(1.0), &acc()).unwrap();
    assert!(rel(r.value, 2.0 * PI * (a * b).powf(1.0 / 3.0)) < 1e-12);
    let r = asp_boundary(&e, PValue::Finite(0.0), &acc()).unwrap();
    assert!(rel(r.value, 2.0 * PI * a * b) < 1e-12);
    // the polar ellipse has semi-axes 1/a, 1/b
    let r = asp_sphere(&e, PValue::PosInf, &acc()).unwrap();
    assert!(rel(r.value, 2.0 * PI / (a * b)) < 1e-12);
    let r = asp_boundary(&e, PValue::NegInf, &acc()).unwrap();
    assert!(rel(r.value, 2.0 * PI / (a * b)) < 1e-12);
    // general p on an ellipse: as_p(TK) = |det T|^{(n-p)/(n+p)} as_p(B) for T in SL scaled
    for p in [0.5, 2.0, 5.0, -3.0] {
        let r = asp_boundary(&e, PValue::Finite(p), &acc()).unwrap();
        let expect = 2.0 * PI * (a * b).powf((2.0 - p) / (2.0 + p));
        assert!(rel(r.value, expect) < 1e-11, "p={p}: {} vs {expect}", r.value);
    }
}

#[test]
fn minus_n_functional() {
    let b = make_ball(2, 1.5, &[0.0, 0.0]).unwrap();
    let r = as_minus_n(&b).unwrap();
    assert!(rel(r.value, 1.5f64.powi(2)) < 1e-12);
    let e = make_ellipsoid(&[1.0, 2.0]).unwrap();
    let r = as_minus_n(&e).unwrap();
    let mut best = 0.0f64;
    for i in 0..200_000 {
        let t = 2.0 * PI * i as f64 / 200_000.0;
        let j = e.sphere_jet(&[t.cos(), t.sin()]).unwrap();
        best = best.max(j.curvature_function().sqrt() * j.h.powf(1.5));
    }
    assert!(r.value >= best - 1e-12 && rel(r.value, best) < 1e-6);
}

#[test]
fn ball_steiner_coefficients() {
    let r = 1.7;
    for n in [2usize, 3] {
        let b = make_ball(n, r, &vec![0.0; n]).unwrap();
        for (pn, pd) in [(1i64, 1i64), (1, 2), (-5, 1), (7, 2)] {
            let p = pn as f64 / pd as f64;
            let pr = rational(pn, pd);
            let ex = Exponents::new(n, PValue::Finite(p)).unwrap();
            let k = 3u32;
            let ws = w_table(&b, PValue::Finite(p), k, k, &acc()).unwrap();
            for (m, w) in ws.iter().enumerate() {
                let f = to_f64(&f_m(n as u32, &pr, m as u32).unwrap());
                // on a ball of radius r: d = r, k_i = 1/r
                let expect = sphere_area(n) * r.powi(n as i32 - 1) * r.powf(ex.gamma - k as f64 + m as f64)
                    * r.powf(-(n as f64 - 1.0) * ex.q)
                    * f
                    * r.powi(-(m as i32));
                assert!((w.value - expect).abs() <= 1e-12 * expect.abs().max(1.0), "n={n} p={p} m={m}");
            }
            let v = v_pk(&b, PValue::Finite(p), k, &acc()).unwrap();
            let c = to_f64(&c_npk_closed(n as u32, &pr, k).unwrap());
            let expect = r.powf(ex.alpha - k as f64) * sphere_area(n) * c;
            assert!((v.value - expect).abs() <= 1e-12 * expect.abs().max(1.0));
            let u = u_pk(&b, PValue::Finite(p), k, &acc()).unwrap();
            assert!((u.value - expect).abs() <= 1e-12 * expect.abs().max(1.0));
        }
    }
}

#[test]
fn rounded_cube_coefficient_identity() {
    for l in [2u32, 4, 8] {
        let k_l = make_rounded_cube(2, l).unwrap();
        let lf = l as f64;
        for k in 0..=4u32 {
            let w = w_pmk(&k_l, PValue::Finite(1.0), k, k, &acc()).unwrap();
            let expect = lf.powf(k as f64 - 2.0 / 3.0) * 2.0 * PI * gen_binom_f64(2.0 / 3.0, k as i64);
            assert!(rel(w.value, expect) < 1e-12, "l={l} k={k}: {} vs {expect}", w.value);
            assert!(w.notes.contains(&Note::FlatFaceZero));
        }
    }
}

#[test]
fn polytope_values() {
    let b = make_box(2, 1.0).unwrap();
    let v: Vec<f64> = (0..4).map(|k| v_pk(&b, PValue::Finite(0.0), k, &acc()).unwrap().value).collect();
    // zeros are exact; the face sums carry quadrature roundoff
    assert!(rel(v[0], 8.0) < 1e-14 && rel(v[1], 8.0) < 1e-14);
    assert_eq!(&v[2..], &[0.0, 0.0]);
    for p in [0.5, 1.0, 3.0] {
        for k in 0..3 {
            assert_eq!(v_pk(&b, PValue::Finite(p), k, &acc()).unwrap().value, 0.0);
        }
    }
    let r = v_pk(&b, PValue::Finite(-1.0), 0, &acc()).unwrap();
    assert!(r.value.is_infinite() && r.notes.contains(&Note::Divergent));
    let b3 = make_box(3, 0.5).unwrap();
    assert!(rel(v_pk(&b3, PValue::Finite(0.0), 0, &acc()).unwrap().value, 3.0) < 1e-14);
    assert!(rel(v_pk(&b3, PValue::Finite(0.0), 1, &acc()).unwrap().value, 6.0) < 1e-14);
    assert_eq!(v_pk(&b3, PValue::Finite(0.0), 2, &acc()).unwrap().value, 0.0);
}

#[test]
fn mixed_and_bridges() {
    let e = make_ellipsoid(&[1.0, 1.3]).unwrap();
    for p in [0.5, 2.0] {
        let a = asp_boundary(&e, PValue::Finite(p), &acc()).unwrap().value;
        let m = mixed_asa(&e, p, 0.0, &acc()).unwrap().value;
        assert!(rel(m, a) < 1e-13, "{m} vs {a}");
        // order n integrates the Gauss curvature alone
        let g = mixed_asa(&e, p, 2.0, &acc()).unwrap().value;
        assert!(rel(g, 2.0 * PI) < 1e-12);
        assert!(rel(w_pmk(&e, PValue::Finite(p), 0, 0, &acc()).unwrap().value, a) < 1e-13);
        for k in 1..4u32 {
            let w = w_pmk(&e, PValue::Finite(p), 0, k, &acc()).unwrap().value;
            let s = mixed_asa(&e, p + (k as f64 / 2.0) * (2.0 + p), -(k as f64), &acc()).unwrap().value;
            assert!(rel(w, s) < 1e-12, "p={p} k={k}");
        }
    }
    // V^1_l = binom(2/3, l) as_{1, 3l} in the plane
    for l in 1..4u32 {
        let v = v_pk(&e, PValue::Finite(1.0), l, &acc()).unwrap().value;
        let s = mixed_asa(&e, 1.0, 3.0 * l as f64, &acc()).unwrap().value;
        assert!(rel(v, gen_binom_f64(2.0 / 3.0, l as i64) * s) < 1e-12);
    }
}

#[test]
fn gauss_map_equivalence_smoke() {
    let e = make_ellipsoid(&[1.0, 1.3]).unwrap();
    for k in 0..3u32 {
        let w = w_table(&e, PValue::Finite(2.0), 2, k, &acc()).unwrap();
        let z = z_table(&e, PValue::Finite(2.0), 2, k, &acc()).unwrap();
        for (a, b) in w.iter().zip(&z) {
            assert!((a.value - b.value).abs() < 1e-11 * a.value.abs().max(1.0));
        }
    }
    // p = 1 has gamma = 0, so U^1_k = Z_{k,k}
    let u = u_pk(&e, PValue::Finite(1.0), 3, &acc()).unwrap().value;
    let z = z_pmk(&e, PValue::Finite(1.0), 3, 3, &acc()).unwrap().value;
    assert_eq!(u, z);
}

#[test]
fn classical_quermassintegrals() {
    let r = 1.3;
    let b = make_ball(3, r, &[0.0; 3]).unwrap();
    let w = classical_querm_all(&b, &acc()).unwrap();
    let c = 4.0 / 3.0 * PI;
    for (i, wi) in w.iter().enumerate() {
        assert!(rel(wi.value, c * r.powi(3 - i as i32)) < 1e-13, "i={i}");
    }
    let sq = make_box(2, 1.0).unwrap();
    let w = classical_querm_all(&sq, &acc()).unwrap();
    assert!(rel(w[0].value, 4.0) < 1e-14 && rel(w[1].value, 4.0) < 1e-14);
    // vol(K_l + tB) from the Steiner polynomial against the closed-form volume
    let k = make_rounded_cube(3, 3).unwrap();
    let w = classical_querm_all(&k, &acc()).unwrap();
    let (cc, rr, t): (f64, f64, f64) = (2.0 / 3.0, 1.0 / 3.0, 0.25);
    let s = rr + t;
    let closed = 8.0 * cc.powi(3) + 24.0 * cc * cc * s + 6.0 * PI * cc * s * s + 4.0 / 3.0 * PI * s.powi(3);
    let poly: f64 = (0..4)
        .map(|i| [1.0, 3.0, 3.0, 1.0][i] * w[i].value * t.powi(i as i32))
        .sum();
    assert!(rel(poly, closed) < 1e-12, "{poly} vs {closed}");
}

#[test]
fn dual_quermassintegrals() {
    let r = 0.8;
    let b = make_ball(2, r, &[0.0, 0.0]).unwrap();
    for i in [-2.0, 0.0, 1.0, 0.5] {
        let w = dual_querm(&b, i, &acc()).unwrap().value;
        assert!(rel(w, PI * r.powf(2.0 - i)) < 1e-13);
    }
    let e = make_ellipsoid(&[1.0, 2.0]).unwrap();
    let v = dual_mixed_volume(&e, &e, 0.7, &acc()).unwrap().value;
    assert!(rel(v, 2.0 * PI) < 1e-12);
    let p = dual_querm_of_polar(&b, -1.0, &acc()).unwrap().value;
    assert!(rel(p, PI * r.powi(-3)) < 1e-13);
}

#[test]
fn classical_series() {
    let e = make_ellipsoid(&[1.0, 1.2]).unwrap();
    let s = series_asp(&e, PValue::Finite(0.0), 40, 1e-14, &acc()).unwrap();
    assert_eq!(s.truncation, Truncation::FiniteSum);
    assert_eq!(s.k_max, 2);
    let w = classical_querm_all(&e, &acc()).unwrap();
    for k in 0..=2 {
        let expect = 2.0 * [1.0, 2.0, 1.0][k] * w[k].value;
        assert!(rel(s.coefficients[k], expect) < 1e-12);
    }
}

#[test]
fn finite_sum_series() {
    let e = make_ellipsoid(&[1.0, 1.2]).unwrap();
    let s = series_asp(&e, PValue::Finite(-1.0), 40, 1e-14, &acc()).unwrap();
    assert_eq!(s.truncation, Truncation::FiniteSum);
    assert_eq!(s.k_max, 6);
    assert!(rel(s.coefficients[6], 2.0 * PI) < 1e-12);
    assert!(s.notes.contains(&Note::NegativeBand));
}

#[test]
fn series_and_direct_on_ball() {
    let b = make_ball(2, 1.0, &[0.0, 0.0]).unwrap();
    for p in [0.5, 2.0, 5.0] {
        let s = series_asp(&b, PValue::Finite(p), 80, 1e-15, &acc()).unwrap();
        let ex = Exponents::new(2, PValue::Finite(p)).unwrap();
        for t in [0.1, 0.3] {
            let closed = (1.0 + t as f64).powf(ex.alpha) * 2.0 * PI;
            let direct = direct_asp_parallel(&b, PValue::Finite(p), t, &acc()).unwrap().value;
            assert!(rel(direct, closed) < 1e-13);
            assert!(rel(s.evaluate(t).0, closed) < 1e-12, "p={p} t={t}");
        }
    }
    let e = make_ellipsoid(&[1.0, 1.2]).unwrap();
    let a0 = asp_sphere(&e, PValue::Finite(2.0), &acc()).unwrap().value;
    let d0 = direct_asp_parallel(&e, PValue::Finite(2.0), 0.0, &acc()).unwrap().value;
    assert_eq!(a0, d0);
    // p = 0 gives n vol(K + tB) = 2 (area + t perimeter + pi t^2)
    let k = make_rounded_cube(2, 2).unwrap();
    let t = 0.2;
    let d = direct_asp_parallel(&k, PValue::Finite(0.0), t, &acc()).unwrap().value;
    let s = 0.5 + t;
    let area = 1.0 + 4.0 * s + PI * s * s;
    assert!(rel(d, 2.0 * area) < 1e-12);
}
