use nalgebra::Matrix4;
use proptest::prelude::*;

use cliffgrav::extensor::*;
use cliffgrav::field::Point;
use cliffgrav::mv::{self, MetricAtPoint, Multivector, Orientation, ETA};

fn eta() -> Matrix4<f64> {
    Matrix4::from_diagonal(&ETA.into())
}

fn boost(rapidity: f64, angle: f64) -> Matrix4<f64> {
    let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
    let (c, s) = (angle.cos(), angle.sin());
    let b = Matrix4::new(ch, sh, 0.0, 0.0, sh, ch, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
    let r = Matrix4::new(1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, c, -s, 0.0, 0.0, s, c);
    r * b
}

/// Coframe components: a random perturbation of a Lorentz transform.
fn coframe() -> impl Strategy<Value = Matrix4<f64>> {
    (proptest::array::uniform16(-0.5..0.5f64), -1.5..1.5f64, -3.0..3.0f64).prop_filter_map(
        "nearly degenerate",
        |(c, rap, ang)| {
            let e = boost(rap, ang) * (Matrix4::identity() + Matrix4::from_row_slice(&c));
            (e.determinant().abs() > 0.05).then_some(e)
        },
    )
}

fn rel(a: &Matrix4<f64>, b: &Matrix4<f64>) -> f64 {
    (a - b).abs().max() / b.abs().max().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn gauge_extensor_factorizes_metric(e in coframe()) {
        let g = metric_extensor_at(&e, &Point::default()).unwrap();
        prop_assert!(symmetry_defect(&g) < 1e-10);
        let h = gauge_extensor_at(&g).unwrap();
        prop_assert!(rel(&(eta_adjoint(&h) * h), &g) <= 1e-10);
        prop_assert!(h.determinant() > 0.0);
        let g_inv = (e.transpose() * eta() * e).try_inverse().unwrap();
        prop_assert!(rel(&(h.transpose() * eta() * h), &g_inv) <= 1e-10);
    }

    #[test]
    fn lorentz_orbit_preserves_factorization(e in coframe(), rap in -2.0..2.0f64, ang in -3.0..3.0f64) {
        let g = metric_extensor_at(&e, &Point::default()).unwrap();
        let h = boost(rap, ang) * gauge_extensor_at(&g).unwrap();
        prop_assert!(rel(&(eta_adjoint(&h) * h), &g) <= 1e-9);
    }

    #[test]
    fn conjugated_dual_is_metric_dual(e in coframe(), c in proptest::array::uniform16(-1.0..1.0f64)) {
        let g = metric_extensor_at(&e, &Point::default()).unwrap();
        let h = gauge_extensor_at(&g).unwrap();
        let gm = e.transpose() * eta() * e;
        let m = MetricAtPoint::new(0.5 * (gm + gm.transpose())).unwrap();
        let a = Multivector(c);
        for o in [Orientation::Positive, Orientation::Negative] {
            let lhs = conjugated_hodge(&a, &h, o).unwrap();
            let rhs = mv::hodge_dual(&a, &m, o);
            prop_assert!((lhs - rhs).max_abs() <= 1e-9 * rhs.max_abs().max(1.0));
        }
    }

    #[test]
    fn deformed_product_anticommutes_to_metric(e in coframe(), u in proptest::array::uniform4(-2.0..2.0f64), v in proptest::array::uniform4(-2.0..2.0f64)) {
        let g = metric_extensor_at(&e, &Point::default()).unwrap();
        let h = gauge_extensor_at(&g).unwrap();
        let (u, v) = (Multivector::one_form(u), Multivector::one_form(v));
        let lhs = deformed_clifford_at(&u, &v, &h).unwrap() + deformed_clifford_at(&v, &u, &h).unwrap();
        let gm = e.transpose() * eta() * e;
        let m = MetricAtPoint::new(0.5 * (gm + gm.transpose())).unwrap();
        let rhs = Multivector::scalar(2.0 * mv::scalar_product(&u, &v, &m));
        prop_assert!((lhs - rhs).max_abs() <= 1e-9 * rhs.max_abs().max(1.0));
    }
}

#[test]
fn principal_branch_is_eta_symmetric() {
    let g = Matrix4::from_diagonal(&[1.0, 0.25, 0.25, 0.25].into());
    let h = gauge_extensor_at(&g).unwrap();
    assert!(symmetry_defect(&h) < 1e-14);
    assert!((h - Matrix4::from_diagonal(&[1.0, 0.5, 0.5, 0.5].into())).abs().max() < 1e-14);
}

#[test]
fn near_identity_boosted_metric_terminates() {
    let e = boost(3.0, 0.3);
    let g = metric_extensor_at(&e, &Point::default()).unwrap();
    let h = gauge_extensor_at(&g).unwrap();
    assert!(rel(&(eta_adjoint(&h) * h), &g) <= 1e-10);
}

#[test]
fn frame_extensor_sends_legs_to_basis() {
    use cliffgrav::cartan::Coframe;
    use cliffgrav::field::Domain;
    let e = boost(0.7, 0.2) * Matrix4::from_diagonal(&[1.0, 2.0, 2.0, 2.0].into());
    let c = Coframe::new(Domain::unbounded(), move |_| Ok(e), Orientation::Positive);
    let h = frame_extensor(&c);
    let p = Point::default();
    let fr = c.frame(&p).unwrap();
    for a in 0..4 {
        let img = h.apply(&p, &fr.legs[a]).unwrap();
        assert!((img - Multivector::basis(a)).max_abs() < 1e-12);
    }
    let g = metric_extensor_from_coframe(&c).eval(&p).unwrap();
    assert!(rel(&(eta_adjoint(&h.eval(&p).unwrap()) * h.eval(&p).unwrap()), &g) < 1e-12);
}
