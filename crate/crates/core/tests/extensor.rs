use nalgebra::Matrix4;

use cliffgrav::extensor::*;
use cliffgrav::field::Point;
use cliffgrav::Error;

#[test]
fn identity_and_diagonal_roots() {
    assert!((gauge_extensor_at(&Matrix4::identity()).unwrap() - Matrix4::identity()).abs().max() < 1e-14);
    let g = Matrix4::from_diagonal(&[4.0, 9.0, 1.0, 1.0].into());
    let h = gauge_extensor_at(&g).unwrap();
    let expect = Matrix4::from_diagonal(&[2.0, 3.0, 1.0, 1.0].into());
    assert!((h - expect).abs().max() < 1e-12);
}

#[test]
fn rejects_bad_input() {
    let mut g = Matrix4::identity();
    g[(0, 1)] = 0.5;
    assert!(matches!(gauge_extensor_at(&g), Err(Error::NonSymmetric { .. })));
    let g = Matrix4::from_diagonal(&[1.0, 1e-12, 1.0, 1.0].into());
    assert!(matches!(gauge_extensor_at(&g), Err(Error::NearSingularMetric { .. })));
}

#[test]
fn metric_extensor_examples() {
    let p = Point::default();
    assert_eq!(metric_extensor_at(&Matrix4::identity(), &p).unwrap(), Matrix4::identity());
    let e = Matrix4::from_diagonal(&[2.0, 1.0, 1.0, 1.0].into());
    let g = metric_extensor_at(&e, &p).unwrap();
    assert!((g[(0, 0)] - 0.25).abs() < 1e-15);
    let flrw = Matrix4::from_diagonal(&[1.0, 2.0, 2.0, 2.0].into());
    let g = metric_extensor_at(&flrw, &p).unwrap();
    let expect = Matrix4::from_diagonal(&[1.0, 0.25, 0.25, 0.25].into());
    assert!((g - expect).abs().max() < 1e-15);
    assert!(metric_extensor_at(&Matrix4::zeros(), &p).is_err());
}
