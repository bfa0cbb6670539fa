use nalgebra::Matrix4;

use cliffgrav::cartan::*;
use cliffgrav::field::{Domain, FdOrder, FdScheme, Point};
use cliffgrav::mv::{Multivector, Orientation, ETA};
use cliffgrav::Error;

fn flrw() -> Coframe {
    Coframe::new(
        Domain::new([1.0, -5.0, -5.0, -5.0], [3.0, 5.0, 5.0, 5.0]),
        |p| Ok(Matrix4::from_diagonal(&[1.0, p[0], p[0], p[0]].into())),
        Orientation::Positive,
    )
}

fn scheme() -> FdScheme {
    FdScheme::new(1e-3, FdOrder::Fourth).unwrap()
}

#[test]
fn pair_storage() {
    assert_eq!(pair_slot(2, 1), Some((3, -1.0)));
    assert_eq!(pair_slot(1, 1), None);
}

#[test]
fn flrw_connection_and_coefficients() {
    let c = flrw();
    let p = Point::new(2.0, 0.1, 0.2, 0.3);
    let w = connection_from_coframe(&c, scheme());
    let fr = c.frame(&p).unwrap();
    for i in 1..4 {
        let expect = fr.legs[i] * 0.5;
        assert!((w.upper(i, 0, &p).unwrap() - expect).max_abs() < 1e-10);
    }
    let l = connection_coefficients(&w, &c).eval(&p).unwrap();
    for i in 1..4 {
        for j in 1..4 {
            let expect = if i == j { 0.5 } else { 0.0 };
            assert!((l[i][0][j] - expect).abs() < 1e-10);
        }
    }
    for a in 0..4 {
        for b in 0..4 {
            for k in 0..4 {
                let sym = l[a][b][k] * ETA[a] + l[b][a][k] * ETA[b];
                assert_eq!(sym, 0.0);
            }
        }
    }
}

#[test]
fn rindler_connection() {
    let c = Coframe::new(
        Domain::new([-5.0, 0.5, -5.0, -5.0], [5.0, 5.0, 5.0, 5.0]),
        |p| Ok(Matrix4::from_diagonal(&[p[1], 1.0, 1.0, 1.0].into())),
        Orientation::Positive,
    );
    let p = Point::new(0.0, 2.0, 0.0, 0.0);
    let w = connection_from_coframe(&c, scheme());
    let w01 = mixed(&w.eval(&p).unwrap(), 0, 1);
    assert!((w01 - Multivector::basis(0)).max_abs() < 1e-10, "{w01}");
    let r = curvature_forms(&w, scheme()).eval(&p).unwrap();
    assert!(r.iter().all(|x| x.max_abs() < 1e-6));
}

#[test]
fn degenerate_coframe_is_rejected() {
    let c = Coframe::new(Domain::unbounded(), |_| Ok(Matrix4::zeros()), Orientation::Positive);
    assert!(matches!(c.frame(&Point::default()), Err(Error::DegenerateCoframe { .. })));
}
