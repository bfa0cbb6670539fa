use cliffgrav::field::*;
use cliffgrav::mv::{self, MetricAtPoint, Multivector, Orientation};
use cliffgrav::Error;

fn box_domain() -> Domain {
    Domain::new([-10.0; 4], [10.0; 4])
}

fn form(grade: usize, f: impl Fn(&Point) -> Multivector + Send + Sync + 'static) -> FormField {
    FormField::new(grade, box_domain(), move |p| Ok(f(p))).unwrap()
}

#[test]
fn partial_of_linear_and_constant_fields() {
    let s = FdScheme::default();
    let p = Point::new(0.3, -1.2, 2.0, 0.7);
    let f = form(1, |p| Multivector::basis(0) * p[1]);
    let d = partial_derivative(&f, 1, &p, &s).unwrap();
    assert!((d - Multivector::basis(0)).max_abs() < 1e-12);
    let c = form(1, |_| Multivector::basis(2));
    for mu in 0..4 {
        assert_eq!(partial_derivative(&c, mu, &p, &s).unwrap().max_abs(), 0.0);
    }
    let q = form(1, |p| Multivector::basis(1) * (p[0] * p[0]));
    let d = partial_derivative(&q, 0, &Point::new(3.0, 0.0, 0.0, 0.0), &s).unwrap();
    assert!((d - Multivector::basis(1) * 6.0).max_abs() <= 1e-9);
}

#[test]
fn exterior_derivative_examples() {
    let s = FdScheme::default();
    let p = Point::new(0.4, 1.1, -0.3, 0.2);
    let f = form(1, |p| Multivector::basis(0) * p[1]);
    let df = exterior_derivative(&f, s).eval(&p).unwrap();
    assert!((df - Multivector::blade(0b0011, -1.0)).max_abs() < 1e-12);
    let g = form(0, |p| Multivector::scalar(p[0] * p[1]));
    let dg = exterior_derivative(&g, s).eval(&p).unwrap();
    let expect = Multivector::one_form([p[1], p[0], 0.0, 0.0]);
    assert!((dg - expect).max_abs() < 1e-9);
}

#[test]
fn d_squared_vanishes() {
    let s = FdScheme::new(1e-3, FdOrder::Fourth).unwrap();
    let f = form(1, |p| Multivector::basis(1) * (p[0] * p[0] * p[2].powi(3)));
    let ddf = exterior_derivative(&exterior_derivative(&f, s), s);
    let r = ddf.eval(&Point::new(0.7, -0.2, 1.3, 0.5)).unwrap();
    assert!(r.max_abs() <= 1e-6, "{r}");
}

#[test]
fn d_of_four_form_is_zero() {
    let f = form(4, |p| Multivector::blade(15, p[0]));
    let d = exterior_derivative(&f, FdScheme::default());
    assert_eq!(d.eval(&Point::default()).unwrap(), Multivector::ZERO);
}

#[test]
fn codifferential_examples() {
    let s = FdScheme::default();
    let eta = Field::new(box_domain(), |_| Ok(MetricAtPoint::minkowski()));
    let o = Orientation::Positive;
    let p = Point::new(0.5, 0.1, -0.4, 0.9);
    let c = form(1, |_| Multivector::basis(0));
    assert!(codifferential(&c, &eta, o, s).eval(&p).unwrap().max_abs() < 1e-12);
    let f = form(1, |p| Multivector::basis(0) * p[0]);
    let delta = codifferential(&f, &eta, o, s).eval(&p).unwrap();
    // ⋆(x⁰dx⁰) = x⁰dx¹²³ and d of that is τ, so δ = -⋆⁻¹τ.
    let explicit = -mv::hodge_inverse(&Multivector::blade(15, 1.0), &MetricAtPoint::minkowski(), o);
    assert!((delta - explicit).max_abs() < 1e-10);
    assert!((delta - Multivector::scalar(-1.0)).max_abs() < 1e-10);
}

#[test]
fn codifferential_squared_vanishes() {
    let s = FdScheme::new(1e-3, FdOrder::Fourth).unwrap();
    let eta = Field::new(box_domain(), |_| Ok(MetricAtPoint::minkowski()));
    let o = Orientation::Positive;
    let f = form(2, |p| {
        Multivector::blade(0b0011, p[2] * p[2] * p[0])
            + Multivector::blade(0b0110, p[0] * p[3] + p[1].powi(3))
            + Multivector::blade(0b1100, p[1] * p[0] * p[2])
    });
    let dd = codifferential(&codifferential(&f, &eta, o, s), &eta, o, s);
    assert!(dd.eval(&Point::new(0.3, 0.6, -0.8, 1.1)).unwrap().max_abs() < 1e-5);
}

#[test]
fn stencil_out_of_domain() {
    let f = form(0, |p| Multivector::scalar(p[0]));
    let s = FdScheme::default();
    let err = partial_derivative(&f, 0, &Point::new(10.0, 0.0, 0.0, 0.0), &s).unwrap_err();
    assert!(matches!(err, Error::StencilOutOfDomain { axis: 0, .. }));
}

#[test]
fn pullback_examples() {
    let f = form(1, |p| Multivector::basis(0) * (1.0 + p[1]));
    let id = Diffeomorphism::identity();
    let pulled = pullback(&id, &f, box_domain());
    let p = Point::new(0.1, 0.2, 0.3, 0.4);
    assert_eq!(pulled.eval(&p).unwrap(), f.eval(&p).unwrap());

    let scale = Diffeomorphism::new(|p| Point::new(2.0 * p[0], p[1], p[2], p[3]));
    let dy0 = form(1, |_| Multivector::basis(0));
    let pulled = pullback(&scale, &dy0, box_domain());
    assert!((pulled.eval(&p).unwrap() - Multivector::basis(0) * 2.0).max_abs() < 1e-9);
}

#[test]
fn pullback_escape_is_reported() {
    let f = form(0, |_| Multivector::scalar(1.0));
    let far = Diffeomorphism::new(|p| Point::new(p[0] + 100.0, p[1], p[2], p[3]));
    let pulled = pullback(&far, &f, box_domain());
    assert!(matches!(pulled.eval(&Point::default()), Err(Error::DomainEscape { .. })));
}

#[test]
fn scheme_validation() {
    assert!(FdScheme::new(1e-7, FdOrder::Second).is_err());
    assert!(FdScheme::new(0.5, FdOrder::Second).is_err());
    assert!(FdOrder::from_int(3).is_err());
}

#[test]
fn csv_points() {
    let data = "x0,x1,x2,x3\n0,1.5,2,3\n-1e-3, 4 ,5,6\n";
    let pts = read_points_from(data.as_bytes()).unwrap();
    assert_eq!(pts, vec![Point::new(0.0, 1.5, 2.0, 3.0), Point::new(-1e-3, 4.0, 5.0, 6.0)]);
    assert!(read_points_from("a,b\n1,2\n".as_bytes()).is_err());
    assert!(read_points_from("x0,x1,x2,x3\n1,2,x,4\n".as_bytes()).is_err());
}

fn convergence_error(order: FdOrder, h: f64) -> f64 {
    let f = form(0, |p| Multivector::scalar((p[0] * 1.3).sin() * p[1].exp()));
    let p = Point::new(0.4, 0.2, 0.0, 0.0);
    let s = FdScheme::new(h, order).unwrap();
    let d = partial_derivative(&f, 0, &p, &s).unwrap().scalar_part();
    (d - 1.3 * (0.4f64 * 1.3).cos() * 0.2f64.exp()).abs()
}

#[test]
fn fd_error_scales_with_order() {
    for (order, k) in [(FdOrder::Second, 2), (FdOrder::Fourth, 4)] {
        let ratio = convergence_error(order, 2e-2) / convergence_error(order, 1e-2);
        let expect = 2f64.powi(k);
        assert!((ratio / expect - 1.0).abs() < 0.1, "{order:?}: ratio {ratio}");
    }
}

#[test]
fn pullback_commutes_with_d_and_codifferential() {
    use std::collections::BTreeMap;
    let sc = cliffgrav::scenarios::build_scenario("perturbed_flat", &BTreeMap::new()).unwrap();
    let phi = sc.diffeo.clone().unwrap();
    let target = sc.target_domain.clone().unwrap();
    let s = FdScheme::new(1e-3, FdOrder::Fourth).unwrap();
    let o = Orientation::Positive;
    let k = FormField::new(1, target.clone(), |y| {
        Ok(Multivector::one_form([y[0].sin() * y[1], y[2].cos(), y[0] * y[3], y[1] * y[1] - y[2]]))
    })
    .unwrap();
    let eta = Field::new(target, |_| Ok(MetricAtPoint::minkowski()));
    let g = sc.coframe.metric_field();
    let src = sc.coframe.domain().clone();

    let d_pulled = exterior_derivative(&pullback(&phi, &k, src.clone()), s);
    let pulled_d = pullback(&phi, &exterior_derivative(&k, s), src.clone());
    let delta_pulled = codifferential(&pullback(&phi, &k, src.clone()), &g, o, s);
    let pulled_delta = pullback(&phi, &codifferential(&k, &eta, o, s), src);
    for p in &sc.default_points {
        let r1 = (d_pulled.eval(p).unwrap() - pulled_d.eval(p).unwrap()).max_abs();
        let r2 = (delta_pulled.eval(p).unwrap() - pulled_delta.eval(p).unwrap()).max_abs();
        assert!(r1 <= 1e-5 && r2 <= 1e-5, "{r1:e} {r2:e}");
    }
}
