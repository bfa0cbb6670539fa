use std::collections::BTreeMap;

use nalgebra::Matrix4;

use cliffgrav::cartan::{self, Coframe};
use cliffgrav::field::{Domain, FdOrder, FdScheme, Point};
use cliffgrav::lagrangian;
use cliffgrav::maxwell::{self, max_abs_legs};
use cliffgrav::mv::{Multivector, Orientation, VOLUME_BLADE};
use cliffgrav::scenarios::build_scenario;
use cliffgrav::teleparallel;

fn fd() -> FdScheme {
    FdScheme::new(1e-3, FdOrder::Fourth).unwrap()
}

/// A curved coframe with no symmetry, so every torsion piece is present.
fn generic() -> Coframe {
    Coframe::new(
        Domain::new([-1.0; 4], [1.0; 4]),
        |x| {
            Ok(Matrix4::from_fn(|a, mu| {
                let k = (a * 4 + mu) as f64;
                let phase = 0.7 * x[0] - 0.4 * x[1] * (1.0 + 0.1 * k) + 0.5 * x[2] + 0.3 * k * x[3] + k;
                let id = if a == mu { 1.0 } else { 0.0 };
                id + 0.12 * phase.sin()
            }))
        },
        Orientation::Positive,
    )
}

fn points() -> Vec<Point> {
    vec![
        Point::new(0.0, 0.0, 0.0, 0.0),
        Point::new(0.2, -0.3, 0.1, 0.4),
        Point::new(-0.4, 0.25, -0.15, -0.2),
    ]
}

fn flrw() -> (Coframe, Point) {
    let sc = build_scenario("flrw_flat", &BTreeMap::new()).unwrap();
    (sc.coframe, Point::new(2.0, 0.0, 0.0, 0.0))
}

#[test]
fn flrw_densities() {
    let (c, p) = flrw();
    let s = fd();
    let w = cartan::connection_from_coframe(&c, s);
    let lg = lagrangian::lagrangian_g(&c, s);
    let leh = lagrangian::lagrangian_eh(&c, s);
    let bt = lagrangian::boundary_term(&c, s);
    // τ_g = t³ dx^{0123} and L_g = 3ȧ²/a² τ_g.
    assert!((lg.tau_coefficient(&p).unwrap() - 0.75).abs() < 1e-10);
    assert!((lg.coefficient(&p).unwrap() - 6.0).abs() < 1e-9);
    assert!((leh.tau_coefficient(&p).unwrap() + 0.75).abs() < 1e-6);
    assert!((bt.tau_coefficient(&p).unwrap() - 1.5).abs() < 1e-6);
    let fo = lagrangian::first_order_density(&c, &w);
    let fc = lagrangian::first_order_density_coefficients(&c, &w);
    assert!((fo.coefficient(&p).unwrap() - 6.0).abs() < 1e-9);
    assert!((fo.coefficient(&p).unwrap() - fc.coefficient(&p).unwrap()).abs() < 1e-9);
    let massive = lagrangian::lagrangian_massive(&c, 0.1, s);
    assert!((massive.tau_coefficient(&p).unwrap() - 0.77).abs() < 1e-10);
}

#[test]
fn einstein_hilbert_differs_from_l_g_by_exact_form() {
    let s = fd();
    for c in [generic(), flrw().0] {
        let lg = lagrangian::lagrangian_g(&c, s);
        let leh = lagrangian::lagrangian_eh(&c, s);
        let bt = lagrangian::boundary_term(&c, s);
        for p in points().into_iter().filter(|p| c.domain().contains_with_margin(p, 0.1)) {
            let r = leh.coefficient(&p).unwrap() + bt.coefficient(&p).unwrap() - lg.coefficient(&p).unwrap();
            assert!(r.abs() <= 1e-5, "{r:e}");
        }
    }
}

#[test]
fn first_order_forms_agree_on_generic_coframe() {
    let c = generic();
    let s = fd();
    let w = cartan::connection_from_coframe(&c, s);
    let lg = lagrangian::lagrangian_g(&c, s);
    let fo = lagrangian::first_order_density(&c, &w);
    let fc = lagrangian::first_order_density_coefficients(&c, &w);
    let foot = lagrangian::footnote_residual(&c, s);
    for p in points() {
        let a = fo.coefficient(&p).unwrap();
        assert!((a - fc.coefficient(&p).unwrap()).abs() <= 1e-9);
        assert!((a - lg.coefficient(&p).unwrap()).abs() <= 1e-5);
        assert!(foot.eval(&p).unwrap().max_abs() <= 1e-5);
    }
}

#[test]
fn mass_term_is_twice_m_squared_volume() {
    let c = generic();
    for p in points() {
        let fr = c.frame(&p).unwrap();
        let m = lagrangian::mass_term_at(&fr, 0.3, Orientation::Positive);
        let want = 2.0 * 0.09 * fr.metric.sqrt_abs_det();
        assert!((m[VOLUME_BLADE] - want).abs() <= 1e-12);
    }
}

#[test]
fn maxwell_structure_on_generic_coframe() {
    let c = generic();
    let s = fd();
    let matter = maxwell::einstein_source(&c, s);
    let j = maxwell::currents(&c, &matter, s);
    let f_closed = maxwell::field_strengths(&c, s).exterior_derivative(s);
    let inhom = maxwell::inhomogeneous_residual(&c, &j, s);
    let split = maxwell::hodge_laplacian_split(&c, s);
    let w = cartan::connection_from_coframe(&c, s);
    let sp = maxwell::superpotentials(&c, &w);
    let bal = maxwell::balance_residual(&c, &sp, &matter, 0.0, s);
    let p = Point::new(0.1, -0.2, 0.05, 0.15);
    assert!(max_abs_legs(&f_closed.eval(&p).unwrap()) <= 1e-5);
    assert!(max_abs_legs(&inhom.eval(&p).unwrap()) <= 1e-4);
    assert!(max_abs_legs(&split.eval(&p).unwrap().closure()) <= 1e-4);
    assert!(max_abs_legs(&bal.eval(&p).unwrap()) <= 1e-4);
    // A current that is not trivially zero.
    assert!(max_abs_legs(&j.eval(&p).unwrap()) > 1e-2);
}

#[test]
fn currents_are_conserved_on_flrw() {
    let (c, p) = flrw();
    let s = fd();
    let matter = maxwell::einstein_source(&c, s);
    let j = maxwell::currents(&c, &matter, s);
    assert!(max_abs_legs(&maxwell::conservation(&c, &j, s).eval(&p).unwrap()) <= 1e-3);
}

#[test]
fn m_tensor_is_symmetric_in_last_pair() {
    let c = generic();
    let m = maxwell::m_tensor(&c, fd()).eval(&Point::default()).unwrap();
    for d in 0..4 {
        for k in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    assert!((m[d][k][a][b] - m[d][k][b][a]).abs() <= 1e-12);
                }
            }
        }
    }
}

#[test]
fn torsion_decomposition_on_generic_coframe() {
    let c = generic();
    let s = fd();
    let t = teleparallel::torsion_forms(&c, s);
    let parts = teleparallel::decompose_torsion(&t, &c);
    let lg = lagrangian::lagrangian_g(&c, s);
    let lt = teleparallel::teleparallel_lagrangian(&t, &c, 0.0);
    for p in points() {
        let pt = parts.eval(&p).unwrap();
        let fr = c.frame(&p).unwrap();
        for piece in [&pt.tensor, &pt.trace, &pt.axial] {
            assert!(max_abs_legs(piece) > 1e-3, "every irreducible piece is present");
        }
        for a in 0..4 {
            let rem = pt.theta[a] - pt.tensor[a] - pt.trace[a] - pt.axial[a];
            assert!(rem.max_abs() <= 1e-12);
        }
        let sets = [pt.tensor, pt.trace, pt.axial];
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert!(teleparallel::torsion_inner(&fr, &sets[i], &sets[j]).abs() <= 1e-10);
            }
        }
        assert!((lt.coefficient(&p).unwrap() - lg.coefficient(&p).unwrap()).abs() <= 1e-5);
    }
}

#[test]
fn flrw_torsion_is_pure_trace() {
    let (c, p) = flrw();
    let t = teleparallel::torsion_forms(&c, fd());
    let pt = teleparallel::decompose_torsion(&t, &c).eval(&p).unwrap();
    let fr = c.frame(&p).unwrap();
    for i in 1..4 {
        // Θ^i = (1/t) θ^0∧θ^i.
        let expect = fr.wedge_legs(&[0, i]) * 0.5;
        assert!((pt.theta[i] - expect).max_abs() <= 1e-9);
    }
    assert!(max_abs_legs(&pt.tensor) <= 1e-9);
    assert!(max_abs_legs(&pt.axial) <= 1e-12);
    assert!(pt.theta[0].max_abs() <= 1e-12);
}

#[test]
fn massive_balance_on_flrw() {
    let (c, p) = flrw();
    let s = fd();
    let m = 0.1;
    let w = cartan::connection_from_coframe(&c, s);
    let sp = maxwell::superpotentials(&c, &w);
    let g = maxwell::einstein_source(&c, s);
    let fr = c.frame_field();
    let t = g.zip(&fr, move |_, g, fr| Ok(std::array::from_fn(|a| g[a] - fr.legs[a] * (m * m))));
    let bal = maxwell::balance_residual(&c, &sp, &t, m, s);
    let div = maxwell::massive_divergence_residual(&c, &sp, &t, m, s);
    assert!(max_abs_legs(&bal.eval(&p).unwrap()) <= 1e-4);
    assert!(max_abs_legs(&div.eval(&p).unwrap()) <= 1e-3);
    let zero: [Multivector; 4] = Default::default();
    assert_ne!(t.eval(&p).unwrap(), zero);
}
