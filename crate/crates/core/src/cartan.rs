//! Coframes, Levi-Civita connection forms, curvature and its contractions.
//!
//! Tetrad indices run over `0..4` with `η = diag(1,-1,-1,-1)`. The six
//! independent components of an antisymmetric pair `X^{ab}` are stored in
//! the order of [`PAIRS`].

use std::sync::Arc;

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::field::{Domain, FdScheme, Field, FormField, Point};
use crate::mv::{self, contract_left, wedge, MetricAtPoint, Multivector, Orientation, ETA};

/// Index pairs `a < b` of an antisymmetric tetrad array.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Slot of `(a, b)` in [`PAIRS`] and the sign relating `X^{ab}` to the stored value.
pub fn pair_slot(a: usize, b: usize) -> Option<(usize, f64)> {
    if a == b {
        return None;
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let k = PAIRS.iter().position(|&p| p == (lo, hi)).expect("valid pair");
    Some((k, sign))
}

/// `X^{ab}` read from antisymmetric storage.
pub fn pair_get(x: &[Multivector; 6], a: usize, b: usize) -> Multivector {
    match pair_slot(a, b) {
        None => Multivector::ZERO,
        Some((k, s)) => x[k] * s,
    }
}

/// Minimum `|det θ^a_μ|` accepted for a coframe.
pub const DEGENERACY_CUTOFF: f64 = 1e-10;

type ComponentFn = dyn Fn(&Point) -> Result<Matrix4<f64>> + Send + Sync;

/// Four 1-form fields `θ^a`, declared orthonormal for the metric they induce.
#[derive(Clone)]
pub struct Coframe {
    domain: Arc<Domain>,
    components: Arc<ComponentFn>,
    orientation: Orientation,
}

/// A coframe evaluated at one point.
#[derive(Clone, Copy, Debug)]
pub struct Frame {
    /// Row `a` holds the components `θ^a_μ`.
    pub e: Matrix4<f64>,
    /// Column `a` holds the dual frame vector `e_a^μ`.
    pub e_inv: Matrix4<f64>,
    pub metric: MetricAtPoint,
    pub legs: [Multivector; 4],
}

impl Frame {
    pub fn from_components(e: Matrix4<f64>, point: &Point) -> Result<Self> {
        let det = e.determinant();
        if !det.is_finite() || det.abs() <= DEGENERACY_CUTOFF {
            return Err(Error::DegenerateCoframe { point: *point, det });
        }
        let e_inv = e
            .try_inverse()
            .ok_or(Error::DegenerateCoframe { point: *point, det })?;
        let legs = std::array::from_fn(|a| {
            Multivector::one_form([e[(a, 0)], e[(a, 1)], e[(a, 2)], e[(a, 3)]])
        });
        Ok(Self {
            e,
            e_inv,
            metric: MetricAtPoint::from_frame(&e, &e_inv),
            legs,
        })
    }

    /// `θ_a = η_ab θ^b`.
    pub fn lowered(&self, a: usize) -> Multivector {
        self.legs[a] * ETA[a]
    }

    /// Contravariant components of the frame vector `e_a`.
    pub fn dual_vector(&self, a: usize) -> [f64; 4] {
        [
            self.e_inv[(0, a)],
            self.e_inv[(1, a)],
            self.e_inv[(2, a)],
            self.e_inv[(3, a)],
        ]
    }

    /// Tetrad components `A_a = A(e_a)` of a 1-form, so `A = A_a θ^a`.
    pub fn tetrad_components(&self, a: &Multivector) -> [f64; 4] {
        let c = a.vector_part();
        std::array::from_fn(|k| (0..4).map(|mu| c[mu] * self.e_inv[(mu, k)]).sum())
    }

    /// Tetrad component `F_{cd} = F(e_c, e_d)` of a 2-form.
    pub fn two_form_component(&self, f: &Multivector, c: usize, d: usize) -> f64 {
        let inner = mv::interior_vector(&self.dual_vector(c), f);
        mv::interior_vector(&self.dual_vector(d), &inner).scalar_part()
    }

    /// `θ^{a_1} ∧ ... ∧ θ^{a_k}` for the listed legs.
    pub fn wedge_legs(&self, idx: &[usize]) -> Multivector {
        idx.iter()
            .fold(Multivector::scalar(1.0), |acc, &a| wedge(&acc, &self.legs[a]))
    }
}

impl Coframe {
    /// Coframe from a provider of the component matrix `E[(a, μ)] = θ^a_μ`.
    pub fn new(
        domain: Domain,
        components: impl Fn(&Point) -> Result<Matrix4<f64>> + Send + Sync + 'static,
        orientation: Orientation,
    ) -> Self {
        Self {
            domain: Arc::new(domain),
            components: Arc::new(components),
            orientation,
        }
    }

    /// Coframe from four grade-1 form fields on a common domain.
    pub fn from_legs(legs: [FormField; 4], orientation: Orientation) -> Result<Self> {
        if let Some(bad) = legs.iter().find(|l| l.grade() != 1) {
            return Err(Error::GradeOutOfRange(bad.grade()));
        }
        let domain = legs[0].domain().clone();
        Ok(Self::new(
            domain,
            move |p| {
                let mut e = Matrix4::zeros();
                for (a, leg) in legs.iter().enumerate() {
                    let c = leg.eval(p)?.vector_part();
                    for mu in 0..4 {
                        e[(a, mu)] = c[mu];
                    }
                }
                Ok(e)
            },
            orientation,
        ))
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn components(&self, p: &Point) -> Result<Matrix4<f64>> {
        self.domain.check(p)?;
        (self.components)(p)
    }

    pub fn frame(&self, p: &Point) -> Result<Frame> {
        Frame::from_components(self.components(p)?, p)
    }

    pub fn legs(&self) -> Field<[Multivector; 4]> {
        let c = self.clone();
        Field::derived(self.domain.clone(), move |p| Ok(c.frame(p)?.legs))
    }

    pub fn lowered_legs(&self) -> Field<[Multivector; 4]> {
        let c = self.clone();
        Field::derived(self.domain.clone(), move |p| {
            let f = c.frame(p)?;
            Ok(std::array::from_fn(|a| f.lowered(a)))
        })
    }

    pub fn leg(&self, a: usize) -> FormField {
        FormField::from_field(1, self.legs().map(move |_, l| Ok(l[a])))
    }

    pub fn metric_field(&self) -> Field<MetricAtPoint> {
        let c = self.clone();
        Field::derived(self.domain.clone(), move |p| Ok(c.frame(p)?.metric))
    }

    pub fn frame_field(&self) -> Field<Frame> {
        let c = self.clone();
        Field::derived(self.domain.clone(), move |p| c.frame(p))
    }

    /// `dθ^a` for all four legs.
    pub fn exterior_derivatives(&self, s: FdScheme) -> Field<[Multivector; 4]> {
        self.legs().exterior_derivative(s)
    }

    /// `δθ^a` for all four legs, taken with the induced metric.
    pub fn codifferentials(&self, s: FdScheme) -> Field<[Multivector; 4]> {
        self.legs().codifferential(&self.metric_field(), self.orientation, s)
    }

    /// First structure equation residual `dθ^a + ω^a_b ∧ θ^b` per leg.
    pub fn structure_residual(&self, omega: &ConnectionForms, s: FdScheme) -> Field<[Multivector; 4]> {
        let frames = self.frame_field();
        let both = self.exterior_derivatives(s).zip(&omega.field, |_, d, w| Ok((d, w)));
        both.zip(&frames, |_, (d, w), fr| {
            Ok(std::array::from_fn(|a| {
                let mut r = d[a];
                for b in 0..4 {
                    r += wedge(&mixed(&w, a, b), &fr.legs[b]);
                }
                r
            }))
        })
    }
}

/// `ω^a_b = ω^{ac} η_cb` from antisymmetric storage.
pub fn mixed(x: &[Multivector; 6], a: usize, b: usize) -> Multivector {
    pair_get(x, a, b) * ETA[b]
}

/// `ω_ab = η_ac η_bd ω^{cd}`.
pub fn lowered(x: &[Multivector; 6], a: usize, b: usize) -> Multivector {
    pair_get(x, a, b) * (ETA[a] * ETA[b])
}

/// Levi-Civita connection 1-forms `ω^{ab}` (stored for `a < b`).
#[derive(Clone)]
pub struct ConnectionForms {
    pub field: Field<[Multivector; 6]>,
}

impl ConnectionForms {
    pub fn eval(&self, p: &Point) -> Result<[Multivector; 6]> {
        self.field.eval(p)
    }

    pub fn upper(&self, a: usize, b: usize, p: &Point) -> Result<Multivector> {
        Ok(pair_get(&self.eval(p)?, a, b))
    }
}

/// Curvature 2-forms `ℛ^{ab}` (stored for `a < b`).
#[derive(Clone)]
pub struct CurvatureForms {
    pub field: Field<[Multivector; 6]>,
}

impl CurvatureForms {
    pub fn eval(&self, p: &Point) -> Result<[Multivector; 6]> {
        self.field.eval(p)
    }
}

/// Algebraic inversion of the first structure equation:
/// `ω^{cd} = ½[θ^d⌟dθ^c − θ^c⌟dθ^d + (θ^c⌟(θ^d⌟dθ_a)) θ^a]`.
pub fn connection_at(fr: &Frame, dtheta: &[Multivector; 4]) -> [Multivector; 6] {
    let m = &fr.metric;
    let th = &fr.legs;
    let dlow: [Multivector; 4] = std::array::from_fn(|a| dtheta[a] * ETA[a]);
    std::array::from_fn(|k| {
        let (c, d) = PAIRS[k];
        let mut w = contract_left(&th[d], &dtheta[c], m) - contract_left(&th[c], &dtheta[d], m);
        for a in 0..4 {
            let s = contract_left(&th[c], &contract_left(&th[d], &dlow[a], m), m).scalar_part();
            w += th[a] * s;
        }
        w * 0.5
    })
}

pub fn connection_from_coframe(c: &Coframe, s: FdScheme) -> ConnectionForms {
    let field = c
        .exterior_derivatives(s)
        .zip(&c.frame_field(), |_, d, fr| Ok(connection_at(&fr, &d)));
    ConnectionForms { field }
}

/// `ω^a_c ∧ ω^{cb}` in antisymmetric storage.
pub fn omega_wedge_omega(w: &[Multivector; 6]) -> [Multivector; 6] {
    std::array::from_fn(|k| {
        let (a, b) = PAIRS[k];
        (0..4).map(|c| wedge(&mixed(w, a, c), &pair_get(w, c, b))).sum()
    })
}

/// `ℛ^{ab} = dω^{ab} + ω^a_c ∧ ω^{cb}`.
pub fn curvature_forms(omega: &ConnectionForms, s: FdScheme) -> CurvatureForms {
    let field = omega
        .field
        .exterior_derivative(s)
        .zip(&omega.field, |_, dw, w| {
            let ww = omega_wedge_omega(&w);
            Ok(std::array::from_fn(|k| dw[k] + ww[k]))
        });
    CurvatureForms { field }
}

/// Ricci 1-forms with a lower index, `ℛ_c = −θ^d ⌟ ℛ_cd`.
pub fn ricci_at(fr: &Frame, curv: &[Multivector; 6]) -> [Multivector; 4] {
    std::array::from_fn(|c| {
        let mut r = Multivector::ZERO;
        for d in 0..4 {
            let rcd = lowered(curv, c, d);
            r -= contract_left(&fr.legs[d], &rcd, &fr.metric);
        }
        r
    })
}

pub fn ricci_one_forms(c: &Coframe, curv: &CurvatureForms) -> Field<[Multivector; 4]> {
    curv.field.zip(&c.frame_field(), |_, r, fr| Ok(ricci_at(&fr, &r)))
}

/// `R = θ^c • ℛ_c`.
pub fn scalar_curvature_at(fr: &Frame, ricci: &[Multivector; 4]) -> f64 {
    (0..4)
        .map(|c| mv::scalar_product(&fr.legs[c], &ricci[c], &fr.metric))
        .sum()
}

pub fn scalar_curvature(c: &Coframe, ricci: &Field<[Multivector; 4]>) -> Field<f64> {
    ricci.zip(&c.frame_field(), |_, r, fr| Ok(scalar_curvature_at(&fr, &r)))
}

/// Einstein 1-forms with an upper index, `𝒢^a = ℛ^a − ½Rθ^a`.
pub fn einstein_at(fr: &Frame, ricci: &[Multivector; 4], r: f64) -> [Multivector; 4] {
    std::array::from_fn(|a| ricci[a] * ETA[a] - fr.legs[a] * (0.5 * r))
}

pub fn einstein_one_forms(
    c: &Coframe,
    ricci: &Field<[Multivector; 4]>,
    r_scalar: &Field<f64>,
) -> Field<[Multivector; 4]> {
    let both = ricci.zip(r_scalar, |_, ric, r| Ok((ric, r)));
    both.zip(&c.frame_field(), |_, (ric, r), fr| Ok(einstein_at(&fr, &ric, r)))
}

/// Table `L[a][b][c]` with `ω^a_b = L^a_{bc} θ^c`, i.e. `L^a_{bc} = ω^a_b(e_c)`.
pub type CoefficientTable = [[[f64; 4]; 4]; 4];

pub fn coefficients_at(fr: &Frame, w: &[Multivector; 6]) -> CoefficientTable {
    let mut l = [[[0.0; 4]; 4]; 4];
    for (a, la) in l.iter_mut().enumerate() {
        for (b, lab) in la.iter_mut().enumerate() {
            *lab = fr.tetrad_components(&mixed(w, a, b));
        }
    }
    l
}

pub fn connection_coefficients(omega: &ConnectionForms, c: &Coframe) -> Field<CoefficientTable> {
    omega.field.zip(&c.frame_field(), |_, w, fr| Ok(coefficients_at(&fr, &w)))
}

/// Tetrad components `R^{ab}_{cd}` of the curvature.
pub fn riemann_components(fr: &Frame, curv: &[Multivector; 6]) -> [[[[f64; 4]; 4]; 4]; 4] {
    let mut r = [[[[0.0; 4]; 4]; 4]; 4];
    for (k, &(a, b)) in PAIRS.iter().enumerate() {
        for c in 0..4 {
            for d in 0..4 {
                let v = fr.two_form_component(&curv[k], c, d);
                r[a][b][c][d] = v;
                r[b][a][c][d] = -v;
            }
        }
    }
    r
}

/// `R_{abcd} R^{abcd}`.
pub fn kretschmann_at(fr: &Frame, curv: &[Multivector; 6]) -> f64 {
    let r = riemann_components(fr, curv);
    let mut k = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let v = r[a][b][c][d];
                    k += v * v * ETA[a] * ETA[b] * ETA[c] * ETA[d];
                }
            }
        }
    }
    k
}

pub fn kretschmann(c: &Coframe, curv: &CurvatureForms) -> Field<f64> {
    curv.field.zip(&c.frame_field(), |_, r, fr| Ok(kretschmann_at(&fr, &r)))
}
