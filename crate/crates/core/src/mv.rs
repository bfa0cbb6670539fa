//! Pointwise Clifford algebra of 1-forms over a four dimensional chart.
//!
//! A [`Multivector`] stores the 16 coefficients of an inhomogeneous form in
//! the coordinate blade basis `dx^I`, where bit `μ` of the index `I` is set
//! iff `dx^μ` is a factor. The wedge product is metric free; every other
//! product takes a [`MetricAtPoint`] holding the covariant metric `g_{μν}`
//! and its inverse, which supplies the scalar product of basis 1-forms
//! `dx^μ · dx^ν = g^{μν}`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use nalgebra::{Matrix4, SymmetricEigen};

use crate::error::{Error, Result};

/// Number of blades in the exterior algebra of a 4-dimensional space.
pub const BLADES: usize = 16;
/// Blade index of the top form `dx^0 ∧ dx^1 ∧ dx^2 ∧ dx^3`.
pub const VOLUME_BLADE: usize = 0b1111;

/// Minkowski signature `(+,-,-,-)`, used for tetrad indices throughout.
pub const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

#[inline]
pub fn grade_of(blade: usize) -> usize {
    blade.count_ones() as usize
}

/// Sign of the permutation that sorts the concatenation of two blades.
#[inline]
pub fn reorder_sign(a: usize, b: usize) -> f64 {
    let mut a = a >> 1;
    let mut swaps = 0;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Clone, Copy, PartialEq, Default)]
pub struct Multivector(pub [f64; BLADES]);

impl Multivector {
    pub const ZERO: Multivector = Multivector([0.0; BLADES]);

    pub fn scalar(s: f64) -> Self {
        let mut m = Self::ZERO;
        m.0[0] = s;
        m
    }

    /// The basis 1-form `dx^mu`.
    pub fn basis(mu: usize) -> Self {
        Self::blade(1 << mu, 1.0)
    }

    pub fn blade(index: usize, coeff: f64) -> Self {
        let mut m = Self::ZERO;
        m.0[index] = coeff;
        m
    }

    /// The 1-form `Σ_μ c_μ dx^μ`.
    pub fn one_form(c: [f64; 4]) -> Self {
        let mut m = Self::ZERO;
        for (mu, v) in c.iter().enumerate() {
            m.0[1 << mu] = *v;
        }
        m
    }

    /// Coefficients of the grade-1 part.
    pub fn vector_part(&self) -> [f64; 4] {
        [self.0[1], self.0[2], self.0[4], self.0[8]]
    }

    /// Coefficient of `dx^0 ∧ dx^1 ∧ dx^2 ∧ dx^3`.
    pub fn volume_coefficient(&self) -> f64 {
        self.0[VOLUME_BLADE]
    }

    pub fn scalar_part(&self) -> f64 {
        self.0[0]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_homogeneous(&self, grade: usize) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, c)| grade_of(i) == grade || *c == 0.0)
    }

    pub fn grade_project(&self, p: usize) -> Result<Self> {
        if p > 4 {
            return Err(Error::GradeOutOfRange(p));
        }
        Ok(self.grade_part(p))
    }

    /// Infallible grade projection; grades above 4 give zero.
    pub fn grade_part(&self, p: usize) -> Self {
        let mut m = Self::ZERO;
        for (i, c) in self.0.iter().enumerate() {
            if grade_of(i) == p {
                m.0[i] = *c;
            }
        }
        m
    }

    pub fn reversion(&self) -> Self {
        let mut m = *self;
        for (i, c) in m.0.iter_mut().enumerate() {
            let p = grade_of(i);
            if (p * p.saturating_sub(1) / 2) % 2 == 1 {
                *c = -*c;
            }
        }
        m
    }

    /// Grade involution, `(-1)^p` on the grade-p part.
    pub fn involution(&self) -> Self {
        let mut m = *self;
        for (i, c) in m.0.iter_mut().enumerate() {
            if grade_of(i) % 2 == 1 {
                *c = -*c;
            }
        }
        m
    }

    pub fn wedge(&self, other: &Self) -> Self {
        wedge(self, other)
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if i != 0 {
                write!(f, " dx")?;
                for mu in 0..4 {
                    if i & (1 << mu) != 0 {
                        write!(f, "{mu}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Index<usize> for Multivector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Multivector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for Multivector {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for Multivector {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0.iter()) {
            *a += b;
        }
    }
}

impl Sub for Multivector {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl SubAssign for Multivector {
    fn sub_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0.iter()) {
            *a -= b;
        }
    }
}

impl Neg for Multivector {
    type Output = Self;
    fn neg(mut self) -> Self {
        for a in self.0.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl Mul<f64> for Multivector {
    type Output = Self;
    fn mul(mut self, s: f64) -> Self {
        for a in self.0.iter_mut() {
            *a *= s;
        }
        self
    }
}

impl Mul<Multivector> for f64 {
    type Output = Multivector;
    fn mul(self, m: Multivector) -> Multivector {
        m * self
    }
}

impl std::iter::Sum for Multivector {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

pub fn wedge(a: &Multivector, b: &Multivector) -> Multivector {
    let mut out = Multivector::ZERO;
    for (i, ca) in a.0.iter().enumerate() {
        if *ca == 0.0 {
            continue;
        }
        for (j, cb) in b.0.iter().enumerate() {
            if *cb == 0.0 || i & j != 0 {
                continue;
            }
            out.0[i | j] += reorder_sign(i, j) * ca * cb;
        }
    }
    out
}

/// Orientation of the chart volume element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    pub fn from_sign(s: f64) -> Self {
        if s < 0.0 {
            Orientation::Negative
        } else {
            Orientation::Positive
        }
    }
}

/// Covariant metric at a point together with the cached inverse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricAtPoint {
    g: Matrix4<f64>,
    g_inv: Matrix4<f64>,
    sqrt_abs_det: f64,
    det_sign: f64,
}

impl MetricAtPoint {
    /// Validates symmetry and Lorentz signature `(+,-,-,-)`.
    pub fn new(g: Matrix4<f64>) -> Result<Self> {
        let asym = (g - g.transpose()).abs().max();
        if asym > 1e-14 * g.abs().max().max(1.0) {
            return Err(Error::InvalidMetric(format!("asymmetry {asym:e}")));
        }
        let eig = SymmetricEigen::new(g);
        let positive = eig.eigenvalues.iter().filter(|l| **l > 0.0).count();
        let negative = eig.eigenvalues.iter().filter(|l| **l < 0.0).count();
        if positive != 1 || negative != 3 {
            return Err(Error::InvalidMetric(format!(
                "signature ({positive} positive, {negative} negative eigenvalues)"
            )));
        }
        let det = g.determinant();
        let g_inv = g
            .try_inverse()
            .ok_or_else(|| Error::InvalidMetric("singular".into()))?;
        let g_inv = 0.5 * (g_inv + g_inv.transpose());
        Ok(Self {
            g,
            g_inv,
            sqrt_abs_det: det.abs().sqrt(),
            det_sign: det.signum(),
        })
    }

    pub fn minkowski() -> Self {
        let g = Matrix4::from_diagonal(&ETA.into());
        Self {
            g,
            g_inv: g,
            sqrt_abs_det: 1.0,
            det_sign: -1.0,
        }
    }

    /// Metric `g_{μν} = η_ab E^a_μ E^b_ν` of a coframe whose rows are the
    /// components `E^a_μ`, with `e_inv` the inverse matrix (columns are the
    /// dual frame vectors). Lorentz signature holds by construction.
    pub fn from_frame(e: &Matrix4<f64>, e_inv: &Matrix4<f64>) -> Self {
        let eta = Matrix4::from_diagonal(&ETA.into());
        let g = e.transpose() * eta * e;
        let g_inv = e_inv * eta * e_inv.transpose();
        Self {
            g: 0.5 * (g + g.transpose()),
            g_inv: 0.5 * (g_inv + g_inv.transpose()),
            sqrt_abs_det: e.determinant().abs(),
            det_sign: -1.0,
        }
    }

    pub fn g(&self) -> &Matrix4<f64> {
        &self.g
    }

    pub fn g_inv(&self) -> &Matrix4<f64> {
        &self.g_inv
    }

    pub fn sqrt_abs_det(&self) -> f64 {
        self.sqrt_abs_det
    }

    pub fn det_sign(&self) -> f64 {
        self.det_sign
    }

    /// Scalar product of two 1-forms given by their coordinate components.
    pub fn inner(&self, u: &[f64; 4], v: &[f64; 4]) -> f64 {
        let mut s = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                s += u[mu] * self.g_inv[(mu, nu)] * v[nu];
            }
        }
        s
    }

    /// Raise a 1-form index: `w^ν = g^{νμ} u_μ`.
    pub fn raise(&self, u: &[f64; 4]) -> [f64; 4] {
        let mut w = [0.0; 4];
        for (nu, w) in w.iter_mut().enumerate() {
            for mu in 0..4 {
                *w += self.g_inv[(nu, mu)] * u[mu];
            }
        }
        w
    }

    /// Oriented unit volume form `τ_g = ±√|det g| dx^0∧dx^1∧dx^2∧dx^3`.
    pub fn volume(&self, o: Orientation) -> Multivector {
        Multivector::blade(VOLUME_BLADE, o.sign() * self.sqrt_abs_det)
    }
}

/// Metric-free interior product of a vector (contravariant components) into a form.
pub fn interior_vector(w: &[f64; 4], b: &Multivector) -> Multivector {
    let mut out = Multivector::ZERO;
    for (i, c) in b.0.iter().enumerate() {
        if *c == 0.0 {
            continue;
        }
        let mut below = 0usize;
        for (mu, wmu) in w.iter().enumerate() {
            let bit = 1 << mu;
            if i & bit != 0 {
                let sign = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
                out.0[i ^ bit] += sign * wmu * c;
                below += 1;
            }
        }
    }
    out
}

/// `u ⌟ B` for a 1-form `u` given by its coordinate components.
pub fn contract_one_form(u: &[f64; 4], b: &Multivector, m: &MetricAtPoint) -> Multivector {
    interior_vector(&m.raise(u), b)
}

fn contract_basis(mu: usize, b: &Multivector, m: &MetricAtPoint) -> Multivector {
    let w = [
        m.g_inv[(0, mu)],
        m.g_inv[(1, mu)],
        m.g_inv[(2, mu)],
        m.g_inv[(3, mu)],
    ];
    interior_vector(&w, b)
}

/// Left contraction `A ⌟ B`, using `(u∧A')⌟B = u⌟(A'⌟B)`.
pub fn contract_left(a: &Multivector, b: &Multivector, m: &MetricAtPoint) -> Multivector {
    let mut out = Multivector::ZERO;
    for (i, ca) in a.0.iter().enumerate() {
        if *ca == 0.0 {
            continue;
        }
        let mut x = *b;
        for mu in (0..4).rev() {
            if i & (1 << mu) != 0 {
                x = contract_basis(mu, &x, m);
            }
        }
        out += x * *ca;
    }
    out
}

/// Right contraction `A ⌞ B = (B̃ ⌟ Ã)~`.
pub fn contract_right(a: &Multivector, b: &Multivector, m: &MetricAtPoint) -> Multivector {
    contract_left(&b.reversion(), &a.reversion(), m).reversion()
}

/// Scalar product `A · B = ⟨Ã ⌟ B⟩₀`; on equal-grade blades this is the Gram
/// determinant of the pairwise 1-form products.
pub fn scalar_product(a: &Multivector, b: &Multivector, m: &MetricAtPoint) -> f64 {
    let mut s = 0.0;
    for p in 0..=4 {
        let bp = b.grade_part(p);
        if bp.max_abs() == 0.0 {
            continue;
        }
        s += contract_left(&a.grade_part(p).reversion(), &bp, m).scalar_part();
    }
    s
}

/// Clifford product for the metric `m`.
pub fn clifford_product(a: &Multivector, b: &Multivector, m: &MetricAtPoint) -> Multivector {
    let mut out = Multivector::ZERO;
    for (i, ca) in a.0.iter().enumerate() {
        if *ca != 0.0 {
            out += blade_times(i, b, m) * *ca;
        }
    }
    out
}

/// `dx^I B` by peeling off the lowest factor:
/// `e_i ∧ X = e_i X - e_i ⌟ X`, so `e_I B = e_i (X B) - (e_i ⌟ X) B`.
fn blade_times(i: usize, b: &Multivector, m: &MetricAtPoint) -> Multivector {
    if i == 0 {
        return *b;
    }
    let low = i.trailing_zeros() as usize;
    let rest = i ^ (1 << low);
    let rest_b = blade_times(rest, b, m);
    let e = Multivector::basis(low);
    let first = contract_basis(low, &rest_b, m) + wedge(&e, &rest_b);
    let inner = contract_basis(low, &Multivector::blade(rest, 1.0), m);
    first - clifford_product(&inner, b, m)
}

/// Hodge dual `⋆A = Ã ⌟ τ_g`.
pub fn hodge_dual(a: &Multivector, m: &MetricAtPoint, o: Orientation) -> Multivector {
    contract_left(&a.reversion(), &m.volume(o), m)
}

/// Sign `s` with `⋆⋆A_p = s A_p`.
pub fn double_dual_sign(p: usize, m: &MetricAtPoint) -> f64 {
    let parity = if (p * (4 - p)).is_multiple_of(2) { 1.0 } else { -1.0 };
    parity * m.det_sign()
}

/// Inverse Hodge dual, grade by grade.
pub fn hodge_inverse(b: &Multivector, m: &MetricAtPoint, o: Orientation) -> Multivector {
    let mut out = Multivector::ZERO;
    for q in 0..=4 {
        let bq = b.grade_part(q);
        if bq.max_abs() == 0.0 {
            continue;
        }
        out += hodge_dual(&bq, m, o) * double_dual_sign(4 - q, m);
    }
    out
}

/// Outermorphism of the linear map on 1-forms sending `dx^ν` to
/// `Σ_μ map[(μ, ν)] dx^μ` (column `ν` holds the image of `dx^ν`).
pub fn outermorphism(map: &Matrix4<f64>, a: &Multivector) -> Multivector {
    let images: [Multivector; 4] = std::array::from_fn(|nu| {
        Multivector::one_form([map[(0, nu)], map[(1, nu)], map[(2, nu)], map[(3, nu)]])
    });
    let mut out = Multivector::ZERO;
    for (i, c) in a.0.iter().enumerate() {
        if *c == 0.0 {
            continue;
        }
        let mut img = Multivector::scalar(1.0);
        for (nu, image) in images.iter().enumerate() {
            if i & (1 << nu) != 0 {
                img = wedge(&img, image);
            }
        }
        out += img * *c;
    }
    out
}
