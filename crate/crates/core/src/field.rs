//! Fields over a chart of ℝ⁴: evaluation, central finite differences,
//! exterior derivative, codifferential and pullback.
//!
//! Everything is built on [`Field<T>`], a shared, immutable map from chart
//! points to values. Values that can be differentiated implement
//! [`FieldValue`]; values made of forms (single forms, fixed bundles such as
//! the four coframe legs, or dynamic lists) additionally implement
//! [`FormValue`], so that `d` and `δ` act on a whole bundle with one stencil.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mv::{self, MetricAtPoint, Multivector, Orientation};

#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point(pub [f64; 4]);

impl Point {
    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Point([x0, x1, x2, x3])
    }

    pub fn shifted(&self, axis: usize, delta: f64) -> Self {
        let mut p = *self;
        p.0[axis] += delta;
        p
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.0[0], self.0[1], self.0[2], self.0[3]
        )
    }
}

/// Region removed from a domain box.
#[derive(Clone, Debug, PartialEq)]
pub enum Exclusion {
    /// Open band `lo < x^axis < hi`.
    AxisBand { axis: usize, lo: f64, hi: f64 },
    /// Closed ball `Σ_{i=1..3} (x^i)² <= radius²` in the spatial coordinates.
    SpatialBall { radius: f64 },
}

impl Exclusion {
    fn excludes(&self, p: &Point) -> bool {
        match *self {
            Exclusion::AxisBand { axis, lo, hi } => p[axis] > lo && p[axis] < hi,
            Exclusion::SpatialBall { radius } => {
                p[1] * p[1] + p[2] * p[2] + p[3] * p[3] <= radius * radius
            }
        }
    }
}

/// Axis-aligned closed box minus exclusion zones.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
    pub exclusions: Vec<Exclusion>,
}

impl Domain {
    pub fn new(lo: [f64; 4], hi: [f64; 4]) -> Self {
        Self {
            lo,
            hi,
            exclusions: Vec::new(),
        }
    }

    pub fn unbounded() -> Self {
        Self::new([f64::NEG_INFINITY; 4], [f64::INFINITY; 4])
    }

    pub fn with_exclusion(mut self, e: Exclusion) -> Self {
        self.exclusions.push(e);
        self
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.is_finite()
            && (0..4).all(|i| p[i] >= self.lo[i] && p[i] <= self.hi[i])
            && !self.exclusions.iter().any(|e| e.excludes(p))
    }

    /// Does the box contain `p` with at least `margin` to every face?
    /// Exclusions are checked without margin.
    pub fn contains_with_margin(&self, p: &Point, margin: f64) -> bool {
        self.contains(p) && (0..4).all(|i| p[i] - margin >= self.lo[i] && p[i] + margin <= self.hi[i])
    }

    pub fn check(&self, p: &Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { point: *p })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FdOrder {
    Second,
    Fourth,
}

impl FdOrder {
    pub fn from_int(order: u32) -> Result<Self> {
        match order {
            2 => Ok(FdOrder::Second),
            4 => Ok(FdOrder::Fourth),
            other => Err(Error::InvalidScheme(format!("order {other} (expected 2 or 4)"))),
        }
    }

    pub fn as_int(self) -> u32 {
        match self {
            FdOrder::Second => 2,
            FdOrder::Fourth => 4,
        }
    }

    /// Offsets (in steps) and weights of the central first-derivative stencil.
    fn stencil(self) -> &'static [(f64, f64)] {
        match self {
            FdOrder::Second => &[(-1.0, -0.5), (1.0, 0.5)],
            FdOrder::Fourth => &[
                (-2.0, 1.0 / 12.0),
                (-1.0, -8.0 / 12.0),
                (1.0, 8.0 / 12.0),
                (2.0, -1.0 / 12.0),
            ],
        }
    }

    /// Largest stencil offset in units of the step.
    pub fn reach(self) -> f64 {
        match self {
            FdOrder::Second => 1.0,
            FdOrder::Fourth => 2.0,
        }
    }
}

/// Central finite-difference scheme.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdScheme {
    step: f64,
    order: FdOrder,
}

impl Default for FdScheme {
    fn default() -> Self {
        Self {
            step: 1e-3,
            order: FdOrder::Second,
        }
    }
}

impl FdScheme {
    pub const MIN_STEP: f64 = 1e-6;
    pub const MAX_STEP: f64 = 1e-1;

    pub fn new(step: f64, order: FdOrder) -> Result<Self> {
        if !(Self::MIN_STEP..=Self::MAX_STEP).contains(&step) {
            return Err(Error::InvalidScheme(format!(
                "step {step:e} outside [{:e}, {:e}]",
                Self::MIN_STEP,
                Self::MAX_STEP
            )));
        }
        Ok(Self { step, order })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn order(&self) -> FdOrder {
        self.order
    }

    /// Distance from the centre to the outermost stencil point.
    pub fn reach(&self) -> f64 {
        self.order.reach() * self.step
    }

    /// Derivative of `f` along `axis` at `p`.
    pub fn derivative<T: FieldValue>(
        &self,
        f: &dyn Fn(&Point) -> Result<T>,
        axis: usize,
        p: &Point,
    ) -> Result<T> {
        let mut acc: Option<T> = None;
        for &(offset, weight) in self.order.stencil() {
            let q = p.shifted(axis, offset * self.step);
            let v = f(&q).map_err(|e| match e {
                Error::OutOfDomain { .. } => Error::StencilOutOfDomain { point: *p, axis },
                other => other,
            })?;
            match acc.as_mut() {
                None => {
                    let mut z = v.zeroed();
                    z.add_scaled(weight / self.step, &v);
                    acc = Some(z);
                }
                Some(a) => a.add_scaled(weight / self.step, &v),
            }
        }
        Ok(acc.expect("stencil is non-empty"))
    }

    pub fn gradient<T: FieldValue>(
        &self,
        f: &dyn Fn(&Point) -> Result<T>,
        p: &Point,
    ) -> Result<[T; 4]> {
        Ok([
            self.derivative(f, 0, p)?,
            self.derivative(f, 1, p)?,
            self.derivative(f, 2, p)?,
            self.derivative(f, 3, p)?,
        ])
    }
}

/// Values living in a real vector space.
pub trait FieldValue: Clone + Send + Sync + 'static {
    fn zeroed(&self) -> Self;
    fn add_scaled(&mut self, c: f64, other: &Self);
    fn max_abs(&self) -> f64;
}

impl FieldValue for f64 {
    fn zeroed(&self) -> Self {
        0.0
    }
    fn add_scaled(&mut self, c: f64, other: &Self) {
        *self += c * other;
    }
    fn max_abs(&self) -> f64 {
        self.abs()
    }
}

impl FieldValue for Multivector {
    fn zeroed(&self) -> Self {
        Multivector::ZERO
    }
    fn add_scaled(&mut self, c: f64, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a += c * b;
        }
    }
    fn max_abs(&self) -> f64 {
        Multivector::max_abs(self)
    }
}

impl<T: FieldValue, const N: usize> FieldValue for [T; N] {
    fn zeroed(&self) -> Self {
        std::array::from_fn(|i| self[i].zeroed())
    }
    fn add_scaled(&mut self, c: f64, other: &Self) {
        for (a, b) in self.iter_mut().zip(other.iter()) {
            a.add_scaled(c, b);
        }
    }
    fn max_abs(&self) -> f64 {
        self.iter().fold(0.0, |m, v| m.max(v.max_abs()))
    }
}

impl<T: FieldValue> FieldValue for Vec<T> {
    fn zeroed(&self) -> Self {
        self.iter().map(|v| v.zeroed()).collect()
    }
    fn add_scaled(&mut self, c: f64, other: &Self) {
        for (a, b) in self.iter_mut().zip(other.iter()) {
            a.add_scaled(c, b);
        }
    }
    fn max_abs(&self) -> f64 {
        self.iter().fold(0.0, |m, v| m.max(v.max_abs()))
    }
}

/// Values made of forms, so pointwise form operations act elementwise.
pub trait FormValue: FieldValue {
    fn map_forms(&self, f: &dyn Fn(&Multivector) -> Multivector) -> Self;
}

impl FormValue for Multivector {
    fn map_forms(&self, f: &dyn Fn(&Multivector) -> Multivector) -> Self {
        f(self)
    }
}

impl<T: FormValue, const N: usize> FormValue for [T; N] {
    fn map_forms(&self, f: &dyn Fn(&Multivector) -> Multivector) -> Self {
        std::array::from_fn(|i| self[i].map_forms(f))
    }
}

impl<T: FormValue> FormValue for Vec<T> {
    fn map_forms(&self, f: &dyn Fn(&Multivector) -> Multivector) -> Self {
        self.iter().map(|v| v.map_forms(f)).collect()
    }
}

type EvalFn<T> = dyn Fn(&Point) -> Result<T> + Send + Sync;

/// Immutable, shareable map from chart points to values.
pub struct Field<T> {
    domain: Arc<Domain>,
    eval: Arc<EvalFn<T>>,
}

impl<T> Clone for Field<T> {
    fn clone(&self) -> Self {
        Self {
            domain: self.domain.clone(),
            eval: self.eval.clone(),
        }
    }
}

impl<T: 'static> Field<T> {
    /// Field whose provider is only invoked inside `domain`.
    pub fn new(domain: Domain, f: impl Fn(&Point) -> Result<T> + Send + Sync + 'static) -> Self {
        let domain = Arc::new(domain);
        let d = domain.clone();
        Self {
            domain,
            eval: Arc::new(move |p: &Point| {
                d.check(p)?;
                f(p)
            }),
        }
    }

    /// Field whose provider does its own domain checks.
    pub(crate) fn derived(
        domain: Arc<Domain>,
        f: impl Fn(&Point) -> Result<T> + Send + Sync + 'static,
    ) -> Self {
        Self {
            domain,
            eval: Arc::new(f),
        }
    }

    pub fn eval(&self, p: &Point) -> Result<T> {
        (self.eval)(p)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub(crate) fn domain_arc(&self) -> Arc<Domain> {
        self.domain.clone()
    }

    pub fn map<U: 'static>(&self, f: impl Fn(&Point, T) -> Result<U> + Send + Sync + 'static) -> Field<U> {
        let inner = self.eval.clone();
        Field::derived(self.domain.clone(), move |p| f(p, inner(p)?))
    }

    pub fn zip<U: 'static, V: 'static>(
        &self,
        other: &Field<U>,
        f: impl Fn(&Point, T, U) -> Result<V> + Send + Sync + 'static,
    ) -> Field<V> {
        let a = self.eval.clone();
        let b = other.eval.clone();
        Field::derived(self.domain.clone(), move |p| f(p, a(p)?, b(p)?))
    }
}

impl<T: FieldValue> Field<T> {
    pub fn partial(&self, axis: usize, p: &Point, s: &FdScheme) -> Result<T> {
        check_stencil(&self.domain, p, axis, s)?;
        s.derivative(&*self.eval, axis, p)
    }

    pub fn gradient_field(&self, s: FdScheme) -> Field<[T; 4]> {
        let f = self.clone();
        Field::derived(self.domain.clone(), move |p| {
            Ok([
                f.partial(0, p, &s)?,
                f.partial(1, p, &s)?,
                f.partial(2, p, &s)?,
                f.partial(3, p, &s)?,
            ])
        })
    }
}

impl<T: FormValue> Field<T> {
    /// `d f = Σ_μ dx^μ ∧ ∂_μ f`, applied to every form in the value.
    pub fn exterior_derivative(&self, s: FdScheme) -> Field<T> {
        let f = self.clone();
        Field::derived(self.domain.clone(), move |p| {
            let mut out: Option<T> = None;
            for mu in 0..4 {
                let dmu = f.partial(mu, p, &s)?;
                let dx = Multivector::basis(mu);
                let term = dmu.map_forms(&|m| mv::wedge(&dx, m));
                match out.as_mut() {
                    None => out = Some(term),
                    Some(o) => o.add_scaled(1.0, &term),
                }
            }
            Ok(out.expect("four axes"))
        })
    }

    /// Pointwise Hodge dual with respect to `metric`.
    pub fn hodge(&self, metric: &Field<MetricAtPoint>, o: Orientation) -> Field<T> {
        self.zip(metric, move |_, v, m| Ok(v.map_forms(&|a| mv::hodge_dual(a, &m, o))))
    }

    /// Codifferential `δ = (-1)^p ⋆⁻¹ d ⋆` on each homogeneous grade `p`;
    /// on 1-forms this is `-⋆⁻¹ d ⋆`, and it annihilates 0-forms.
    pub fn codifferential(&self, metric: &Field<MetricAtPoint>, o: Orientation, s: FdScheme) -> Field<T> {
        let d_dual = self.hodge(metric, o).exterior_derivative(s);
        d_dual.zip(metric, move |_, v, m| Ok(v.map_forms(&|a| codifferential_from_d_dual(a, &m, o))))
    }
}

/// Given `d⋆A` (grade `5 - p`), recover `δA = (-1)^p ⋆⁻¹ d⋆A` (grade `p - 1`).
fn codifferential_from_d_dual(d_dual: &Multivector, m: &MetricAtPoint, o: Orientation) -> Multivector {
    let mut out = Multivector::ZERO;
    for q in 1..=4 {
        let part = d_dual.grade_part(q);
        if part.max_abs() == 0.0 {
            continue;
        }
        let p = 5 - q;
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        out += mv::hodge_inverse(&part, m, o) * sign;
    }
    out
}

fn check_stencil(domain: &Domain, p: &Point, axis: usize, s: &FdScheme) -> Result<()> {
    domain.check(p)?;
    let reach = s.reach();
    for q in [p.shifted(axis, -reach), p.shifted(axis, reach)] {
        if !domain.contains(&q) {
            return Err(Error::StencilOutOfDomain { point: *p, axis });
        }
    }
    Ok(())
}

/// Homogeneous form field of a declared grade.
#[derive(Clone)]
pub struct FormField {
    grade: usize,
    field: Field<Multivector>,
}

impl FormField {
    /// Wraps a provider; evaluation fails if the result is not of `grade`.
    pub fn new(
        grade: usize,
        domain: Domain,
        f: impl Fn(&Point) -> Result<Multivector> + Send + Sync + 'static,
    ) -> Result<Self> {
        if grade > 4 {
            return Err(Error::GradeOutOfRange(grade));
        }
        let field = Field::new(domain, move |p| Ok(f(p)?.grade_part(grade)));
        Ok(Self { grade, field })
    }

    pub fn from_field(grade: usize, field: Field<Multivector>) -> Self {
        Self { grade, field }
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn domain(&self) -> &Domain {
        self.field.domain()
    }

    pub fn eval(&self, p: &Point) -> Result<Multivector> {
        self.field.eval(p)
    }

    pub fn as_field(&self) -> &Field<Multivector> {
        &self.field
    }
}

pub fn partial_derivative(f: &FormField, mu: usize, p: &Point, s: &FdScheme) -> Result<Multivector> {
    f.field.partial(mu, p, s)
}

/// `df`; the derivative of a 4-form is the zero field.
pub fn exterior_derivative(f: &FormField, s: FdScheme) -> FormField {
    if f.grade >= 4 {
        let zero = Field::derived(f.field.domain_arc(), |_| Ok(Multivector::ZERO));
        return FormField::from_field(4, zero);
    }
    FormField::from_field(f.grade + 1, f.field.exterior_derivative(s))
}

pub fn codifferential(
    f: &FormField,
    metric: &Field<MetricAtPoint>,
    o: Orientation,
    s: FdScheme,
) -> FormField {
    if f.grade == 0 {
        let zero = Field::derived(f.field.domain_arc(), |_| Ok(Multivector::ZERO));
        return FormField::from_field(0, zero);
    }
    FormField::from_field(f.grade - 1, f.field.codifferential(metric, o, s))
}

type PointMap = dyn Fn(&Point) -> Point + Send + Sync;
type JacobianMap = dyn Fn(&Point) -> Matrix4<f64> + Send + Sync;

/// Coordinate map `y = φ(x)` with its Jacobian `J[(α, μ)] = ∂y^α/∂x^μ`.
#[derive(Clone)]
pub struct Diffeomorphism {
    forward: Arc<PointMap>,
    jacobian: Option<Arc<JacobianMap>>,
    inverse: Option<Arc<PointMap>>,
    fd: FdScheme,
}

impl Diffeomorphism {
    pub fn new(forward: impl Fn(&Point) -> Point + Send + Sync + 'static) -> Self {
        Self {
            forward: Arc::new(forward),
            jacobian: None,
            inverse: None,
            fd: FdScheme::new(1e-4, FdOrder::Fourth).expect("valid scheme"),
        }
    }

    pub fn identity() -> Self {
        Self::new(|p| *p).with_jacobian(|_| Matrix4::identity()).with_inverse(|p| *p)
    }

    pub fn with_jacobian(mut self, j: impl Fn(&Point) -> Matrix4<f64> + Send + Sync + 'static) -> Self {
        self.jacobian = Some(Arc::new(j));
        self
    }

    pub fn with_inverse(mut self, inv: impl Fn(&Point) -> Point + Send + Sync + 'static) -> Self {
        self.inverse = Some(Arc::new(inv));
        self
    }

    pub fn forward(&self, x: &Point) -> Point {
        (self.forward)(x)
    }

    pub fn inverse(&self, y: &Point) -> Option<Point> {
        self.inverse.as_ref().map(|f| f(y))
    }

    pub fn has_analytic_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    /// Jacobian, analytic when supplied, otherwise by fourth-order differences.
    pub fn jacobian(&self, x: &Point) -> Result<Matrix4<f64>> {
        let j = match &self.jacobian {
            Some(j) => j(x),
            None => {
                let fwd = self.forward.clone();
                let f = move |q: &Point| -> Result<[f64; 4]> { Ok(fwd(q).0) };
                let grad = self.fd.gradient(&f, x)?;
                Matrix4::from_fn(|alpha, mu| grad[mu][alpha])
            }
        };
        let det = j.determinant();
        if det.abs() <= 1e-10 || !det.is_finite() {
            return Err(Error::SingularJacobian { point: *x, det });
        }
        Ok(j)
    }

    /// Pull back a form (given at `y = φ(x)`) to `x`.
    pub fn pull_back_at(&self, x: &Point, value_at_image: &Multivector) -> Result<Multivector> {
        let j = self.jacobian(x)?;
        Ok(mv::outermorphism(&j.transpose(), value_at_image))
    }
}

/// `(φ* f)(x)`: the components of `f` at `φ(x)`, one Jacobian factor per leg.
/// The result lives on `source_domain`.
pub fn pullback_bundle<T: FormValue>(phi: &Diffeomorphism, f: &Field<T>, source_domain: Domain) -> Field<T> {
    let phi = phi.clone();
    let f = f.clone();
    Field::new(source_domain, move |x| {
        let y = phi.forward(x);
        if !f.domain().contains(&y) {
            return Err(Error::DomainEscape { point: *x });
        }
        let v = f.eval(&y)?;
        let jt = phi.jacobian(x)?.transpose();
        Ok(v.map_forms(&|m| mv::outermorphism(&jt, m)))
    })
}

pub fn pullback(phi: &Diffeomorphism, f: &FormField, source_domain: Domain) -> FormField {
    FormField::from_field(f.grade, pullback_bundle(phi, &f.field, source_domain))
}

/// Reads chart points from CSV with a header naming the columns `x0..x3`.
pub fn read_points_csv(path: impl AsRef<Path>) -> Result<Vec<Point>> {
    let file = std::fs::File::open(path.as_ref())?;
    read_points_from(file)
}

pub fn read_points_from(reader: impl std::io::Read) -> Result<Vec<Point>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Config(e.to_string()))?.clone();
    let mut cols = [usize::MAX; 4];
    for (i, name) in headers.iter().enumerate() {
        if let Some(k) = ["x0", "x1", "x2", "x3"].iter().position(|c| *c == name) {
            cols[k] = i;
        }
    }
    if cols.contains(&usize::MAX) {
        return Err(Error::Config("point csv needs header columns x0,x1,x2,x3".into()));
    }
    let mut points = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Config(e.to_string()))?;
        let mut x = [0.0; 4];
        for k in 0..4 {
            let raw = rec.get(cols[k]).unwrap_or("");
            x[k] = raw
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Config(format!("row {}: bad value `{raw}` for x{k}", row + 1)))?;
        }
        points.push(Point(x));
    }
    Ok(points)
}
