//! (1,1)-extensors on 1-forms: the metric extensor `g`, the gauge extensor
//! `h` with `h†h = g`, the deformed Clifford product and conjugated duals.
//!
//! An extensor is a 4×4 matrix `A` acting on coordinate components as a
//! column vector, `A(dx^ν) = Σ_μ A[(μ, ν)] dx^μ`. Adjoints are taken with
//! respect to the Minkowski product `u·v = u_μ η^{μν} v_ν`:
//! `A† = η Aᵀ η`.

use nalgebra::Matrix4;

use crate::cartan::Coframe;
use crate::error::{Error, Result};
use crate::field::{Field, Point};
use crate::mv::{self, MetricAtPoint, Multivector, Orientation, ETA};

/// Eigenvalue magnitude below which a metric extensor is rejected.
pub const EIGEN_CUTOFF: f64 = 1e-10;

fn eta() -> Matrix4<f64> {
    Matrix4::from_diagonal(&ETA.into())
}

pub fn eta_adjoint(a: &Matrix4<f64>) -> Matrix4<f64> {
    let e = eta();
    e * a.transpose() * e
}

/// Relative defect `‖ηA − (ηA)ᵀ‖ / ‖A‖` of η-symmetry.
pub fn symmetry_defect(a: &Matrix4<f64>) -> f64 {
    let s = eta() * a;
    (s - s.transpose()).abs().max() / a.abs().max().max(1.0)
}

/// Pointwise extensor field.
#[derive(Clone)]
pub struct Extensor11 {
    pub field: Field<Matrix4<f64>>,
}

impl Extensor11 {
    pub fn eval(&self, p: &Point) -> Result<Matrix4<f64>> {
        self.field.eval(p)
    }

    /// Extended action on a multivector (outermorphism).
    pub fn apply(&self, p: &Point, a: &Multivector) -> Result<Multivector> {
        Ok(mv::outermorphism(&self.eval(p)?, a))
    }
}

/// `g` with `θ^a · g(θ^b) = η^{ab}`: `G = η E⁻¹ η E⁻ᵀ`, with rows of `E` the legs.
pub fn metric_extensor_at(e: &Matrix4<f64>, point: &Point) -> Result<Matrix4<f64>> {
    let det = e.determinant();
    if !det.is_finite() || det.abs() <= crate::cartan::DEGENERACY_CUTOFF {
        return Err(Error::DegenerateCoframe { point: *point, det });
    }
    let inv = e.try_inverse().ok_or(Error::DegenerateCoframe { point: *point, det })?;
    let et = eta();
    Ok(et * inv * et * inv.transpose())
}

pub fn metric_extensor_from_coframe(c: &Coframe) -> Extensor11 {
    let c2 = c.clone();
    Extensor11 {
        field: c.legs().map(move |p, _| metric_extensor_at(&c2.components(p)?, p)),
    }
}

/// `h = E⁻ᵀ`, sending each leg `θ^a` to `dx^a`.
pub fn frame_extensor(c: &Coframe) -> Extensor11 {
    Extensor11 {
        field: c.frame_field().map(|_, fr| Ok(fr.e_inv.transpose())),
    }
}

/// Principal square root by the Denman–Beavers iteration.
fn principal_sqrt(g: &Matrix4<f64>) -> Option<Matrix4<f64>> {
    let mut y = *g;
    let mut z = Matrix4::identity();
    for _ in 0..100 {
        let yi = y.try_inverse()?;
        let zi = z.try_inverse()?;
        let ny = 0.5 * (y + zi);
        let nz = 0.5 * (z + yi);
        let step = (ny - y).abs().max();
        y = ny;
        z = nz;
        if step <= 1e-15 * y.abs().max() {
            break;
        }
    }
    let resid = (y * y - g).abs().max() / g.abs().max();
    (resid <= 1e-12 && y.iter().all(|v| v.is_finite())).then_some(y)
}

/// Square root through the congruent symmetric problem `hᵀηh = ηG`:
/// with `ηG = QΛQᵀ`, take `h = √|Λ| Qᵀ` with the positive eigenvalue first.
fn congruence_root(g: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    let s = eta() * g;
    let s = 0.5 * (s + s.transpose());
    let eig = nalgebra::SymmetricEigen::new(s);
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let mut h = Matrix4::zeros();
    for (row, &k) in order.iter().enumerate() {
        let lam = eig.eigenvalues[k];
        if (lam > 0.0) != (ETA[row] > 0.0) {
            return Err(Error::InvalidMetric("metric extensor is not Lorentzian".into()));
        }
        let r = lam.abs().sqrt();
        for mu in 0..4 {
            h[(row, mu)] = r * eig.eigenvectors[(mu, k)];
        }
    }
    if h.determinant() < 0.0 {
        for mu in 0..4 {
            h[(3, mu)] = -h[(3, mu)];
        }
    }
    Ok(h)
}

/// Gauge extensor `ȟ` with `ȟ†ȟ = g`.
///
/// Returns the η-symmetric branch `ȟ = √g` (principal root) when no
/// eigenvalue of `g` lies on the negative real axis, otherwise the
/// representative built from the eigenvectors of the congruent symmetric
/// problem, oriented so that `det ȟ > 0`.
pub fn gauge_extensor_at(g: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    if !g.iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidMetric("non-finite entries".into()));
    }
    let defect = symmetry_defect(g);
    if defect > 1e-10 {
        return Err(Error::NonSymmetric { defect });
    }
    // |eig(ηG)| are the singular values of G.
    let s = eta() * g;
    let sym = nalgebra::SymmetricEigen::new(0.5 * (s + s.transpose()));
    if let Some(tiny) = sym.eigenvalues.iter().map(|l| l.abs()).find(|l| *l <= EIGEN_CUTOFF) {
        return Err(Error::NearSingularMetric { eigenvalue: tiny });
    }
    let off_negative_axis = nalgebra::Schur::try_new(*g, f64::EPSILON, 500).is_none_or(|schur| {
        schur
            .complex_eigenvalues()
            .iter()
            .all(|l| l.re > 0.0 || l.im.abs() > 1e-8 * l.norm())
    });
    if off_negative_axis {
        if let Some(root) = principal_sqrt(g) {
            return Ok(root);
        }
    }
    congruence_root(g)
}

pub fn gauge_extensor_from_metric(g_ext: &Extensor11) -> Extensor11 {
    Extensor11 {
        field: g_ext.field.map(|_, g| gauge_extensor_at(&g)),
    }
}

/// `a ∨ b = h⁻¹(h(a) h(b))` with the Minkowski Clifford product in between.
pub fn deformed_clifford_at(a: &Multivector, b: &Multivector, h: &Matrix4<f64>) -> Result<Multivector> {
    let h_inv = h
        .try_inverse()
        .ok_or_else(|| Error::InvalidMetric("extensor is not invertible".into()))?;
    let eta_m = MetricAtPoint::minkowski();
    let prod = mv::clifford_product(&mv::outermorphism(h, a), &mv::outermorphism(h, b), &eta_m);
    Ok(mv::outermorphism(&h_inv, &prod))
}

pub fn deformed_clifford_product(a: &Multivector, b: &Multivector, h: &Extensor11, p: &Point) -> Result<Multivector> {
    deformed_clifford_at(a, b, &h.eval(p)?)
}

/// `h⁻¹ ⋆_η h A`, the dual of the metric for which `h` is an isometry onto `η`.
pub fn conjugated_hodge(a: &Multivector, h: &Matrix4<f64>, o: Orientation) -> Result<Multivector> {
    let h_inv = h
        .try_inverse()
        .ok_or_else(|| Error::InvalidMetric("extensor is not invertible".into()))?;
    let eta_m = MetricAtPoint::minkowski();
    Ok(mv::outermorphism(&h_inv, &mv::hodge_dual(&mv::outermorphism(h, a), &eta_m, o)))
}
