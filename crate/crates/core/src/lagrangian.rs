//! Lagrangian 4-form densities built from a coframe.
//!
//! Densities are reported as the coefficient of `dx^0∧dx^1∧dx^2∧dx^3`.

use crate::cartan::{self, lowered, mixed, CoefficientTable, Coframe, ConnectionForms, Frame};
use crate::error::Result;
use crate::field::{FdScheme, Field, Point};
use crate::mv::{contract_left, hodge_dual, wedge, MetricAtPoint, Multivector, Orientation, ETA, VOLUME_BLADE};

/// A 4-form density field.
#[derive(Clone)]
pub struct Density4 {
    form: Field<Multivector>,
    metric: Field<MetricAtPoint>,
    orientation: Orientation,
}

impl Density4 {
    pub fn new(form: Field<Multivector>, metric: Field<MetricAtPoint>, orientation: Orientation) -> Self {
        Self {
            form,
            metric,
            orientation,
        }
    }

    pub fn field(&self) -> &Field<Multivector> {
        &self.form
    }

    pub fn eval(&self, p: &Point) -> Result<Multivector> {
        Ok(self.form.eval(p)?.grade_part(4))
    }

    /// Coefficient of the coordinate volume blade.
    pub fn coefficient(&self, p: &Point) -> Result<f64> {
        Ok(self.form.eval(p)?[VOLUME_BLADE])
    }

    /// Coefficient of the oriented unit volume form `τ_g`.
    pub fn tau_coefficient(&self, p: &Point) -> Result<f64> {
        let m = self.metric.eval(p)?;
        Ok(self.coefficient(p)? / m.volume(self.orientation)[VOLUME_BLADE])
    }

    pub fn coefficient_field(&self) -> Field<f64> {
        self.form.map(|_, v| Ok(v[VOLUME_BLADE]))
    }
}

/// Pointwise `−½dθ^a∧⋆dθ_a + ½δθ^a∧⋆δθ_a + ¼(dθ^a∧θ_a)∧⋆(dθ^b∧θ_b)`.
pub fn lagrangian_g_at(fr: &Frame, dtheta: &[Multivector; 4], delta: &[Multivector; 4], o: Orientation) -> Multivector {
    let m = &fr.metric;
    let mut l = Multivector::ZERO;
    let mut x = Multivector::ZERO;
    for a in 0..4 {
        l += wedge(&dtheta[a], &hodge_dual(&(dtheta[a] * ETA[a]), m, o)) * -0.5;
        l += wedge(&delta[a], &hodge_dual(&(delta[a] * ETA[a]), m, o)) * 0.5;
        x += wedge(&dtheta[a], &fr.lowered(a));
    }
    l + wedge(&x, &hodge_dual(&x, m, o)) * 0.25
}

/// Pointwise `½m² θ_a∧⋆θ^a`.
pub fn mass_term_at(fr: &Frame, mass: f64, o: Orientation) -> Multivector {
    (0..4)
        .map(|a| wedge(&fr.lowered(a), &hodge_dual(&fr.legs[a], &fr.metric, o)))
        .sum::<Multivector>()
        * (0.5 * mass * mass)
}

pub fn lagrangian_g(c: &Coframe, s: FdScheme) -> Density4 {
    lagrangian_massive(c, 0.0, s)
}

/// `L_g` plus the graviton mass term.
pub fn lagrangian_massive(c: &Coframe, mass: f64, s: FdScheme) -> Density4 {
    let o = c.orientation();
    let parts = c.exterior_derivatives(s).zip(&c.codifferentials(s), |_, d, del| Ok((d, del)));
    let form = parts.zip(&c.frame_field(), move |_, (d, del), fr| {
        let mut l = lagrangian_g_at(&fr, &d, &del, o);
        if mass != 0.0 {
            l += mass_term_at(&fr, mass, o);
        }
        Ok(l)
    });
    Density4::new(form, c.metric_field(), o)
}

/// Pointwise `½ℛ_cd∧⋆(θ^c∧θ^d)`.
pub fn lagrangian_eh_at(fr: &Frame, curv: &[Multivector; 6], o: Orientation) -> Multivector {
    let mut l = Multivector::ZERO;
    for c in 0..4 {
        for d in 0..4 {
            if c != d {
                let dual = hodge_dual(&wedge(&fr.legs[c], &fr.legs[d]), &fr.metric, o);
                l += wedge(&lowered(curv, c, d), &dual);
            }
        }
    }
    l * 0.5
}

pub fn lagrangian_eh(c: &Coframe, s: FdScheme) -> Density4 {
    let o = c.orientation();
    let curv = cartan::curvature_forms(&cartan::connection_from_coframe(c, s), s);
    let form = curv.field.zip(&c.frame_field(), move |_, r, fr| Ok(lagrangian_eh_at(&fr, &r, o)));
    Density4::new(form, c.metric_field(), o)
}

/// `½Rτ_g`.
pub fn scalar_density(c: &Coframe, s: FdScheme) -> Density4 {
    let o = c.orientation();
    let curv = cartan::curvature_forms(&cartan::connection_from_coframe(c, s), s);
    let r = cartan::scalar_curvature(c, &cartan::ricci_one_forms(c, &curv));
    let form = r.zip(&c.metric_field(), move |_, r, m| Ok(m.volume(o) * (0.5 * r)));
    Density4::new(form, c.metric_field(), o)
}

/// The 3-form `θ^a∧⋆dθ_a`.
pub fn boundary_potential(c: &Coframe, s: FdScheme) -> Field<Multivector> {
    let o = c.orientation();
    c.exterior_derivatives(s).zip(&c.frame_field(), move |_, d, fr| {
        Ok((0..4)
            .map(|a| wedge(&fr.legs[a], &hodge_dual(&(d[a] * ETA[a]), &fr.metric, o)))
            .sum())
    })
}

/// `d(θ^a∧⋆dθ_a)`.
pub fn boundary_term(c: &Coframe, s: FdScheme) -> Density4 {
    Density4::new(boundary_potential(c, s).exterior_derivative(s), c.metric_field(), c.orientation())
}

/// Contraction `θ^c⌟(θ^b⌟(ω_ac∧ω^a_b))` summed over `a, b, c`.
pub fn first_order_contraction(fr: &Frame, w: &[Multivector; 6]) -> f64 {
    let m = &fr.metric;
    let mut s = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let ww = wedge(&lowered(w, a, c), &mixed(w, a, b));
                s += contract_left(&fr.legs[c], &contract_left(&fr.legs[b], &ww, m), m).scalar_part();
            }
        }
    }
    s
}

/// `η^{bk}(Γ^d_{kc} Γ^c_{db} − Γ^d_{dc} Γ^c_{kb})` for a direction-first
/// table `Γ^b_{ac} = ω^b_c(e_a)`. Equals minus [`first_order_contraction`].
pub fn first_order_from_coefficients(l: &CoefficientTable) -> f64 {
    let mut s = 0.0;
    for b in 0..4 {
        let k = b;
        for c in 0..4 {
            for d in 0..4 {
                s += ETA[b] * (l[d][k][c] * l[c][d][b] - l[d][d][c] * l[c][k][b]);
            }
        }
    }
    s
}

/// First-order density `−½τ_g θ^c⌟θ^b⌟(ω_ac∧ω^a_b)` by form contraction.
pub fn first_order_density(c: &Coframe, omega: &ConnectionForms) -> Density4 {
    let o = c.orientation();
    let form = omega.field.zip(&c.frame_field(), move |_, w, fr| {
        Ok(fr.metric.volume(o) * (-0.5 * first_order_contraction(&fr, &w)))
    });
    Density4::new(form, c.metric_field(), o)
}

/// First-order density from the connection coefficients.
pub fn first_order_density_coefficients(c: &Coframe, omega: &ConnectionForms) -> Density4 {
    let o = c.orientation();
    let table = cartan::connection_coefficients(omega, c);
    let form = table.zip(&c.metric_field(), move |_, l, m| {
        Ok(m.volume(o) * (0.5 * first_order_from_coefficients(&crate::maxwell::direction_first(&l))))
    });
    Density4::new(form, c.metric_field(), o)
}

/// Pointwise residual of
/// `(dθ^a∧⋆dθ_a − δθ^a∧⋆δθ_a) − (dθ^a∧θ_b)∧⋆(dθ^b∧θ_a)`.
pub fn footnote_residual_at(fr: &Frame, dtheta: &[Multivector; 4], delta: &[Multivector; 4], o: Orientation) -> Multivector {
    let m = &fr.metric;
    let mut lhs = Multivector::ZERO;
    for a in 0..4 {
        lhs += wedge(&dtheta[a], &hodge_dual(&(dtheta[a] * ETA[a]), m, o));
        lhs -= wedge(&delta[a], &hodge_dual(&(delta[a] * ETA[a]), m, o));
    }
    let mut rhs = Multivector::ZERO;
    for a in 0..4 {
        for b in 0..4 {
            let x = wedge(&dtheta[a], &fr.lowered(b));
            let y = wedge(&dtheta[b], &fr.lowered(a));
            rhs += wedge(&x, &hodge_dual(&y, m, o));
        }
    }
    lhs - rhs
}

pub fn footnote_residual(c: &Coframe, s: FdScheme) -> Field<Multivector> {
    let o = c.orientation();
    let parts = c.exterior_derivatives(s).zip(&c.codifferentials(s), |_, d, del| Ok((d, del)));
    parts.zip(&c.frame_field(), move |_, (d, del), fr| Ok(footnote_residual_at(&fr, &d, &del, o)))
}

/// `L_g^M` for four 1-form fields on a flat chart, with every dual and
/// codifferential taken for the supplied `metric`.
pub fn flat_lagrangian_gm(
    gfields: &Field<[Multivector; 4]>,
    metric: &Field<MetricAtPoint>,
    o: Orientation,
    s: FdScheme,
) -> Field<f64> {
    let d = gfields.exterior_derivative(s);
    let del = gfields.codifferential(metric, o, s);
    let parts = d.zip(&del, |_, d, del| Ok((d, del)));
    let parts = parts.zip(gfields, |_, (d, del), g| Ok((d, del, g)));
    parts.zip(metric, move |_, (d, del, g), m| {
        let mut l = Multivector::ZERO;
        let mut x = Multivector::ZERO;
        for a in 0..4 {
            l += wedge(&d[a], &hodge_dual(&(d[a] * ETA[a]), &m, o)) * -0.5;
            l += wedge(&del[a], &hodge_dual(&(del[a] * ETA[a]), &m, o)) * 0.5;
            x += wedge(&d[a], &(g[a] * ETA[a]));
        }
        l += wedge(&x, &hodge_dual(&x, &m, o)) * 0.25;
        Ok(l[VOLUME_BLADE])
    })
}
