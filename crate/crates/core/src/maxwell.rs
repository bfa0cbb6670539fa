//! Maxwell-like form of the field equations: field strengths, the
//! Laplacian split, currents, superpotentials and balance laws.
//!
//! Every quantity lives in the chart of the coframe, where `𝔤^a` is
//! represented by its pullback `θ^a` and `δ_η` by the `g`-codifferential.

use crate::cartan::{
    self, coefficients_at, connection_at, lowered, mixed, CoefficientTable, Coframe, ConnectionForms, Frame,
};
use crate::error::Result;
use crate::field::{FdScheme, Field, Point};
use crate::mv::{hodge_dual, hodge_inverse, wedge, Multivector, Orientation, ETA};

/// Signs fixing how the Laplacian splits and how the current is assembled:
/// `−(dδ + δd)θ^a = RICCI·ℛ^a + DALEMBERT·□θ^a`.
pub mod signs {
    pub const RICCI: f64 = -1.0;
    pub const DALEMBERT: f64 = 1.0;
}

/// `Γ^b_{ac} = ω^b_c(e_a)`, so that `∇_{e_a}θ^b = −Γ^b_{ac}θ^c`.
pub fn direction_first(l: &CoefficientTable) -> CoefficientTable {
    std::array::from_fn(|b| std::array::from_fn(|a| std::array::from_fn(|c| l[b][c][a])))
}

pub type MTensor = [[[[f64; 4]; 4]; 4]; 4];

/// Direction-first coefficient table as a field.
pub fn gamma_field(c: &Coframe, s: FdScheme) -> Field<CoefficientTable> {
    c.exterior_derivatives(s)
        .zip(&c.frame_field(), |_, d, fr| Ok(direction_first(&coefficients_at(&fr, &connection_at(&fr, &d)))))
}

/// `M[d][c][a][b] = M_d{}^c{}_{ab}`
/// `= e_a(Γ^c_{bd}) + e_b(Γ^c_{ad}) − Γ^c_{ak}Γ^k_{bd} − Γ^c_{bk}Γ^k_{ad} − (Γ^k_{ab} + Γ^k_{ba})Γ^c_{kd}`.
pub fn m_tensor_at(fr: &Frame, g: &CoefficientTable, dg: &[CoefficientTable; 4]) -> MTensor {
    let e = |a: usize, c: usize, b: usize, d: usize| -> f64 {
        (0..4).map(|mu| fr.e_inv[(mu, a)] * dg[mu][c][b][d]).sum()
    };
    let mut m = [[[[0.0; 4]; 4]; 4]; 4];
    for d in 0..4 {
        for c in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    let mut v = e(a, c, b, d) + e(b, c, a, d);
                    for k in 0..4 {
                        v -= g[c][a][k] * g[k][b][d] + g[c][b][k] * g[k][a][d];
                        v -= (g[k][a][b] + g[k][b][a]) * g[c][k][d];
                    }
                    m[d][c][a][b] = v;
                }
            }
        }
    }
    m
}

pub fn m_tensor(c: &Coframe, s: FdScheme) -> Field<MTensor> {
    let g = gamma_field(c, s);
    let dg = g.gradient_field(s);
    let both = g.zip(&dg, |_, g, dg| Ok((g, dg)));
    both.zip(&c.frame_field(), |_, (g, dg), fr| Ok(m_tensor_at(&fr, &g, &dg)))
}

/// `½η^{ab} M_d{}^c{}_{ab} θ^d` for each `c`.
pub fn m_contraction(fr: &Frame, m: &MTensor) -> [Multivector; 4] {
    std::array::from_fn(|c| {
        let mut out = Multivector::ZERO;
        for d in 0..4 {
            let coeff: f64 = (0..4).map(|a| ETA[a] * m[d][c][a][a]).sum();
            out += fr.legs[d] * (0.5 * coeff);
        }
        out
    })
}

/// `□θ^c = −½η^{ab} M_d{}^c{}_{ab} θ^d`.
pub fn dalembertian_at(fr: &Frame, m: &MTensor) -> [Multivector; 4] {
    m_contraction(fr, m).map(|x| -x)
}

/// Field strengths `𝔉^a = dθ^a`.
pub fn field_strengths(c: &Coframe, s: FdScheme) -> Field<[Multivector; 4]> {
    c.exterior_derivatives(s)
}

/// Per-leg split of the Hodge Laplacian.
#[derive(Clone, Copy, Debug)]
pub struct LaplacianSplit {
    /// `−(dδ + δd)θ^a`.
    pub total: [Multivector; 4],
    /// Ricci 1-forms `ℛ^a`.
    pub ricci: [Multivector; 4],
    /// `□θ^a`.
    pub dalembertian: [Multivector; 4],
}

impl LaplacianSplit {
    /// `total − RICCI·ℛ − DALEMBERT·□θ` per leg.
    pub fn closure(&self) -> [Multivector; 4] {
        std::array::from_fn(|a| {
            self.total[a] - self.ricci[a] * signs::RICCI - self.dalembertian[a] * signs::DALEMBERT
        })
    }
}

/// `dδθ^a` and `δdθ^a`.
pub fn laplacian_parts(c: &Coframe, s: FdScheme) -> Field<([Multivector; 4], [Multivector; 4])> {
    let metric = c.metric_field();
    let o = c.orientation();
    let d_delta = c.codifferentials(s).exterior_derivative(s);
    let delta_d = c.exterior_derivatives(s).codifferential(&metric, o, s);
    d_delta.zip(&delta_d, |_, a, b| Ok((a, b)))
}

/// Upper-index Ricci 1-forms `ℛ^a`.
pub fn ricci_upper(c: &Coframe, s: FdScheme) -> Field<[Multivector; 4]> {
    let curv = cartan::curvature_forms(&cartan::connection_from_coframe(c, s), s);
    cartan::ricci_one_forms(c, &curv).map(|_, r| Ok(std::array::from_fn(|a| r[a] * ETA[a])))
}

pub fn hodge_laplacian_split(c: &Coframe, s: FdScheme) -> Field<LaplacianSplit> {
    let parts = laplacian_parts(c, s);
    let ricci = ricci_upper(c, s);
    let m = m_tensor(c, s);
    let a = parts.zip(&ricci, |_, p, r| Ok((p, r)));
    let b = a.zip(&m, |_, x, m| Ok((x, m)));
    b.zip(&c.frame_field(), |_, (((dd, dl), ric), m), fr| {
        Ok(LaplacianSplit {
            total: std::array::from_fn(|k| -(dd[k] + dl[k])),
            ricci: ric,
            dalembertian: dalembertian_at(&fr, &m),
        })
    })
}

/// Matter source: the Einstein 1-forms `𝒢^a`, or zero in vacuum.
pub fn einstein_source(c: &Coframe, s: FdScheme) -> Field<[Multivector; 4]> {
    let curv = cartan::curvature_forms(&cartan::connection_from_coframe(c, s), s);
    let ricci = cartan::ricci_one_forms(c, &curv);
    let r = cartan::scalar_curvature(c, &ricci);
    cartan::einstein_one_forms(c, &ricci, &r)
}

/// Trace `𝒯 = θ_a • 𝒯^a`.
pub fn trace_at(fr: &Frame, t: &[Multivector; 4]) -> f64 {
    (0..4)
        .map(|a| crate::mv::scalar_product(&fr.lowered(a), &t[a], &fr.metric))
        .sum()
}

/// Gravitational energy-momentum `t_g^a = −[½η^{lb}M_d{}^a{}_{lb}θ^d − dδθ^a]`.
pub fn grav_energy_momentum(c: &Coframe, s: FdScheme) -> Field<[Multivector; 4]> {
    let parts = laplacian_parts(c, s);
    let m = m_tensor(c, s);
    let both = parts.zip(&m, |_, (dd, _), m| Ok((dd, m)));
    both.zip(&c.frame_field(), |_, (dd, m), fr| {
        let mc = m_contraction(&fr, &m);
        Ok(std::array::from_fn(|a| (mc[a] - dd[a]) * -1.0))
    })
}

/// Currents `𝔍^a = −[𝒯^a − ½𝒯θ^a + ½η^{lb}M_d{}^a{}_{lb}θ^d − dδθ^a]`.
pub fn currents(c: &Coframe, matter: &Field<[Multivector; 4]>, s: FdScheme) -> Field<[Multivector; 4]> {
    let tg = grav_energy_momentum(c, s);
    let both = tg.zip(matter, |_, tg, t| Ok((tg, t)));
    both.zip(&c.frame_field(), |_, (tg, t), fr| {
        let tr = trace_at(&fr, &t);
        Ok(std::array::from_fn(|a| tg[a] - (t[a] - fr.legs[a] * (0.5 * tr))))
    })
}

/// `δ𝔉^a + 𝔍^a`.
pub fn inhomogeneous_residual(c: &Coframe, j: &Field<[Multivector; 4]>, s: FdScheme) -> Field<[Multivector; 4]> {
    let delta_f = field_strengths(c, s).codifferential(&c.metric_field(), c.orientation(), s);
    delta_f.zip(j, |_, df, j| Ok(std::array::from_fn(|a| df[a] + j[a])))
}

/// `δ𝔍^a`.
pub fn conservation(c: &Coframe, j: &Field<[Multivector; 4]>, s: FdScheme) -> Field<[Multivector; 4]> {
    j.codifferential(&c.metric_field(), c.orientation(), s)
}

/// Duals of the superpotentials and of the gravitational pseudo-currents.
#[derive(Clone, Copy, Debug)]
pub struct Superpotentials {
    /// `⋆S^c = ½ω_ab∧⋆(θ^a∧θ^b∧θ^c)`.
    pub star_s: [Multivector; 4],
    /// `⋆t^c = −½ω_ab∧[ω^c_d∧⋆(θ^a∧θ^b∧θ^d) + ω^b_d∧⋆(θ^a∧θ^d∧θ^c)]`.
    pub star_t: [Multivector; 4],
}

pub fn superpotentials_at(fr: &Frame, w: &[Multivector; 6], o: Orientation) -> Superpotentials {
    let m = &fr.metric;
    let star3 = |i: usize, j: usize, k: usize| hodge_dual(&fr.wedge_legs(&[i, j, k]), m, o);
    let star_s = std::array::from_fn(|c| {
        let mut x = Multivector::ZERO;
        for a in 0..4 {
            for b in 0..4 {
                x += wedge(&lowered(w, a, b), &star3(a, b, c));
            }
        }
        x * 0.5
    });
    let star_t = std::array::from_fn(|c| {
        let mut x = Multivector::ZERO;
        for a in 0..4 {
            for b in 0..4 {
                let wab = lowered(w, a, b);
                if wab.max_abs() == 0.0 {
                    continue;
                }
                let mut inner = Multivector::ZERO;
                for d in 0..4 {
                    inner += wedge(&mixed(w, c, d), &star3(a, b, d));
                    inner += wedge(&mixed(w, b, d), &star3(a, d, c));
                }
                x += wedge(&wab, &inner);
            }
        }
        x * -0.5
    });
    Superpotentials { star_s, star_t }
}

pub fn superpotentials(c: &Coframe, omega: &ConnectionForms) -> Field<Superpotentials> {
    let o = c.orientation();
    omega.field.zip(&c.frame_field(), move |_, w, fr| Ok(superpotentials_at(&fr, &w, o)))
}

/// Residual of `−d⋆S^a = ⋆𝒯^a + ⋆t^a + m²⋆θ^a`.
pub fn balance_residual(
    c: &Coframe,
    sp: &Field<Superpotentials>,
    matter: &Field<[Multivector; 4]>,
    mass: f64,
    s: FdScheme,
) -> Field<[Multivector; 4]> {
    let o = c.orientation();
    let d_star_s = sp.map(|_, x| Ok(x.star_s)).exterior_derivative(s);
    let a = d_star_s.zip(sp, |_, ds, sp| Ok((ds, sp.star_t)));
    let b = a.zip(matter, |_, (ds, st), t| Ok((ds, st, t)));
    b.zip(&c.frame_field(), move |_, (ds, st, t), fr| {
        Ok(std::array::from_fn(|k| {
            let rhs = hodge_dual(&t[k], &fr.metric, o) + st[k] + hodge_dual(&fr.legs[k], &fr.metric, o) * (mass * mass);
            -ds[k] - rhs
        }))
    })
}

/// `δ(𝒯^a + t^a) + m²δθ^a`, with `t^a = ⋆⁻¹(⋆t^a)`.
pub fn massive_divergence_residual(
    c: &Coframe,
    sp: &Field<Superpotentials>,
    matter: &Field<[Multivector; 4]>,
    mass: f64,
    s: FdScheme,
) -> Field<[Multivector; 4]> {
    let o = c.orientation();
    let sum = sp.zip(matter, |_, sp, t| Ok((sp.star_t, t))).zip(&c.frame_field(), move |_, (st, t), fr| {
        Ok(std::array::from_fn(|k| {
            t[k] + hodge_inverse(&st[k], &fr.metric, o) + fr.legs[k] * (mass * mass)
        }))
    });
    sum.codifferential(&c.metric_field(), o, s)
}

/// Point evaluation helper returning the largest coefficient over legs.
pub fn max_abs_legs(v: &[Multivector; 4]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.max_abs()))
}

pub fn eval_max(f: &Field<[Multivector; 4]>, p: &Point) -> Result<f64> {
    Ok(max_abs_legs(&f.eval(p)?))
}
