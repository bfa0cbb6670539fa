//! Coordinate-basis curvature straight from `g_{μν}`: Christoffel symbols,
//! Riemann, Ricci and scalar curvature by finite differences of the metric.
//!
//! Conventions: `Γ^λ_{μν} = ½g^{λσ}(∂_μ g_{σν} + ∂_ν g_{σμ} − ∂_σ g_{μν})`,
//! `R^ρ_{σμν} = ∂_μΓ^ρ_{νσ} − ∂_νΓ^ρ_{μσ} + Γ^ρ_{μλ}Γ^λ_{νσ} − Γ^ρ_{νλ}Γ^λ_{μσ}`,
//! `R_{σν} = R^ρ_{σρν}`.

use crate::error::Result;
use crate::field::{FdScheme, Field, Point};
use crate::mv::MetricAtPoint;

pub type Rank3 = [[[f64; 4]; 4]; 4];
pub type Rank4 = [[[[f64; 4]; 4]; 4]; 4];

#[derive(Clone, Copy, Debug)]
pub struct CoordinateCurvature {
    pub metric: MetricAtPoint,
    /// `R^ρ_{σμν}` as `riemann[ρ][σ][μ][ν]`.
    pub riemann: Rank4,
    pub ricci: [[f64; 4]; 4],
    pub scalar: f64,
    pub kretschmann: f64,
}

fn metric_components(metric: &Field<MetricAtPoint>) -> Field<[[f64; 4]; 4]> {
    metric.map(|_, m| Ok(std::array::from_fn(|i| std::array::from_fn(|j| m.g()[(i, j)]))))
}

/// `Γ[λ][μ][ν]`.
pub fn christoffel(metric: &Field<MetricAtPoint>, s: FdScheme) -> Field<Rank3> {
    let dg = metric_components(metric).gradient_field(s);
    dg.zip(metric, |_, dg, m| {
        let gi = m.g_inv();
        Ok(std::array::from_fn(|l| {
            std::array::from_fn(|mu| {
                std::array::from_fn(|nu| {
                    0.5 * (0..4)
                        .map(|sg| gi[(l, sg)] * (dg[mu][sg][nu] + dg[nu][sg][mu] - dg[sg][mu][nu]))
                        .sum::<f64>()
                })
            })
        }))
    })
}

pub fn curvature_at(m: &MetricAtPoint, gam: &Rank3, dgam: &[Rank3; 4]) -> CoordinateCurvature {
    let mut riemann = [[[[0.0; 4]; 4]; 4]; 4];
    for r in 0..4 {
        for sg in 0..4 {
            for mu in 0..4 {
                for nu in 0..4 {
                    let mut v = dgam[mu][r][nu][sg] - dgam[nu][r][mu][sg];
                    for l in 0..4 {
                        v += gam[r][mu][l] * gam[l][nu][sg] - gam[r][nu][l] * gam[l][mu][sg];
                    }
                    riemann[r][sg][mu][nu] = v;
                }
            }
        }
    }
    let ricci: [[f64; 4]; 4] = std::array::from_fn(|sg| std::array::from_fn(|nu| (0..4).map(|r| riemann[r][sg][r][nu]).sum()));
    let (g, gi) = (m.g(), m.g_inv());
    let mut scalar = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            scalar += gi[(i, j)] * ricci[i][j];
        }
    }
    // Fully lowered and fully raised copies for the invariant.
    let mut low = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    low[a][b][c][d] = (0..4).map(|r| g[(a, r)] * riemann[r][b][c][d]).sum();
                }
            }
        }
    }
    let raise = |t: &Rank4, slot: usize| -> Rank4 {
        let mut out = [[[[0.0; 4]; 4]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let mut idx = [a, b, c, d];
                        let mut v = 0.0;
                        for k in 0..4 {
                            idx[slot] = k;
                            let free = [a, b, c, d][slot];
                            v += gi[(free, k)] * t[idx[0]][idx[1]][idx[2]][idx[3]];
                        }
                        out[a][b][c][d] = v;
                    }
                }
            }
        }
        out
    };
    let up = (0..4).fold(low, |t, slot| raise(&t, slot));
    let mut kretschmann = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    kretschmann += low[a][b][c][d] * up[a][b][c][d];
                }
            }
        }
    }
    CoordinateCurvature {
        metric: *m,
        riemann,
        ricci,
        scalar,
        kretschmann,
    }
}

pub fn coordinate_curvature(metric: &Field<MetricAtPoint>, s: FdScheme) -> Field<CoordinateCurvature> {
    let gam = christoffel(metric, s);
    let dgam = gam.gradient_field(s);
    let both = gam.zip(&dgam, |_, g, dg| Ok((g, dg)));
    both.zip(metric, |_, (g, dg), m| Ok(curvature_at(&m, &g, &dg)))
}

pub fn scalar_curvature_at(metric: &Field<MetricAtPoint>, s: FdScheme, p: &Point) -> Result<f64> {
    Ok(coordinate_curvature(metric, s).eval(p)?.scalar)
}
