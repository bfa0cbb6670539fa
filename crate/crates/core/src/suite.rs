//! The identity suite: every checked identity, its default tolerance, and
//! the evaluation of residuals over a scenario's sample points.

use std::collections::BTreeMap;

use nalgebra::Matrix4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cartan::{self, Coframe};
use crate::error::{Error, Result};
use crate::extensor;
use crate::field::{self, FdOrder, FdScheme, Field, FormField, Point};
use crate::lagrangian;
use crate::maxwell;
use crate::mv::{self, MetricAtPoint, Multivector, Orientation, ETA, VOLUME_BLADE};
use crate::oracle;
use crate::report::{IdentityRecord, Report, ScenarioBlock, Status, Summary, Environment};
use crate::scenarios::{self, Scenario};
use crate::teleparallel;

#[derive(Clone, Debug, PartialEq)]
pub enum PointSource {
    Builtin(usize),
    Csv(std::path::PathBuf),
    Explicit(Vec<Point>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub scenario: String,
    pub params: BTreeMap<String, f64>,
    pub points: PointSource,
    pub fd_step: f64,
    pub fd_order: FdOrder,
    /// Graviton mass used by the massive-variant identities.
    pub mass: f64,
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            scenario: "minkowski".into(),
            params: BTreeMap::new(),
            points: PointSource::Builtin(scenarios::DEFAULT_POINT_COUNT),
            fd_step: 1e-3,
            fd_order: FdOrder::Fourth,
            mass: 0.1,
            tolerances: BTreeMap::new(),
        }
    }
}

/// Largest accepted sample set.
pub const MAX_POINTS: usize = 64;

/// Random cases drawn per sample point by the algebraic identities.
pub const CASES_PER_POINT: usize = 32;

pub struct IdentityInfo {
    pub id: &'static str,
    pub statement: &'static str,
    pub tolerance: f64,
    /// `algebraic`, or the depth of nested finite differences involved.
    pub kind: &'static str,
}

const fn ident(id: &'static str, statement: &'static str, tolerance: f64, kind: &'static str) -> IdentityInfo {
    IdentityInfo {
        id,
        statement,
        tolerance,
        kind,
    }
}

/// Every identity, sorted by id.
pub const IDENTITIES: &[IdentityInfo] = &[
    ident("algebra.anticommutator", "uv + vu = 2 u·v for 1-forms", 1e-10, "algebraic"),
    ident("algebra.associativity", "(ab)c = a(bc)", 1e-10, "algebraic"),
    ident("algebra.contraction_leibniz", "u⌟(b∧c) = (u⌟b)∧c + (-1)^|b| b∧(u⌟c)", 1e-10, "algebraic"),
    ident("algebra.double_dual_sign", "⋆⋆A_p = (-1)^{p(4-p)} sign(det g) A_p", 1e-10, "algebraic"),
    ident("algebra.dual_symmetry", "A∧⋆B = B∧⋆A = (A·B) τ_g", 1e-10, "algebraic"),
    ident("cartan.connection_antisymmetry", "L_{abc} = -L_{bac}", 1e-12, "first-derivative"),
    ident("cartan.first_structure", "dθ^a + ω^a_b∧θ^b = 0", 1e-6, "first-derivative"),
    ident("cartan.flat_curvature", "ℛ^a_b = 0 for flat scenarios", 1e-6, "second-derivative"),
    ident("cartan.kretschmann_oracle", "R_{abcd}R^{abcd} against coordinate Riemann (relative)", 1e-3, "second-derivative"),
    ident("cartan.ricci_oracle", "ℛ_c against coordinate Ricci in the tetrad basis", 1e-5, "second-derivative"),
    ident("cartan.scalar_curvature_oracle", "θ^c•ℛ_c against g^{μν}R_{μν}", 1e-5, "second-derivative"),
    ident("cartan.vacuum_einstein", "𝒢^a = 0 for vacuum scenarios", 1e-5, "second-derivative"),
    ident("cartan.vacuum_ricci", "ℛ_a = 0 for vacuum scenarios", 1e-5, "second-derivative"),
    ident("extensor.conjugated_hodge", "⋆_g A = ȟ⁻¹ ⋆_η ȟ A", 1e-10, "algebraic"),
    ident("extensor.deformed_anticommutator", "θ^a∨θ^b + θ^b∨θ^a = 2η^{ab}", 1e-10, "algebraic"),
    ident("extensor.deformed_associativity", "(a∨b)∨c = a∨(b∨c)", 1e-9, "algebraic"),
    ident("extensor.deformed_product_metric", "a∨b equals the Clifford product of g", 1e-10, "algebraic"),
    ident("extensor.gauge_factorization", "ȟ†ȟ = g", 1e-10, "algebraic"),
    ident("extensor.lorentz_orbit", "(Λȟ)†(Λȟ) = g for constant Lorentz Λ", 1e-10, "algebraic"),
    ident("extensor.orthonormal_image", "ȟ(θ^a)·ȟ(θ^b) = η^{ab}", 1e-10, "algebraic"),
    ident("fields.dd_zero", "d(d g_00) = 0", 1e-6, "second-derivative"),
    ident("fields.pullback_exterior", "d φ*K = φ* dK", 1e-5, "first-derivative"),
    ident("fields.pullback_hodge", "⋆_g d ⋆_g φ*K = φ*(⋆_η d ⋆_η K)", 1e-5, "first-derivative"),
    ident("lagrangian.eh_boundary", "L_EH + d(θ^a∧⋆dθ_a) = L_g", 1e-5, "second-derivative"),
    ident("lagrangian.eh_scalar", "½ℛ_cd∧⋆(θ^c∧θ^d) = ½Rτ_g", 1e-6, "second-derivative"),
    ident("lagrangian.exact_difference", "dθ^a∧⋆dθ_a - δθ^a∧⋆δθ_a = (dθ^a∧θ_b)∧⋆(dθ^b∧θ_a)", 1e-5, "first-derivative"),
    ident("lagrangian.first_order_equivalence", "-½τ_g θ^c⌟θ^b⌟(ω_ac∧ω^a_b) = L_g", 1e-5, "first-derivative"),
    ident("lagrangian.first_order_paths", "form contraction = coefficient contraction", 1e-9, "first-derivative"),
    ident("lagrangian.flat_transport", "L_g[φ*𝔤] = φ*(L_g^M[𝔤])", 1e-5, "first-derivative"),
    ident("lagrangian.global_lorentz", "L_g[Λθ] = L_g[θ] for constant Lorentz Λ", 1e-9, "first-derivative"),
    ident("lagrangian.mass_term", "½m²θ_a∧⋆θ^a = 2m²τ_g", 1e-10, "algebraic"),
    ident("massive.balance", "-d⋆S^a = ⋆𝒯^a + ⋆t^a + m²⋆θ^a", 1e-4, "second-derivative"),
    ident("massive.divergence", "δ(𝒯^a + t^a + m²θ^a) = 0", 1e-3, "third-derivative"),
    ident("massive.reduction", "m = 0 reproduces the massless density and balance", 1e-12, "first-derivative"),
    ident("maxwell.balance", "-d⋆S^a = ⋆𝒯^a + ⋆t^a", 1e-4, "second-derivative"),
    ident("maxwell.conjugated_balance", "-d(ȟ⁻¹⋆_η ȟ S^a) = ȟ⁻¹⋆_η ȟ(𝒯^a + t^a)", 1e-4, "second-derivative"),
    ident("maxwell.conservation", "δ𝔍^a = 0", 1e-3, "third-derivative"),
    ident("maxwell.homogeneous", "d𝔉^a = 0", 1e-5, "second-derivative"),
    ident("maxwell.inhomogeneous", "δ𝔉^a = -𝔍^a", 1e-4, "second-derivative"),
    ident("maxwell.laplacian_split", "-(dδ + δd)θ^a = -ℛ^a + □θ^a", 1e-4, "second-derivative"),
    ident("maxwell.m_tensor_symmetry", "M_d^c_{ab} = M_d^c_{ba}", 1e-12, "second-derivative"),
    ident("scenario.metric_inverse", "g g⁻¹ = 1", 1e-12, "algebraic"),
    ident("scenario.pullback_wiring", "θ^a = φ*dy^a", 1e-12, "algebraic"),
    ident("teleparallel.completeness", "Θ^a = ⁽¹⁾Θ^a + ⁽²⁾Θ^a + ⁽³⁾Θ^a", 1e-12, "first-derivative"),
    ident("teleparallel.equivalence", "L_tele(m = 0) = L_g", 1e-5, "first-derivative"),
    ident("teleparallel.orthogonality", "Σ_a ⟨⁽ⁱ⁾Θ^a, ⁽ʲ⁾Θ_a⟩ = 0 for i ≠ j", 1e-10, "first-derivative"),
    ident("teleparallel.torsion_codifferential", "δΘ^a = -𝔍^a", 1e-4, "second-derivative"),
];

pub fn identity_info(id: &str) -> Option<&'static IdentityInfo> {
    IDENTITIES.iter().find(|i| i.id == id)
}

/// Sign conventions fixed by the engine, as printed in reports.
pub fn sign_table() -> BTreeMap<String, String> {
    let entries = [
        ("signature", "(+,-,-,-)".to_string()),
        ("hodge", "⋆A = reverse(A) ⌟ τ_g".to_string()),
        ("codifferential", "δ = (-1)^p ⋆⁻¹ d ⋆ on p-forms".to_string()),
        ("ricci", "ℛ_c = -θ^d ⌟ ℛ_cd, R = θ^c • ℛ_c".to_string()),
        (
            "laplacian_split",
            format!(
                "-(dδ + δd)θ^a = {:+} ℛ^a {:+} □θ^a",
                maxwell::signs::RICCI,
                maxwell::signs::DALEMBERT
            ),
        ),
        ("dalembertian", "□θ^c = -½η^{ab} M_d^c_{ab} θ^d".to_string()),
        ("current", "𝔍^a = -[𝒯^a - ½𝒯θ^a + ½η^{lb} M_d^a_{lb} θ^d - dδθ^a]".to_string()),
        ("inhomogeneous", "δ𝔉^a = -𝔍^a".to_string()),
        ("matter_source", "𝒯^a = 𝒢^a, and 𝒢^a - m²θ^a with a graviton mass".to_string()),
        ("first_order", "-½τ_g θ^c⌟θ^b⌟(ω_ac∧ω^a_b)".to_string()),
        ("coefficients", "L^a_{bc} = ω^a_b(e_c), Γ^b_{ac} = ω^b_c(e_a)".to_string()),
        ("gauge_extensor", "η-symmetric square root of g; congruence representative otherwise".to_string()),
    ];
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

enum Outcome {
    Evaluated { points: usize, residual: f64 },
    Skipped(String),
}

/// NaN-propagating maximum.
fn nan_max(acc: f64, x: f64) -> f64 {
    if acc.is_nan() || x.is_nan() {
        f64::NAN
    } else {
        acc.max(x)
    }
}

fn max_legs(v: &[Multivector]) -> f64 {
    v.iter().map(|m| m.max_abs_nan()).fold(0.0, nan_max)
}

trait MaxAbsNan {
    fn max_abs_nan(&self) -> f64;
}

impl MaxAbsNan for Multivector {
    fn max_abs_nan(&self) -> f64 {
        if self.is_finite() {
            self.max_abs()
        } else {
            f64::NAN
        }
    }
}

struct Ctx<'a> {
    scenario: &'a Scenario,
    points: &'a [Point],
    fd: FdScheme,
    mass: f64,
}

impl Ctx<'_> {
    fn coframe(&self) -> &Coframe {
        &self.scenario.coframe
    }

    fn over_points(&self, f: impl Fn(usize, &Point) -> Result<f64> + Sync) -> Result<Outcome> {
        let values: Vec<Result<f64>> = self.points.par_iter().enumerate().map(|(i, p)| f(i, p)).collect();
        let mut residual = 0.0;
        for v in values {
            residual = nan_max(residual, v?);
        }
        Ok(Outcome::Evaluated {
            points: self.points.len(),
            residual,
        })
    }

    fn over_cases(&self, id: &str, f: impl Fn(&mut ChaCha8Rng, &MetricAtPoint, Orientation) -> f64 + Sync) -> Result<Outcome> {
        let c = self.coframe();
        let o = c.orientation();
        let out = self.over_points(|i, p| {
            let metric = c.frame(p)?.metric;
            let mut rng = ChaCha8Rng::seed_from_u64(case_seed(id, i));
            Ok((0..CASES_PER_POINT).map(|_| f(&mut rng, &metric, o)).fold(0.0, nan_max))
        })?;
        Ok(match out {
            Outcome::Evaluated { points, residual } => Outcome::Evaluated {
                points: points * CASES_PER_POINT,
                residual,
            },
            s => s,
        })
    }
}

fn case_seed(id: &str, point: usize) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in id.bytes().chain((point as u64).to_le_bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

pub fn random_one_form(rng: &mut impl Rng, scale: f64) -> Multivector {
    Multivector::one_form(std::array::from_fn(|_| rng.gen_range(-scale..=scale)))
}

pub fn random_multivector(rng: &mut impl Rng, scale: f64) -> Multivector {
    Multivector(std::array::from_fn(|_| rng.gen_range(-scale..=scale)))
}

pub fn random_homogeneous(rng: &mut impl Rng, grade: usize, scale: f64) -> Multivector {
    random_multivector(rng, scale).grade_part(grade)
}

fn rel(diff: f64, scale: f64) -> f64 {
    diff / scale.max(1.0)
}

/// Constant Lorentz matrix used by the global-rotation checks.
fn fixed_lorentz() -> Matrix4<f64> {
    scenarios::local_lorentz(&Point::new(0.7, -0.2, 0.4, 1.1))
}

fn algebra(ctx: &Ctx, id: &str) -> Result<Outcome> {
    match id {
        "algebra.anticommutator" => ctx.over_cases(id, |rng, m, _| {
            let (u, v) = (random_one_form(rng, 10.0), random_one_form(rng, 10.0));
            let lhs = mv::clifford_product(&u, &v, m) + mv::clifford_product(&v, &u, m);
            let rhs = Multivector::scalar(2.0 * mv::scalar_product(&u, &v, m));
            rel((lhs - rhs).max_abs_nan(), rhs.max_abs())
        }),
        "algebra.associativity" => ctx.over_cases(id, |rng, m, _| {
            let (a, b, c) = (random_multivector(rng, 1.0), random_multivector(rng, 1.0), random_multivector(rng, 1.0));
            let lhs = mv::clifford_product(&mv::clifford_product(&a, &b, m), &c, m);
            let rhs = mv::clifford_product(&a, &mv::clifford_product(&b, &c, m), m);
            rel((lhs - rhs).max_abs_nan(), lhs.max_abs())
        }),
        "algebra.double_dual_sign" => ctx.over_cases(id, |rng, m, o| {
            let p = rng.gen_range(0..=4usize);
            let a = random_homogeneous(rng, p, 1.0);
            let twice = mv::hodge_dual(&mv::hodge_dual(&a, m, o), m, o);
            let sign = if (p * (4 - p)) % 2 == 0 { 1.0 } else { -1.0 } * m.det_sign();
            rel((twice - a * sign).max_abs_nan(), a.max_abs())
        }),
        "algebra.dual_symmetry" => ctx.over_cases(id, |rng, m, o| {
            let p = rng.gen_range(0..=4usize);
            let (a, b) = (random_homogeneous(rng, p, 1.0), random_homogeneous(rng, p, 1.0));
            let ab = mv::wedge(&a, &mv::hodge_dual(&b, m, o));
            let ba = mv::wedge(&b, &mv::hodge_dual(&a, m, o));
            let tau = m.volume(o) * mv::scalar_product(&a, &b, m);
            rel((ab - ba).max_abs_nan().max((ab - tau).max_abs_nan()), ab.max_abs())
        }),
        "algebra.contraction_leibniz" => ctx.over_cases(id, |rng, m, _| {
            let u = random_one_form(rng, 1.0);
            let (p, q) = (rng.gen_range(0..=3usize), rng.gen_range(0..=3usize));
            let (b, c) = (random_homogeneous(rng, p, 1.0), random_homogeneous(rng, q, 1.0));
            let lhs = mv::contract_left(&u, &mv::wedge(&b, &c), m);
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            let rhs = mv::wedge(&mv::contract_left(&u, &b, m), &c) + mv::wedge(&b, &mv::contract_left(&u, &c, m)) * sign;
            rel((lhs - rhs).max_abs_nan(), lhs.max_abs())
        }),
        _ => unreachable!("unknown algebra identity {id}"),
    }
}

fn test_forms(domain: &field::Domain) -> Result<[FormField; 2]> {
    let k1 = FormField::new(1, domain.clone(), |y| {
        Ok(Multivector::one_form([
            y[0].sin() * y[1],
            y[2].cos(),
            y[0] * y[3],
            y[1] * y[1] - y[2],
        ]))
    })?;
    let k2 = FormField::new(2, domain.clone(), |y| {
        Ok(Multivector::blade(0b0011, y[0] * y[1])
            + Multivector::blade(0b0110, y[3].sin())
            + Multivector::blade(0b1001, (y[0] + y[2]).cos()))
    })?;
    Ok([k1, k2])
}

fn minkowski_field(domain: field::Domain) -> Field<MetricAtPoint> {
    Field::new(domain, |_| Ok(MetricAtPoint::minkowski()))
}

/// `ȟ⁻¹⋆_η ȟ` from the Jacobian of the diffeomorphism, `ȟ = J⁻ᵀ`.
fn jacobian_extensor(s: &Scenario) -> Option<Field<Matrix4<f64>>> {
    let phi = s.diffeo.clone()?;
    Some(Field::new(s.coframe.domain().clone(), move |x| {
        let j = phi.jacobian(x)?;
        Ok(j.try_inverse().expect("checked Jacobian").transpose())
    }))
}

fn conjugated_balance(c: &Coframe, h: &Field<Matrix4<f64>>, s: FdScheme, p: &Point) -> Result<f64> {
    let o = c.orientation();
    let w = cartan::connection_from_coframe(c, s);
    let sp = maxwell::superpotentials(c, &w);
    let matter = maxwell::einstein_source(c, s);
    let star = move |a: &Multivector, h: &Matrix4<f64>| extensor::conjugated_hodge(a, h, o);
    let conj_s = sp.zip(&c.frame_field(), move |_, sp, fr| {
        Ok(sp.star_s.map(|x| mv::hodge_inverse(&x, &fr.metric, o)))
    });
    let conj_s = conj_s.zip(h, move |_, s2, h| {
        let mut out = [Multivector::ZERO; 4];
        for k in 0..4 {
            out[k] = star(&s2[k], &h)?;
        }
        Ok(out)
    });
    let d = conj_s.exterior_derivative(s).eval(p)?;
    let sp = sp.eval(p)?;
    let t = matter.eval(p)?;
    let fr = c.frame(p)?;
    let hm = h.eval(p)?;
    let mut worst: f64 = 0.0;
    for k in 0..4 {
        let tk = mv::hodge_inverse(&sp.star_t[k], &fr.metric, o);
        let rhs = star(&(t[k] + tk), &hm)?;
        worst = nan_max(worst, (-d[k] - rhs).max_abs_nan());
    }
    Ok(worst)
}

fn geometry(ctx: &Ctx, id: &str) -> Result<Outcome> {
    let sc = ctx.scenario;
    let c = ctx.coframe();
    let s = ctx.fd;
    let o = c.orientation();
    let needs_diffeo = || Outcome::Skipped(format!("scenario `{}` has no diffeomorphism to a flat chart", sc.name));
    match id {
        "scenario.metric_inverse" => ctx.over_points(|_, p| {
            let m = c.frame(p)?.metric;
            Ok((m.g() * m.g_inv() - Matrix4::identity()).abs().max())
        }),
        "scenario.pullback_wiring" => {
            let Some(phi) = sc.diffeo.as_ref() else { return Ok(needs_diffeo()) };
            ctx.over_points(|_, p| {
                let fr = c.frame(p)?;
                let mut worst: f64 = 0.0;
                for a in 0..4 {
                    let pulled = phi.pull_back_at(p, &Multivector::basis(a))?;
                    worst = nan_max(worst, (pulled - fr.legs[a]).max_abs_nan());
                }
                Ok(worst)
            })
        }
        "fields.dd_zero" => {
            let g00 = c.metric_field().map(|_, m| Ok(Multivector::scalar(m.g()[(0, 0)])));
            let dd = g00.exterior_derivative(s).exterior_derivative(s);
            ctx.over_points(|_, p| Ok(dd.eval(p)?.max_abs_nan()))
        }
        "fields.pullback_exterior" | "fields.pullback_hodge" => {
            let (Some(phi), Some(target)) = (sc.diffeo.as_ref(), sc.target_domain.as_ref()) else {
                return Ok(needs_diffeo());
            };
            let forms = test_forms(target)?;
            let src = c.domain().clone();
            let eta = minkowski_field(target.clone());
            let metric = c.metric_field();
            let mut pairs = Vec::new();
            for k in &forms {
                let pulled = field::pullback(phi, k, src.clone()).as_field().clone();
                if id == "fields.pullback_exterior" {
                    let lhs = pulled.exterior_derivative(s);
                    let rhs = field::pullback_bundle(phi, &k.as_field().exterior_derivative(s), src.clone());
                    pairs.push((lhs, rhs));
                } else {
                    let lhs = pulled.hodge(&metric, o).exterior_derivative(s).hodge(&metric, o);
                    let flat = k.as_field().hodge(&eta, o).exterior_derivative(s).hodge(&eta, o);
                    pairs.push((lhs, field::pullback_bundle(phi, &flat, src.clone())));
                }
            }
            ctx.over_points(|_, p| {
                let mut worst: f64 = 0.0;
                for (l, r) in &pairs {
                    worst = nan_max(worst, (l.eval(p)? - r.eval(p)?).max_abs_nan());
                }
                Ok(worst)
            })
        }
        "extensor.gauge_factorization" | "extensor.orthonormal_image" | "extensor.lorentz_orbit" => {
            let g = extensor::metric_extensor_from_coframe(c);
            let h = extensor::gauge_extensor_from_metric(&g);
            let lam = fixed_lorentz();
            ctx.over_points(|_, p| {
                let (gm, hm) = (g.eval(p)?, h.eval(p)?);
                Ok(match id {
                    "extensor.gauge_factorization" => (extensor::eta_adjoint(&hm) * hm - gm).abs().max(),
                    "extensor.lorentz_orbit" => {
                        let lh = lam * hm;
                        (extensor::eta_adjoint(&lh) * lh - gm).abs().max()
                    }
                    _ => {
                        let fr = c.frame(p)?;
                        let eta = MetricAtPoint::minkowski();
                        let mut worst: f64 = 0.0;
                        for a in 0..4 {
                            for b in 0..4 {
                                let ha = mv::outermorphism(&hm, &fr.legs[a]);
                                let hb = mv::outermorphism(&hm, &fr.legs[b]);
                                let want = if a == b { ETA[a] } else { 0.0 };
                                worst = nan_max(worst, (mv::scalar_product(&ha, &hb, &eta) - want).abs());
                            }
                        }
                        worst
                    }
                })
            })
        }
        "extensor.deformed_anticommutator"
        | "extensor.deformed_associativity"
        | "extensor.deformed_product_metric"
        | "extensor.conjugated_hodge" => {
            let h = extensor::gauge_extensor_from_metric(&extensor::metric_extensor_from_coframe(c));
            let out = ctx.over_points(|i, p| {
                let hm = h.eval(p)?;
                let fr = c.frame(p)?;
                let mut rng = ChaCha8Rng::seed_from_u64(case_seed(id, i));
                let mut worst: f64 = 0.0;
                if id == "extensor.deformed_anticommutator" {
                    for a in 0..4 {
                        for b in 0..4 {
                            let (ta, tb) = (&fr.legs[a], &fr.legs[b]);
                            let sum = extensor::deformed_clifford_at(ta, tb, &hm)? + extensor::deformed_clifford_at(tb, ta, &hm)?;
                            let want = Multivector::scalar(if a == b { 2.0 * ETA[a] } else { 0.0 });
                            worst = nan_max(worst, (sum - want).max_abs_nan());
                        }
                    }
                    return Ok(worst);
                }
                for _ in 0..CASES_PER_POINT {
                    let x = random_multivector(&mut rng, 1.0);
                    let y = random_multivector(&mut rng, 1.0);
                    let r = match id {
                        "extensor.deformed_associativity" => {
                            let z = random_multivector(&mut rng, 1.0);
                            let lhs = extensor::deformed_clifford_at(&extensor::deformed_clifford_at(&x, &y, &hm)?, &z, &hm)?;
                            let rhs = extensor::deformed_clifford_at(&x, &extensor::deformed_clifford_at(&y, &z, &hm)?, &hm)?;
                            rel((lhs - rhs).max_abs_nan(), lhs.max_abs())
                        }
                        "extensor.deformed_product_metric" => {
                            let lhs = extensor::deformed_clifford_at(&x, &y, &hm)?;
                            let rhs = mv::clifford_product(&x, &y, &fr.metric);
                            rel((lhs - rhs).max_abs_nan(), rhs.max_abs())
                        }
                        _ => {
                            let lhs = mv::hodge_dual(&x, &fr.metric, o);
                            let rhs = extensor::conjugated_hodge(&x, &hm, o)?;
                            rel((lhs - rhs).max_abs_nan(), lhs.max_abs())
                        }
                    };
                    worst = nan_max(worst, r);
                }
                Ok(worst)
            })?;
            Ok(match out {
                Outcome::Evaluated { points, residual } if id != "extensor.deformed_anticommutator" => Outcome::Evaluated {
                    points: points * CASES_PER_POINT,
                    residual,
                },
                other => other,
            })
        }
        _ => unreachable!("unknown identity {id}"),
    }
}

fn curvature(ctx: &Ctx, id: &str) -> Result<Outcome> {
    let sc = ctx.scenario;
    let c = ctx.coframe();
    let s = ctx.fd;
    let w = cartan::connection_from_coframe(c, s);
    let curv = cartan::curvature_forms(&w, s);
    let ricci = cartan::ricci_one_forms(c, &curv);
    match id {
        "cartan.first_structure" => {
            let r = c.structure_residual(&w, s);
            ctx.over_points(|_, p| Ok(max_legs(&r.eval(p)?)))
        }
        "cartan.connection_antisymmetry" => {
            let table = cartan::connection_coefficients(&w, c);
            ctx.over_points(|_, p| {
                let l = table.eval(p)?;
                let mut worst: f64 = 0.0;
                for a in 0..4 {
                    for b in 0..4 {
                        for k in 0..4 {
                            worst = nan_max(worst, (ETA[a] * l[a][b][k] + ETA[b] * l[b][a][k]).abs());
                        }
                    }
                }
                Ok(worst)
            })
        }
        "cartan.flat_curvature" => {
            if !sc.flat {
                return Ok(Outcome::Skipped(format!("scenario `{}` is curved", sc.name)));
            }
            ctx.over_points(|_, p| Ok(max_legs(&curv.eval(p)?)))
        }
        "cartan.vacuum_ricci" | "cartan.vacuum_einstein" => {
            if !sc.vacuum {
                return Ok(Outcome::Skipped(format!("scenario `{}` is not a vacuum solution", sc.name)));
            }
            if id == "cartan.vacuum_ricci" {
                ctx.over_points(|_, p| Ok(max_legs(&ricci.eval(p)?)))
            } else {
                let g = maxwell::einstein_source(c, s);
                ctx.over_points(|_, p| Ok(max_legs(&g.eval(p)?)))
            }
        }
        "cartan.ricci_oracle" | "cartan.scalar_curvature_oracle" | "cartan.kretschmann_oracle" => {
            let coord = oracle::coordinate_curvature(&c.metric_field(), s);
            let r = cartan::scalar_curvature(c, &ricci);
            ctx.over_points(|_, p| {
                let cc = coord.eval(p)?;
                Ok(match id {
                    "cartan.scalar_curvature_oracle" => rel((r.eval(p)? - cc.scalar).abs(), cc.scalar.abs()),
                    "cartan.kretschmann_oracle" => {
                        let k = cartan::kretschmann_at(&c.frame(p)?, &curv.eval(p)?);
                        (k - cc.kretschmann).abs() / (cc.kretschmann.abs() + 1e-9)
                    }
                    _ => {
                        let fr = c.frame(p)?;
                        let ric = ricci.eval(p)?;
                        let scale = cc.ricci.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
                        let mut worst: f64 = 0.0;
                        for k in 0..4 {
                            let comp = ric[k].vector_part();
                            for nu in 0..4 {
                                let want: f64 = (0..4).map(|mu| fr.e_inv[(mu, k)] * cc.ricci[mu][nu]).sum();
                                worst = nan_max(worst, (comp[nu] - want).abs());
                            }
                        }
                        rel(worst, scale)
                    }
                })
            })
        }
        _ => unreachable!("unknown identity {id}"),
    }
}

fn densities(ctx: &Ctx, id: &str) -> Result<Outcome> {
    let sc = ctx.scenario;
    let c = ctx.coframe();
    let s = ctx.fd;
    let o = c.orientation();
    let lg = lagrangian::lagrangian_g(c, s);
    let w = cartan::connection_from_coframe(c, s);
    match id {
        "lagrangian.eh_boundary" => {
            let eh = lagrangian::lagrangian_eh(c, s);
            let b = lagrangian::boundary_term(c, s);
            ctx.over_points(|_, p| Ok((eh.coefficient(p)? + b.coefficient(p)? - lg.coefficient(p)?).abs()))
        }
        "lagrangian.eh_scalar" => {
            let eh = lagrangian::lagrangian_eh(c, s);
            let sd = lagrangian::scalar_density(c, s);
            ctx.over_points(|_, p| Ok((eh.coefficient(p)? - sd.coefficient(p)?).abs()))
        }
        "lagrangian.exact_difference" => {
            let r = lagrangian::footnote_residual(c, s);
            ctx.over_points(|_, p| Ok(r.eval(p)?.max_abs_nan()))
        }
        "lagrangian.first_order_paths" => {
            let f1 = lagrangian::first_order_density(c, &w);
            let f2 = lagrangian::first_order_density_coefficients(c, &w);
            ctx.over_points(|_, p| Ok((f1.coefficient(p)? - f2.coefficient(p)?).abs()))
        }
        "lagrangian.first_order_equivalence" => {
            let f1 = lagrangian::first_order_density(c, &w);
            ctx.over_points(|_, p| Ok((f1.coefficient(p)? - lg.coefficient(p)?).abs()))
        }
        "lagrangian.flat_transport" => {
            let (Some((theta, gfields)), Some(phi), Some(target)) =
                (scenarios::lorentz_framed(sc), sc.diffeo.as_ref(), sc.target_domain.as_ref())
            else {
                return Ok(Outcome::Skipped(format!("scenario `{}` has no diffeomorphism to a flat chart", sc.name)));
            };
            let lhs = lagrangian::lagrangian_g(&theta, s);
            let flat = lagrangian::flat_lagrangian_gm(&gfields, &minkowski_field(target.clone()), o, s);
            ctx.over_points(|_, p| {
                let det = phi.jacobian(p)?.determinant();
                Ok((lhs.coefficient(p)? - flat.eval(&phi.forward(p))? * det).abs())
            })
        }
        "lagrangian.global_lorentz" => {
            let lam = fixed_lorentz();
            let c0 = c.clone();
            let rotated = Coframe::new(c.domain().clone(), move |p| Ok(lam * c0.components(p)?), o);
            let lr = lagrangian::lagrangian_g(&rotated, s);
            ctx.over_points(|_, p| {
                let a = lg.coefficient(p)?;
                Ok(rel((lr.coefficient(p)? - a).abs(), a.abs()))
            })
        }
        "lagrangian.mass_term" => ctx.over_points(|_, p| {
            let fr = c.frame(p)?;
            let got = lagrangian::mass_term_at(&fr, 1.0, o)[VOLUME_BLADE];
            let want = 2.0 * o.sign() * fr.metric.sqrt_abs_det();
            Ok(rel((got - want).abs(), want.abs()))
        }),
        "teleparallel.equivalence" | "teleparallel.completeness" | "teleparallel.orthogonality" => {
            let t = teleparallel::torsion_forms(c, s);
            if id == "teleparallel.equivalence" {
                let lt = teleparallel::teleparallel_lagrangian(&t, c, 0.0);
                return ctx.over_points(|_, p| Ok((lt.coefficient(p)? - lg.coefficient(p)?).abs()));
            }
            let parts = teleparallel::decompose_torsion(&t, c);
            ctx.over_points(|_, p| {
                let pt = parts.eval(p)?;
                if id == "teleparallel.completeness" {
                    let remainder: Vec<Multivector> =
                        (0..4).map(|a| pt.theta[a] - pt.tensor[a] - pt.trace[a] - pt.axial[a]).collect();
                    return Ok(max_legs(&remainder));
                }
                let fr = c.frame(p)?;
                let sets = [pt.tensor, pt.trace, pt.axial];
                let mut worst: f64 = 0.0;
                for i in 0..3 {
                    for j in (i + 1)..3 {
                        worst = nan_max(worst, teleparallel::torsion_inner(&fr, &sets[i], &sets[j]).abs());
                    }
                }
                Ok(worst)
            })
        }
        _ => unreachable!("unknown identity {id}"),
    }
}

fn massive_matter(c: &Coframe, s: FdScheme, mass: f64) -> Field<[Multivector; 4]> {
    maxwell::einstein_source(c, s).zip(&c.legs(), move |_, g, l| Ok(std::array::from_fn(|a| g[a] - l[a] * (mass * mass))))
}

fn field_equations(ctx: &Ctx, id: &str) -> Result<Outcome> {
    let sc = ctx.scenario;
    let c = ctx.coframe();
    let s = ctx.fd;
    let o = c.orientation();
    let metric = c.metric_field();
    let matter = maxwell::einstein_source(c, s);
    let w = cartan::connection_from_coframe(c, s);
    let legs4 = |f: Field<[Multivector; 4]>| move |_: usize, p: &Point| -> Result<f64> { Ok(max_legs(&f.eval(p)?)) };
    match id {
        "maxwell.homogeneous" => ctx.over_points(legs4(maxwell::field_strengths(c, s).exterior_derivative(s))),
        "maxwell.inhomogeneous" => {
            let j = maxwell::currents(c, &matter, s);
            ctx.over_points(legs4(maxwell::inhomogeneous_residual(c, &j, s)))
        }
        "maxwell.conservation" => {
            let j = maxwell::currents(c, &matter, s);
            ctx.over_points(legs4(maxwell::conservation(c, &j, s)))
        }
        "teleparallel.torsion_codifferential" => {
            let j = maxwell::currents(c, &matter, s);
            let dt = teleparallel::torsion_forms(c, s).field.codifferential(&metric, o, s);
            ctx.over_points(legs4(dt.zip(&j, |_, d, j| Ok(std::array::from_fn(|a| d[a] + j[a])))))
        }
        "maxwell.laplacian_split" => {
            let split = maxwell::hodge_laplacian_split(c, s);
            ctx.over_points(|_, p| Ok(max_legs(&split.eval(p)?.closure())))
        }
        "maxwell.m_tensor_symmetry" => {
            let m = maxwell::m_tensor(c, s);
            ctx.over_points(|_, p| {
                let m = m.eval(p)?;
                let mut worst: f64 = 0.0;
                for d in 0..4 {
                    for k in 0..4 {
                        for a in 0..4 {
                            for b in 0..4 {
                                worst = nan_max(worst, (m[d][k][a][b] - m[d][k][b][a]).abs());
                            }
                        }
                    }
                }
                Ok(worst)
            })
        }
        "maxwell.balance" => {
            let sp = maxwell::superpotentials(c, &w);
            ctx.over_points(legs4(maxwell::balance_residual(c, &sp, &matter, 0.0, s)))
        }
        "maxwell.conjugated_balance" => {
            let (Some(h), Some((theta, _))) = (jacobian_extensor(sc), scenarios::lorentz_framed(sc)) else {
                return Ok(Outcome::Skipped(format!("scenario `{}` has no diffeomorphism to a flat chart", sc.name)));
            };
            ctx.over_points(|_, p| Ok(nan_max(conjugated_balance(c, &h, s, p)?, conjugated_balance(&theta, &h, s, p)?)))
        }
        "massive.balance" | "massive.divergence" => {
            let sp = maxwell::superpotentials(c, &w);
            let t = massive_matter(c, s, ctx.mass);
            if id == "massive.balance" {
                ctx.over_points(legs4(maxwell::balance_residual(c, &sp, &t, ctx.mass, s)))
            } else {
                ctx.over_points(legs4(maxwell::massive_divergence_residual(c, &sp, &t, ctx.mass, s)))
            }
        }
        "massive.reduction" => {
            let lg = lagrangian::lagrangian_g(c, s);
            let lm = lagrangian::lagrangian_massive(c, ctx.mass, s);
            let lt0 = teleparallel::teleparallel_lagrangian(&teleparallel::torsion_forms(c, s), c, 0.0);
            let lt = teleparallel::teleparallel_lagrangian(&teleparallel::torsion_forms(c, s), c, ctx.mass);
            let sp = maxwell::superpotentials(c, &w);
            let b0 = maxwell::balance_residual(c, &sp, &matter, 0.0, s);
            let bm = maxwell::balance_residual(c, &sp, &massive_matter(c, s, 0.0), 0.0, s);
            let mass = ctx.mass;
            ctx.over_points(|_, p| {
                let fr = c.frame(p)?;
                let mt = lagrangian::mass_term_at(&fr, mass, o)[VOLUME_BLADE];
                let a = (lm.coefficient(p)? - lg.coefficient(p)? - mt).abs();
                let b = (lt.coefficient(p)? - lt0.coefficient(p)? - mt).abs();
                let (x, y) = (b0.eval(p)?, bm.eval(p)?);
                let d: Vec<Multivector> = (0..4).map(|k| x[k] - y[k]).collect();
                Ok(a.max(b).max(max_legs(&d)))
            })
        }
        _ => unreachable!("unknown identity {id}"),
    }
}

fn evaluate(ctx: &Ctx, id: &str) -> Result<Outcome> {
    let group = id.split('.').next().unwrap_or("");
    match group {
        "algebra" => algebra(ctx, id),
        "scenario" | "fields" | "extensor" => geometry(ctx, id),
        "cartan" => curvature(ctx, id),
        "lagrangian" => densities(ctx, id),
        "teleparallel" if id == "teleparallel.torsion_codifferential" => field_equations(ctx, id),
        "teleparallel" => densities(ctx, id),
        "maxwell" | "massive" => field_equations(ctx, id),
        _ => unreachable!("unknown identity {id}"),
    }
}

impl SuiteConfig {
    pub fn scheme(&self) -> Result<FdScheme> {
        FdScheme::new(self.fd_step, self.fd_order)
    }

    pub fn validate(&self) -> Result<()> {
        self.scheme()?;
        if !self.mass.is_finite() || self.mass < 0.0 {
            return Err(Error::Config(format!("graviton mass must be finite and >= 0, got {}", self.mass)));
        }
        for (id, tol) in &self.tolerances {
            if identity_info(id).is_none() {
                return Err(Error::Config(format!("unknown identity id `{id}`")));
            }
            if !tol.is_finite() || *tol <= 0.0 {
                return Err(Error::Config(format!("tolerance for `{id}` must be positive, got {tol}")));
            }
        }
        if let PointSource::Builtin(n) = self.points {
            if n == 0 || n > MAX_POINTS {
                return Err(Error::Config(format!("point count must be in 1..={MAX_POINTS}, got {n}")));
            }
        }
        Ok(())
    }

    fn resolve_points(&self, sc: &Scenario) -> Result<Vec<Point>> {
        let pts = match &self.points {
            PointSource::Builtin(n) => scenarios::default_point_set(sc, *n),
            PointSource::Csv(path) => field::read_points_csv(path)?,
            PointSource::Explicit(v) => v.clone(),
        };
        if pts.is_empty() || pts.len() > MAX_POINTS {
            return Err(Error::Config(format!("point set must hold 1..={MAX_POINTS} points, got {}", pts.len())));
        }
        for p in &pts {
            sc.coframe.domain().check(p)?;
        }
        Ok(pts)
    }
}

/// Runs every identity on the configured scenario.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let sc = scenarios::build_scenario(&cfg.scenario, &cfg.params)?;
    let points = cfg.resolve_points(&sc)?;
    let ctx = Ctx {
        scenario: &sc,
        points: &points,
        fd: cfg.scheme()?,
        mass: cfg.mass,
    };
    let mut rows = Vec::with_capacity(IDENTITIES.len());
    for info in IDENTITIES {
        let tolerance = cfg.tolerances.get(info.id).copied().unwrap_or(info.tolerance);
        let row = match evaluate(&ctx, info.id)? {
            Outcome::Evaluated { points, residual } => {
                let pass = residual <= tolerance;
                IdentityRecord {
                    identity_id: info.id.to_string(),
                    kind: info.kind.to_string(),
                    max_residual: Some(residual),
                    pass,
                    points_evaluated: points,
                    reason: None,
                    statement: info.statement.to_string(),
                    status: if pass { Status::Pass } else { Status::Fail },
                    tolerance,
                }
            }
            Outcome::Skipped(reason) => IdentityRecord {
                identity_id: info.id.to_string(),
                kind: info.kind.to_string(),
                max_residual: None,
                pass: false,
                points_evaluated: 0,
                reason: Some(reason),
                statement: info.statement.to_string(),
                status: Status::Skipped,
                tolerance,
            },
        };
        rows.push(row);
    }
    rows.sort_by(|a, b| a.identity_id.cmp(&b.identity_id));
    let diagnostics = diagnostics(&ctx)?;
    let summary = Summary::from_rows(&rows);
    Ok(Report {
        environment: Environment {
            diagnostics,
            fd_order: cfg.fd_order.as_int(),
            fd_step: cfg.fd_step,
            graviton_mass: cfg.mass,
            scenario: ScenarioBlock {
                flat: sc.flat,
                has_diffeomorphism: sc.diffeo.is_some(),
                name: sc.name.clone(),
                notes: sc.notes.clone(),
                params: sc.params.clone(),
                points: points.iter().map(|p| p.0).collect(),
                vacuum: sc.vacuum,
            },
            signs: sign_table(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
        identities: rows,
        schema: crate::report::SCHEMA.to_string(),
        summary,
    })
}

/// Informational values that are not pass/fail identities.
fn diagnostics(ctx: &Ctx) -> Result<BTreeMap<String, Option<f64>>> {
    let c = ctx.coframe();
    let s = ctx.fd;
    let o = c.orientation();
    let p = ctx.points[0];
    let fin = |x: f64| x.is_finite().then_some(x);
    let w = cartan::connection_from_coframe(c, s);
    let curv = cartan::curvature_forms(&w, s);
    let ricci = cartan::ricci_one_forms(c, &curv);
    let mut out = BTreeMap::new();
    let delta = c.codifferentials(s);
    let gauge = ctx
        .points
        .par_iter()
        .map(|p| Ok(max_legs(&delta.eval(p)?)))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, nan_max);
    out.insert("gauge_condition.max_abs_delta_theta".to_string(), fin(gauge));
    out.insert("first_point.lagrangian_g".to_string(), fin(lagrangian::lagrangian_g(c, s).coefficient(&p)?));
    out.insert("first_point.scalar_curvature".to_string(), fin(cartan::scalar_curvature(c, &ricci).eval(&p)?));
    out.insert("first_point.kretschmann".to_string(), fin(cartan::kretschmann_at(&c.frame(&p)?, &curv.eval(&p)?)));
    // Printed index order of the first-order form, kept for comparison.
    let fr = c.frame(&p)?;
    let wp = w.eval(&p)?;
    let mut printed = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for k in 0..4 {
                let ww = mv::wedge(&cartan::lowered(&wp, a, b), &cartan::mixed(&wp, a, k));
                printed += mv::contract_left(&fr.legs[k], &mv::contract_left(&fr.legs[b], &ww, &fr.metric), &fr.metric).scalar_part();
            }
        }
    }
    let printed_density = -0.5 * printed * fr.metric.volume(o)[VOLUME_BLADE];
    out.insert("first_point.first_order_printed_order".to_string(), fin(printed_density));
    let d = c.exterior_derivatives(s).eval(&p)?;
    let del = delta.eval(&p)?;
    let mut lhs = Multivector::ZERO;
    let mut rhs = Multivector::ZERO;
    for a in 0..4 {
        lhs += mv::wedge(&d[a], &mv::hodge_dual(&(d[a] * ETA[a]), &fr.metric, o));
        lhs -= mv::wedge(&del[a], &mv::hodge_dual(&(del[a] * ETA[a]), &fr.metric, o));
        for b in 0..4 {
            let x = mv::wedge(&d[a], &fr.lowered(b));
            let y = mv::wedge(&d[b], &fr.lowered(a));
            rhs += mv::wedge(&x, &mv::hodge_dual(&y, &fr.metric, o));
        }
    }
    let literal = (lhs * -0.5 - rhs * 0.25)[VOLUME_BLADE];
    out.insert("first_point.footnote_quarter_weight_residual".to_string(), fin(literal));
    Ok(out)
}
