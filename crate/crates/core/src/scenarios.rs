//! Built-in coframe families.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Matrix4, Vector4};

use crate::cartan::Coframe;
use crate::error::{Error, Result};
use crate::field::{Diffeomorphism, Domain, Exclusion, Field, Point};
use crate::mv::{Multivector, Orientation};

/// Points used when no count is requested.
pub const DEFAULT_POINT_COUNT: usize = 8;

pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub range: &'static str,
}

pub struct ScenarioInfo {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
}

pub const SCENARIOS: &[ScenarioInfo] = &[
    ScenarioInfo {
        name: "minkowski",
        summary: "flat coframe θ^a = dx^a",
        params: &[],
    },
    ScenarioInfo {
        name: "lorentz_rotated",
        summary: "constant boost along x1 followed by a rotation in the x1-x2 plane",
        params: &[
            ParamSpec { name: "rapidity", default: 0.5, range: "|rapidity| <= 3" },
            ParamSpec { name: "angle", default: 0.3, range: "any real" },
        ],
    },
    ScenarioInfo {
        name: "rindler",
        summary: "θ^0 = x1 dx0, θ^i = dx^i on x1 >= x1_min",
        params: &[ParamSpec { name: "x1_min", default: 0.5, range: "x1_min > 0" }],
    },
    ScenarioInfo {
        name: "flrw_flat",
        summary: "θ^0 = dt, θ^i = a(t) dx^i with a(t) = t^p on t >= t_min",
        params: &[
            ParamSpec { name: "p", default: 1.0, range: "0 < p <= 1" },
            ParamSpec { name: "t_min", default: 1.0, range: "t_min > 0" },
        ],
    },
    ScenarioInfo {
        name: "schwarzschild",
        summary: "static tetrad on r >= 3M, spherical chart (t,r,ϑ,φ) or Cartesian-ized chart",
        params: &[
            ParamSpec { name: "mass", default: 1.0, range: "mass > 0" },
            ParamSpec { name: "cartesian", default: 0.0, range: "0 (spherical) or 1 (Cartesian)" },
        ],
    },
    ScenarioInfo {
        name: "perturbed_flat",
        summary: "pullback of the flat coframe by y = x + ε·sin(k·x + φ)",
        params: &[ParamSpec { name: "epsilon", default: 0.01, range: "|epsilon| <= 0.05" }],
    },
];

pub fn scenario_info(name: &str) -> Result<&'static ScenarioInfo> {
    SCENARIOS
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownScenario(name.to_string()))
}

/// A fully wired coframe family.
#[derive(Clone)]
pub struct Scenario {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub coframe: Coframe,
    /// Map from the coframe chart to a chart where the flat coframe is `dy^a`.
    pub diffeo: Option<Diffeomorphism>,
    /// Region of the target chart reached by `diffeo`.
    pub target_domain: Option<Domain>,
    /// Box sampled by [`default_point_set`].
    pub sample_lo: [f64; 4],
    pub sample_hi: [f64; 4],
    pub default_points: Vec<Point>,
    /// Curvature vanishes identically.
    pub flat: bool,
    /// Einstein forms vanish identically.
    pub vacuum: bool,
    pub notes: String,
}

fn resolve_params(info: &ScenarioInfo, given: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
    for key in given.keys() {
        if !info.params.iter().any(|p| p.name == key) {
            return Err(Error::Config(format!(
                "scenario `{}` has no parameter `{key}`",
                info.name
            )));
        }
    }
    Ok(info
        .params
        .iter()
        .map(|p| (p.name.to_string(), given.get(p.name).copied().unwrap_or(p.default)))
        .collect())
}

fn out_of_range(name: &str, value: f64, reason: &str) -> Error {
    Error::ParamOutOfRange {
        name: name.to_string(),
        value,
        reason: reason.to_string(),
    }
}

fn require(ok: bool, name: &str, value: f64, reason: &str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(out_of_range(name, value, reason))
    }
}

pub fn build_scenario(name: &str, params: &BTreeMap<String, f64>) -> Result<Scenario> {
    let info = scenario_info(name)?;
    let params = resolve_params(info, params)?;
    let get = |k: &str| params[k];
    let mut s = match name {
        "minkowski" => flat_box(name, Matrix4::identity(), "flat coframe in inertial coordinates"),
        "lorentz_rotated" => {
            let (eta, angle) = (get("rapidity"), get("angle"));
            require(eta.abs() <= 3.0, "rapidity", eta, "must satisfy |rapidity| <= 3")?;
            require(true, "angle", angle, "must be finite")?;
            let (ch, sh) = (eta.cosh(), eta.sinh());
            let boost = Matrix4::new(
                ch, -sh, 0.0, 0.0, //
                -sh, ch, 0.0, 0.0, //
                0.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, 1.0,
            );
            let (c, sn) = (angle.cos(), angle.sin());
            let rot = Matrix4::new(
                1.0, 0.0, 0.0, 0.0, //
                0.0, c, -sn, 0.0, //
                0.0, sn, c, 0.0, //
                0.0, 0.0, 0.0, 1.0,
            );
            flat_box(
                name,
                rot * boost,
                &format!("constant Lorentz transform of the flat coframe, rapidity {eta}, angle {angle}"),
            )
        }
        "rindler" => rindler(get("x1_min"))?,
        "flrw_flat" => flrw(get("p"), get("t_min"))?,
        "schwarzschild" => {
            let cart = get("cartesian");
            require(cart == 0.0 || cart == 1.0, "cartesian", cart, "must be 0 or 1")?;
            schwarzschild(get("mass"), cart == 1.0)?
        }
        "perturbed_flat" => perturbed_flat(get("epsilon"))?,
        _ => unreachable!("scenario table and builder disagree"),
    };
    s.params = params;
    s.default_points = default_point_set(&s, DEFAULT_POINT_COUNT);
    Ok(s)
}

fn skeleton(
    name: &str,
    coframe: Coframe,
    sample_lo: [f64; 4],
    sample_hi: [f64; 4],
    notes: String,
) -> Scenario {
    Scenario {
        name: name.to_string(),
        params: BTreeMap::new(),
        coframe,
        diffeo: None,
        target_domain: None,
        sample_lo,
        sample_hi,
        default_points: Vec::new(),
        flat: true,
        vacuum: true,
        notes,
    }
}

fn flat_box(name: &str, e: Matrix4<f64>, notes: &str) -> Scenario {
    let coframe = Coframe::new(Domain::new([-2.0; 4], [2.0; 4]), move |_| Ok(e), Orientation::Positive);
    let mut s = skeleton(name, coframe, [-1.0; 4], [1.0; 4], notes.to_string());
    let e_inv = e.try_inverse().expect("Lorentz matrices are invertible");
    let reach = 2.0 * (0..4).map(|r| e.row(r).abs().sum()).fold(0.0, f64::max) + 0.5;
    s.diffeo = Some(
        Diffeomorphism::new(move |x| Point((e * Vector4::from(x.0)).into()))
            .with_jacobian(move |_| e)
            .with_inverse(move |y| Point((e_inv * Vector4::from(y.0)).into())),
    );
    s.target_domain = Some(Domain::new([-reach; 4], [reach; 4]));
    s
}

fn rindler(x1_min: f64) -> Result<Scenario> {
    require(x1_min > 0.0, "x1_min", x1_min, "must be positive")?;
    let domain = Domain::new([-2.0, x1_min, -2.0, -2.0], [2.0, x1_min + 4.0, 2.0, 2.0]);
    let coframe = Coframe::new(
        domain,
        |p| Ok(Matrix4::from_diagonal(&[p[1], 1.0, 1.0, 1.0].into())),
        Orientation::Positive,
    );
    Ok(skeleton(
        "rindler",
        coframe,
        [-1.0, x1_min + 0.5, -1.0, -1.0],
        [1.0, x1_min + 2.5, 1.0, 1.0],
        format!("uniformly accelerated frame of flat spacetime, x1 >= {x1_min}"),
    ))
}

fn flrw(p: f64, t_min: f64) -> Result<Scenario> {
    require(p > 0.0 && p <= 1.0, "p", p, "must lie in (0, 1]")?;
    require(t_min > 0.0, "t_min", t_min, "must be positive")?;
    let domain = Domain::new([t_min, -2.0, -2.0, -2.0], [t_min + 2.0, 2.0, 2.0, 2.0]);
    let coframe = Coframe::new(
        domain,
        move |x| {
            let a = x[0].powf(p);
            Ok(Matrix4::from_diagonal(&[1.0, a, a, a].into()))
        },
        Orientation::Positive,
    );
    let mut s = skeleton(
        "flrw_flat",
        coframe,
        [t_min + 0.5, -1.0, -1.0, -1.0],
        [t_min + 1.5, 1.0, 1.0, 1.0],
        format!("spatially flat expanding universe, a(t) = t^{p}, t >= {t_min}"),
    );
    s.flat = false;
    s.vacuum = false;
    Ok(s)
}

fn schwarzschild(mass: f64, cartesian: bool) -> Result<Scenario> {
    require(mass > 0.0, "mass", mass, "must be positive")?;
    let m = mass;
    let mut s = if cartesian {
        let domain = Domain::new([-2.0, -20.0 * m, -20.0 * m, -20.0 * m], [2.0, 20.0 * m, 20.0 * m, 20.0 * m])
            .with_exclusion(Exclusion::SpatialBall { radius: 3.0 * m });
        let coframe = Coframe::new(
            domain,
            move |x| {
                let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
                let f = 1.0 - 2.0 * m / r;
                let n = [x[1] / r, x[2] / r, x[3] / r];
                let c = 1.0 / f.sqrt() - 1.0;
                let mut e = Matrix4::zeros();
                e[(0, 0)] = f.sqrt();
                for i in 0..3 {
                    for j in 0..3 {
                        e[(i + 1, j + 1)] = if i == j { 1.0 } else { 0.0 } + c * n[i] * n[j];
                    }
                }
                Ok(e)
            },
            Orientation::Positive,
        );
        skeleton(
            "schwarzschild",
            coframe,
            [-1.0, 4.0 * m, -4.0 * m, -4.0 * m],
            [1.0, 16.0 * m, 4.0 * m, 4.0 * m],
            format!("static Schwarzschild tetrad, M = {m}, Cartesian-ized chart, r >= 3M"),
        )
    } else {
        let domain = Domain::new([-2.0, 3.0 * m, 0.3, -PI], [2.0, 20.0 * m, PI - 0.3, PI]);
        let coframe = Coframe::new(
            domain,
            move |x| {
                let f = 1.0 - 2.0 * m / x[1];
                Ok(Matrix4::from_diagonal(
                    &[f.sqrt(), 1.0 / f.sqrt(), x[1], x[1] * x[2].sin()].into(),
                ))
            },
            Orientation::Positive,
        );
        skeleton(
            "schwarzschild",
            coframe,
            [-1.0, 4.0 * m, FRAC_PI_2 - 1.0, -1.0],
            [1.0, 16.0 * m, FRAC_PI_2 + 1.0, 1.0],
            format!("static Schwarzschild tetrad, M = {m}, chart (t, r, ϑ, φ), r >= 3M, ϑ in [0.3, π-0.3]"),
        )
    };
    s.flat = false;
    Ok(s)
}

const WAVE: [[f64; 4]; 4] = [
    [1.0, 2.0, 0.0, 1.0],
    [2.0, 0.0, 1.0, 1.0],
    [0.0, 1.0, 1.0, 2.0],
    [1.0, 1.0, 2.0, 0.0],
];

fn phase(mu: usize, x: &Point) -> f64 {
    (0..4).map(|nu| WAVE[mu][nu] * x[nu]).sum::<f64>() + mu as f64
}

/// `y^μ = x^μ + ε sin(k_μ·x + μ)`.
pub fn sinusoidal_diffeo(eps: f64) -> Diffeomorphism {
    let forward = move |x: &Point| Point(std::array::from_fn(|mu| x[mu] + eps * phase(mu, x).sin()));
    let jacobian = move |x: &Point| {
        Matrix4::from_fn(|mu, nu| {
            let id = if mu == nu { 1.0 } else { 0.0 };
            id + eps * phase(mu, x).cos() * WAVE[mu][nu]
        })
    };
    let inverse = move |y: &Point| {
        let mut x = *y;
        for _ in 0..200 {
            let next = Point(std::array::from_fn(|mu| y[mu] - eps * phase(mu, &x).sin()));
            let done = (0..4).all(|mu| (next[mu] - x[mu]).abs() < 1e-15);
            x = next;
            if done {
                break;
            }
        }
        x
    };
    Diffeomorphism::new(forward)
        .with_jacobian(jacobian)
        .with_inverse(inverse)
}

fn perturbed_flat(eps: f64) -> Result<Scenario> {
    require(eps.abs() <= 0.05, "epsilon", eps, "must satisfy |epsilon| <= 0.05")?;
    let phi = sinusoidal_diffeo(eps);
    let jac = phi.clone();
    let domain = Domain::new([1.0, -1.0, -1.0, -1.0], [3.0, 1.0, 1.0, 1.0]);
    let coframe = Coframe::new(domain, move |x| jac.jacobian(x), Orientation::Positive);
    let mut s = skeleton(
        "perturbed_flat",
        coframe,
        [1.5, -0.5, -0.5, -0.5],
        [2.5, 0.5, 0.5, 0.5],
        format!("flat coframe pulled back by y = x + {eps}·sin(k·x + φ)"),
    );
    let grow = 0.25 + eps.abs() * 4.0;
    s.target_domain = Some(Domain::new([1.0 - grow, -1.0 - grow, -1.0 - grow, -1.0 - grow], [3.0 + grow, 1.0 + grow, 1.0 + grow, 1.0 + grow]));
    s.diffeo = Some(phi);
    Ok(s)
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut r = 0.0;
    while i > 0 {
        r += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    r
}

fn name_shift(name: &str, axis: usize) -> f64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes().chain(std::iter::once(axis as u8)) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    (h >> 11) as f64 / (1u64 << 53) as f64
}

/// Deterministic low-discrepancy points: the centre of the sampling box
/// first, then a Halton sequence shifted by a hash of the scenario name.
pub fn default_point_set(s: &Scenario, n: usize) -> Vec<Point> {
    let n = n.max(1);
    let centre = Point(std::array::from_fn(|k| 0.5 * (s.sample_lo[k] + s.sample_hi[k])));
    let mut pts = vec![centre];
    const BASES: [u64; 4] = [2, 3, 5, 7];
    let mut i = 1u64;
    while pts.len() < n && i < 100_000 {
        let p = Point(std::array::from_fn(|k| {
            let u = (radical_inverse(i, BASES[k]) + name_shift(&s.name, k)).fract();
            s.sample_lo[k] + u * (s.sample_hi[k] - s.sample_lo[k])
        }));
        i += 1;
        if s.coframe.domain().contains(&p) {
            pts.push(p);
        }
    }
    pts
}

/// Position-dependent Lorentz matrix: a boost along `y^1` with rapidity
/// `0.3 sin(y^0 + y^2)` followed by a rotation by `0.4 cos(y^1 − y^3)` in the `y^2`-`y^3` plane.
pub fn local_lorentz(y: &Point) -> Matrix4<f64> {
    let r = 0.3 * (y[0] + y[2]).sin();
    let t = 0.4 * (y[1] - y[3]).cos();
    let mut boost = Matrix4::identity();
    boost[(0, 0)] = r.cosh();
    boost[(1, 1)] = r.cosh();
    boost[(0, 1)] = r.sinh();
    boost[(1, 0)] = r.sinh();
    let mut rot = Matrix4::identity();
    rot[(2, 2)] = t.cos();
    rot[(3, 3)] = t.cos();
    rot[(2, 3)] = -t.sin();
    rot[(3, 2)] = t.sin();
    rot * boost
}

/// Flat-chart legs `𝔤^a = Λ^a_b(y) dy^b` and their pullback `θ^a = φ*𝔤^a`
/// for a scenario that carries a diffeomorphism.
pub fn lorentz_framed(s: &Scenario) -> Option<(Coframe, Field<[Multivector; 4]>)> {
    let phi = s.diffeo.clone()?;
    let target = s.target_domain.clone()?;
    let g = Field::new(target, |y| {
        let l = local_lorentz(y);
        Ok(std::array::from_fn(|a| Multivector::one_form(std::array::from_fn(|b| l[(a, b)]))))
    });
    let coframe = Coframe::new(
        s.coframe.domain().clone(),
        move |x| Ok(local_lorentz(&phi.forward(x)) * phi.jacobian(x)?),
        s.coframe.orientation(),
    );
    Some((coframe, g))
}
