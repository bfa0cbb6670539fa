//! Torsion of the coframe-fixed parallelism and its irreducible parts.

use crate::cartan::{Coframe, Frame};
use crate::field::{FdScheme, Field};
use crate::lagrangian::{mass_term_at, Density4};
use crate::mv::{contract_left, hodge_dual, interior_vector, scalar_product, wedge, Multivector, Orientation, ETA};

/// Torsion 2-forms `Θ^a = dθ^a` with their tensor, trace and axial parts.
#[derive(Clone, Copy, Debug)]
pub struct TorsionParts {
    pub theta: [Multivector; 4],
    pub tensor: [Multivector; 4],
    pub trace: [Multivector; 4],
    pub axial: [Multivector; 4],
}

#[derive(Clone)]
pub struct TorsionForms {
    pub field: Field<[Multivector; 4]>,
}

pub fn torsion_forms(c: &Coframe, s: FdScheme) -> TorsionForms {
    TorsionForms {
        field: c.exterior_derivatives(s),
    }
}

/// Trace part `⅓θ^a∧(e_b⌟Θ^b)`, axial part `⅓θ^a⌟(θ_b∧Θ^b)`, tensor part by subtraction.
pub fn decompose_at(fr: &Frame, theta: &[Multivector; 4]) -> TorsionParts {
    let m = &fr.metric;
    let trace_form: Multivector = (0..4).map(|b| interior_vector(&fr.dual_vector(b), &theta[b])).sum();
    let axial_form: Multivector = (0..4).map(|b| wedge(&fr.lowered(b), &theta[b])).sum();
    let trace: [Multivector; 4] = std::array::from_fn(|a| wedge(&fr.legs[a], &trace_form) * (1.0 / 3.0));
    let axial: [Multivector; 4] = std::array::from_fn(|a| contract_left(&fr.legs[a], &axial_form, m) * (1.0 / 3.0));
    let tensor = std::array::from_fn(|a| theta[a] - trace[a] - axial[a]);
    TorsionParts {
        theta: *theta,
        tensor,
        trace,
        axial,
    }
}

pub fn decompose_torsion(t: &TorsionForms, c: &Coframe) -> Field<TorsionParts> {
    t.field.zip(&c.frame_field(), |_, th, fr| Ok(decompose_at(&fr, &th)))
}

/// `Σ_a ⟨X^a, Y^a⟩` with tetrad indices contracted by `η`.
pub fn torsion_inner(fr: &Frame, x: &[Multivector; 4], y: &[Multivector; 4]) -> f64 {
    (0..4).map(|a| ETA[a] * scalar_product(&x[a], &y[a], &fr.metric)).sum()
}

/// `−½Θ^a∧⋆(⁽¹⁾Θ_a − 2⁽²⁾Θ_a − ½⁽³⁾Θ_a) + ½m²θ_a∧⋆θ^a`.
pub fn teleparallel_at(fr: &Frame, parts: &TorsionParts, mass: f64, o: Orientation) -> Multivector {
    let mut l = Multivector::ZERO;
    for a in 0..4 {
        let combo = (parts.tensor[a] - parts.trace[a] * 2.0 - parts.axial[a] * 0.5) * ETA[a];
        l += wedge(&parts.theta[a], &hodge_dual(&combo, &fr.metric, o));
    }
    l = l * -0.5;
    if mass != 0.0 {
        l += mass_term_at(fr, mass, o);
    }
    l
}

pub fn teleparallel_lagrangian(t: &TorsionForms, c: &Coframe, mass: f64) -> Density4 {
    let o = c.orientation();
    let form = t
        .field
        .zip(&c.frame_field(), move |_, th, fr| Ok(teleparallel_at(&fr, &decompose_at(&fr, &th), mass, o)));
    Density4::new(form, c.metric_field(), o)
}
