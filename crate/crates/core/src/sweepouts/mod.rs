//! Constructors for the explicit families measured by the lab.
//!
//! * [`linear_sweepout`] — the one-parameter loop of sublevel boundaries
//!   θ ↦ ∂{f < -cot(θ/2)}, closing through the empty cycle.
//! * [`polynomial_sweepout`] — members ∂{P_a(f) < 0} over projective
//!   coefficient space; sign flips of P_a leave the mod-2 boundary fixed,
//!   so the antipodal symmetry is exact.
//! * [`harmonic_family`] — zero sets of spherical-harmonic combinations
//!   on S³ with Crofton mass evaluation.
//! * [`pushforward`] — transport through a [`bend::BendMap`], re-extracted
//!   as a region boundary on a finer grid.

pub mod bend;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bits::CellSet;
use crate::chain::Mod2Chain;
use crate::error::{FamilyError, ModelError};
use crate::family::{Backend, ChainFamily, Domain, ScalarFn};
use crate::models::{field_from_form, Model, ModelDescriptor, ScalarField};
use crate::param::{circle, projective_space};

/// Spherical harmonics on S³ of degree ≤ 2, as closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Harmonic {
    /// The constant function 1.
    Constant,
    /// Coordinate x_i.
    Coordinate(usize),
    /// x_i · x_j with i < j.
    Product(usize, usize),
    /// x_i² - x_(i+1)².
    DiffSquares(usize),
}

impl Harmonic {
    pub fn eval(&self, p: &[f64; 4]) -> f64 {
        match *self {
            Harmonic::Constant => 1.0,
            Harmonic::Coordinate(i) => p[i],
            Harmonic::Product(i, j) => p[i] * p[j],
            Harmonic::DiffSquares(i) => p[i] * p[i] - p[i + 1] * p[i + 1],
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Harmonic::Constant => 0,
            Harmonic::Coordinate(_) => 1,
            Harmonic::Product(..) | Harmonic::DiffSquares(_) => 2,
        }
    }
}

/// The full degree-≤2 harmonic basis on S³ (dimension 14: 1 constant,
/// 4 coordinates, 9 independent harmonic quadratics).
pub fn degree_two_basis() -> Vec<Harmonic> {
    let mut h = vec![Harmonic::Constant];
    for i in 0..4 {
        h.push(Harmonic::Coordinate(i));
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            h.push(Harmonic::Product(i, j));
        }
    }
    for i in 0..3 {
        h.push(Harmonic::DiffSquares(i));
    }
    h
}

/// The four coordinate functions only: every member is a great sphere.
pub fn coordinate_basis() -> Vec<Harmonic> {
    (0..4).map(Harmonic::Coordinate).collect()
}

/// Coefficients selecting the Clifford torus x₁²+x₂²-x₃²-x₄² in
/// [`degree_two_basis`] order.
pub fn clifford_coefficients() -> Vec<f64> {
    let basis = degree_two_basis();
    let mut a = vec![0.0; basis.len()];
    for (i, h) in basis.iter().enumerate() {
        match h {
            Harmonic::DiffSquares(0) => a[i] = 1.0,
            Harmonic::DiffSquares(1) => a[i] = 2.0,
            Harmonic::DiffSquares(2) => a[i] = 1.0,
            _ => {}
        }
    }
    a
}

/// Serializable family descriptor; building from it is deterministic.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyDescriptor {
    LinearSweepout {
        model: ModelDescriptor,
        form: crate::models::ClosedForm,
        circle_level: usize,
    },
    Polynomial {
        model: ModelDescriptor,
        form: crate::models::ClosedForm,
        p: usize,
        domain_level: usize,
    },
    Pushforward {
        inner: Box<FamilyDescriptor>,
        bend_level: usize,
        epsilon: f64,
        refine: usize,
    },
    Harmonic {
        harmonics: Vec<Harmonic>,
    },
}

pub fn build_family(d: &FamilyDescriptor) -> Result<ChainFamily, FamilyError> {
    match d {
        FamilyDescriptor::LinearSweepout {
            model,
            form,
            circle_level,
        } => {
            let m = model.build()?;
            let f = field_from_form(m.complex(), form.clone())?;
            linear_sweepout(&f, *circle_level)
        }
        FamilyDescriptor::Polynomial {
            model,
            form,
            p,
            domain_level,
        } => {
            let m = model.build()?;
            let f = field_from_form(m.complex(), form.clone())?;
            polynomial_sweepout_at(&f, *p, *domain_level)
        }
        FamilyDescriptor::Pushforward {
            inner,
            bend_level,
            epsilon,
            refine,
        } => {
            let base = build_family(inner)?;
            let model = family_model(inner)?;
            let map = bend::BendMap::new(&model, *bend_level, *epsilon)?;
            pushforward(&map, &base, *refine)
        }
        FamilyDescriptor::Harmonic { harmonics } => harmonic_family(harmonics.clone()),
    }
}

fn family_model(d: &FamilyDescriptor) -> Result<Model, FamilyError> {
    match d {
        FamilyDescriptor::LinearSweepout { model, .. }
        | FamilyDescriptor::Polynomial { model, .. } => Ok(model.build()?),
        FamilyDescriptor::Pushforward { inner, .. } => family_model(inner),
        FamilyDescriptor::Harmonic { .. } => Err(FamilyError::WrongBackend("crofton", "mesh")),
    }
}

/// Negative cotangent threshold of the level sweep: t ∈ [0,1] is the loop
/// coordinate, θ = 2πt.  Unwrapped on purpose: t = 0 gives -∞ (empty
/// region) and t = 1 gives +∞ (full region), so the lift of the loop
/// closes through a complementary pair at the wrap junction.
fn sweep_threshold(t: f64) -> f64 {
    if t <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if t >= 1.0 {
        return f64::INFINITY;
    }
    let half = std::f64::consts::PI * t;
    -half.cos() / half.sin()
}

/// Sublevel-boundary loop over a circle domain.
pub fn linear_sweepout(
    field: &ScalarField,
    circle_level: usize,
) -> Result<ChainFamily, FamilyError> {
    let complex = Arc::clone(field.complex());
    let form = field
        .form()
        .ok_or_else(|| {
            FamilyError::Model(ModelError::InvalidArgument(
                "sweepout field needs a closed form".into(),
            ))
        })?
        .clone();
    let dom = Arc::new(circle(circle_level)?);
    let centers: Arc<Vec<f64>> = Arc::new(field.center_values().to_vec());
    let cx = Arc::clone(&complex);

    let region_form = form.clone();
    let member_region: crate::family::RegionRule = Arc::new(move |coeffs, point| {
        let thr = sweep_threshold(coeffs[0]);
        Ok(region_form.eval(point) < thr)
    });

    let centers_rule = Arc::clone(&centers);
    let member_region_chain: crate::family::ChainRule = Arc::new(move |coeffs| {
        let thr = sweep_threshold(coeffs[0]);
        let dim = cx.dim();
        let mut cells = CellSet::empty(cx.cell_count(dim));
        for (c, &v) in centers_rule.iter().enumerate() {
            if v == thr {
                return Err(FamilyError::DegenerateParameter(coeffs.to_vec()));
            }
            if v < thr {
                cells.insert(c);
            }
        }
        Ok(Mod2Chain::from_set(&cx, dim, cells))
    });

    Ok(ChainFamily {
        backend: Backend::Mesh,
        domain: Domain::Complex(dom),
        level: 1,
        complex: Some(complex),
        param_map: Arc::new(|c| vec![c[0]]),
        member_region_chain: Some(member_region_chain),
        member_region: Some(member_region),
        member_scalar: None,
    })
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &a| acc * t + a)
}

/// Members ∂{x : P_a(f(x)) < 0} over projective coefficient space RP^p,
/// with the domain model at its base subdivision.
pub fn polynomial_sweepout(field: &ScalarField, p: usize) -> Result<ChainFamily, FamilyError> {
    polynomial_sweepout_at(field, p, 1)
}

/// As [`polynomial_sweepout`] with the cube boundary subdivided to the
/// requested level.  The domain complex is explicit for p ≤ 4 and
/// implicit beyond, where the triangulated model would be astronomically
/// large.
pub fn polynomial_sweepout_at(
    field: &ScalarField,
    p: usize,
    domain_level: usize,
) -> Result<ChainFamily, FamilyError> {
    if p == 0 {
        return Err(FamilyError::Model(ModelError::InvalidArgument(
            "p must be >= 1".into(),
        )));
    }
    let complex = Arc::clone(field.complex());
    let form = field
        .form()
        .ok_or_else(|| {
            FamilyError::Model(ModelError::InvalidArgument(
                "polynomial field needs a closed form".into(),
            ))
        })?
        .clone();
    let domain = if p <= 4 {
        Domain::Complex(Arc::new(projective_space(p, domain_level)?.0))
    } else {
        Domain::Projective { p }
    };
    let centers: Arc<Vec<f64>> = Arc::new(field.center_values().to_vec());
    let cx = Arc::clone(&complex);

    let region_form = form.clone();
    let member_region: crate::family::RegionRule = Arc::new(move |coeffs, point| {
        let v = horner(coeffs, region_form.eval(point));
        if v == 0.0 {
            return Err(FamilyError::DegenerateParameter(coeffs.to_vec()));
        }
        Ok(v < 0.0)
    });

    let centers_rule = Arc::clone(&centers);
    let member_region_chain: crate::family::ChainRule = Arc::new(move |coeffs| {
        let dim = cx.dim();
        let mut cells = CellSet::empty(cx.cell_count(dim));
        for (c, &fv) in centers_rule.iter().enumerate() {
            let v = horner(coeffs, fv);
            if v == 0.0 {
                return Err(FamilyError::DegenerateParameter(coeffs.to_vec()));
            }
            if v < 0.0 {
                cells.insert(c);
            }
        }
        Ok(Mod2Chain::from_set(&cx, dim, cells))
    });

    Ok(ChainFamily {
        backend: Backend::Mesh,
        domain,
        level: p,
        complex: Some(complex),
        param_map: Arc::new(|c| c.iter().map(|x| 2.0 * x - 1.0).collect()),
        member_region_chain: Some(member_region_chain),
        member_region: Some(member_region),
        member_scalar: None,
    })
}

/// Zero-set family of harmonic combinations on S³ (Crofton backend).
pub fn harmonic_family(harmonics: Vec<Harmonic>) -> Result<ChainFamily, FamilyError> {
    if harmonics.is_empty() {
        return Err(FamilyError::Model(ModelError::InvalidArgument(
            "need at least one harmonic".into(),
        )));
    }
    for (i, h) in harmonics.iter().enumerate() {
        if harmonics[i + 1..].contains(h) {
            return Err(FamilyError::Model(ModelError::InvalidArgument(
                "harmonics must be linearly independent (duplicate entry)".into(),
            )));
        }
        if *h == Harmonic::Constant && i != 0 {
            return Err(FamilyError::Model(ModelError::InvalidArgument(
                "the constant must come first".into(),
            )));
        }
    }
    let p = harmonics.len() - 1;
    let hs = Arc::new(harmonics);
    let member_scalar: crate::family::ScalarRule = Arc::new(move |coeffs| {
        if coeffs.iter().all(|&a| a == 0.0) {
            return Err(FamilyError::DegenerateParameter(coeffs.to_vec()));
        }
        let hs = Arc::clone(&hs);
        let a: Vec<f64> = coeffs.to_vec();
        let f: ScalarFn = Arc::new(move |p: &[f64; 4]| {
            hs.iter().zip(&a).map(|(h, &ai)| ai * h.eval(p)).sum()
        });
        Ok(f)
    });
    Ok(ChainFamily {
        backend: Backend::Crofton,
        domain: Domain::Projective { p },
        level: p,
        complex: None,
        param_map: Arc::new(|c| c.iter().map(|x| 2.0 * x - 1.0).collect()),
        member_region_chain: None,
        member_region: None,
        member_scalar: Some(member_scalar),
    })
}

/// Largest polynomial degree among the harmonics: each member restricted
/// to a great circle is a trigonometric polynomial of that degree, so it
/// crosses zero at most 2·degree times per line.
pub fn harmonic_max_degree(harmonics: &[Harmonic]) -> usize {
    harmonics.iter().map(|h| h.degree()).max().unwrap_or(0)
}

/// Transport a region family through a bend map and re-extract boundaries
/// on a grid `refine` ternary levels below the bend grid.
pub fn pushforward(
    map: &bend::BendMap,
    family: &ChainFamily,
    refine: usize,
) -> Result<ChainFamily, FamilyError> {
    if refine == 0 {
        return Err(FamilyError::Model(ModelError::InvalidArgument(
            "pushforward needs at least one refinement level".into(),
        )));
    }
    let inner_region = family
        .member_region
        .as_ref()
        .ok_or(FamilyError::WrongBackend("crofton", "mesh"))?
        .clone();
    let fine = map.fine_model(refine)?;
    let fine_complex = Arc::clone(fine.complex());

    let map_rule = map.clone();
    let region_inner = inner_region.clone();
    let member_region: crate::family::RegionRule = Arc::new(move |coeffs, point| {
        let pre = map_rule.preimage(point);
        region_inner(coeffs, &pre)
    });

    let map_chain = map.clone();
    let cx = Arc::clone(&fine_complex);
    let member_region_chain: crate::family::ChainRule = Arc::new(move |coeffs| {
        let dim = cx.dim();
        let mut cells = CellSet::empty(cx.cell_count(dim));
        for c in 0..cx.cell_count(dim) {
            let pre = map_chain.preimage(cx.barycenter(dim, c));
            if inner_region(coeffs, &pre)? {
                cells.insert(c);
            }
        }
        Ok(Mod2Chain::from_set(&cx, dim, cells))
    });

    Ok(ChainFamily {
        backend: Backend::Mesh,
        domain: family.domain.clone(),
        level: family.level,
        complex: Some(fine_complex),
        param_map: Arc::clone(&family.param_map),
        member_region_chain: Some(member_region_chain),
        member_region: Some(member_region),
        member_scalar: None,
    })
}
