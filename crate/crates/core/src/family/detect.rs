//! Sweepout and p-sweepout detection.
//!
//! A loop of cycles is a sweepout when its loop degree is 1.  A family
//! over a parameter complex X detects level p when the cocycle λ
//! reconstructed from loop degrees on an H₁(X) basis has nonzero p-th cup
//! power.  Values of λ on a basis determine the class uniquely over Z₂,
//! so detection reduces to finitely many degree evaluations plus cup
//! algebra on the triangulated domain.

use serde::{Deserialize, Serialize};

use crate::chain::flat_norm::{flat_norm, flat_norm_exhaustive};
use crate::chain::Mod2Chain;
use crate::error::{ChainError, FamilyError};
use crate::family::degree::{loop_degree_refined, LoopDegreeReport};
use crate::family::{Backend, ChainFamily, Domain};
use crate::models::ScalarField;
use crate::param::cohomology::{CellTopology, LoopWalk};

pub const DEFAULT_MAX_REFINE: usize = 5;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum DetectionCertificate {
    /// λ was lifted from loop degrees on an H₁ basis and its cup power
    /// tested on the triangulated domain.
    Cohomological,
    /// The domain is a projective space too large to triangulate; the
    /// generator loop degree was computed and the ring fact λ^p ≠ 0 on
    /// RP^p is relied on (verified computationally for p ≤ 4).
    Structural,
    /// Declared family form (Crofton backend: zero sets of harmonic
    /// combinations over projective coefficient space).
    DeclaredForm,
}

/// Serializable outcome of a p-sweepout test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectionReport {
    pub p: usize,
    pub detected: bool,
    /// Loop degree per H₁ generator (the values that pin down λ).
    pub lambda_evals: Vec<u8>,
    /// Edges in the support of the lifted cocycle λ.
    pub lambda_support: Vec<u32>,
    pub fineness_used: f64,
    pub threshold: f64,
    pub certificate: DetectionCertificate,
}

/// Half the minimal positive flat-norm gap among a canonical finite set
/// of cycles (the empty cycle and a few well-separated level cycles).
/// Used as the working threshold wherever the theory only asserts the
/// existence of a small-enough constant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub value: f64,
    pub cycles_used: usize,
    pub min_gap: f64,
}

pub fn calibrate_threshold(field: &ScalarField) -> Result<ThresholdReport, FamilyError> {
    let complex = field.complex();
    let lo = field.min_center();
    let hi = field.max_center();
    let mut cycles = vec![Mod2Chain::empty(complex, complex.dim() - 1)];
    for frac in [0.3, 0.5, 0.7] {
        let t = lo + (hi - lo) * frac + 1.3e-9;
        cycles.push(crate::models::level_cycle(field, t)?);
    }
    let mut min_gap = f64::INFINITY;
    for i in 0..cycles.len() {
        for j in (i + 1)..cycles.len() {
            let diff = cycles[i].add(&cycles[j])?;
            if diff.is_empty() {
                continue;
            }
            let d = match flat_norm(&diff) {
                Ok(f) => f.cost,
                Err(ChainError::EssentialCycle) => flat_norm_exhaustive(&diff)?.cost,
                Err(e) => return Err(e.into()),
            };
            if d > 0.0 {
                min_gap = min_gap.min(d);
            }
        }
    }
    Ok(ThresholdReport {
        value: 0.5 * min_gap,
        cycles_used: cycles.len(),
        min_gap,
    })
}

/// Closed parameter segments of the circle domain at its own level.
fn circle_segments(level: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let n = 3usize.pow(level as u32);
    (0..n)
        .map(|i| {
            (
                vec![i as f64 / n as f64],
                vec![(i + 1) as f64 / n as f64],
            )
        })
        .collect()
}

/// Generator loop of π₁ of projective space, as coherent coordinate
/// segments on the cube boundary: axis legs from the origin corner to the
/// opposite corner (antipodal endpoints close the loop in the quotient).
pub fn projective_generator_segments(m: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut segments = Vec::with_capacity(m);
    let mut pos = vec![0.0f64; m];
    for a in 0..m {
        let from = pos.clone();
        pos[a] = 1.0;
        segments.push((from, pos.clone()));
    }
    segments
}

/// Is a circle-parametrized family a sweepout?
pub fn is_sweepout(
    family: &ChainFamily,
    max_refine: usize,
) -> Result<LoopDegreeReport, FamilyError> {
    if family.backend != Backend::Mesh {
        return Err(FamilyError::WrongBackend("crofton", "mesh"));
    }
    let level = match &family.domain {
        Domain::Complex(x) if x.ambient_dim() == 1 => x.level(),
        _ => return Err(FamilyError::NotALoop),
    };
    loop_degree_refined(family, &circle_segments(level), max_refine)
}

fn walk_degree(
    family: &ChainFamily,
    topo: &CellTopology,
    walk: &LoopWalk,
    max_refine: usize,
) -> Result<LoopDegreeReport, FamilyError> {
    let segments: Vec<(Vec<f64>, Vec<f64>)> = walk
        .steps
        .iter()
        .map(|&(e, fwd)| {
            let (lo, hi) = topo.edge_coords(e as usize);
            if fwd {
                (lo, hi)
            } else {
                (hi, lo)
            }
        })
        .collect();
    loop_degree_refined(family, &segments, max_refine)
}

/// p-sweepout test on an explicit domain topology (the family's own
/// domain or a subcomplex of it).
pub fn detect_on(
    family: &ChainFamily,
    topo: &CellTopology,
    p: usize,
    threshold: f64,
    max_refine: usize,
) -> Result<DetectionReport, FamilyError> {
    if family.backend != Backend::Mesh {
        return Err(FamilyError::WrongBackend("crofton", "mesh"));
    }
    let basis = topo.h1_basis();
    let mut evals = Vec::with_capacity(basis.len());
    let mut fineness_used = 0.0f64;
    for b in &basis {
        let mut bit = 0u8;
        for walk in topo.realize_loops(&b.support) {
            let report = walk_degree(family, topo, &walk, max_refine)?;
            bit ^= report.degree;
            fineness_used = fineness_used.max(report.fineness);
        }
        evals.push(bit);
    }
    let lambda = topo.lift_cocycle(&basis, &evals)?;
    let detected = if lambda.support.is_empty() {
        false
    } else {
        let power = topo.cup_power(&lambda, p, None);
        !power.support.is_empty() && topo.class_nonzero(&power)
    };
    Ok(DetectionReport {
        p,
        detected,
        lambda_evals: evals,
        lambda_support: lambda.support,
        fineness_used,
        threshold,
        certificate: DetectionCertificate::Cohomological,
    })
}

/// Full p-sweepout test: cohomological when the domain complex is
/// explicit, structural for implicit projective domains.
pub fn is_p_sweepout(
    family: &ChainFamily,
    p: usize,
    threshold: f64,
    max_refine: usize,
) -> Result<DetectionReport, FamilyError> {
    match (&family.backend, &family.domain) {
        (Backend::Crofton, Domain::Projective { p: dom_p }) => Ok(DetectionReport {
            p,
            detected: p <= *dom_p,
            lambda_evals: Vec::new(),
            lambda_support: Vec::new(),
            fineness_used: 0.0,
            threshold,
            certificate: DetectionCertificate::DeclaredForm,
        }),
        (Backend::Mesh, Domain::Complex(x)) => {
            let topo = CellTopology::new((**x).clone());
            detect_on(family, &topo, p, threshold, max_refine)
        }
        (Backend::Mesh, Domain::Projective { p: dom_p }) => {
            if p > *dom_p {
                return Ok(DetectionReport {
                    p,
                    detected: false,
                    lambda_evals: Vec::new(),
                    lambda_support: Vec::new(),
                    fineness_used: 0.0,
                    threshold,
                    certificate: DetectionCertificate::Structural,
                });
            }
            let segments = projective_generator_segments(*dom_p + 1);
            let report = loop_degree_refined(family, &segments, max_refine)?;
            Ok(DetectionReport {
                p,
                detected: report.degree == 1,
                lambda_evals: vec![report.degree],
                lambda_support: Vec::new(),
                fineness_used: report.fineness,
                threshold,
                certificate: DetectionCertificate::Structural,
            })
        }
        _ => Err(FamilyError::WrongBackend("mixed", "consistent")),
    }
}

/// Mass-concentration profile: for each radius, the sup of restricted
/// mass over sampled parameters and ball centers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConcentrationProfile {
    pub radii: Vec<f64>,
    pub sup_mass: Vec<f64>,
    /// Largest single facet weight: the resolution floor of the profile.
    pub facet_floor: f64,
    /// True when the profile at the smallest radius stays above 4× the
    /// floor: mass that refuses to spread (a fixed heavy cycle).
    pub flagged: bool,
}

pub fn mass_concentration(
    family: &ChainFamily,
    radii: &[f64],
    center_stride: usize,
) -> Result<ConcentrationProfile, FamilyError> {
    let x = family
        .domain
        .complex()
        .ok_or(FamilyError::WrongBackend("crofton", "mesh"))?;
    let complex = family
        .complex
        .as_ref()
        .ok_or(FamilyError::WrongBackend("crofton", "mesh"))?
        .clone();
    let n = complex.dim() - 1;
    let facet_floor = (0..complex.cell_count(n))
        .map(|f| complex.weight(n, f))
        .fold(0.0, f64::max);
    let values: Result<Vec<Mod2Chain>, FamilyError> = (0..x.cell_count(0))
        .map(|v| family.chain_at(&x.vertex_coords(v)))
        .collect();
    let values = values?;
    let centers: Vec<Vec<f64>> = (0..complex.cell_count(0))
        .step_by(center_stride.max(1))
        .map(|v| complex.vertex_position(v).to_vec())
        .collect();
    let mut sup_mass = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut sup = 0.0f64;
        for value in &values {
            for c in &centers {
                let m = value.restrict(|p| complex.distance(p, c) <= r).mass();
                sup = sup.max(m);
            }
        }
        sup_mass.push(sup);
    }
    let min_r_sup = radii
        .iter()
        .zip(&sup_mass)
        .min_by(|a, b| a.0.partial_cmp(b.0).unwrap())
        .map(|(_, &s)| s)
        .unwrap_or(0.0);
    Ok(ConcentrationProfile {
        radii: radii.to_vec(),
        sup_mass,
        facet_floor,
        flagged: min_r_sup > 4.0 * facet_floor,
    })
}

/// Outcome of the exclusion-restriction detection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RestrictionOutcome {
    pub y_cells: usize,
    pub z_cells: usize,
    pub detection: DetectionReport,
    /// Loop degrees of sampled H₁ generators of the excluded part Z
    /// (the hypothesis of the restriction argument: all zero).
    pub z_loop_degrees: Vec<u8>,
}

/// Exclude the flat-distance ε-neighborhood of a finite chain set from
/// the domain and test whether the restricted family still detects p.
pub fn restrict_and_detect(
    family: &ChainFamily,
    trivial_set: &[Mod2Chain],
    eps: f64,
    p: usize,
    check_excluded_part: bool,
    max_refine: usize,
) -> Result<RestrictionOutcome, FamilyError> {
    if trivial_set.is_empty() {
        return Err(FamilyError::Topology(
            crate::error::TopologyError::InvalidArgument("trivial set must be nonempty".into()),
        ));
    }
    let x = family
        .domain
        .complex()
        .ok_or(FamilyError::WrongBackend("crofton", "mesh"))?
        .clone();
    // flat distance from each vertex value to the trivial set
    let mut far = Vec::with_capacity(x.cell_count(0));
    for v in 0..x.cell_count(0) {
        let value = family.chain_at(&x.vertex_coords(v))?;
        let mut dist = f64::INFINITY;
        for t in trivial_set {
            let diff = value.add(t)?;
            if diff.is_empty() {
                dist = 0.0;
                break;
            }
            match flat_norm(&diff) {
                Ok(f) => dist = dist.min(f.cost),
                Err(ChainError::EssentialCycle) => {} // infinitely far in-class
                Err(e) => return Err(e.into()),
            }
        }
        far.push(dist >= eps);
    }
    let y = x.subcomplex_where(|v| far[v]);
    if y.total_cells() == 0 {
        return Err(FamilyError::EmptyRestriction);
    }
    let topo_y = CellTopology::new(y.clone());
    let detection = detect_on(family, &topo_y, p, eps, max_refine)?;

    let mut z_loop_degrees = Vec::new();
    let z = x.closure_complement(&y);
    if check_excluded_part && z.cell_count(1) > 0 {
        let topo_z = CellTopology::new(z.clone());
        for b in topo_z.h1_basis() {
            let mut bit = 0u8;
            for walk in topo_z.realize_loops(&b.support) {
                bit ^= walk_degree(family, &topo_z, &walk, max_refine)?.degree;
            }
            z_loop_degrees.push(bit);
        }
    }
    Ok(RestrictionOutcome {
        y_cells: y.total_cells(),
        z_cells: z.total_cells(),
        detection,
        z_loop_degrees,
    })
}
