//! Degree, cup-ring and restriction checks: level sweeps register degree
//! one on torus and sphere models, confined loops are trivial, degrees
//! survive rotation and refinement, projective rings satisfy λ^p ≠ 0 and
//! λ^(p+1) = 0, the parameter-torus ring multiplies to the top class, and
//! restricted (p+1)-families still detect p.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::chain::Mod2Chain;
use crate::error::RunnerError;
use crate::family::degree::loop_degree;
use crate::family::detect::{
    calibrate_threshold, is_sweepout, restrict_and_detect, DEFAULT_MAX_REFINE,
};
use crate::models::{
    level_cycle, morse_direction_normalized, ModelDescriptor,
};
use crate::param::cohomology::CellTopology;
use crate::param::gf2::xor_merge;
use crate::param::{projective_space, torus_param};
use crate::runner::{assert_into, Assertion, ExperimentConfig, Report, Scenario, Table};
use crate::sweepouts::{linear_sweepout, polynomial_sweepout_at};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegreeRow {
    pub model: ModelDescriptor,
    pub direction_seed: u64,
    pub degree: u8,
    pub rotated_degree: u8,
    pub refined_degree: u8,
    pub confined_degree: u8,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingRow {
    pub p: usize,
    pub lambda_on_generator: u8,
    pub power_p_nonzero: bool,
    pub power_p1_zero: bool,
    /// Support size of the deck cocycle, for re-verification.
    pub lambda_support: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RestrictionRow {
    pub p: usize,
    pub domain_level: usize,
    pub eps: f64,
    pub detected: bool,
    pub y_cells: usize,
    pub z_cells: usize,
    pub z_degrees: Vec<u8>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectionWitness {
    pub degree_rows: Vec<DegreeRow>,
    pub ring_rows: Vec<RingRow>,
    pub torus_ring_top_nonzero: bool,
    pub restriction_rows: Vec<RestrictionRow>,
}

pub fn run(config: &ExperimentConfig) -> Result<Report, RunnerError> {
    let Scenario::DetectionSuite {
        torus_g,
        sphere_g,
        max_p,
        restriction_ps,
    } = &config.scenario
    else {
        unreachable!("dispatched by scenario");
    };
    let seed = config.seed;
    let mut assertions: Vec<Assertion> = Vec::new();

    // degree checks per model
    let models: Vec<(ModelDescriptor, u64)> = vec![
        (ModelDescriptor::Torus { n: 1, g: *torus_g }, seed ^ 1),
        (
            ModelDescriptor::Torus {
                n: 2,
                g: (*torus_g / 2).max(3),
            },
            seed ^ 2,
        ),
        (ModelDescriptor::Sphere { d: 2, g: *sphere_g }, seed ^ 3),
        (
            ModelDescriptor::Sphere {
                d: 3,
                g: (*sphere_g / 2).max(3),
            },
            seed ^ 4,
        ),
    ];
    let mut degree_rows = Vec::new();
    for (desc, dseed) in &models {
        let model = desc.build()?;
        let field = morse_direction_normalized(model.complex(), *dseed)?;
        let fam = linear_sweepout(&field, 2)?;
        let sweep = is_sweepout(&fam, DEFAULT_MAX_REFINE)?;

        // explicit value loop for rotation/refinement invariance
        let n = 27usize;
        let values: Result<Vec<Mod2Chain>, _> = (0..n)
            .map(|i| fam.chain_at(&[i as f64 / n as f64]))
            .collect();
        let values = values?;
        let base = loop_degree(&values)?;
        let rotated: Vec<Mod2Chain> = (0..n).map(|i| values[(i + 7) % n].clone()).collect();
        let rotated_degree = loop_degree(&rotated)?;
        let fine: Result<Vec<Mod2Chain>, _> = (0..3 * n)
            .map(|i| fam.chain_at(&[i as f64 / (3 * n) as f64]))
            .collect();
        let refined_degree = loop_degree(&fine?)?;

        // confined loop: perturb one fixed cycle by small square boundaries
        let mid = level_cycle(&field, 0.12345)?;
        let complex = model.complex();
        let mut confined = vec![mid.clone()];
        for c in [0usize, 3, 11] {
            let cell = c % complex.cell_count(complex.dim());
            let square = Mod2Chain::from_cells(complex, complex.dim(), [cell])?;
            confined.push(mid.add(&square.boundary()?)?);
            confined.push(mid.clone());
        }
        let confined_degree = loop_degree(&confined)?;

        let row = DegreeRow {
            model: desc.clone(),
            direction_seed: *dseed,
            degree: sweep.degree,
            rotated_degree,
            refined_degree,
            confined_degree,
        };
        assert_into(
            &mut assertions,
            &format!("sweep-degree-one-{}", model.complex().id()),
            row.degree == 1 && base == 1,
            format!("family degree {} explicit loop {}", row.degree, base),
        );
        assert_into(
            &mut assertions,
            &format!("degree-invariance-{}", model.complex().id()),
            row.rotated_degree == base && row.refined_degree == base,
            format!(
                "rotated {} refined {}",
                row.rotated_degree, row.refined_degree
            ),
        );
        assert_into(
            &mut assertions,
            &format!("confined-loop-trivial-{}", model.complex().id()),
            row.confined_degree == 0,
            format!("degree {}", row.confined_degree),
        );
        degree_rows.push(row);
    }

    // projective cup rings
    let mut ring_rows = Vec::new();
    for p in 1..=*max_p {
        let (rp, gamma) = projective_space(p, 1)?;
        let topo = CellTopology::new(rp);
        let lambda = topo.deck_cocycle().expect("antipodal quotient");
        let mut edge_set = Vec::new();
        for w in gamma.windows(2) {
            let e = topo
                .sc
                .id_of(1, &[w[0], w[1]])
                .expect("generator edge in complex");
            edge_set = xor_merge(&edge_set, &[e]);
        }
        let e_close = topo
            .sc
            .id_of(1, &[gamma[gamma.len() - 1], gamma[0]])
            .expect("closing edge");
        edge_set = xor_merge(&edge_set, &[e_close]);
        let lambda_on_gamma = topo.pair(&lambda, &edge_set);
        let power_p = topo.cup_power(&lambda, p, None);
        let power_p_nonzero = !power_p.support.is_empty() && topo.class_nonzero(&power_p);
        let power_p1 = topo.cup_power(&lambda, p + 1, None);
        let power_p1_zero = power_p1.support.is_empty() || topo.is_coboundary(&power_p1);
        assert_into(
            &mut assertions,
            &format!("projective-ring-p{p}"),
            lambda_on_gamma == 1 && power_p_nonzero && power_p1_zero,
            format!(
                "λ(γ)={lambda_on_gamma}, λ^{p}≠0: {power_p_nonzero}, λ^{}: zero {power_p1_zero}",
                p + 1
            ),
        );
        ring_rows.push(RingRow {
            p,
            lambda_on_generator: lambda_on_gamma,
            power_p_nonzero,
            power_p1_zero,
            lambda_support: lambda.support.len(),
        });
    }

    // parameter-torus ring: product of the degree-1 generators tops out
    let torus_ring_top_nonzero = {
        let topo = CellTopology::new(torus_param(2, 1)?);
        let basis = topo.h1_basis();
        let a = topo.lift_cocycle(&basis, &[1, 0])?;
        let b = topo.lift_cocycle(&basis, &[0, 1])?;
        let ab = topo.cup(&a, &b, None);
        topo.class_nonzero(&ab)
    };
    assert_into(
        &mut assertions,
        "parameter-torus-ring-top",
        torus_ring_top_nonzero,
        "product of degree-1 generators generates H²".into(),
    );

    // restrictions: (p+1)-family minus its trivial neighborhood detects p
    let mut restriction_rows = Vec::new();
    for &p in restriction_ps {
        let torus = ModelDescriptor::Torus { n: 1, g: *torus_g }.build()?;
        let field = morse_direction_normalized(torus.complex(), seed ^ 0x6e57)?;
        let domain_level = if p <= 2 { 2 } else { 1 };
        let fam = polynomial_sweepout_at(&field, p + 1, domain_level)?;
        let threshold = calibrate_threshold(&field)?;
        let trivial = vec![
            Mod2Chain::empty(torus.complex(), 1),
            level_cycle(&field, -0.97)?,
            level_cycle(&field, 0.97)?,
        ];
        let eps = threshold.value.min(0.05);
        let outcome = restrict_and_detect(&fam, &trivial, eps, p, true, DEFAULT_MAX_REFINE)?;
        assert_into(
            &mut assertions,
            &format!("restriction-detects-p{p}"),
            outcome.detection.detected,
            format!(
                "Y {} cells, Z {} cells, excluded-part degrees {:?}",
                outcome.y_cells, outcome.z_cells, outcome.z_loop_degrees
            ),
        );
        // the restriction argument's hypothesis-conclusion implication:
        // when every sampled loop of Z is trivial, detection must hold
        if outcome.z_loop_degrees.iter().all(|&d| d == 0) {
            assert_into(
                &mut assertions,
                &format!("restriction-implication-p{p}"),
                outcome.detection.detected,
                "trivial excluded part forces detection of the restriction".into(),
            );
        }
        restriction_rows.push(RestrictionRow {
            p,
            domain_level,
            eps,
            detected: outcome.detection.detected,
            y_cells: outcome.y_cells,
            z_cells: outcome.z_cells,
            z_degrees: outcome.z_loop_degrees,
        });
    }

    let table = Table {
        name: "detection".into(),
        columns: vec!["check".into(), "value".into(), "pass".into()],
        rows: assertions
            .iter()
            .map(|a| vec![json!(a.name), json!(a.detail), json!(a.passed)])
            .collect(),
    };
    let witness = DetectionWitness {
        degree_rows,
        ring_rows,
        torus_ring_top_nonzero,
        restriction_rows,
    };
    Ok(Report {
        scenario: config.scenario_name().into(),
        config: config.clone(),
        assertions,
        tables: vec![table],
        witnesses: serde_json::to_value(witness)?,
    })
}
