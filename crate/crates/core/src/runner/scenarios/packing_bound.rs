//! Standalone packing-witness runs (the lower-bound half of width-scan).

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::RunnerError;
use crate::family::detect::{calibrate_threshold, is_p_sweepout, is_sweepout, DEFAULT_MAX_REFINE};
use crate::models::{ball_packing, morse_direction_normalized, BallPacking, ModelDescriptor};
use crate::runner::{assert_into, Assertion, ExperimentConfig, Report, Scenario, Table};
use crate::sweepouts::{linear_sweepout, FamilyDescriptor};
use crate::widths::{ball_mass_bound, bent_packing_hints, packing_lower_bound, PackingCertificate};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PackingWitnessRow {
    pub p: usize,
    pub family: FamilyDescriptor,
    pub packing: BallPacking,
    pub certificate: Option<PackingCertificate>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PackingWitness {
    pub model: ModelDescriptor,
    pub alpha_hat: f64,
    pub rows: Vec<PackingWitnessRow>,
}

pub fn run(config: &ExperimentConfig) -> Result<Report, RunnerError> {
    let Scenario::PackingBound {
        model: model_desc,
        p_values,
        epsilon,
    } = &config.scenario
    else {
        unreachable!("dispatched by scenario");
    };
    let seed = config.seed;
    let model = model_desc.build()?;
    let field = morse_direction_normalized(model.complex(), seed)?;
    let threshold = calibrate_threshold(&field)?;

    let cal_model = match model_desc {
        ModelDescriptor::Torus { n, .. } => ModelDescriptor::Torus { n: *n, g: 27 }.build()?,
        other => other.build()?,
    };
    let cal_field = morse_direction_normalized(cal_model.complex(), seed)?;
    let cal_loop = linear_sweepout(&cal_field, 2)?;
    let cal_cert = is_sweepout(&cal_loop, DEFAULT_MAX_REFINE)?;
    let b = ball_mass_bound(
        &cal_loop,
        &cal_cert,
        &[0.35, 0.6],
        &[0.3, 0.2, 0.15, 0.1],
        36,
    )?;
    let alpha_hat = b.alpha_hat;

    let mut assertions: Vec<Assertion> = Vec::new();
    let mut rows = Vec::new();
    for &p in p_values {
        let packing = ball_packing(model.complex(), p)?;
        let bent = super::bent_polynomial(&model, model_desc, &field, p, *epsilon, packing.radius)?;
        let detection = is_p_sweepout(&bent.family, p, threshold.value, DEFAULT_MAX_REFINE)?;
        let fdim = bent.family.complex.as_ref().expect("mesh").dim();
        let pack_threshold = alpha_hat / 3.0 * packing.radius.powi(fdim as i32 - 1);
        let hints = bent_packing_hints(
            &field,
            &bent.bend,
            &bent.family,
            &packing,
            pack_threshold,
        )?;
        let certificate = match packing_lower_bound(
            &bent.family,
            &detection,
            &packing,
            alpha_hat,
            &hints,
            seed ^ (p as u64) << 16,
        ) {
            Ok(c) => Some(c),
            Err(crate::error::WidthError::NoWitness(_)) => None,
            Err(e) => return Err(e.into()),
        };
        assert_into(
            &mut assertions,
            &format!("packing-witness-p{p}"),
            certificate.is_some(),
            certificate
                .as_ref()
                .map(|c| format!("bound {:.5}", c.bound))
                .unwrap_or_else(|| "no witness within budget".into()),
        );
        rows.push(PackingWitnessRow {
            p,
            family: bent.descriptor,
            packing,
            certificate,
        });
    }

    let table = Table {
        name: "packing".into(),
        columns: vec![
            "p".into(),
            "radius".into(),
            "threshold".into(),
            "bound".into(),
            "witness_found".into(),
            "provenance".into(),
        ],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    json!(r.p),
                    json!(r.packing.radius),
                    json!(r.certificate.as_ref().map(|c| c.threshold)),
                    json!(r.certificate.as_ref().map(|c| c.bound)),
                    json!(r.certificate.is_some()),
                    json!("measured"),
                ]
            })
            .collect(),
    };
    let witness = PackingWitness {
        model: model_desc.clone(),
        alpha_hat,
        rows,
    };
    Ok(Report {
        scenario: config.scenario_name().into(),
        config: config.clone(),
        assertions,
        tables: vec![table],
        witnesses: serde_json::to_value(witness)?,
    })
}
