//! Width scan: upper estimates and packing lower bounds across a p range,
//! scaling fits on both, Weyl-ratio monitoring and the monotonicity and
//! near-equality flags.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::RunnerError;
use crate::family::detect::{calibrate_threshold, is_p_sweepout, is_sweepout, DEFAULT_MAX_REFINE};
use crate::models::{ball_packing, morse_direction_normalized, BallPacking, ModelDescriptor};
use crate::runner::{assert_into, Assertion, ExperimentConfig, Report, Scenario, Table};
use crate::sweepouts::{build_family, linear_sweepout, FamilyDescriptor};
use crate::widths::{
    ball_mass_bound, bent_packing_hints, monotonicity_and_equality, packing_lower_bound,
    scaling_fit, spread_root_hints, upper_estimate, CroftonBudget, PackingCertificate,
    UpperEstimate,
};

struct ScanRow {
    p: usize,
    upper: f64,
    upper_diagnostic: f64,
    lower: Option<f64>,
    weyl_upper: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WidthScanWitness {
    pub model: ModelDescriptor,
    pub alpha_hat: f64,
    pub alpha_values: Vec<f64>,
    pub working_threshold: f64,
    pub per_p: Vec<PerP>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerP {
    pub p: usize,
    pub bend_level: usize,
    pub refine: usize,
    pub epsilon: f64,
    pub family: FamilyDescriptor,
    pub upper: UpperEstimate,
    pub packing: BallPacking,
    pub certificate: Option<PackingCertificate>,
    pub detected: bool,
}

pub fn run(config: &ExperimentConfig) -> Result<Report, RunnerError> {
    let Scenario::WidthScan {
        model: model_desc,
        p_values,
        samples,
        polish,
        epsilon,
        slope_window,
        weyl_max_ratio,
    } = &config.scenario
    else {
        unreachable!("dispatched by scenario");
    };
    let seed = config.seed;
    let model = model_desc.build()?;
    let dim = model.complex().dim();
    let inv_dim = 1.0 / dim as f64;
    let field = morse_direction_normalized(model.complex(), seed)?;
    let threshold = calibrate_threshold(&field)?;

    // α̂ calibration from a 1-sweepout on a finer mesh, several centers
    let cal_model = match model_desc {
        ModelDescriptor::Torus { n, .. } => ModelDescriptor::Torus { n: *n, g: 27 }.build()?,
        other => other.build()?,
    };
    let cal_field = morse_direction_normalized(cal_model.complex(), seed)?;
    let cal_loop = linear_sweepout(&cal_field, 2)?;
    let cal_cert = is_sweepout(&cal_loop, DEFAULT_MAX_REFINE)?;
    let radii = [0.3, 0.25, 0.2, 0.15, 0.1];
    let centers: [&[f64]; 4] = [
        &[0.2, 0.3],
        &[0.55, 0.7],
        &[0.85, 0.15],
        &[0.4, 0.9],
    ];
    let mut alpha_values = Vec::new();
    for c in centers {
        let b = ball_mass_bound(&cal_loop, &cal_cert, c, &radii, 36)?;
        alpha_values.push(b.alpha_hat);
    }
    let alpha_hat = alpha_values.iter().sum::<f64>() / alpha_values.len() as f64;

    let mut assertions: Vec<Assertion> = Vec::new();
    let alpha_spread_ok = alpha_values
        .iter()
        .all(|a| (a - alpha_hat).abs() <= 0.25 * alpha_hat);
    assert_into(
        &mut assertions,
        "alpha-calibration-stable",
        alpha_spread_ok,
        format!("alpha_hat {alpha_hat:.4}, per-center {alpha_values:?} (±25% of the mean)"),
    );

    let mut per_p = Vec::new();
    let mut uppers = Vec::new();
    let mut lowers = Vec::new();
    let mut rows: Vec<ScanRow> = Vec::new();
    for &p in p_values {
        let packing = ball_packing(model.complex(), p)?;
        let bent = super::bent_polynomial(&model, model_desc, &field, p, *epsilon, packing.radius)?;
        let detection = is_p_sweepout(&bent.family, p, threshold.value, DEFAULT_MAX_REFINE)?;

        // heavy-member hints: spread roots over the effective inner values
        let fine = bent.family.complex.as_ref().expect("mesh family");
        let fdim = fine.dim();
        let effective: Vec<f64> = (0..fine.cell_count(fdim))
            .map(|c| {
                field
                    .eval(&bent.bend.preimage(fine.barycenter(fdim, c)))
                    .expect("closed form")
            })
            .collect();
        let mut hints = spread_root_hints(&effective, p, 12, seed ^ p as u64);
        let pack_threshold = alpha_hat / 3.0 * packing.radius.powi(fdim as i32 - 1);
        hints.extend(bent_packing_hints(
            &field,
            &bent.bend,
            &bent.family,
            &packing,
            pack_threshold,
        )?);

        let upper = upper_estimate(
            &bent.family,
            &detection,
            *samples,
            *polish,
            seed ^ (p as u64) << 8,
            &CroftonBudget::default(),
            &hints,
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
            &format!("detected-p{p}"),
            detection.detected,
            format!("certificate {:?}", detection.certificate),
        );
        assert_into(
            &mut assertions,
            &format!("packing-witness-p{p}"),
            certificate.is_some(),
            certificate
                .as_ref()
                .map(|c| format!("bound {:.5} after {} rounds", c.bound, c.search_rounds))
                .unwrap_or_else(|| "no witness within budget".into()),
        );
        if let Some(c) = &certificate {
            assert_into(
                &mut assertions,
                &format!("lower-below-upper-p{p}"),
                c.bound <= upper.value * 1.02,
                format!("lower {:.5} vs upper {:.5}", c.bound, upper.value),
            );
        }
        uppers.push((p, upper.value));
        if let Some(c) = &certificate {
            lowers.push((p, c.bound));
        }
        rows.push(ScanRow {
            p,
            upper: upper.value,
            upper_diagnostic: upper.diagnostic,
            lower: certificate.as_ref().map(|c| c.bound),
            weyl_upper: upper.value * (p as f64).powf(-inv_dim),
        });
        per_p.push(PerP {
            p,
            bend_level: bent.k,
            refine: bent.refine,
            epsilon: *epsilon,
            family: bent.descriptor,
            upper,
            packing,
            certificate,
            detected: detection.detected,
        });
    }

    // scaling fits and Weyl ratios
    let up_fit = scaling_fit(&uppers, inv_dim)?;
    assert_into(
        &mut assertions,
        "upper-slope-in-window",
        up_fit.slope >= slope_window.0 && up_fit.slope <= slope_window.1,
        format!(
            "slope {:.4} (stderr {:.4}) vs window [{}, {}]",
            up_fit.slope, up_fit.slope_stderr, slope_window.0, slope_window.1
        ),
    );
    if lowers.len() >= 4 {
        let lo_fit = scaling_fit(&lowers, inv_dim)?;
        assert_into(
            &mut assertions,
            "lower-slope-in-window",
            lo_fit.slope >= slope_window.0 && lo_fit.slope <= slope_window.1,
            format!("slope {:.4}", lo_fit.slope),
        );
    } else {
        assert_into(
            &mut assertions,
            "lower-slope-in-window",
            false,
            format!("only {} packing bounds available", lowers.len()),
        );
    }
    let weyl: Vec<f64> = up_fit.weyl_ratios.iter().map(|(_, w)| *w).collect();
    let (wmin, wmax) = (
        weyl.iter().cloned().fold(f64::INFINITY, f64::min),
        weyl.iter().cloned().fold(0.0f64, f64::max),
    );
    assert_into(
        &mut assertions,
        "weyl-ratios-compact",
        wmin > 0.0 && wmax / wmin <= *weyl_max_ratio,
        format!("ratios within [{wmin:.4}, {wmax:.4}], spread {:.3}", wmax / wmin),
    );
    // monotonicity within one fine-grid facet of mass
    let facet_tol = per_p
        .iter()
        .filter_map(|pp| {
            build_family(&pp.family).ok().and_then(|f| {
                f.complex.map(|cx| {
                    (0..cx.cell_count(cx.dim() - 1))
                        .map(|e| cx.weight(cx.dim() - 1, e))
                        .fold(0.0f64, f64::max)
                })
            })
        })
        .fold(0.0f64, f64::max);
    match monotonicity_and_equality(&uppers, facet_tol.max(1e-9)) {
        Ok(flags) => assert_into(
            &mut assertions,
            "upper-estimates-nondecreasing",
            true,
            format!("{} near-equality flags", flags.len()),
        ),
        Err(e) => assert_into(
            &mut assertions,
            "upper-estimates-nondecreasing",
            false,
            e.to_string(),
        ),
    }

    let scan_table = Table {
        name: "widths".into(),
        columns: vec![
            "p".into(),
            "upper".into(),
            "upper_diagnostic".into(),
            "lower".into(),
            "ratio".into(),
            "weyl_upper".into(),
            "provenance".into(),
        ],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    json!(r.p),
                    json!(r.upper),
                    json!(r.upper_diagnostic),
                    json!(r.lower),
                    json!(r.lower.map(|l| l / r.upper)),
                    json!(r.weyl_upper),
                    json!("measured"),
                ]
            })
            .collect(),
    };
    let plot_table = Table {
        name: "plot-loglog".into(),
        columns: vec![
            "ln_p".into(),
            "ln_upper".into(),
            "ln_lower".into(),
            "weyl_upper".into(),
        ],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    json!((r.p as f64).ln()),
                    json!(r.upper.ln()),
                    json!(r.lower.map(|l| l.ln())),
                    json!(r.weyl_upper),
                ]
            })
            .collect(),
    };

    let witness = WidthScanWitness {
        model: model_desc.clone(),
        alpha_hat,
        alpha_values,
        working_threshold: threshold.value,
        per_p,
    };
    Ok(Report {
        scenario: config.scenario_name().into(),
        config: config.clone(),
        assertions,
        tables: vec![scan_table, plot_table],
        witnesses: serde_json::to_value(witness)?,
    })
}
