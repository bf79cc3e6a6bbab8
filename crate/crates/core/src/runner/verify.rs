//! Re-check every invariant recorded in a report from its serialized
//! witnesses: fillings are re-validated against their cycles, witness
//! parameters re-evaluated, packing bounds re-derived and ring values
//! re-paired.  The heavy searches (sampling sweeps, exhaustive
//! enumerations) are not repeated; only their recorded witnesses are.

use crate::chain::Mod2Chain;
use crate::error::RunnerError;
use crate::models::crofton_mass;
use crate::param::cohomology::CellTopology;
use crate::param::projective_space;
use crate::runner::scenarios::detection_suite::DetectionWitness;
use crate::runner::scenarios::flatnorm_oracle::FlatnormWitness;
use crate::runner::scenarios::packing_bound::PackingWitness;
use crate::runner::scenarios::s3_targets::S3Witness;
use crate::runner::scenarios::width_scan::WidthScanWitness;
use crate::runner::Report;
use crate::sweepouts::{build_family, harmonic_family};

fn fail(field: &str, detail: String) -> RunnerError {
    RunnerError::VerifyFailed {
        field: field.to_string(),
        detail,
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Verify a report; returns the number of re-checked facts.
pub fn verify(report: &Report) -> Result<usize, RunnerError> {
    match report.scenario.as_str() {
        "width-scan" => verify_width_scan(report),
        "s3-targets" => verify_s3(report),
        "detection-suite" => verify_detection(report),
        "flatnorm-oracle" => verify_flatnorm(report),
        "packing-bound" => verify_packing(report),
        other => Err(fail("scenario", format!("unknown scenario {other}"))),
    }
}

fn verify_width_scan(report: &Report) -> Result<usize, RunnerError> {
    let w: WidthScanWitness = serde_json::from_value(report.witnesses.clone())?;
    let mut checked = 0usize;
    for per in &w.per_p {
        let field = format!("per_p[p={}]", per.p);
        let family = build_family(&per.family)?;
        // upper witness re-evaluated
        let mass = family
            .chain_at_coeffs(&per.upper.witness)
            .map_err(|e| fail(&field, format!("upper witness evaluation: {e}")))?
            .mass();
        if (mass - per.upper.value).abs() > 1e-9 {
            return Err(fail(
                &format!("{field}.upper.value"),
                format!("recorded {} recomputed {mass}", per.upper.value),
            ));
        }
        checked += 1;
        if let Some(cert) = &per.certificate {
            let complex = family.complex.as_ref().expect("mesh family");
            let n = complex.dim() - 1;
            let r = per.packing.radius;
            let expected_threshold = cert.alpha_hat / 3.0 * r.powi(n as i32);
            if !close(cert.threshold, expected_threshold, 1e-12) {
                return Err(fail(
                    &format!("{field}.certificate.threshold"),
                    format!("recorded {} derived {expected_threshold}", cert.threshold),
                ));
            }
            let expected_bound = per.p as f64 * cert.alpha_hat / 6.0 * r.powi(n as i32);
            if !close(cert.bound, expected_bound, 1e-12) {
                return Err(fail(
                    &format!("{field}.certificate.bound"),
                    format!("recorded {} derived {expected_bound}", cert.bound),
                ));
            }
            let chain = family
                .chain_at_coeffs(&cert.coeffs)
                .map_err(|e| fail(&field, format!("packing witness evaluation: {e}")))?;
            for (j, (center, recorded)) in per
                .packing
                .centers
                .iter()
                .zip(&cert.ball_masses)
                .enumerate()
            {
                let m = chain
                    .restrict(|pt| complex.distance(pt, center) <= r)
                    .mass();
                if (m - recorded).abs() > 1e-9 {
                    return Err(fail(
                        &format!("{field}.certificate.ball_masses[{j}]"),
                        format!("recorded {recorded} recomputed {m}"),
                    ));
                }
                if m <= cert.threshold {
                    return Err(fail(
                        &format!("{field}.certificate.ball_masses[{j}]"),
                        format!("mass {m} at or below threshold {}", cert.threshold),
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

fn verify_s3(report: &Report) -> Result<usize, RunnerError> {
    let w: S3Witness = serde_json::from_value(report.witnesses.clone())?;
    let mut checked = 0usize;
    for row in &w.rows {
        let family = harmonic_family(row.harmonics.clone())?;
        let h = family.scalar_at_coeffs(&row.coeffs)?;
        let est = crofton_mass(move |p| h(p), row.lines, row.seed, row.angular_samples)?;
        if est.mass.to_bits() != row.mass.to_bits() {
            return Err(fail(
                &format!("rows[{}].mass", row.name),
                format!("recorded {} recomputed {}", row.mass, est.mass),
            ));
        }
        if est.max_per_line != row.max_per_line {
            return Err(fail(
                &format!("rows[{}].max_per_line", row.name),
                format!("recorded {} recomputed {}", row.max_per_line, est.max_per_line),
            ));
        }
        if let Some(target) = row.target {
            if (est.mass - target).abs() / target > row.tolerance {
                return Err(fail(
                    &format!("rows[{}].target", row.name),
                    format!("mass {} misses {target} beyond {}", est.mass, row.tolerance),
                ));
            }
        }
        checked += 1;
    }
    Ok(checked)
}

fn verify_detection(report: &Report) -> Result<usize, RunnerError> {
    let w: DetectionWitness = serde_json::from_value(report.witnesses.clone())?;
    let mut checked = 0usize;
    for row in &w.ring_rows {
        let (rp, _) = projective_space(row.p, 1)?;
        let topo = CellTopology::new(rp);
        let lambda = topo
            .deck_cocycle()
            .ok_or_else(|| fail("ring_rows", "deck cocycle missing".into()))?;
        if lambda.support.len() != row.lambda_support {
            return Err(fail(
                &format!("ring_rows[p={}].lambda_support", row.p),
                format!(
                    "recorded {} recomputed {}",
                    row.lambda_support,
                    lambda.support.len()
                ),
            ));
        }
        let power = topo.cup_power(&lambda, row.p, None);
        let nonzero = !power.support.is_empty() && topo.class_nonzero(&power);
        if nonzero != row.power_p_nonzero {
            return Err(fail(
                &format!("ring_rows[p={}].power_p_nonzero", row.p),
                format!("recorded {} recomputed {nonzero}", row.power_p_nonzero),
            ));
        }
        checked += 1;
    }
    for row in &w.degree_rows {
        let model = row.model.build()?;
        let field = crate::models::morse_direction_normalized(model.complex(), row.direction_seed)?;
        let fam = crate::sweepouts::linear_sweepout(&field, 2)?;
        let sweep = crate::family::detect::is_sweepout(&fam, 5)?;
        if sweep.degree != row.degree {
            return Err(fail(
                &format!("degree_rows[{}].degree", model.complex().id()),
                format!("recorded {} recomputed {}", row.degree, sweep.degree),
            ));
        }
        checked += 1;
    }
    Ok(checked)
}

fn verify_flatnorm(report: &Report) -> Result<usize, RunnerError> {
    let w: FlatnormWitness = serde_json::from_value(report.witnesses.clone())?;
    let mut checked = 0usize;
    for (i, case) in w.cases.iter().enumerate() {
        let model = case.model.build()?;
        let complex = model.complex();
        let cycle = Mod2Chain::from_data(complex, &case.cycle)?;
        let filling = Mod2Chain::from_data(complex, &case.filling)?;
        let defect = Mod2Chain::from_data(complex, &case.defect)?;
        // the filling identity: boundary(chain) + defect = cycle
        let recovered = filling.boundary()?.add(&defect)?;
        if recovered.cells() != cycle.cells() {
            return Err(fail(
                &format!("cases[{i}].filling"),
                "boundary(chain) + defect differs from the cycle".into(),
            ));
        }
        let cost = filling.mass() + defect.mass();
        if (cost - case.cost).abs() > 1e-9 {
            return Err(fail(
                &format!("cases[{i}].cost"),
                format!("recorded {} recomputed {cost}", case.cost),
            ));
        }
        if case.cost > cycle.mass() + 1e-9 {
            return Err(fail(
                &format!("cases[{i}].cost"),
                "cost exceeds the defect-only option".into(),
            ));
        }
        if (case.cost - case.exhaustive_cost).abs() > 1e-9 {
            return Err(fail(
                &format!("cases[{i}].exhaustive_cost"),
                format!(
                    "min-cut {} vs recorded exhaustive {}",
                    case.cost, case.exhaustive_cost
                ),
            ));
        }
        checked += 1;
    }
    let expected = 2.0 * 3.0f64.sqrt();
    if (w.octahedron_equator_cost - expected).abs() > 1e-12 {
        return Err(fail(
            "octahedron_equator_cost",
            format!("recorded {} vs 2√3", w.octahedron_equator_cost),
        ));
    }
    Ok(checked + 1)
}

fn verify_packing(report: &Report) -> Result<usize, RunnerError> {
    let w: PackingWitness = serde_json::from_value(report.witnesses.clone())?;
    let mut checked = 0usize;
    for row in &w.rows {
        let Some(cert) = &row.certificate else {
            continue;
        };
        let family = build_family(&row.family)?;
        let complex = family.complex.as_ref().expect("mesh family");
        let chain = family
            .chain_at_coeffs(&cert.coeffs)
            .map_err(|e| fail("rows", format!("witness evaluation: {e}")))?;
        for (j, (center, recorded)) in
            row.packing.centers.iter().zip(&cert.ball_masses).enumerate()
        {
            let m = chain
                .restrict(|pt| complex.distance(pt, center) <= row.packing.radius)
                .mass();
            if (m - recorded).abs() > 1e-9 || m <= cert.threshold {
                return Err(fail(
                    &format!("rows[p={}].ball_masses[{j}]", row.p),
                    format!("recorded {recorded} recomputed {m}"),
                ));
            }
            checked += 1;
        }
    }
    Ok(checked)
}
