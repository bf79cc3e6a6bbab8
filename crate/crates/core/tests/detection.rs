//! Loop-degree and detection behavior: sweeps register as degree 1,
//! confined loops as 0, degrees survive reparametrization, refinement and
//! the bend pushforward, and polynomial families detect their level.

use std::sync::Arc;

use widthlab::chain::flat_norm::{flat_norm, isoperimetric_choice};
use widthlab::chain::Mod2Chain;
use widthlab::family::degree::{loop_degree, loop_degree_refined, relative_loop_degree};
use widthlab::family::detect::{
    calibrate_threshold, is_p_sweepout, is_sweepout, mass_concentration,
    projective_generator_segments, restrict_and_detect, DEFAULT_MAX_REFINE,
};
use widthlab::family::discretize;
use widthlab::models::{
    build_sphere, build_torus, geodesic_ball, level_cycle, linear_field, morse_direction,
    morse_direction_normalized, Model,
};
use widthlab::sweepouts::bend::BendMap;
use widthlab::sweepouts::{linear_sweepout, polynomial_sweepout, pushforward};

#[test]
fn level_sweeps_have_degree_one_on_torus_and_spheres() {
    let models: Vec<(&str, Arc<widthlab::AmbientComplex>)> = vec![
        ("torus2", build_torus(1, 9).unwrap().complex),
        ("torus3", build_torus(2, 5).unwrap().complex),
        ("sphere2", build_sphere(2, 6).unwrap().complex),
        ("sphere3", build_sphere(3, 3).unwrap().complex),
    ];
    for (name, complex) in models {
        let f = morse_direction(&complex, 11).unwrap();
        let fam = linear_sweepout(&f, 2).unwrap();
        let report = is_sweepout(&fam, DEFAULT_MAX_REFINE).unwrap();
        assert_eq!(report.degree, 1, "level sweep on {name}");
    }
}

#[test]
fn constant_loops_are_trivial() {
    let t = build_torus(1, 6).unwrap();
    let f = morse_direction(&t.complex, 3).unwrap();
    let cyc = level_cycle(&f, 0.5 * (f.min_center() + f.max_center())).unwrap();
    let values = vec![cyc.clone(), cyc.clone(), cyc.clone(), cyc];
    assert_eq!(loop_degree(&values).unwrap(), 0);
}

#[test]
fn loops_confined_to_a_flat_neighborhood_are_trivial() {
    let t = build_torus(1, 8).unwrap();
    let f = morse_direction(&t.complex, 5).unwrap();
    let threshold = calibrate_threshold(&f).unwrap();
    assert!(threshold.value > 0.0);

    let center = level_cycle(&f, 0.4 * f.min_center() + 0.6 * f.max_center()).unwrap();
    // perturb by boundaries of single squares near the cycle
    let mut values = vec![center.clone()];
    for c in [0usize, 7, 13, 29] {
        let square = Mod2Chain::from_cells(&t.complex, 2, [c]).unwrap();
        let perturbed = center.add(&square.boundary().unwrap()).unwrap();
        // stays within the calibrated neighborhood
        let d = flat_norm(&perturbed.add(&center).unwrap()).unwrap().cost;
        assert!(d < threshold.value, "perturbation {d} vs {}", threshold.value);
        values.push(perturbed);
        values.push(center.clone());
    }
    assert_eq!(loop_degree(&values).unwrap(), 0);
}

#[test]
fn degree_invariant_under_rotation_and_refinement() {
    let t = build_torus(1, 9).unwrap();
    let f = morse_direction(&t.complex, 7).unwrap();
    let fam = linear_sweepout(&f, 2).unwrap();

    // explicit value loop at 27 steps
    let n = 27;
    let values: Vec<Mod2Chain> = (0..n)
        .map(|i| fam.chain_at(&[i as f64 / n as f64]).unwrap())
        .collect();
    let base = loop_degree(&values).unwrap();
    assert_eq!(base, 1);
    for rot in [1usize, 5, 13] {
        let rotated: Vec<Mod2Chain> = (0..n).map(|i| values[(i + rot) % n].clone()).collect();
        assert_eq!(loop_degree(&rotated).unwrap(), base, "rotation {rot}");
    }
    // one ternary refinement of the parameter grid
    let fine: Vec<Mod2Chain> = (0..3 * n)
        .map(|i| fam.chain_at(&[i as f64 / (3 * n) as f64]).unwrap())
        .collect();
    assert_eq!(loop_degree(&fine).unwrap(), base);
}

#[test]
fn degree_is_additive_under_concatenation() {
    let t = build_torus(1, 9).unwrap();
    let f = morse_direction(&t.complex, 13).unwrap();
    let fam = linear_sweepout(&f, 2).unwrap();
    let n = 27;
    let sweep: Vec<Mod2Chain> = (0..n)
        .map(|i| fam.chain_at(&[i as f64 / n as f64]).unwrap())
        .collect();
    // traversing the sweep twice cancels mod 2
    let doubled: Vec<Mod2Chain> = sweep.iter().chain(sweep.iter()).cloned().collect();
    assert_eq!(loop_degree(&doubled).unwrap(), 0);
}

#[test]
fn isoperimetric_steps_cost_no_more_than_flat_distance() {
    let t = build_torus(1, 9).unwrap();
    let f = morse_direction(&t.complex, 17).unwrap();
    let fam = linear_sweepout(&f, 2).unwrap();
    let floor = (0..t.complex.cell_count(1))
        .map(|e| t.complex.weight(1, e))
        .fold(0.0f64, f64::max);
    let n = 27;
    for i in 0..n {
        let a = fam.chain_at(&[i as f64 / n as f64]).unwrap();
        let b = fam.chain_at(&[(i + 1) as f64 % n as f64 / n as f64]).unwrap();
        let diff = a.add(&b).unwrap();
        if diff.is_empty() {
            continue;
        }
        let filling = isoperimetric_choice(&a, &b).unwrap();
        let flat = flat_norm(&diff).unwrap().cost;
        assert!(
            filling.mass() <= flat * (1.0 + 1e-9) + floor,
            "filling {} vs flat {flat}",
            filling.mass()
        );
    }
}

#[test]
fn polynomial_family_antipodal_symmetry_is_exact() {
    let t = build_torus(1, 9).unwrap();
    let f = morse_direction(&t.complex, 19).unwrap();
    let fam = polynomial_sweepout(&f, 3).unwrap();
    let coeff_sets = [
        vec![0.3, -0.7, 0.2, 0.55],
        vec![-0.1, 0.0, 0.9, -0.4],
        vec![0.25, 0.25, -0.5, 0.1],
    ];
    for a in &coeff_sets {
        let neg: Vec<f64> = a.iter().map(|x| -x).collect();
        let ca = fam.chain_at_coeffs(a).unwrap();
        let cn = fam.chain_at_coeffs(&neg).unwrap();
        assert_eq!(
            ca.cells().to_sorted_vec(),
            cn.cells().to_sorted_vec(),
            "Ψ(a) = Ψ(-a) exactly"
        );
    }
}

#[test]
fn polynomial_members_are_unions_of_few_level_bands() {
    // sign changes of P_a along the sorted center values never exceed p
    let t = build_torus(1, 12).unwrap();
    let f = morse_direction(&t.complex, 23).unwrap();
    let p = 4;
    let fam = polynomial_sweepout(&f, p).unwrap();
    let mut sorted_centers: Vec<f64> = f.center_values().to_vec();
    sorted_centers.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for trial in 0..30u64 {
        let coeffs: Vec<f64> = (0..=p)
            .map(|i| {
                let x = (trial as f64 * 0.37 + i as f64 * 0.61).sin();
                if x == 0.0 {
                    0.3
                } else {
                    x
                }
            })
            .collect();
        let horner =
            |t: f64| -> f64 { coeffs.iter().rev().fold(0.0, |acc, &a| acc * t + a) };
        let changes = sorted_centers
            .windows(2)
            .filter(|w| (horner(w[0]) < 0.0) != (horner(w[1]) < 0.0))
            .count();
        assert!(changes <= p, "{changes} bands for degree-{p} member");
        // the member is a cycle
        let c = fam.chain_at_coeffs(&coeffs).unwrap();
        assert!(c.is_cycle());
    }
}

#[test]
fn polynomial_families_detect_their_level() {
    let t = build_torus(1, 9).unwrap();
    let f = morse_direction(&t.complex, 29).unwrap();
    let threshold = calibrate_threshold(&f).unwrap().value;
    for p in 1..=2usize {
        let fam = polynomial_sweepout(&f, p).unwrap();
        let report = is_p_sweepout(&fam, p, threshold, DEFAULT_MAX_REFINE).unwrap();
        assert!(report.detected, "level-{p} family detects p={p}");
        // monotone: also a q-sweepout for q < p
        for q in 1..p {
            let rq = is_p_sweepout(&fam, q, threshold, DEFAULT_MAX_REFINE).unwrap();
            assert!(rq.detected, "level-{p} family detects q={q}");
        }
    }
}

#[test]
fn constant_family_detects_nothing() {
    let t = build_torus(1, 6).unwrap();
    let f = morse_direction(&t.complex, 31).unwrap();
    // degenerate polynomial: P ≡ const > 0 gives the empty cycle everywhere
    let fam = polynomial_sweepout(&f, 1).unwrap();
    let empty = fam.chain_at_coeffs(&[1.0, 0.0]).unwrap();
    assert!(empty.is_empty());
    // loop degree of the constant-empty loop is 0
    let values = vec![empty.clone(), empty.clone(), empty];
    assert_eq!(loop_degree(&values).unwrap(), 0);
}

#[test]
fn structural_detection_for_large_p_uses_generator_loop() {
    let t = build_torus(1, 9).unwrap();
    let f = morse_direction(&t.complex, 37).unwrap();
    let p = 6; // too large for an explicit projective model
    let fam = polynomial_sweepout(&f, p).unwrap();
    assert!(fam.domain.complex().is_none());
    let report = is_p_sweepout(&fam, p, 0.01, DEFAULT_MAX_REFINE).unwrap();
    assert!(report.detected);
    assert!(matches!(
        report.certificate,
        widthlab::family::detect::DetectionCertificate::Structural
    ));
    // the generator loop alone has degree one
    let segs = projective_generator_segments(p + 1);
    let deg = loop_degree_refined(&fam, &segs, DEFAULT_MAX_REFINE).unwrap();
    assert_eq!(deg.degree, 1);
}

#[test]
fn relative_degree_in_balls() {
    let t = build_torus(1, 12).unwrap();
    let f = linear_field(&t.complex, &[1.0, 2.3e-4]).unwrap();
    let fam = linear_sweepout(&f, 2).unwrap();
    let n = 36;
    let values: Vec<Mod2Chain> = (0..n)
        .map(|i| fam.chain_at(&[i as f64 / n as f64]).unwrap())
        .collect();
    // ball the sweep passes through
    let ball = geodesic_ball(&t.complex, &[0.31, 0.52], 0.2).unwrap();
    assert_eq!(relative_loop_degree(&values, &ball).unwrap(), 1);
    // constant relative loop
    let constant = vec![values[5].clone(), values[5].clone(), values[5].clone()];
    assert_eq!(relative_loop_degree(&constant, &ball).unwrap(), 0);
    // loop of cycles kept away from the ball: restrictions all empty
    let far_values: Vec<Mod2Chain> = values
        .iter()
        .map(|v| v.restrict(|p| t.complex.distance(p, &[0.31, 0.52]) > 0.3))
        .collect();
    assert_eq!(relative_loop_degree(&far_values, &ball).unwrap(), 0);
}

#[test]
fn discretization_report_shrinks_with_subdivision() {
    let t = build_torus(1, 9).unwrap();
    let f = morse_direction(&t.complex, 41).unwrap();
    let fam = linear_sweepout(&f, 1).unwrap();
    let mut finenesses = Vec::new();
    let mut flats = Vec::new();
    for k in 0..5usize {
        let (_, report) = discretize(&fam, k).unwrap();
        finenesses.push(report.fineness);
        flats.push(report.max_flat_distance);
        // discrete max mass never exceeds the family sup by construction
        assert!(report.max_mass <= 4.0);
    }
    // mass fineness plateaus while parameter steps straddle whole level
    // bands of the fixed ambient mesh, then falls; the flat gap to the
    // family shrinks throughout
    assert!(
        finenesses[4] < 0.75 * finenesses[0],
        "fineness fails to shrink: {finenesses:?}"
    );
    for w in flats.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "flat gap not decreasing: {flats:?}");
    }
    assert!(flats[4] < 0.5 * flats[0], "flat gap too flat: {flats:?}");
}

#[test]
fn mass_concentration_profiles() {
    let t = build_torus(1, 12).unwrap();
    let f = morse_direction(&t.complex, 43).unwrap();
    let fam = linear_sweepout(&f, 2).unwrap();
    let radii = [0.3, 0.2, 0.1, 0.05];
    let profile = mass_concentration(&fam, &radii, 7).unwrap();
    // level sets are curves: a ball of radius r sees at most two chords
    // (the level line plus a seam piece near extreme parameters), each of
    // staircase length ≤ 2r·√2, plus one cell of slack
    for (r, s) in profile.radii.iter().zip(&profile.sup_mass) {
        let bound = 4.0 * r * std::f64::consts::SQRT_2 + 2.0 / 12.0;
        assert!(*s <= bound, "profile({r}) = {s} above {bound}");
    }
    // the profile decreases toward the facet floor
    for w in profile.sup_mass.windows(2) {
        assert!(w[1] <= w[0] + 1e-12);
    }
    assert!(!profile.flagged, "spread-out family must not be flagged");
}

#[test]
fn restriction_keeps_one_level_lower_detection() {
    // level-2 family on the torus, excluded neighborhood of the empty
    // cycle and the near-extreme levels: the restriction detects level 1
    let t = build_torus(1, 9).unwrap();
    let f = morse_direction_normalized(&t.complex, 47).unwrap();
    let fam = widthlab::sweepouts::polynomial_sweepout_at(&f, 2, 2).unwrap();
    let trivial = vec![
        Mod2Chain::empty(&t.complex, 1),
        level_cycle(&f, -0.97).unwrap(),
        level_cycle(&f, 0.97).unwrap(),
    ];
    let eps = 0.05;
    let outcome = restrict_and_detect(&fam, &trivial, eps, 1, true, DEFAULT_MAX_REFINE).unwrap();
    assert!(outcome.detection.detected, "restricted family detects p=1");
    assert!(outcome.y_cells > 0 && outcome.z_cells > 0);
    assert!(
        outcome.z_loop_degrees.iter().all(|&d| d == 0),
        "loops in the excluded part are trivial: {:?}",
        outcome.z_loop_degrees
    );
    // a trivial set far from every member (an essential cycle is at
    // infinite flat distance within the class) excludes nothing
    let far = vec![Mod2Chain::from_cells(
        &t.complex,
        1,
        (0..9).map(|j| t.cell_id(&[1], &[0, j])),
    )
    .unwrap()];
    let all = restrict_and_detect(&fam, &far, 1e-6, 2, false, DEFAULT_MAX_REFINE).unwrap();
    assert_eq!(all.y_cells, fam.domain.complex().unwrap().total_cells());
    assert!(all.detection.detected);
}

#[test]
fn pushforward_preserves_cycles_and_degrees() {
    let model = Model::Torus(Arc::new(build_torus(1, 9).unwrap()));
    let f = morse_direction(model.complex(), 53).unwrap();
    let base = linear_sweepout(&f, 2).unwrap();
    let bend = BendMap::new(&model, 1, 0.18).unwrap();
    let pushed = pushforward(&bend, &base, 1).unwrap();

    // values are cycles on the fine grid
    for i in 0..9 {
        let c = pushed.chain_at(&[i as f64 / 9.0]).unwrap();
        assert!(c.is_cycle());
    }
    // the loop degree survives the pushforward
    let before = is_sweepout(&base, DEFAULT_MAX_REFINE).unwrap();
    let after = is_sweepout(&pushed, DEFAULT_MAX_REFINE).unwrap();
    assert_eq!(before.degree, 1);
    assert_eq!(after.degree, 1);
}

#[test]
fn pushforward_mass_lands_on_skeleton_outside_center_balls() {
    let model = Model::Torus(Arc::new(build_torus(1, 9).unwrap()));
    let f = morse_direction(model.complex(), 59).unwrap();
    let base = polynomial_sweepout(&f, 2).unwrap();
    let bend = BendMap::new(&model, 1, 0.2).unwrap();
    let pushed = pushforward(&bend, &base, 1).unwrap();
    let fine = pushed.complex.as_ref().unwrap();
    let mut checked = 0usize;
    for trial in 0..12u64 {
        let coeffs: Vec<f64> = (0..3)
            .map(|i| (trial as f64 * 0.71 + i as f64 * 0.43).cos())
            .collect();
        let chain = pushed.chain_at_coeffs(&coeffs).unwrap();
        for e in chain.cells().iter() {
            let b = fine.barycenter(1, e);
            if bend.on_skeleton(b, 1e-9) {
                continue;
            }
            let center = bend.center_of(b);
            let d = fine.distance(b, &center);
            // half a fine cell of slack: the staircase boundary sits one
            // facet away from the bent zone it approximates
            let slack = 2.0f64.sqrt() / 27.0;
            assert!(
                d <= bend.exclusion_radius + slack,
                "off-skeleton mass at distance {d} (limit {})",
                bend.exclusion_radius
            );
            checked += 1;
        }
    }
    assert!(checked > 0, "some bent mass must exist near centers");
}
