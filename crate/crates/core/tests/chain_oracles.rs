//! Flat-norm and filling oracles.
//!
//! The exhaustive search over all top-cell subsets is the independent
//! reference for the min-cut flat norm; it never shares code with the flow
//! solver.  Expected constants (2√3 for the octahedron equator, strip
//! fillings on the torus) were computed by that enumeration and are frozen
//! here.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use widthlab::chain::flat_norm::{
    flat_norm, flat_norm_exhaustive, isoperimetric_choice, solve_region,
};
use widthlab::chain::slice::{ball_cut, slice_radius};
use widthlab::chain::Mod2Chain;
use widthlab::error::ChainError;
use widthlab::models::{build_octahedron, build_sphere, build_torus};

fn octahedron_equator() -> Mod2Chain {
    let oct = build_octahedron();
    let edges: Vec<usize> = (0..12)
        .filter(|&e| oct.complex.faces(1, e).iter().all(|&v| v < 4))
        .collect();
    Mod2Chain::from_cells(&oct.complex, 1, edges).unwrap()
}

#[test]
fn octahedron_equator_flat_norm_is_hemisphere() {
    let eq = octahedron_equator();
    let expect = 2.0 * 3.0f64.sqrt();

    let by_cut = flat_norm(&eq).unwrap();
    assert!((by_cut.cost - expect).abs() < 1e-12, "cost {}", by_cut.cost);
    assert!(by_cut.defect.is_empty());
    assert_eq!(by_cut.chain.len(), 4);

    let by_search = flat_norm_exhaustive(&eq).unwrap();
    assert!((by_search.cost - expect).abs() < 1e-12);

    // filling identity: boundary(chain) + defect = target
    let recover = by_cut.chain.boundary().unwrap().add(&by_cut.defect).unwrap();
    assert_eq!(recover.cells().to_sorted_vec(), eq.cells().to_sorted_vec());
}

#[test]
fn min_cut_matches_exhaustive_on_random_null_homologous_cycles() {
    // complexes with <= 20 top cells
    let oct = build_octahedron();
    let t4 = build_torus(1, 4).unwrap();
    let s1 = build_sphere(2, 1);
    assert!(s1.is_err(), "resolution guard");
    let complexes = vec![oct.complex.clone(), t4.complex.clone()];

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut tested = 0;
    while tested < 120 {
        let complex = &complexes[rng.gen_range(0..complexes.len())];
        let dim = complex.dim();
        // random region -> its boundary is null-homologous by construction
        let cells: Vec<usize> =
            (0..complex.cell_count(dim)).filter(|_| rng.gen_bool(0.5)).collect();
        if cells.is_empty() || cells.len() == complex.cell_count(dim) {
            continue;
        }
        let region = Mod2Chain::from_cells(complex, dim, cells).unwrap();
        let cycle = region.boundary().unwrap();
        if cycle.is_empty() {
            continue;
        }
        let a = flat_norm(&cycle).unwrap();
        let b = flat_norm_exhaustive(&cycle).unwrap();
        assert!(
            (a.cost - b.cost).abs() < 1e-9,
            "min-cut {} vs exhaustive {} on {}",
            a.cost,
            b.cost,
            complex.id()
        );
        assert!(a.cost <= cycle.mass() + 1e-12, "cost above the defect-only option");
        tested += 1;
    }
}

#[test]
fn essential_cycle_rejected_and_exhaustive_still_works() {
    let t = build_torus(1, 4).unwrap();
    // one vertical circle: essential in the torus
    let edges: Vec<usize> = (0..4).map(|j| t.cell_id(&[1], &[0, j])).collect();
    let circle = Mod2Chain::from_cells(&t.complex, 1, edges).unwrap();
    assert!(circle.is_cycle());
    match flat_norm(&circle) {
        Err(ChainError::EssentialCycle) => {}
        other => panic!("expected essential-cycle error, got {other:?}"),
    }
    // the brute-force fallback still yields a finite value
    let f = flat_norm_exhaustive(&circle).unwrap();
    assert!(f.cost > 0.0 && f.cost <= circle.mass() + 1e-12);
    assert!(!f.defect.is_empty(), "an essential cycle keeps a defect");
}

#[test]
fn flat_norm_is_a_metric_on_sampled_triples() {
    let t = build_torus(1, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let dim = t.complex.dim();
    let random_boundary = |rng: &mut ChaCha8Rng| {
        let cells: Vec<usize> =
            (0..t.complex.cell_count(dim)).filter(|_| rng.gen_bool(0.4)).collect();
        Mod2Chain::from_cells(&t.complex, dim, cells)
            .unwrap()
            .boundary()
            .unwrap()
    };
    for _ in 0..15 {
        let a = random_boundary(&mut rng);
        let b = random_boundary(&mut rng);
        let c = random_boundary(&mut rng);
        let dab = flat_norm(&a.add(&b).unwrap()).unwrap().cost;
        let dba = flat_norm(&b.add(&a).unwrap()).unwrap().cost;
        assert!((dab - dba).abs() < 1e-12);
        let dbc = flat_norm(&b.add(&c).unwrap()).unwrap().cost;
        let dac = flat_norm(&a.add(&c).unwrap()).unwrap().cost;
        assert!(dac <= dab + dbc + 1e-9, "triangle inequality");
        // identity of indiscernibles on the nose
        let daa = flat_norm(&a.add(&a).unwrap()).unwrap().cost;
        assert_eq!(daa, 0.0);
    }
}

#[test]
fn isoperimetric_choice_between_adjacent_level_circles_is_the_strip() {
    let t = build_torus(1, 6).unwrap();
    let circle = |x: usize| {
        Mod2Chain::from_cells(&t.complex, 1, (0..6).map(|j| t.cell_id(&[1], &[x, j]))).unwrap()
    };
    let s = circle(1);
    let tt = circle(2);
    let a = isoperimetric_choice(&s, &tt).unwrap();
    // the one-column strip of squares between the circles
    let expect: Vec<usize> = (0..6).map(|j| t.cell_id(&[0, 1], &[1, j])).collect();
    let mut expect = expect;
    expect.sort_unstable();
    assert_eq!(a.cells().to_sorted_vec(), expect);
    assert!((a.mass() - 6.0 / 36.0).abs() < 1e-12);

    // s = t gives the empty filling
    let zero = isoperimetric_choice(&s, &s).unwrap();
    assert!(zero.is_empty());
}

#[test]
fn octahedron_equator_fillings_tie_exactly() {
    // both hemispheres weigh 2√3 = half the total volume: the unique-small
    // -filling guarantee fails on the nose, so the choice must refuse; the
    // hemisphere value itself is certified through flat_norm above
    let eq = octahedron_equator();
    let empty = Mod2Chain::empty(eq.complex(), 1);
    match isoperimetric_choice(&eq, &empty) {
        Err(ChainError::FillingTie(m)) => {
            assert!((m - 2.0 * 3.0f64.sqrt()).abs() < 1e-12)
        }
        other => panic!("expected exact tie, got {other:?}"),
    }
    // a slightly-tilted equator (swap one edge pair for the adjacent path)
    // has a strictly lighter side and the choice succeeds
    let oct = build_octahedron();
    let tris: Vec<usize> = (0..8)
        .filter(|&t| {
            let b = oct.complex.barycenter(2, t);
            b[2] > 0.0
        })
        .collect();
    let cap = Mod2Chain::from_cells(&oct.complex, 2, tris[..3].to_vec()).unwrap();
    let rim = cap.boundary().unwrap();
    let a = isoperimetric_choice(&rim, &Mod2Chain::empty(&oct.complex, 1)).unwrap();
    assert_eq!(a.len(), 3);
    assert_eq!(a.cells().to_sorted_vec(), cap.cells().to_sorted_vec());
}

#[test]
fn exact_tie_raises_filling_error() {
    // two parallel circles cutting the torus into equal halves
    let t = build_torus(1, 4).unwrap();
    let two = Mod2Chain::from_cells(
        &t.complex,
        1,
        (0..4)
            .map(|j| t.cell_id(&[1], &[0, j]))
            .chain((0..4).map(|j| t.cell_id(&[1], &[2, j]))),
    )
    .unwrap();
    let empty = Mod2Chain::empty(&t.complex, 1);
    match isoperimetric_choice(&two, &empty) {
        Err(ChainError::FillingTie(_)) => {}
        other => panic!("expected tie, got {other:?}"),
    }
}

#[test]
fn constancy_uniqueness_of_small_fillings() {
    // any two fillings of the same difference with mass below half the
    // total volume coincide: enumerate every filling on tiny complexes
    let oct = build_octahedron();
    let t4 = build_torus(1, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for complex in [&oct.complex, &t4.complex] {
        let dim = complex.dim();
        let half = complex.total_volume() / 2.0;
        let k = complex.cell_count(dim);
        for _ in 0..60 {
            let cells: Vec<usize> = (0..k).filter(|_| rng.gen_bool(0.3)).collect();
            let region = Mod2Chain::from_cells(complex, dim, cells).unwrap();
            let d = region.boundary().unwrap();
            // all fillings by brute force
            let mut fillings = Vec::new();
            for mask in 0u64..(1 << k) {
                let cand = Mod2Chain::from_cells(
                    complex,
                    dim,
                    (0..k).filter(|c| mask >> c & 1 == 1),
                )
                .unwrap();
                if cand.boundary().unwrap().cells() == d.cells() {
                    fillings.push(cand);
                }
            }
            assert_eq!(fillings.len(), 2, "connected closed complex has 2 fillings");
            let small: Vec<_> = fillings.iter().filter(|f| f.mass() < half).collect();
            assert!(small.len() <= 1, "two distinct small fillings would refute uniqueness");
            let empty = Mod2Chain::empty(complex, dim - 1);
            match isoperimetric_choice(&d, &empty) {
                Ok(a) => {
                    // the solver must return exactly the unique small filling
                    assert_eq!(small.len(), 1);
                    assert_eq!(a.cells(), small[0].cells());
                }
                Err(ChainError::FillingTie(_)) => {
                    assert!((fillings[0].mass() - half).abs() < 1e-9);
                }
                Err(other) => panic!("unexpected error {other:?}"),
            }
        }
    }
}

#[test]
fn region_solver_component_flips_enumerate_fillings() {
    let t = build_torus(1, 4).unwrap();
    let region = Mod2Chain::from_cells(&t.complex, 2, [0usize, 1, 5, 6]).unwrap();
    let d = region.boundary().unwrap();
    let solve = solve_region(&d).unwrap();
    assert_eq!(solve.n_components, 1);
    // the two fillings are the solver's region and its complement
    let r: Vec<usize> = (0..16).filter(|&c| solve.color[c]).collect();
    let chain = Mod2Chain::from_cells(&t.complex, 2, r).unwrap();
    assert_eq!(chain.boundary().unwrap().cells(), d.cells());
}

#[test]
fn slice_radius_minimizes_cut_and_respects_coarea() {
    let t = build_torus(1, 12).unwrap();
    let full = Mod2Chain::fundamental(&t.complex);
    let center = vec![0.31, 0.47];
    let r = 0.3;
    let choice = slice_radius(&full, &center, r).unwrap();
    assert!(choice.radius >= r / 2.0 - 1e-12 && choice.radius <= r + 1e-12);
    // cut of the full chain is the discrete sphere of the ball
    let direct = ball_cut(&full, &center, choice.radius).unwrap();
    assert_eq!(direct.cells().to_sorted_vec(), choice.cut.cells().to_sorted_vec());

    // discrete coarea: the averaged cut stays within the grid-tolerance
    // factor sqrt(d)·(1 + 2/g) of (2/r)·mass
    let d = t.complex.dim() as f64;
    let tol_factor = d.sqrt() * (1.0 + 2.0 / 12.0);
    let bound = (2.0 / r) * full.mass() * tol_factor;
    assert!(
        choice.mean_cut_mass <= bound,
        "mean cut {} above coarea bound {}",
        choice.mean_cut_mass,
        bound
    );
    assert!(choice.cut_mass <= choice.mean_cut_mass + 1e-12);

    // empty chain: zero cut at any admissible radius
    let empty = Mod2Chain::empty(&t.complex, 2);
    let c0 = slice_radius(&empty, &center, r).unwrap();
    assert_eq!(c0.cut_mass, 0.0);
}

#[test]
fn restrict_arc_of_circle_in_ball() {
    let t = build_torus(1, 32).unwrap();
    let edges: Vec<usize> = (0..32).map(|j| t.cell_id(&[1], &[0, j])).collect();
    let circle = Mod2Chain::from_cells(&t.complex, 1, edges).unwrap();
    let ball = widthlab::models::geodesic_ball(&t.complex, &[0.0, 0.25], 0.25).unwrap();
    let arc = circle.restrict(ball.predicate());
    // chord of a radius-0.25 ball centered on the circle: length ~ 0.5
    assert!((arc.mass() - 0.5).abs() <= 2.5 / 32.0, "arc {}", arc.mass());
    // restriction monotonicity
    assert!(arc.mass() <= circle.mass());
    let everywhere = circle.restrict(|_| true);
    assert_eq!(everywhere.cells().to_sorted_vec(), circle.cells().to_sorted_vec());
    assert!(circle.restrict(|_| false).is_empty());
}

#[test]
fn boundary_of_boundary_vanishes_on_random_chains() {
    let t2 = build_torus(1, 6).unwrap();
    let t3 = build_torus(2, 3).unwrap();
    let s2 = build_sphere(2, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for complex in [&t2.complex, &t3.complex, &s2.complex] {
        for dim in 2..=complex.dim() {
            for _ in 0..50 {
                let k = complex.cell_count(dim);
                let cells: Vec<usize> = (0..k).filter(|_| rng.gen_bool(0.3)).collect();
                let c = Mod2Chain::from_cells(complex, dim, cells).unwrap();
                assert!(c.boundary().unwrap().boundary().unwrap().is_empty());
            }
        }
    }
}

#[test]
fn mass_is_subadditive() {
    let t = build_torus(1, 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let k = t.complex.cell_count(1);
        let a = Mod2Chain::from_cells(
            &t.complex,
            1,
            (0..k).filter(|_| rng.gen_bool(0.2)).collect::<Vec<_>>(),
        )
        .unwrap();
        let b = Mod2Chain::from_cells(
            &t.complex,
            1,
            (0..k).filter(|_| rng.gen_bool(0.2)).collect::<Vec<_>>(),
        )
        .unwrap();
        assert!(a.add(&b).unwrap().mass() <= a.mass() + b.mass() + 1e-12);
    }
}
