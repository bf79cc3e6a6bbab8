use std::sync::Arc;
use widthlab::family::detect::*;
use widthlab::family::degree::loop_degree_refined;
use widthlab::models::*;
use widthlab::param::cohomology::CellTopology;
use widthlab::sweepouts::bend::BendMap;
use widthlab::sweepouts::*;

fn main() {
    let seed = 2026u64;
    let base = Model::Torus(Arc::new(build_torus(1, 9).unwrap()));
    let field = morse_direction_normalized(base.complex(), seed).unwrap();
    let fam = polynomial_sweepout(&field, 4).unwrap();

    // raw family on RP^4
    let x = fam.domain.complex().unwrap().clone();
    let topo = CellTopology::new((*x).clone());
    let basis = topo.h1_basis();
    println!("b1 = {}, basis cycle len {}", basis.len(), basis[0].support.len());
    let walks = topo.realize_loops(&basis[0].support);
    println!("walks: {:?}", walks.iter().map(|w| w.steps.len()).collect::<Vec<_>>());
    let det_raw = detect_on(&fam, &topo, 4, 0.1, 5).unwrap();
    println!("raw detect p=4: {} evals {:?}", det_raw.detected, det_raw.lambda_evals);

    // degree along the explicit generator path
    let segs = projective_generator_segments(5);
    let raw_gen = loop_degree_refined(&fam, &segs, 6);
    println!("raw generator degree: {:?}", raw_gen.map(|r| (r.degree, r.refinement)).map_err(|e| e.to_string()));

    // bent family
    let bend = BendMap::new(&base, 0, 0.2).unwrap();
    let pushed = pushforward(&bend, &fam, 2).unwrap();
    let det_bent = detect_on(&pushed, &topo, 4, 0.1, 5).unwrap();
    println!("bent detect p=4: {} evals {:?}", det_bent.detected, det_bent.lambda_evals);
    let bent_gen = loop_degree_refined(&pushed, &segs, 6);
    println!("bent generator degree: {:?}", bent_gen.map(|r| (r.degree, r.refinement)).map_err(|e| e.to_string()));
}
