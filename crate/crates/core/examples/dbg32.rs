use std::sync::Arc;
use widthlab::models::*;
use widthlab::sweepouts::bend::BendMap;
use widthlab::sweepouts::*;
use widthlab::widths::*;

fn main() {
    let seed = 2026u64;
    let base = Model::Torus(Arc::new(build_torus(1, 9).unwrap()));
    let field = morse_direction_normalized(base.complex(), seed).unwrap();
    let alpha_hat = 3.293f64;
    let (p, k) = (32usize, 1usize);
    let bend = BendMap::new(&base, k, 0.2).unwrap();
    let fam = polynomial_sweepout(&field, p).unwrap();
    let packing = ball_packing(base.complex(), p).unwrap();
    let refine = {
        let mut rf = 2usize;
        while (3usize.pow((k + rf) as u32) as f64) * packing.radius < 2.5 { rf += 1; }
        rf
    };
    println!("refine {refine} g {} r {:.4}", 3usize.pow((k+refine) as u32), packing.radius);
    let pushed = pushforward(&bend, &fam, refine).unwrap();
    let threshold = alpha_hat / 3.0 * packing.radius;
    let hints = bent_packing_hints(&field, &bend, &pushed, &packing, threshold).unwrap();
    println!("hints: {}", hints.len());
    // evaluate the best hint's ball masses
    let fine = pushed.complex.as_ref().unwrap();
    for (hi, h) in hints.iter().take(2).enumerate() {
        match pushed.chain_at_coeffs(h) {
            Err(e) => println!("hint {hi}: degenerate {e}"),
            Ok(chain) => {
                let masses: Vec<f64> = packing.centers.iter().map(|c|
                    chain.restrict(|pt| fine.distance(pt, c) <= packing.radius).mass()).collect();
                let failing: Vec<(usize, String)> = masses.iter().enumerate()
                    .filter(|(_, &m)| m <= threshold)
                    .map(|(j, &m)| (j, format!("{:?}->{:.3}", packing.centers[j], m))).collect();
                println!("hint {hi}: mass {:.2}, {} failing (thr {:.4}): {:?}", chain.mass(), failing.len(), threshold, failing);
            }
        }
    }
}
