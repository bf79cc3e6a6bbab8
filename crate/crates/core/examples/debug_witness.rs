use std::sync::Arc;
use widthlab::models::*;
use widthlab::sweepouts::bend::BendMap;
use widthlab::sweepouts::*;
use widthlab::widths::*;
use widthlab::family::detect::is_p_sweepout;

fn main() {
    let seed = 2026u64;
    let base = Model::Torus(Arc::new(build_torus(1, 9).unwrap()));
    let field = morse_direction_normalized(base.complex(), seed).unwrap();
    let alpha_hat = 3.293f64;
    for (p, k) in [(1usize, 0usize), (2, 0), (4, 0), (8, 0), (16, 1), (32, 1)] {
        let bend = BendMap::new(&base, k, 0.2).unwrap();
        let fam = polynomial_sweepout(&field, p).unwrap();
        let packing = ball_packing(base.complex(), p).unwrap();
        let refine = {
            let mut rf = 2usize;
            while (3usize.pow((k + rf) as u32) as f64) * packing.radius < 2.5 { rf += 1; }
            rf
        };
        let pushed = pushforward(&bend, &fam, refine).unwrap();
        let det = is_p_sweepout(&pushed, p, 0.12, 5).unwrap();
        let threshold = alpha_hat / 3.0 * packing.radius;
        let hints = bent_packing_hints(&field, &bend, &pushed, &packing, threshold).unwrap();
        match packing_lower_bound(&pushed, &det, &packing, alpha_hat, &hints, seed) {
            Ok(c) => println!("p={p}: witness round {} bound {:.4} min-ball {:.4}", c.search_rounds, c.bound,
                c.ball_masses.iter().cloned().fold(f64::INFINITY, f64::min)),
            Err(e) => println!("p={p}: FAIL {e}"),
        }
    }
}
