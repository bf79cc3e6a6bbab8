use std::sync::Arc;
use std::time::Instant;
use widthlab::family::detect::*;
use widthlab::models::*;
use widthlab::sweepouts::bend::BendMap;
use widthlab::sweepouts::*;
use widthlab::widths::*;

fn main() {
    let t0 = Instant::now();
    let seed = 2026u64;
    let base = Model::Torus(Arc::new(build_torus(1, 9).unwrap()));
    let field = morse_direction_normalized(base.complex(), seed).unwrap();
    let threshold = calibrate_threshold(&field).unwrap();

    let cal_model = build_torus(1, 27).unwrap();
    let cal_field = morse_direction_normalized(&cal_model.complex, seed).unwrap();
    let loop_fam = linear_sweepout(&cal_field, 2).unwrap();
    let cert = is_sweepout(&loop_fam, 5).unwrap();
    let radii = [0.3, 0.25, 0.2, 0.15, 0.1];
    let mut alphas = vec![];
    for center in [[0.2, 0.3], [0.55, 0.7], [0.85, 0.15], [0.4, 0.9]] {
        let b = ball_mass_bound(&loop_fam, &cert, &center, &radii, 36).unwrap();
        alphas.push(b.alpha_hat);
    }
    let alpha_hat = alphas.iter().sum::<f64>() / alphas.len() as f64;
    println!("alpha_hat = {alpha_hat:.3} (spread {:?})", alphas.iter().map(|a| (a*100.0).round()/100.0).collect::<Vec<_>>());

    let ps = [1usize, 2, 4, 8, 16, 32];
    let mut uppers = vec![];
    let mut lowers = vec![];
    for &p in &ps {
        let k = (0..=3).rev().find(|&k| 3f64.powi(k) <= (p as f64).sqrt()).unwrap() as usize;
        let packing = ball_packing(base.complex(), p).unwrap();
        let r = packing.radius;
        // fine grid resolving the packing balls: g·r >= 2.5
        let refine = {
            let mut rf = 2usize;
            while (3usize.pow((k + rf) as u32) as f64) * r < 2.5 { rf += 1; }
            rf
        };
        let eps = 0.2f64;
        let bend = BendMap::new(&base, k, eps).unwrap();
        let fam = polynomial_sweepout(&field, p).unwrap();
        let pushed = pushforward(&bend, &fam, refine).unwrap();
        let det = is_p_sweepout(&pushed, p, threshold.value, 5).unwrap();

        // effective inner values: f at preimages of fine cell centers
        let fine = pushed.complex.as_ref().unwrap();
        let dimf = fine.dim();
        let eff: Vec<f64> = (0..fine.cell_count(dimf))
            .map(|c| field.eval(&bend.preimage(fine.barycenter(dimf, c))).unwrap())
            .collect();
        let mut hints = spread_root_hints(&eff, p, 12, seed ^ p as u64);
        let threshold_pack = alpha_hat / 3.0 * packing.radius;
        hints.extend(bent_packing_hints(&field, &bend, &pushed, &packing, threshold_pack).unwrap());
        // legacy ball-targeted roots kept as extra candidates
        // (superseded by bent_packing_hints)
        // preimage, deduplicated (a shared root serves every ball of the
        // same bend cell; doubled roots would not cross)
        let mut ball_roots: Vec<f64> = packing
            .centers
            .iter()
            .map(|c| field.eval(&bend.preimage(c)).unwrap())
            .collect();
        ball_roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ball_roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        for jitter in 0..8 {
            let jit: Vec<f64> = ball_roots
                .iter()
                .map(|&t| t + 1e-3 * (jitter as f64 - 3.5) / 3.5 + 1.7e-8)
                .collect();
            let mut coeffs = poly_from_roots(&jit);
            coeffs.resize(p + 1, 0.0);
            hints.push(coeffs);
        }

        let est = upper_estimate(&pushed, &det, 128, 2, seed ^ p as u64, &CroftonBudget::default(), &hints).unwrap();
        println!("p={p} k={k} g={} detected={} upper={:.3} diag={:.4}", 3usize.pow((k+refine) as u32), det.detected, est.value, est.diagnostic);
        uppers.push((p, est.value));

        match packing_lower_bound(&pushed, &det, &packing, alpha_hat, &hints, seed) {
            Ok(c) => { println!("  witness round {} bound {:.4} masses[0..3] {:?}", c.search_rounds, c.bound, &c.ball_masses[..c.ball_masses.len().min(3)]); lowers.push((p, c.bound)); }
            Err(e) => println!("  NO WITNESS: {e}"),
        }
    }
    let up_fit = scaling_fit(&uppers, 0.5).unwrap();
    println!("upper slope {:.3} (stderr {:.3}) weyl {:?}", up_fit.slope, up_fit.slope_stderr,
        up_fit.weyl_ratios.iter().map(|(_, w)| (w * 100.0).round() / 100.0).collect::<Vec<_>>());
    if lowers.len() >= 4 {
        let lo_fit = scaling_fit(&lowers, 0.5).unwrap();
        println!("lower slope {:.3} weyl {:?}", lo_fit.slope,
            lo_fit.weyl_ratios.iter().map(|(_, w)| (w * 1000.0).round() / 1000.0).collect::<Vec<_>>());
    }
    println!("total {:?}", t0.elapsed());
}
