//! Disjoint geodesic-ball packings with radius ν·p^(-1/(n+1)).
//!
//! Torus packings sit on a q×…×q lattice; sphere packings use
//! low-discrepancy spiral points.  Disjointness is always verified, with a
//! bounded radius-shrink fallback, never assumed.

use serde::{Deserialize, Serialize};

use crate::chain::{AmbientComplex, Metric};
use crate::error::ModelError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallPacking {
    pub centers: Vec<Vec<f64>>,
    pub radius: f64,
    pub count: usize,
    /// Packing constant actually used (after any shrink retries).
    pub nu: f64,
    pub shrink_retries: usize,
}

const TORUS_NU: f64 = 0.25;
/// Reference count used to measure the spiral nearest-neighbor constant.
const SPIRAL_REFERENCE: usize = 32;

fn min_pairwise(metric: Metric, pts: &[Vec<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            best = best.min(metric.distance(&pts[i], &pts[j]));
        }
    }
    best
}

fn torus_centers(d: usize, p: usize) -> Vec<Vec<f64>> {
    let q = (p as f64).powf(1.0 / d as f64).ceil() as usize;
    let mut out = Vec::with_capacity(p);
    let mut idx = vec![0usize; d];
    'outer: loop {
        out.push(idx.iter().map(|&i| i as f64 / q as f64).collect());
        if out.len() == p {
            break;
        }
        let mut a = 0;
        loop {
            if a == d {
                break 'outer;
            }
            idx[a] += 1;
            if idx[a] < q {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
    out
}

fn sphere_spiral(d: usize, p: usize) -> Vec<Vec<f64>> {
    let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
    // plastic constant for the 2D Kronecker sequence on S³
    let plastic = 1.324_717_957_244_746;
    (0..p)
        .map(|i| {
            let u = (i as f64 + 0.5) / p as f64;
            match d {
                2 => {
                    let z = 1.0 - 2.0 * u;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = 2.0 * std::f64::consts::PI * (i as f64 / golden).fract();
                    vec![r * phi.cos(), r * phi.sin(), z]
                }
                3 => {
                    let a = 2.0 * std::f64::consts::PI * (i as f64 / plastic).fract();
                    let b = 2.0 * std::f64::consts::PI * (i as f64 / (plastic * plastic)).fract();
                    let (su, cu) = ((1.0 - u).sqrt(), u.sqrt());
                    vec![su * a.cos(), su * a.sin(), cu * b.cos(), cu * b.sin()]
                }
                _ => unreachable!(),
            }
        })
        .collect()
}

/// The measured spiral nearest-neighbor constant for S^d, divided by 4.
pub fn sphere_nu(d: usize) -> f64 {
    let pts = sphere_spiral(d, SPIRAL_REFERENCE);
    let dmin = min_pairwise(Metric::RoundSphere, &pts);
    dmin * (SPIRAL_REFERENCE as f64).powf(1.0 / d as f64) / 4.0
}

/// Place p disjoint geodesic balls of radius ν·p^(-1/(n+1)) on the model.
pub fn ball_packing(complex: &AmbientComplex, p: usize) -> Result<BallPacking, ModelError> {
    if p == 0 {
        return Err(ModelError::InvalidArgument("p must be >= 1".into()));
    }
    let d = complex.dim();
    let (centers, nu) = match complex.metric() {
        Metric::FlatTorus => (torus_centers(d, p), TORUS_NU),
        Metric::RoundSphere => (sphere_spiral(d, p), sphere_nu(d)),
        Metric::Euclidean => {
            return Err(ModelError::InvalidArgument(
                "packings are defined for torus and sphere models".into(),
            ))
        }
    };
    let mut radius = nu * (p as f64).powf(-1.0 / d as f64);
    let separation = if p > 1 {
        min_pairwise(complex.metric(), &centers)
    } else {
        f64::INFINITY
    };
    let mut retries = 0;
    while 2.0 * radius >= separation {
        radius *= 0.9;
        retries += 1;
        if retries > 8 {
            return Err(ModelError::PackingFailed(retries));
        }
    }
    Ok(BallPacking {
        centers,
        radius,
        count: p,
        nu: radius * (p as f64).powf(1.0 / d as f64),
        shrink_retries: retries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::sphere::build_sphere;
    use crate::models::torus::build_torus;

    #[test]
    fn torus_four_balls() {
        let t = build_torus(1, 8).unwrap();
        let p = ball_packing(&t.complex, 4).unwrap();
        assert_eq!(p.count, 4);
        assert_eq!(p.shrink_retries, 0);
        assert!((p.radius - 0.25 / 2.0).abs() < 1e-12);
        let mut centers = p.centers.clone();
        centers.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(
            centers,
            vec![
                vec![0.0, 0.0],
                vec![0.0, 0.5],
                vec![0.5, 0.0],
                vec![0.5, 0.5]
            ]
        );
    }

    #[test]
    fn torus_nine_balls_radius() {
        let t = build_torus(1, 8).unwrap();
        let p = ball_packing(&t.complex, 9).unwrap();
        assert!((p.radius - 0.25 / 3.0).abs() < 1e-12);
        assert!(min_pairwise(Metric::FlatTorus, &p.centers) > 2.0 * p.radius);
    }

    #[test]
    fn s3_eight_balls_disjoint() {
        let s = build_sphere(3, 3).unwrap();
        let p = ball_packing(&s.complex, 8).unwrap();
        let dmin = min_pairwise(Metric::RoundSphere, &p.centers);
        assert!(
            dmin > 2.0 * p.radius,
            "separation {dmin} radius {}",
            p.radius
        );
    }

    #[test]
    fn disjointness_verified_across_counts() {
        let t = build_torus(2, 4).unwrap();
        for p in [1usize, 2, 3, 5, 8, 27] {
            let pk = ball_packing(&t.complex, p).unwrap();
            if p > 1 {
                assert!(min_pairwise(Metric::FlatTorus, &pk.centers) > 2.0 * pk.radius);
            }
        }
    }
}
