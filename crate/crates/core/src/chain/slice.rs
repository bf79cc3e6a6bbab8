//! Radius selection for slicing a top-dimensional chain by a metric ball.
//!
//! Given an (n+1)-chain q, a center and a radius r, picks s in [r/2, r]
//! minimizing the mass of the cut `boundary(q ⌞ B_s) + boundary(q) ⌞ B_s`.
//! Candidate radii are the midpoints between consecutive barycenter
//! distances, the finitely many radii at which ball membership changes.

use crate::chain::Mod2Chain;
use crate::error::ChainError;

#[derive(Clone, Debug)]
pub struct SliceChoice {
    pub radius: f64,
    pub cut_mass: f64,
    pub cut: Mod2Chain,
    /// Mean cut mass over the candidate interval, for coarea diagnostics.
    pub mean_cut_mass: f64,
}

/// Cut of `q` by the ball of radius `s` around `center`:
/// `boundary(q restricted to the ball) + boundary(q) restricted to the ball`.
pub fn ball_cut(q: &Mod2Chain, center: &[f64], s: f64) -> Result<Mod2Chain, ChainError> {
    let complex = q.complex();
    let inside = |p: &[f64]| complex.distance(p, center) <= s;
    let restricted = q.restrict(inside);
    let cut = restricted
        .boundary()?
        .add(&q.boundary()?.restrict(inside))?;
    Ok(cut)
}

/// Choose s in [r/2, r] minimizing the cut mass.
pub fn slice_radius(q: &Mod2Chain, center: &[f64], r: f64) -> Result<SliceChoice, ChainError> {
    let complex = q.complex();
    let dim = complex.dim();
    if q.dim() != dim {
        return Err(ChainError::WrongDimension {
            want: dim,
            got: q.dim(),
        });
    }
    let limit = complex.ball_limit();
    if !(r > 0.0) || r > limit {
        return Err(ChainError::RadiusOutOfRange { r, limit });
    }

    // Breakpoints: distances of top-cell and facet barycenters near the band.
    let mut dists: Vec<f64> = Vec::new();
    for c in q.cells().iter() {
        dists.push(complex.distance(complex.barycenter(dim, c), center));
    }
    for f in 0..complex.cell_count(dim - 1) {
        dists.push(complex.distance(complex.barycenter(dim - 1, f), center));
    }
    dists.retain(|d| *d > 0.25 * r && *d < 1.25 * r);
    dists.push(0.5 * r);
    dists.push(r);
    dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
    dists.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    // Candidate radii: midpoints of consecutive breakpoints inside [r/2, r].
    let mut candidates = Vec::new();
    for w in dists.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        if mid >= 0.5 * r && mid <= r {
            candidates.push(mid);
        }
    }
    if candidates.is_empty() {
        candidates.push(0.75 * r);
    }

    let mut best: Option<SliceChoice> = None;
    let mut mass_sum = 0.0;
    for &s in &candidates {
        let cut = ball_cut(q, center, s)?;
        let m = cut.mass();
        mass_sum += m;
        if best.as_ref().map(|b| m < b.cut_mass).unwrap_or(true) {
            best = Some(SliceChoice {
                radius: s,
                cut_mass: m,
                cut,
                mean_cut_mass: 0.0,
            });
        }
    }
    let mut choice = best.expect("at least one candidate radius");
    choice.mean_cut_mass = mass_sum / candidates.len() as f64;
    Ok(choice)
}
