//! The five scenarios behind `widthlab run`.

pub mod detection_suite;
pub mod flatnorm_oracle;
pub mod packing_bound;
pub mod s3_targets;
pub mod width_scan;

use crate::error::RunnerError;
use crate::family::ChainFamily;
use crate::models::{Model, ModelDescriptor, ScalarField};
use crate::sweepouts::bend::BendMap;
use crate::sweepouts::FamilyDescriptor;

/// Paper-style bend level: the largest k with 3^k ≤ p^(1/(n+1)).
pub fn bend_level(p: usize, manifold_dim: usize) -> usize {
    let target = (p as f64).powf(1.0 / manifold_dim as f64);
    (0..=6)
        .rev()
        .find(|&k| 3f64.powi(k) <= target + 1e-12)
        .unwrap_or(0) as usize
}

/// Refinement below the bend grid so a ball of radius r spans at least
/// ~2.5 fine cells (masses inside the packing balls resolve).
pub fn refine_for_radius(k: usize, r: f64) -> usize {
    let mut refine = 2usize;
    while (3usize.pow((k + refine) as u32) as f64) * r < 2.5 && refine < 6 {
        refine += 1;
    }
    refine
}

/// Build the bent polynomial family for one p value.
pub struct BentFamily {
    pub p: usize,
    pub k: usize,
    pub refine: usize,
    pub family: ChainFamily,
    pub bend: BendMap,
    pub descriptor: FamilyDescriptor,
}

pub fn bent_polynomial(
    model: &Model,
    model_desc: &ModelDescriptor,
    field: &ScalarField,
    p: usize,
    epsilon: f64,
    ball_radius: f64,
) -> Result<BentFamily, RunnerError> {
    let dim = model.complex().dim();
    let k = bend_level(p, dim);
    let refine = refine_for_radius(k, ball_radius);
    let bend = BendMap::new(model, k, epsilon)?;
    let base = crate::sweepouts::polynomial_sweepout(field, p)?;
    let family = crate::sweepouts::pushforward(&bend, &base, refine)?;
    let descriptor = FamilyDescriptor::Pushforward {
        inner: Box::new(FamilyDescriptor::Polynomial {
            model: model_desc.clone(),
            form: field.form().expect("closed-form field").clone(),
            p,
            domain_level: 1,
        }),
        bend_level: k,
        epsilon,
        refine,
    };
    Ok(BentFamily {
        p,
        k,
        refine,
        family,
        bend,
        descriptor,
    })
}
