//! widthlab: a discrete laboratory for min-max widths of closed manifolds.
//!
//! The crate builds mod-2 cycle families over cubical parameter complexes,
//! measures them (mass, flat norm via exact min-cut, Crofton sampling on
//! S³), detects sweepouts and p-sweepouts through loop degrees and Z₂ cup
//! products, and estimates the width spectrum ω_p together with its
//! p^(1/(n+1)) scaling from both sides.
//!
//! Layering, bottom up:
//! * [`bits`], [`chain`] — chain algebra, flat norms, fillings, slicing.
//! * [`models`] — flat tori, cubed spheres, the octahedron, scalar fields,
//!   ball packings and the Crofton estimator.
//! * [`param`] — cubical parameter complexes, quotients (projective
//!   spaces, parameter tori, circles) and Z₂ (co)homology with cup
//!   products.
//! * [`family`] — chain-valued families, discretization, loop degrees and
//!   sweepout detection.
//! * [`sweepouts`] — the explicit families: level-set loops, polynomial
//!   families over projective space, harmonic families on S³, and the
//!   skeleton-retraction (bend) pushforward.
//! * [`widths`] — upper estimates, packing lower bounds, scaling fits.
//! * [`runner`] — reproducible experiment scenarios behind the CLI.

pub mod bits;
pub mod chain;
pub mod error;
pub mod family;
pub mod models;
pub mod param;
pub mod runner;
pub mod widths;
pub mod sweepouts;

pub use chain::flat_norm::{flat_norm, flat_norm_exhaustive, isoperimetric_choice, Filling};
pub use chain::{AmbientComplex, Metric, Mod2Chain};
