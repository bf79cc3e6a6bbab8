//! Parametrized families of mod-2 cycles and their discretizations.
//!
//! A [`ChainFamily`] is a rule producing an n-cycle from any parameter
//! point.  Mesh-backed families produce explicit chains on an ambient
//! complex (all our constructions are boundaries of sublevel regions, so
//! values are cycles by construction); Crofton-backed families on S³
//! produce closed-form scalar functions whose zero sets are measured by
//! great-circle sampling.

pub mod degree;
pub mod detect;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chain::flat_norm::flat_norm;
use crate::chain::{AmbientComplex, Mod2Chain};
use crate::error::FamilyError;
use crate::param::ParamComplex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Mesh,
    Crofton,
}

/// Parameter domain: an explicit cubical complex, or a projective space
/// kept implicit because only sampled coefficient vectors are ever needed
/// (the Crofton families and the high-p polynomial families).
#[derive(Clone)]
pub enum Domain {
    Complex(Arc<ParamComplex>),
    Projective { p: usize },
}

impl Domain {
    pub fn complex(&self) -> Option<&Arc<ParamComplex>> {
        match self {
            Domain::Complex(x) => Some(x),
            Domain::Projective { .. } => None,
        }
    }
}

pub type ChainRule = Arc<dyn Fn(&[f64]) -> Result<Mod2Chain, FamilyError> + Send + Sync>;
pub type RegionRule = Arc<dyn Fn(&[f64], &[f64]) -> Result<bool, FamilyError> + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(&[f64; 4]) -> f64 + Send + Sync>;
pub type ScalarRule = Arc<dyn Fn(&[f64]) -> Result<ScalarFn, FamilyError> + Send + Sync>;
pub type ParamMap = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

#[derive(Clone)]
pub struct ChainFamily {
    pub backend: Backend,
    pub domain: Domain,
    /// Declared sweepout level p of the family.
    pub level: usize,
    /// Ambient complex for mesh families.
    pub complex: Option<Arc<AmbientComplex>>,
    /// Domain coordinates -> family coefficients.
    pub param_map: ParamMap,
    /// Coefficients -> the canonical sublevel region as an (n+1)-chain
    /// (mesh backend).  Cycles are its boundary; the identification of
    /// the domain acts on regions by complement.
    pub member_region_chain: Option<ChainRule>,
    /// Coefficients × ambient point -> sublevel membership (mesh families
    /// built from regions; feeds the pushforward).
    pub member_region: Option<RegionRule>,
    /// Coefficients -> scalar function on S³ (crofton backend).
    pub member_scalar: Option<ScalarRule>,
}

impl ChainFamily {
    /// Evaluate at a point of the parameter domain (mesh backend).
    pub fn chain_at(&self, domain_point: &[f64]) -> Result<Mod2Chain, FamilyError> {
        self.chain_at_coeffs(&(self.param_map)(domain_point))
    }

    /// Evaluate at explicit family coefficients (mesh backend).
    pub fn chain_at_coeffs(&self, coeffs: &[f64]) -> Result<Mod2Chain, FamilyError> {
        Ok(self
            .region_at_coeffs(coeffs)?
            .boundary()
            .expect("top chain has a boundary"))
    }

    /// The canonical region of a member (mesh backend).
    pub fn region_at_coeffs(&self, coeffs: &[f64]) -> Result<Mod2Chain, FamilyError> {
        let rule = self
            .member_region_chain
            .as_ref()
            .ok_or(FamilyError::WrongBackend("crofton", "mesh"))?;
        rule(coeffs)
    }

    /// Scalar member for Crofton evaluation.
    pub fn scalar_at_coeffs(&self, coeffs: &[f64]) -> Result<ScalarFn, FamilyError> {
        let rule = self
            .member_scalar
            .as_ref()
            .ok_or(FamilyError::WrongBackend("mesh", "crofton"))?;
        rule(coeffs)
    }

    /// Number of coefficients of a member.
    pub fn coeff_dim(&self) -> usize {
        match &self.domain {
            Domain::Complex(x) => x.ambient_dim(),
            Domain::Projective { p } => p + 1,
        }
    }
}

/// A chain-valued map on the vertices of a parameter complex.
pub struct DiscreteMap {
    pub domain: Arc<ParamComplex>,
    pub values: Vec<Mod2Chain>,
}

impl DiscreteMap {
    /// Values must be cycles on a common complex.
    pub fn new(domain: Arc<ParamComplex>, values: Vec<Mod2Chain>) -> Result<Self, FamilyError> {
        if values.len() != domain.cell_count(0) {
            return Err(FamilyError::Topology(
                crate::error::TopologyError::InvalidArgument(
                    "one value per domain vertex required".into(),
                ),
            ));
        }
        for v in &values {
            if !v.is_cycle() {
                return Err(FamilyError::Chain(crate::error::ChainError::NotACycle(
                    v.boundary().map(|b| b.len()).unwrap_or(0),
                )));
            }
        }
        Ok(DiscreteMap { domain, values })
    }

    /// Max mass of the difference over adjacent vertex pairs.
    pub fn fineness(&self) -> f64 {
        self.domain
            .adjacency()
            .into_iter()
            .map(|(u, v)| {
                self.values[u as usize]
                    .add(&self.values[v as usize])
                    .expect("values share a complex")
                    .mass()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_mass(&self) -> f64 {
        self.values.iter().map(|v| v.mass()).fold(0.0, f64::max)
    }
}

/// Measured contract of a discretization: how fine it is, how far it sits
/// from the family between grid points, and how much mass it uses.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscretizeReport {
    pub subdivision: usize,
    pub fineness: f64,
    /// Max flat distance from the discrete map to the family, probed at
    /// the vertices of one further subdivision.
    pub max_flat_distance: f64,
    pub max_mass: f64,
}

/// Evaluate the family on the grid X(k) and measure the discretization.
pub fn discretize(
    family: &ChainFamily,
    k: usize,
) -> Result<(DiscreteMap, DiscretizeReport), FamilyError> {
    let base = family
        .domain
        .complex()
        .ok_or(FamilyError::WrongBackend("crofton", "mesh"))?;
    let grid = Arc::new(base.subdivide(k));
    let values: Result<Vec<Mod2Chain>, FamilyError> = (0..grid.cell_count(0))
        .map(|v| family.chain_at(&grid.vertex_coords(v)))
        .collect();
    let map = DiscreteMap::new(Arc::clone(&grid), values?)?;
    let fineness = map.fineness();

    // probe the gap to the family at one further subdivision
    let probe = grid.subdivide(1);
    let to_coarse = grid.nearest_vertex_map(&probe)?;
    let mut max_flat = 0.0f64;
    for v in 0..probe.cell_count(0) {
        let fine_value = family.chain_at(&probe.vertex_coords(v))?;
        let coarse_value = &map.values[to_coarse[v] as usize];
        let diff = fine_value.add(coarse_value)?;
        if diff.is_empty() {
            continue;
        }
        let d = flat_norm(&diff)?.cost;
        max_flat = max_flat.max(d);
    }

    let report = DiscretizeReport {
        subdivision: k,
        fineness,
        max_flat_distance: max_flat,
        max_mass: map.max_mass(),
    };
    Ok((map, report))
}
