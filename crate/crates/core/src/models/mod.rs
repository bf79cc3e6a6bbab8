//! Concrete metrized manifold models: flat tori, round spheres, the unit
//! octahedron, plus scalar fields, geodesic balls, packings and the
//! Crofton mass estimator.

pub mod crofton;
pub mod field;
pub mod packing;
pub mod sphere;
pub mod torus;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chain::AmbientComplex;
use crate::error::ModelError;

pub use crofton::{crofton_mass, crofton_mass_with_diagnostic, CroftonEstimate};
pub use field::{field_from_form, geodesic_ball, level_cycle, linear_field, morse_direction,
                morse_direction_normalized, sublevel_region, ClosedForm, GeodesicBall,
                ScalarField};
pub use packing::{ball_packing, BallPacking};
pub use sphere::{build_octahedron, build_sphere, round_volume, OctahedronModel, SphereModel};
pub use torus::{build_torus, TorusModel};

/// A built model together with the descriptor it came from.
#[derive(Clone)]
pub enum Model {
    Torus(Arc<TorusModel>),
    Sphere(Arc<SphereModel>),
    Octahedron(Arc<OctahedronModel>),
}

impl Model {
    pub fn complex(&self) -> &Arc<AmbientComplex> {
        match self {
            Model::Torus(m) => &m.complex,
            Model::Sphere(m) => &m.complex,
            Model::Octahedron(m) => &m.complex,
        }
    }

    pub fn descriptor(&self) -> ModelDescriptor {
        match self {
            Model::Torus(m) => ModelDescriptor::Torus { n: m.n, g: m.g },
            Model::Sphere(m) => ModelDescriptor::Sphere { d: m.d, g: m.g },
            Model::Octahedron(_) => ModelDescriptor::Octahedron,
        }
    }
}

impl std::fmt::Debug for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Model({})", self.complex().id())
    }
}

/// Serializable model descriptor; building from it is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelDescriptor {
    Torus { n: usize, g: usize },
    Sphere { d: usize, g: usize },
    Octahedron,
}

impl ModelDescriptor {
    pub fn build(&self) -> Result<Model, ModelError> {
        match *self {
            ModelDescriptor::Torus { n, g } => Ok(Model::Torus(Arc::new(build_torus(n, g)?))),
            ModelDescriptor::Sphere { d, g } => Ok(Model::Sphere(Arc::new(build_sphere(d, g)?))),
            ModelDescriptor::Octahedron => Ok(Model::Octahedron(Arc::new(build_octahedron()))),
        }
    }
}
