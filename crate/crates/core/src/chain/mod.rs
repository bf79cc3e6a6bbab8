//! Mod-2 chains on a metrized cell complex.
//!
//! An [`AmbientComplex`] is a finite regular cell complex modelling a closed
//! (n+1)-manifold: cells indexed per dimension, mod-2 boundary incidence,
//! a positive weight (length / area / volume) per cell, barycenters in an
//! embedding space and a metric for ball queries.  A [`Mod2Chain`] is a set
//! of cells of one dimension; addition is symmetric difference, mass is the
//! weight sum, and the boundary operator sends a cell to the mod-2 sum of
//! its faces.
//!
//! [`flat_norm`](crate::chain::flat_norm::flat_norm) and the filling
//! machinery live in the submodules.

pub mod flat_norm;
pub mod mincut;
pub mod slice;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bits::CellSet;
use crate::error::ChainError;

/// Point of the embedding space (ℝ², ℝ³ or ℝ⁴ depending on the model).
pub type Point = Vec<f64>;

/// Metric used for distances between barycenters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    /// Plain Euclidean distance of the embedding coordinates.
    Euclidean,
    /// Coordinates live in [0,1)^d with unit period per axis.
    FlatTorus,
    /// Points are (projected to) the unit sphere; distance is arc length.
    RoundSphere,
}

impl Metric {
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            Metric::FlatTorus => a
                .iter()
                .zip(b)
                .map(|(x, y)| {
                    let d = (x - y).abs() % 1.0;
                    let d = d.min(1.0 - d);
                    d * d
                })
                .sum::<f64>()
                .sqrt(),
            Metric::RoundSphere => {
                let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
                let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
                let dot = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / (na * nb);
                dot.clamp(-1.0, 1.0).acos()
            }
        }
    }
}

/// Finite metrized cell complex of a closed manifold.
///
/// Invariants checked at construction:
/// * boundary-of-boundary vanishes mod 2 in every dimension;
/// * every n-cell bounds exactly two (n+1)-cells (closed-manifold condition);
/// * every weight is strictly positive.
pub struct AmbientComplex {
    id: String,
    dim: usize,
    /// `bnd[q][c]` lists the (q-1)-faces of q-cell `c`, for q in 1..=dim.
    /// Index 0 is an empty placeholder so `bnd[q]` lines up with dimension q.
    bnd: Vec<Vec<Vec<u32>>>,
    /// The two (n+1)-cofaces of each n-cell.
    top_cofaces: Vec<[u32; 2]>,
    /// `weights[q][c]` is the q-dimensional measure of cell `c`.
    weights: Vec<Vec<f64>>,
    /// `bary[q][c]` is the barycenter of cell `c` in the embedding space.
    bary: Vec<Vec<Point>>,
    metric: Metric,
    total_volume: f64,
    /// Largest admissible geodesic-ball radius (half the model diameter).
    ball_limit: f64,
}

impl AmbientComplex {
    /// Assemble and validate a complex. `bnd[q]` must be provided for
    /// q = 1..=dim (entry 0 is ignored and may be empty).
    pub fn new(
        id: String,
        dim: usize,
        bnd: Vec<Vec<Vec<u32>>>,
        weights: Vec<Vec<f64>>,
        bary: Vec<Vec<Point>>,
        metric: Metric,
        ball_limit: f64,
    ) -> Result<Self, String> {
        if bnd.len() != dim + 1 || weights.len() != dim + 1 || bary.len() != dim + 1 {
            return Err("per-dimension tables must have length dim+1".into());
        }
        // Cell counts are set by the weight tables; boundary lists must agree
        // in length and reference valid faces one dimension down.
        for q in 0..=dim {
            if bary[q].len() != weights[q].len() {
                return Err(format!("table length mismatch in dimension {q}"));
            }
            if weights[q].iter().any(|w| !(*w > 0.0)) {
                return Err(format!("non-positive weight in dimension {q}"));
            }
            if q >= 1 {
                if bnd[q].len() != weights[q].len() {
                    return Err(format!("boundary table length mismatch in dimension {q}"));
                }
                let below = weights[q - 1].len() as u32;
                if bnd[q].iter().flatten().any(|&f| f >= below) {
                    return Err(format!("face index out of range in dimension {q}"));
                }
            }
        }
        // d∘d = 0: every (q-2)-cell appears an even number of times among
        // the faces of the faces of each q-cell.
        for q in 2..=dim {
            for faces in &bnd[q] {
                let mut seen = std::collections::HashMap::new();
                for &f in faces {
                    for &e in &bnd[q - 1][f as usize] {
                        *seen.entry(e).or_insert(0usize) += 1;
                    }
                }
                if seen.values().any(|c| c % 2 != 0) {
                    return Err(format!("boundary of boundary nonzero in dimension {q}"));
                }
            }
        }
        // Closed manifold: each n-cell has exactly two top cofaces.
        let n_cells = weights[dim - 1].len();
        let mut cof: Vec<Vec<u32>> = vec![Vec::new(); n_cells];
        for (c, faces) in bnd[dim].iter().enumerate() {
            for &f in faces {
                cof[f as usize].push(c as u32);
            }
        }
        let mut top_cofaces = Vec::with_capacity(n_cells);
        for (f, cs) in cof.iter().enumerate() {
            if cs.len() != 2 {
                return Err(format!(
                    "facet {f} has {} top cofaces; closed manifold needs 2",
                    cs.len()
                ));
            }
            top_cofaces.push([cs[0], cs[1]]);
        }
        let total_volume = weights[dim].iter().sum();
        Ok(AmbientComplex {
            id,
            dim,
            bnd,
            top_cofaces,
            weights,
            bary,
            metric,
            total_volume,
            ball_limit,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Dimension of the modelled manifold plus one, i.e. the top cell dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of cells of dimension q.
    pub fn cell_count(&self, q: usize) -> usize {
        self.weights[q].len()
    }

    pub fn weight(&self, q: usize, cell: usize) -> f64 {
        self.weights[q][cell]
    }

    pub fn barycenter(&self, q: usize, cell: usize) -> &[f64] {
        &self.bary[q][cell]
    }

    pub fn vertex_position(&self, v: usize) -> &[f64] {
        &self.bary[0][v]
    }

    pub fn faces(&self, q: usize, cell: usize) -> &[u32] {
        &self.bnd[q][cell]
    }

    /// The two top cells adjacent across facet `f` (dual-graph edge).
    pub fn facet_cofaces(&self, f: usize) -> [u32; 2] {
        self.top_cofaces[f]
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        self.metric.distance(a, b)
    }

    pub fn total_volume(&self) -> f64 {
        self.total_volume
    }

    pub fn ball_limit(&self) -> f64 {
        self.ball_limit
    }

    /// Serializable mirror of the full cell tables.
    pub fn to_data(&self) -> AmbientComplexData {
        AmbientComplexData {
            id: self.id.clone(),
            dim: self.dim,
            boundaries: self.bnd.clone(),
            weights: self.weights.clone(),
            barycenters: self.bary.clone(),
            metric: self.metric,
            ball_limit: self.ball_limit,
        }
    }

    pub fn from_data(d: AmbientComplexData) -> Result<Arc<Self>, String> {
        AmbientComplex::new(
            d.id,
            d.dim,
            d.boundaries,
            d.weights,
            d.barycenters,
            d.metric,
            d.ball_limit,
        )
        .map(Arc::new)
    }
}

impl std::fmt::Debug for AmbientComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "AmbientComplex({}, dim {}, {} top cells)",
            self.id,
            self.dim,
            self.cell_count(self.dim)
        )
    }
}

/// JSON mirror of an [`AmbientComplex`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmbientComplexData {
    pub id: String,
    pub dim: usize,
    pub boundaries: Vec<Vec<Vec<u32>>>,
    pub weights: Vec<Vec<f64>>,
    pub barycenters: Vec<Vec<Point>>,
    pub metric: Metric,
    pub ball_limit: f64,
}

/// A mod-2 chain: a set of cells of one dimension on one complex.
#[derive(Clone)]
pub struct Mod2Chain {
    complex: Arc<AmbientComplex>,
    dim: usize,
    cells: CellSet,
}

impl Mod2Chain {
    pub fn empty(complex: &Arc<AmbientComplex>, dim: usize) -> Self {
        let n = complex.cell_count(dim);
        Mod2Chain {
            complex: Arc::clone(complex),
            dim,
            cells: CellSet::empty(n),
        }
    }

    pub fn from_cells<I: IntoIterator<Item = usize>>(
        complex: &Arc<AmbientComplex>,
        dim: usize,
        cells: I,
    ) -> Result<Self, ChainError> {
        let n = complex.cell_count(dim);
        let mut set = CellSet::empty(n);
        for c in cells {
            if c >= n {
                return Err(ChainError::WrongDimension { want: dim, got: c });
            }
            set.insert(c);
        }
        Ok(Mod2Chain {
            complex: Arc::clone(complex),
            dim,
            cells: set,
        })
    }

    pub fn from_set(complex: &Arc<AmbientComplex>, dim: usize, cells: CellSet) -> Self {
        debug_assert_eq!(cells.universe(), complex.cell_count(dim));
        Mod2Chain {
            complex: Arc::clone(complex),
            dim,
            cells,
        }
    }

    /// The fundamental (n+1)-chain: all top cells.
    pub fn fundamental(complex: &Arc<AmbientComplex>) -> Self {
        let dim = complex.dim();
        let n = complex.cell_count(dim);
        Mod2Chain::from_set(complex, dim, CellSet::from_indices(n, 0..n))
    }

    pub fn complex(&self) -> &Arc<AmbientComplex> {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &CellSet {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    fn check_compatible(&self, other: &Mod2Chain) -> Result<(), ChainError> {
        if self.dim != other.dim {
            return Err(ChainError::DimensionMismatch(self.dim, other.dim));
        }
        if !Arc::ptr_eq(&self.complex, &other.complex) && self.complex.id() != other.complex.id() {
            return Err(ChainError::ComplexMismatch(
                self.complex.id().to_string(),
                other.complex.id().to_string(),
            ));
        }
        Ok(())
    }

    /// Mod-2 sum: symmetric difference of the cell sets.
    pub fn add(&self, other: &Mod2Chain) -> Result<Mod2Chain, ChainError> {
        self.check_compatible(other)?;
        let mut cells = self.cells.clone();
        cells.xor_assign(&other.cells);
        Ok(Mod2Chain {
            complex: Arc::clone(&self.complex),
            dim: self.dim,
            cells,
        })
    }

    /// Mod-2 boundary: each cell contributes its faces.
    pub fn boundary(&self) -> Result<Mod2Chain, ChainError> {
        if self.dim == 0 {
            return Err(ChainError::ZeroDimensional);
        }
        let q = self.dim;
        let n = self.complex.cell_count(q - 1);
        let mut out = CellSet::empty(n);
        for c in self.cells.iter() {
            for &f in self.complex.faces(q, c) {
                out.toggle(f as usize);
            }
        }
        Ok(Mod2Chain {
            complex: Arc::clone(&self.complex),
            dim: q - 1,
            cells: out,
        })
    }

    /// Weight sum of the cells; 0 for the empty chain.
    pub fn mass(&self) -> f64 {
        self.cells
            .iter()
            .map(|c| self.complex.weight(self.dim, c))
            .sum()
    }

    pub fn is_cycle(&self) -> bool {
        match self.dim {
            0 => true,
            _ => self.boundary().map(|b| b.is_empty()).unwrap_or(false),
        }
    }

    /// Cells whose barycenter satisfies `pred`.
    pub fn restrict<F: Fn(&[f64]) -> bool>(&self, pred: F) -> Mod2Chain {
        let mut out = CellSet::empty(self.cells.universe());
        for c in self.cells.iter() {
            if pred(self.complex.barycenter(self.dim, c)) {
                out.insert(c);
            }
        }
        Mod2Chain {
            complex: Arc::clone(&self.complex),
            dim: self.dim,
            cells: out,
        }
    }

    pub fn to_data(&self) -> Mod2ChainData {
        Mod2ChainData {
            dimension: self.dim,
            cells: self.cells.iter().map(|c| c as u32).collect(),
            complex_id: self.complex.id().to_string(),
        }
    }

    pub fn from_data(
        complex: &Arc<AmbientComplex>,
        data: &Mod2ChainData,
    ) -> Result<Self, ChainError> {
        if data.complex_id != complex.id() {
            return Err(ChainError::ComplexMismatch(
                data.complex_id.clone(),
                complex.id().to_string(),
            ));
        }
        Mod2Chain::from_cells(
            complex,
            data.dimension,
            data.cells.iter().map(|&c| c as usize),
        )
    }
}

impl std::fmt::Debug for Mod2Chain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Mod2Chain(dim {}, {} cells on {})",
            self.dim,
            self.cells.len(),
            self.complex.id()
        )
    }
}

/// JSON form of a chain: `{dimension, sorted cell-id list, complex-id}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mod2ChainData {
    pub dimension: usize,
    pub cells: Vec<u32>,
    pub complex_id: String,
}
