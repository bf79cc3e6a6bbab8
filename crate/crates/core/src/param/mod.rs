//! Cubical parameter complexes in I^m with 3-adic subdivisions.
//!
//! Cells are products α₁⊗…⊗α_m of points and unit spans of the 3^j grid.
//! Quotient identifications turn the cube boundary into a projective
//! space (antipodal map) and the full grid into a parameter torus or
//! circle (coordinate wrap).  All keys are canonicalized under the
//! identification, so a quotient complex is just a plain complex whose
//! cells happen to have several geometric representatives.

pub mod cohomology;
pub mod gf2;
pub mod simplicial;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::TopologyError;

/// One axis of a cell: a grid point i/3^j or the span [i, i+1]/3^j.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Axis {
    Point(u32),
    Span(u32),
}

impl Axis {
    fn is_span(&self) -> bool {
        matches!(self, Axis::Span(_))
    }
}

pub type CellKey = Vec<Axis>;

/// Identification applied to keys before indexing.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Quotient {
    None,
    /// x ↦ 1 - x on every axis (projective identification on ∂I^m).
    Antipodal,
    /// coordinates mod 1 on every axis (torus / circle).
    Wrap,
}

#[derive(Clone)]
pub struct ParamComplex {
    m: usize,
    level: usize,
    quotient: Quotient,
    /// canonical keys per dimension, in insertion order
    cells: Vec<Vec<CellKey>>,
    index: Vec<HashMap<CellKey, u32>>,
}

impl ParamComplex {
    /// Grid size 3^level per axis.
    fn n(&self) -> u32 {
        3u32.pow(self.level as u32)
    }

    pub fn ambient_dim(&self) -> usize {
        self.m
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn quotient(&self) -> Quotient {
        self.quotient
    }

    pub fn dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cell_count(&self, q: usize) -> usize {
        self.cells.get(q).map(|v| v.len()).unwrap_or(0)
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(|v| v.len()).sum()
    }

    pub fn cell_key(&self, q: usize, id: usize) -> &CellKey {
        &self.cells[q][id]
    }

    pub fn cell_id(&self, key: &CellKey) -> Option<(usize, u32)> {
        let q = key.iter().filter(|a| a.is_span()).count();
        self.index
            .get(q)
            .and_then(|ix| ix.get(&self.canonical(key.clone())).copied())
            .map(|id| (q, id))
    }

    pub fn contains_key(&self, key: &CellKey) -> bool {
        self.cell_id(key).is_some()
    }

    fn canonical(&self, mut key: CellKey) -> CellKey {
        match self.quotient {
            Quotient::None => key,
            Quotient::Wrap => {
                let n = self.n();
                for a in key.iter_mut() {
                    *a = match *a {
                        Axis::Point(i) => Axis::Point(i % n),
                        Axis::Span(i) => Axis::Span(i % n),
                    };
                }
                key
            }
            Quotient::Antipodal => {
                let n = self.n();
                let anti: CellKey = key
                    .iter()
                    .map(|a| match *a {
                        Axis::Point(i) => Axis::Point(n - i),
                        Axis::Span(i) => Axis::Span(n - 1 - i),
                    })
                    .collect();
                if anti < key {
                    anti
                } else {
                    key
                }
            }
        }
    }

    /// Faces of a cell, canonicalized (one entry per span axis and side).
    pub fn face_keys(&self, key: &CellKey) -> Vec<CellKey> {
        let mut out = Vec::new();
        for (a, ax) in key.iter().enumerate() {
            if let Axis::Span(i) = *ax {
                for p in [i, i + 1] {
                    let mut f = key.clone();
                    f[a] = Axis::Point(p);
                    out.push(self.canonical(f));
                }
            }
        }
        out
    }

    /// Corner vertices of a cell (2^q of them), canonicalized.
    pub fn corner_keys(&self, key: &CellKey) -> Vec<CellKey> {
        let spans: Vec<usize> = key
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_span())
            .map(|(i, _)| i)
            .collect();
        let mut out = Vec::with_capacity(1 << spans.len());
        for bits in 0u32..(1 << spans.len()) {
            let mut c = key.clone();
            for (slot, &a) in spans.iter().enumerate() {
                if let Axis::Span(i) = key[a] {
                    c[a] = Axis::Point(i + (bits >> slot & 1));
                }
            }
            out.push(self.canonical(c));
        }
        out
    }

    pub fn vertex_id(&self, key: &CellKey) -> Option<u32> {
        self.index[0].get(&self.canonical(key.clone())).copied()
    }

    /// Representative coordinates of a vertex in I^m.
    pub fn vertex_coords(&self, id: usize) -> Vec<f64> {
        let n = self.n() as f64;
        self.cells[0][id]
            .iter()
            .map(|a| match *a {
                Axis::Point(i) => i as f64 / n,
                Axis::Span(_) => unreachable!("vertex key has no spans"),
            })
            .collect()
    }

    /// Representative coordinates of both endpoints of a 1-cell, taken from
    /// the same representative key so they are coherent under quotients.
    pub fn edge_coords(&self, id: usize) -> (Vec<f64>, Vec<f64>) {
        let n = self.n() as f64;
        let key = &self.cells[1][id];
        let mut lo = Vec::with_capacity(self.m);
        let mut hi = Vec::with_capacity(self.m);
        for a in key {
            match *a {
                Axis::Point(i) => {
                    lo.push(i as f64 / n);
                    hi.push(i as f64 / n);
                }
                Axis::Span(i) => {
                    lo.push(i as f64 / n);
                    hi.push((i + 1) as f64 / n);
                }
            }
        }
        (lo, hi)
    }

    /// Endpoint vertex ids of a 1-cell, ordered as (low, high) side.
    pub fn edge_vertices(&self, id: usize) -> (u32, u32) {
        let key = &self.cells[1][id];
        let mut lo = key.clone();
        let mut hi = key.clone();
        for (a, ax) in key.iter().enumerate() {
            if let Axis::Span(i) = *ax {
                lo[a] = Axis::Point(i);
                hi[a] = Axis::Point(i + 1);
            }
        }
        (
            self.vertex_id(&lo).expect("face closure"),
            self.vertex_id(&hi).expect("face closure"),
        )
    }

    /// Vertex pairs sharing a 1-cell.
    pub fn adjacency(&self) -> Vec<(u32, u32)> {
        (0..self.cell_count(1))
            .map(|e| self.edge_vertices(e))
            .collect()
    }

    fn insert_cell(&mut self, key: CellKey) {
        let key = self.canonical(key);
        let q = key.iter().filter(|a| a.is_span()).count();
        while self.cells.len() <= q {
            self.cells.push(Vec::new());
            self.index.push(HashMap::new());
        }
        if !self.index[q].contains_key(&key) {
            self.index[q].insert(key.clone(), self.cells[q].len() as u32);
            self.cells[q].push(key);
        }
    }

    /// Insert a cell and all of its faces.
    fn insert_closed(&mut self, key: CellKey) {
        let key = self.canonical(key);
        if self.contains_key(&key) {
            return;
        }
        self.insert_cell(key.clone());
        for f in self.face_keys(&key) {
            self.insert_closed(f);
        }
    }

    fn empty(m: usize, level: usize, quotient: Quotient) -> Self {
        ParamComplex {
            m,
            level,
            quotient,
            cells: vec![Vec::new()],
            index: vec![HashMap::new()],
        }
    }

    /// Every q-cell of the complex, as (dimension, id) pairs.
    pub fn all_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.cells.len()).flat_map(move |q| (0..self.cell_count(q)).map(move |i| (q, i)))
    }

    /// Subdivide every cell k more levels (3-adic).
    pub fn subdivide(&self, k: usize) -> ParamComplex {
        if k == 0 {
            return self.clone();
        }
        let scale = 3u32.pow(k as u32);
        let mut out = ParamComplex::empty(self.m, self.level + k, self.quotient);
        for q in 0..self.cells.len() {
            for key in &self.cells[q] {
                // product of subdivided axes
                let mut partial: Vec<CellKey> = vec![Vec::new()];
                for ax in key {
                    let mut next = Vec::new();
                    for base in &partial {
                        match *ax {
                            Axis::Point(i) => {
                                let mut b = base.clone();
                                b.push(Axis::Point(i * scale));
                                next.push(b);
                            }
                            Axis::Span(i) => {
                                for s in 0..scale {
                                    let mut b = base.clone();
                                    b.push(Axis::Span(i * scale + s));
                                    next.push(b);
                                }
                                for s in 1..scale {
                                    let mut b = base.clone();
                                    b.push(Axis::Point(i * scale + s));
                                    next.push(b);
                                }
                            }
                        }
                    }
                    partial = next;
                }
                for sub in partial {
                    out.insert_closed(sub);
                }
            }
        }
        out
    }

    /// Map every vertex of the subdivision `fine` (level i) to its nearest
    /// vertex in this complex (level j ≤ i).  Ties cannot occur on 3-adic
    /// grids because a coordinate would need fractional part exactly 1/2.
    pub fn nearest_vertex_map(&self, fine: &ParamComplex) -> Result<Vec<u32>, TopologyError> {
        if fine.level < self.level || fine.m != self.m {
            return Err(TopologyError::InvalidArgument(
                "nearest-vertex map needs a finer subdivision of the same cube".into(),
            ));
        }
        let scale = 3u32.pow((fine.level - self.level) as u32);
        let mut out = Vec::with_capacity(fine.cell_count(0));
        for v in 0..fine.cell_count(0) {
            let key = &fine.cells[0][v];
            let coarse: CellKey = key
                .iter()
                .map(|a| match *a {
                    Axis::Point(i) => {
                        let lo = i / scale;
                        let rem = i % scale;
                        debug_assert!(2 * rem != scale, "3-adic grids cannot tie");
                        Axis::Point(if 2 * rem < scale { lo } else { lo + 1 })
                    }
                    Axis::Span(_) => unreachable!(),
                })
                .collect();
            let id = self.vertex_id(&coarse).ok_or_else(|| {
                TopologyError::InvalidArgument("nearest coarse vertex not in complex".into())
            })?;
            out.push(id);
        }
        Ok(out)
    }

    /// Union of cells all of whose vertices satisfy `pred` (face-closed by
    /// construction).
    pub fn subcomplex_where<F: Fn(usize) -> bool>(&self, pred: F) -> ParamComplex {
        let mut out = ParamComplex::empty(self.m, self.level, self.quotient);
        for q in 0..self.cells.len() {
            for key in &self.cells[q] {
                let ok = self.corner_keys(key).iter().all(|c| {
                    self.vertex_id(c)
                        .map(|v| pred(v as usize))
                        .unwrap_or(false)
                });
                if ok {
                    out.insert_cell(key.clone());
                }
            }
        }
        out
    }

    /// Smallest subcomplex containing every cell of `self` not in `y`.
    pub fn closure_complement(&self, y: &ParamComplex) -> ParamComplex {
        let mut out = ParamComplex::empty(self.m, self.level, self.quotient);
        for q in 0..self.cells.len() {
            for key in &self.cells[q] {
                if !y.contains_key(key) {
                    out.insert_closed(key.clone());
                }
            }
        }
        out
    }

    /// Does `other` contain every cell of `self`?
    pub fn subset_of(&self, other: &ParamComplex) -> bool {
        self.cells
            .iter()
            .flatten()
            .all(|key| other.contains_key(key))
    }

    /// Union of two subcomplexes of a common complex.
    pub fn union(&self, other: &ParamComplex) -> ParamComplex {
        let mut out = self.clone();
        for q in 0..other.cells.len() {
            for key in &other.cells[q] {
                out.insert_cell(key.clone());
            }
        }
        out
    }

    /// Euler characteristic mod 2 from cell counts.
    pub fn euler_mod2(&self) -> u8 {
        (self.total_cells() % 2) as u8
    }
}

impl std::fmt::Debug for ParamComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let counts: Vec<usize> = (0..self.cells.len()).map(|q| self.cell_count(q)).collect();
        write!(
            f,
            "ParamComplex(I^{} level {} {:?}, cells {:?})",
            self.m, self.level, self.quotient, counts
        )
    }
}

/// The full cube I^m at subdivision level j.
pub fn cube(m: usize, j: usize) -> ParamComplex {
    let n = 3u32.pow(j as u32);
    let mut out = ParamComplex::empty(m, j, Quotient::None);
    let mut stack: Vec<CellKey> = vec![Vec::new()];
    while let Some(partial) = stack.pop() {
        if partial.len() == m {
            out.insert_cell(partial);
            continue;
        }
        for i in 0..n {
            let mut k = partial.clone();
            k.push(Axis::Span(i));
            stack.push(k);
        }
        for i in 0..=n {
            let mut k = partial.clone();
            k.push(Axis::Point(i));
            stack.push(k);
        }
    }
    out
}

/// Boundary complex of I^m at level j (no identification).
pub fn cube_boundary(m: usize, j: usize) -> ParamComplex {
    let full = cube(m, j);
    let n = 3u32.pow(j as u32);
    let mut out = ParamComplex::empty(m, j, Quotient::None);
    for q in 0..full.cells.len() {
        for key in &full.cells[q] {
            let on_boundary = key
                .iter()
                .any(|a| matches!(a, Axis::Point(i) if *i == 0 || *i == n));
            if on_boundary {
                out.insert_cell(key.clone());
            }
        }
    }
    out
}

/// Circle: I(1, j) with endpoints wrapped; 3^j vertices and edges.
pub fn circle(j: usize) -> Result<ParamComplex, TopologyError> {
    if j == 0 {
        return Err(TopologyError::InvalidArgument(
            "circle needs level >= 1".into(),
        ));
    }
    let n = 3u32.pow(j as u32);
    let mut out = ParamComplex::empty(1, j, Quotient::Wrap);
    for i in 0..n {
        out.insert_cell(vec![Axis::Span(i)]);
        out.insert_cell(vec![Axis::Point(i)]);
    }
    Ok(out)
}

/// Parameter torus: I(m, j) with both coordinates wrapped.
pub fn torus_param(m: usize, j: usize) -> Result<ParamComplex, TopologyError> {
    if j == 0 {
        return Err(TopologyError::InvalidArgument(
            "torus quotient needs level >= 1".into(),
        ));
    }
    let full = cube(m, j);
    let n = 3u32.pow(j as u32);
    let mut out = ParamComplex::empty(m, j, Quotient::Wrap);
    for q in 0..full.cells.len() {
        for key in &full.cells[q] {
            // drop the duplicate seam cells (coordinate == n)
            if key.iter().any(|a| matches!(a, Axis::Point(i) if *i == n)) {
                continue;
            }
            out.insert_cell(key.clone());
        }
    }
    Ok(out)
}

/// Projective space RP^p: the j-subdivided boundary of I^(p+1) with
/// antipodal identification, together with an explicit generator loop of
/// the fundamental group (as a vertex-id walk, closed in the quotient).
pub fn projective_space(p: usize, j: usize) -> Result<(ParamComplex, Vec<u32>), TopologyError> {
    if p == 0 {
        return Err(TopologyError::InvalidArgument("p must be >= 1".into()));
    }
    if j == 0 {
        return Err(TopologyError::InvalidArgument(
            "antipodal quotient needs level >= 1".into(),
        ));
    }
    let m = p + 1;
    let raw = cube_boundary(m, j);
    let mut out = ParamComplex::empty(m, j, Quotient::Antipodal);
    for q in 0..raw.cells.len() {
        for key in &raw.cells[q] {
            out.insert_cell(key.clone());
        }
    }
    // generator: walk from (0,…,0) to (1,…,1) along axis legs; each leg
    // stays on the boundary because another coordinate sits at 0 or 1
    let n = 3u32.pow(j as u32);
    let mut walk: Vec<u32> = Vec::new();
    let mut pos = vec![0u32; m];
    let push = |walk: &mut Vec<u32>, pos: &[u32], out: &ParamComplex| {
        let key: CellKey = pos.iter().map(|&c| Axis::Point(c)).collect();
        walk.push(out.vertex_id(&key).expect("walk stays in the complex"));
    };
    push(&mut walk, &pos, &out);
    for a in 0..m {
        for _ in 0..n {
            pos[a] += 1;
            push(&mut walk, &pos, &out);
        }
    }
    // endpoints are antipodal, so the walk closes up in the quotient
    debug_assert_eq!(walk.first(), walk.last());
    walk.pop();
    Ok((out, walk))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_subdivision_vertices() {
        let i1 = cube(1, 0);
        assert_eq!(i1.cell_count(0), 2);
        assert_eq!(i1.cell_count(1), 1);
        let s = i1.subdivide(1);
        let coords: Vec<f64> = (0..s.cell_count(0))
            .map(|v| s.vertex_coords(v)[0])
            .collect();
        let mut coords = coords;
        coords.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expect = [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0];
        assert_eq!(coords.len(), 4);
        for (c, e) in coords.iter().zip(expect) {
            assert!((c - e).abs() < 1e-12);
        }
    }

    #[test]
    fn square_grid_counts() {
        for j in 0..3usize {
            let x = cube(2, 0).subdivide(j);
            let n = 3usize.pow(j as u32);
            assert_eq!(x.cell_count(0), (n + 1) * (n + 1));
            assert_eq!(x.cell_count(1), 2 * n * (n + 1));
            assert_eq!(x.cell_count(2), n * n);
        }
    }

    #[test]
    fn subdivide_composes() {
        let a = cube(2, 0).subdivide(2);
        let b = cube(2, 0).subdivide(1).subdivide(1);
        assert_eq!(a.cell_count(0), b.cell_count(0));
        assert_eq!(a.cell_count(1), b.cell_count(1));
        assert_eq!(a.cell_count(2), b.cell_count(2));
    }

    #[test]
    fn nearest_vertex_map_identity_and_counts() {
        let x = cube(2, 1);
        let same = x.nearest_vertex_map(&x).unwrap();
        for (v, &img) in same.iter().enumerate() {
            assert_eq!(v as u32, img);
        }
        let fine = x.subdivide(2);
        let map = x.nearest_vertex_map(&fine).unwrap();
        assert_eq!(map.len(), fine.cell_count(0));
        // nearest vertex is within half a coarse step in sup norm
        for v in 0..fine.cell_count(0) {
            let fc = fine.vertex_coords(v);
            let cc = x.vertex_coords(map[v] as usize);
            for (a, b) in fc.iter().zip(&cc) {
                assert!((a - b).abs() < 0.5 / 3.0);
            }
        }
    }

    #[test]
    fn circle_is_a_cycle_of_vertices() {
        let c = circle(1).unwrap();
        assert_eq!(c.cell_count(0), 3);
        assert_eq!(c.cell_count(1), 3);
        let c2 = circle(2).unwrap();
        assert_eq!(c2.cell_count(0), 9);
        // each vertex has exactly two neighbors
        let mut deg = vec![0usize; c2.cell_count(0)];
        for (u, v) in c2.adjacency() {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        assert!(deg.iter().all(|&d| d == 2));
    }

    #[test]
    fn projective_space_counts_and_euler() {
        // vertices of RP^p at level 1: ((3+1)^(p+1) - 2^(p+1)) / 2
        for p in 1..=3usize {
            let (rp, gamma) = projective_space(p, 1).unwrap();
            let expect = (4usize.pow(p as u32 + 1) - 2usize.pow(p as u32 + 1)) / 2;
            assert_eq!(rp.cell_count(0), expect, "p={p}");
            // Euler characteristic mod 2: 1 for p even, 0 for p odd
            assert_eq!(rp.euler_mod2(), if p % 2 == 0 { 1 } else { 0 }, "p={p}");
            // generator walk: closed, length (p+1)·3
            assert_eq!(gamma.len(), (p + 1) * 3);
        }
    }

    #[test]
    fn subcomplex_and_closure_complement_cover() {
        let x = cube(2, 1);
        // random-ish vertex predicate from a hash of the id
        for salt in 0..50u64 {
            let pred = |v: usize| (v as u64).wrapping_mul(0x9e3779b97f4a7c15) % (salt + 2) == 0;
            let y = x.subcomplex_where(pred);
            let z = x.closure_complement(&y);
            assert!(y.subset_of(&x) && z.subset_of(&x));
            let u = y.union(&z);
            assert_eq!(u.total_cells(), x.total_cells(), "Y ∪ Z = X (salt {salt})");
        }
        let all = x.subcomplex_where(|_| true);
        assert_eq!(all.total_cells(), x.total_cells());
        assert_eq!(x.closure_complement(&all).total_cells(), 0);
        let none = x.subcomplex_where(|_| false);
        assert_eq!(none.total_cells(), 0);
        assert_eq!(x.closure_complement(&none).total_cells(), x.total_cells());
    }
}
