//! Z₂ (co)homology of triangulated parameter complexes: Betti numbers,
//! homology bases with pivot certificates, loop realizations, cocycle
//! lifts from loop evaluations, cup products (absolute and relative) and
//! cobounding tests.
//!
//! All heavy linear algebra happens on boundary matrices, which stay very
//! sparse; cobounding tests use coboundary columns of one dimension down.
//! Degree-1 machinery (basis cycles, cocycle lifts) goes through a
//! spanning forest rather than tracked elimination, so it scales to the
//! larger projective models.

use std::collections::HashMap;

use super::gf2::{rank, xor_merge, Reducer, SparseVec};
use super::simplicial::{triangulate, SimplicialComplex};
use super::{Axis, ParamComplex, Quotient};
use crate::error::TopologyError;

/// A Z₂ cochain supported on simplices of one degree; class-level
/// operations treat it modulo coboundaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    pub degree: usize,
    pub support: SparseVec,
}

/// Basis vector with its elimination pivot, for independent re-checking.
#[derive(Clone, Debug)]
pub struct BasisVector {
    pub support: SparseVec,
    pub pivot: u32,
}

/// A closed walk in the 1-skeleton: steps are (edge simplex id, forward?).
#[derive(Clone, Debug)]
pub struct LoopWalk {
    pub steps: Vec<(u32, bool)>,
}

impl LoopWalk {
    pub fn edge_set(&self) -> SparseVec {
        let mut s = SparseVec::new();
        for &(e, _) in &self.steps {
            s = xor_merge(&s, &[e]);
        }
        s
    }
}

struct Forest {
    /// per vertex: Some((edge id, parent vertex)) or None for roots
    parent: Vec<Option<(u32, u32)>>,
    /// edges used by the forest
    tree_edge: Vec<bool>,
}

pub struct CellTopology {
    pub complex: ParamComplex,
    pub sc: SimplicialComplex,
    forest: Forest,
}

impl CellTopology {
    pub fn new(complex: ParamComplex) -> Self {
        let sc = triangulate(&complex);
        let forest = build_forest(&sc);
        CellTopology {
            complex,
            sc,
            forest,
        }
    }

    fn boundary_cols(&self, q: usize) -> Vec<SparseVec> {
        if q == 0 || q > self.sc.dim() {
            return Vec::new();
        }
        self.sc.bnd[q]
            .iter()
            .map(|faces| {
                let mut f = faces.clone();
                f.sort_unstable();
                f
            })
            .collect()
    }

    fn boundary_rank(&self, q: usize) -> usize {
        if q == 0 || q > self.sc.dim() {
            return 0;
        }
        rank(self.boundary_cols(q))
    }

    /// Z₂ Betti number of the complex in degree q (equals the rank of both
    /// H_q and H^q over the field).
    pub fn betti(&self, q: usize) -> usize {
        if q > self.sc.dim() {
            return 0;
        }
        let rq = self.boundary_rank(q);
        let rq1 = if q + 1 <= self.sc.dim() {
            self.boundary_rank(q + 1)
        } else {
            0
        };
        self.sc.count(q) - rq - rq1
    }

    /// Basis of H₁ as edge-set cycles, via the spanning forest.
    pub fn h1_basis(&self) -> Vec<BasisVector> {
        let b1 = self.betti(1);
        let mut image = Reducer::new();
        for col in self.boundary_cols(2) {
            image.insert(col, 0);
        }
        let mut collected = Reducer::new();
        let mut basis = Vec::new();
        for e in 0..self.sc.count(1) {
            if basis.len() == b1 {
                break;
            }
            if self.forest.tree_edge[e] {
                continue;
            }
            let cycle = self.fundamental_cycle(e as u32);
            let (res, _) = image.residue(cycle.clone(), 0);
            let (res, _) = collected.residue(res, 0);
            if let Some(&pivot) = res.last() {
                collected.insert(res, 0);
                basis.push(BasisVector {
                    support: cycle,
                    pivot,
                });
            }
        }
        assert_eq!(basis.len(), b1, "forest cycles span H₁");
        basis
    }

    /// Fundamental cycle of a non-tree edge: the edge plus the tree path
    /// between its endpoints.
    fn fundamental_cycle(&self, e: u32) -> SparseVec {
        let verts = &self.sc.simplices[1][e as usize];
        let (u, v) = (verts[0], verts[1]);
        let mut cycle = vec![e];
        for start in [u, v] {
            let mut cur = start;
            let mut path = SparseVec::new();
            while let Some((pe, pv)) = self.forest.parent[cur as usize] {
                path = xor_merge(&path, &[pe]);
                cur = pv;
            }
            cycle = xor_merge(&cycle, &path);
        }
        cycle
    }

    /// Decompose a Z₂ edge cycle into closed vertex walks (every vertex of
    /// the support has even degree, so the walks partition the edges).
    pub fn realize_loops(&self, cycle: &[u32]) -> Vec<LoopWalk> {
        let mut incident: HashMap<u32, Vec<u32>> = HashMap::new();
        for &e in cycle {
            let vs = &self.sc.simplices[1][e as usize];
            incident.entry(vs[0]).or_default().push(e);
            incident.entry(vs[1]).or_default().push(e);
        }
        let mut used: HashMap<u32, bool> = cycle.iter().map(|&e| (e, false)).collect();
        let mut walks = Vec::new();
        for &start_edge in cycle {
            if used[&start_edge] {
                continue;
            }
            // Hierholzer: greedy closed walk with splicing
            let mut walk: Vec<(u32, bool)> = Vec::new();
            let start = self.sc.simplices[1][start_edge as usize][0];
            let mut stack = vec![start];
            let mut path: Vec<(u32, bool, u32)> = Vec::new(); // edge, fwd, to
            while let Some(&v) = stack.last() {
                let next = incident
                    .get(&v)
                    .and_then(|es| es.iter().find(|&&e| !used[&e]))
                    .copied();
                match next {
                    Some(e) => {
                        *used.get_mut(&e).unwrap() = true;
                        let vs = &self.sc.simplices[1][e as usize];
                        let to = if vs[0] == v { vs[1] } else { vs[0] };
                        let fwd = vs[0] == v;
                        stack.push(to);
                        path.push((e, fwd, to));
                    }
                    None => {
                        stack.pop();
                        if let Some((e, fwd, _)) = path.pop() {
                            walk.push((e, fwd));
                        }
                    }
                }
            }
            walk.reverse();
            if !walk.is_empty() {
                walks.push(LoopWalk { steps: walk });
            }
        }
        walks
    }

    /// Vertex ids visited by a walk, starting vertex first (closed; the
    /// final return to the start is implicit).
    pub fn walk_vertices(&self, w: &LoopWalk) -> Vec<u32> {
        w.steps
            .iter()
            .map(|&(e, fwd)| {
                let vs = &self.sc.simplices[1][e as usize];
                if fwd {
                    vs[0]
                } else {
                    vs[1]
                }
            })
            .collect()
    }

    /// Representative I^m coordinates of the endpoints of a 1-simplex,
    /// ordered to match its sorted vertex pair.  Diagonal edges take their
    /// coordinates from the representative key of the carrier cell, so
    /// both endpoints live in one coherent fundamental patch.
    pub fn edge_coords(&self, e: usize) -> (Vec<f64>, Vec<f64>) {
        let verts = &self.sc.simplices[1][e];
        let carrier = &self.sc.carrier[1][e];
        let corners = corner_coords(&self.complex, carrier);
        let pick = |v: u32| -> Vec<f64> {
            corners
                .iter()
                .find(|(id, _)| *id == v)
                .map(|(_, c)| c.clone())
                .expect("edge endpoint among carrier corners")
        };
        (pick(verts[0]), pick(verts[1]))
    }

    /// Cocycle with prescribed values on a set of H₁ basis cycles
    /// (tree-cotree construction).  Values index into `basis`.
    pub fn lift_cocycle(
        &self,
        basis: &[BasisVector],
        values: &[u8],
    ) -> Result<Cocycle, TopologyError> {
        if basis.len() > 64 {
            return Err(TopologyError::TooLarge(basis.len()));
        }
        let mut full = Reducer::new();
        for col in self.boundary_cols(2) {
            full.insert(col, 0);
        }
        for (i, b) in basis.iter().enumerate() {
            let (res, _) = full.residue(b.support.clone(), 0);
            assert!(!res.is_empty(), "basis element dependent on image");
            full.insert(res, 1 << i);
        }
        let value_mask: u64 = values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v % 2 == 1)
            .fold(0, |m, (i, _)| m | 1 << i);
        let mut support = SparseVec::new();
        for e in 0..self.sc.count(1) {
            if self.forest.tree_edge[e] {
                continue;
            }
            let cycle = self.fundamental_cycle(e as u32);
            let (res, tag) = full.residue(cycle, 0);
            assert!(res.is_empty(), "every cycle reduces in image ⊕ basis");
            if ((tag & value_mask).count_ones()) % 2 == 1 {
                support.push(e as u32);
            }
        }
        support.sort_unstable();
        let z = Cocycle { degree: 1, support };
        debug_assert!(self.is_cocycle(&z));
        for (b, &v) in basis.iter().zip(values) {
            debug_assert_eq!(self.pair(&z, &b.support), v % 2, "lift pairing");
        }
        Ok(z)
    }

    /// For antipodal quotients: the canonical generator of H¹, measuring
    /// whether an edge's lift crosses between the two sheets of the
    /// double cover.
    pub fn deck_cocycle(&self) -> Option<Cocycle> {
        if self.complex.quotient() != Quotient::Antipodal {
            return None;
        }
        let mut support = SparseVec::new();
        for e in 0..self.sc.count(1) {
            let verts = &self.sc.simplices[1][e];
            let carrier = &self.sc.carrier[1][e];
            let corners = corner_keys_raw(carrier);
            let mut bit = 0u8;
            let mut found = 0;
            for raw in &corners {
                let canon_id = self.complex.vertex_id(raw).expect("corner in complex");
                if verts.contains(&canon_id) {
                    // crossing parity: is the raw corner its own canonical key?
                    let is_canonical = self
                        .complex
                        .cell_key(0, canon_id as usize)
                        .eq(raw);
                    if !is_canonical {
                        bit ^= 1;
                    }
                    found += 1;
                }
            }
            debug_assert!(found >= 2);
            if bit == 1 {
                support.push(e as u32);
            }
        }
        let z = Cocycle {
            degree: 1,
            support,
        };
        debug_assert!(self.is_cocycle(&z), "deck parity is a cocycle");
        Some(z)
    }

    /// The unit of the cohomology ring: every vertex.
    pub fn unit_cocycle(&self) -> Cocycle {
        Cocycle {
            degree: 0,
            support: (0..self.sc.count(0) as u32).collect(),
        }
    }

    pub fn is_cocycle(&self, z: &Cocycle) -> bool {
        let q = z.degree;
        if q >= self.sc.dim() {
            return true;
        }
        let in_z: std::collections::HashSet<u32> = z.support.iter().copied().collect();
        self.sc.bnd[q + 1]
            .iter()
            .all(|faces| faces.iter().filter(|f| in_z.contains(f)).count() % 2 == 0)
    }

    /// Is z a coboundary?  Uses im δ^(q-1) = span of coface columns.
    pub fn is_coboundary(&self, z: &Cocycle) -> bool {
        if z.support.is_empty() {
            return true;
        }
        if z.degree == 0 {
            return false;
        }
        let mut image = Reducer::new();
        for cofs in self.sc.cofaces(z.degree - 1) {
            let mut c = cofs;
            c.sort_unstable();
            image.insert(c, 0);
        }
        image.contains(z.support.clone())
    }

    /// Nonzero as a cohomology class?
    pub fn class_nonzero(&self, z: &Cocycle) -> bool {
        debug_assert!(self.is_cocycle(z));
        !self.is_coboundary(z)
    }

    pub fn classes_equal(&self, a: &Cocycle, b: &Cocycle) -> bool {
        assert_eq!(a.degree, b.degree);
        self.is_coboundary(&Cocycle {
            degree: a.degree,
            support: xor_merge(&a.support, &b.support),
        })
    }

    /// Cochain-cycle pairing (both over the same degree).
    pub fn pair(&self, z: &Cocycle, cycle: &[u32]) -> u8 {
        let mut i = 0;
        let mut j = 0;
        let mut parity = 0u8;
        while i < z.support.len() && j < cycle.len() {
            match z.support[i].cmp(&cycle[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    parity ^= 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        parity
    }

    /// Cup product by the front-face/back-face rule in a global vertex
    /// order (identity order unless one is supplied).
    pub fn cup(&self, a: &Cocycle, b: &Cocycle, order: Option<&[u32]>) -> Cocycle {
        let q = a.degree + b.degree;
        let mut support = SparseVec::new();
        if q <= self.sc.dim() {
            let a_set: std::collections::HashSet<u32> = a.support.iter().copied().collect();
            let b_set: std::collections::HashSet<u32> = b.support.iter().copied().collect();
            for (sid, verts) in self.sc.simplices[q].iter().enumerate() {
                let mut vs = verts.clone();
                if let Some(rank_of) = order {
                    vs.sort_by_key(|&v| rank_of[v as usize]);
                }
                let front = &vs[0..=a.degree];
                let back = &vs[a.degree..=q];
                let fa = self
                    .sc
                    .id_of(a.degree, front)
                    .expect("front face is a simplex");
                let fb = self
                    .sc
                    .id_of(b.degree, back)
                    .expect("back face is a simplex");
                if a_set.contains(&fa) && b_set.contains(&fb) {
                    support.push(sid as u32);
                }
            }
        }
        Cocycle { degree: q, support }
    }

    pub fn cup_power(&self, z: &Cocycle, p: usize, order: Option<&[u32]>) -> Cocycle {
        assert!(p >= 1);
        let mut acc = z.clone();
        for _ in 1..p {
            acc = self.cup(&acc, z, order);
        }
        acc
    }

    /// Homology basis in degree q with pivot certificates (guarded to
    /// moderate sizes; degree 1 has the scalable forest path above).
    pub fn homology_basis(&self, q: usize) -> Result<Vec<BasisVector>, TopologyError> {
        if q == 0 {
            // components: one vertex per forest root
            let basis = self
                .forest
                .parent
                .iter()
                .enumerate()
                .filter(|(_, p)| p.is_none())
                .map(|(v, _)| BasisVector {
                    support: vec![v as u32],
                    pivot: v as u32,
                })
                .collect();
            return Ok(basis);
        }
        let n = self.sc.count(q);
        if n + self.sc.count(q + 1) > 200_000 {
            return Err(TopologyError::TooLarge(n));
        }
        let bq = self.betti(q);
        let mut image = Reducer::new();
        if q + 1 <= self.sc.dim() {
            for col in self.boundary_cols(q + 1) {
                image.insert(col, 0);
            }
        }
        // tracked kernel of ∂_q: combos of columns that sum to zero
        let mut tracked: Vec<(SparseVec, SparseVec)> = Vec::new(); // (residue, combo)
        let mut pivots: HashMap<u32, usize> = HashMap::new();
        let mut basis: Vec<BasisVector> = Vec::new();
        let mut collected = Reducer::new();
        for (cid, col) in self.boundary_cols(q).into_iter().enumerate() {
            let mut v = col;
            let mut combo = vec![cid as u32];
            while let Some(&low) = v.last() {
                match pivots.get(&low) {
                    Some(&at) => {
                        v = xor_merge(&v, &tracked[at].0);
                        combo = xor_merge(&combo, &tracked[at].1);
                    }
                    None => break,
                }
            }
            if v.is_empty() {
                // combo is a q-cycle; test independence modulo boundaries
                let (res, _) = image.residue(combo.clone(), 0);
                let (res, _) = collected.residue(res, 0);
                if let Some(&pivot) = res.last() {
                    collected.insert(res, 0);
                    basis.push(BasisVector {
                        support: combo,
                        pivot,
                    });
                    if basis.len() == bq {
                        break;
                    }
                }
            } else {
                pivots.insert(*v.last().unwrap(), tracked.len());
                tracked.push((v, combo));
            }
        }
        assert_eq!(basis.len(), bq, "kernel spans homology");
        Ok(basis)
    }

    /// Cohomology basis in degree q (cocycle representatives with pivot
    /// certificates); same size guard as `homology_basis`.
    pub fn cohomology_basis(&self, q: usize) -> Result<Vec<BasisVector>, TopologyError> {
        let n = self.sc.count(q);
        if n + self.sc.count(q + 1) > 200_000 {
            return Err(TopologyError::TooLarge(n));
        }
        let bq = self.betti(q);
        let mut image = Reducer::new();
        if q >= 1 {
            for cofs in self.sc.cofaces(q - 1) {
                let mut c = cofs;
                c.sort_unstable();
                image.insert(c, 0);
            }
        }
        // tracked kernel of δ^q (columns = coface lists of q-simplices)
        let cof = self.sc.cofaces(q);
        let mut tracked: Vec<(SparseVec, SparseVec)> = Vec::new();
        let mut pivots: HashMap<u32, usize> = HashMap::new();
        let mut basis: Vec<BasisVector> = Vec::new();
        let mut collected = Reducer::new();
        for cid in 0..n {
            let mut v = cof[cid].clone();
            v.sort_unstable();
            let mut combo = vec![cid as u32];
            while let Some(&low) = v.last() {
                match pivots.get(&low) {
                    Some(&at) => {
                        v = xor_merge(&v, &tracked[at].0);
                        combo = xor_merge(&combo, &tracked[at].1);
                    }
                    None => break,
                }
            }
            if v.is_empty() {
                let (res, _) = image.residue(combo.clone(), 0);
                let (res, _) = collected.residue(res, 0);
                if let Some(&pivot) = res.last() {
                    collected.insert(res, 0);
                    basis.push(BasisVector {
                        support: combo,
                        pivot,
                    });
                    if basis.len() == bq {
                        break;
                    }
                }
            } else {
                pivots.insert(*v.last().unwrap(), tracked.len());
                tracked.push((v, combo));
            }
        }
        assert_eq!(basis.len(), bq, "cocycles span cohomology");
        Ok(basis)
    }
}

/// Raw (un-canonicalized) corner keys of a cell key.
fn corner_keys_raw(key: &super::CellKey) -> Vec<super::CellKey> {
    let spans: Vec<usize> = key
        .iter()
        .enumerate()
        .filter(|(_, a)| matches!(a, Axis::Span(_)))
        .map(|(i, _)| i)
        .collect();
    (0u32..(1 << spans.len()))
        .map(|bits| {
            let mut c = key.clone();
            for (slot, &a) in spans.iter().enumerate() {
                if let Axis::Span(i) = key[a] {
                    c[a] = Axis::Point(i + (bits >> slot & 1));
                }
            }
            c
        })
        .collect()
}

/// (canonical vertex id, representative coordinates) for each corner of a
/// cell, all coordinates within the cell's own representative patch.
fn corner_coords(x: &ParamComplex, key: &super::CellKey) -> Vec<(u32, Vec<f64>)> {
    let n = 3u32.pow(x.level() as u32) as f64;
    corner_keys_raw(key)
        .into_iter()
        .map(|raw| {
            let id = x.vertex_id(&raw).expect("corner in complex");
            let coords = raw
                .iter()
                .map(|a| match a {
                    Axis::Point(i) => *i as f64 / n,
                    Axis::Span(_) => unreachable!(),
                })
                .collect();
            (id, coords)
        })
        .collect()
}

fn build_forest(sc: &SimplicialComplex) -> Forest {
    let nv = sc.count(0);
    let mut adj: Vec<Vec<(u32, u32)>> = vec![Vec::new(); nv]; // (edge, other)
    for (e, verts) in sc.simplices[1].iter().enumerate() {
        adj[verts[0] as usize].push((e as u32, verts[1]));
        adj[verts[1] as usize].push((e as u32, verts[0]));
    }
    let mut parent = vec![None; nv];
    let mut seen = vec![false; nv];
    let mut tree_edge = vec![false; sc.count(1)];
    for root in 0..nv {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root as u32]);
        while let Some(u) = queue.pop_front() {
            for &(e, v) in &adj[u as usize] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    parent[v as usize] = Some((e, u));
                    tree_edge[e as usize] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    Forest { parent, tree_edge }
}

// ---------------------------------------------------------------------
// Relative cohomology: cochains vanishing on a subcomplex.
// ---------------------------------------------------------------------

/// Simplices of `topo` carried by cells of `sub`, per dimension.
pub fn simplex_mask(topo: &CellTopology, sub: &ParamComplex) -> Vec<Vec<bool>> {
    topo.sc.carrier_mask(sub)
}

/// Does the cochain vanish on the masked simplices of its degree?
pub fn vanishes_on(z: &Cocycle, mask: &[Vec<bool>]) -> bool {
    z.support
        .iter()
        .all(|&s| !mask[z.degree][s as usize])
}

/// Basis of H^q(X, A; Z₂): relative cocycle representatives (vanishing on
/// A) with pivot certificates.
pub fn relative_cohomology_basis(
    topo: &CellTopology,
    a: &ParamComplex,
    q: usize,
) -> Result<Vec<BasisVector>, TopologyError> {
    if !a.subset_of(&topo.complex) {
        return Err(TopologyError::NotASubcomplex(
            "A is not contained in X".into(),
        ));
    }
    let mask = simplex_mask(topo, a);
    let n = topo.sc.count(q);
    if n + topo.sc.count(q + 1) > 200_000 {
        return Err(TopologyError::TooLarge(n));
    }
    // image of δ^(q-1) restricted to relative cochains
    let mut image = Reducer::new();
    if q >= 1 {
        let cof = topo.sc.cofaces(q - 1);
        for (s, cofs) in cof.iter().enumerate() {
            if mask[q - 1][s] {
                continue;
            }
            let mut c: SparseVec = cofs
                .iter()
                .copied()
                .filter(|&t| !mask[q][t as usize])
                .collect();
            c.sort_unstable();
            image.insert(c, 0);
        }
    }
    // kernel of δ^q on relative cochains, tracked
    let cof = topo.sc.cofaces(q);
    let mut tracked: Vec<(SparseVec, SparseVec)> = Vec::new();
    let mut pivots: HashMap<u32, usize> = HashMap::new();
    let mut basis: Vec<BasisVector> = Vec::new();
    let mut collected = Reducer::new();
    for cid in 0..n {
        if mask[q][cid] {
            continue;
        }
        let mut v: SparseVec = if q + 1 <= topo.sc.dim() {
            cof[cid]
                .iter()
                .copied()
                .filter(|&t| !mask[q + 1][t as usize])
                .collect()
        } else {
            SparseVec::new()
        };
        v.sort_unstable();
        let mut combo = vec![cid as u32];
        while let Some(&low) = v.last() {
            match pivots.get(&low) {
                Some(&at) => {
                    v = xor_merge(&v, &tracked[at].0);
                    combo = xor_merge(&combo, &tracked[at].1);
                }
                None => break,
            }
        }
        if v.is_empty() {
            let (res, _) = image.residue(combo.clone(), 0);
            let (res, _) = collected.residue(res, 0);
            if let Some(&pivot) = res.last() {
                collected.insert(res, 0);
                basis.push(BasisVector {
                    support: combo,
                    pivot,
                });
            }
        } else {
            pivots.insert(*v.last().unwrap(), tracked.len());
            tracked.push((v, combo));
        }
    }
    Ok(basis)
}

/// Is z zero in H^q(X, A)? (z must vanish on A and be a relative cocycle.)
pub fn relative_class_zero(
    topo: &CellTopology,
    a: &ParamComplex,
    z: &Cocycle,
) -> Result<bool, TopologyError> {
    let mask = simplex_mask(topo, a);
    if !vanishes_on(z, &mask) {
        return Err(TopologyError::InvalidArgument(
            "cochain does not vanish on the subcomplex".into(),
        ));
    }
    if z.support.is_empty() {
        return Ok(true);
    }
    if z.degree == 0 {
        return Ok(false);
    }
    let q = z.degree;
    let mut image = Reducer::new();
    let cof = topo.sc.cofaces(q - 1);
    for (s, cofs) in cof.iter().enumerate() {
        if mask[q - 1][s] {
            continue;
        }
        let mut c: SparseVec = cofs
            .iter()
            .copied()
            .filter(|&t| !mask[q][t as usize])
            .collect();
        c.sort_unstable();
        image.insert(c, 0);
    }
    Ok(image.contains(z.support.clone()))
}

/// Relative cup product H^a(X,A) × H^b(X,B) → H^(a+b)(X, A∪B): the plain
/// cochain-level product of representatives (it vanishes on A∪B because
/// every simplex of A has its front face in A and every simplex of B its
/// back face in B).
pub fn relative_cup(
    topo: &CellTopology,
    a_class: &Cocycle,
    b_class: &Cocycle,
    order: Option<&[u32]>,
) -> Cocycle {
    topo.cup(a_class, b_class, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::{circle, cube, projective_space, torus_param};

    #[test]
    fn cube_is_contractible() {
        for m in 1..=3usize {
            let t = CellTopology::new(cube(m, 1));
            assert_eq!(t.betti(0), 1);
            for q in 1..=m {
                assert_eq!(t.betti(q), 0, "H_{q}(I^{m})");
            }
        }
    }

    #[test]
    fn circle_homology() {
        let t = CellTopology::new(circle(1).unwrap());
        assert_eq!(t.betti(0), 1);
        assert_eq!(t.betti(1), 1);
        let basis = t.h1_basis();
        assert_eq!(basis.len(), 1);
        let loops = t.realize_loops(&basis[0].support);
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].steps.len(), 3);
    }

    #[test]
    fn torus_quotient_homology_and_ring() {
        let t = CellTopology::new(torus_param(2, 1).unwrap());
        assert_eq!(t.betti(0), 1);
        assert_eq!(t.betti(1), 2);
        assert_eq!(t.betti(2), 1);
        // product of the two degree-1 generators generates H²
        let basis = t.h1_basis();
        let a = t.lift_cocycle(&basis, &[1, 0]).unwrap();
        let b = t.lift_cocycle(&basis, &[0, 1]).unwrap();
        let ab = t.cup(&a, &b, None);
        assert!(t.is_cocycle(&ab));
        assert!(t.class_nonzero(&ab), "a⌣b generates H²(T²)");
        // a⌣a is zero in H² of the torus
        let aa = t.cup(&a, &a, None);
        assert!(t.is_coboundary(&aa), "a⌣a = 0 in H²(T²)");
    }

    #[test]
    fn projective_spaces_have_full_z2_cohomology_ring() {
        for p in 1..=2usize {
            let (rp, gamma) = projective_space(p, 1).unwrap();
            let t = CellTopology::new(rp);
            for q in 0..=p {
                assert_eq!(t.betti(q), 1, "b_{q}(RP^{p})");
            }
            let z = t.deck_cocycle().unwrap();
            assert!(t.class_nonzero(&z));
            // generator evaluates 1 on the π₁ generator loop
            let mut edge_set = SparseVec::new();
            for w in gamma.windows(2) {
                let e = t.sc.id_of(1, &[w[0], w[1]]).unwrap();
                edge_set = xor_merge(&edge_set, &[e]);
            }
            let e_close = t
                .sc
                .id_of(1, &[gamma[gamma.len() - 1], gamma[0]])
                .unwrap();
            edge_set = xor_merge(&edge_set, &[e_close]);
            assert_eq!(t.pair(&z, &edge_set), 1, "λ(γ) = 1");
            // λ^p ≠ 0, λ^(p+1) = 0
            let zp = t.cup_power(&z, p, None);
            assert!(t.class_nonzero(&zp), "λ^{p} ≠ 0 on RP^{p}");
            let zp1 = t.cup_power(&z, p + 1, None);
            assert!(
                zp1.support.is_empty() || t.is_coboundary(&zp1),
                "λ^{} = 0",
                p + 1
            );
        }
    }

    #[test]
    fn unit_acts_as_identity() {
        let t = CellTopology::new(torus_param(2, 1).unwrap());
        let basis = t.h1_basis();
        let a = t.lift_cocycle(&basis, &[1, 0]).unwrap();
        let one = t.unit_cocycle();
        let ua = t.cup(&one, &a, None);
        assert!(t.classes_equal(&ua, &a));
    }

    #[test]
    fn cup_is_order_independent_at_class_level() {
        let t = CellTopology::new(torus_param(2, 1).unwrap());
        let basis = t.h1_basis();
        let a = t.lift_cocycle(&basis, &[1, 0]).unwrap();
        let b = t.lift_cocycle(&basis, &[0, 1]).unwrap();
        let ab = t.cup(&a, &b, None);
        // permuted global vertex order
        let nv = t.sc.count(0);
        let order: Vec<u32> = (0..nv as u32)
            .map(|v| v.wrapping_mul(2_654_435_761) % (nv as u32 * 4))
            .collect();
        let ab2 = t.cup(&a, &b, Some(&order));
        assert!(t.is_cocycle(&ab2));
        assert!(t.classes_equal(&ab, &ab2), "triangulation order changes only the representative");
        // graded commutativity over Z₂ at class level
        let ba = t.cup(&b, &a, None);
        assert!(t.classes_equal(&ab, &ba));
    }

    #[test]
    fn homology_and_cohomology_bases_carry_pivots() {
        let t = CellTopology::new(torus_param(2, 1).unwrap());
        let hb = t.homology_basis(1).unwrap();
        assert_eq!(hb.len(), 2);
        // certificates: distinct pivots, supports are cycles
        assert_ne!(hb[0].pivot, hb[1].pivot);
        let cb = t.cohomology_basis(1).unwrap();
        assert_eq!(cb.len(), 2);
        for b in &cb {
            let z = Cocycle {
                degree: 1,
                support: b.support.clone(),
            };
            assert!(t.is_cocycle(&z));
            assert!(t.class_nonzero(&z));
        }
    }

    #[test]
    fn relative_cohomology_reduces_to_absolute_for_empty_a() {
        let x = torus_param(2, 1).unwrap();
        let t = CellTopology::new(x.clone());
        let empty = x.subcomplex_where(|_| false);
        let rel = relative_cohomology_basis(&t, &empty, 1).unwrap();
        assert_eq!(rel.len(), t.betti(1));
    }

    #[test]
    fn relative_cup_to_full_pair_is_zero() {
        // A ∪ B = X forces the product into H(X, X) = 0
        let x = torus_param(2, 2).unwrap();
        let t = CellTopology::new(x.clone());
        // A: vertices with first coordinate < 1/2; B: the closed complement
        let a = x.subcomplex_where(|v| x.vertex_coords(v)[0] < 0.49);
        let b = x.closure_complement(&a);
        assert_eq!(a.union(&b).total_cells(), x.total_cells());
        let ra = relative_cohomology_basis(&t, &a, 1).unwrap();
        let rb = relative_cohomology_basis(&t, &b, 1).unwrap();
        for za in &ra {
            for zb in &rb {
                let prod = relative_cup(
                    &t,
                    &Cocycle {
                        degree: 1,
                        support: za.support.clone(),
                    },
                    &Cocycle {
                        degree: 1,
                        support: zb.support.clone(),
                    },
                    None,
                );
                let union_mask = simplex_mask(&t, &a.union(&b));
                assert!(vanishes_on(&prod, &union_mask));
                // vanishing on all of X means the zero cochain
                assert!(prod.support.is_empty());
            }
        }
    }

    #[test]
    fn exactness_spot_check_on_projective_plane() {
        // image of H¹(X, A) → H¹(X) equals the kernel of restriction to A
        let (rp2, _) = projective_space(2, 1).unwrap();
        let t = CellTopology::new(rp2.clone());
        // A: a contractible cap (stars around one vertex patch)
        let a = rp2.subcomplex_where(|v| {
            let c = rp2.vertex_coords(v);
            c[0] < 0.4 && c[1] < 0.4 && c[2] < 0.4
        });
        let ta = CellTopology::new(a.clone());
        assert_eq!(ta.betti(1), 0, "cap is simply connected");
        let rel = relative_cohomology_basis(&t, &a, 1).unwrap();
        let lambda = t.deck_cocycle().unwrap();
        // H¹(X) = Z₂ generated by λ; λ restricted to A is a cocycle on a
        // contractible set, hence kills restriction ⇔ lies in j* image
        let mask = simplex_mask(&t, &a);
        let mut in_image = false;
        for z in &rel {
            let zc = Cocycle {
                degree: 1,
                support: z.support.clone(),
            };
            if t.classes_equal(&zc, &lambda) {
                in_image = true;
            }
            assert!(vanishes_on(&zc, &mask));
        }
        assert!(in_image, "λ lifts to a relative class since λ|_A cobounds");
    }
}
