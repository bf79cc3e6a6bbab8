//! Canonical triangulation of a cubical complex.
//!
//! Every q-cell is cut into q! simplices along the monotone corner chains
//! of its vertex poset (the standard diagonal subdivision).  The chains
//! are preserved by the antipodal and wrap identifications, so the
//! triangulation of a quotient complex is the quotient of the
//! triangulation and stays a genuine simplicial complex at level ≥ 1.

use std::collections::HashMap;

use super::{Axis, CellKey, ParamComplex};

pub struct SimplicialComplex {
    /// `simplices[q][id]` = sorted vertex ids (vertex ids are the cubical
    /// vertex ids of the underlying complex).
    pub simplices: Vec<Vec<Vec<u32>>>,
    index: Vec<HashMap<Vec<u32>, u32>>,
    /// faces one dimension down, per simplex
    pub bnd: Vec<Vec<Vec<u32>>>,
    /// smallest cubical cell containing the simplex, as a canonical key
    pub carrier: Vec<Vec<CellKey>>,
}

impl SimplicialComplex {
    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn count(&self, q: usize) -> usize {
        self.simplices.get(q).map(|v| v.len()).unwrap_or(0)
    }

    pub fn id_of(&self, q: usize, verts: &[u32]) -> Option<u32> {
        let mut v = verts.to_vec();
        v.sort_unstable();
        self.index.get(q).and_then(|ix| ix.get(&v)).copied()
    }

    /// Cofaces (one dimension up) per simplex of dimension q.
    pub fn cofaces(&self, q: usize) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.count(q)];
        if q + 1 < self.simplices.len() {
            for (t, faces) in self.bnd[q + 1].iter().enumerate() {
                for &f in faces {
                    out[f as usize].push(t as u32);
                }
            }
        }
        out
    }

    /// Per-dimension membership mask of simplices carried by `sub`.
    pub fn carrier_mask(&self, sub: &ParamComplex) -> Vec<Vec<bool>> {
        self.carrier
            .iter()
            .map(|per_dim| per_dim.iter().map(|key| sub.contains_key(key)).collect())
            .collect()
    }
}

/// State used during construction: simplices are inserted as monotone
/// corner chains of a cell and deduplicated by their global vertex sets.
struct Builder<'a> {
    x: &'a ParamComplex,
    sc: SimplicialComplex,
}

impl<'a> Builder<'a> {
    /// Insert the simplex spanned by `chain` (monotone corner masks) inside
    /// the cell `key` with span-axis list `spans`; returns its id.
    fn insert_chain(&mut self, key: &CellKey, spans: &[usize], chain: &[u32]) -> u32 {
        let q = chain.len() - 1;
        let verts: Vec<u32> = chain
            .iter()
            .map(|&mask| {
                let mut c = key.clone();
                for (slot, &a) in spans.iter().enumerate() {
                    if let Axis::Span(i) = key[a] {
                        c[a] = Axis::Point(i + (mask >> slot & 1));
                    }
                }
                self.x.vertex_id(&c).expect("corner exists")
            })
            .collect();
        let mut sorted = verts.clone();
        sorted.sort_unstable();
        debug_assert!(
            sorted.windows(2).all(|w| w[0] != w[1]),
            "degenerate simplex: quotient needs level >= 1"
        );
        while self.sc.simplices.len() <= q {
            self.sc.simplices.push(Vec::new());
            self.sc.index.push(HashMap::new());
            self.sc.bnd.push(Vec::new());
            self.sc.carrier.push(Vec::new());
        }
        if let Some(&id) = self.sc.index[q].get(&sorted) {
            return id;
        }
        // carrier: sub-cell spanned by the chain (base = first corner,
        // span axes = bits gained along the chain)
        let lo = chain[0];
        let hi = chain[chain.len() - 1];
        let mut carrier = key.clone();
        for (slot, &a) in spans.iter().enumerate() {
            if let Axis::Span(i) = key[a] {
                if hi >> slot & 1 == lo >> slot & 1 {
                    carrier[a] = Axis::Point(i + (lo >> slot & 1));
                }
            }
        }
        let carrier = canonical_of(self.x, carrier);

        // recurse into faces before allocating our own slot so ids of
        // faces are ready for the boundary list
        let faces: Vec<u32> = if q == 0 {
            Vec::new()
        } else {
            (0..chain.len())
                .map(|drop| {
                    let sub: Vec<u32> = chain
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != drop)
                        .map(|(_, &m)| m)
                        .collect();
                    self.insert_chain(key, spans, &sub)
                })
                .collect()
        };

        let id = self.sc.simplices[q].len() as u32;
        self.sc.index[q].insert(sorted.clone(), id);
        self.sc.simplices[q].push(sorted);
        self.sc.bnd[q].push(faces);
        self.sc.carrier[q].push(carrier);
        id
    }
}

fn canonical_of(x: &ParamComplex, key: CellKey) -> CellKey {
    // route through the complex's canonicalization by a lookup round-trip
    let (q, id) = x
        .cell_id(&key)
        .expect("carrier of a triangulation simplex is a cell of the complex");
    x.cell_key(q, id as usize).clone()
}

/// Triangulate a cubical complex (or quotient) into simplices.
pub fn triangulate(x: &ParamComplex) -> SimplicialComplex {
    let mut b = Builder {
        x,
        sc: SimplicialComplex {
            simplices: vec![Vec::new()],
            index: vec![HashMap::new()],
            bnd: vec![Vec::new()],
            carrier: vec![Vec::new()],
        },
    };
    for (q, id) in x.all_cells() {
        let key = x.cell_key(q, id).clone();
        let spans: Vec<usize> = key
            .iter()
            .enumerate()
            .filter(|(_, a)| matches!(a, Axis::Span(_)))
            .map(|(i, _)| i)
            .collect();
        // monotone chains = permutations of the span axes
        let mut perm: Vec<usize> = (0..q).collect();
        permute(&mut perm, 0, &mut |p| {
            let mut chain = Vec::with_capacity(q + 1);
            let mut mask = 0u32;
            chain.push(mask);
            for &slot in p {
                mask |= 1 << slot;
                chain.push(mask);
            }
            b.insert_chain(&key, &spans, &chain);
        });
    }
    b.sc
}

fn permute<F: FnMut(&[usize])>(items: &mut [usize], k: usize, f: &mut F) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::{circle, cube, projective_space, torus_param};

    #[test]
    fn square_triangulates_into_two_triangles() {
        let x = cube(2, 0);
        let sc = triangulate(&x);
        assert_eq!(sc.count(0), 4);
        assert_eq!(sc.count(1), 5); // 4 sides + 1 diagonal
        assert_eq!(sc.count(2), 2);
        for t in 0..2 {
            assert_eq!(sc.bnd[2][t].len(), 3);
        }
    }

    #[test]
    fn cube_triangulation_f_vector() {
        let x = cube(3, 0);
        let sc = triangulate(&x);
        assert_eq!(sc.count(0), 8);
        assert_eq!(sc.count(3), 6); // 3! tetrahedra
        // Euler characteristic of a ball: 1
        let chi: i64 = (0..=3)
            .map(|q| (sc.count(q) as i64) * if q % 2 == 0 { 1 } else { -1 })
            .sum();
        assert_eq!(chi, 1);
    }

    #[test]
    fn torus_quotient_triangulation() {
        let x = torus_param(2, 1).unwrap();
        let sc = triangulate(&x);
        assert_eq!(sc.count(0), 9);
        assert_eq!(sc.count(2), 18);
        assert_eq!(sc.count(1), 27); // 18 grid edges + 9 diagonals
        let chi: i64 = (0..=2)
            .map(|q| (sc.count(q) as i64) * if q % 2 == 0 { 1 } else { -1 })
            .sum();
        assert_eq!(chi, 0);
    }

    #[test]
    fn circle_triangulation_is_the_circle() {
        let c = circle(2).unwrap();
        let sc = triangulate(&c);
        assert_eq!(sc.count(0), 9);
        assert_eq!(sc.count(1), 9);
    }

    #[test]
    fn projective_plane_triangulation_closes() {
        let (rp2, _) = projective_space(2, 1).unwrap();
        let sc = triangulate(&rp2);
        // every edge of a closed surface bounds exactly two triangles
        let cof = sc.cofaces(1);
        assert!(cof.iter().all(|c| c.len() == 2));
        let chi: i64 = (0..=2)
            .map(|q| (sc.count(q) as i64) * if q % 2 == 0 { 1 } else { -1 })
            .sum();
        assert_eq!(chi, 1, "χ(RP²) = 1");
    }

    #[test]
    fn carriers_live_in_the_complex() {
        let (rp2, _) = projective_space(2, 1).unwrap();
        let sc = triangulate(&rp2);
        for q in 0..=sc.dim() {
            for key in &sc.carrier[q] {
                assert!(rp2.contains_key(key));
            }
        }
    }
}
