//! Flat unit torus [0,1)^d cubulated by a g×…×g grid.
//!
//! Cells of dimension q are products of q intervals and d-q points; a cell
//! is addressed by the subset of interval axes and the base lattice point.
//! All weights are translation invariant: (1/g)^q per q-cell, so the total
//! volume is exactly 1.

use std::sync::Arc;

use crate::chain::{AmbientComplex, Metric};
use crate::error::ModelError;

pub struct TorusModel {
    /// Hypersurface dimension n; the torus itself has dimension n+1.
    pub n: usize,
    pub g: usize,
    pub complex: Arc<AmbientComplex>,
    /// Axis subsets per dimension, as bitmasks in enumeration order.
    subsets: Vec<Vec<u32>>,
}

impl TorusModel {
    pub fn d(&self) -> usize {
        self.n + 1
    }

    fn lattice_size(&self) -> usize {
        self.g.pow(self.d() as u32)
    }

    pub fn vertex_id(&self, z: &[usize]) -> usize {
        linear_index(z, self.g)
    }

    /// Cell id from the interval-axis set and the base lattice point.
    pub fn cell_id(&self, axes: &[usize], z: &[usize]) -> usize {
        let mask = axes.iter().fold(0u32, |m, a| m | 1 << a);
        let q = axes.len();
        let si = self.subsets[q]
            .iter()
            .position(|&m| m == mask)
            .expect("valid axis subset");
        si * self.lattice_size() + linear_index(z, self.g)
    }

    /// Decompose a cell id of dimension q into (axis mask, base point).
    pub fn cell_coords(&self, q: usize, id: usize) -> (u32, Vec<usize>) {
        let ls = self.lattice_size();
        let mask = self.subsets[q][id / ls];
        (mask, delinearize(id % ls, self.g, self.d()))
    }
}

fn linear_index(z: &[usize], g: usize) -> usize {
    z.iter().rev().fold(0, |acc, &zi| acc * g + zi % g)
}

fn delinearize(mut i: usize, g: usize, d: usize) -> Vec<usize> {
    let mut z = vec![0; d];
    for zi in z.iter_mut().take(d) {
        *zi = i % g;
        i /= g;
    }
    z
}

fn subsets_by_size(d: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new(); d + 1];
    for mask in 0u32..(1 << d) {
        out[mask.count_ones() as usize].push(mask);
    }
    out
}

/// Build the flat torus model. Supports n in {1, 2}.
pub fn build_torus(n: usize, g: usize) -> Result<TorusModel, ModelError> {
    if !(1..=2).contains(&n) {
        return Err(ModelError::UnsupportedDimension(n));
    }
    if !(2..=128).contains(&g) {
        return Err(ModelError::BadResolution(g));
    }
    let d = n + 1;
    let ls = g.pow(d as u32);
    let subsets = subsets_by_size(d);
    let h = 1.0 / g as f64;

    let mut bnd: Vec<Vec<Vec<u32>>> = vec![Vec::new(); d + 1];
    let mut weights: Vec<Vec<f64>> = vec![Vec::new(); d + 1];
    let mut bary: Vec<Vec<Vec<f64>>> = vec![Vec::new(); d + 1];

    for q in 0..=d {
        let count = subsets[q].len() * ls;
        weights[q] = vec![if q == 0 { 1.0 } else { h.powi(q as i32) }; count];
        bary[q] = Vec::with_capacity(count);
        if q >= 1 {
            bnd[q] = Vec::with_capacity(count);
        }
        for &mask in &subsets[q] {
            for i in 0..ls {
                let z = delinearize(i, g, d);
                let mut center = vec![0.0; d];
                for a in 0..d {
                    center[a] = (z[a] as f64 + if mask >> a & 1 == 1 { 0.5 } else { 0.0 }) * h;
                }
                bary[q].push(center);
                if q >= 1 {
                    let mut faces = Vec::with_capacity(2 * q);
                    for a in 0..d {
                        if mask >> a & 1 == 0 {
                            continue;
                        }
                        let sub_mask = mask & !(1 << a);
                        let sub_idx = subsets[q - 1]
                            .iter()
                            .position(|&m| m == sub_mask)
                            .unwrap();
                        let mut z2 = z.clone();
                        faces.push((sub_idx * ls + linear_index(&z2, g)) as u32);
                        z2[a] = (z2[a] + 1) % g;
                        faces.push((sub_idx * ls + linear_index(&z2, g)) as u32);
                    }
                    bnd[q].push(faces);
                }
            }
        }
    }

    let ball_limit = (d as f64).sqrt() / 4.0;
    let complex = AmbientComplex::new(
        format!("torus-n{n}-g{g}"),
        d,
        bnd,
        weights,
        bary,
        Metric::FlatTorus,
        ball_limit,
    )
    .map_err(ModelError::InvalidArgument)?;
    Ok(TorusModel {
        n,
        g,
        complex: Arc::new(complex),
        subsets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Mod2Chain;

    #[test]
    fn torus_counts_g4() {
        let t = build_torus(1, 4).unwrap();
        assert_eq!(t.complex.cell_count(2), 16);
        assert_eq!(t.complex.cell_count(1), 32);
        assert_eq!(t.complex.cell_count(0), 16);
        assert!((t.complex.total_volume() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn square_boundary_is_four_edges() {
        let t = build_torus(1, 4).unwrap();
        let sq = t.cell_id(&[0, 1], &[1, 2]);
        let chain = Mod2Chain::from_cells(&t.complex, 2, [sq]).unwrap();
        let b = chain.boundary().unwrap();
        let expect: Vec<usize> = vec![
            t.cell_id(&[0], &[1, 2]),
            t.cell_id(&[0], &[1, 3]),
            t.cell_id(&[1], &[1, 2]),
            t.cell_id(&[1], &[2, 2]),
        ];
        let mut expect = expect;
        expect.sort_unstable();
        assert_eq!(b.cells().to_sorted_vec(), expect);
        assert!(b.boundary().unwrap().is_empty());
    }

    #[test]
    fn vertical_circle_mass_is_one() {
        let t = build_torus(1, 8).unwrap();
        let edges: Vec<usize> = (0..8).map(|j| t.cell_id(&[1], &[0, j])).collect();
        let c = Mod2Chain::from_cells(&t.complex, 1, edges).unwrap();
        assert!((c.mass() - 1.0).abs() < 1e-12);
        assert!(c.is_cycle());
    }

    #[test]
    fn fundamental_chain_has_empty_boundary() {
        for (n, g) in [(1usize, 5usize), (2, 3)] {
            let t = build_torus(n, g).unwrap();
            let full = Mod2Chain::fundamental(&t.complex);
            assert!(full.boundary().unwrap().is_empty());
        }
    }
}
