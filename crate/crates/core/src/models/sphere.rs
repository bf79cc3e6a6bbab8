//! Round sphere models.
//!
//! `build_sphere` cubulates S^d (d = 2, 3) by radially projecting the
//! g-subdivided boundary of the cube [-1,1]^(d+1); cell weights are the
//! projected spherical measures computed by Gauss-Legendre quadrature of
//! the projection Jacobian, so the top-cell volumes partition the sphere
//! exactly up to quadrature error.  `build_octahedron` is a tiny S² model
//! with flat simplex weights, handy as a brute-force oracle target.

use std::collections::HashMap;
use std::sync::Arc;

use crate::chain::{AmbientComplex, Metric};
use crate::error::ModelError;

/// One axis of a grid cell on the cube boundary: a grid plane or a slab.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Comp {
    Fixed(u16),
    Interval(u16),
}

type Key = Vec<Comp>;

pub struct SphereModel {
    /// Sphere dimension d (the model manifold is S^d).
    pub d: usize,
    pub g: usize,
    pub complex: Arc<AmbientComplex>,
}

// Gauss-Legendre 4-point rule mapped to [0,1].
const GL_NODES: [f64; 4] = [
    0.5 - 0.8611363115940526 / 2.0,
    0.5 - 0.3399810435848563 / 2.0,
    0.5 + 0.3399810435848563 / 2.0,
    0.5 + 0.8611363115940526 / 2.0,
];
const GL_WEIGHTS: [f64; 4] = [
    0.3478548451374538 / 2.0,
    0.6521451548625461 / 2.0,
    0.6521451548625461 / 2.0,
    0.3478548451374538 / 2.0,
];

fn coord(g: usize, c: Comp, u: f64) -> f64 {
    let h = 2.0 / g as f64;
    match c {
        Comp::Fixed(i) => -1.0 + h * i as f64,
        Comp::Interval(i) => -1.0 + h * (i as f64 + u),
    }
}

/// Projected q-volume of a boundary cell under x -> x/|x|.
fn projected_volume(g: usize, key: &[Comp]) -> f64 {
    let axes: Vec<usize> = key
        .iter()
        .enumerate()
        .filter(|(_, c)| matches!(c, Comp::Interval(_)))
        .map(|(a, _)| a)
        .collect();
    let q = axes.len();
    if q == 0 {
        return 1.0;
    }
    let h = 2.0 / g as f64;
    let mut total = 0.0;
    let mut node = vec![0usize; q];
    loop {
        let mut x: Vec<f64> = key.iter().map(|&c| coord(g, c, 0.0)).collect();
        let mut w = 1.0;
        for (slot, &a) in axes.iter().enumerate() {
            x[a] = coord(g, key[a], GL_NODES[node[slot]]);
            w *= GL_WEIGHTS[node[slot]];
        }
        let rho = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let tangential: f64 = 1.0 - axes.iter().map(|&a| (x[a] / rho).powi(2)).sum::<f64>();
        total += w * (h / rho).powi(q as i32) * tangential.max(0.0).sqrt();
        // advance the product quadrature counter
        let mut slot = 0;
        loop {
            if slot == q {
                return total;
            }
            node[slot] += 1;
            if node[slot] < GL_NODES.len() {
                break;
            }
            node[slot] = 0;
            slot += 1;
        }
    }
}

fn cube_midpoint(g: usize, key: &[Comp]) -> Vec<f64> {
    key.iter().map(|&c| coord(g, c, 0.5)).collect()
}

fn normalize(p: &[f64]) -> Vec<f64> {
    let n = p.iter().map(|v| v * v).sum::<f64>().sqrt();
    p.iter().map(|v| v / n).collect()
}

/// Build the cubed-sphere model of S^d. Supports d in {2, 3}.
pub fn build_sphere(d: usize, g: usize) -> Result<SphereModel, ModelError> {
    if !(2..=3).contains(&d) {
        return Err(ModelError::UnsupportedDimension(d));
    }
    if !(2..=64).contains(&g) {
        return Err(ModelError::BadResolution(g));
    }
    let ncoords = d + 1;

    // Enumerate boundary cells of the subdivided cube, grouped by dimension.
    let mut keys: Vec<Vec<Key>> = vec![Vec::new(); d + 1];
    let mut index: Vec<HashMap<Key, u32>> = vec![HashMap::new(); d + 1];
    let mut stack: Vec<Key> = vec![Vec::new()];
    // depth-first product enumeration of per-axis components
    while let Some(partial) = stack.pop() {
        if partial.len() == ncoords {
            let on_boundary = partial
                .iter()
                .any(|c| matches!(c, Comp::Fixed(i) if *i == 0 || *i as usize == g));
            if !on_boundary {
                continue;
            }
            let q = partial
                .iter()
                .filter(|c| matches!(c, Comp::Interval(_)))
                .count();
            index[q].insert(partial.clone(), keys[q].len() as u32);
            keys[q].push(partial);
            continue;
        }
        for i in (0..g).rev() {
            let mut k = partial.clone();
            k.push(Comp::Interval(i as u16));
            stack.push(k);
        }
        for i in (0..=g).rev() {
            let mut k = partial.clone();
            k.push(Comp::Fixed(i as u16));
            stack.push(k);
        }
    }

    let mut bnd: Vec<Vec<Vec<u32>>> = vec![Vec::new(); d + 1];
    let mut weights: Vec<Vec<f64>> = vec![Vec::new(); d + 1];
    let mut bary: Vec<Vec<Vec<f64>>> = vec![Vec::new(); d + 1];
    for q in 0..=d {
        for key in &keys[q] {
            weights[q].push(projected_volume(g, key));
            bary[q].push(normalize(&cube_midpoint(g, key)));
            if q >= 1 {
                let mut faces = Vec::with_capacity(2 * q);
                for (a, &c) in key.iter().enumerate() {
                    if let Comp::Interval(i) = c {
                        for fi in [i, i + 1] {
                            let mut fk = key.clone();
                            fk[a] = Comp::Fixed(fi);
                            faces.push(index[q - 1][&fk]);
                        }
                    }
                }
                bnd[q].push(faces);
            }
        }
    }

    let complex = AmbientComplex::new(
        format!("sphere-d{d}-g{g}"),
        d,
        bnd,
        weights,
        bary,
        Metric::RoundSphere,
        std::f64::consts::FRAC_PI_2,
    )
    .map_err(ModelError::InvalidArgument)?;

    let round = round_volume(d);
    let rel = (complex.total_volume() - round).abs() / round;
    if rel > 0.01 {
        return Err(ModelError::InvalidArgument(format!(
            "total volume {:.6} off the round value {:.6} by {:.2}%",
            complex.total_volume(),
            round,
            100.0 * rel
        )));
    }

    Ok(SphereModel {
        d,
        g,
        complex: Arc::new(complex),
    })
}

/// Volume of the round unit d-sphere.
pub fn round_volume(d: usize) -> f64 {
    match d {
        1 => 2.0 * std::f64::consts::PI,
        2 => 4.0 * std::f64::consts::PI,
        3 => 2.0 * std::f64::consts::PI * std::f64::consts::PI,
        _ => unreachable!("unsupported sphere dimension"),
    }
}

pub struct OctahedronModel {
    pub complex: Arc<AmbientComplex>,
}

/// The unit octahedron: 6 vertices (±e_i), 12 edges of length √2 and
/// 8 equilateral triangles of area √3/2.  Weights are the flat simplex
/// measures in the model units.
pub fn build_octahedron() -> OctahedronModel {
    let verts: Vec<Vec<f64>> = vec![
        vec![1.0, 0.0, 0.0],
        vec![-1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, -1.0, 0.0],
        vec![0.0, 0.0, 1.0],
        vec![0.0, 0.0, -1.0],
    ];
    // edges: every non-antipodal pair
    let mut edges: Vec<[usize; 2]> = Vec::new();
    for i in 0..6 {
        for j in (i + 1)..6 {
            if j != i + 1 || i % 2 == 1 {
                edges.push([i, j]);
            }
        }
    }
    assert_eq!(edges.len(), 12);
    let edge_index = |a: usize, b: usize| -> u32 {
        edges
            .iter()
            .position(|&[x, y]| (x, y) == (a.min(b), a.max(b)))
            .unwrap() as u32
    };
    // triangles: one vertex from each antipodal pair
    let mut tris: Vec<[usize; 3]> = Vec::new();
    for x in 0..2 {
        for y in 2..4 {
            for z in 4..6 {
                tris.push([x, y, z]);
            }
        }
    }

    let mut bnd: Vec<Vec<Vec<u32>>> = vec![Vec::new(); 3];
    bnd[1] = edges.iter().map(|&[a, b]| vec![a as u32, b as u32]).collect();
    bnd[2] = tris
        .iter()
        .map(|&[a, b, c]| vec![edge_index(a, b), edge_index(a, c), edge_index(b, c)])
        .collect();

    let mean = |ids: &[usize]| -> Vec<f64> {
        let mut m = vec![0.0; 3];
        for &i in ids {
            for (k, mk) in m.iter_mut().enumerate() {
                *mk += verts[i][k] / ids.len() as f64;
            }
        }
        m
    };
    let bary = vec![
        verts.clone(),
        edges.iter().map(|e| mean(&e[..])).collect(),
        tris.iter().map(|t| mean(&t[..])).collect(),
    ];
    let weights = vec![
        vec![1.0; 6],
        vec![std::f64::consts::SQRT_2; 12],
        vec![3.0f64.sqrt() / 2.0; 8],
    ];

    let complex = AmbientComplex::new(
        "octahedron".into(),
        2,
        bnd,
        weights,
        bary,
        Metric::RoundSphere,
        std::f64::consts::FRAC_PI_2,
    )
    .expect("octahedron is a valid closed complex");
    OctahedronModel {
        complex: Arc::new(complex),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Mod2Chain;

    #[test]
    fn sphere_area_converges_to_round_value() {
        let round = round_volume(2);
        let mut errs = Vec::new();
        for g in [4, 8, 16] {
            let s = build_sphere(2, g).unwrap();
            errs.push((s.complex.total_volume() - round).abs() / round);
        }
        // quadrature partitions the sphere: error stays at rounding scale
        assert!(errs.iter().all(|e| *e < 1e-6), "errors {errs:?}");
    }

    #[test]
    fn three_sphere_volume() {
        let s = build_sphere(3, 4).unwrap();
        let round = round_volume(3);
        assert!((s.complex.total_volume() - round).abs() / round < 1e-6);
        // closed-manifold condition is validated inside the constructor
        let full = Mod2Chain::fundamental(&s.complex);
        assert!(full.boundary().unwrap().is_empty());
    }

    #[test]
    fn octahedron_equator_mass() {
        let oct = build_octahedron();
        // equator in the xy-plane: edges among vertices 0..4
        let edges: Vec<usize> = (0..12)
            .filter(|&e| {
                let f = oct.complex.faces(1, e);
                f.iter().all(|&v| v < 4)
            })
            .collect();
        assert_eq!(edges.len(), 4);
        let eq = Mod2Chain::from_cells(&oct.complex, 1, edges).unwrap();
        assert!(eq.is_cycle());
        assert!((eq.mass() - 4.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
    }
}
