//! Skeleton retraction: the per-cell radial map that pushes everything
//! outside a small central ball onto the cell boundary.
//!
//! On each cell of the ternary bend grid, local coordinates y live in
//! [-1/2, 1/2]^d; the cube-to-ball change of variables is radial, so the
//! whole composite collapses to y ↦ y · ρ(2|y|∞)/(2|y|∞) where ρ is 1
//! past the cutoff δ and interpolates t·η(t/δ) + (1-η(t/δ)) inside, with
//! η the cubic smoothstep.  The map fixes the grid skeleton and the cell
//! centers pointwise and is continuous across cells.

use std::sync::Arc;

use crate::error::{FamilyError, ModelError};
use crate::models::{build_sphere, build_torus, Model, ModelDescriptor};

/// Largest admissible bend parameter (cube-coordinate units).
pub const EPSILON_MAX: f64 = 0.25;

#[derive(Clone, Copy, Debug)]
enum BendKind {
    /// Flat torus [0,1)^d, bend grid 3^level per axis.
    Torus { d: usize },
    /// Cubed sphere S^d, bend grid 3^level per face axis.
    Sphere { d: usize },
}

#[derive(Clone)]
pub struct BendMap {
    descriptor: ModelDescriptor,
    kind: BendKind,
    pub level: usize,
    /// Cells per axis: 3^level.
    pub m: usize,
    pub epsilon: f64,
    /// Local cutoff radius δ = ε·L with the measured chart constant.
    pub delta: f64,
    /// Measured sup of local sup-norm distance over manifold distance.
    pub chart_lipschitz: f64,
    /// Measured manifold radius of the non-fixed zone around each center.
    pub exclusion_radius: f64,
}

/// A point in bend-grid coordinates: which cell, and where inside it.
struct LocalFrame {
    /// For the sphere: (face axis, sign); unused on the torus.
    face: Option<(usize, f64)>,
    /// Integer cell base per local axis.
    base: Vec<i64>,
    /// Local offsets in [-1/2, 1/2].
    y: Vec<f64>,
}

fn smoothstep_eta(s: f64) -> f64 {
    if s <= 0.5 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        let u = (s - 0.5) / 0.5;
        1.0 - (3.0 * u * u - 2.0 * u * u * u)
    }
}

impl BendMap {
    pub fn new(model: &Model, level: usize, epsilon: f64) -> Result<BendMap, FamilyError> {
        if !(epsilon > 0.0 && epsilon <= EPSILON_MAX) {
            return Err(FamilyError::Model(ModelError::InvalidArgument(format!(
                "bend parameter {epsilon} outside (0, {EPSILON_MAX}]"
            ))));
        }
        let kind = match model {
            Model::Torus(t) => BendKind::Torus { d: t.d() },
            Model::Sphere(s) => BendKind::Sphere { d: s.d },
            Model::Octahedron(_) => {
                return Err(FamilyError::Model(ModelError::InvalidArgument(
                    "bend maps need a grid model (torus or cubed sphere)".into(),
                )))
            }
        };
        let m = 3usize.pow(level as u32);
        let mut map = BendMap {
            descriptor: model.descriptor(),
            kind,
            level,
            m,
            epsilon,
            delta: 0.0,
            chart_lipschitz: 0.0,
            exclusion_radius: 0.0,
        };
        let (lip, excl_unit) = map.measure_chart();
        map.chart_lipschitz = lip;
        map.delta = (epsilon * lip).min(0.98);
        // manifold reach of the bent zone {2|y|∞ < δ}, measured on the
        // shell and padded; one bend cell spans 1/m of the chart
        map.exclusion_radius = excl_unit * map.delta / map.m as f64 * 1.02;
        Ok(map)
    }

    pub fn descriptor(&self) -> &ModelDescriptor {
        &self.descriptor
    }

    fn dim_local(&self) -> usize {
        match self.kind {
            BendKind::Torus { d } => d,
            BendKind::Sphere { d } => d,
        }
    }

    fn metric_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        match self.kind {
            BendKind::Torus { .. } => crate::chain::Metric::FlatTorus.distance(a, b),
            BendKind::Sphere { .. } => crate::chain::Metric::RoundSphere.distance(a, b),
        }
    }

    fn to_local(&self, p: &[f64]) -> LocalFrame {
        let m = self.m as f64;
        match self.kind {
            BendKind::Torus { d } => {
                let mut base = Vec::with_capacity(d);
                let mut y = Vec::with_capacity(d);
                for i in 0..d {
                    let g = p[i].rem_euclid(1.0) * m;
                    let z = g.floor().min(m - 1.0);
                    base.push(z as i64);
                    y.push(g - z - 0.5);
                }
                LocalFrame {
                    face: None,
                    base,
                    y,
                }
            }
            BendKind::Sphere { d } => {
                let sup = p.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
                let u: Vec<f64> = p.iter().map(|&x| x / sup).collect();
                let face_axis = (0..=d)
                    .max_by(|&a, &b| u[a].abs().partial_cmp(&u[b].abs()).unwrap())
                    .unwrap();
                let sign = u[face_axis].signum();
                let mut base = Vec::with_capacity(d);
                let mut y = Vec::with_capacity(d);
                for i in 0..=d {
                    if i == face_axis {
                        continue;
                    }
                    let g = (u[i] + 1.0) / 2.0 * m;
                    let z = g.floor().clamp(0.0, m - 1.0);
                    base.push(z as i64);
                    y.push(g - z - 0.5);
                }
                LocalFrame {
                    face: Some((face_axis, sign)),
                    base,
                    y,
                }
            }
        }
    }

    fn to_global(&self, frame: &LocalFrame, y: &[f64]) -> Vec<f64> {
        let m = self.m as f64;
        match self.kind {
            BendKind::Torus { .. } => frame
                .base
                .iter()
                .zip(y)
                .map(|(&z, &yi)| ((z as f64 + 0.5 + yi) / m).rem_euclid(1.0))
                .collect(),
            BendKind::Sphere { d } => {
                let (axis, sign) = frame.face.expect("sphere frame");
                let mut u = vec![0.0; d + 1];
                let mut slot = 0;
                for (i, ui) in u.iter_mut().enumerate() {
                    if i == axis {
                        *ui = sign;
                    } else {
                        *ui = (frame.base[slot] as f64 + 0.5 + y[slot]) * 2.0 / m - 1.0;
                        slot += 1;
                    }
                }
                let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
                u.iter_mut().for_each(|x| *x /= norm);
                u
            }
        }
    }

    fn rho(&self, t: f64) -> f64 {
        let eta = smoothstep_eta(t / self.delta);
        t * eta + (1.0 - eta)
    }

    fn rho_inverse(&self, u: f64) -> f64 {
        if u <= self.delta / 2.0 {
            return u;
        }
        let (mut lo, mut hi) = (self.delta / 2.0, self.delta);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.rho(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn bend_local(&self, y: &[f64]) -> Vec<f64> {
        let sup = y.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        if sup == 0.0 {
            return y.to_vec();
        }
        let t = (2.0 * sup).min(1.0);
        let scale = self.rho(t) / t;
        y.iter().map(|&v| v * scale).collect()
    }

    fn unbend_local(&self, y: &[f64]) -> Vec<f64> {
        let sup = y.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        if sup == 0.0 {
            return y.to_vec();
        }
        let t_image = 2.0 * sup;
        if t_image >= 1.0 - 1e-12 {
            return y.to_vec(); // skeleton: fixed points
        }
        let t = self.rho_inverse(t_image);
        let scale = t / t_image;
        y.iter().map(|&v| v * scale).collect()
    }

    /// Forward map: push the point radially (in cube coordinates of its
    /// bend cell) toward the cell boundary.
    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        let frame = self.to_local(p);
        let y = self.bend_local(&frame.y);
        self.to_global(&frame, &y)
    }

    /// Preimage of a non-skeleton point (unique); skeleton points are
    /// fixed and returned unchanged.
    pub fn preimage(&self, p: &[f64]) -> Vec<f64> {
        let frame = self.to_local(p);
        let y = self.unbend_local(&frame.y);
        self.to_global(&frame, &y)
    }

    /// Center of the bend cell containing p.
    pub fn center_of(&self, p: &[f64]) -> Vec<f64> {
        let frame = self.to_local(p);
        self.to_global(&frame, &vec![0.0; self.dim_local()])
    }

    /// Is p on the bend-grid skeleton (within metric tolerance)?
    pub fn on_skeleton(&self, p: &[f64], tol: f64) -> bool {
        let frame = self.to_local(p);
        frame.y.iter().any(|&yi| (yi.abs() - 0.5).abs() * 2.0 / self.m as f64 <= tol)
    }

    /// Ambient model refined `refine` ternary levels below the bend grid.
    pub fn fine_model(&self, refine: usize) -> Result<Model, FamilyError> {
        let g = self.m * 3usize.pow(refine as u32);
        Ok(match self.kind {
            BendKind::Torus { d } => Model::Torus(Arc::new(build_torus(d - 1, g)?)),
            BendKind::Sphere { d } => Model::Sphere(Arc::new(build_sphere(d, g)?)),
        })
    }

    /// Measure the chart constants on deterministic sample shells.
    fn measure_chart(&self) -> (f64, f64) {
        let d = self.dim_local();
        let frames: Vec<LocalFrame> = match self.kind {
            BendKind::Torus { .. } => vec![LocalFrame {
                face: None,
                base: vec![0; d],
                y: vec![0.0; d],
            }],
            BendKind::Sphere { d } => {
                // corner cell and central cell of one face (the projection
                // distortion is extremal at corners)
                let mut fs = Vec::new();
                for base_val in [0i64, (self.m as i64 - 1) / 2] {
                    fs.push(LocalFrame {
                        face: Some((d, 1.0)),
                        base: vec![base_val; d],
                        y: vec![0.0; d],
                    });
                }
                fs
            }
        };
        let mut lip: f64 = 0.0;
        let mut excl_unit: f64 = 0.0;
        for frame in &frames {
            let center = self.to_global(frame, &vec![0.0; d]);
            for dir in sample_directions(d) {
                for radius in [0.1, 0.25, 0.49] {
                    let sup_dir = dir.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
                    let y: Vec<f64> = dir.iter().map(|&v| v / sup_dir * radius).collect();
                    let point = self.to_global(frame, &y);
                    let dist = self.metric_distance(&point, &center);
                    if dist > 0.0 {
                        // 2|y|∞ per unit of manifold distance, in units of
                        // one bend cell (1/m of the chart)
                        lip = lip.max(2.0 * radius / (dist * self.m as f64));
                        // manifold cell-distance per unit of 2|y|∞
                        excl_unit = excl_unit.max(dist * self.m as f64 / (2.0 * radius));
                    }
                }
            }
        }
        (lip, excl_unit)
    }
}

/// Deterministic direction sample: axes, diagonals, and a Kronecker fill.
fn sample_directions(d: usize) -> Vec<Vec<f64>> {
    let mut dirs = Vec::new();
    for i in 0..d {
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        dirs.push(v.clone());
        v[i] = -1.0;
        dirs.push(v);
    }
    dirs.push(vec![1.0; d]);
    let phi = 1.324_717_957_244_746f64;
    for k in 1..=24u32 {
        let v: Vec<f64> = (0..d)
            .map(|i| ((k as f64 / phi.powi(i as i32 + 1)).fract() * 2.0 - 1.0).clamp(-1.0, 1.0))
            .collect();
        if v.iter().any(|&x| x.abs() > 1e-3) {
            dirs.push(v);
        }
    }
    dirs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::build_torus;

    fn torus_map(level: usize, eps: f64) -> BendMap {
        let model = Model::Torus(Arc::new(build_torus(1, 9).unwrap()));
        BendMap::new(&model, level, eps).unwrap()
    }

    #[test]
    fn skeleton_and_center_are_fixed() {
        let map = torus_map(1, 0.2);
        for p in [vec![0.0, 0.17], vec![1.0 / 3.0, 0.5], vec![0.21, 2.0 / 3.0]] {
            let q = map.apply(&p);
            for (a, b) in p.iter().zip(&q) {
                assert!((a - b).abs() < 1e-12, "skeleton point moved: {p:?} -> {q:?}");
            }
        }
        // cell centers are fixed
        let c = vec![0.5 / 3.0, 0.5 / 3.0];
        let q = map.apply(&c);
        for (a, b) in c.iter().zip(&q) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn outside_cutoff_lands_on_skeleton() {
        let map = torus_map(0, 0.15);
        // a point whose local radius exceeds δ must map to the grid skeleton
        let p = vec![0.5 + 0.3, 0.5 + 0.1];
        let q = map.apply(&p);
        assert!(map.on_skeleton(&q, 1e-9), "{q:?}");
        // rays through the center stay put at the center
        let center = vec![0.5, 0.5];
        let qc = map.apply(&center);
        assert!((qc[0] - 0.5).abs() < 1e-12 && (qc[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn preimage_inverts_forward_off_skeleton() {
        let map = torus_map(1, 0.2);
        for &(a, b) in &[(0.21, 0.15), (0.4, 0.62), (0.95, 0.01), (0.18, 0.52)] {
            let x = vec![a, b];
            let pre = map.preimage(&x);
            let back = map.apply(&pre);
            for (u, v) in x.iter().zip(&back) {
                assert!((u - v).abs() < 1e-9, "{x:?} -> pre {pre:?} -> {back:?}");
            }
        }
    }

    #[test]
    fn continuity_across_cell_boundaries() {
        let map = torus_map(1, 0.2);
        // approach a grid line from both sides
        for t in [0.05, 0.21, 0.4] {
            let left = map.apply(&[1.0 / 3.0 - 1e-9, t]);
            let right = map.apply(&[1.0 / 3.0 + 1e-9, t]);
            let d: f64 = left
                .iter()
                .zip(&right)
                .map(|(a, b)| {
                    let w = (a - b).abs() % 1.0;
                    w.min(1.0 - w).powi(2)
                })
                .sum::<f64>()
                .sqrt();
            assert!(d < 1e-6, "jump {d} at t={t}");
        }
    }

    #[test]
    fn expansion_scales_like_inverse_epsilon() {
        // measured max local stretch ~ C/ε with stable C across levels
        let mut by_level = Vec::new();
        for level in 0..3usize {
            let eps = 0.1;
            let map = torus_map(level, eps);
            let mut sup_stretch = 0.0f64;
            let h = 1e-6;
            let m = map.m as f64;
            for i in 0..40 {
                for j in 0..40 {
                    let p = vec![
                        (i as f64 + 0.5) / 40.0 / m,
                        (j as f64 + 0.5) / 40.0 / m,
                    ];
                    let q0 = map.apply(&p);
                    for axis in 0..2 {
                        let mut ph = p.clone();
                        ph[axis] += h;
                        let q1 = map.apply(&ph);
                        let d: f64 = q0
                            .iter()
                            .zip(&q1)
                            .map(|(a, b)| {
                                let w = (a - b).abs() % 1.0;
                                w.min(1.0 - w).powi(2)
                            })
                            .sum::<f64>()
                            .sqrt();
                        sup_stretch = sup_stretch.max(d / h);
                    }
                }
            }
            by_level.push(eps * sup_stretch);
        }
        let lo = by_level.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = by_level.iter().cloned().fold(0.0f64, f64::max);
        assert!(
            hi / lo < 2.0,
            "measured expansion constant unstable across levels: {by_level:?}"
        );
    }

    #[test]
    fn sphere_map_respects_skeleton() {
        let model = Model::Sphere(Arc::new(crate::models::build_sphere(2, 3).unwrap()));
        let map = BendMap::new(&model, 1, 0.2).unwrap();
        // a generic point away from centers maps onto the bend skeleton
        let p = {
            let v = [0.4f64, 0.55, 0.9];
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            vec![v[0] / n, v[1] / n, v[2] / n]
        };
        let q = map.apply(&p);
        let n: f64 = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((n - 1.0).abs() < 1e-9, "image stays on the sphere");
        assert!(map.on_skeleton(&q, 1e-9) || {
            let c = map.center_of(&p);
            crate::chain::Metric::RoundSphere.distance(&q, &c) <= map.exclusion_radius
        });
        // preimage round-trip
        let pre = map.preimage(&p);
        let back = map.apply(&pre);
        let d = crate::chain::Metric::RoundSphere.distance(&p, &back);
        assert!(d < 1e-7, "round trip drift {d}");
    }
}
