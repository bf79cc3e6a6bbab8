//! Flat norm, minimal fillings and isoperimetric choices over Z₂.
//!
//! On a closed manifold complex every null-homologous n-cycle t bounds an
//! (n+1)-chain, and the flat norm is the minimum of
//! `mass(defect) + mass(chain)` over decompositions `t = defect + ∂chain`.
//! After substituting one explicit filling the unknown becomes a region
//! indicator on top cells and the objective is a submodular cut function,
//! solved exactly by s-t max-flow on the dual graph with per-cell volume
//! unaries.  Essential cycles are rejected: callers that really need a
//! flat value for those fall back to [`flat_norm_exhaustive`] on tiny
//! complexes.

use std::sync::Arc;

use crate::bits::CellSet;
use crate::chain::mincut::FlowGraph;
use crate::chain::{AmbientComplex, Mod2Chain};
use crate::error::ChainError;

/// Result of a flat-norm computation: `boundary(chain) + defect = target`.
#[derive(Clone, Debug)]
pub struct Filling {
    /// The (n+1)-chain part.
    pub chain: Mod2Chain,
    /// The n-chain part of the target left unbounded.
    pub defect: Mod2Chain,
    /// `mass(defect) + mass(chain)`.
    pub cost: f64,
}

impl Filling {
    fn assemble(target: &Mod2Chain, chain: Mod2Chain) -> Result<Filling, ChainError> {
        let defect = target.add(&chain.boundary()?)?;
        let cost = defect.mass() + chain.mass();
        Ok(Filling {
            chain,
            defect,
            cost,
        })
    }
}

/// One consistent in/out assignment of top cells for a prescribed boundary,
/// together with the constraint components it can be flipped on.
pub struct RegionSolve {
    /// A valid indicator: `boundary(region) = target`.
    pub color: Vec<bool>,
    /// Constraint-component id per top cell; flipping a whole component
    /// yields every other solution.
    pub component: Vec<u32>,
    pub n_components: usize,
}

/// Solve `boundary(R) = d` for a top-dimensional region R, up to flips of
/// whole constraint components.  Fails iff d is not a boundary.
pub fn solve_region(d: &Mod2Chain) -> Result<RegionSolve, ChainError> {
    let complex = d.complex();
    let dim = complex.dim();
    if d.dim() != dim - 1 {
        return Err(ChainError::WrongDimension {
            want: dim - 1,
            got: d.dim(),
        });
    }
    let n_top = complex.cell_count(dim);
    let mut color = vec![false; n_top];
    let mut component = vec![u32::MAX; n_top];
    let mut n_components = 0usize;

    for start in 0..n_top {
        if component[start] != u32::MAX {
            continue;
        }
        let comp_id = n_components as u32;
        n_components += 1;
        component[start] = comp_id;
        color[start] = false;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &f in complex.faces(dim, u) {
                let [a, b] = complex.facet_cofaces(f as usize);
                let v = if a as usize == u { b as usize } else { a as usize };
                let want = color[u] ^ d.cells().contains(f as usize);
                if component[v] == u32::MAX {
                    component[v] = comp_id;
                    color[v] = want;
                    stack.push(v);
                } else if color[v] != want {
                    return Err(ChainError::DifferentClasses);
                }
            }
        }
    }
    Ok(RegionSolve {
        color,
        component,
        n_components,
    })
}

/// Exact flat norm of a null-homologous cycle via min-cut on the dual graph.
pub fn flat_norm(t: &Mod2Chain) -> Result<Filling, ChainError> {
    let complex = Arc::clone(t.complex());
    let dim = complex.dim();
    if t.dim() != dim - 1 {
        return Err(ChainError::WrongDimension {
            want: dim - 1,
            got: t.dim(),
        });
    }
    let b = t.boundary()?;
    if !b.is_empty() {
        return Err(ChainError::NotACycle(b.len()));
    }
    let base = solve_region(t).map_err(|e| match e {
        ChainError::DifferentClasses => ChainError::EssentialCycle,
        other => other,
    })?;

    // Unknown: flip set S relative to the base region R.  The defect becomes
    // boundary(S) (pure pairwise cut terms) and the chain mass becomes the
    // usual unary terms on R / not-R.
    let n_top = complex.cell_count(dim);
    let source = n_top;
    let sink = n_top + 1;
    let mut g = FlowGraph::new(n_top + 2);
    for c in 0..n_top {
        let v = complex.weight(dim, c);
        if base.color[c] {
            g.add_edge(source, c, v, 0.0);
        } else {
            g.add_edge(c, sink, v, 0.0);
        }
    }
    for f in 0..complex.cell_count(dim - 1) {
        let [a, b] = complex.facet_cofaces(f);
        let w = complex.weight(dim - 1, f);
        g.add_edge(a as usize, b as usize, w, w);
    }
    g.max_flow(source, sink);
    let side = g.source_side(source);

    // side[c] marks the flip set S; the chain is the base region xor S.
    let mut cells = CellSet::empty(n_top);
    for c in 0..n_top {
        if base.color[c] != side[c] {
            cells.insert(c);
        }
    }
    let chain = Mod2Chain::from_set(&complex, dim, cells);
    Filling::assemble(t, chain)
}

/// Brute-force flat norm over all 2^k top-cell subsets.  Independent of the
/// min-cut path; also accepts essential cycles.  Guarded to tiny complexes.
pub fn flat_norm_exhaustive(t: &Mod2Chain) -> Result<Filling, ChainError> {
    const LIMIT: usize = 24;
    let complex = Arc::clone(t.complex());
    let dim = complex.dim();
    if t.dim() != dim - 1 {
        return Err(ChainError::WrongDimension {
            want: dim - 1,
            got: t.dim(),
        });
    }
    let k = complex.cell_count(dim);
    if k > LIMIT {
        return Err(ChainError::TooLargeForExhaustive { limit: LIMIT, got: k });
    }

    // Gray-code walk: flipping one top cell toggles its facets in the
    // running defect and adds/removes its volume.
    let n_facets = complex.cell_count(dim - 1);
    let mut defect: Vec<bool> = (0..n_facets).map(|f| t.cells().contains(f)).collect();
    let mut defect_mass: f64 = defect
        .iter()
        .enumerate()
        .filter(|(_, &d)| d)
        .map(|(f, _)| complex.weight(dim - 1, f))
        .sum();
    let mut vol = 0.0f64;
    let mut in_set = vec![false; k];

    let mut best_cost = defect_mass;
    let mut best_subset: u64 = 0;
    let mut gray_prev: u64 = 0;
    for i in 1u64..(1u64 << k) {
        let gray = i ^ (i >> 1);
        let flip = (gray ^ gray_prev).trailing_zeros() as usize;
        gray_prev = gray;
        in_set[flip] = !in_set[flip];
        let dv = complex.weight(dim, flip);
        vol += if in_set[flip] { dv } else { -dv };
        for &f in complex.faces(dim, flip) {
            let f = f as usize;
            let w = complex.weight(dim - 1, f);
            if defect[f] {
                defect_mass -= w;
            } else {
                defect_mass += w;
            }
            defect[f] = !defect[f];
        }
        let cost = defect_mass + vol;
        if cost < best_cost - 1e-12 {
            best_cost = cost;
            best_subset = gray;
        }
    }

    let cells = CellSet::from_indices(k, (0..k).filter(|c| best_subset >> c & 1 == 1));
    let chain = Mod2Chain::from_set(&complex, dim, cells);
    Filling::assemble(t, chain)
}

fn pick_lighter_sides(
    complex: &Arc<AmbientComplex>,
    solve: &RegionSolve,
    cells_of_interest: impl Fn(usize) -> bool,
) -> Result<CellSet, ChainError> {
    let dim = complex.dim();
    let n_top = complex.cell_count(dim);
    // Per constraint component, mass of the colored side vs the flipped one.
    let mut mass_true = vec![0.0f64; solve.n_components];
    let mut mass_false = vec![0.0f64; solve.n_components];
    for c in 0..n_top {
        if !cells_of_interest(c) {
            continue;
        }
        let comp = solve.component[c] as usize;
        if solve.color[c] {
            mass_true[comp] += complex.weight(dim, c);
        } else {
            mass_false[comp] += complex.weight(dim, c);
        }
    }
    let total: f64 = mass_true.iter().sum::<f64>() + mass_false.iter().sum::<f64>();
    let tol = 1e-9 * total.max(1.0);
    let mut take_true = vec![false; solve.n_components];
    for comp in 0..solve.n_components {
        if (mass_true[comp] - mass_false[comp]).abs() <= tol {
            // Both sides weigh the same: the discrete analogue of losing
            // uniqueness when a filling reaches half the total volume.
            return Err(ChainError::FillingTie(mass_true[comp]));
        }
        take_true[comp] = mass_true[comp] < mass_false[comp];
    }
    let mut out = CellSet::empty(n_top);
    for c in 0..n_top {
        if !cells_of_interest(c) {
            continue;
        }
        let comp = solve.component[c] as usize;
        if solve.color[c] == take_true[comp] {
            out.insert(c);
        }
    }
    Ok(out)
}

/// The unique minimal-mass (n+1)-chain A with `boundary(A) = s + t`.
///
/// On a connected closed complex exactly two fillings exist (A and its
/// complement); the lighter one is returned and an exact tie is an error.
pub fn isoperimetric_choice(s: &Mod2Chain, t: &Mod2Chain) -> Result<Mod2Chain, ChainError> {
    let d = s.add(t)?;
    let bd = d.boundary()?;
    if !bd.is_empty() {
        return Err(ChainError::NotACycle(bd.len()));
    }
    let complex = Arc::clone(d.complex());
    let solve = solve_region(&d)?;
    let cells = pick_lighter_sides(&complex, &solve, |_| true)?;
    Ok(Mod2Chain::from_set(&complex, complex.dim(), cells))
}

/// Minimal filling of an n-chain inside a ball of top cells, with boundary
/// allowed on the discrete ball sphere.
///
/// `ball` is the top-cell region; only facets interior to it (both cofaces
/// inside) constrain the filling.  Errors if the minimal filling is not
/// unique or reaches half the ball volume.
pub fn relative_isoperimetric_choice(
    ball: &CellSet,
    d: &Mod2Chain,
) -> Result<Mod2Chain, ChainError> {
    let complex = Arc::clone(d.complex());
    let dim = complex.dim();
    if d.dim() != dim - 1 {
        return Err(ChainError::WrongDimension {
            want: dim - 1,
            got: d.dim(),
        });
    }
    let n_top = complex.cell_count(dim);
    let mut color = vec![false; n_top];
    let mut component = vec![u32::MAX; n_top];
    let mut n_components = 0usize;
    for start in 0..n_top {
        if !ball.contains(start) || component[start] != u32::MAX {
            continue;
        }
        let comp_id = n_components as u32;
        n_components += 1;
        component[start] = comp_id;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &f in complex.faces(dim, u) {
                let [a, b] = complex.facet_cofaces(f as usize);
                let v = if a as usize == u { b as usize } else { a as usize };
                if !ball.contains(v) {
                    continue; // sphere facet: boundary free there
                }
                let want = color[u] ^ d.cells().contains(f as usize);
                if component[v] == u32::MAX {
                    component[v] = comp_id;
                    color[v] = want;
                    stack.push(v);
                } else if color[v] != want {
                    return Err(ChainError::DifferentClasses);
                }
            }
        }
    }
    let solve = RegionSolve {
        color,
        component,
        n_components,
    };
    let cells = pick_lighter_sides(&complex, &solve, |c| ball.contains(c))?;
    let chain = Mod2Chain::from_set(&complex, dim, cells);
    let ball_volume: f64 = ball.iter().map(|c| complex.weight(dim, c)).sum();
    if chain.mass() >= 0.5 * ball_volume {
        return Err(ChainError::FillingTie(chain.mass()));
    }
    Ok(chain)
}
