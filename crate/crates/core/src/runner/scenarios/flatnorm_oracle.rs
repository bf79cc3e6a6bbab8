//! Min-cut flat norm against the exhaustive oracle on tiny complexes,
//! plus filling-uniqueness sampling (any two fillings of one difference
//! with mass below half the total volume coincide).

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::chain::flat_norm::{flat_norm, flat_norm_exhaustive, isoperimetric_choice};
use crate::chain::{Mod2Chain, Mod2ChainData};
use crate::error::{ChainError, RunnerError};
use crate::models::ModelDescriptor;
use crate::runner::{assert_into, Assertion, ExperimentConfig, Report, Scenario, Table};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlatCase {
    pub model: ModelDescriptor,
    pub cycle: Mod2ChainData,
    pub filling: Mod2ChainData,
    pub defect: Mod2ChainData,
    pub cost: f64,
    pub exhaustive_cost: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlatnormWitness {
    pub cases: Vec<FlatCase>,
    pub octahedron_equator_cost: f64,
    pub constancy_pairs_checked: usize,
}

pub fn run(config: &ExperimentConfig) -> Result<Report, RunnerError> {
    let Scenario::FlatnormOracle {
        cycles,
        constancy_pairs,
    } = &config.scenario
    else {
        unreachable!("dispatched by scenario");
    };
    let seed = config.seed;
    let mut assertions: Vec<Assertion> = Vec::new();

    // tiny complexes: ≤ 20 top cells each
    let descriptors = [
        ModelDescriptor::Octahedron,
        ModelDescriptor::Torus { n: 1, g: 4 },
        ModelDescriptor::Torus { n: 2, g: 2 },
    ];
    let complexes: Vec<_> = descriptors
        .iter()
        .map(|d| d.build().map(|m| (d.clone(), m)))
        .collect::<Result<Vec<_>, _>>()?;
    for (_, m) in &complexes {
        let dim = m.complex().dim();
        assert!(m.complex().cell_count(dim) <= 20);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    let mut mismatches = 0usize;
    let mut produced = 0usize;
    while produced < *cycles {
        let (desc, model) = &complexes[rng.gen_range(0..complexes.len())];
        let complex = model.complex();
        let dim = complex.dim();
        let k = complex.cell_count(dim);
        let cells: Vec<usize> = (0..k).filter(|_| rng.gen_bool(0.5)).collect();
        if cells.is_empty() || cells.len() == k {
            continue;
        }
        let region = Mod2Chain::from_cells(complex, dim, cells)?;
        let cycle = region.boundary()?;
        if cycle.is_empty() {
            continue;
        }
        produced += 1;
        let by_cut = flat_norm(&cycle)?;
        let by_search = flat_norm_exhaustive(&cycle)?;
        if (by_cut.cost - by_search.cost).abs() > 1e-9 {
            mismatches += 1;
        }
        // keep a sample of full filling witnesses (all of them would bloat)
        if cases.len() < 32 {
            cases.push(FlatCase {
                model: desc.clone(),
                cycle: cycle.to_data(),
                filling: by_cut.chain.to_data(),
                defect: by_cut.defect.to_data(),
                cost: by_cut.cost,
                exhaustive_cost: by_search.cost,
            });
        }
    }
    assert_into(
        &mut assertions,
        "mincut-equals-exhaustive",
        mismatches == 0,
        format!("{produced} random null-homologous cycles, {mismatches} mismatches"),
    );

    // octahedron equator: frozen value 2√3
    let oct = ModelDescriptor::Octahedron.build()?;
    let equator_edges: Vec<usize> = (0..12)
        .filter(|&e| oct.complex().faces(1, e).iter().all(|&v| v < 4))
        .collect();
    let equator = Mod2Chain::from_cells(oct.complex(), 1, equator_edges)?;
    let eq_filling = flat_norm(&equator)?;
    let expected = 2.0 * 3.0f64.sqrt();
    assert_into(
        &mut assertions,
        "octahedron-equator-value",
        (eq_filling.cost - expected).abs() < 1e-12,
        format!("cost {:.12} vs 2√3 = {expected:.12}", eq_filling.cost),
    );
    cases.push(FlatCase {
        model: ModelDescriptor::Octahedron,
        cycle: equator.to_data(),
        filling: eq_filling.chain.to_data(),
        defect: eq_filling.defect.to_data(),
        cost: eq_filling.cost,
        exhaustive_cost: flat_norm_exhaustive(&equator)?.cost,
    });

    // constancy sampling: enumerate all fillings of random small
    // differences; two sub-half fillings never differ
    let mut checked = 0usize;
    let mut uniqueness_ok = true;
    while checked < *constancy_pairs {
        let (_, model) = &complexes[rng.gen_range(0..complexes.len())];
        let complex = model.complex();
        let dim = complex.dim();
        let k = complex.cell_count(dim);
        let half = complex.total_volume() / 2.0;
        let cells: Vec<usize> = (0..k).filter(|_| rng.gen_bool(0.3)).collect();
        let region = Mod2Chain::from_cells(complex, dim, cells)?;
        let d = region.boundary()?;
        let mut fillings = Vec::new();
        for mask in 0u64..(1 << k) {
            let cand =
                Mod2Chain::from_cells(complex, dim, (0..k).filter(|c| mask >> c & 1 == 1))?;
            if cand.boundary()?.cells() == d.cells() {
                fillings.push(cand);
            }
        }
        let small: Vec<_> = fillings.iter().filter(|f| f.mass() < half).collect();
        if fillings.len() != 2 || small.len() > 1 {
            uniqueness_ok = false;
        }
        match isoperimetric_choice(&d, &Mod2Chain::empty(complex, dim - 1)) {
            Ok(a) => {
                if small.len() != 1 || a.cells() != small[0].cells() {
                    uniqueness_ok = false;
                }
            }
            Err(ChainError::FillingTie(_)) => {
                if !small.is_empty() {
                    uniqueness_ok = false;
                }
            }
            Err(e) => return Err(e.into()),
        }
        checked += 1;
    }
    assert_into(
        &mut assertions,
        "small-filling-uniqueness",
        uniqueness_ok,
        format!("{checked} random filling pairs enumerated exhaustively"),
    );

    let table = Table {
        name: "oracle".into(),
        columns: vec![
            "model".into(),
            "cycle_cells".into(),
            "mincut_cost".into(),
            "exhaustive_cost".into(),
            "equal".into(),
            "provenance".into(),
        ],
        rows: cases
            .iter()
            .map(|c| {
                vec![
                    json!(format!("{:?}", c.model)),
                    json!(c.cycle.cells.len()),
                    json!(c.cost),
                    json!(c.exhaustive_cost),
                    json!((c.cost - c.exhaustive_cost).abs() < 1e-9),
                    json!("measured"),
                ]
            })
            .collect(),
    };
    let witness = FlatnormWitness {
        cases,
        octahedron_equator_cost: eq_filling.cost,
        constancy_pairs_checked: checked,
    };
    Ok(Report {
        scenario: config.scenario_name().into(),
        config: config.clone(),
        assertions,
        tables: vec![table],
        witnesses: serde_json::to_value(witness)?,
    })
}
