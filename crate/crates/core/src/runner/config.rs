//! Experiment configuration: fully deterministic given the seed, schema
//! validated before running.

use serde::{Deserialize, Serialize};

use crate::error::RunnerError;
use crate::models::ModelDescriptor;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub seed: u64,
    #[serde(default)]
    pub out_dir: Option<String>,
    #[serde(default)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Scenario {
    /// Upper estimates and packing lower bounds over a p range, with
    /// scaling fits and Weyl-ratio monitoring.
    WidthScan {
        model: ModelDescriptor,
        p_values: Vec<usize>,
        samples: usize,
        polish: usize,
        /// Bend parameter (cube-coordinate units).
        epsilon: f64,
        /// Required log-log slope window for both fits.
        slope_window: (f64, f64),
        /// Max allowed ratio between the largest and smallest Weyl ratio.
        weyl_max_ratio: f64,
    },
    /// The S³ quantitative targets: 4π coordinate members, the ≤ 8π
    /// degree-2 bound, and the Clifford-torus mass.
    S3Targets {
        /// Lines per member for the coordinate-family rows.
        coordinate_lines: usize,
        /// Sampled members of the coordinate family (the four axes are
        /// always included).
        coordinate_members: usize,
        /// Sampled parameters of the degree-≤2 family.
        family_samples: usize,
        /// Lines per sampled member of the degree-≤2 family.
        sample_lines: usize,
        clifford_lines: usize,
        angular_samples: usize,
        /// Relative tolerance on the 4π and 2π² targets.
        tolerance: f64,
    },
    /// Degree, cup-ring and restriction checks.
    DetectionSuite {
        torus_g: usize,
        sphere_g: usize,
        /// Test λ^p ≠ 0, λ^(p+1) = 0 for p = 1..=max_p.
        max_p: usize,
        /// Restriction detections: for each p, a (p+1)-family restricted
        /// away from its trivial neighborhood must detect p.
        restriction_ps: Vec<usize>,
    },
    /// Min-cut flat norm against the exhaustive oracle, plus filling
    /// uniqueness sampling.
    FlatnormOracle {
        cycles: usize,
        constancy_pairs: usize,
    },
    /// Packing witnesses alone (a subset of width-scan for quick runs).
    PackingBound {
        model: ModelDescriptor,
        p_values: Vec<usize>,
        epsilon: f64,
    },
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), RunnerError> {
        let bad = |m: &str| Err(RunnerError::Config(m.to_string()));
        match &self.scenario {
            Scenario::WidthScan {
                p_values,
                samples,
                epsilon,
                slope_window,
                weyl_max_ratio,
                ..
            } => {
                if p_values.is_empty() || p_values.iter().any(|&p| p == 0) {
                    return bad("p_values must be nonempty positive");
                }
                if *samples == 0 {
                    return bad("samples must be positive");
                }
                if !(*epsilon > 0.0 && *epsilon <= 0.25) {
                    return bad("epsilon outside (0, 0.25]");
                }
                if slope_window.0 >= slope_window.1 {
                    return bad("empty slope window");
                }
                if *weyl_max_ratio <= 1.0 {
                    return bad("weyl_max_ratio must exceed 1");
                }
            }
            Scenario::S3Targets {
                coordinate_lines,
                family_samples,
                sample_lines,
                clifford_lines,
                angular_samples,
                tolerance,
                ..
            } => {
                if [
                    coordinate_lines,
                    family_samples,
                    sample_lines,
                    clifford_lines,
                    angular_samples,
                ]
                .iter()
                .any(|&&v| v == 0)
                {
                    return bad("all sampling counts must be positive");
                }
                if !(*tolerance > 0.0 && *tolerance < 1.0) {
                    return bad("tolerance outside (0,1)");
                }
            }
            Scenario::DetectionSuite {
                torus_g,
                sphere_g,
                max_p,
                restriction_ps,
            } => {
                if *torus_g < 3 || *sphere_g < 2 {
                    return bad("grid resolutions too small");
                }
                if *max_p == 0 || *max_p > 4 {
                    return bad("max_p must be in 1..=4 (explicit projective models)");
                }
                if restriction_ps.iter().any(|&p| p == 0 || p > 3) {
                    return bad("restriction_ps must lie in 1..=3");
                }
            }
            Scenario::FlatnormOracle {
                cycles,
                constancy_pairs,
            } => {
                if *cycles == 0 || *constancy_pairs == 0 {
                    return bad("sampling counts must be positive");
                }
            }
            Scenario::PackingBound {
                p_values, epsilon, ..
            } => {
                if p_values.is_empty() {
                    return bad("p_values must be nonempty");
                }
                if !(*epsilon > 0.0 && *epsilon <= 0.25) {
                    return bad("epsilon outside (0, 0.25]");
                }
            }
        }
        Ok(())
    }

    pub fn scenario_name(&self) -> &'static str {
        match self.scenario {
            Scenario::WidthScan { .. } => "width-scan",
            Scenario::S3Targets { .. } => "s3-targets",
            Scenario::DetectionSuite { .. } => "detection-suite",
            Scenario::FlatnormOracle { .. } => "flatnorm-oracle",
            Scenario::PackingBound { .. } => "packing-bound",
        }
    }
}
