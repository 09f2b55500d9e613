//! Planted-solution random 3-SAT generator.
//!
//! Every emitted clause has at least one literal satisfied by a hidden
//! random assignment (the plant), so instances are satisfiable by
//! construction. The number of literals a clause has satisfied under the
//! plant (1, 2, or 3) is drawn from configurable relative weights;
//! clauses with zero satisfied literals are never produced.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::{Assignment, Clause, Cnf3Instance, InstanceError, Literal};

/// Tunables of the planted generator.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GeneratorConfig {
    /// Relative probability that a clause has exactly 1, 2, or 3 literals
    /// satisfied under the plant. Need not be normalized.
    pub type_weights: [f64; 3],
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            type_weights: [0.25, 0.50, 0.25],
        }
    }
}

/// Subsets of clause positions of each satisfied-count, in a fixed order.
const SUBSETS_ONE: [[bool; 3]; 3] = [
    [true, false, false],
    [false, true, false],
    [false, false, true],
];
const SUBSETS_TWO: [[bool; 3]; 3] = [
    [true, true, false],
    [true, false, true],
    [false, true, true],
];

/// Generates a planted 3-SAT instance with `M = round(ratio * n_vars)`
/// clauses (ties round up) and returns it together with its satisfying
/// plant.
///
/// The output is a pure function of the arguments: the same
/// `(n_vars, ratio, seed, config)` always yields a bit-identical instance.
/// Clause variables are drawn uniformly without replacement per clause;
/// duplicate clauses across the formula are allowed.
pub fn generate_planted(
    n_vars: u32,
    ratio: f64,
    seed: u64,
    config: &GeneratorConfig,
) -> Result<(Cnf3Instance, Assignment), InstanceError> {
    if n_vars < 3 {
        return Err(InstanceError::TooFewVariables(n_vars));
    }
    let m = (ratio * f64::from(n_vars)).round();
    if m.is_nan() || !m.is_finite() || m < 1.0 {
        return Err(InstanceError::InvalidRatio { ratio, n_vars });
    }
    let m = m as usize;
    let weights = config.type_weights;
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) || weights.iter().sum::<f64>() <= 0.0 {
        return Err(InstanceError::InvalidWeights);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plant: Vec<bool> = (0..n_vars).map(|_| rng.random()).collect();

    let total: f64 = weights.iter().sum();
    let mut clauses: Vec<Clause> = Vec::with_capacity(m);
    for _ in 0..m {
        let vars = draw_distinct_vars(&mut rng, n_vars);
        let satisfied = draw_satisfied_mask(&mut rng, &weights, total);
        let clause = std::array::from_fn(|j| {
            let var = vars[j];
            let plant_bit = plant[var as usize - 1];
            let positive = if satisfied[j] { plant_bit } else { !plant_bit };
            Literal::new(var, positive)
        });
        clauses.push(clause);
    }

    let inst = Cnf3Instance::new(n_vars, clauses)?;
    Ok((inst, Assignment::new(plant)))
}

fn draw_distinct_vars(rng: &mut ChaCha8Rng, n_vars: u32) -> [u32; 3] {
    let a = rng.random_range(1..=n_vars);
    let b = loop {
        let x = rng.random_range(1..=n_vars);
        if x != a {
            break x;
        }
    };
    let c = loop {
        let x = rng.random_range(1..=n_vars);
        if x != a && x != b {
            break x;
        }
    };
    [a, b, c]
}

fn draw_satisfied_mask(rng: &mut ChaCha8Rng, weights: &[f64; 3], total: f64) -> [bool; 3] {
    let x = rng.random_range(0.0..total);
    if x < weights[0] {
        SUBSETS_ONE[rng.random_range(0..3)]
    } else if x < weights[0] + weights[1] {
        SUBSETS_TWO[rng.random_range(0..3)]
    } else {
        [true, true, true]
    }
}
