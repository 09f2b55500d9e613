//! WalkSAT (SKC variant) with freebie moves.
//!
//! Each iteration picks an unsatisfied clause uniformly at random. If any
//! of its variables can be flipped without breaking a currently satisfied
//! clause, one such variable is flipped; otherwise a uniform variable of
//! the clause is flipped with probability `p`, and the minimum-break
//! variable (ties uniform) with probability `1 - p`. TTS is the number of
//! flips until the assignment satisfies the formula; there are no restarts.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::instance::{Assignment, Cnf3Instance};
use crate::integrate::RunOutcome;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WalkSatConfig {
    /// Noise probability `p` of a random walk move.
    pub noise_prob: f64,
    pub max_flips: u64,
    pub seed: u64,
}

impl Default for WalkSatConfig {
    fn default() -> Self {
        Self {
            noise_prob: 0.5,
            max_flips: 10_000_000,
            seed: 0,
        }
    }
}

impl WalkSatConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.noise_prob) {
            return Err(format!("noise_prob must lie in [0, 1], got {}", self.noise_prob));
        }
        if self.max_flips == 0 {
            return Err("max_flips must be >= 1".into());
        }
        Ok(())
    }
}

/// Incremental WalkSAT state with per-clause satisfied-literal counts and
/// an O(1)-update list of unsatisfied clauses.
struct WalkSat<'a> {
    inst: &'a Cnf3Instance,
    bits: Vec<bool>,
    /// Per variable: (clause index, literal polarity in that clause).
    occurrences: Vec<Vec<(u32, bool)>>,
    sat_count: Vec<u8>,
    unsat: Vec<u32>,
    /// Position of each clause inside `unsat`, or `u32::MAX`.
    unsat_pos: Vec<u32>,
    rng: ChaCha8Rng,
    noise_prob: f64,
}

impl<'a> WalkSat<'a> {
    fn new(inst: &'a Cnf3Instance, seed: u64, noise_prob: f64) -> Self {
        let n = inst.num_vars() as usize;
        let m = inst.num_clauses();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bits: Vec<bool> = (0..n).map(|_| rng.random()).collect();

        let mut occurrences = vec![Vec::new(); n];
        for (mi, clause) in inst.clauses().iter().enumerate() {
            for lit in clause {
                occurrences[lit.index()].push((mi as u32, lit.positive));
            }
        }

        let mut sat_count = vec![0u8; m];
        let mut unsat = Vec::new();
        let mut unsat_pos = vec![u32::MAX; m];
        for (mi, clause) in inst.clauses().iter().enumerate() {
            let c = clause.iter().filter(|l| l.satisfied_by(&bits)).count() as u8;
            sat_count[mi] = c;
            if c == 0 {
                unsat_pos[mi] = unsat.len() as u32;
                unsat.push(mi as u32);
            }
        }

        Self {
            inst,
            bits,
            occurrences,
            sat_count,
            unsat,
            unsat_pos,
            rng,
            noise_prob,
        }
    }

    fn solved(&self) -> bool {
        self.unsat.is_empty()
    }

    /// Clauses that would become unsatisfied if `var_idx` were flipped.
    fn break_count(&self, var_idx: usize) -> u32 {
        let currently = self.bits[var_idx];
        let mut broken = 0;
        for &(m, positive) in &self.occurrences[var_idx] {
            if currently == positive && self.sat_count[m as usize] == 1 {
                broken += 1;
            }
        }
        broken
    }

    fn flip(&mut self, var_idx: usize) {
        self.bits[var_idx] = !self.bits[var_idx];
        let now = self.bits[var_idx];
        for k in 0..self.occurrences[var_idx].len() {
            let (m, positive) = self.occurrences[var_idx][k];
            let mi = m as usize;
            if now == positive {
                self.sat_count[mi] += 1;
                if self.sat_count[mi] == 1 {
                    self.remove_unsat(m);
                }
            } else {
                self.sat_count[mi] -= 1;
                if self.sat_count[mi] == 0 {
                    self.insert_unsat(m);
                }
            }
        }
    }

    fn remove_unsat(&mut self, m: u32) {
        let pos = self.unsat_pos[m as usize] as usize;
        let last = *self.unsat.last().unwrap();
        self.unsat.swap_remove(pos);
        if pos < self.unsat.len() {
            self.unsat_pos[last as usize] = pos as u32;
        }
        self.unsat_pos[m as usize] = u32::MAX;
    }

    fn insert_unsat(&mut self, m: u32) {
        self.unsat_pos[m as usize] = self.unsat.len() as u32;
        self.unsat.push(m);
    }

    /// One WalkSAT move; returns the flipped variable index.
    fn step(&mut self) -> usize {
        let clause_idx = if self.unsat.len() == 1 {
            self.unsat[0]
        } else {
            self.unsat[self.rng.random_range(0..self.unsat.len())]
        };
        let clause = self.inst.clause(clause_idx as usize);
        let vars: [usize; 3] = std::array::from_fn(|j| clause[j].index());
        let breaks: [u32; 3] = std::array::from_fn(|j| self.break_count(vars[j]));
        let min_break = *breaks.iter().min().unwrap();

        let pick = if min_break == 0 {
            self.pick_among(&breaks, 0)
        } else if self.rng.random_range(0.0..1.0) < self.noise_prob {
            self.rng.random_range(0..3)
        } else {
            self.pick_among(&breaks, min_break)
        };
        let var = vars[pick];
        self.flip(var);
        var
    }

    /// Uniform choice among clause positions whose break count equals `target`.
    fn pick_among(&mut self, breaks: &[u32; 3], target: u32) -> usize {
        let matching = breaks.iter().filter(|b| **b == target).count();
        let chosen = if matching == 1 {
            0
        } else {
            self.rng.random_range(0..matching)
        };
        breaks
            .iter()
            .enumerate()
            .filter(|(_, b)| **b == target)
            .nth(chosen)
            .map(|(j, _)| j)
            .unwrap()
    }
}

fn digest_bits(bits: &[bool]) -> u64 {
    let mut h = 0xCBF2_9CE4_8422_2325u64;
    for &b in bits {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// Runs WalkSAT from a seeded uniform random assignment and returns the
/// outcome together with the final assignment.
pub fn walksat_solve_with_assignment(
    inst: &Cnf3Instance,
    cfg: &WalkSatConfig,
) -> (RunOutcome, Assignment) {
    debug_assert!(cfg.validate().is_ok());
    let mut walker = WalkSat::new(inst, cfg.seed, cfg.noise_prob);
    let mut flips = 0u64;
    while !walker.solved() && flips < cfg.max_flips {
        walker.step();
        flips += 1;
    }
    let solved = walker.solved();
    let outcome = RunOutcome {
        solved,
        tts_steps: flips,
        seed: cfg.seed,
        final_state_digest: digest_bits(&walker.bits),
        censored: !solved,
        diverged: false,
    };
    (outcome, Assignment::new(walker.bits))
}

/// Runs WalkSAT and reports the outcome; TTS is measured in flips.
pub fn walksat_solve(inst: &Cnf3Instance, cfg: &WalkSatConfig) -> RunOutcome {
    walksat_solve_with_assignment(inst, cfg).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{check_assignment, generate_planted, GeneratorConfig, Literal};

    fn single_positive_clause() -> Cnf3Instance {
        Cnf3Instance::new(
            3,
            vec![[
                Literal::new(1, true),
                Literal::new(2, true),
                Literal::new(3, true),
            ]],
        )
        .unwrap()
    }

    fn initial_bits(inst: &Cnf3Instance, seed: u64) -> Vec<bool> {
        WalkSat::new(inst, seed, 0.5).bits
    }

    #[test]
    fn satisfied_start_reports_zero_flips() {
        let inst = single_positive_clause();
        let seed = (0..64)
            .find(|&s| initial_bits(&inst, s).iter().any(|&b| b))
            .unwrap();
        let out = walksat_solve(&inst, &WalkSatConfig { seed, ..Default::default() });
        assert!(out.solved);
        assert_eq!(out.tts_steps, 0);
    }

    #[test]
    fn all_false_start_solves_single_clause_in_one_flip() {
        let inst = single_positive_clause();
        let seed = (0..256)
            .find(|&s| initial_bits(&inst, s).iter().all(|&b| !b))
            .expect("some seed draws the all-false assignment");
        let out = walksat_solve(&inst, &WalkSatConfig { seed, ..Default::default() });
        assert!(out.solved);
        assert_eq!(out.tts_steps, 1);
    }

    #[test]
    fn each_step_flips_exactly_one_bit() {
        let (inst, _) = generate_planted(30, 7.0, 21, &GeneratorConfig::default()).unwrap();
        let mut walker = WalkSat::new(&inst, 5, 0.5);
        for _ in 0..200 {
            if walker.solved() {
                break;
            }
            let before = walker.bits.clone();
            let var = walker.step();
            let diffs: Vec<usize> = (0..before.len())
                .filter(|&i| before[i] != walker.bits[i])
                .collect();
            assert_eq!(diffs, vec![var]);
        }
    }

    #[test]
    fn bookkeeping_matches_recomputation() {
        let (inst, _) = generate_planted(25, 6.0, 77, &GeneratorConfig::default()).unwrap();
        let mut walker = WalkSat::new(&inst, 9, 0.5);
        for _ in 0..300 {
            if walker.solved() {
                break;
            }
            walker.step();
            for (m, clause) in inst.clauses().iter().enumerate() {
                let expect = clause.iter().filter(|l| l.satisfied_by(&walker.bits)).count() as u8;
                assert_eq!(walker.sat_count[m], expect, "clause {m}");
                assert_eq!(walker.unsat_pos[m] != u32::MAX, expect == 0);
            }
        }
    }

    #[test]
    fn solved_assignment_satisfies_instance() {
        let cfg_gen = GeneratorConfig::default();
        for seed in 0..20u64 {
            let (inst, _) = generate_planted(50, 7.0, seed, &cfg_gen).unwrap();
            let (out, assignment) = walksat_solve_with_assignment(
                &inst,
                &WalkSatConfig { seed: seed ^ 0xA5, ..Default::default() },
            );
            assert!(out.solved, "seed {seed}");
            assert!(check_assignment(&inst, &assignment).unwrap());
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let (inst, _) = generate_planted(40, 7.0, 4, &GeneratorConfig::default()).unwrap();
        let cfg = WalkSatConfig { seed: 11, ..Default::default() };
        let a = walksat_solve(&inst, &cfg);
        let b = walksat_solve(&inst, &cfg);
        assert_eq!(a, b);
    }

    #[test]
    fn censors_at_max_flips() {
        let (inst, _) = generate_planted(50, 7.0, 1, &GeneratorConfig::default()).unwrap();
        let seed = (0..64)
            .find(|&s| {
                let w = WalkSat::new(&inst, s, 0.5);
                !w.solved()
            })
            .unwrap();
        let out = walksat_solve(
            &inst,
            &WalkSatConfig { seed, max_flips: 1, ..Default::default() },
        );
        if !out.solved {
            assert!(out.censored);
            assert_eq!(out.tts_steps, 1);
        }
    }

    #[test]
    fn config_validation() {
        let bad_noise = WalkSatConfig { noise_prob: 1.2, ..Default::default() };
        assert!(bad_noise.validate().is_err());
        let no_budget = WalkSatConfig { max_flips: 0, ..Default::default() };
        assert!(no_budget.validate().is_err());
    }
}
