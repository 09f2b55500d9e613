//! The DMM flow field for 3-SAT.
//!
//! Each clause m over variables (i, j, k) contributes a continuous
//! constraint `C_m = min(1 - q_i v_i, 1 - q_j v_j, 1 - q_k v_k) / 2`,
//! a gradient-like term `G` and a rigidity term `R` to the voltage
//! dynamics, while two per-clause memories evolve as
//!
//! ```text
//! dv_i    = sum_m  x_l,m x_s,m G_m,i + (1 + zeta x_l,m)(1 - x_s,m) R_m,i
//! dx_s,m  = beta (x_s,m + eps)(C_m - gamma)        x_s in [0, 1]
//! dx_l,m  = alpha (C_m - delta)                    x_l in [1, factor * M]
//! ```
//!
//! A clause reads as Boolean-true when `C_m < 1/2`, equivalently when some
//! literal is satisfied under the sign reading `v > 0 -> true`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{Assignment, Cnf3Instance};

#[derive(Debug, Error, PartialEq)]
pub enum DmmError {
    #[error("variable {var} does not appear in clause {clause}")]
    VariableNotInClause { var: u32, clause: usize },
    #[error("state out of bounds: {0}")]
    StateOutOfBounds(String),
    #[error("state dimensions ({v} voltages, {xs} short memories, {xl} long memories) do not match instance (N={n}, M={m})")]
    DimensionMismatch {
        v: usize,
        xs: usize,
        xl: usize,
        n: usize,
        m: usize,
    },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Flow-field parameters. Defaults follow the standard 3-SAT tuning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DmmParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub zeta: f64,
    /// Long-memory upper bound per clause: `x_l <= x_l_max_factor * M`.
    pub x_l_max_factor: f64,
}

impl Default for DmmParams {
    fn default() -> Self {
        Self {
            alpha: 5.0,
            beta: 20.0,
            gamma: 0.25,
            delta: 0.05,
            epsilon: 1e-3,
            zeta: 0.1,
            x_l_max_factor: 1e4,
        }
    }
}

impl DmmParams {
    pub fn validate(&self) -> Result<(), DmmError> {
        let fields = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("delta", self.delta),
            ("epsilon", self.epsilon),
            ("zeta", self.zeta),
            ("x_l_max_factor", self.x_l_max_factor),
        ];
        for (name, value) in fields {
            if !value.is_finite() || value <= 0.0 {
                return Err(DmmError::InvalidParams(format!(
                    "{name} must be strictly positive, got {value}"
                )));
            }
        }
        if self.gamma <= self.delta {
            return Err(DmmError::InvalidParams(format!(
                "gamma ({}) must exceed delta ({})",
                self.gamma, self.delta
            )));
        }
        Ok(())
    }

    /// Upper clamp bound for the long memories of an `m`-clause instance.
    pub fn x_l_max(&self, num_clauses: usize) -> f64 {
        self.x_l_max_factor * num_clauses as f64
    }
}

/// Continuous solver state: voltages plus short and long clause memories.
#[derive(Debug, Clone, PartialEq)]
pub struct DmmState {
    pub v: Vec<f64>,
    pub x_s: Vec<f64>,
    pub x_l: Vec<f64>,
}

impl DmmState {
    /// Clamps every component into its admissible range.
    pub fn clamp(&mut self, x_l_max: f64) {
        for v in &mut self.v {
            *v = v.clamp(-1.0, 1.0);
        }
        for x in &mut self.x_s {
            *x = x.clamp(0.0, 1.0);
        }
        for x in &mut self.x_l {
            *x = x.clamp(1.0, x_l_max);
        }
    }

    pub fn all_finite(&self) -> bool {
        self.v.iter().all(|x| x.is_finite())
            && self.x_s.iter().all(|x| x.is_finite())
            && self.x_l.iter().all(|x| x.is_finite())
    }

    fn bounds_violation(&self, x_l_max: f64) -> Option<String> {
        for (i, &v) in self.v.iter().enumerate() {
            if !(-1.0..=1.0).contains(&v) {
                return Some(format!("v[{i}] = {v}"));
            }
        }
        for (m, &x) in self.x_s.iter().enumerate() {
            if !(0.0..=1.0).contains(&x) {
                return Some(format!("x_s[{m}] = {x}"));
            }
        }
        for (m, &x) in self.x_l.iter().enumerate() {
            if !(1.0..=x_l_max).contains(&x) {
                return Some(format!("x_l[{m}] = {x}"));
            }
        }
        None
    }

    /// FNV-1a checksum over the raw bit patterns of all components.
    pub fn digest(&self) -> u64 {
        let mut h = 0xCBF2_9CE4_8422_2325u64;
        let mut eat = |x: f64| {
            for byte in x.to_bits().to_le_bytes() {
                h ^= u64::from(byte);
                h = h.wrapping_mul(0x0000_0100_0000_01B3);
            }
        };
        self.v.iter().for_each(|&x| eat(x));
        self.x_s.iter().for_each(|&x| eat(x));
        self.x_l.iter().for_each(|&x| eat(x));
        h
    }
}

/// Time derivative of a [`DmmState`].
#[derive(Debug, Clone, PartialEq)]
pub struct FlowField {
    pub dv: Vec<f64>,
    pub dx_s: Vec<f64>,
    pub dx_l: Vec<f64>,
}

impl FlowField {
    pub fn zeros(num_vars: usize, num_clauses: usize) -> Self {
        Self {
            dv: vec![0.0; num_vars],
            dx_s: vec![0.0; num_clauses],
            dx_l: vec![0.0; num_clauses],
        }
    }
}

/// The three `1 - q v` terms of clause `m`, in clause position order.
#[inline]
fn clause_terms(inst: &Cnf3Instance, m: usize, v: &[f64]) -> [f64; 3] {
    let clause = inst.clause(m);
    std::array::from_fn(|j| 1.0 - clause[j].q() * v[clause[j].index()])
}

/// Position of the minimizing literal; ties go to the lowest position.
#[inline]
fn min_position(terms: &[f64; 3]) -> usize {
    let mut w = 0;
    if terms[1] < terms[w] {
        w = 1;
    }
    if terms[2] < terms[w] {
        w = 2;
    }
    w
}

/// Continuous constraint `C_m` of clause `m`; lies in `[0, 1]` for
/// in-bounds voltages and reads Boolean-true iff `C_m < 1/2`.
pub fn clause_value(inst: &Cnf3Instance, m: usize, v: &[f64]) -> f64 {
    let terms = clause_terms(inst, m, v);
    0.5 * terms[min_position(&terms)]
}

fn position_of(inst: &Cnf3Instance, m: usize, var: u32) -> Result<usize, DmmError> {
    inst.clause(m)
        .iter()
        .position(|l| l.var == var)
        .ok_or(DmmError::VariableNotInClause { var, clause: m })
}

/// Gradient-like term `G_m,i = q_i min(1 - q_j v_j, 1 - q_k v_k) / 2`
/// where j, k are the other two variables of the clause.
pub fn gradient_term(inst: &Cnf3Instance, m: usize, var: u32, v: &[f64]) -> Result<f64, DmmError> {
    let pos = position_of(inst, m, var)?;
    let terms = clause_terms(inst, m, v);
    let q = inst.clause(m)[pos].q();
    let other = terms[(pos + 1) % 3].min(terms[(pos + 2) % 3]);
    Ok(0.5 * q * other)
}

/// Rigidity term: `(q_i - v_i) / 2` when literal i attains the clause
/// minimum, zero otherwise. On exact ties the literal at the lowest
/// clause position wins, so at most one literal per clause is nonzero.
pub fn rigidity_term(inst: &Cnf3Instance, m: usize, var: u32, v: &[f64]) -> Result<f64, DmmError> {
    let pos = position_of(inst, m, var)?;
    let terms = clause_terms(inst, m, v);
    if pos != min_position(&terms) {
        return Ok(0.0);
    }
    let lit = inst.clause(m)[pos];
    Ok(0.5 * (lit.q() - v[lit.index()]))
}

/// Reads the Boolean assignment off the voltage signs (`v > 0` maps to
/// true; exact zero maps to false).
pub fn assignment_from_state(state: &DmmState) -> Assignment {
    Assignment::new(state.v.iter().map(|&v| v > 0.0).collect())
}

/// True iff the sign reading of `state.v` satisfies every clause.
pub fn is_solved(inst: &Cnf3Instance, state: &DmmState) -> bool {
    inst.clauses().iter().all(|clause| {
        clause
            .iter()
            .any(|lit| (state.v[lit.index()] > 0.0) == lit.positive)
    })
}

/// Reusable flow evaluator for one instance.
///
/// Construction precomputes the variable-to-clause adjacency, so one
/// evaluation costs O(M) rather than O(N * M). Per-variable contributions
/// are accumulated in adjacency order, which keeps results bit-identical
/// no matter how callers schedule the work.
pub struct DmmFlow<'a> {
    inst: &'a Cnf3Instance,
    params: DmmParams,
    /// Per variable: (clause index, position within the clause).
    adjacency: Vec<Vec<(u32, u8)>>,
    x_l_max: f64,
}

/// Per-clause intermediates shared by all three literal slots.
#[derive(Debug, Clone)]
pub(crate) struct ClauseScratch {
    terms: Vec<[f64; 3]>,
    min_pos: Vec<u8>,
    grad_weight: Vec<f64>,
    rigid_weight: Vec<f64>,
}

impl ClauseScratch {
    pub(crate) fn new(num_clauses: usize) -> Self {
        Self {
            terms: vec![[0.0; 3]; num_clauses],
            min_pos: vec![0; num_clauses],
            grad_weight: vec![0.0; num_clauses],
            rigid_weight: vec![0.0; num_clauses],
        }
    }
}

impl<'a> DmmFlow<'a> {
    pub fn new(inst: &'a Cnf3Instance, params: DmmParams) -> Result<Self, DmmError> {
        params.validate()?;
        let mut adjacency = vec![Vec::new(); inst.num_vars() as usize];
        for (m, clause) in inst.clauses().iter().enumerate() {
            for (pos, lit) in clause.iter().enumerate() {
                adjacency[lit.index()].push((m as u32, pos as u8));
            }
        }
        let x_l_max = params.x_l_max(inst.num_clauses());
        Ok(Self {
            inst,
            params,
            adjacency,
            x_l_max,
        })
    }

    pub fn instance(&self) -> &'a Cnf3Instance {
        self.inst
    }

    pub fn params(&self) -> &DmmParams {
        &self.params
    }

    pub fn x_l_max(&self) -> f64 {
        self.x_l_max
    }

    fn check_dimensions(&self, state: &DmmState) -> Result<(), DmmError> {
        let n = self.inst.num_vars() as usize;
        let m = self.inst.num_clauses();
        if state.v.len() != n || state.x_s.len() != m || state.x_l.len() != m {
            return Err(DmmError::DimensionMismatch {
                v: state.v.len(),
                xs: state.x_s.len(),
                xl: state.x_l.len(),
                n,
                m,
            });
        }
        Ok(())
    }

    /// Evaluates the flow field, rejecting out-of-bounds states.
    pub fn eval(&self, state: &DmmState) -> Result<FlowField, DmmError> {
        self.check_dimensions(state)?;
        if let Some(violation) = state.bounds_violation(self.x_l_max) {
            return Err(DmmError::StateOutOfBounds(violation));
        }
        let mut out = FlowField::zeros(state.v.len(), state.x_s.len());
        let mut scratch = ClauseScratch::new(state.x_s.len());
        self.eval_into(state, &mut out, &mut scratch);
        Ok(out)
    }

    /// Raw evaluation without bounds checks; total on any finite state.
    /// RK4 inner stages step slightly outside the box, which is fine here.
    pub(crate) fn eval_into(
        &self,
        state: &DmmState,
        out: &mut FlowField,
        scratch: &mut ClauseScratch,
    ) {
        let p = &self.params;
        for m in 0..self.inst.num_clauses() {
            let terms = clause_terms(self.inst, m, &state.v);
            let w = min_position(&terms);
            let c = 0.5 * terms[w];
            scratch.terms[m] = terms;
            scratch.min_pos[m] = w as u8;
            scratch.grad_weight[m] = state.x_l[m] * state.x_s[m];
            scratch.rigid_weight[m] = (1.0 + p.zeta * state.x_l[m]) * (1.0 - state.x_s[m]);
            out.dx_s[m] = p.beta * (state.x_s[m] + p.epsilon) * (c - p.gamma);
            out.dx_l[m] = p.alpha * (c - p.delta);
        }
        for (i, slots) in self.adjacency.iter().enumerate() {
            let mut dv = 0.0;
            for &(m, pos) in slots {
                let m = m as usize;
                let pos = pos as usize;
                let terms = &scratch.terms[m];
                let q = self.inst.clause(m)[pos].q();
                let grad = 0.5 * q * terms[(pos + 1) % 3].min(terms[(pos + 2) % 3]);
                dv += scratch.grad_weight[m] * grad;
                if pos == scratch.min_pos[m] as usize {
                    let rigid = 0.5 * (q - state.v[i]);
                    dv += scratch.rigid_weight[m] * rigid;
                }
            }
            out.dv[i] = dv;
        }
    }
}

/// One-shot flow evaluation. Builds the adjacency index on every call;
/// integrators should hold a [`DmmFlow`] instead.
pub fn flow(
    inst: &Cnf3Instance,
    params: &DmmParams,
    state: &DmmState,
) -> Result<FlowField, DmmError> {
    DmmFlow::new(inst, *params)?.eval(state)
}
