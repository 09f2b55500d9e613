//! Fixed-step time integration of the DMM flow.
//!
//! Forward Euler is the production path; additive Gaussian white noise of
//! strength `Gamma` enters the memory variables as independent
//! `sqrt(Gamma * dt) * N(0,1)` increments after the deterministic update
//! (Euler-Maruyama). RK4 is available for noise-free studies only. After
//! every step the state is clamped back into its box and checked for
//! finiteness; the solved predicate is evaluated every step so TTS is
//! exact in step units.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dmm::{is_solved, ClauseScratch, DmmError, DmmFlow, DmmParams, DmmState, FlowField};
use crate::instance::Cnf3Instance;

#[derive(Debug, Error, PartialEq)]
pub enum IntegrateError {
    #[error("invalid integrator configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Dmm(#[from] DmmError),
    #[error("non-finite state encountered at step {step}")]
    NonFiniteState { step: u64 },
}

/// Integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ForwardEuler,
    RungeKutta4,
}

/// Which voltage components to log, and how often.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryConfig {
    /// Record every `stride`-th step (plus the initial and final states).
    pub stride: u64,
    /// 1-based variable indices to record; empty means all variables.
    #[serde(default)]
    pub vars: Vec<u32>,
}

/// Integrator settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegratorConfig {
    pub method: Method,
    pub dt: f64,
    /// Additive noise strength `Gamma` (inverse time units); 0 disables noise.
    pub noise_strength: f64,
    pub max_steps: u64,
    /// Initial short-memory value (all clauses).
    pub init_x_s: f64,
    /// Initial long-memory value (all clauses).
    pub init_x_l: f64,
    pub trajectory: Option<TrajectoryConfig>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::ForwardEuler,
            dt: 0.2,
            noise_strength: 0.12,
            max_steps: 100_000,
            init_x_s: 0.5,
            init_x_l: 1.0,
            trajectory: None,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), IntegrateError> {
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(IntegrateError::Config(format!("dt must be > 0, got {}", self.dt)));
        }
        if !self.noise_strength.is_finite() || self.noise_strength < 0.0 {
            return Err(IntegrateError::Config(format!(
                "noise_strength must be >= 0, got {}",
                self.noise_strength
            )));
        }
        if self.max_steps == 0 {
            return Err(IntegrateError::Config("max_steps must be >= 1".into()));
        }
        if self.method == Method::RungeKutta4 && self.noise_strength > 0.0 {
            return Err(IntegrateError::Config(
                "RK4 is deterministic only; additive noise requires forward Euler".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.init_x_s) {
            return Err(IntegrateError::Config(format!(
                "init_x_s must lie in [0, 1], got {}",
                self.init_x_s
            )));
        }
        if !self.init_x_l.is_finite() || self.init_x_l < 1.0 {
            return Err(IntegrateError::Config(format!(
                "init_x_l must be >= 1, got {}",
                self.init_x_l
            )));
        }
        if let Some(t) = &self.trajectory {
            if t.stride == 0 {
                return Err(IntegrateError::Config("trajectory stride must be >= 1".into()));
            }
        }
        Ok(())
    }
}

/// Result of a single solve attempt.
///
/// `censored` marks every run that ended without a solution, whether it
/// exhausted `max_steps` or aborted on a non-finite state; `diverged`
/// singles out the latter. TTS is counted in integration steps, with 0
/// meaning the initial state already satisfied the formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub solved: bool,
    pub tts_steps: u64,
    pub seed: u64,
    pub final_state_digest: u64,
    pub censored: bool,
    pub diverged: bool,
}

/// Sampled voltage trace of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryLog {
    /// 1-based indices of the recorded variables.
    pub vars: Vec<u32>,
    pub frames: Vec<TrajectoryFrame>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryFrame {
    pub step: u64,
    pub time: f64,
    pub v: Vec<f64>,
}

impl TrajectoryLog {
    fn new(cfg: &TrajectoryConfig, num_vars: u32) -> Result<Self, IntegrateError> {
        let vars = if cfg.vars.is_empty() {
            (1..=num_vars).collect()
        } else {
            for &v in &cfg.vars {
                if v == 0 || v > num_vars {
                    return Err(IntegrateError::Config(format!(
                        "trajectory variable {v} out of range 1..={num_vars}"
                    )));
                }
            }
            cfg.vars.clone()
        };
        Ok(Self {
            vars,
            frames: Vec::new(),
        })
    }

    fn record(&mut self, step: u64, dt: f64, state: &DmmState) {
        if let Some(last) = self.frames.last() {
            if last.step >= step {
                return;
            }
        }
        self.frames.push(TrajectoryFrame {
            step,
            time: step as f64 * dt,
            v: self.vars.iter().map(|&v| state.v[v as usize - 1]).collect(),
        });
    }

    /// CSV serialization: `step,time,var_index,v` with one row per
    /// recorded variable per frame.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,time,var_index,v\n");
        for frame in &self.frames {
            for (j, &var) in self.vars.iter().enumerate() {
                out.push_str(&format!("{},{},{},{}\n", frame.step, frame.time, var, frame.v[j]));
            }
        }
        out
    }

    /// Number of sign crossings summed over all recorded variables.
    pub fn sign_crossings(&self) -> usize {
        let mut count = 0;
        for j in 0..self.vars.len() {
            for pair in self.frames.windows(2) {
                let a = pair[0].v[j];
                let b = pair[1].v[j];
                if (a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0) {
                    count += 1;
                }
            }
        }
        count
    }
}

/// Draws the default initial state: voltages i.i.d. uniform in [-1, 1],
/// short memories at 0.5, long memories at their lower bound 1.
pub fn init_state(inst: &Cnf3Instance, seed: u64) -> DmmState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    draw_init_state(inst, &mut rng, 0.5, 1.0)
}

fn draw_init_state(inst: &Cnf3Instance, rng: &mut ChaCha8Rng, x_s0: f64, x_l0: f64) -> DmmState {
    let n = inst.num_vars() as usize;
    let m = inst.num_clauses();
    DmmState {
        v: (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect(),
        x_s: vec![x_s0; m],
        x_l: vec![x_l0; m],
    }
}

struct StepBuffers {
    field: FlowField,
    scratch: ClauseScratch,
    // RK4 stage storage
    stage_state: Option<Box<DmmState>>,
    stages: Vec<FlowField>,
}

impl StepBuffers {
    fn new(n: usize, m: usize, method: Method) -> Self {
        let (stage_state, stages) = match method {
            Method::ForwardEuler => (None, Vec::new()),
            Method::RungeKutta4 => (
                Some(Box::new(DmmState {
                    v: vec![0.0; n],
                    x_s: vec![0.0; m],
                    x_l: vec![0.0; m],
                })),
                (0..3).map(|_| FlowField::zeros(n, m)).collect(),
            ),
        };
        Self {
            field: FlowField::zeros(n, m),
            scratch: ClauseScratch::new(m),
            stage_state,
            stages,
        }
    }
}

fn euler_advance(
    flow: &DmmFlow,
    dt: f64,
    noise_sd: f64,
    state: &mut DmmState,
    buf: &mut StepBuffers,
    rng: &mut ChaCha8Rng,
) -> bool {
    flow.eval_into(state, &mut buf.field, &mut buf.scratch);
    for (v, dv) in state.v.iter_mut().zip(&buf.field.dv) {
        *v += dt * dv;
    }
    for (x, dx) in state.x_s.iter_mut().zip(&buf.field.dx_s) {
        *x += dt * dx;
    }
    for (x, dx) in state.x_l.iter_mut().zip(&buf.field.dx_l) {
        *x += dt * dx;
    }
    if noise_sd > 0.0 {
        for x in state.x_s.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *x += noise_sd * z;
        }
        for x in state.x_l.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *x += noise_sd * z;
        }
    }
    if !state.all_finite() {
        return false;
    }
    state.clamp(flow.x_l_max());
    true
}

fn rk4_advance(flow: &DmmFlow, dt: f64, state: &mut DmmState, buf: &mut StepBuffers) -> bool {
    let stage = buf.stage_state.as_mut().expect("rk4 buffers");

    // k1 = F(x)
    flow.eval_into(state, &mut buf.field, &mut buf.scratch);
    // k2 = F(x + dt/2 k1), k3 = F(x + dt/2 k2), k4 = F(x + dt k3)
    for (s, factor) in [0.5 * dt, 0.5 * dt, dt].into_iter().enumerate() {
        {
            let prev = if s == 0 { &buf.field } else { &buf.stages[s - 1] };
            write_displaced(stage, state, prev, factor);
        }
        flow.eval_into(stage, &mut buf.stages[s], &mut buf.scratch);
    }

    let sixth = dt / 6.0;
    let (k1, k2, k3, k4) = (&buf.field, &buf.stages[0], &buf.stages[1], &buf.stages[2]);
    for i in 0..state.v.len() {
        state.v[i] += sixth * (k1.dv[i] + 2.0 * k2.dv[i] + 2.0 * k3.dv[i] + k4.dv[i]);
    }
    for m in 0..state.x_s.len() {
        state.x_s[m] += sixth * (k1.dx_s[m] + 2.0 * k2.dx_s[m] + 2.0 * k3.dx_s[m] + k4.dx_s[m]);
        state.x_l[m] += sixth * (k1.dx_l[m] + 2.0 * k2.dx_l[m] + 2.0 * k3.dx_l[m] + k4.dx_l[m]);
    }
    if !state.all_finite() {
        return false;
    }
    state.clamp(flow.x_l_max());
    true
}

fn write_displaced(target: &mut DmmState, base: &DmmState, k: &FlowField, factor: f64) {
    for i in 0..base.v.len() {
        target.v[i] = base.v[i] + factor * k.dv[i];
    }
    for m in 0..base.x_s.len() {
        target.x_s[m] = base.x_s[m] + factor * k.dx_s[m];
        target.x_l[m] = base.x_l[m] + factor * k.dx_l[m];
    }
}

/// One forward Euler / Euler-Maruyama step over a fresh copy of `state`.
pub fn euler_step(
    inst: &Cnf3Instance,
    params: &DmmParams,
    cfg: &IntegratorConfig,
    state: &DmmState,
    rng: &mut ChaCha8Rng,
) -> Result<DmmState, IntegrateError> {
    cfg.validate()?;
    let flow = DmmFlow::new(inst, *params)?;
    flow.eval(state)?; // bounds + dimension check
    let mut next = state.clone();
    let mut buf = StepBuffers::new(state.v.len(), state.x_s.len(), Method::ForwardEuler);
    let noise_sd = (cfg.noise_strength * cfg.dt).sqrt();
    if !euler_advance(&flow, cfg.dt, noise_sd, &mut next, &mut buf, rng) {
        return Err(IntegrateError::NonFiniteState { step: 1 });
    }
    Ok(next)
}

/// One classical RK4 step over a fresh copy of `state` (noise-free only).
pub fn rk4_step(
    inst: &Cnf3Instance,
    params: &DmmParams,
    cfg: &IntegratorConfig,
    state: &DmmState,
) -> Result<DmmState, IntegrateError> {
    cfg.validate()?;
    if cfg.noise_strength > 0.0 {
        return Err(IntegrateError::Config(
            "RK4 is deterministic only; additive noise requires forward Euler".into(),
        ));
    }
    let flow = DmmFlow::new(inst, *params)?;
    flow.eval(state)?;
    let mut next = state.clone();
    let mut buf = StepBuffers::new(state.v.len(), state.x_s.len(), Method::RungeKutta4);
    if !rk4_advance(&flow, cfg.dt, &mut next, &mut buf) {
        return Err(IntegrateError::NonFiniteState { step: 1 });
    }
    Ok(next)
}

/// Integrates from a seeded random initial state until the sign reading
/// satisfies the formula, `max_steps` is exhausted, or the state turns
/// non-finite. The outcome is a pure function of
/// `(inst, params, cfg, seed)`.
pub fn solve(
    inst: &Cnf3Instance,
    params: &DmmParams,
    cfg: &IntegratorConfig,
    seed: u64,
) -> Result<(RunOutcome, Option<TrajectoryLog>), IntegrateError> {
    cfg.validate()?;
    let flow = DmmFlow::new(inst, *params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = draw_init_state(inst, &mut rng, cfg.init_x_s, cfg.init_x_l);
    let mut traj = match &cfg.trajectory {
        Some(t) => Some((TrajectoryLog::new(t, inst.num_vars())?, t.stride)),
        None => None,
    };
    if let Some((log, _)) = traj.as_mut() {
        log.record(0, cfg.dt, &state);
    }

    let noise_sd = (cfg.noise_strength * cfg.dt).sqrt();
    let mut buf = StepBuffers::new(inst.num_vars() as usize, inst.num_clauses(), cfg.method);

    let outcome = |solved: bool, steps: u64, diverged: bool, state: &DmmState| RunOutcome {
        solved,
        tts_steps: steps,
        seed,
        final_state_digest: state.digest(),
        censored: !solved,
        diverged,
    };

    if is_solved(inst, &state) {
        let out = outcome(true, 0, false, &state);
        return Ok((out, traj.map(|(log, _)| log)));
    }

    for step in 1..=cfg.max_steps {
        let ok = match cfg.method {
            Method::ForwardEuler => {
                euler_advance(&flow, cfg.dt, noise_sd, &mut state, &mut buf, &mut rng)
            }
            Method::RungeKutta4 => rk4_advance(&flow, cfg.dt, &mut state, &mut buf),
        };
        if !ok {
            if let Some((log, _)) = traj.as_mut() {
                log.record(step, cfg.dt, &state);
            }
            let out = outcome(false, step, true, &state);
            return Ok((out, traj.map(|(log, _)| log)));
        }
        if let Some((log, stride)) = traj.as_mut() {
            if step % *stride == 0 {
                log.record(step, cfg.dt, &state);
            }
        }
        if is_solved(inst, &state) {
            if let Some((log, _)) = traj.as_mut() {
                log.record(step, cfg.dt, &state);
            }
            let out = outcome(true, step, false, &state);
            return Ok((out, traj.map(|(log, _)| log)));
        }
    }

    if let Some((log, _)) = traj.as_mut() {
        log.record(cfg.max_steps, cfg.dt, &state);
    }
    let out = outcome(false, cfg.max_steps, false, &state);
    Ok((out, traj.map(|(log, _)| log)))
}

/// One forward Euler step of a scalar autonomous ODE `dx/dt = f(x)`.
/// Exists so integration order can be verified on problems with known
/// closed-form solutions.
pub fn euler_scalar_step(f: impl Fn(f64) -> f64, x: f64, dt: f64) -> f64 {
    x + dt * f(x)
}

/// One classical RK4 step of a scalar autonomous ODE `dx/dt = f(x)`.
pub fn rk4_scalar_step(f: impl Fn(f64) -> f64, x: f64, dt: f64) -> f64 {
    let k1 = f(x);
    let k2 = f(x + 0.5 * dt * k1);
    let k3 = f(x + 0.5 * dt * k2);
    let k4 = f(x + dt * k3);
    x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_planted, GeneratorConfig, Literal};

    fn single_clause() -> Cnf3Instance {
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

    fn euler_cfg(noise: f64) -> IntegratorConfig {
        IntegratorConfig {
            noise_strength: noise,
            ..IntegratorConfig::default()
        }
    }

    #[test]
    fn init_state_is_deterministic_and_seed_sensitive() {
        let (inst, _) = generate_planted(40, 4.0, 3, &GeneratorConfig::default()).unwrap();
        let a = init_state(&inst, 7);
        let b = init_state(&inst, 7);
        assert_eq!(a, b);
        assert!(a.x_l.iter().all(|&x| x == 1.0));
        assert!(a.x_s.iter().all(|&x| x == 0.5));
        assert!(a.v.iter().all(|&v| (-1.0..=1.0).contains(&v)));
        let mut distinct = 0;
        for seed in 0..100u64 {
            let s1 = init_state(&inst, 2 * seed);
            let s2 = init_state(&inst, 2 * seed + 1);
            if s1.v != s2.v {
                distinct += 1;
            }
        }
        assert_eq!(distinct, 100);
    }

    #[test]
    fn rail_state_is_a_fixed_point_of_both_steppers() {
        // All literals satisfied at their rails with memories on their
        // clamped bounds: the post-clamp update is the identity.
        let inst = single_clause();
        let params = DmmParams::default();
        let rail = DmmState {
            v: vec![1.0, 1.0, 1.0],
            x_s: vec![0.0],
            x_l: vec![1.0],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let next = euler_step(&inst, &params, &euler_cfg(0.0), &rail, &mut rng).unwrap();
        assert_eq!(next, rail);
        let cfg = IntegratorConfig {
            method: Method::RungeKutta4,
            noise_strength: 0.0,
            ..IntegratorConfig::default()
        };
        let next = rk4_step(&inst, &params, &cfg, &rail).unwrap();
        assert_eq!(next, rail);
    }

    #[test]
    fn euler_long_memory_decay_at_satisfied_clause() {
        let inst = single_clause();
        let params = DmmParams::default();
        let state = DmmState {
            v: vec![1.0, 1.0, 1.0],
            x_s: vec![0.0],
            x_l: vec![5.0],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let next = euler_step(&inst, &params, &euler_cfg(0.0), &state, &mut rng).unwrap();
        assert_eq!(next.v, state.v);
        // dt * alpha * delta = 0.2 * 5 * 0.05
        assert!((next.x_l[0] - 4.95).abs() < 1e-15);
    }

    #[test]
    fn noise_increment_variance_matches_gamma_dt() {
        // v = 0.9 on a fully positive clause puts C exactly at delta, so
        // the deterministic x_l drift vanishes and the one-step increment
        // is pure noise.
        let inst = single_clause();
        let params = DmmParams::default();
        let cfg = euler_cfg(0.12);
        let state = DmmState {
            v: vec![0.9, 0.9, 0.9],
            x_s: vec![0.5],
            x_l: vec![100.0],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let trials = 100_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..trials {
            let next = euler_step(&inst, &params, &cfg, &state, &mut rng).unwrap();
            let inc = next.x_l[0] - state.x_l[0];
            sum += inc;
            sum_sq += inc * inc;
        }
        let n = trials as f64;
        let mean = sum / n;
        let var = (sum_sq - n * mean * mean) / (n - 1.0);
        let expected = cfg.noise_strength * cfg.dt;
        assert!(
            (var - expected).abs() / expected < 0.05,
            "variance {var} vs expected {expected}"
        );
    }

    #[test]
    fn rk4_scalar_matches_degree_four_taylor() {
        let dt = 0.2;
        let next = rk4_scalar_step(|x| -x, 1.0, dt);
        let taylor = 1.0 - dt + dt * dt / 2.0 - dt * dt * dt / 6.0 + dt * dt * dt * dt / 24.0;
        assert!((next - taylor).abs() < 1e-15);
    }

    #[test]
    fn rk4_scalar_fourth_order_convergence() {
        // Integrate dx/dt = -x over [0, 1]; halving dt must shrink the
        // global error by about 2^4.
        let global_error = |dt: f64| {
            let steps = (1.0 / dt).round() as usize;
            let mut x = 1.0;
            for _ in 0..steps {
                x = rk4_scalar_step(|y| -y, x, dt);
            }
            (x - (-1.0f64).exp()).abs()
        };
        let e1 = global_error(0.2);
        let e2 = global_error(0.1);
        let e3 = global_error(0.05);
        let r12 = e1 / e2;
        let r23 = e2 / e3;
        assert!((r12 - 16.0).abs() / 16.0 < 0.1, "ratio {r12}");
        assert!((r23 - 16.0).abs() / 16.0 < 0.1, "ratio {r23}");
    }

    #[test]
    fn rk4_rejects_noise() {
        let cfg = IntegratorConfig {
            method: Method::RungeKutta4,
            noise_strength: 0.12,
            ..IntegratorConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(IntegrateError::Config(_))));
    }

    #[test]
    fn config_validation_rejects_bad_fields() {
        let bad = [
            IntegratorConfig { dt: 0.0, ..Default::default() },
            IntegratorConfig { noise_strength: -0.1, ..Default::default() },
            IntegratorConfig { max_steps: 0, ..Default::default() },
            IntegratorConfig {
                trajectory: Some(TrajectoryConfig { stride: 0, vars: vec![] }),
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn solve_reports_tts_zero_when_initial_state_satisfies() {
        let inst = single_clause();
        let params = DmmParams::default();
        let cfg = euler_cfg(0.12);
        // Find a seed whose initial sign pattern satisfies the clause
        // (7 of 8 sign patterns do, so the first few seeds suffice).
        let seed = (0..64)
            .find(|&s| is_solved(&inst, &init_state(&inst, s)))
            .unwrap();
        let (out, _) = solve(&inst, &params, &cfg, seed).unwrap();
        assert!(out.solved);
        assert_eq!(out.tts_steps, 0);
        assert!(!out.censored);
        assert!(!out.diverged);
    }

    #[test]
    fn solve_censors_at_max_steps() {
        let (inst, _) = generate_planted(30, 7.0, 5, &GeneratorConfig::default()).unwrap();
        let params = DmmParams::default();
        let mut cfg = euler_cfg(0.12);
        cfg.max_steps = 1;
        // Pick a seed whose initial state does not satisfy the formula.
        let seed = (0..64)
            .find(|&s| !is_solved(&inst, &init_state(&inst, s)))
            .unwrap();
        let (out, _) = solve(&inst, &params, &cfg, seed).unwrap();
        if !out.solved {
            assert!(out.censored);
            assert_eq!(out.tts_steps, 1);
        }
    }

    #[test]
    fn solve_is_deterministic() {
        let (inst, _) = generate_planted(60, 7.0, 9, &GeneratorConfig::default()).unwrap();
        let params = DmmParams::default();
        let cfg = euler_cfg(0.12);
        let (a, _) = solve(&inst, &params, &cfg, 31).unwrap();
        let (b, _) = solve(&inst, &params, &cfg, 31).unwrap();
        assert_eq!(a, b);
        assert!(a.solved, "N=60 planted instance should solve quickly");
    }

    #[test]
    fn state_stays_in_bounds_along_noisy_runs() {
        let (inst, _) = generate_planted(24, 6.0, 11, &GeneratorConfig::default()).unwrap();
        let params = DmmParams::default();
        let cfg = euler_cfg(0.5);
        let x_l_max = params.x_l_max(inst.num_clauses());
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let mut state = init_state(&inst, 44);
        for _ in 0..300 {
            state = euler_step(&inst, &params, &cfg, &state, &mut rng).unwrap();
            for &v in &state.v {
                assert!((-1.0..=1.0).contains(&v));
            }
            for &x in &state.x_s {
                assert!((0.0..=1.0).contains(&x));
            }
            for &x in &state.x_l {
                assert!((1.0..=x_l_max).contains(&x));
            }
        }
    }

    #[test]
    fn euler_and_rk4_agree_on_tts_order_of_magnitude() {
        // Individual runs are heavily quantized at this size, so compare
        // ensemble means across seeds rather than single trajectories.
        let params = DmmParams::default();
        let euler = euler_cfg(0.0);
        let rk4 = IntegratorConfig {
            method: Method::RungeKutta4,
            noise_strength: 0.0,
            ..IntegratorConfig::default()
        };
        let mut euler_total = 0u64;
        let mut rk4_total = 0u64;
        for seed in 0..10 {
            let (inst, _) = generate_planted(80, 7.0, seed, &GeneratorConfig::default()).unwrap();
            let (a, _) = solve(&inst, &params, &euler, seed + 100).unwrap();
            let (b, _) = solve(&inst, &params, &rk4, seed + 100).unwrap();
            assert!(a.solved && b.solved);
            euler_total += a.tts_steps;
            rk4_total += b.tts_steps;
        }
        let ratio = euler_total as f64 / rk4_total as f64;
        assert!((0.1..=10.0).contains(&ratio), "mean tts {euler_total} vs {rk4_total}");
    }

    #[test]
    fn large_instance_solves_in_hundreds_of_steps() {
        // N = 6000, M = 42000, noisy Euler: ensemble mean TTS should sit at
        // the few-hundred-step scale (order of magnitude check only).
        let cfg_gen = GeneratorConfig {
            type_weights: [0.5, 0.5, 0.0],
        };
        let (inst, _) = generate_planted(6000, 7.0, 42, &cfg_gen).unwrap();
        let params = DmmParams::default();
        let cfg = euler_cfg(0.12);
        let mut total = 0u64;
        let runs = 6;
        for seed in 0..runs {
            let (out, _) = solve(&inst, &params, &cfg, seed).unwrap();
            assert!(out.solved, "seed {seed}");
            total += out.tts_steps;
        }
        let mean = total as f64 / runs as f64;
        assert!(
            (39.0..=3900.0).contains(&mean),
            "mean TTS {mean} should be within an order of magnitude of a few hundred steps"
        );
    }

    #[test]
    fn trajectory_frames_strictly_increasing_and_csv_shape() {
        let (inst, _) = generate_planted(30, 7.0, 8, &GeneratorConfig::default()).unwrap();
        let params = DmmParams::default();
        let cfg = IntegratorConfig {
            trajectory: Some(TrajectoryConfig {
                stride: 3,
                vars: vec![1, 5, 30],
            }),
            ..euler_cfg(0.12)
        };
        let (out, traj) = solve(&inst, &params, &cfg, 3).unwrap();
        let traj = traj.unwrap();
        assert!(out.solved);
        assert!(traj.frames.len() >= 2);
        for pair in traj.frames.windows(2) {
            assert!(pair[1].time > pair[0].time);
        }
        let csv = traj.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "step,time,var_index,v");
        assert_eq!(lines.len(), 1 + traj.frames.len() * 3);
    }

    #[test]
    fn trajectory_rejects_out_of_range_vars() {
        let inst = single_clause();
        let params = DmmParams::default();
        let cfg = IntegratorConfig {
            trajectory: Some(TrajectoryConfig {
                stride: 1,
                vars: vec![4],
            }),
            ..euler_cfg(0.12)
        };
        assert!(matches!(
            solve(&inst, &params, &cfg, 0),
            Err(IntegrateError::Config(_))
        ));
    }

    #[test]
    fn solved_runs_show_sign_crossings() {
        // Instantonic dynamics: voltages flip sign on the way to the
        // solution for essentially every random start.
        let (inst, _) = generate_planted(50, 7.0, 13, &GeneratorConfig::default()).unwrap();
        let params = DmmParams::default();
        let cfg = IntegratorConfig {
            trajectory: Some(TrajectoryConfig {
                stride: 1,
                vars: vec![],
            }),
            ..euler_cfg(0.12)
        };
        let mut solved = 0;
        let mut with_crossing = 0;
        for seed in 0..20 {
            let (out, traj) = solve(&inst, &params, &cfg, seed).unwrap();
            if out.solved && out.tts_steps > 0 {
                solved += 1;
                if traj.unwrap().sign_crossings() >= 1 {
                    with_crossing += 1;
                }
            }
        }
        assert!(solved >= 10, "expected most runs to solve, got {solved}");
        assert!(
            with_crossing as f64 >= 0.9 * solved as f64,
            "{with_crossing}/{solved} runs with sign crossings"
        );
    }
}
