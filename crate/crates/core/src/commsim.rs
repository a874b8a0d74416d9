//! Stochastic generation and disappearance of communication on a graph.
//!
//! Each run owns one [`Stream`] seeded from [`SimConfig::seed`]. Draws are
//! consumed in a fixed order, which is part of the reproducibility contract:
//!
//! 1. initial seeding: `choose(n_0)` over vertices `0..n`;
//! 2. per step, in step order:
//!    * senders: `choose(n_s)` over the informed vertices in ascending index order,
//!    * receivers: `choose(n_r)` over `0..n`,
//!    * erasure: `choose(n_d)` over the post-send informed vertices in ascending order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::Stream;

/// Run parameters for one simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Generation rate.
    pub g: f64,
    /// Disappearance rate.
    pub d: f64,
    /// Information unit.
    pub u: f64,
    pub t_max: usize,
    /// Number of initially informed vertices.
    pub n_0: usize,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            g: 0.4,
            d: 0.3,
            u: 1.0,
            t_max: 100,
            n_0: 10,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("g", self.g), ("d", self.d)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParam(format!("rate {name}={v} outside [0, 1]")));
            }
        }
        if !(self.u > 0.0 && self.u.is_finite()) {
            return Err(Error::InvalidParam(format!(
                "information unit u={} must be positive",
                self.u
            )));
        }
        Ok(())
    }
}

/// Rounds a non-negative count half away from zero.
///
/// Products such as `0.7 * 5` land a hair below the half-integer in binary
/// floating point; a 1e-9 guard band makes them round as the exact decimal
/// product would.
pub fn round_count(x: f64) -> usize {
    debug_assert!(x >= 0.0);
    (x + 0.5 + 1e-9).floor() as usize
}

/// The information vector `Q(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoState {
    q: Vec<f64>,
}

impl InfoState {
    pub fn zeros(n: usize) -> Self {
        Self { q: vec![0.0; n] }
    }

    /// Wraps a raw vector; entries must be non-negative.
    pub fn from_vec(q: Vec<f64>) -> Result<Self> {
        if let Some(bad) = q.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::InvalidParam(format!(
                "information entries must be finite and >= 0, got {bad}"
            )));
        }
        Ok(Self { q })
    }

    pub fn values(&self) -> &[f64] {
        &self.q
    }

    pub fn into_values(self) -> Vec<f64> {
        self.q
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// Indices of the informed vertices (non-zero entries), ascending.
    pub fn informed(&self) -> Vec<usize> {
        self.q
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn informed_count(&self) -> usize {
        self.q.iter().filter(|v| **v != 0.0).count()
    }

    pub fn total(&self) -> f64 {
        self.q.iter().sum()
    }
}

/// Counts recorded for one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub n_informed_before: usize,
    pub n_senders: usize,
    pub n_receivers: usize,
    pub n_erased: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace {
    pub states: Vec<InfoState>,
    pub reports: Vec<StepReport>,
}

impl SimTrace {
    pub fn vectors(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.states.iter().map(InfoState::values)
    }
}

/// Gives `u` to `n_0` vertices chosen uniformly without replacement.
pub fn init_state(cfg: &SimConfig, n: usize, rng: &mut Stream) -> Result<InfoState> {
    if cfg.n_0 > n {
        return Err(Error::InvalidParam(format!("n_0={} exceeds vertex count {n}", cfg.n_0)));
    }
    let mut vertices: Vec<usize> = (0..n).collect();
    let mut state = InfoState::zeros(n);
    for &v in rng.choose(&mut vertices, cfg.n_0).iter() {
        state.q[v] = cfg.u;
    }
    Ok(state)
}

/// Advances the state by one send/erase step.
///
/// Every (sender, receiver) pair joined by an edge delivers `u`, so a
/// receiver adjacent to several senders gains once per sender. Senders keep
/// what they had. Erasure zeroes the chosen vertices.
pub fn sim_step(
    state: &InfoState,
    graph: &Graph,
    cfg: &SimConfig,
    rng: &mut Stream,
) -> Result<(InfoState, StepReport)> {
    let n = graph.vertex_count();
    if state.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: state.len(),
        });
    }
    let mut next = state.clone();

    let mut informed = state.informed();
    let n_informed_before = informed.len();
    let n_senders = round_count(cfg.g * n_informed_before as f64);
    let mut is_sender = vec![false; n];
    for &s in rng.choose(&mut informed, n_senders).iter() {
        is_sender[s] = true;
    }

    let n_receivers = round_count(cfg.g * n as f64);
    let mut vertices: Vec<usize> = (0..n).collect();
    for &r in rng.choose(&mut vertices, n_receivers).iter() {
        let hits = graph.neighbors(r).iter().filter(|&&s| is_sender[s]).count();
        next.q[r] += cfg.u * hits as f64;
    }

    let mut support = next.informed();
    let n_erased = round_count(cfg.d * support.len() as f64);
    for &v in rng.choose(&mut support, n_erased).iter() {
        next.q[v] = 0.0;
    }

    Ok((
        next,
        StepReport {
            n_informed_before,
            n_senders,
            n_receivers,
            n_erased,
        },
    ))
}

/// Seeds the initial state and runs `t_max` steps (`t_max = 0` yields `Q(0)` alone).
pub fn run_sim(cfg: &SimConfig, graph: &Graph) -> Result<SimTrace> {
    cfg.validate()?;
    let mut rng = Stream::new(cfg.seed);
    let mut state = init_state(cfg, graph.vertex_count(), &mut rng)?;
    let mut states = Vec::with_capacity(cfg.t_max + 1);
    let mut reports = Vec::with_capacity(cfg.t_max);
    for _ in 0..cfg.t_max {
        let (next, report) = sim_step(&state, graph, cfg, &mut rng)?;
        states.push(state);
        reports.push(report);
        state = next;
    }
    states.push(state);
    Ok(SimTrace { states, reports })
}
