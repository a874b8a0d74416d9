//! (g, d) parameter sweeps with trial averaging and phase labelling.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::commsim::{run_sim, SimConfig};
use crate::error::{Error, Result};
use crate::measures::{series_measures, MeasureSet};
use crate::netgen::NetworkSpec;
use crate::rng::derive_seed;

/// Mesh definition: a regular lattice over `[0, 1]²` plus explicit points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshSpec {
    /// Lattice spacing; `None` disables the lattice.
    pub grid_step: Option<f64>,
    pub extra_points: Vec<(f64, f64)>,
}

impl MeshSpec {
    /// 11 × 11 lattice plus 19 points near the diagonal (140 in total).
    pub fn standard() -> Self {
        let mut extra = Vec::with_capacity(19);
        for k in (1..=19).step_by(2) {
            let v = k as f64 / 20.0;
            extra.push((v, v));
        }
        for k in 1..=9 {
            extra.push(((2 * k + 1) as f64 / 20.0, (2 * k - 1) as f64 / 20.0));
        }
        Self {
            grid_step: Some(0.1),
            extra_points: extra,
        }
    }

    pub fn grid(step: f64) -> Self {
        Self {
            grid_step: Some(step),
            extra_points: Vec::new(),
        }
    }

    pub fn points(points: Vec<(f64, f64)>) -> Self {
        Self {
            grid_step: None,
            extra_points: points,
        }
    }
}

/// Expands a mesh into a sorted, duplicate-free list of `(g, d)` points.
///
/// Lattice coordinates are computed as `i / m` with `m = round(1 / step)`
/// so they equal the decimal literals (`0.3`, not `3 × 0.1`).
pub fn build_mesh(spec: &MeshSpec) -> Result<Vec<(f64, f64)>> {
    let mut points = Vec::new();
    if let Some(step) = spec.grid_step {
        if !(step > 0.0 && step <= 1.0) {
            return Err(Error::InvalidParam(format!("grid step {step} must lie in (0, 1]")));
        }
        let m = (1.0 / step).round() as usize;
        if ((m as f64) * step - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParam(format!(
                "grid step {step} does not divide [0, 1] evenly"
            )));
        }
        for i in 0..=m {
            for j in 0..=m {
                points.push((i as f64 / m as f64, j as f64 / m as f64));
            }
        }
    }
    for &(g, d) in &spec.extra_points {
        if !((0.0..=1.0).contains(&g) && (0.0..=1.0).contains(&d)) {
            return Err(Error::InvalidParam(format!("mesh point ({g}, {d}) outside [0, 1]²")));
        }
        points.push((g, d));
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    points.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
    Ok(points)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    Nihilism,
    Atomism,
    Mixism,
    Mobism,
}

impl Phase {
    pub const ALL: [Phase; 4] = [Phase::Nihilism, Phase::Atomism, Phase::Mixism, Phase::Mobism];

    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Nihilism => "Nihilism",
            Phase::Atomism => "Atomism",
            Phase::Mixism => "Mixism",
            Phase::Mobism => "Mobism",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Phase::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParam(format!("unknown phase {s:?}")))
    }
}

/// Sweep settings shared by every mesh point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub network: NetworkSpec,
    pub trials: usize,
    pub u: f64,
    pub t_max: usize,
    pub n_0: usize,
    pub base_seed: u64,
    pub nihilism_threshold: f64,
    /// Reuse one network for every trial instead of regenerating it.
    pub fixed_network: bool,
}

impl SweepConfig {
    pub fn new(network: NetworkSpec) -> Self {
        Self {
            network,
            trials: 100,
            u: 1.0,
            t_max: 100,
            n_0: 10,
            base_seed: 0,
            nihilism_threshold: 0.05,
            fixed_network: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.network.validate()?;
        if self.trials == 0 {
            return Err(Error::InvalidParam("trials must be at least 1".into()));
        }
        if self.t_max == 0 {
            return Err(Error::InvalidParam("t_max must be positive for a sweep".into()));
        }
        if !(self.nihilism_threshold > 0.0 && self.nihilism_threshold < 1.0) {
            return Err(Error::InvalidParam(format!(
                "nihilism threshold {} must lie in (0, 1)",
                self.nihilism_threshold
            )));
        }
        if self.n_0 > self.network.vertex_count() {
            return Err(Error::InvalidParam(format!(
                "n_0={} exceeds vertex count {}",
                self.n_0,
                self.network.vertex_count()
            )));
        }
        Ok(())
    }
}

/// Identifies a mesh point by its coordinates in millionths, so a point's
/// seeds do not depend on which other points share the mesh.
fn point_key(g: f64, d: f64) -> u64 {
    let gi = (g * 1e6).round() as u64;
    let di = (d * 1e6).round() as u64;
    (gi << 32) | di
}

/// Seeds `(network, simulation)` for one trial at one mesh point:
/// `t = derive_seed([base_seed, key(g, d), trial])`, network seed `t`,
/// simulation seed `mix64(t ^ 1)`. With a fixed network the network seed is
/// `derive_seed([base_seed])` for every point and trial.
pub fn trial_seeds(cfg: &SweepConfig, g: f64, d: f64, trial: usize) -> (u64, u64) {
    let t = derive_seed(&[cfg.base_seed, point_key(g, d), trial as u64]);
    let network = if cfg.fixed_network {
        derive_seed(&[cfg.base_seed])
    } else {
        t
    };
    (network, crate::rng::mix64(t ^ 1))
}

/// Runs one trial: generate the network, simulate, measure.
pub fn run_trial(cfg: &SweepConfig, g: f64, d: f64, trial: usize) -> Result<MeasureSet> {
    let (net_seed, sim_seed) = trial_seeds(cfg, g, d, trial);
    let graph = cfg.network.generate(net_seed)?;
    let sim = SimConfig {
        g,
        d,
        u: cfg.u,
        t_max: cfg.t_max,
        n_0: cfg.n_0,
        seed: sim_seed,
    };
    let trace = run_sim(&sim, &graph)?;
    series_measures(trace.vectors(), graph.vertex_count(), cfg.u)
}

/// Trial-averaged measures at one mesh point, summed in trial order.
pub fn point_measures(cfg: &SweepConfig, g: f64, d: f64) -> Result<MeasureSet> {
    let sets = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, g, d, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(MeasureSet::average(&sets).expect("trials >= 1"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub g: f64,
    pub d: f64,
    pub measures: MeasureSet,
    pub norm_atom: f64,
    pub norm_mix: f64,
    pub norm_mob: f64,
    pub phase: Phase,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub points: Vec<GridPoint>,
    /// Lattice spacing the mesh was built with, if any; used for rendering.
    pub grid_step: Option<f64>,
}

impl PhaseGrid {
    /// Wraps raw measures; normalization and labels are filled in by
    /// [`PhaseGrid::normalize`] and [`classify_phases`].
    pub fn from_measures(points: impl IntoIterator<Item = ((f64, f64), MeasureSet)>, grid_step: Option<f64>) -> Self {
        let points = points
            .into_iter()
            .map(|((g, d), measures)| GridPoint {
                g,
                d,
                measures,
                norm_atom: 0.0,
                norm_mix: 0.0,
                norm_mob: 0.0,
                phase: Phase::Nihilism,
            })
            .collect();
        Self { points, grid_step }
    }

    /// Divides each composite by its maximum over the grid (0 if that
    /// maximum is not positive).
    pub fn normalize(&mut self) {
        let max = |f: fn(&MeasureSet) -> f64| self.points.iter().map(|p| f(&p.measures)).fold(0.0, f64::max);
        let (ma, mx, mm) = (max(|m| m.m_atom), max(|m| m.m_mix), max(|m| m.m_mob));
        let scale = |v: f64, m: f64| if m > 0.0 { (v / m).clamp(0.0, 1.0) } else { 0.0 };
        for p in &mut self.points {
            p.norm_atom = scale(p.measures.m_atom, ma);
            p.norm_mix = scale(p.measures.m_mix, mx);
            p.norm_mob = scale(p.measures.m_mob, mm);
        }
    }

    pub fn get(&self, g: f64, d: f64) -> Option<&GridPoint> {
        self.points
            .iter()
            .find(|p| (p.g - g).abs() < 1e-9 && (p.d - d).abs() < 1e-9)
    }

    /// Grid point maximizing `f`; the first in mesh order wins ties.
    pub fn argmax(&self, f: impl Fn(&GridPoint) -> f64) -> Option<&GridPoint> {
        self.points.iter().fold(None, |best: Option<&GridPoint>, p| match best {
            Some(b) if f(b) >= f(p) => Some(b),
            _ => Some(p),
        })
    }
}

/// Labels one point from its normalized composites.
///
/// Nihilism when all three fall below `threshold`; otherwise the largest,
/// with ties resolved Mixism, then Atomism, then Mobism.
pub fn classify(norm_atom: f64, norm_mix: f64, norm_mob: f64, threshold: f64) -> Phase {
    if norm_atom < threshold && norm_mix < threshold && norm_mob < threshold {
        return Phase::Nihilism;
    }
    let ranked = [
        (Phase::Mixism, norm_mix),
        (Phase::Atomism, norm_atom),
        (Phase::Mobism, norm_mob),
    ];
    ranked
        .into_iter()
        .fold((Phase::Nihilism, f64::NEG_INFINITY), |best, cand| {
            if cand.1 > best.1 {
                cand
            } else {
                best
            }
        })
        .0
}

pub fn classify_phases(grid: &mut PhaseGrid, threshold: f64) {
    for p in &mut grid.points {
        p.phase = classify(p.norm_atom, p.norm_mix, p.norm_mob, threshold);
    }
}

/// Runs every (point, trial) task, averages per point in trial order, then
/// normalizes and labels. Parallel and serial execution agree bit for bit.
pub fn run_sweep(cfg: &SweepConfig, mesh: &[(f64, f64)], grid_step: Option<f64>) -> Result<PhaseGrid> {
    cfg.validate()?;
    let measures = mesh
        .par_iter()
        .map(|&(g, d)| point_measures(cfg, g, d).map(|m| ((g, d), m)))
        .collect::<Result<Vec<_>>>()?;
    let mut grid = PhaseGrid::from_measures(measures, grid_step);
    grid.normalize();
    classify_phases(&mut grid, cfg.nihilism_threshold);
    Ok(grid)
}
