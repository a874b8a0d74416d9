//! Pattern-change measures between consecutive information vectors, their
//! series statistics, the composite phase measures and polar trajectories.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Change measures for one transition `Q(t) -> Q(t+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaMeasures {
    /// `|ΣQ(t+1) − ΣQ(t)| / (n·u)`
    pub info_change: f64,
    /// `‖Q(t+1) − Q(t)‖ / (√n·u)`
    pub euclid: f64,
    /// `‖Q(t+1) − Q(t)‖ / ‖Q(t+1)‖`, 0 when `Q(t+1)` is the zero vector.
    pub rel_change: f64,
    /// Cosine similarity, 0 when either vector is zero.
    pub cos_sim: f64,
}

/// Sufficient sums for one transition; shared by the dense and sparse paths.
#[derive(Debug, Default, Clone, Copy)]
struct PairSums {
    sum_prev: f64,
    sum_next: f64,
    sq_prev: f64,
    sq_next: f64,
    dot: f64,
    sq_diff: f64,
}

impl PairSums {
    #[inline]
    fn add(&mut self, prev: f64, next: f64) {
        self.sum_prev += prev;
        self.sum_next += next;
        self.sq_prev += prev * prev;
        self.sq_next += next * next;
        self.dot += prev * next;
        let diff = next - prev;
        self.sq_diff += diff * diff;
    }

    fn finish(self, n: usize, u: f64) -> DeltaMeasures {
        let n = n as f64;
        let diff_norm = self.sq_diff.sqrt();
        let norm_prev = self.sq_prev.sqrt();
        let norm_next = self.sq_next.sqrt();
        let rel_change = if norm_next == 0.0 { 0.0 } else { diff_norm / norm_next };
        let cos_sim = if norm_prev == 0.0 || norm_next == 0.0 {
            0.0
        } else {
            // Rounding can push a parallel pair a few ulps past 1.
            (self.dot / (self.sq_next * self.sq_prev).sqrt()).min(1.0)
        };
        DeltaMeasures {
            info_change: (self.sum_next - self.sum_prev).abs() / (n * u),
            euclid: diff_norm / (n.sqrt() * u),
            rel_change,
            cos_sim,
        }
    }
}

fn check_unit(u: f64) -> Result<()> {
    if u > 0.0 && u.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParam(format!("information unit u={u} must be positive")))
    }
}

/// Change measures between two dense vectors of dimension `n`.
pub fn delta_measures(q_prev: &[f64], q_next: &[f64], n: usize, u: f64) -> Result<DeltaMeasures> {
    check_unit(u)?;
    for v in [q_prev, q_next] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
    }
    let mut sums = PairSums::default();
    for (&p, &x) in q_prev.iter().zip(q_next) {
        sums.add(p, x);
    }
    Ok(sums.finish(n, u))
}

/// Sparse vector: `(index, value)` pairs with strictly increasing indices.
pub type SparseVec = [(usize, f64)];

/// Change measures between two sparse vectors in an `n`-dimensional space.
/// Only the union of the supports is visited.
pub fn delta_measures_sparse(q_prev: &SparseVec, q_next: &SparseVec, n: usize, u: f64) -> Result<DeltaMeasures> {
    check_unit(u)?;
    for v in [q_prev, q_next] {
        if let Some(&(i, _)) = v.iter().find(|(i, _)| *i >= n) {
            return Err(Error::VertexOutOfRange {
                index: i,
                vertex_count: n,
            });
        }
    }
    let mut sums = PairSums::default();
    let (mut a, mut b) = (0, 0);
    while a < q_prev.len() || b < q_next.len() {
        let ia = q_prev.get(a).map_or(usize::MAX, |e| e.0);
        let ib = q_next.get(b).map_or(usize::MAX, |e| e.0);
        if ia == ib {
            sums.add(q_prev[a].1, q_next[b].1);
            a += 1;
            b += 1;
        } else if ia < ib {
            sums.add(q_prev[a].1, 0.0);
            a += 1;
        } else {
            sums.add(0.0, q_next[b].1);
            b += 1;
        }
    }
    Ok(sums.finish(n, u))
}

/// Streaming mean and unbiased variance (Welford's recurrence).
#[derive(Debug, Default, Clone, Copy)]
pub struct RunningStat {
    count: usize,
    mean: f64,
    m2: f64,
}

impl RunningStat {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Divisor `count − 1`; 0 for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }
}

/// Series statistics plus the three composite phase measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureSet {
    #[serde(rename = "mu_I")]
    pub mu_info: f64,
    #[serde(rename = "var_I")]
    pub var_info: f64,
    #[serde(rename = "mu_L")]
    pub mu_euclid: f64,
    #[serde(rename = "var_L")]
    pub var_euclid: f64,
    #[serde(rename = "mu_LR")]
    pub mu_rel: f64,
    #[serde(rename = "var_LR")]
    pub var_rel: f64,
    #[serde(rename = "mu_S")]
    pub mu_sim: f64,
    #[serde(rename = "var_S")]
    pub var_sim: f64,
    /// Atomism: variance of the relative change.
    pub m_atom: f64,
    /// Mixism: mean similarity times its variance.
    pub m_mix: f64,
    /// Mobism: mean Euclidean change.
    pub m_mob: f64,
    pub delta_count: usize,
}

impl MeasureSet {
    /// Builds a set from the eight series statistics, deriving the composites.
    pub fn from_stats(stats: [f64; 8], delta_count: usize) -> Self {
        let [mu_info, var_info, mu_euclid, var_euclid, mu_rel, var_rel, mu_sim, var_sim] = stats;
        Self {
            mu_info,
            var_info,
            mu_euclid,
            var_euclid,
            mu_rel,
            var_rel,
            mu_sim,
            var_sim,
            m_atom: var_rel,
            m_mix: mu_sim * var_sim,
            m_mob: mu_euclid,
            delta_count,
        }
    }

    /// Field names in CSV column order.
    pub const COLUMNS: [&'static str; 11] = [
        "mu_I", "var_I", "mu_L", "var_L", "mu_LR", "var_LR", "mu_S", "var_S", "m_atom", "m_mix", "m_mob",
    ];

    /// Values in [`Self::COLUMNS`] order.
    pub fn values(&self) -> [f64; 11] {
        [
            self.mu_info,
            self.var_info,
            self.mu_euclid,
            self.var_euclid,
            self.mu_rel,
            self.var_rel,
            self.mu_sim,
            self.var_sim,
            self.m_atom,
            self.m_mix,
            self.m_mob,
        ]
    }

    /// Component-wise mean of several sets, summed in the given order.
    /// Composites are averaged like every other field, not recomputed.
    pub fn average(sets: &[MeasureSet]) -> Option<MeasureSet> {
        let first = sets.first()?;
        let mut acc = [0.0; 11];
        for s in sets {
            for (a, v) in acc.iter_mut().zip(s.values()) {
                *a += v;
            }
        }
        let k = sets.len() as f64;
        let [mu_info, var_info, mu_euclid, var_euclid, mu_rel, var_rel, mu_sim, var_sim, m_atom, m_mix, m_mob] =
            acc.map(|a| a / k);
        Some(MeasureSet {
            mu_info,
            var_info,
            mu_euclid,
            var_euclid,
            mu_rel,
            var_rel,
            mu_sim,
            var_sim,
            m_atom,
            m_mix,
            m_mob,
            delta_count: first.delta_count,
        })
    }
}

/// Accumulates per-transition measures in a single pass.
#[derive(Debug, Default, Clone, Copy)]
pub struct SeriesAccumulator {
    info: RunningStat,
    euclid: RunningStat,
    rel: RunningStat,
    sim: RunningStat,
}

impl SeriesAccumulator {
    pub fn push(&mut self, m: &DeltaMeasures) {
        self.info.push(m.info_change);
        self.euclid.push(m.euclid);
        self.rel.push(m.rel_change);
        self.sim.push(m.cos_sim);
    }

    pub fn count(&self) -> usize {
        self.info.count()
    }

    pub fn finish(&self) -> Result<MeasureSet> {
        if self.count() == 0 {
            return Err(Error::TraceTooShort(self.count()));
        }
        Ok(MeasureSet::from_stats(
            [
                self.info.mean(),
                self.info.variance(),
                self.euclid.mean(),
                self.euclid.variance(),
                self.rel.mean(),
                self.rel.variance(),
                self.sim.mean(),
                self.sim.variance(),
            ],
            self.count(),
        ))
    }
}

/// Measures over every consecutive pair of a dense trace.
pub fn series_measures<'a, I>(trace: I, n: usize, u: f64) -> Result<MeasureSet>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut acc = SeriesAccumulator::default();
    let mut iter = trace.into_iter();
    let Some(mut prev) = iter.next() else {
        return Err(Error::TraceTooShort(0));
    };
    for next in iter {
        acc.push(&delta_measures(prev, next, n, u)?);
        prev = next;
    }
    if acc.count() == 0 {
        return Err(Error::TraceTooShort(1));
    }
    acc.finish()
}

/// Measures over a sparse trace; holds only two snapshots at a time.
pub fn series_measures_sparse<I, V>(trace: I, n: usize, u: f64) -> Result<MeasureSet>
where
    I: IntoIterator<Item = V>,
    V: AsRef<SparseVec>,
{
    let mut acc = SeriesAccumulator::default();
    let mut iter = trace.into_iter();
    let Some(mut prev) = iter.next() else {
        return Err(Error::TraceTooShort(0));
    };
    for next in iter {
        acc.push(&delta_measures_sparse(prev.as_ref(), next.as_ref(), n, u)?);
        prev = next;
    }
    if acc.count() == 0 {
        return Err(Error::TraceTooShort(1));
    }
    acc.finish()
}

/// Polar coordinates of an information vector: magnitude and the angle to
/// the all-ones direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: f64,
}

impl PolarPoint {
    pub fn of(q: &[f64]) -> Self {
        let sq: f64 = q.iter().map(|v| v * v).sum();
        let r = sq.sqrt();
        if r == 0.0 || q.is_empty() {
            return Self { r: 0.0, theta: 0.0 };
        }
        // atan2 of the components across and along the all-ones direction;
        // acos of the cosine loses half the digits near θ = 0.
        let n = q.len() as f64;
        let sum: f64 = q.iter().sum();
        let mean = sum / n;
        let across = q.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>().sqrt();
        Self {
            r,
            theta: across.atan2(sum / n.sqrt()),
        }
    }

    pub fn to_cartesian(self) -> (f64, f64) {
        (self.r * self.theta.cos(), self.r * self.theta.sin())
    }
}

/// Polar point for every snapshot, in time order.
pub fn trajectory<'a, I>(trace: I) -> Vec<PolarPoint>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    trace.into_iter().map(PolarPoint::of).collect()
}
