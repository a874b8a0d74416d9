//! Text formats for traces, sweep grids and trajectories.
//!
//! Floats are written with Rust's shortest round-trip formatting, so every
//! file reads back to the identical `f64` values.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::commsim::SimTrace;
use crate::error::{Error, Result};
use crate::measures::{series_measures, series_measures_sparse, MeasureSet, PolarPoint};
use crate::sweep::{GridPoint, Phase, PhaseGrid};

/// One snapshot: `{ "t": k, "nz": [[i, q_i], ...] }`, indices ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseRow {
    pub t: usize,
    pub nz: Vec<(usize, f64)>,
}

/// Sparse trace document: `{ "n": .., "u": .., "rows": [SparseRow, ...] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseTrace {
    pub n: usize,
    pub u: f64,
    pub rows: Vec<SparseRow>,
}

impl SparseTrace {
    pub fn from_sim(trace: &SimTrace, u: f64) -> Self {
        let n = trace.states.first().map_or(0, |s| s.len());
        let rows = trace
            .vectors()
            .enumerate()
            .map(|(t, q)| SparseRow {
                t,
                nz: q.iter().copied().enumerate().filter(|(_, v)| *v != 0.0).collect(),
            })
            .collect();
        Self { n, u, rows }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sparse trace serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let trace: SparseTrace = serde_json::from_str(text)?;
        trace.validate()?;
        Ok(trace)
    }

    pub fn validate(&self) -> Result<()> {
        for (k, row) in self.rows.iter().enumerate() {
            let increasing = row.nz.windows(2).all(|w| w[0].0 < w[1].0);
            let in_range = row.nz.last().is_none_or(|e| e.0 < self.n);
            let valid = row.nz.iter().all(|e| e.1 >= 0.0 && e.1.is_finite());
            if !(increasing && in_range && valid) {
                return Err(Error::Parse {
                    line: k + 1,
                    message: format!(
                        "row t={} needs ascending in-range indices and finite non-negative values",
                        row.t
                    ),
                });
            }
        }
        Ok(())
    }

    pub fn to_dense(&self) -> DenseTrace {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut q = vec![0.0; self.n];
                for &(i, v) in &row.nz {
                    q[i] = v;
                }
                q
            })
            .collect();
        DenseTrace { n: self.n, rows }
    }
}

/// Dense trace, one row per time step.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTrace {
    pub n: usize,
    pub rows: Vec<Vec<f64>>,
}

impl DenseTrace {
    pub fn from_sim(trace: &SimTrace) -> Self {
        let rows: Vec<Vec<f64>> = trace.vectors().map(<[f64]>::to_vec).collect();
        Self {
            n: rows.first().map_or(0, Vec::len),
            rows,
        }
    }

    /// CSV with header `t,q_0,...,q_{n-1}`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for i in 0..self.n {
            let _ = write!(out, ",q_{i}");
        }
        out.push('\n');
        for (t, row) in self.rows.iter().enumerate() {
            let _ = write!(out, "{t}");
            for v in row {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::EmptyInput("empty trace CSV".into()))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols.first() != Some(&"t") || cols.iter().skip(1).enumerate().any(|(i, c)| *c != format!("q_{i}")) {
            return Err(Error::Parse {
                line: 1,
                message: "expected header t,q_0,...,q_{n-1}".into(),
            });
        }
        let n = cols.len() - 1;
        let mut rows = Vec::new();
        for (idx, line) in lines {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != n + 1 {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected {} fields, found {}", n + 1, fields.len()),
                });
            }
            let row = fields[1..]
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    line: idx + 1,
                    message: e.to_string(),
                })?;
            if row.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: "entries must be finite and non-negative".into(),
                });
            }
            rows.push(row);
        }
        Ok(Self { n, rows })
    }
}

/// A trace read from disk in either supported form.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedTrace {
    Dense(DenseTrace),
    Sparse(SparseTrace),
}

impl LoadedTrace {
    /// JSON documents are sparse traces; anything else is read as dense CSV.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            SparseTrace::from_json(text).map(LoadedTrace::Sparse)
        } else {
            DenseTrace::from_csv(text).map(LoadedTrace::Dense)
        }
    }

    pub fn len(&self) -> usize {
        match self {
            LoadedTrace::Dense(d) => d.rows.len(),
            LoadedTrace::Sparse(s) => s.rows.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dimension(&self) -> usize {
        match self {
            LoadedTrace::Dense(d) => d.n,
            LoadedTrace::Sparse(s) => s.n,
        }
    }

    pub fn measures(&self, u: f64) -> Result<MeasureSet> {
        match self {
            LoadedTrace::Dense(d) => series_measures(d.rows.iter().map(Vec::as_slice), d.n, u),
            LoadedTrace::Sparse(s) => series_measures_sparse(s.rows.iter().map(|r| &r.nz[..]), s.n, u),
        }
    }

    pub fn trajectory(&self) -> Vec<PolarPoint> {
        match self {
            LoadedTrace::Dense(d) => d.rows.iter().map(|r| PolarPoint::of(r)).collect(),
            LoadedTrace::Sparse(s) => s.rows.iter().map(|r| sparse_polar(&r.nz, s.n)).collect(),
        }
    }
}

fn sparse_polar(nz: &[(usize, f64)], n: usize) -> PolarPoint {
    let sq: f64 = nz.iter().map(|e| e.1 * e.1).sum();
    let r = sq.sqrt();
    if r == 0.0 || n == 0 {
        return PolarPoint { r: 0.0, theta: 0.0 };
    }
    let sum: f64 = nz.iter().map(|e| e.1).sum();
    let mean = sum / n as f64;
    // Walk every index in order so the result matches the dense path bit for bit.
    let mut entries = nz.iter().peekable();
    let mut across = 0.0;
    for i in 0..n {
        let v = match entries.peek() {
            Some(&&(j, v)) if j == i => {
                entries.next();
                v
            }
            _ => 0.0,
        };
        across += (v - mean) * (v - mean);
    }
    PolarPoint {
        r,
        theta: across.sqrt().atan2(sum / (n as f64).sqrt()),
    }
}

/// Polar CSV: `t,r,theta,x,y`.
pub fn polar_csv(points: &[PolarPoint]) -> String {
    let mut out = String::from("t,r,theta,x,y\n");
    for (t, p) in points.iter().enumerate() {
        let (x, y) = p.to_cartesian();
        let _ = writeln!(out, "{t},{},{},{x},{y}", p.r, p.theta);
    }
    out
}

pub fn parse_polar_csv(text: &str) -> Result<Vec<PolarPoint>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate().skip(1).filter(|(_, l)| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split(',').collect();
        let num = |i: usize| -> Result<f64> {
            fields
                .get(i)
                .ok_or_else(|| Error::Parse {
                    line: idx + 1,
                    message: "missing column".into(),
                })?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse {
                    line: idx + 1,
                    message: e.to_string(),
                })
        };
        out.push(PolarPoint {
            r: num(1)?,
            theta: num(2)?,
        });
    }
    Ok(out)
}

pub const GRID_HEADER: &str =
    "g,d,mu_I,var_I,mu_L,var_L,mu_LR,var_LR,mu_S,var_S,m_atom,m_mix,m_mob,norm_atom,norm_mix,norm_mob,phase";

/// Sweep grid as CSV; one row per mesh point in mesh order.
pub fn grid_csv(grid: &PhaseGrid) -> String {
    let mut out = String::from(GRID_HEADER);
    out.push('\n');
    for p in &grid.points {
        let _ = write!(out, "{},{}", p.g, p.d);
        for v in p.measures.values() {
            let _ = write!(out, ",{v}");
        }
        let _ = writeln!(out, ",{},{},{},{}", p.norm_atom, p.norm_mix, p.norm_mob, p.phase);
    }
    out
}

/// Reads [`grid_csv`] output. `delta_count` is not part of the CSV and is
/// restored from `delta_count`.
pub fn parse_grid_csv(text: &str, delta_count: usize, grid_step: Option<f64>) -> Result<PhaseGrid> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == GRID_HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: "unexpected grid CSV header".into(),
            })
        }
    }
    let mut points = Vec::new();
    for (idx, line) in lines.filter(|(_, l)| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 17 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected 17 fields, found {}", fields.len()),
            });
        }
        let nums = fields[..16]
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse {
                line: idx + 1,
                message: e.to_string(),
            })?;
        let phase: Phase = fields[16].parse().map_err(|_| Error::Parse {
            line: idx + 1,
            message: format!("unknown phase {:?}", fields[16]),
        })?;
        let stats = [nums[2], nums[3], nums[4], nums[5], nums[6], nums[7], nums[8], nums[9]];
        let mut measures = MeasureSet::from_stats(stats, delta_count);
        measures.m_atom = nums[10];
        measures.m_mix = nums[11];
        measures.m_mob = nums[12];
        points.push(GridPoint {
            g: nums[0],
            d: nums[1],
            measures,
            norm_atom: nums[13],
            norm_mix: nums[14],
            norm_mob: nums[15],
            phase,
        });
    }
    Ok(PhaseGrid { points, grid_step })
}

/// Single-row CSV for a measure set (header plus values).
pub fn measure_csv(m: &MeasureSet) -> String {
    let mut out = MeasureSet::COLUMNS.join(",");
    out.push_str(",delta_count\n");
    for v in m.values() {
        let _ = write!(out, "{v},");
    }
    let _ = writeln!(out, "{}", m.delta_count);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_csv_round_trip() {
        let d = DenseTrace {
            n: 3,
            rows: vec![vec![1.0, 0.0, 2.5], vec![0.1, 0.2, 0.30000000000000004]],
        };
        let text = d.to_csv();
        assert!(text.starts_with("t,q_0,q_1,q_2\n0,1,0,2.5\n"));
        assert_eq!(DenseTrace::from_csv(&text).unwrap(), d);
    }

    #[test]
    fn dense_csv_rejects_bad_header() {
        assert!(DenseTrace::from_csv("x,q_0\n0,1\n").is_err());
        assert!(DenseTrace::from_csv("t,q_0\n0,1,2\n").is_err());
    }

    #[test]
    fn sparse_json_shape() {
        let s = SparseTrace {
            n: 4,
            u: 1.0,
            rows: vec![SparseRow {
                t: 0,
                nz: vec![(1, 2.0), (3, 1.0)],
            }],
        };
        let text = s.to_json();
        assert!(text.contains(r#"{"t":0,"nz":[[1,2.0],[3,1.0]]}"#), "{text}");
        assert_eq!(SparseTrace::from_json(&text).unwrap(), s);
        assert!(SparseTrace::from_json(r#"{"n":2,"u":1.0,"rows":[{"t":0,"nz":[[2,1.0]]}]}"#).is_err());
    }

    #[test]
    fn both_loaders_give_same_measures() {
        let s = SparseTrace {
            n: 4,
            u: 1.0,
            rows: vec![
                SparseRow {
                    t: 0,
                    nz: vec![(0, 1.0), (2, 2.0)],
                },
                SparseRow {
                    t: 1,
                    nz: vec![(0, 1.0), (1, 1.0), (2, 2.0)],
                },
                SparseRow { t: 2, nz: vec![] },
            ],
        };
        let sparse = LoadedTrace::parse(&s.to_json()).unwrap();
        let dense = LoadedTrace::parse(&s.to_dense().to_csv()).unwrap();
        assert_eq!(sparse.measures(1.0).unwrap(), dense.measures(1.0).unwrap());
        assert_eq!(sparse.trajectory(), dense.trajectory());
    }

    #[test]
    fn polar_csv_round_trip() {
        let pts = vec![PolarPoint { r: 2.0, theta: 0.5 }, PolarPoint { r: 0.0, theta: 0.0 }];
        assert_eq!(parse_polar_csv(&polar_csv(&pts)).unwrap(), pts);
    }
}
