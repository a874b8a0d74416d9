//! Seeded Watts–Strogatz and Barabási–Albert generators.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::Stream;

/// Small-world ring lattice with random rewiring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WsParams {
    pub n: usize,
    /// Even initial degree of every lattice vertex.
    pub k: usize,
    /// Rewiring probability.
    pub p: f64,
}

impl WsParams {
    pub fn validate(&self) -> Result<()> {
        if !self.k.is_multiple_of(2) || self.k == 0 || self.k >= self.n {
            return Err(Error::InvalidParam(format!(
                "WS degree k must be even with 0 < k < n (k={}, n={})",
                self.k, self.n
            )));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParam(format!(
                "WS rewiring probability {} outside [0, 1]",
                self.p
            )));
        }
        Ok(())
    }
}

/// Preferential-attachment growth from a complete seed graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaParams {
    pub n: usize,
    /// Size of the initial complete graph.
    pub n_a: usize,
    /// Edges attached per new vertex.
    pub k: usize,
}

impl BaParams {
    pub fn validate(&self) -> Result<()> {
        if !(1 <= self.k && self.k <= self.n_a && self.n_a <= self.n) {
            return Err(Error::InvalidParam(format!(
                "BA parameters need 1 <= k <= n_a <= n (k={}, n_a={}, n={})",
                self.k, self.n_a, self.n
            )));
        }
        Ok(())
    }
}

/// Either network model; the unit a sweep regenerates per trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum NetworkSpec {
    Ws(WsParams),
    Ba(BaParams),
}

impl NetworkSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            NetworkSpec::Ws(p) => p.validate(),
            NetworkSpec::Ba(p) => p.validate(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            NetworkSpec::Ws(p) => p.n,
            NetworkSpec::Ba(p) => p.n,
        }
    }

    pub fn generate(&self, seed: u64) -> Result<Graph> {
        match self {
            NetworkSpec::Ws(p) => generate_ws(p, seed),
            NetworkSpec::Ba(p) => generate_ba(p, seed),
        }
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Watts–Strogatz graph.
///
/// Lattice edges `(i, i + j mod n)` are visited for `j = 1..=k/2` (outer) and
/// `i = 0..n` (inner). Each is rewired with probability `p`: the far endpoint
/// is redrawn uniformly until it is neither `i` nor an existing neighbour of
/// `i`, giving up after `n` attempts and keeping the original edge. The edge
/// count is always `n·k/2`.
pub fn generate_ws(params: &WsParams, seed: u64) -> Result<Graph> {
    params.validate()?;
    let WsParams { n, k, p } = *params;
    let mut rng = Stream::new(seed);
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..n {
        for j in 1..=k / 2 {
            edges.insert(ordered(i, (i + j) % n));
        }
    }
    for j in 1..=k / 2 {
        for i in 0..n {
            let far = (i + j) % n;
            let current = ordered(i, far);
            // An earlier rewire may already have moved this lattice edge.
            if !edges.contains(&current) || !rng.chance(p) {
                continue;
            }
            for _ in 0..n {
                let w = rng.below(n as u64) as usize;
                if w != i && !edges.contains(&ordered(i, w)) {
                    edges.remove(&current);
                    edges.insert(ordered(i, w));
                    break;
                }
            }
        }
    }
    Graph::new(n, edges)
}

/// Barabási–Albert graph.
///
/// Starts from the complete graph on `n_a` vertices. Each new vertex `v`
/// picks `k` distinct targets among `0..v` by sequential degree-weighted
/// draws with removal: draw `r = below(total degree of remaining candidates)`
/// and take the first candidate (ascending index) whose cumulative degree
/// exceeds `r`. Degrees are those before `v` attaches.
pub fn generate_ba(params: &BaParams, seed: u64) -> Result<Graph> {
    params.validate()?;
    let BaParams { n, n_a, k } = *params;
    let mut rng = Stream::new(seed);
    let mut edges = Vec::with_capacity(n_a * (n_a - 1) / 2 + k * (n - n_a));
    let mut degree = vec![0u64; n];
    for i in 0..n_a {
        for j in i + 1..n_a {
            edges.push((i, j));
            degree[i] += 1;
            degree[j] += 1;
        }
    }
    let mut candidates: Vec<usize> = Vec::with_capacity(n);
    for v in n_a..n {
        candidates.clear();
        candidates.extend(0..v);
        let mut remaining: u64 = candidates.iter().map(|&c| degree[c]).sum();
        let mut targets = Vec::with_capacity(k);
        for _ in 0..k {
            let pick = if remaining == 0 {
                // Only reachable when n_a = 1: fall back to a uniform draw.
                rng.below(candidates.len() as u64) as usize
            } else {
                let r = rng.below(remaining);
                let mut acc = 0u64;
                candidates
                    .iter()
                    .position(|&c| {
                        acc += degree[c];
                        acc > r
                    })
                    .expect("cumulative degree exceeds draw")
            };
            let target = candidates.remove(pick);
            remaining -= degree[target];
            targets.push(target);
        }
        for t in targets {
            edges.push((t, v));
            degree[t] += 1;
            degree[v] += 1;
        }
    }
    Graph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_stats;

    #[test]
    fn ws_edge_count_is_preserved() {
        for p in [0.0, 0.7, 1.0] {
            for seed in 0..5 {
                let g = generate_ws(&WsParams { n: 100, k: 4, p }, seed).unwrap();
                assert_eq!(g.edge_count(), 200, "p={p} seed={seed}");
            }
        }
    }

    #[test]
    fn ws_without_rewiring_is_ring_lattice() {
        let g = generate_ws(&WsParams { n: 100, k: 4, p: 0.0 }, 11).unwrap();
        assert!((0..100).all(|v| g.degree(v) == 4));
        // 3(k-2) / (4(k-1)) for k = 4
        assert!((graph_stats(&g).mean_clustering - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ws_rejects_bad_params() {
        assert!(generate_ws(&WsParams { n: 10, k: 3, p: 0.1 }, 0).is_err());
        assert!(generate_ws(&WsParams { n: 4, k: 4, p: 0.1 }, 0).is_err());
        assert!(generate_ws(&WsParams { n: 10, k: 2, p: 1.5 }, 0).is_err());
    }

    #[test]
    fn ba_edge_counts() {
        assert_eq!(
            generate_ba(&BaParams { n: 100, n_a: 3, k: 2 }, 1).unwrap().edge_count(),
            197
        );
        assert_eq!(
            generate_ba(&BaParams { n: 3, n_a: 3, k: 2 }, 1).unwrap().edge_count(),
            3
        );
        assert_eq!(
            generate_ba(&BaParams { n: 5, n_a: 3, k: 2 }, 9).unwrap().edge_count(),
            7
        );
    }

    #[test]
    fn ba_single_seed_vertex_still_grows() {
        let g = generate_ba(&BaParams { n: 10, n_a: 1, k: 1 }, 4).unwrap();
        assert_eq!(g.edge_count(), 9);
    }

    #[test]
    fn ba_rejects_bad_params() {
        assert!(generate_ba(&BaParams { n: 10, n_a: 2, k: 3 }, 0).is_err());
        assert!(generate_ba(&BaParams { n: 2, n_a: 3, k: 1 }, 0).is_err());
        assert!(generate_ba(&BaParams { n: 10, n_a: 3, k: 0 }, 0).is_err());
    }

    #[test]
    fn generators_are_deterministic() {
        let ws = WsParams { n: 60, k: 6, p: 0.3 };
        assert_eq!(generate_ws(&ws, 5).unwrap(), generate_ws(&ws, 5).unwrap());
        assert_ne!(generate_ws(&ws, 5).unwrap(), generate_ws(&ws, 6).unwrap());
        let ba = BaParams { n: 60, n_a: 3, k: 2 };
        assert_eq!(generate_ba(&ba, 5).unwrap(), generate_ba(&ba, 5).unwrap());
    }

    #[test]
    fn ba_is_heavy_tailed() {
        let params = BaParams { n: 100, n_a: 3, k: 2 };
        let mut heavy = 0;
        for seed in 0..50 {
            let g = generate_ba(&params, seed).unwrap();
            let max = (0..100).map(|v| g.degree(v)).max().unwrap() as f64;
            let mean = 2.0 * g.edge_count() as f64 / 100.0;
            if max > 3.0 * mean {
                heavy += 1;
            }
        }
        assert_eq!(heavy, 50);
    }
}
