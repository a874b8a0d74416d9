//! Undirected simple graphs and whole-graph statistics.

use std::collections::VecDeque;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected simple graph over vertices `0..vertex_count`.
///
/// Adjacency lists are sorted and duplicate-free, so `a_ij = a_ji` holds by
/// construction and membership tests are a binary search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate pairs (in either
    /// orientation) collapse to one edge.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (i, j) in edges {
            for v in [i, j] {
                if v >= vertex_count {
                    return Err(Error::VertexOutOfRange { index: v, vertex_count });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        let mut twice = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        Ok(Self {
            adjacency,
            edge_count: twice / 2,
        })
    }

    pub fn empty(vertex_count: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); vertex_count],
            edge_count: 0,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.adjacency.len() && self.adjacency[i].binary_search(&j).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    /// Breadth-first distances from `source`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let next = dist[v].map(|d| d + 1);
            for &w in &self.adjacency[v] {
                if dist[w].is_none() {
                    dist[w] = next;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Local clustering coefficient; 0 for vertices of degree < 2.
    pub fn local_clustering(&self, v: usize) -> f64 {
        let nbrs = &self.adjacency[v];
        let k = nbrs.len();
        if k < 2 {
            return 0.0;
        }
        let mut links = 0usize;
        for (a, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[a + 1..] {
                if self.has_edge(x, y) {
                    links += 1;
                }
            }
        }
        2.0 * links as f64 / (k * (k - 1)) as f64
    }
}

/// Graph diameter; infinite when some pair of vertices is unreachable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diameter {
    Finite(usize),
    Infinite,
}

impl Diameter {
    pub fn is_finite(self) -> bool {
        matches!(self, Diameter::Finite(_))
    }
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Diameter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Diameter::Finite(d) => s.serialize_u64(*d as u64),
            Diameter::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Diameter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Diameter::Finite(v as usize)),
            Raw::Text(t) if t == "inf" => Ok(Diameter::Infinite),
            Raw::Text(t) => Err(de::Error::custom(format!("expected integer or \"inf\", got {t:?}"))),
        }
    }
}

/// Serde adapter writing non-finite floats as the string `"inf"`.
pub mod inf_f64 {
    use serde::de::{self, Deserializer};
    use serde::{Deserialize, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Raw::Text(t) => Err(de::Error::custom(format!("expected number or \"inf\", got {t:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub diameter: Diameter,
    #[serde(with = "inf_f64")]
    pub mean_distance: f64,
    pub density: f64,
    pub mean_clustering: f64,
}

/// Computes vertex/edge counts, diameter, mean distance over all unordered
/// pairs, density and mean local clustering.
///
/// Distances come from one BFS per source. A single vertex yields zeros.
pub fn graph_stats(g: &Graph) -> GraphStats {
    let n = g.vertex_count();
    let m = g.edge_count();
    if n < 2 {
        return GraphStats {
            vertex_count: n,
            edge_count: m,
            diameter: Diameter::Finite(0),
            mean_distance: 0.0,
            density: 0.0,
            mean_clustering: 0.0,
        };
    }

    let mut connected = true;
    let mut diameter = 0usize;
    // Sum over ordered pairs; integer so the result is exact.
    let mut total: u64 = 0;
    for source in 0..n {
        for d in g.bfs_distances(source) {
            match d {
                Some(d) => {
                    diameter = diameter.max(d);
                    total += d as u64;
                }
                None => connected = false,
            }
        }
        if !connected {
            break;
        }
    }
    let pairs = (n * (n - 1)) as f64;
    let (diameter, mean_distance) = if connected {
        (Diameter::Finite(diameter), total as f64 / pairs)
    } else {
        (Diameter::Infinite, f64::INFINITY)
    };

    let mean_clustering = (0..n).map(|v| g.local_clustering(v)).sum::<f64>() / n as f64;

    GraphStats {
        vertex_count: n,
        edge_count: m,
        diameter,
        mean_distance,
        density: 2.0 * m as f64 / pairs,
        mean_clustering,
    }
}

/// On-disk form: `{ "n": <int>, "edges": [[i, j], ...] }` with `i < j`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphDoc {
    fn from(g: &Graph) -> Self {
        Self {
            n: g.vertex_count(),
            edges: g.edges().map(|(i, j)| [i, j]).collect(),
        }
    }
}

impl TryFrom<GraphDoc> for Graph {
    type Error = Error;

    fn try_from(doc: GraphDoc) -> Result<Self> {
        Graph::new(doc.n, doc.edges.into_iter().map(|[i, j]| (i, j)))
    }
}

impl Graph {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphDoc::from(self)).expect("graph document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_str(text)?;
        Graph::try_from(doc)
    }
}
