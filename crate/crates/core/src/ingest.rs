//! Temporal contact/message event files: parsing, the aggregate graph, and
//! conversion into per-timestamp information snapshots.
//!
//! Snapshot `k` covers the `k`-th distinct timestamp only; vertex `i` holds
//! `u` times the number of events at that timestamp it takes part in. Nothing
//! carries over between timestamps, and the time axis is the rank of the
//! distinct timestamp rather than wall-clock spacing.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formats::{SparseRow, SparseTrace};
use crate::graph::Graph;
use crate::measures::{delta_measures_sparse, MeasureSet, SeriesAccumulator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Delimiter {
    /// Comma if the line contains one, otherwise whitespace.
    #[default]
    Auto,
    Whitespace,
    Comma,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormatConfig {
    pub delimiter: Delimiter,
    pub comment_prefixes: Vec<String>,
    pub time_col: usize,
    pub src_col: usize,
    pub dst_col: usize,
    pub directed: bool,
}

impl Default for FormatConfig {
    /// SocioPatterns layout: `t i j [extra columns...]`.
    fn default() -> Self {
        Self {
            delimiter: Delimiter::Auto,
            comment_prefixes: vec!["#".into(), "%".into()],
            time_col: 0,
            src_col: 1,
            dst_col: 2,
            directed: false,
        }
    }
}

impl FormatConfig {
    pub fn validate(&self) -> Result<()> {
        if self.time_col == self.src_col || self.time_col == self.dst_col || self.src_col == self.dst_col {
            return Err(Error::InvalidParam(format!(
                "time/src/dst columns must be distinct (got {}, {}, {})",
                self.time_col, self.src_col, self.dst_col
            )));
        }
        Ok(())
    }

    fn widest_role(&self) -> usize {
        self.time_col.max(self.src_col).max(self.dst_col)
    }
}

/// Numeric event time with a total order.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Timestamp(pub f64);

impl PartialEq for Timestamp {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Timestamp {}

impl PartialOrd for Timestamp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Timestamp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Event {
    pub time: Timestamp,
    /// Source (sender) index.
    pub a: usize,
    /// Destination (receiver) index.
    pub b: usize,
}

/// Events sorted by time (stable with respect to file order), with vertex
/// labels mapped to dense indices in order of first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct EventLog {
    pub events: Vec<Event>,
    pub directed: bool,
    pub labels: Vec<String>,
}

impl EventLog {
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn distinct_times(&self) -> usize {
        self.events.chunk_by(|x, y| x.time == y.time).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetMeta {
    /// Accepted event rows.
    pub t_count: usize,
    /// Distinct timestamps.
    pub t_max: usize,
    pub vertex_count: usize,
    /// Non-blank, non-comment rows that were rejected (unparsable time,
    /// missing columns, self-loops).
    pub dropped_rows: usize,
}

fn split_fields(line: &str, delimiter: Delimiter) -> Vec<&str> {
    let comma = match delimiter {
        Delimiter::Comma => true,
        Delimiter::Whitespace => false,
        Delimiter::Auto => line.contains(','),
    };
    if comma {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

fn strip_quotes(s: &str) -> &str {
    s.trim_matches('"')
}

/// Reads an event file.
///
/// Blank and comment lines are skipped. Rows whose time column is not
/// numeric (headers included), rows too short to hold the role columns, and
/// self-loop rows are counted in `dropped_rows`. Extra columns are ignored.
pub fn parse_events<R: BufRead>(source: R, fmt: &FormatConfig) -> Result<(EventLog, DatasetMeta)> {
    fmt.validate()?;
    let need = fmt.widest_role() + 1;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut events = Vec::new();
    let mut dropped = 0usize;
    let mut widest_row = 0usize;

    for line in source.lines() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty()
            || fmt
                .comment_prefixes
                .iter()
                .any(|p| !p.is_empty() && trimmed.starts_with(p.as_str()))
        {
            continue;
        }
        let fields = split_fields(trimmed, fmt.delimiter);
        widest_row = widest_row.max(fields.len());
        if fields.len() < need {
            dropped += 1;
            continue;
        }
        let time = match strip_quotes(fields[fmt.time_col]).parse::<f64>() {
            Ok(t) if t.is_finite() => Timestamp(t),
            _ => {
                dropped += 1;
                continue;
            }
        };
        let (src, dst) = (strip_quotes(fields[fmt.src_col]), strip_quotes(fields[fmt.dst_col]));
        if src.is_empty() || dst.is_empty() || src == dst {
            dropped += 1;
            continue;
        }
        let mut id = |label: &str| {
            *index.entry(label.to_owned()).or_insert_with(|| {
                labels.push(label.to_owned());
                labels.len() - 1
            })
        };
        let a = id(src);
        let b = id(dst);
        events.push(Event { time, a, b });
    }

    if events.is_empty() {
        if widest_row > 0 && widest_row < need {
            return Err(Error::ColumnOutOfRange {
                index: fmt.widest_role(),
                width: widest_row,
            });
        }
        return Err(Error::EmptyInput("no valid event rows".into()));
    }
    events.sort_by_key(|e| e.time);
    let log = EventLog {
        events,
        directed: fmt.directed,
        labels,
    };
    let meta = DatasetMeta {
        t_count: log.events.len(),
        t_max: log.distinct_times(),
        vertex_count: log.vertex_count(),
        dropped_rows: dropped,
    };
    Ok((log, meta))
}

/// Undirected simple graph with one edge per distinct vertex pair.
pub fn aggregate_graph(log: &EventLog) -> Graph {
    Graph::new(log.vertex_count(), log.events.iter().map(|e| (e.a, e.b)))
        .expect("event log holds in-range, loop-free pairs")
}

/// Which endpoints of an event receive a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Incidence {
    #[default]
    Both,
    /// Only the destination; meaningful for directed message logs.
    ReceiverOnly,
}

/// Iterator over per-timestamp sparse snapshots of an event log.
pub struct Snapshots<'a> {
    groups: std::slice::ChunkBy<'a, Event, fn(&Event, &Event) -> bool>,
    u: f64,
    incidence: Incidence,
    scratch: HashMap<usize, usize>,
}

fn same_time(x: &Event, y: &Event) -> bool {
    x.time == y.time
}

impl Iterator for Snapshots<'_> {
    type Item = Vec<(usize, f64)>;

    fn next(&mut self) -> Option<Self::Item> {
        let group = self.groups.next()?;
        self.scratch.clear();
        for e in group {
            if self.incidence == Incidence::Both {
                *self.scratch.entry(e.a).or_default() += 1;
            }
            *self.scratch.entry(e.b).or_default() += 1;
        }
        let mut nz: Vec<(usize, f64)> = self.scratch.iter().map(|(&i, &c)| (i, self.u * c as f64)).collect();
        nz.sort_unstable_by_key(|e| e.0);
        Some(nz)
    }
}

pub fn snapshots(log: &EventLog, u: f64, incidence: Incidence) -> Snapshots<'_> {
    Snapshots {
        groups: log.events.chunk_by(same_time as fn(&Event, &Event) -> bool),
        u,
        incidence,
        scratch: HashMap::new(),
    }
}

/// One sparse snapshot per distinct timestamp, in time order.
pub fn events_to_trace(log: &EventLog, u: f64, incidence: Incidence) -> SparseTrace {
    let rows = snapshots(log, u, incidence)
        .enumerate()
        .map(|(t, nz)| SparseRow { t, nz })
        .collect();
    SparseTrace {
        n: log.vertex_count(),
        u,
        rows,
    }
}

/// Measures over the snapshot series without materializing the trace.
pub fn measure_events(log: &EventLog, u: f64, incidence: Incidence) -> Result<MeasureSet> {
    let n = log.vertex_count();
    let mut acc = SeriesAccumulator::default();
    let mut iter = snapshots(log, u, incidence);
    let Some(mut prev) = iter.next() else {
        return Err(Error::TraceTooShort(0));
    };
    for next in iter {
        acc.push(&delta_measures_sparse(&prev, &next, n, u)?);
        prev = next;
    }
    if acc.count() == 0 {
        return Err(Error::TraceTooShort(1));
    }
    acc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<(EventLog, DatasetMeta)> {
        parse_events(text.as_bytes(), &FormatConfig::default())
    }

    #[test]
    fn counts_rows_and_distinct_times() {
        let (_, meta) = parse("1 a b\n2 a c\n").unwrap();
        assert_eq!((meta.t_count, meta.t_max), (2, 2));
        let (_, meta) = parse("1 a b\n1 a c\n2 b c\n").unwrap();
        assert_eq!((meta.t_count, meta.t_max, meta.vertex_count), (3, 2, 3));
    }

    #[test]
    fn skips_comments_and_drops_bad_rows() {
        let text = "# header\n% other\n\nt i j\n20 1 2 3A 3B\n40 5 5\n60 1\nx 1 2\n20 2 3\n";
        let (log, meta) = parse(text).unwrap();
        assert_eq!(meta.t_count, 2);
        assert_eq!(meta.dropped_rows, 4);
        assert_eq!(log.labels, vec!["1", "2", "3"]);
    }

    #[test]
    fn sorts_stably_by_time() {
        let (log, _) = parse("30 a b\n10 c d\n30 e f\n10 g h\n").unwrap();
        let order: Vec<_> = log
            .events
            .iter()
            .map(|e| (log.labels[e.a].as_str(), e.time.0))
            .collect();
        assert_eq!(order, vec![("c", 10.0), ("g", 10.0), ("a", 30.0), ("e", 30.0)]);
    }

    #[test]
    fn comma_and_custom_columns() {
        let fmt = FormatConfig {
            time_col: 1,
            src_col: 2,
            dst_col: 3,
            ..FormatConfig::default()
        };
        let (log, meta) = parse_events(",contact_time,id1,id2\n1,100,7,8\n2,140,8,9\n".as_bytes(), &fmt).unwrap();
        assert_eq!(meta.t_count, 2);
        assert_eq!(meta.dropped_rows, 1);
        assert_eq!(log.events[1].time, Timestamp(140.0));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("# nothing\n"), Err(Error::EmptyInput(_))));
        let fmt = FormatConfig {
            dst_col: 5,
            ..FormatConfig::default()
        };
        assert!(matches!(
            parse_events("1 a b\n".as_bytes(), &fmt),
            Err(Error::ColumnOutOfRange { index: 5, width: 3 })
        ));
        let fmt = FormatConfig {
            src_col: 0,
            ..FormatConfig::default()
        };
        assert!(parse_events("1 a b\n".as_bytes(), &fmt).is_err());
    }

    #[test]
    fn aggregate_dedups_across_time() {
        let (log, _) = parse("1 a b\n1 a c\n2 b a\n").unwrap();
        let g = aggregate_graph(&log);
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 2));
    }

    #[test]
    fn snapshot_incidence_counts() {
        let (log, _) = parse("1 a b\n1 a c\n").unwrap();
        let trace = events_to_trace(&log, 1.0, Incidence::Both);
        assert_eq!(trace.rows.len(), 1);
        assert_eq!(trace.rows[0].nz, vec![(0, 2.0), (1, 1.0), (2, 1.0)]);
        let recv = events_to_trace(&log, 1.0, Incidence::ReceiverOnly);
        assert_eq!(recv.rows[0].nz, vec![(1, 1.0), (2, 1.0)]);
    }

    #[test]
    fn duplicate_rows_count_twice() {
        let (log, _) = parse("5 a b\n5 a b\n").unwrap();
        let trace = events_to_trace(&log, 1.0, Incidence::Both);
        assert_eq!(trace.rows[0].nz, vec![(0, 2.0), (1, 2.0)]);
    }

    #[test]
    fn streaming_measures_match_materialized_trace() {
        let (log, _) = parse("1 a b\n2 a c\n2 c d\n3 b d\n4 a b\n4 a b\n").unwrap();
        let trace = events_to_trace(&log, 1.0, Incidence::Both);
        assert_eq!(trace.rows.len(), 4);
        let direct = crate::measures::series_measures_sparse(trace.rows.iter().map(|r| &r.nz[..]), 4, 1.0).unwrap();
        assert_eq!(measure_events(&log, 1.0, Incidence::Both).unwrap(), direct);
    }

    #[test]
    fn single_timestamp_is_too_short_to_measure() {
        let (log, _) = parse("1 a b\n").unwrap();
        assert!(matches!(
            measure_events(&log, 1.0, Incidence::Both),
            Err(Error::TraceTooShort(1))
        ));
    }
}
