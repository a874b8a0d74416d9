use std::collections::BTreeSet;

use mixbiotic_core::ingest::{aggregate_graph, events_to_trace, measure_events, parse_events, FormatConfig, Incidence};
use mixbiotic_core::measures::series_measures_sparse;
use proptest::prelude::*;

/// Rows of `(time, src, dst)` over a small label alphabet, self-loops included.
fn rows() -> impl Strategy<Value = Vec<(u32, u8, u8)>> {
    prop::collection::vec((0u32..12, 0u8..9, 0u8..9), 1..80)
}

fn render(rows: &[(u32, u8, u8)]) -> String {
    let mut text = String::from("# t i j\n");
    for (t, a, b) in rows {
        text.push_str(&format!("{t} v{a} v{b} extra\n"));
    }
    text
}

fn parse(text: &str) -> (mixbiotic_core::EventLog, mixbiotic_core::DatasetMeta) {
    parse_events(text.as_bytes(), &FormatConfig::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(500) })]

    #[test]
    fn counts_and_conservation(rows in rows()) {
        prop_assume!(rows.iter().any(|r| r.1 != r.2));
        let (log, meta) = parse(&render(&rows));
        let kept: Vec<_> = rows.iter().filter(|r| r.1 != r.2).collect();
        prop_assert_eq!(meta.t_count, kept.len());
        prop_assert_eq!(meta.dropped_rows, rows.len() - kept.len());
        let times: BTreeSet<u32> = kept.iter().map(|r| r.0).collect();
        prop_assert_eq!(meta.t_max, times.len());
        prop_assert!(meta.t_max <= meta.t_count);

        let trace = events_to_trace(&log, 1.0, Incidence::Both);
        prop_assert_eq!(trace.rows.len(), meta.t_max);
        for (row, t) in trace.rows.iter().zip(&times) {
            let events = kept.iter().filter(|r| r.0 == *t).count();
            let total: f64 = row.nz.iter().map(|e| e.1).sum();
            prop_assert_eq!(total, 2.0 * events as f64);
        }
        let receivers = events_to_trace(&log, 1.0, Incidence::ReceiverOnly);
        let total: f64 = receivers.rows.iter().flat_map(|r| r.nz.iter().map(|e| e.1)).sum();
        prop_assert_eq!(total, kept.len() as f64);
    }

    #[test]
    fn shuffling_within_a_timestamp_keeps_the_trace(rows in rows(), seed in any::<u64>()) {
        prop_assume!(rows.iter().any(|r| r.1 != r.2));
        let mut sorted = rows.clone();
        sorted.sort_by_key(|r| r.0);
        let mut shuffled = sorted.clone();
        // reverse every same-time block, then rotate by the seed within it
        for block in shuffled.chunk_by_mut(|x, y| x.0 == y.0) {
            block.reverse();
            let len = block.len();
            block.rotate_left((seed % len as u64) as usize);
        }
        let (a, _) = parse(&render(&sorted));
        let (b, _) = parse(&render(&shuffled));
        // Labels may be indexed differently; compare traces keyed by label.
        let keyed = |log: &mixbiotic_core::EventLog| {
            events_to_trace(log, 1.0, Incidence::Both)
                .rows
                .into_iter()
                .map(|r| r.nz.into_iter().map(|(i, q)| (log.labels[i].clone(), q.to_bits())).collect::<BTreeSet<_>>())
                .collect::<Vec<_>>()
        };
        prop_assert_eq!(keyed(&a), keyed(&b));
    }

    #[test]
    fn aggregate_graph_has_every_pair(rows in rows()) {
        prop_assume!(rows.iter().any(|r| r.1 != r.2));
        let (log, _) = parse(&render(&rows));
        let g = aggregate_graph(&log);
        let index = |label: u8| log.labels.iter().position(|l| *l == format!("v{label}")).unwrap();
        let pairs: BTreeSet<(u8, u8)> = rows.iter().filter(|r| r.1 != r.2).map(|r| (r.1.min(r.2), r.1.max(r.2))).collect();
        prop_assert_eq!(g.edge_count(), pairs.len());
        for (a, b) in pairs {
            prop_assert!(g.has_edge(index(a), index(b)));
        }
        // the trace's co-active vertices never imply an edge that is not there
        let trace = events_to_trace(&log, 1.0, Incidence::Both);
        prop_assert!(trace.rows.iter().all(|r| r.nz.iter().all(|&(i, _)| g.degree(i) > 0)));
    }

    #[test]
    fn streaming_measures_equal_materialized(rows in rows()) {
        let (log, meta) = parse(&render(&rows));
        prop_assume!(meta.t_max >= 2);
        let trace = events_to_trace(&log, 1.0, Incidence::Both);
        let materialized = series_measures_sparse(trace.rows.iter().map(|r| &r.nz[..]), trace.n, 1.0).unwrap();
        prop_assert_eq!(measure_events(&log, 1.0, Incidence::Both).unwrap(), materialized);
    }
}
