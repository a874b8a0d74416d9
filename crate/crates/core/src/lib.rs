//! Simulation and measurement of communication patterns on social networks.
//!
//! The crate covers the whole pipeline:
//!
//! * [`graph`]: undirected simple graphs and their summary statistics;
//! * [`netgen`]: seeded Watts–Strogatz and Barabási–Albert generators;
//! * [`commsim`]: the stochastic send/erase communication model;
//! * [`measures`]: per-transition change measures, their series statistics,
//!   the atomism/mixism/mobism composites and polar trajectories;
//! * [`sweep`]: (g, d) mesh sweeps with trial averaging and phase labels;
//! * [`ingest`]: temporal contact/message datasets;
//! * [`formats`] and [`render`]: CSV/JSON files and SVG figures.

pub mod commsim;
pub mod error;
pub mod formats;
pub mod graph;
pub mod ingest;
pub mod measures;
pub mod netgen;
pub mod render;
pub mod rng;
pub mod sweep;

pub use commsim::{init_state, run_sim, sim_step, InfoState, SimConfig, SimTrace, StepReport};
pub use error::{Error, Result};
pub use graph::{graph_stats, Diameter, Graph, GraphStats};
pub use ingest::{aggregate_graph, events_to_trace, parse_events, DatasetMeta, EventLog, FormatConfig, Incidence};
pub use measures::{delta_measures, series_measures, trajectory, DeltaMeasures, MeasureSet, PolarPoint};
pub use netgen::{generate_ba, generate_ws, BaParams, NetworkSpec, WsParams};
pub use sweep::{build_mesh, classify_phases, run_sweep, MeshSpec, Phase, PhaseGrid, SweepConfig};
