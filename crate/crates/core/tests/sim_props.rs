use mixbiotic_core::commsim::{init_state, round_count, run_sim, sim_step, InfoState, SimConfig};
use mixbiotic_core::graph::Graph;
use mixbiotic_core::netgen::{BaParams, NetworkSpec, WsParams};
use mixbiotic_core::rng::Stream;
use mixbiotic_core::sweep::{run_trial, SweepConfig};
use proptest::prelude::*;

fn rate() -> impl Strategy<Value = f64> {
    prop_oneof![prop::sample::select(vec![0.0, 0.1, 0.3, 0.5, 0.7, 1.0]), 0.0f64..=1.0]
}

fn graph() -> impl Strategy<Value = Graph> {
    (1usize..14, 0.0f64..=1.0, any::<u64>()).prop_map(|(n, p, seed)| {
        let mut rng = Stream::new(seed);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.chance(p) {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(n, edges).unwrap()
    })
}

/// Graph, config and a quantized state on that graph.
fn setup() -> impl Strategy<Value = (Graph, SimConfig, InfoState)> {
    (
        graph(),
        rate(),
        rate(),
        prop::sample::select(vec![0.5, 1.0, 2.0]),
        any::<u64>(),
    )
        .prop_flat_map(|(g, gr, dr, u, seed)| {
            let n = g.vertex_count();
            let cfg = SimConfig {
                g: gr,
                d: dr,
                u,
                seed,
                ..SimConfig::default()
            };
            let state = prop::collection::vec(0u32..4, n)
                .prop_map(move |ks| InfoState::from_vec(ks.into_iter().map(|k| k as f64 * u).collect()).unwrap());
            (Just(g), Just(cfg), state)
        })
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(2000) })]

    #[test]
    fn step_invariants((graph, cfg, state) in setup()) {
        let mut rng = Stream::new(cfg.seed);
        let (next, rep) = sim_step(&state, &graph, &cfg, &mut rng).unwrap();
        let n = graph.vertex_count();
        let (q0, q1) = (state.values(), next.values());

        let support: Vec<usize> = (0..n).filter(|&i| q1[i] > 0.0).collect();
        prop_assert_eq!(next.informed(), support);
        prop_assert!(q1.iter().all(|&v| v >= 0.0 && (v / cfg.u).fract() == 0.0));
        prop_assert_eq!(rep.n_senders, round_count(cfg.g * state.informed_count() as f64));
        prop_assert_eq!(rep.n_receivers, round_count(cfg.g * n as f64));

        let gained: f64 = (0..n).map(|i| (q1[i] - q0[i]).max(0.0)).sum();
        prop_assert!(gained <= cfg.u * (rep.n_senders * rep.n_receivers) as f64);
        if cfg.d == 0.0 {
            prop_assert!((0..n).all(|i| q1[i] >= q0[i]));
        }
        if cfg.g == 0.0 {
            prop_assert!((0..n).all(|i| q1[i] <= q0[i]));
        }
        if state.informed_count() == 0 {
            prop_assert_eq!(next.informed_count(), 0);
        }
    }

    #[test]
    fn runs_have_expected_shape(g in graph(), gr in rate(), dr in rate(), t_max in 0usize..30, seed in any::<u64>()) {
        let n_0 = g.vertex_count().min(3);
        let cfg = SimConfig { g: gr, d: dr, u: 1.0, t_max, n_0, seed };
        let trace = run_sim(&cfg, &g).unwrap();
        prop_assert_eq!(trace.states.len(), t_max + 1);
        prop_assert_eq!(trace.reports.len(), t_max);
        prop_assert_eq!(trace.states[0].informed_count(), n_0);
        prop_assert_eq!(&trace, &run_sim(&cfg, &g).unwrap());
    }

    #[test]
    fn init_informs_exactly_n0(n in 1usize..50, seed in any::<u64>(), frac in 0.0f64..=1.0) {
        let n_0 = (n as f64 * frac) as usize;
        let cfg = SimConfig { n_0, u: 2.0, ..SimConfig::default() };
        let s = init_state(&cfg, n, &mut Stream::new(seed)).unwrap();
        prop_assert_eq!(s.informed_count(), n_0);
        prop_assert!(s.values().iter().all(|&v| v == 0.0 || v == 2.0));
    }
}

#[test]
fn no_generation_bounds_total_change() {
    // With g = 0 information only disappears, so the summed per-step change
    // cannot exceed what was seeded: sum I <= n_0·u / (n·u).
    for spec in [
        NetworkSpec::Ws(WsParams { n: 100, k: 4, p: 0.7 }),
        NetworkSpec::Ba(BaParams { n: 100, n_a: 3, k: 2 }),
    ] {
        let cfg = SweepConfig::new(spec);
        for d in [0.0, 0.1, 0.5, 1.0] {
            for trial in 0..20 {
                let m = run_trial(&cfg, 0.0, d, trial).unwrap();
                let total = m.mu_info * m.delta_count as f64;
                assert!(total <= cfg.n_0 as f64 / 100.0 + 1e-12, "d={d} trial={trial}: {total}");
            }
        }
    }
}

#[test]
fn full_generation_without_loss_only_grows() {
    let g = NetworkSpec::Ws(WsParams { n: 100, k: 4, p: 0.7 }).generate(1).unwrap();
    let cfg = SimConfig {
        g: 0.9,
        d: 0.0,
        t_max: 40,
        ..SimConfig::default()
    };
    let trace = run_sim(&cfg, &g).unwrap();
    for w in trace.states.windows(2) {
        assert!(w[1].total() >= w[0].total());
    }
    assert!(trace.states.last().unwrap().total() > trace.states[0].total());
}
