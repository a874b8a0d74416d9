use mixbiotic_core::measures::{
    delta_measures, delta_measures_sparse, series_measures, series_measures_sparse, trajectory, PolarPoint,
};
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Transition measures evaluated directly from their definitions.
fn oracle(a: &[f64], b: &[f64], u: f64) -> [f64; 4] {
    let n = a.len() as f64;
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let info = (b.iter().sum::<f64>() - a.iter().sum::<f64>()).abs() / (n * u);
    let l = norm(&diff) / (n.sqrt() * u);
    let lr = if norm(b) == 0.0 { 0.0 } else { norm(&diff) / norm(b) };
    let s = if norm(a) == 0.0 || norm(b) == 0.0 {
        0.0
    } else {
        a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / (norm(a) * norm(b))
    };
    [info, l, lr, s]
}

fn unit() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![0.25, 0.5, 1.0, 2.0, 3.0])
}

/// Quantized information vector of length `n`.
fn qvec(n: usize, u: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop::sample::select(vec![0u32, 0, 0, 1, 2, 3, 5]), n)
        .prop_map(move |ks| ks.into_iter().map(|k| k as f64 * u).collect())
}

fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, f64)> {
    (1usize..10, unit()).prop_flat_map(|(n, u)| (qvec(n, u), qvec(n, u), Just(u)))
}

fn trace() -> impl Strategy<Value = (Vec<Vec<f64>>, f64)> {
    (1usize..8, 2usize..9, unit()).prop_flat_map(|(n, len, u)| (prop::collection::vec(qvec(n, u), len), Just(u)))
}

fn to_sparse(q: &[f64]) -> Vec<(usize, f64)> {
    q.iter()
        .enumerate()
        .filter(|e| *e.1 != 0.0)
        .map(|(i, &v)| (i, v))
        .collect()
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = if xs.len() < 2 {
        0.0
    } else {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
    };
    (mean, var)
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(1000) })]

    #[test]
    fn delta_matches_definitions((a, b, u) in pair()) {
        let m = delta_measures(&a, &b, a.len(), u).unwrap();
        let want = oracle(&a, &b, u);
        for (got, want) in [m.info_change, m.euclid, m.rel_change, m.cos_sim].into_iter().zip(want) {
            prop_assert!((got - want).abs() <= TOL, "{got} vs {want}");
        }
    }

    #[test]
    fn sparse_delta_is_bitwise_dense((a, b, u) in pair()) {
        let dense = delta_measures(&a, &b, a.len(), u).unwrap();
        let sparse = delta_measures_sparse(&to_sparse(&a), &to_sparse(&b), a.len(), u).unwrap();
        prop_assert_eq!(dense, sparse);
    }

    #[test]
    fn series_matches_two_pass_statistics((tr, u) in trace()) {
        let n = tr[0].len();
        let got = series_measures(tr.iter().map(Vec::as_slice), n, u).unwrap();
        let deltas: Vec<[f64; 4]> = tr.windows(2).map(|w| oracle(&w[0], &w[1], u)).collect();
        let stats: Vec<(f64, f64)> = (0..4).map(|k| mean_var(&deltas.iter().map(|d| d[k]).collect::<Vec<_>>())).collect();
        let want = [
            stats[0].0, stats[0].1, stats[1].0, stats[1].1, stats[2].0, stats[2].1, stats[3].0, stats[3].1,
            stats[2].1, stats[3].0 * stats[3].1, stats[1].0,
        ];
        for (g, w) in got.values().into_iter().zip(want) {
            prop_assert!((g - w).abs() <= TOL, "{g} vs {w}");
        }
        prop_assert_eq!(got.delta_count, tr.len() - 1);
    }

    #[test]
    fn sparse_series_is_bitwise_dense((tr, u) in trace()) {
        let n = tr[0].len();
        let dense = series_measures(tr.iter().map(Vec::as_slice), n, u).unwrap();
        let sparse = series_measures_sparse(tr.iter().map(|q| to_sparse(q)), n, u).unwrap();
        prop_assert_eq!(dense, sparse);
    }

    #[test]
    fn measures_are_unit_free((a, b, u) in pair(), c in prop::sample::select(vec![0.5, 2.0, 4.0])) {
        let m = delta_measures(&a, &b, a.len(), u).unwrap();
        let sa: Vec<f64> = a.iter().map(|x| x * c).collect();
        let sb: Vec<f64> = b.iter().map(|x| x * c).collect();
        let s = delta_measures(&sa, &sb, a.len(), u * c).unwrap();
        for (x, y) in [(m.info_change, s.info_change), (m.euclid, s.euclid), (m.rel_change, s.rel_change), (m.cos_sim, s.cos_sim)] {
            prop_assert!((x - y).abs() <= TOL);
        }
    }

    #[test]
    fn symmetric_parts_are_symmetric((a, b, u) in pair()) {
        let ab = delta_measures(&a, &b, a.len(), u).unwrap();
        let ba = delta_measures(&b, &a, a.len(), u).unwrap();
        prop_assert_eq!(ab.info_change, ba.info_change);
        prop_assert_eq!(ab.euclid, ba.euclid);
        prop_assert!((ab.cos_sim - ba.cos_sim).abs() <= TOL);
        prop_assert!((0.0..=1.0).contains(&ab.cos_sim));
    }

    #[test]
    fn trajectory_matches_pairwise_identity((tr, _u) in trace()) {
        for (p, q) in trajectory(tr.iter().map(Vec::as_slice)).iter().zip(&tr) {
            let r = norm(q);
            prop_assert!((p.r - r).abs() <= TOL);
            if r == 0.0 {
                prop_assert_eq!(*p, PolarPoint { r: 0.0, theta: 0.0 });
                continue;
            }
            let n = q.len() as f64;
            let mut pairs = 0.0;
            for i in 0..q.len() {
                for j in i + 1..q.len() {
                    pairs += (q[i] - q[j]).powi(2);
                }
            }
            let theta = (pairs / n).sqrt().atan2(q.iter().sum::<f64>() / n.sqrt());
            prop_assert!((p.theta - theta).abs() <= TOL);
            prop_assert!(p.theta >= 0.0 && p.theta <= std::f64::consts::FRAC_PI_2);
            let (x, y) = p.to_cartesian();
            prop_assert!(((x * x + y * y).sqrt() - p.r).abs() <= 1e-9 * (1.0 + p.r));
        }
    }
}

#[test]
fn uniform_vector_lies_on_the_axis() {
    let p = PolarPoint::of(&[3.0; 7]);
    assert_eq!(p.theta, 0.0);
    assert!((p.r - 3.0 * 7f64.sqrt()).abs() < TOL);
}
