use pc_inconsistency::consistency::{
    complete_from_generators, complete_from_tree, reduce, GeneratorSet, ReductionOptions,
};
use pc_inconsistency::indicators::{
    additive_kii_triad, distance_indicator_triad, kii_triad, kii_triad_exp, matrix_kii, relative_error_triad,
    zero_one_indicator,
};
use pc_inconsistency::io::{parse_matrix_str, write_matrix, MatrixFormat};
use pc_inconsistency::matrix::{triad_count, PcMatrix};
use pc_inconsistency::normalization::NormalizationMap;
use proptest::prelude::*;

fn ratio() -> impl Strategy<Value = f64> {
    (-4.0f64..4.0).prop_map(f64::exp)
}

fn matrix(n_max: usize) -> impl Strategy<Value = PcMatrix> {
    (3..=n_max).prop_flat_map(|n| {
        prop::collection::vec(ratio(), n * (n - 1) / 2)
            .prop_map(move |upper| PcMatrix::from_upper_triangle(n, &upper).unwrap())
    })
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #[test]
    fn reciprocal_and_unit_diagonal(m in matrix(8)) {
        for i in 0..m.n() {
            prop_assert_eq!(m.get(i, i), 1.0);
            for j in 0..m.n() {
                prop_assert!(close(m.get(i, j) * m.get(j, i), 1.0, 1e-12));
            }
        }
    }

    #[test]
    fn triads_enumerate_entries(m in matrix(8)) {
        let triads = m.triads();
        prop_assert_eq!(triads.len(), triad_count(m.n()));
        let mut prev = None;
        for t in &triads {
            let (i, j, k) = t.indices;
            prop_assert!(i < j && j < k);
            prop_assert_eq!(t.values(), (m.get(i, j), m.get(i, k), m.get(j, k)));
            prop_assert!(prev < Some(t.indices));
            prev = Some(t.indices);
        }
    }

    #[test]
    fn consistency_matches_brute_force(m in matrix(6), tol in 0.0f64..0.5) {
        let n = m.n();
        let mut brute = true;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let (x, y, z) = (m.get(i, j), m.get(i, k), m.get(j, k));
                    brute &= (y - x * z).abs() <= tol * y;
                }
            }
        }
        prop_assert_eq!(m.is_consistent(tol), brute);
    }

    #[test]
    fn additive_bridge_round_trips(m in matrix(6)) {
        let back = m.to_additive().to_multiplicative().unwrap();
        for i in 0..m.n() {
            for j in 0..m.n() {
                prop_assert!(close(back.get(i, j), m.get(i, j), 1e-12));
            }
        }
    }

    #[test]
    fn kii_in_unit_interval(x in ratio(), y in ratio(), z in ratio()) {
        let k = kii_triad(x, y, z).unwrap();
        prop_assert!((0.0..1.0).contains(&k));
    }

    #[test]
    fn kii_forms_agree(x in ratio(), y in ratio(), z in ratio()) {
        let a = kii_triad(x, y, z).unwrap();
        let b = kii_triad_exp(x, y, z).unwrap();
        prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn kii_depends_only_on_ratio(x in ratio(), y in ratio(), z in ratio()) {
        let q = y / (x * z);
        let a = kii_triad(x, y, z).unwrap();
        let b = kii_triad(1.0, q, 1.0).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn kii_invariant_under_transposition(x in ratio(), y in ratio(), z in ratio()) {
        let a = kii_triad(x, y, z).unwrap();
        let b = kii_triad(1.0 / z, 1.0 / y, 1.0 / x).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn kii_grows_with_log_deviation(u in 0.0f64..30.0, v in 0.0f64..30.0) {
        prop_assume!((u - v).abs() > 1e-9);
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        let a = kii_triad(1.0, lo.exp(), 1.0).unwrap();
        let b = kii_triad(1.0, hi.exp(), 1.0).unwrap();
        prop_assert!(a < b);
        let c = kii_triad(1.0, (-lo).exp(), 1.0).unwrap();
        let d = kii_triad(1.0, (-hi).exp(), 1.0).unwrap();
        prop_assert!(c < d);
    }

    #[test]
    fn zero_exactly_on_consistent_triads(x in ratio(), z in ratio(), y in ratio()) {
        prop_assert_eq!(kii_triad(x, x * z, z).unwrap(), 0.0);
        prop_assert_eq!(distance_indicator_triad(x, x * z, z).unwrap(), 0.0);
        prop_assert_eq!(zero_one_indicator(x, x * z, z, 0.0).unwrap(), 0);
        let inconsistent = y != x * z;
        prop_assert_eq!(kii_triad(x, y, z).unwrap() > 0.0, inconsistent);
        prop_assert_eq!(relative_error_triad(x, y, z).unwrap() > 0.0, inconsistent);
    }

    #[test]
    fn additive_kii_matches_multiplicative(x in ratio(), y in ratio(), z in ratio()) {
        let a = additive_kii_triad(x.ln(), y.ln(), z.ln()).unwrap();
        let m = kii_triad(x, y, z).unwrap();
        prop_assert!((a - m).abs() <= 1e-9);
    }

    #[test]
    fn matrix_kii_is_max_over_triads(m in matrix(6)) {
        let (k, at) = matrix_kii(&m).unwrap();
        let mut best = (f64::NEG_INFINITY, (0, 0, 0));
        let n = m.n();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let v = kii_triad(m.get(i, j), m.get(i, k), m.get(j, k)).unwrap();
                    if v > best.0 {
                        best = (v, (i, j, k));
                    }
                }
            }
        }
        prop_assert_eq!((k, at), best);
    }

    #[test]
    fn normalization_maps_monotone_and_bounded(
        t in 0.0f64..50.0,
        dt in 1e-6f64..10.0,
        k in 0.1f64..5.0,
        b in 0.1f64..5.0,
        c in 0.1f64..5.0,
    ) {
        let maps = [
            NormalizationMap::Exponential,
            NormalizationMap::logistic(k).unwrap(),
            NormalizationMap::gompertz(b, c).unwrap(),
        ];
        for map in maps {
            prop_assert_eq!(map.apply(0.0).unwrap(), 0.0);
            let lo = map.apply(t).unwrap();
            let hi = map.apply(t + dt).unwrap();
            prop_assert!((0.0..1.0).contains(&lo) && (0.0..1.0).contains(&hi));
            prop_assert!(lo <= hi, "{:?}: f({}) = {} > f({}) = {}", map, t, lo, t + dt, hi);
        }
    }

    #[test]
    fn generator_completion_is_consistent(g in prop::collection::vec(ratio(), 1..8)) {
        let set = GeneratorSet::new(g.clone()).unwrap();
        let m = complete_from_generators(&set);
        prop_assert_eq!(m.n(), g.len() + 1);
        for (i, gi) in g.iter().enumerate() {
            prop_assert_eq!(m.get(i, i + 1), *gi);
        }
        if m.n() >= 3 {
            prop_assert!(matrix_kii(&m).unwrap().0 <= 1e-12);
        }
        let chain: Vec<_> = g.iter().enumerate().map(|(i, &r)| (i, i + 1, r)).collect();
        let via_tree = complete_from_tree(m.n(), &chain).unwrap();
        prop_assert_eq!(via_tree, m);
    }

    #[test]
    fn triangle_reduces_in_one_step(x in ratio(), y in ratio(), z in ratio()) {
        let m = PcMatrix::from_upper_triangle(3, &[x, y, z]).unwrap();
        let opts = ReductionOptions { tolerance: 1e-9, ..ReductionOptions::default() };
        let trace = reduce(&m, opts).unwrap();
        prop_assert!(trace.converged);
        prop_assert!(trace.steps.len() <= 1);
        prop_assert!(trace.final_kii <= 1e-9);
    }

    #[test]
    fn reduction_keeps_matrix_valid(m in matrix(6), blend in 0.2f64..=1.0) {
        let opts = ReductionOptions { tolerance: 0.05, max_iter: 50, blend };
        let trace = reduce(&m, opts).unwrap();
        let rebuilt = PcMatrix::new(trace.matrix.to_rows()).unwrap();
        prop_assert_eq!(&rebuilt, &trace.matrix);
        prop_assert_eq!(trace.final_kii, matrix_kii(&trace.matrix).unwrap().0);
        prop_assert!(trace.steps.len() <= 50);
        prop_assert_eq!(trace.converged, trace.final_kii <= 0.05);
        for (idx, step) in trace.steps.iter().enumerate() {
            prop_assert_eq!(step.step, idx + 1);
            prop_assert!(step.new_value.is_finite() && step.new_value > 0.0);
        }
    }

    #[test]
    fn csv_round_trip(m in matrix(7)) {
        for format in [MatrixFormat::CsvFull, MatrixFormat::CsvUpper] {
            let text = write_matrix(&m, format);
            let back = parse_matrix_str(&text, format).unwrap();
            prop_assert_eq!(&back, &m);
        }
    }
}
