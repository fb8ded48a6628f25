//! Violation search and exponent sweep behaviour.

use skewnum_core::optimize::nelder_mead;
use skewnum_core::reference;
use skewnum_core::search::{descend, grid, Field, ParameterVector, DEFAULT_EPSILON};
use skewnum_core::{eigh, p_sweep, random_instance, sa_gap, search_sa_violation, SearchConfig};

fn small_config(seed: u64) -> SearchConfig {
    let mut cfg = SearchConfig::new((2, 2), 0.5, 8, seed);
    cfg.max_iters = 200;
    cfg
}

#[test]
fn search_is_bitwise_reproducible_across_thread_counts() {
    let mut one = small_config(11);
    one.threads = 1;
    let mut four = small_config(11);
    four.threads = 4;
    let a = search_sa_violation(&one, None).unwrap();
    let b = search_sa_violation(&four, None).unwrap();
    assert_eq!(a.instance, b.instance);
    assert_eq!(a.origin, b.origin);
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a.candidate_gaps), bits(&b.candidate_gaps));
}

#[test]
fn descent_history_never_increases() {
    let cfg = small_config(3);
    let layout = cfg.layout();
    for seed in 0..5 {
        let start = layout.encode(&random_instance((2, 2), seed)).unwrap();
        let run = descend(&cfg, &start);
        assert!(run.history.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(run.history.last().copied(), Some(run.value));
    }
}

#[test]
fn every_iterate_decodes_to_a_positive_definite_state() {
    for field in [Field::Real, Field::Complex] {
        let mut cfg = small_config(5);
        cfg.field = field;
        let layout = cfg.layout();
        let start = layout.encode(&random_instance((2, 2), 5)).unwrap();
        let mut worst = f64::INFINITY;
        let mut worst_normalized = f64::INFINITY;
        nelder_mead(
            |x| {
                let pv = ParameterVector(x.to_vec());
                let (rho, _, _) = layout.decode(&pv);
                worst = worst.min(eigh(&rho).unwrap().min_eigenvalue());
                let inst = layout.decode_instance(&pv, cfg.p).unwrap();
                worst_normalized =
                    worst_normalized.min(eigh(inst.rho12.matrix()).unwrap().min_eigenvalue());
                sa_gap(&inst, None).map(|r| r.gap).unwrap_or(f64::INFINITY)
            },
            &start.0,
            &cfg.simplex,
            cfg.max_iters,
        );
        assert!(
            worst >= DEFAULT_EPSILON / 2.0,
            "{field:?}: min eigenvalue {worst}"
        );
        assert!(worst_normalized > 0.0);
    }
}

#[test]
fn counterexample_is_a_fixed_point_of_the_normalization() {
    let inst = reference::instance();
    let layout = SearchConfig::new((2, 2), 0.5, 1, 0).layout();
    let normalized = layout.normalize(
        inst.rho12.matrix().clone(),
        inst.k1.clone(),
        inst.k2.clone(),
        0.5,
    );
    assert_eq!(normalized, inst);
}

#[test]
fn warm_start_never_loses_ground() {
    let cfg = small_config(1);
    let warm = reference::instance();
    let baseline = sa_gap(&warm, None).unwrap().gap;
    let out = search_sa_violation(&cfg, Some(&warm)).unwrap();
    assert!(out.report.gap <= baseline);
    assert_eq!(out.candidate_gaps.len(), cfg.restarts + 2);
    assert!(out.report.violated);
}

#[test]
fn zero_second_observable_is_never_violated() {
    let mut cfg = small_config(2);
    cfg.k2_zero = true;
    cfg.restarts = 16;
    let out = search_sa_violation(&cfg, None).unwrap();
    assert_eq!(out.violations, 0, "best gap {}", out.report.gap);
    assert!(out.instance.k2.max_abs() == 0.0);
}

#[test]
fn sweep_is_symmetric_under_p_to_one_minus_p() {
    let g = grid(0.1, 0.9, 0.1).unwrap();
    for inst in [reference::instance(), random_instance((2, 3), 4)] {
        let reports = p_sweep(&inst, &g).unwrap();
        let scale = reports.iter().map(|r| r.gap.abs()).fold(1.0, f64::max);
        for i in 0..g.len() {
            let j = g.len() - 1 - i;
            let (a, b) = (reports[i].gap, reports[j].gap);
            assert!((a - b).abs() <= 1e-10 * scale, "p = {}: {a} vs {b}", g[i]);
        }
    }
}
