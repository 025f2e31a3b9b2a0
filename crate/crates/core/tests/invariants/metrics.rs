use intermittent::metrics::{
    cumulative_forecast_error, cumulative_squared_error, error_series, number_of_shortages,
    percent_best, periods_in_stock, scalar_errors,
};
use intermittent::MetricsAccumulator;
use proptest::prelude::*;

use super::{run, Check};

pub const CHECKS: [(&str, Check); 5] = [
    ("metrics::rmse_dominates", rmse_dominates),
    ("metrics::percent_best_bounds", percent_best_bounds),
    ("metrics::streaming_matches_batch", streaming_matches_batch),
    ("metrics::merge_pools_sums", merge_pools_sums),
    (
        "metrics::periods_in_stock_recurrence",
        periods_in_stock_recurrence,
    ),
];

fn paired_series(max_len: usize) -> impl Strategy<Value = (Vec<u64>, Vec<f64>)> {
    (1..max_len).prop_flat_map(|n| {
        (
            prop::collection::vec(prop_oneof![Just(0u64), 1u64..50], n),
            prop::collection::vec(0.0f64..20.0, n),
        )
    })
}

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// Sum of absolute periods-in-stock terms, the scale against which
/// cancellation error is measured.
fn pis_scale(ys: &[u64], fs: &[f64], t: usize) -> f64 {
    (0..t)
        .map(|i| (fs[i] - ys[i] as f64).abs() * (t - i) as f64)
        .sum::<f64>()
        .max(1.0)
}

pub fn rmse_dominates(cases: u32) -> Result<(), String> {
    run(
        cases,
        prop::collection::vec(-100.0f64..100.0, 1..200),
        |errs| {
            let s = scalar_errors(&errs).unwrap();
            prop_assert!(s.rmse * s.rmse >= s.me * s.me * (1.0 - 1e-12));
            prop_assert!(s.mae <= s.rmse * (1.0 + 1e-12));
            Ok(())
        },
    )
}

pub fn percent_best_bounds(cases: u32) -> Result<(), String> {
    let matrix = (1usize..6, 1usize..100).prop_flat_map(|(m, n)| {
        prop::collection::vec(
            prop::collection::vec(prop_oneof![Just(0.0f64), 0.0f64..5.0], n),
            m,
        )
    });
    run(cases, matrix, |matrix| {
        let pb = percent_best(&matrix).unwrap();
        prop_assert_eq!(pb.len(), matrix.len());
        for &p in &pb {
            prop_assert!((0.0..=100.0).contains(&p));
        }
        // Every period credits at least one method.
        prop_assert!(pb.iter().sum::<f64>() >= 100.0 - 1e-9);
        Ok(())
    })
}

pub fn streaming_matches_batch(cases: u32) -> Result<(), String> {
    run(cases, paired_series(300), |(ys, fs)| {
        let errs = error_series(&ys, &fs).unwrap();
        let mut acc = MetricsAccumulator::new();
        for (&y, &f) in ys.iter().zip(&fs) {
            acc.push(y, f);
        }
        prop_assert!(rel_close(
            acc.cfe(),
            cumulative_forecast_error(&errs),
            1e-12
        ));
        prop_assert!(rel_close(acc.cse(), cumulative_squared_error(&errs), 1e-12));
        prop_assert_eq!(
            acc.shortages() as usize,
            number_of_shortages(&ys, &errs).unwrap()
        );
        let pis = periods_in_stock(&ys, &fs, ys.len()).unwrap();
        prop_assert!((acc.periods_in_stock() - pis).abs() <= 1e-12 * pis_scale(&ys, &fs, ys.len()));
        let batch = scalar_errors(&errs).unwrap();
        let stream = acc.summary().unwrap();
        prop_assert!(rel_close(stream.me, batch.me, 1e-12));
        prop_assert!(rel_close(stream.mae, batch.mae, 1e-12));
        prop_assert!(rel_close(stream.rmse, batch.rmse, 1e-12));
        Ok(())
    })
}

pub fn merge_pools_sums(cases: u32) -> Result<(), String> {
    run(
        cases,
        (paired_series(300), 0.0f64..1.0),
        |((ys, fs), split)| {
            let cut = (split * ys.len() as f64) as usize;
            let (mut left, mut right, mut whole) = (
                MetricsAccumulator::new(),
                MetricsAccumulator::new(),
                MetricsAccumulator::new(),
            );
            for (i, (&y, &f)) in ys.iter().zip(&fs).enumerate() {
                if i < cut {
                    left.push(y, f)
                } else {
                    right.push(y, f)
                }
                whole.push(y, f);
            }
            left.merge(&right);
            prop_assert_eq!(left.count(), whole.count());
            prop_assert!(rel_close(left.cfe(), whole.cfe(), 1e-12));
            prop_assert!(rel_close(left.cse(), whole.cse(), 1e-12));
            let (a, b) = (left.summary().unwrap(), whole.summary().unwrap());
            prop_assert!(rel_close(a.mae, b.mae, 1e-12));
            prop_assert!(rel_close(a.rmse, b.rmse, 1e-12));
            Ok(())
        },
    )
}

pub fn periods_in_stock_recurrence(cases: u32) -> Result<(), String> {
    run(cases, paired_series(200), |(ys, fs)| {
        let mut prev = 0.0;
        let mut running_excess = 0.0;
        for t in 1..=ys.len() {
            running_excess += fs[t - 1] - ys[t - 1] as f64;
            let pis = periods_in_stock(&ys, &fs, t).unwrap();
            prop_assert!((pis - (prev + running_excess)).abs() <= 1e-12 * pis_scale(&ys, &fs, t));
            prev = pis;
        }
        Ok(())
    })
}
