//! Forecast error measures.
//!
//! Errors are `e_t = y_t - f` where `f` is the forecast issued for period
//! `t`. Besides ME, MAE and RMSE this covers the cumulative measures that
//! stay informative when demand is mostly zero: cumulative forecast error
//! (CFE), cumulative squared error (CSE), number of shortages (NOS),
//! periods in stock (PIS) and Percent Best (PBt).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSummary {
    pub me: f64,
    pub mae: f64,
    pub rmse: f64,
}

/// `y_t - f_t` for aligned demand and forecast sequences.
pub fn error_series(demands: &[u64], forecasts: &[f64]) -> Result<Vec<f64>> {
    check_same_len(demands.len(), forecasts.len())?;
    Ok(demands
        .iter()
        .zip(forecasts)
        .map(|(&y, &f)| y as f64 - f)
        .collect())
}

pub fn scalar_errors(errs: &[f64]) -> Result<ErrorSummary> {
    if errs.is_empty() {
        return Err(Error::domain(
            "scalar error measures need at least one error",
        ));
    }
    let n = errs.len() as f64;
    let (sum, sum_abs, sum_sq) = errs.iter().fold((0.0, 0.0, 0.0), |(s, a, q), &e| {
        (s + e, a + e.abs(), q + e * e)
    });
    Ok(ErrorSummary {
        me: sum / n,
        mae: sum_abs / n,
        rmse: (sum_sq / n).sqrt(),
    })
}

pub fn cumulative_forecast_error(errs: &[f64]) -> f64 {
    errs.iter().sum()
}

pub fn cumulative_squared_error(errs: &[f64]) -> f64 {
    errs.iter().map(|e| e * e).sum()
}

/// Percentage of periods in which each method attains the smallest absolute
/// error. Every method tied for the minimum is credited, so the percentages
/// can add up to more than 100.
pub fn percent_best<S: AsRef<[f64]>>(abs_errors: &[S]) -> Result<Vec<f64>> {
    let Some(first) = abs_errors.first() else {
        return Err(Error::domain("percent best needs at least one method"));
    };
    let len = first.as_ref().len();
    if len == 0 {
        return Err(Error::domain("percent best needs at least one period"));
    }
    for s in abs_errors {
        check_same_len(len, s.as_ref().len())?;
    }
    let mut credited = vec![0usize; abs_errors.len()];
    for t in 0..len {
        let best = abs_errors
            .iter()
            .map(|s| s.as_ref()[t])
            .fold(f64::INFINITY, f64::min);
        for (count, s) in credited.iter_mut().zip(abs_errors) {
            if s.as_ref()[t] == best {
                *count += 1;
            }
        }
    }
    Ok(credited
        .into_iter()
        .map(|c| 100.0 * c as f64 / len as f64)
        .collect())
}

/// Periods with nonzero demand at which the running CFE is strictly positive.
pub fn number_of_shortages(demands: &[u64], errors: &[f64]) -> Result<usize> {
    check_same_len(demands.len(), errors.len())?;
    let mut cfe = 0.0;
    let mut count = 0;
    for (&y, &e) in demands.iter().zip(errors) {
        cfe += e;
        if cfe > 0.0 && y > 0 {
            count += 1;
        }
    }
    Ok(count)
}

/// `sum_{i=1..t} (f_i - y_i)(t + 1 - i)`.
pub fn periods_in_stock(demands: &[u64], forecasts: &[f64], t: usize) -> Result<f64> {
    check_same_len(demands.len(), forecasts.len())?;
    if t > demands.len() {
        return Err(Error::domain(format!(
            "periods in stock at t = {t} needs at least t periods, have {}",
            demands.len()
        )));
    }
    Ok(demands[..t]
        .iter()
        .zip(&forecasts[..t])
        .enumerate()
        .map(|(i, (&y, &f))| (f - y as f64) * (t - i) as f64)
        .sum())
}

fn check_same_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::domain(format!("length mismatch: {a} vs {b}")));
    }
    Ok(())
}

/// Streaming accumulation of (demand, forecast) pairs into every measure.
///
/// [`merge`](Self::merge) pools accumulators of independent runs: counts
/// and sums add, each run keeps its own running CFE for shortages and its
/// own periods-in-stock clock.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MetricsAccumulator {
    n: u64,
    sum_e: f64,
    sum_abs_e: f64,
    sum_sq_e: f64,
    nos: u64,
    // sum of (f - y) so far; the PIS increment of the current period
    excess: f64,
    pis: f64,
}

impl MetricsAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, demand: u64, forecast: f64) {
        let e = demand as f64 - forecast;
        self.n += 1;
        self.sum_e += e;
        self.sum_abs_e += e.abs();
        self.sum_sq_e += e * e;
        if self.sum_e > 0.0 && demand > 0 {
            self.nos += 1;
        }
        self.excess -= e;
        self.pis += self.excess;
    }

    pub fn merge(&mut self, other: &MetricsAccumulator) {
        self.n += other.n;
        self.sum_e += other.sum_e;
        self.sum_abs_e += other.sum_abs_e;
        self.sum_sq_e += other.sum_sq_e;
        self.nos += other.nos;
        self.excess += other.excess;
        self.pis += other.pis;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn summary(&self) -> Result<ErrorSummary> {
        if self.n == 0 {
            return Err(Error::domain("no errors accumulated"));
        }
        let n = self.n as f64;
        Ok(ErrorSummary {
            me: self.sum_e / n,
            mae: self.sum_abs_e / n,
            rmse: (self.sum_sq_e / n).sqrt(),
        })
    }

    pub fn cfe(&self) -> f64 {
        self.sum_e
    }

    pub fn cse(&self) -> f64 {
        self.sum_sq_e
    }

    pub fn shortages(&self) -> u64 {
        self.nos
    }

    pub fn periods_in_stock(&self) -> f64 {
        self.pis
    }
}
