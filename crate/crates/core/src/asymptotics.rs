//! Error accumulated after an item becomes obsolete.
//!
//! From obsolescence onward demand is zero forever, so each forecast is an
//! error of `-f_t`. A method that starts the obsolete stretch with forecast
//! `f0` accumulates:
//!
//! | kind | forecast after `t` zero periods | CFE          | CSE                   |
//! |------|---------------------------------|--------------|-----------------------|
//! | TSB  | `f0 (1 - beta)^t`               | `f0 / beta`  | `(f0 / beta)^2`       |
//! | HES  | `f0 / (1 + t beta / 2 tau_hat0)`| divergent    | `2 f0^2 tau_hat0 / beta` |
//! | LES  | `f0 (1 - t beta / 2 tau_hat0)^+`| `f0 tau_hat0 / beta` | `2 f0^2 tau_hat0 / (3 beta)` |
//!
//! The table values are the customary first-order forms. The TSB squared
//! series actually sums to `f0^2 / (beta (2 - beta))`, see [`exact_tsb_sums`];
//! LES terminates after `ell = 2 tau_hat0 / beta` terms and has the exact
//! sums returned by [`exact_les_sums`].

use std::fmt;

use crate::error::{Error, Result};
use crate::forecasters::{ForecasterKind, ForecasterState, Levels, SmoothingParams};
use crate::metrics;

// alpha never matters once demand has stopped
const FROZEN_ALPHA: f64 = 0.5;

/// Relative slack allowed when checking that `2 tau_hat0 / beta` is integral.
const INTEGRAL_ELL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObsolescenceSetup {
    kind: ForecasterKind,
    f0: f64,
    tau_hat0: f64,
    beta: f64,
}

impl ObsolescenceSetup {
    pub fn new(kind: ForecasterKind, f0: f64, tau_hat0: f64, beta: f64) -> Result<Self> {
        if !ForecasterKind::OBSOLESCENCE_AWARE.contains(&kind) {
            return Err(Error::domain(format!(
                "{kind} never decays under obsolescence; use TSB, HES or LES"
            )));
        }
        if !(f0 > 0.0 && f0.is_finite()) {
            return Err(Error::domain(format!("f0 must be positive, got {f0}")));
        }
        if !(tau_hat0 >= 1.0 && tau_hat0.is_finite()) {
            return Err(Error::domain(format!(
                "tau_hat0 must be >= 1, got {tau_hat0}"
            )));
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::domain(format!("beta must lie in (0,1), got {beta}")));
        }
        Ok(Self {
            kind,
            f0,
            tau_hat0,
            beta,
        })
    }

    pub fn kind(&self) -> ForecasterKind {
        self.kind
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn tau_hat0(&self) -> f64 {
        self.tau_hat0
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `2 tau_hat0 / beta`, the number of nonzero LES forecasts.
    pub fn ell(&self) -> f64 {
        2.0 * self.tau_hat0 / self.beta
    }

    /// Forecaster frozen at obsolescence: its current forecast is `f0` and
    /// zero demand leaves `y_hat` and `tau_hat` untouched.
    pub fn frozen_forecaster(&self) -> ForecasterState {
        let params = SmoothingParams::new(FROZEN_ALPHA, self.beta).expect("validated beta");
        let levels = match self.kind {
            ForecasterKind::Tsb => Levels {
                y_hat: self.f0,
                p_hat: 1.0,
                ..Levels::default()
            },
            _ => Levels {
                y_hat: self.f0 * self.tau_hat0,
                tau_hat: self.tau_hat0,
                tau: 1,
                p_hat: 1.0,
            },
        };
        ForecasterState::from_levels(self.kind, params, levels).expect("validated levels")
    }

    /// Forecasts in force at obsolescence periods `0, 1, 2, ...`; term 0 is
    /// the forecast held when demand stopped.
    pub fn decay_forecasts(&self) -> DecayForecasts {
        DecayForecasts {
            state: self.frozen_forecaster(),
            started: false,
        }
    }
}

/// Infinite iterator over the forecasts of a frozen forecaster fed zeros.
#[derive(Debug, Clone)]
pub struct DecayForecasts {
    state: ForecasterState,
    started: bool,
}

impl Iterator for DecayForecasts {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if self.started {
            Some(self.state.step(0))
        } else {
            self.started = true;
            Some(self.state.forecast())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AsymptoticValue {
    Finite(f64),
    Divergent,
}

impl AsymptoticValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            AsymptoticValue::Finite(v) => Some(*v),
            AsymptoticValue::Divergent => None,
        }
    }
}

impl fmt::Display for AsymptoticValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsymptoticValue::Finite(v) => write!(f, "{v}"),
            AsymptoticValue::Divergent => f.write_str("inf"),
        }
    }
}

pub fn asymptotic_cfe(setup: &ObsolescenceSetup) -> AsymptoticValue {
    let ObsolescenceSetup {
        kind,
        f0,
        tau_hat0,
        beta,
    } = *setup;
    match kind {
        ForecasterKind::Tsb => AsymptoticValue::Finite(f0 / beta),
        ForecasterKind::Hes => AsymptoticValue::Divergent,
        ForecasterKind::Les => AsymptoticValue::Finite(f0 * tau_hat0 / beta),
        _ => unreachable!("setup kind validated at construction"),
    }
}

pub fn asymptotic_cse(setup: &ObsolescenceSetup) -> AsymptoticValue {
    let ObsolescenceSetup {
        kind,
        f0,
        tau_hat0,
        beta,
    } = *setup;
    match kind {
        ForecasterKind::Tsb => AsymptoticValue::Finite((f0 / beta).powi(2)),
        ForecasterKind::Hes => AsymptoticValue::Finite(2.0 * f0 * f0 * tau_hat0 / beta),
        ForecasterKind::Les => AsymptoticValue::Finite(2.0 * f0 * f0 * tau_hat0 / (3.0 * beta)),
        _ => unreachable!("setup kind validated at construction"),
    }
}

/// How [`exact_les_sums`] treats a non-integral `2 tau_hat0 / beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EllMode {
    /// Reject unless integral (to within 1e-9 relative).
    #[default]
    Strict,
    /// Round to the nearest integer.
    Round,
}

/// Exact finite LES sums for integral `ell`:
/// CFE `f0 (ell + 1) / 2`, CSE `(f0 / ell)^2 (ell^3/3 + ell^2/2 + ell/6)`.
pub fn exact_les_sums_for_ell(f0: f64, ell: u64) -> Result<(f64, f64)> {
    if ell == 0 {
        return Err(Error::domain("ell must be a positive integer"));
    }
    let l = ell as f64;
    let cfe = f0 * (l + 1.0) / 2.0;
    let cse = (f0 / l).powi(2) * (l.powi(3) / 3.0 + l * l / 2.0 + l / 6.0);
    Ok((cfe, cse))
}

pub fn exact_les_sums(setup: &ObsolescenceSetup, mode: EllMode) -> Result<(f64, f64)> {
    if setup.kind != ForecasterKind::Les {
        return Err(Error::domain(format!(
            "exact finite sums exist only for LES, not {}",
            setup.kind
        )));
    }
    let ell = setup.ell();
    let rounded = ell.round();
    if mode == EllMode::Strict && (ell - rounded).abs() > INTEGRAL_ELL_TOLERANCE * ell {
        return Err(Error::domain(format!(
            "2 tau_hat0 / beta = {ell} is not an integer"
        )));
    }
    exact_les_sums_for_ell(setup.f0, rounded as u64)
}

/// Exact geometric sums of the TSB decay: CFE `f0 / beta`,
/// CSE `f0^2 / (1 - (1 - beta)^2)`.
pub fn exact_tsb_sums(setup: &ObsolescenceSetup) -> Result<(f64, f64)> {
    if setup.kind != ForecasterKind::Tsb {
        return Err(Error::domain(format!(
            "geometric sums apply to TSB, not {}",
            setup.kind
        )));
    }
    let ObsolescenceSetup { f0, beta, .. } = *setup;
    Ok((f0 / beta, f0 * f0 / (beta * (2.0 - beta))))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayOutcome {
    /// Forecast in force at each obsolete period, starting with `f0`.
    pub trace: Vec<f64>,
    pub cfe: f64,
    pub cse: f64,
}

/// Feeds `horizon` zero demands to the frozen forecaster and accumulates
/// the forecasts (absolute errors) and their squares.
pub fn simulate_decay(setup: &ObsolescenceSetup, horizon: usize) -> Result<DecayOutcome> {
    if horizon == 0 {
        return Err(Error::domain("decay horizon must be at least one period"));
    }
    let trace: Vec<f64> = setup.decay_forecasts().take(horizon).collect();
    let (cfe, cse) = trace
        .iter()
        .fold((0.0, 0.0), |(c, s), &f| (c + f, s + f * f));
    Ok(DecayOutcome { trace, cfe, cse })
}

/// Truncated CFE and CSE without keeping the trace.
pub fn decay_sums(setup: &ObsolescenceSetup, horizon: u64) -> Result<(f64, f64)> {
    if horizon == 0 {
        return Err(Error::domain("decay horizon must be at least one period"));
    }
    Ok(setup
        .decay_forecasts()
        .take(horizon as usize)
        .fold((0.0, 0.0), |(c, s), f| (c + f, s + f * f)))
}

/// Smallest horizon at which the truncated CFE exceeds `bound`, searching up
/// to `max_horizon` periods.
pub fn horizon_exceeding_cfe(
    setup: &ObsolescenceSetup,
    bound: f64,
    max_horizon: u64,
) -> Option<u64> {
    let mut cfe = 0.0;
    for (t, f) in setup
        .decay_forecasts()
        .take(max_horizon as usize)
        .enumerate()
    {
        cfe += f;
        if cfe > bound {
            return Some(t as u64 + 1);
        }
    }
    None
}

/// Percent Best among several decaying forecasters over `horizon` obsolete
/// periods. With zero demand the absolute error is the forecast itself.
pub fn decay_percent_best(setups: &[ObsolescenceSetup], horizon: usize) -> Result<Vec<f64>> {
    let traces = setups
        .iter()
        .map(|s| simulate_decay(s, horizon).map(|o| o.trace))
        .collect::<Result<Vec<_>>>()?;
    metrics::percent_best(&traces)
}
