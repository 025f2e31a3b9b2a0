//! Streaming one-step forecasters for intermittent demand.
//!
//! Every method keeps its state in a [`ForecasterState`] and is advanced one
//! period at a time with [`ForecasterState::step`]. The value returned after
//! observing `y_t` is the forecast for period `t + 1`.
//!
//! | kind     | updated on demand      | zero-demand forecast                  |
//! |----------|------------------------|---------------------------------------|
//! | `Ses`    | every period           | `y_hat` (decays by `1 - alpha`)       |
//! | `Cr`     | `y_hat`, `tau_hat`     | `y_hat / tau_hat` (held)              |
//! | `Sba`    | `y_hat`, `tau_hat`     | `(1 - beta/2) y_hat / tau_hat` (held) |
//! | `Sy`     | `y_hat`, `tau_hat`     | `(1 - beta/2) y_hat / (tau_hat - beta/2)` (held) |
//! | `LevSeg` | `f` from `y / tau`     | held                                  |
//! | `Tsb`    | `y_hat`; `p_hat` always| `p_hat y_hat`                         |
//! | `Hes`    | `y_hat`, `tau_hat`     | `y_hat / (tau_hat + beta tau / 2)`    |
//! | `Les`    | `y_hat`, `tau_hat`     | `(y_hat / tau_hat)(1 - beta tau / 2 tau_hat)^+` |

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Smoothing factors: `alpha` for demand sizes, `beta` for inter-demand
/// intervals (or the demand probability, for TSB).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingParams {
    alpha: f64,
    beta: f64,
}

impl SmoothingParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::domain(format!(
                    "smoothing factor {name} must lie in (0,1), got {v}"
                )));
            }
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ForecasterKind {
    /// Single exponential smoothing.
    Ses,
    /// Croston's method.
    Cr,
    /// Syntetos–Boylan approximation.
    Sba,
    /// Syntetos' bias-corrected variant.
    Sy,
    /// Levén–Segerstedt ratio smoothing.
    LevSeg,
    /// Teunter–Syntetos–Babai probability smoothing.
    Tsb,
    /// Hyperbolic-exponential smoothing.
    Hes,
    /// Linear-exponential smoothing.
    Les,
}

impl ForecasterKind {
    pub const ALL: [ForecasterKind; 8] = [
        ForecasterKind::Ses,
        ForecasterKind::Cr,
        ForecasterKind::Sba,
        ForecasterKind::Sy,
        ForecasterKind::LevSeg,
        ForecasterKind::Tsb,
        ForecasterKind::Hes,
        ForecasterKind::Les,
    ];

    /// The three methods that decay towards zero under obsolescence.
    pub const OBSOLESCENCE_AWARE: [ForecasterKind; 3] = [
        ForecasterKind::Tsb,
        ForecasterKind::Hes,
        ForecasterKind::Les,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ForecasterKind::Ses => "SES",
            ForecasterKind::Cr => "CR",
            ForecasterKind::Sba => "SBA",
            ForecasterKind::Sy => "SY",
            ForecasterKind::LevSeg => "LevSeg",
            ForecasterKind::Tsb => "TSB",
            ForecasterKind::Hes => "HES",
            ForecasterKind::Les => "LES",
        }
    }
}

impl fmt::Display for ForecasterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ForecasterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim();
        ForecasterKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(wanted))
            .ok_or_else(|| Error::config(format!("unknown forecaster `{wanted}`")))
    }
}

/// Raw state values used to start a forecaster somewhere other than the
/// default initialization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Levels {
    pub y_hat: f64,
    pub tau_hat: f64,
    pub tau: u64,
    pub p_hat: f64,
}

impl Default for Levels {
    fn default() -> Self {
        Self {
            y_hat: 1.0,
            tau_hat: 1.0,
            tau: 1,
            p_hat: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForecasterState {
    kind: ForecasterKind,
    params: SmoothingParams,
    y_hat: f64,
    tau_hat: f64,
    tau: u64,
    p_hat: f64,
    f: f64,
}

impl ForecasterState {
    /// Starts with `y_hat = tau_hat = tau = p_hat = 1`.
    pub fn new(kind: ForecasterKind, params: SmoothingParams) -> Self {
        Self::from_valid_levels(kind, params, Levels::default())
    }

    /// Starts from explicit levels; the forecast is the one the method would
    /// issue right after a demand with these levels.
    pub fn from_levels(
        kind: ForecasterKind,
        params: SmoothingParams,
        levels: Levels,
    ) -> Result<Self> {
        if !(levels.y_hat >= 0.0 && levels.y_hat.is_finite()) {
            return Err(Error::domain(format!(
                "y_hat must be finite and >= 0, got {}",
                levels.y_hat
            )));
        }
        if !(levels.tau_hat >= 1.0 && levels.tau_hat.is_finite()) {
            return Err(Error::domain(format!(
                "tau_hat must be finite and >= 1, got {}",
                levels.tau_hat
            )));
        }
        if levels.tau == 0 {
            return Err(Error::domain(
                "tau counts periods since the last demand and starts at 1",
            ));
        }
        if !(levels.p_hat > 0.0 && levels.p_hat <= 1.0) {
            return Err(Error::domain(format!(
                "p_hat must lie in (0,1], got {}",
                levels.p_hat
            )));
        }
        Ok(Self::from_valid_levels(kind, params, levels))
    }

    fn from_valid_levels(kind: ForecasterKind, params: SmoothingParams, levels: Levels) -> Self {
        let mut state = Self {
            kind,
            params,
            y_hat: levels.y_hat,
            tau_hat: levels.tau_hat,
            tau: levels.tau,
            p_hat: levels.p_hat,
            f: 0.0,
        };
        state.f = match kind {
            ForecasterKind::Ses => state.y_hat,
            ForecasterKind::Tsb => state.p_hat * state.y_hat,
            ForecasterKind::LevSeg => state.y_hat / state.tau_hat,
            _ => state.croston_forecast(),
        };
        state
    }

    pub fn kind(&self) -> ForecasterKind {
        self.kind
    }

    pub fn params(&self) -> SmoothingParams {
        self.params
    }

    pub fn y_hat(&self) -> f64 {
        self.y_hat
    }

    pub fn tau_hat(&self) -> f64 {
        self.tau_hat
    }

    pub fn tau(&self) -> u64 {
        self.tau
    }

    pub fn p_hat(&self) -> f64 {
        self.p_hat
    }

    /// Most recent forecast.
    pub fn forecast(&self) -> f64 {
        self.f
    }

    /// Advances one period with observed demand `y` and returns the new
    /// forecast.
    pub fn step(&mut self, y: u64) -> f64 {
        match self.kind {
            ForecasterKind::Ses => self.ses_step(y),
            ForecasterKind::Cr | ForecasterKind::Sba | ForecasterKind::Sy => {
                self.croston_family_step(y)
            }
            ForecasterKind::LevSeg => self.levseg_step(y),
            ForecasterKind::Tsb => self.tsb_step(y),
            ForecasterKind::Hes => self.hes_step(y),
            ForecasterKind::Les => self.les_step(y),
        }
        self.f
    }

    fn smooth_size(&mut self, y: u64) {
        let a = self.params.alpha;
        self.y_hat = a * y as f64 + (1.0 - a) * self.y_hat;
    }

    fn smooth_interval(&mut self) {
        let b = self.params.beta;
        self.tau_hat = b * self.tau as f64 + (1.0 - b) * self.tau_hat;
    }

    /// Forecast of CR, SBA or SY (and HES/LES at demand periods).
    fn croston_forecast(&self) -> f64 {
        let half_beta = self.params.beta / 2.0;
        match self.kind {
            ForecasterKind::Sba => (1.0 - half_beta) * self.y_hat / self.tau_hat,
            ForecasterKind::Sy => {
                let denom = self.tau_hat - half_beta;
                debug_assert!(denom > 0.0, "tau_hat >= 1 and beta < 1 keep this positive");
                (1.0 - half_beta) * self.y_hat / denom
            }
            _ => self.y_hat / self.tau_hat,
        }
    }

    fn ses_step(&mut self, y: u64) {
        self.smooth_size(y);
        self.f = self.y_hat;
    }

    fn croston_family_step(&mut self, y: u64) {
        if y > 0 {
            self.smooth_size(y);
            self.smooth_interval();
            self.tau = 1;
            self.f = self.croston_forecast();
        } else {
            self.tau += 1;
        }
    }

    fn levseg_step(&mut self, y: u64) {
        if y > 0 {
            let a = self.params.alpha;
            self.f = a * (y as f64 / self.tau as f64) + (1.0 - a) * self.f;
            self.tau = 1;
        } else {
            self.tau += 1;
        }
    }

    fn tsb_step(&mut self, y: u64) {
        let b = self.params.beta;
        let occurred = if y > 0 { 1.0 } else { 0.0 };
        // Clamped so long zero runs cannot underflow p_hat to 0 and rounding
        // cannot push it above 1.
        self.p_hat = (b * occurred + (1.0 - b) * self.p_hat).clamp(f64::MIN_POSITIVE, 1.0);
        if y > 0 {
            self.smooth_size(y);
        }
        self.f = self.p_hat * self.y_hat;
    }

    fn hes_step(&mut self, y: u64) {
        if y > 0 {
            self.smooth_size(y);
            self.smooth_interval();
            self.tau = 1;
            self.f = self.y_hat / self.tau_hat;
        } else {
            self.f = self.y_hat / (self.tau_hat + self.params.beta * self.tau as f64 / 2.0);
            self.tau += 1;
        }
    }

    fn les_step(&mut self, y: u64) {
        if y != 0 {
            self.smooth_size(y);
            self.smooth_interval();
            self.f = self.y_hat / self.tau_hat;
            self.tau = 1;
        } else {
            let decay = 1.0 - self.params.beta * self.tau as f64 / (2.0 * self.tau_hat);
            self.f = (self.y_hat / self.tau_hat) * decay.max(0.0);
            self.tau += 1;
        }
    }
}
