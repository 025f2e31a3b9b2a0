//! Intermittent demand forecasting with obsolescence.
//!
//! The crate provides the Croston family of forecasters (SES, CR, SBA, SY,
//! Levén–Segerstedt, TSB, HES and LES) as streaming state machines, a
//! synthetic demand generator with Bernoulli occurrences and logarithmic
//! sizes, the usual error measures plus the cumulative intermittent-demand
//! measures, closed-form asymptotic obsolescence errors, and a seeded
//! Monte-Carlo harness that sweeps smoothing-factor grids.
//!
//! ```
//! use intermittent::{ForecasterKind, ForecasterState, SmoothingParams};
//!
//! let params = SmoothingParams::new(0.1, 0.1).unwrap();
//! let mut les = ForecasterState::new(ForecasterKind::Les, params);
//! assert_eq!(les.step(5), 1.4);
//! for _ in 0..40 {
//!     les.step(0);
//! }
//! assert_eq!(les.forecast(), 0.0);
//! ```

pub mod asymptotics;
pub mod demand;
pub mod error;
pub mod forecasters;
pub mod harness;
pub mod metrics;

pub use asymptotics::{AsymptoticValue, DecayOutcome, ObsolescenceSetup};
pub use demand::{DemandScenario, DemandSeries, LogarithmicDist, ScenarioKind, SizeDistribution};
pub use error::{Error, Result};
pub use forecasters::{ForecasterKind, ForecasterState, SmoothingParams};
pub use harness::{ExperimentConfig, ResultRow, ResultTable};
pub use metrics::{ErrorSummary, MetricsAccumulator};
