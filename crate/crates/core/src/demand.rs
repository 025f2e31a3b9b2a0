//! Synthetic stochastic intermittent demand.
//!
//! A period carries nonzero demand with a scenario-dependent probability
//! (a Bernoulli occurrence); nonzero sizes follow the logarithmic
//! distribution `Pr[X = k] = -ell^k / (k ln(1 - ell))`, `k >= 1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Mass left uncovered by the inverse-CDF search before it gives up and
/// returns the current `k`.
const LOG_TAIL_CUTOFF: f64 = 1e-12;

/// Deterministic per-run random stream: the ChaCha key comes from `seed`
/// and `run` selects one of its 2^64 independent streams, so any run can be
/// regenerated without the others.
pub fn run_rng(seed: u64, run: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run);
    rng
}

/// Logarithmic distribution on `{1, 2, ...}` with parameter `ell` in (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogarithmicDist {
    ell: f64,
    // Pr[X = 1], cached because every draw starts from it.
    p1: f64,
}

impl LogarithmicDist {
    pub fn new(ell: f64) -> Result<Self> {
        if !(ell > 0.0 && ell < 1.0) {
            return Err(Error::domain(format!(
                "logarithmic parameter must lie in (0,1), got {ell}"
            )));
        }
        Ok(Self {
            ell,
            p1: -ell / (-ell).ln_1p(),
        })
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn pmf(&self, k: i64) -> Result<f64> {
        if k < 1 {
            return Err(Error::domain(format!(
                "logarithmic support starts at 1, got k = {k}"
            )));
        }
        let k = k as f64;
        Ok(-self.ell.powf(k) / (k * (-self.ell).ln_1p()))
    }

    /// Analytic mean `-ell / ((1 - ell) ln(1 - ell))`.
    pub fn mean(&self) -> f64 {
        self.p1 / (1.0 - self.ell)
    }

    /// Draws one size by sequential inverse-CDF search from `k = 1`.
    ///
    /// Consumes exactly one uniform from `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.random();
        let mut k = 1u64;
        let mut term = self.p1;
        let mut cdf = term;
        while u >= cdf && cdf < 1.0 - LOG_TAIL_CUTOFF && term > 0.0 {
            k += 1;
            term *= self.ell * (k - 1) as f64 / k as f64;
            cdf += term;
        }
        k
    }
}

/// Distribution of a nonzero demand size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SizeDistribution {
    Logarithmic(LogarithmicDist),
    /// Every nonzero demand has this size; consumes no randomness.
    Fixed(u64),
}

impl SizeDistribution {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            SizeDistribution::Logarithmic(d) => d.sample(rng),
            SizeDistribution::Fixed(size) => *size,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScenarioKind {
    Stationary,
    LinearDecrease,
    SuddenObsolescence,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [
        ScenarioKind::Stationary,
        ScenarioKind::LinearDecrease,
        ScenarioKind::SuddenObsolescence,
    ];

    /// Short name used on the command line and in output file names.
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Stationary => "stationary",
            ScenarioKind::LinearDecrease => "decreasing",
            ScenarioKind::SuddenObsolescence => "sudden",
        }
    }
}

impl std::str::FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "stationary" => Ok(ScenarioKind::Stationary),
            "decreasing" | "linear" | "linear-decrease" => Ok(ScenarioKind::LinearDecrease),
            "sudden" | "obsolescence" | "sudden-obsolescence" => {
                Ok(ScenarioKind::SuddenObsolescence)
            }
            other => Err(Error::config(format!("unknown scenario `{other}`"))),
        }
    }
}

impl std::fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Generative description of a demand process: an initialization window of
/// `init_len` periods followed by an evaluation window of `eval_len` periods.
///
/// The occurrence probability is `p0` throughout the initialization window;
/// any decline happens inside the evaluation window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemandScenario {
    kind: ScenarioKind,
    p0: f64,
    sizes: SizeDistribution,
    init_len: usize,
    eval_len: usize,
}

impl DemandScenario {
    pub fn new(
        kind: ScenarioKind,
        p0: f64,
        sizes: SizeDistribution,
        init_len: usize,
        eval_len: usize,
    ) -> Result<Self> {
        if !(p0 > 0.0 && p0 <= 1.0) {
            return Err(Error::domain(format!(
                "occurrence probability p0 must lie in (0,1], got {p0}"
            )));
        }
        if eval_len == 0 {
            return Err(Error::domain(
                "evaluation window must be at least one period",
            ));
        }
        if let SizeDistribution::Fixed(0) = sizes {
            return Err(Error::domain("fixed demand size must be at least 1"));
        }
        Ok(Self {
            kind,
            p0,
            sizes,
            init_len,
            eval_len,
        })
    }

    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn sizes(&self) -> SizeDistribution {
        self.sizes
    }

    pub fn init_len(&self) -> usize {
        self.init_len
    }

    pub fn eval_len(&self) -> usize {
        self.eval_len
    }

    pub fn len(&self) -> usize {
        self.init_len + self.eval_len
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// First absolute period index with zero demand probability under
    /// sudden obsolescence.
    pub fn obsolescence_index(&self) -> usize {
        self.init_len + self.eval_len / 2
    }

    pub fn demand_probability_at(&self, t: usize) -> Result<f64> {
        if t >= self.len() {
            return Err(Error::domain(format!(
                "period {t} outside scenario of length {}",
                self.len()
            )));
        }
        if t < self.init_len {
            return Ok(self.p0);
        }
        let i = t - self.init_len;
        let p = match self.kind {
            ScenarioKind::Stationary => self.p0,
            ScenarioKind::LinearDecrease => {
                if self.eval_len == 1 {
                    0.0
                } else {
                    let frac = i as f64 / (self.eval_len - 1) as f64;
                    (self.p0 * (1.0 - frac)).max(0.0)
                }
            }
            ScenarioKind::SuddenObsolescence => {
                if i < self.eval_len / 2 {
                    self.p0
                } else {
                    0.0
                }
            }
        };
        Ok(p)
    }

    /// Draws one series. Every period consumes one occurrence uniform; a size
    /// draw follows only when demand occurs.
    pub fn generate_series<R: Rng + ?Sized>(&self, rng: &mut R) -> DemandSeries {
        let values = (0..self.len())
            .map(|t| {
                let p = self
                    .demand_probability_at(t)
                    .expect("period index within scenario");
                let u: f64 = rng.random();
                if u < p {
                    self.sizes.sample(rng)
                } else {
                    0
                }
            })
            .collect();
        DemandSeries { values }
    }
}

/// One realized demand path (`y_t` per period).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandSeries {
    values: Vec<u64>,
}

impl DemandSeries {
    pub fn from_values(values: Vec<u64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
