//! Seeded Monte-Carlo experiments over smoothing-factor grids.
//!
//! For every `(scenario, ell, p0)` combination and every run, one demand
//! series is drawn from the run's own stream (see [`run_rng`]) and shared by all
//! `(alpha, beta, method)` cells. Each forecaster is warmed up on the
//! initialization window and scored on the evaluation window; per-run ME,
//! MAE and RMSE are then averaged over runs in run order, so the output does
//! not depend on how runs are spread over threads.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::demand::{
    run_rng, DemandScenario, DemandSeries, LogarithmicDist, ScenarioKind, SizeDistribution,
};
use crate::error::{Error, Result};
use crate::forecasters::{ForecasterKind, ForecasterState, SmoothingParams};
use crate::metrics::{ErrorSummary, MetricsAccumulator};

/// Which forecast a period's error is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Alignment {
    /// `e_t = y_t - f_{t-1}`: the forecast made before `y_t` was seen.
    #[default]
    OneStepAhead,
    /// `e_t = y_t - f_t`: the forecast updated with `y_t` itself.
    SamePeriod,
}

impl FromStr for Alignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "one-step-ahead" | "ahead" => Ok(Alignment::OneStepAhead),
            "same-period" | "same" => Ok(Alignment::SamePeriod),
            other => Err(Error::config(format!("unknown alignment `{other}`"))),
        }
    }
}

impl Alignment {
    pub fn name(&self) -> &'static str {
        match self {
            Alignment::OneStepAhead => "one-step-ahead",
            Alignment::SamePeriod => "same-period",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenarios: Vec<ScenarioKind>,
    pub p0: Vec<f64>,
    pub ell: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    pub beta_grid: Vec<f64>,
    pub methods: Vec<ForecasterKind>,
    pub runs: u64,
    pub init_len: usize,
    pub eval_len: usize,
    pub seed: u64,
    pub alignment: Alignment,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenarios: ScenarioKind::ALL.to_vec(),
            p0: vec![0.2, 0.5],
            ell: vec![0.001, 0.9],
            alpha_grid: vec![0.1, 0.2, 0.3],
            beta_grid: vec![0.01, 0.02, 0.03, 0.04, 0.05, 0.1, 0.2, 0.3],
            methods: ForecasterKind::OBSOLESCENCE_AWARE.to_vec(),
            runs: 1000,
            init_len: 1000,
            eval_len: 1000,
            seed: 0,
            alignment: Alignment::OneStepAhead,
        }
    }
}

pub const CONFIG_KEYS: [&str; 11] = [
    "scenario",
    "p0",
    "ell",
    "alpha_grid",
    "beta_grid",
    "methods",
    "runs",
    "init_len",
    "eval_len",
    "seed",
    "alignment",
];

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| Error::config(format!("{key}: cannot parse `{s}`")))
        })
        .collect()
}

fn parse_one<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse::<T>()
        .map_err(|_| Error::config(format!("{key}: cannot parse `{}`", value.trim())))
}

impl ExperimentConfig {
    /// Parses flat `key = value` text on top of the defaults. Lists are
    /// comma-separated; `#` starts a comment.
    pub fn from_config_text(text: &str) -> Result<Self> {
        let mut config = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("line {}: expected key = value", lineno + 1))
            })?;
            config.set(key.trim(), value)?;
        }
        Ok(config)
    }

    pub fn from_config_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_config_text(&text)
    }

    /// Overrides one key. Keys accept `-` or `_` as separator.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.replace('-', "_").as_str() {
            "scenario" | "scenarios" => self.scenarios = parse_list(key, value)?,
            "p0" => self.p0 = parse_list(key, value)?,
            "ell" => self.ell = parse_list(key, value)?,
            "alpha_grid" | "alpha" => self.alpha_grid = parse_list(key, value)?,
            "beta_grid" | "beta" => self.beta_grid = parse_list(key, value)?,
            "methods" => self.methods = parse_list(key, value)?,
            "runs" => self.runs = parse_one(key, value)?,
            "init_len" => self.init_len = parse_one(key, value)?,
            "eval_len" => self.eval_len = parse_one(key, value)?,
            "seed" => self.seed = parse_one(key, value)?,
            "alignment" => self.alignment = parse_one(key, value)?,
            other => return Err(Error::config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let nonempty = [
            ("scenario", self.scenarios.is_empty()),
            ("p0", self.p0.is_empty()),
            ("ell", self.ell.is_empty()),
            ("alpha_grid", self.alpha_grid.is_empty()),
            ("beta_grid", self.beta_grid.is_empty()),
            ("methods", self.methods.is_empty()),
        ];
        if let Some((key, _)) = nonempty.iter().find(|(_, empty)| *empty) {
            return Err(Error::config(format!("{key} must not be empty")));
        }
        if self.runs == 0 {
            return Err(Error::config("runs must be at least 1"));
        }
        if self.eval_len == 0 {
            return Err(Error::config("eval_len must be at least 1"));
        }
        for &p in &self.p0 {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::config(format!("p0 must lie in (0,1], got {p}")));
            }
        }
        for &l in &self.ell {
            LogarithmicDist::new(l).map_err(|e| Error::config(e.to_string()))?;
        }
        for &a in &self.alpha_grid {
            for &b in &self.beta_grid {
                SmoothingParams::new(a, b).map_err(|e| Error::config(e.to_string()))?;
            }
        }
        Ok(())
    }

    /// The grid in output order: ascending alpha, then ascending beta.
    fn cells(&self) -> Vec<(SmoothingParams, ForecasterKind)> {
        let alphas = sorted_unique(&self.alpha_grid);
        let betas = sorted_unique(&self.beta_grid);
        let mut cells = Vec::with_capacity(alphas.len() * betas.len() * self.methods.len());
        for &a in &alphas {
            for &b in &betas {
                let params = SmoothingParams::new(a, b).expect("validated grid");
                cells.extend(self.methods.iter().map(|&m| (params, m)));
            }
        }
        cells
    }

    fn scenario(&self, kind: ScenarioKind, ell: f64, p0: f64) -> Result<DemandScenario> {
        let sizes = SizeDistribution::Logarithmic(LogarithmicDist::new(ell)?);
        DemandScenario::new(kind, p0, sizes, self.init_len, self.eval_len)
    }
}

fn sorted_unique(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResultRow {
    pub alpha: f64,
    pub beta: f64,
    pub method: ForecasterKind,
    pub errors: ErrorSummary,
}

/// Averaged errors for one `(scenario, ell, p0)` combination.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub scenario: ScenarioKind,
    pub ell: f64,
    pub p0: f64,
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    /// `<scenario>_l<ell>_p<p0>.csv`
    pub fn file_name(&self) -> String {
        format!("{}_l{}_p{}.csv", self.scenario.name(), self.ell, self.p0)
    }

    pub fn row(&self, alpha: f64, beta: f64, method: ForecasterKind) -> Option<&ResultRow> {
        self.rows
            .iter()
            .find(|r| r.alpha == alpha && r.beta == beta && r.method == method)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,beta,method,ME,MAE,RMSE\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.alpha,
                r.beta,
                r.method,
                fmt_cell(r.errors.me),
                fmt_cell(r.errors.mae),
                fmt_cell(r.errors.rmse)
            );
        }
        out
    }
}

/// Four decimals, without a `-0.0000`.
pub fn fmt_cell(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".to_string()
    } else {
        s
    }
}

/// Seventeen significant digits.
pub fn fmt_full(v: f64) -> String {
    format!("{v:.16e}")
}

/// Scores every cell on one demand series; one summary per cell.
fn score_series(
    series: &DemandSeries,
    init_len: usize,
    cells: &[(SmoothingParams, ForecasterKind)],
    alignment: Alignment,
) -> Vec<ErrorSummary> {
    let (warmup, eval) = series.values().split_at(init_len);
    cells
        .iter()
        .map(|&(params, kind)| {
            let mut state = ForecasterState::new(kind, params);
            for &y in warmup {
                state.step(y);
            }
            let mut acc = MetricsAccumulator::new();
            for &y in eval {
                match alignment {
                    Alignment::OneStepAhead => {
                        acc.push(y, state.forecast());
                        state.step(y);
                    }
                    Alignment::SamePeriod => {
                        let f = state.step(y);
                        acc.push(y, f);
                    }
                }
            }
            acc.summary().expect("evaluation window is non-empty")
        })
        .collect()
}

/// Runs `runs` replications of `scenario` over `cells` and returns the
/// run-averaged errors per cell.
fn run_cells(
    scenario: &DemandScenario,
    cells: &[(SmoothingParams, ForecasterKind)],
    runs: u64,
    seed: u64,
    alignment: Alignment,
) -> Vec<ErrorSummary> {
    let per_run: Vec<Vec<ErrorSummary>> = (0..runs)
        .into_par_iter()
        .map(|run| {
            let series = scenario.generate_series(&mut run_rng(seed, run));
            score_series(&series, scenario.init_len(), cells, alignment)
        })
        .collect();

    let mut totals = vec![(0.0, 0.0, 0.0); cells.len()];
    for run in &per_run {
        for (t, s) in totals.iter_mut().zip(run) {
            t.0 += s.me;
            t.1 += s.mae;
            t.2 += s.rmse;
        }
    }
    let n = runs as f64;
    totals
        .into_iter()
        .map(|(me, mae, rmse)| ErrorSummary {
            me: me / n,
            mae: mae / n,
            rmse: rmse / n,
        })
        .collect()
}

/// Run-averaged ME/MAE/RMSE for a single `(alpha, beta, method)` cell.
pub fn run_cell(
    config: &ExperimentConfig,
    params: SmoothingParams,
    method: ForecasterKind,
    scenario: &DemandScenario,
) -> Result<ErrorSummary> {
    if config.runs == 0 {
        return Err(Error::config("runs must be at least 1"));
    }
    Ok(run_cells(
        scenario,
        &[(params, method)],
        config.runs,
        config.seed,
        config.alignment,
    )[0])
}

/// One table per `(scenario, ell, p0)`, in configuration order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultTable>> {
    config.validate()?;
    let cells = config.cells();
    let mut tables = Vec::new();
    for &kind in &config.scenarios {
        for &ell in &config.ell {
            for &p0 in &config.p0 {
                let scenario = config.scenario(kind, ell, p0)?;
                let summaries = run_cells(
                    &scenario,
                    &cells,
                    config.runs,
                    config.seed,
                    config.alignment,
                );
                let rows = cells
                    .iter()
                    .zip(summaries)
                    .map(|(&(params, method), errors)| ResultRow {
                        alpha: params.alpha(),
                        beta: params.beta(),
                        method,
                        errors,
                    })
                    .collect();
                tables.push(ResultTable {
                    scenario: kind,
                    ell,
                    p0,
                    rows,
                });
            }
        }
    }
    Ok(tables)
}

/// Writes each table to `dir/<file_name>` and returns the written paths.
pub fn write_tables(tables: &[ResultTable], dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    tables
        .iter()
        .map(|t| {
            let path = dir.join(t.file_name());
            fs::write(&path, t.to_csv()).map_err(|e| Error::io(&path, e))?;
            Ok(path)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Me,
    Mae,
    Rmse,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Me, Measure::Mae, Measure::Rmse];

    pub fn name(&self) -> &'static str {
        match self {
            Measure::Me => "ME",
            Measure::Mae => "MAE",
            Measure::Rmse => "RMSE",
        }
    }

    /// Smaller is better; ME is judged by magnitude.
    fn score(&self, e: &ErrorSummary) -> f64 {
        match self {
            Measure::Me => e.me.abs(),
            Measure::Mae => e.mae,
            Measure::Rmse => e.rmse,
        }
    }
}

/// Method holding the best value of each measure over a table's grid.
pub fn table_winners(table: &ResultTable) -> Vec<(Measure, ForecasterKind)> {
    Measure::ALL
        .iter()
        .filter_map(|&m| {
            table
                .rows
                .iter()
                .min_by(|a, b| m.score(&a.errors).total_cmp(&m.score(&b.errors)))
                .map(|r| (m, r.method))
        })
        .collect()
}

/// Per scenario and measure, the methods that win the most tables.
pub fn winner_summary(tables: &[ResultTable]) -> Vec<(ScenarioKind, Measure, Vec<ForecasterKind>)> {
    let scenarios: BTreeSet<ScenarioKind> = tables.iter().map(|t| t.scenario).collect();
    let mut out = Vec::new();
    for scenario in scenarios {
        for measure in Measure::ALL {
            let mut wins: Vec<(ForecasterKind, usize)> = Vec::new();
            for t in tables.iter().filter(|t| t.scenario == scenario) {
                for (m, k) in table_winners(t) {
                    if m != measure {
                        continue;
                    }
                    match wins.iter_mut().find(|(w, _)| *w == k) {
                        Some((_, c)) => *c += 1,
                        None => wins.push((k, 1)),
                    }
                }
            }
            let top = wins.iter().map(|(_, c)| *c).max().unwrap_or(0);
            let mut best: Vec<ForecasterKind> = wins
                .into_iter()
                .filter(|(_, c)| *c == top)
                .map(|(k, _)| k)
                .collect();
            best.sort();
            out.push((scenario, measure, best));
        }
    }
    out
}

/// Per-period demand and forecasts of several methods on one series.
///
/// Row `t` holds `y_t` and each method's forecast after observing `y_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub demand: Vec<u64>,
    pub methods: Vec<ForecasterKind>,
    pub forecasts: Vec<Vec<f64>>,
}

impl Trace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,demand");
        for m in &self.methods {
            out.push(',');
            out.push_str(m.name());
        }
        out.push('\n');
        for (t, y) in self.demand.iter().enumerate() {
            let _ = write!(out, "{t},{y}");
            for col in &self.forecasts {
                out.push(',');
                out.push_str(&fmt_full(col[t]));
            }
            out.push('\n');
        }
        out
    }

    pub fn column(&self, method: ForecasterKind) -> Option<&[f64]> {
        self.methods
            .iter()
            .position(|&m| m == method)
            .map(|i| self.forecasts[i].as_slice())
    }
}

/// Plotting setup: one demand series, several methods; TSB may use its own
/// (typically smaller) `beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceConfig {
    pub scenario: ScenarioKind,
    pub p0: f64,
    pub sizes: SizeDistribution,
    pub methods: Vec<ForecasterKind>,
    pub alpha: f64,
    pub beta: f64,
    pub tsb_beta: f64,
    pub seed: u64,
    pub horizon: usize,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioKind::SuddenObsolescence,
            p0: 0.25,
            sizes: SizeDistribution::Fixed(1),
            methods: vec![
                ForecasterKind::Sba,
                ForecasterKind::Tsb,
                ForecasterKind::Hes,
                ForecasterKind::Les,
            ],
            alpha: 0.1,
            beta: 0.1,
            tsb_beta: 0.02,
            seed: 0,
            horizon: 200,
        }
    }
}

pub fn trace_forecasts(config: &TraceConfig) -> Result<Trace> {
    if config.methods.is_empty() {
        return Err(Error::config("methods must not be empty"));
    }
    let scenario = DemandScenario::new(config.scenario, config.p0, config.sizes, 0, config.horizon)
        .map_err(|e| Error::config(e.to_string()))?;
    let params = SmoothingParams::new(config.alpha, config.beta)
        .map_err(|e| Error::config(e.to_string()))?;
    let tsb_params = SmoothingParams::new(config.alpha, config.tsb_beta)
        .map_err(|e| Error::config(e.to_string()))?;
    let series = scenario.generate_series(&mut run_rng(config.seed, 0));
    let forecasts = config
        .methods
        .iter()
        .map(|&m| {
            let p = if m == ForecasterKind::Tsb {
                tsb_params
            } else {
                params
            };
            let mut state = ForecasterState::new(m, p);
            series.values().iter().map(|&y| state.step(y)).collect()
        })
        .collect();
    Ok(Trace {
        demand: series.values().to_vec(),
        methods: config.methods.clone(),
        forecasts,
    })
}

pub fn write_trace(trace: &Trace, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, trace.to_csv()).map_err(|e| Error::io(path, e))
}
