//! Parameter sweeps: config files, the result table and its CSV/JSON forms.
//!
//! Config files are `key = value` lines; `#` starts a comment. Angles may be
//! written in radians or as multiples of π with a `pi:` prefix (`pi:0.8`).
//!
//! ```text
//! name    = fig2a
//! mode    = fidelity_vs_delta
//! target  = pi:0.8, pi:1.1, pi:1.6
//! error   = pi:0.5, pi:0.1, pi:0.09; pi:0.5, 0, 0
//! axis    = delta
//! start   = pi:-0.5
//! stop    = pi:0.5
//! steps   = 101
//! outputs = f_ori_analytic, f_ori_numeric, f_best_analytic, f_best_numeric
//! ```
//!
//! `error` lists one or more `θx, φx, λx` triples separated by `;`. With more
//! than one, every output column is repeated per error model with a `_1`,
//! `_2`, ... suffix. In the `*_vs_delta` modes the swept δ replaces θx.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::decomposition::{decomposition_unchecked, XErrorModel};
use crate::error::{Error, Result};
use crate::fidelity::{
    average_best_fidelity, average_original_fidelity, best_fidelity_analytic,
    original_fidelity_analytic, original_fidelity_special_case, process_fidelity,
    DEFAULT_QUADRATURE_POINTS,
};
use crate::mitigation::{mitigate_closed_form, mitigate_numeric, SearchConfig};
use crate::su2::{u3, GateParams};
use crate::universality::{universality_analytic, universality_monte_carlo, UniversalityReport};

/// Largest accepted gap between an analytic column and its matrix-based twin.
pub const ANALYTIC_CHECK_TOL: f64 = 1e-9;
/// Largest accepted gap when one side of the pair comes from the optimizer.
pub const OPTIMIZER_CHECK_TOL: f64 = 1e-6;

/// Parses an angle given in radians or as `pi:<multiple>`.
pub fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("cannot parse `{s}` as an angle"))
    };
    let v = match s.strip_prefix("pi:") {
        Some(rest) => parse(rest)? * PI,
        None => parse(s)?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("angle `{s}` is not finite"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// Fixed target, θx = π/2 + δ swept.
    FidelityVsDelta,
    /// Target moves along `θ = a·π·x, φ = b·π·x, λ = c·π·x`, fixed error.
    FidelityVsX,
    UniversalityVsDelta,
    AverageFidelityVsDelta,
}

impl SweepMode {
    fn axis_name(self) -> &'static str {
        match self {
            SweepMode::FidelityVsX => "x",
            _ => "delta",
        }
    }

    fn allows(self, c: Column) -> bool {
        use Column::*;
        match self {
            SweepMode::FidelityVsDelta | SweepMode::FidelityVsX => matches!(
                c,
                FOriAnalytic
                    | FOriNumeric
                    | FOriSpecial
                    | FBestAnalytic
                    | FBestNumeric
                    | FBestMitigated
                    | UnAnalytic
            ),
            SweepMode::UniversalityVsDelta => {
                matches!(c, UnAnalytic | UnMonteCarlo | UnStderr)
            }
            SweepMode::AverageFidelityVsDelta => {
                matches!(c, FOriAverage | FBestAverage | UnAnalytic)
            }
        }
    }
}

impl FromStr for SweepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "fidelity_vs_delta" => Ok(SweepMode::FidelityVsDelta),
            "fidelity_vs_x" => Ok(SweepMode::FidelityVsX),
            "universality_vs_delta" => Ok(SweepMode::UniversalityVsDelta),
            "average_fidelity_vs_delta" => Ok(SweepMode::AverageFidelityVsDelta),
            other => Err(Error::config("mode", format!("unknown mode `{other}`"))),
        }
    }
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepMode::FidelityVsDelta => "fidelity_vs_delta",
            SweepMode::FidelityVsX => "fidelity_vs_x",
            SweepMode::UniversalityVsDelta => "universality_vs_delta",
            SweepMode::AverageFidelityVsDelta => "average_fidelity_vs_delta",
        })
    }
}

/// One output quantity evaluated at every grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    /// Closed-form original fidelity.
    FOriAnalytic,
    /// Original fidelity from the five-matrix product.
    FOriNumeric,
    /// Reduced formula for the special error patterns.
    FOriSpecial,
    FBestAnalytic,
    /// Best fidelity found by the numeric search.
    FBestNumeric,
    /// Fidelity of the closed-form mitigation, evaluated on matrices.
    FBestMitigated,
    UnAnalytic,
    UnMonteCarlo,
    UnStderr,
    FOriAverage,
    FBestAverage,
}

impl Column {
    pub const ALL: [Column; 11] = [
        Column::FOriAnalytic,
        Column::FOriNumeric,
        Column::FOriSpecial,
        Column::FBestAnalytic,
        Column::FBestNumeric,
        Column::FBestMitigated,
        Column::UnAnalytic,
        Column::UnMonteCarlo,
        Column::UnStderr,
        Column::FOriAverage,
        Column::FBestAverage,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::FOriAnalytic => "f_ori_analytic",
            Column::FOriNumeric => "f_ori_numeric",
            Column::FOriSpecial => "f_ori_special",
            Column::FBestAnalytic => "f_best_analytic",
            Column::FBestNumeric => "f_best_numeric",
            Column::FBestMitigated => "f_best_mitigated",
            Column::UnAnalytic => "un_analytic",
            Column::UnMonteCarlo => "un_monte_carlo",
            Column::UnStderr => "un_stderr",
            Column::FOriAverage => "f_ori_average",
            Column::FBestAverage => "f_best_average",
        }
    }
}

impl FromStr for Column {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Column::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::config("outputs", format!("unknown column `{}`", s.trim())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TargetSpec {
    Fixed(GateParams),
    /// Multiples of π per unit of the sweep variable `x`.
    Path {
        theta_scale: f64,
        phi_scale: f64,
        lambda_scale: f64,
    },
}

impl TargetSpec {
    fn at(&self, x: f64) -> GateParams {
        match *self {
            TargetSpec::Fixed(p) => p,
            TargetSpec::Path {
                theta_scale,
                phi_scale,
                lambda_scale,
            } => GateParams::new(
                theta_scale * PI * x,
                phi_scale * PI * x,
                lambda_scale * PI * x,
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepAxis {
    /// Evenly spaced values from `start` to `stop`, both included.
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub name: String,
    pub mode: SweepMode,
    pub target: TargetSpec,
    pub errors: Vec<XErrorModel>,
    pub axis: SweepAxis,
    pub outputs: Vec<Column>,
    pub seed: u64,
    pub mc_samples: usize,
    pub quadrature_points: usize,
    pub search: SearchConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            name: "sweep".into(),
            mode: SweepMode::FidelityVsDelta,
            target: TargetSpec::Fixed(GateParams::new(FRAC_PI_2, 0.0, 0.0)),
            errors: vec![XErrorModel::ideal()],
            axis: SweepAxis {
                name: "delta".into(),
                start: -FRAC_PI_2,
                stop: FRAC_PI_2,
                steps: 11,
            },
            outputs: vec![Column::FOriAnalytic, Column::FOriNumeric],
            seed: 0,
            mc_samples: 100_000,
            quadrature_points: DEFAULT_QUADRATURE_POINTS,
            search: SearchConfig::default(),
        }
    }
}

fn parse_list<T>(
    field: &str,
    s: &str,
    f: impl Fn(&str) -> std::result::Result<T, String>,
) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| f(x).map_err(|m| Error::config(field, m)))
        .collect()
}

fn parse_triple(field: &str, s: &str) -> Result<[f64; 3]> {
    let v = parse_list(field, s, parse_angle)?;
    <[f64; 3]>::try_from(v.as_slice()).map_err(|_| {
        Error::config(
            field,
            format!("expected three comma-separated values, got `{s}`"),
        )
    })
}

fn parse_num<T: FromStr>(field: &str, s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::config(field, format!("cannot parse `{}`", s.trim())))
}

impl SweepConfig {
    /// Parses a config file on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SweepConfig::default();
        let mut axis_seen = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::config(
                    format!("line {}", lineno + 1),
                    format!("expected `key = value`, got `{line}`"),
                )
            })?;
            if k.trim() == "axis" {
                axis_seen = true;
            }
            cfg.set(k.trim(), v.trim())?;
        }
        if !axis_seen {
            cfg.axis.name = cfg.mode.axis_name().into();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies a single `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "name" => self.name = value.to_string(),
            "mode" => self.mode = value.parse()?,
            "target" => {
                let [t, p, l] = parse_triple(key, value)?;
                self.target = TargetSpec::Fixed(GateParams::new(t, p, l));
            }
            "path" => {
                let v = parse_list(key, value, |s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| format!("cannot parse `{}`", s.trim()))
                })?;
                let [a, b, c] = <[f64; 3]>::try_from(v.as_slice())
                    .map_err(|_| Error::config(key, "expected three comma-separated scales"))?;
                self.target = TargetSpec::Path {
                    theta_scale: a,
                    phi_scale: b,
                    lambda_scale: c,
                };
            }
            "error" => {
                self.errors = value
                    .split(';')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse_triple(key, s).map(|[t, p, l]| XErrorModel::new(t, p, l)))
                    .collect::<Result<_>>()?;
            }
            "axis" => self.axis.name = value.to_string(),
            "start" => self.axis.start = parse_angle(value).map_err(|m| Error::config(key, m))?,
            "stop" => self.axis.stop = parse_angle(value).map_err(|m| Error::config(key, m))?,
            "steps" => self.axis.steps = parse_num(key, value)?,
            "outputs" => {
                self.outputs = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<_>>()?
            }
            "seed" => self.seed = parse_num(key, value)?,
            "mc_samples" => self.mc_samples = parse_num(key, value)?,
            "quadrature_points" => self.quadrature_points = parse_num(key, value)?,
            "search.grid" => self.search.grid_per_axis = parse_num(key, value)?,
            "search.tol" => self.search.tol = parse_num(key, value)?,
            "search.max_iters" => self.search.max_iters = parse_num(key, value)?,
            "search.seed" => self.search.rng_seed = parse_num(key, value)?,
            other => return Err(Error::config(other, "unknown key")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.axis.name != self.mode.axis_name() {
            return Err(Error::config(
                "axis",
                format!(
                    "mode {} sweeps `{}`, not `{}`",
                    self.mode,
                    self.mode.axis_name(),
                    self.axis.name
                ),
            ));
        }
        if self.axis.steps < 2 {
            return Err(Error::config("steps", "need at least 2 steps"));
        }
        if self.axis.start.is_nan() || self.axis.stop.is_nan() || self.axis.start >= self.axis.stop
        {
            return Err(Error::config("start", "start must be below stop"));
        }
        if self.errors.is_empty() {
            return Err(Error::config(
                "error",
                "at least one error model is required",
            ));
        }
        if self.errors.iter().any(|e| !e.is_finite()) {
            return Err(Error::config("error", "error parameters must be finite"));
        }
        if self.outputs.is_empty() {
            return Err(Error::config("outputs", "no output columns selected"));
        }
        for c in &self.outputs {
            if !self.mode.allows(*c) {
                return Err(Error::config(
                    "outputs",
                    format!(
                        "column `{}` is not available in mode {}",
                        c.name(),
                        self.mode
                    ),
                ));
            }
        }
        match (self.mode, &self.target) {
            (SweepMode::FidelityVsX, TargetSpec::Fixed(_)) => {
                return Err(Error::config("path", "fidelity_vs_x needs a `path`"))
            }
            (SweepMode::FidelityVsDelta, TargetSpec::Path { .. }) => {
                return Err(Error::config(
                    "target",
                    "fidelity_vs_delta needs a fixed `target`",
                ))
            }
            (_, TargetSpec::Fixed(p)) if !p.is_finite() => {
                return Err(Error::config("target", "target must be finite"))
            }
            _ => {}
        }
        let wants_mc = self.outputs.contains(&Column::UnMonteCarlo)
            || self.outputs.contains(&Column::UnStderr);
        if wants_mc && self.mc_samples < crate::universality::MIN_MC_SAMPLES {
            return Err(Error::config(
                "mc_samples",
                "at least 10000 samples required",
            ));
        }
        if self.outputs.contains(&Column::FOriAverage)
            && self.quadrature_points < crate::fidelity::MIN_QUADRATURE_POINTS
        {
            return Err(Error::config(
                "quadrature_points",
                "at least 64 points required",
            ));
        }
        if self.outputs.contains(&Column::FBestNumeric) {
            self.search.validate()?;
            if self.search.grid_per_axis < 8 {
                return Err(Error::config(
                    "search.grid",
                    "at least 8 grid points per axis required",
                ));
            }
        }
        Ok(())
    }

    /// Column headers: the sweep variable followed by the outputs, suffixed
    /// per error model when there are several.
    pub fn headers(&self) -> Vec<String> {
        let mut h = vec![self.axis.name.clone()];
        let multi = self.errors.len() > 1;
        for k in 0..self.errors.len() {
            for c in &self.outputs {
                h.push(if multi {
                    format!("{}_{}", c.name(), k + 1)
                } else {
                    c.name().to_string()
                });
            }
        }
        h
    }

    fn error_at(&self, base: &XErrorModel, x: f64) -> XErrorModel {
        match self.mode {
            SweepMode::FidelityVsX => *base,
            _ => XErrorModel::from_delta(x, base.phi_x, base.lambda_x),
        }
    }

    fn cell(
        &self,
        col: Column,
        target: &GateParams,
        e: &XErrorModel,
        row_seed: u64,
        mc: &mut Option<UniversalityReport>,
    ) -> Result<f64> {
        let mut monte_carlo = || -> Result<UniversalityReport> {
            if mc.is_none() {
                *mc = Some(universality_monte_carlo(
                    e,
                    self.mc_samples,
                    self.seed.wrapping_add(row_seed),
                )?);
            }
            Ok(mc.expect("just filled"))
        };
        let tar = || u3(target.theta, target.phi, target.lambda);
        Ok(match col {
            Column::FOriAnalytic => original_fidelity_analytic(target, e),
            Column::FOriNumeric => process_fidelity(&tar(), &decomposition_unchecked(target, e)),
            Column::FOriSpecial => original_fidelity_special_case(target, e).ok_or_else(|| {
                Error::config(
                    "outputs",
                    format!("f_ori_special has no reduced formula for error {e:?}"),
                )
            })?,
            Column::FBestAnalytic => best_fidelity_analytic(target, e),
            Column::FBestNumeric => {
                let cfg = SearchConfig {
                    rng_seed: self.search.rng_seed ^ row_seed,
                    ..self.search
                };
                mitigate_numeric(target, e, &cfg)?.achieved_fidelity
            }
            Column::FBestMitigated => mitigate_closed_form(target, e)?.achieved_fidelity,
            Column::UnAnalytic => universality_analytic(e),
            Column::UnMonteCarlo => monte_carlo()?.un_monte_carlo,
            Column::UnStderr => monte_carlo()?.mc_stderr,
            Column::FOriAverage => average_original_fidelity(e, self.quadrature_points)?,
            Column::FBestAverage => average_best_fidelity(e),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::config("format", format!("unknown format `{other}`"))),
        }
    }
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// A pair of columns that should agree, and by how much.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckViolation {
    pub left: String,
    pub right: String,
    pub max_abs_diff: f64,
    pub tolerance: f64,
}

impl fmt::Display for CheckViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} vs {}: max |diff| = {:.3e} exceeds {:.1e}",
            self.left, self.right, self.max_abs_diff, self.tolerance
        )
    }
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// CSV with a header line and one line per row, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        w.flush()?;
        Ok(())
    }

    /// JSON array of row objects keyed by column name, in column order.
    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, &self.to_json_value()?)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    pub fn emit<W: Write>(&self, format: OutputFormat, w: W) -> Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(w),
            OutputFormat::Json => self.write_json(w),
        }
    }

    fn to_json_value(&self) -> Result<Value> {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (k, v) in self.columns.iter().zip(row) {
                    let n = serde_json::Number::from_f64(*v).ok_or_else(|| {
                        Error::domain(format!("column `{k}` holds non-finite value {v}"))
                    })?;
                    m.insert(k.clone(), Value::Number(n));
                }
                Ok(Value::Object(m))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Value::Array(rows))
    }

    /// Inverse of [`SweepTable::write_json`]. An empty array has no columns.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        let arr = v
            .as_array()
            .ok_or_else(|| Error::domain("expected a JSON array of rows"))?;
        let mut columns: Vec<String> = Vec::new();
        let mut rows = Vec::with_capacity(arr.len());
        for (i, obj) in arr.iter().enumerate() {
            let obj = obj
                .as_object()
                .ok_or_else(|| Error::domain(format!("row {i} is not an object")))?;
            if i == 0 {
                columns = obj.keys().cloned().collect();
            } else if !obj.keys().eq(columns.iter()) {
                return Err(Error::domain(format!("row {i} has different keys")));
            }
            let row = obj
                .values()
                .map(|x| {
                    x.as_f64()
                        .ok_or_else(|| Error::domain(format!("row {i}: non-numeric value")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(SweepTable { columns, rows })
    }

    /// Compares every analytic column with its numeric counterpart (and the
    /// Monte Carlo universality with its analytic value, within four standard
    /// errors).
    pub fn check(&self) -> Vec<CheckViolation> {
        let mut out = Vec::new();
        let suffixes: Vec<String> = {
            let mut s: Vec<String> = self
                .columns
                .iter()
                .filter_map(|c| {
                    c.strip_prefix("f_ori_analytic")
                        .or_else(|| c.strip_prefix("f_best_analytic"))
                        .or_else(|| c.strip_prefix("un_analytic"))
                })
                .map(str::to_string)
                .collect();
            s.sort();
            s.dedup();
            s
        };
        let pairs = [
            ("f_ori_analytic", "f_ori_numeric", ANALYTIC_CHECK_TOL),
            ("f_ori_special", "f_ori_numeric", ANALYTIC_CHECK_TOL),
            ("f_best_analytic", "f_best_mitigated", ANALYTIC_CHECK_TOL),
            ("f_best_analytic", "f_best_numeric", OPTIMIZER_CHECK_TOL),
            ("f_best_mitigated", "f_best_numeric", OPTIMIZER_CHECK_TOL),
        ];
        for sfx in &suffixes {
            for (l, r, tol) in pairs {
                let (ln, rn) = (format!("{l}{sfx}"), format!("{r}{sfx}"));
                if let (Some(a), Some(b)) = (self.column(&ln), self.column(&rn)) {
                    let d = a
                        .iter()
                        .zip(&b)
                        .map(|(x, y)| (x - y).abs())
                        .fold(0.0, f64::max);
                    if d >= tol {
                        out.push(CheckViolation {
                            left: ln,
                            right: rn,
                            max_abs_diff: d,
                            tolerance: tol,
                        });
                    }
                }
            }
            let names = [
                format!("un_analytic{sfx}"),
                format!("un_monte_carlo{sfx}"),
                format!("un_stderr{sfx}"),
            ];
            if let (Some(a), Some(m), Some(s)) = (
                self.column(&names[0]),
                self.column(&names[1]),
                self.column(&names[2]),
            ) {
                for ((a, m), s) in a.iter().zip(&m).zip(&s) {
                    let d = (a - m).abs();
                    if d > 4.0 * s + 1e-12 {
                        out.push(CheckViolation {
                            left: names[0].clone(),
                            right: names[1].clone(),
                            max_abs_diff: d,
                            tolerance: 4.0 * s,
                        });
                        break;
                    }
                }
            }
        }
        out
    }
}

/// Evaluates the configured columns at each grid point. Rows are computed in
/// parallel and returned in grid order; all randomness is keyed by the config
/// seeds and the row index.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepTable> {
    cfg.validate()?;
    let xs = cfg.axis.values();
    let rows = xs
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let target = cfg.target.at(x);
            let mut row = Vec::with_capacity(1 + cfg.errors.len() * cfg.outputs.len());
            row.push(x);
            for (k, base) in cfg.errors.iter().enumerate() {
                let e = cfg.error_at(base, x);
                let row_seed = (i * cfg.errors.len() + k) as u64;
                let mut mc = None;
                for c in &cfg.outputs {
                    row.push(cfg.cell(*c, &target, &e, row_seed, &mut mc)?);
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        columns: cfg.headers(),
        rows,
    })
}

/// Bundled configs, one per figure panel (`fig2a`, `figS2a`, ...).
pub mod recipes {
    use super::SweepConfig;
    use crate::error::{Error, Result};

    pub const ALL: [(&str, &str); 12] = [
        ("fig2a", include_str!("../recipes/fig2a.cfg")),
        ("fig2b", include_str!("../recipes/fig2b.cfg")),
        ("figS2a", include_str!("../recipes/figS2a.cfg")),
        ("figS2b", include_str!("../recipes/figS2b.cfg")),
        ("figS2c", include_str!("../recipes/figS2c.cfg")),
        ("figS2d", include_str!("../recipes/figS2d.cfg")),
        ("figS2e", include_str!("../recipes/figS2e.cfg")),
        ("figS2f", include_str!("../recipes/figS2f.cfg")),
        ("figS2g", include_str!("../recipes/figS2g.cfg")),
        ("figS2h", include_str!("../recipes/figS2h.cfg")),
        ("figS2i", include_str!("../recipes/figS2i.cfg")),
        ("figS2j", include_str!("../recipes/figS2j.cfg")),
    ];

    pub fn names() -> impl Iterator<Item = &'static str> {
        ALL.iter().map(|(n, _)| *n)
    }

    pub fn source(name: &str) -> Option<&'static str> {
        ALL.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
    }

    pub fn load(name: &str) -> Result<SweepConfig> {
        let src = source(name)
            .ok_or_else(|| Error::config("recipe", format!("no bundled recipe named `{name}`")))?;
        SweepConfig::parse(src)
    }
}
