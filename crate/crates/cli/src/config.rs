//! Flat key-value configuration with dotted sections.
//!
//! Format: one `key = value` pair per line, `#` starts a comment. Keys:
//!
//! ```text
//! fixed.m_l = 1.0          # fixed parameter values
//! fixed.m_r = 2.0
//! fixed.v_F = 1.0
//! fixed.a = 0.0
//! fixed.E = 3.0
//! axis.E = linear:2.5:4.5:11   # spacing:start:stop:count; log spacing allowed
//! windows = 4,8,16
//! samples_per_period = 64
//! quad.abs_tol = 1e-12
//! quad.rel_tol = 1e-11
//! output.csv = sweep.csv
//! output.json = sweep.json
//! grid_cap = 1000000
//! jobs = 4
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use massjump::QuadSpec;

use crate::CliError;

/// The five physical parameters, in canonical (and sweep-nesting) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    MassLeft,
    MassRight,
    Velocity,
    Coupling,
    Energy,
}

pub const PARAMS: [Param; 5] = [
    Param::MassLeft,
    Param::MassRight,
    Param::Velocity,
    Param::Coupling,
    Param::Energy,
];

impl Param {
    pub fn key(self) -> &'static str {
        match self {
            Param::MassLeft => "m_l",
            Param::MassRight => "m_r",
            Param::Velocity => "v_F",
            Param::Coupling => "a",
            Param::Energy => "E",
        }
    }

    pub fn index(self) -> usize {
        PARAMS.iter().position(|&p| p == self).unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone)]
pub struct AxisSpec {
    pub param: Param,
    pub spacing: Spacing,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        (0..self.count)
            .map(|i| {
                let t = i as f64 / (self.count - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.start + t * (self.stop - self.start),
                    Spacing::Log => (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Fixed values in canonical parameter order (m_l, m_r, v_F, a, E).
    pub fixed: [f64; 5],
    /// Swept axes, kept in canonical order; the last one varies fastest.
    pub axes: Vec<AxisSpec>,
    pub windows: Vec<u32>,
    pub samples_per_period: u32,
    pub quad: QuadSpec,
    pub csv_out: Option<PathBuf>,
    pub json_out: Option<PathBuf>,
    pub grid_cap: usize,
    pub jobs: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            fixed: [1.0, 1.0, 1.0, 0.0, 2.0],
            axes: Vec::new(),
            windows: vec![4, 8],
            samples_per_period: 64,
            quad: QuadSpec::default(),
            csv_out: None,
            json_out: None,
            grid_cap: 1_000_000,
            jobs: None,
        }
    }
}

impl SweepConfig {
    pub fn grid_size(&self) -> usize {
        self.axes.iter().map(|a| a.count).product::<usize>().max(1)
    }
}

/// Raw key-value view of a config file; values are untyped strings.
#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    pub entries: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected `key = value`", lineno + 1))
            })?;
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(FileConfig { entries })
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key `{key}`: invalid number `{v}`"))),
        }
    }
}

fn parse_axis(param: Param, value: &str, key: &str) -> Result<AxisSpec, CliError> {
    let parts: Vec<&str> = value.split(':').collect();
    if parts.len() != 4 {
        return Err(CliError::Usage(format!(
            "config key `{key}`: expected `spacing:start:stop:count`, got `{value}`"
        )));
    }
    let spacing = match parts[0] {
        "linear" => Spacing::Linear,
        "log" => Spacing::Log,
        other => {
            return Err(CliError::Usage(format!(
                "config key `{key}`: spacing must be `linear` or `log`, got `{other}`"
            )))
        }
    };
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| CliError::Usage(format!("config key `{key}`: invalid number `{s}`")))
    };
    let start = num(parts[1])?;
    let stop = num(parts[2])?;
    let count: usize = parts[3]
        .parse()
        .map_err(|_| CliError::Usage(format!("config key `{key}`: invalid count `{}`", parts[3])))?;
    if count < 1 {
        return Err(CliError::Usage(format!("config key `{key}`: count must be >= 1")));
    }
    if spacing == Spacing::Log && (start <= 0.0 || stop <= 0.0) {
        return Err(CliError::Usage(format!(
            "config key `{key}`: log spacing requires positive endpoints"
        )));
    }
    Ok(AxisSpec { param, spacing, start, stop, count })
}

pub fn parse_windows(value: &str, context: &str) -> Result<Vec<u32>, CliError> {
    let ws: Result<Vec<u32>, _> = value.split(',').map(|s| s.trim().parse::<u32>()).collect();
    match ws {
        Ok(v) if !v.is_empty() && v.iter().all(|&n| n >= 1) => Ok(v),
        _ => Err(CliError::Usage(format!(
            "{context}: expected a comma-separated list of window sizes >= 1, got `{value}`"
        ))),
    }
}

/// Builds a sweep configuration from a parsed file, rejecting unknown keys.
pub fn sweep_config(file: &FileConfig) -> Result<SweepConfig, CliError> {
    let mut cfg = SweepConfig::default();
    for (key, value) in &file.entries {
        match key.as_str() {
            "fixed.m_l" | "fixed.m_r" | "fixed.v_F" | "fixed.a" | "fixed.E" => {
                let param = PARAMS
                    .iter()
                    .find(|p| key == &format!("fixed.{}", p.key()))
                    .copied()
                    .unwrap();
                cfg.fixed[param.index()] = file.get_f64(key)?.unwrap();
            }
            "axis.m_l" | "axis.m_r" | "axis.v_F" | "axis.a" | "axis.E" => {
                let param = PARAMS
                    .iter()
                    .find(|p| key == &format!("axis.{}", p.key()))
                    .copied()
                    .unwrap();
                cfg.axes.push(parse_axis(param, value, key)?);
            }
            "windows" => cfg.windows = parse_windows(value, &format!("config key `{key}`"))?,
            "samples_per_period" => {
                cfg.samples_per_period = value.parse().map_err(|_| {
                    CliError::Usage(format!("config key `{key}`: invalid integer `{value}`"))
                })?;
            }
            "quad.abs_tol" => cfg.quad.abs_tol = file.get_f64(key)?.unwrap(),
            "quad.rel_tol" => cfg.quad.rel_tol = file.get_f64(key)?.unwrap(),
            "output.csv" => cfg.csv_out = Some(PathBuf::from(value)),
            "output.json" => cfg.json_out = Some(PathBuf::from(value)),
            "grid_cap" => {
                cfg.grid_cap = value.parse().map_err(|_| {
                    CliError::Usage(format!("config key `{key}`: invalid integer `{value}`"))
                })?;
            }
            "jobs" => {
                cfg.jobs = Some(value.parse().map_err(|_| {
                    CliError::Usage(format!("config key `{key}`: invalid integer `{value}`"))
                })?);
            }
            other => {
                return Err(CliError::Usage(format!("config key `{other}`: unknown key")));
            }
        }
    }
    // canonical axis order, duplicates rejected
    cfg.axes.sort_by_key(|a| a.param.index());
    for pair in cfg.axes.windows(2) {
        if pair[0].param == pair[1].param {
            return Err(CliError::Usage(format!(
                "config key `axis.{}`: duplicate axis",
                pair[0].param.key()
            )));
        }
    }
    Ok(cfg)
}
