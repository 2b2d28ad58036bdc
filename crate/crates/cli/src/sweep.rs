//! Sweep execution: cartesian grid, parallel evaluation, deterministic output.

use std::fmt::Write as _;

use massjump::bounds::{format_float, CSV_FIELDS};
use massjump::{build_report, EntropyReport, MediumParams, WindowSpec};
use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::CliError;

#[derive(Debug)]
pub struct SweepPoint {
    pub index: usize,
    pub values: [f64; 5],
    pub outcome: Result<EntropyReport, String>,
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub points: Vec<SweepPoint>,
    pub ok: usize,
    pub skipped: usize,
    pub sx_violations: usize,
    pub sum_violations: usize,
    /// Smallest `S_x - paper_bound` over successful points.
    pub min_sx_margin: f64,
}

/// Expands the grid in canonical parameter order; the last axis varies fastest.
pub fn grid_points(cfg: &SweepConfig) -> Vec<[f64; 5]> {
    let mut points = vec![cfg.fixed];
    for axis in &cfg.axes {
        let values = axis.values();
        let idx = axis.param.index();
        let mut next = Vec::with_capacity(points.len() * values.len());
        for base in &points {
            for &v in &values {
                let mut p = *base;
                p[idx] = v;
                next.push(p);
            }
        }
        points = next;
    }
    points
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome, CliError> {
    let size = cfg.grid_size();
    if size > cfg.grid_cap {
        return Err(CliError::Usage(format!(
            "grid size {size} exceeds the configured cap {} (raise `grid_cap` to proceed)",
            cfg.grid_cap
        )));
    }
    let windows: Result<Vec<WindowSpec>, _> = cfg
        .windows
        .iter()
        .map(|&n| WindowSpec::new(n, cfg.samples_per_period))
        .collect();
    let windows = windows.map_err(|e| CliError::Usage(e.to_string()))?;

    let points = grid_points(cfg);
    let eval = |(index, values): (usize, [f64; 5])| -> SweepPoint {
        let outcome = MediumParams::new(values[0], values[1], values[2], values[3], values[4])
            .and_then(|p| build_report(&p, &windows, &cfg.quad))
            .map_err(|e| e.to_string());
        SweepPoint { index, values, outcome }
    };

    let mut evaluated: Vec<SweepPoint> = match cfg.jobs {
        Some(1) => points.into_iter().enumerate().map(eval).collect(),
        jobs => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.unwrap_or(0))
                .build()
                .map_err(|e| CliError::Usage(format!("worker pool: {e}")))?;
            pool.install(|| points.into_par_iter().enumerate().map(eval).collect())
        }
    };
    evaluated.sort_by_key(|p| p.index);

    let mut ok = 0;
    let mut skipped = 0;
    let mut sx_violations = 0;
    let mut sum_violations = 0;
    let mut min_sx_margin = f64::INFINITY;
    for p in &evaluated {
        match &p.outcome {
            Ok(rep) => {
                ok += 1;
                if !rep.flags.sx_bound_ok {
                    sx_violations += 1;
                }
                sum_violations += rep
                    .flags
                    .sum_bound_ok_per_window
                    .iter()
                    .filter(|(_, ok)| !ok)
                    .count();
                min_sx_margin = min_sx_margin.min(rep.s_x - rep.paper_bound);
            }
            Err(_) => skipped += 1,
        }
    }
    Ok(SweepOutcome {
        points: evaluated,
        ok,
        skipped,
        sx_violations,
        sum_violations,
        min_sx_margin,
    })
}

pub fn csv_header() -> String {
    let mut h = CSV_FIELDS.join(",");
    h.push_str(",status\n");
    h
}

/// CSV body: one row per (point, window); skipped points emit a single row
/// with empty result columns and the reason in `status`.
pub fn csv_body(outcome: &SweepOutcome) -> String {
    let mut out = String::new();
    for p in &outcome.points {
        match &p.outcome {
            Ok(rep) => {
                for row in rep.csv_rows() {
                    out.push_str(&row.join(","));
                    out.push_str(",ok\n");
                }
            }
            Err(reason) => {
                for v in p.values {
                    out.push_str(&format_float(v));
                    out.push(',');
                }
                // N..flags stay empty for a point that produced no report
                let _ = write!(
                    out,
                    ",,,,,,,,skipped({})\n",
                    reason.replace(',', ";").replace('\n', " ")
                );
            }
        }
    }
    out
}

pub fn json_body(outcome: &SweepOutcome) -> Result<String, CliError> {
    let mut out = String::from("[\n");
    let mut first = true;
    for p in &outcome.points {
        if !first {
            out.push_str(",\n");
        }
        first = false;
        match &p.outcome {
            Ok(rep) => out.push_str(
                &serde_json::to_string(rep)
                    .map_err(|e| CliError::Accuracy(format!("json serialization: {e}")))?,
            ),
            Err(reason) => {
                let obj = serde_json::json!({
                    "params": {
                        "m_l": p.values[0],
                        "m_r": p.values[1],
                        "v_f": p.values[2],
                        "a": p.values[3],
                        "energy": p.values[4],
                    },
                    "status": format!("skipped({reason})"),
                });
                out.push_str(&obj.to_string());
            }
        }
    }
    out.push_str("\n]\n");
    Ok(out)
}

pub fn summary(outcome: &SweepOutcome) -> String {
    format!(
        "points={} ok={} skipped={} sx_bound_violations={} sum_bound_violations={} min_sx_margin={}",
        outcome.points.len(),
        outcome.ok,
        outcome.skipped,
        outcome.sx_violations,
        outcome.sum_violations,
        if outcome.min_sx_margin.is_finite() {
            format_float(outcome.min_sx_margin)
        } else {
            "n/a".to_string()
        }
    )
}
