//! Row-oriented results for sweeps and scaling runs, and their CSV form.
//!
//! CSV floats use `{:.16e}` (17 significant digits), so identical inputs
//! give byte-identical files.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{reference_critical, CriticalCoefficients};
use crate::correlations::CorrelationPair;
use crate::error::Result;
use crate::measures::{Measure, MeasureSet};
use crate::params::ModelParams;
use crate::pipeline::{evaluate, reference_measures};
use crate::scaling::{extract_critical_coefficients, fit_slope, ScalingFit, ScalingRun};

pub const SCHEMA_VERSION: &str = "1";

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub h: f64,
    pub n: usize,
    pub gamma: f64,
    pub measures: MeasureSet,
    /// Thermodynamic limit, or the exact closed form at γ = 1.
    pub tdl: MeasureSet,
    pub correlations: CorrelationPair,
    pub msc_degenerate: bool,
}

pub fn sweep_header() -> String {
    let mut cols = vec!["h".to_string(), "n".into(), "gamma".into()];
    cols.extend(Measure::ALL.iter().map(|m| m.name().to_string()));
    cols.extend(Measure::ALL.iter().map(|m| format!("tdl_{}", m.name())));
    cols.extend(["eof".into(), "discord".into(), "msc_degenerate".into()]);
    cols.join(",")
}

impl SweepRow {
    pub fn compute(params: &ModelParams) -> Result<Self> {
        let p = evaluate(params)?;
        Ok(Self {
            h: params.h,
            n: params.n,
            gamma: params.gamma,
            measures: p.measures,
            tdl: reference_measures(params)?,
            correlations: p.correlations()?,
            msc_degenerate: p.msc_degenerate,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut fields = vec![fmt_f64(self.h), self.n.to_string(), fmt_f64(self.gamma)];
        fields.extend(self.measures.to_array().iter().map(|&v| fmt_f64(v)));
        fields.extend(self.tdl.to_array().iter().map(|&v| fmt_f64(v)));
        fields.push(fmt_f64(self.correlations.eof));
        fields.push(fmt_f64(self.correlations.discord));
        fields.push(u8::from(self.msc_degenerate).to_string());
        fields.join(",")
    }
}

/// Rows ordered by N, then by h, whatever order the workers finish in.
pub fn sweep(gamma: f64, hs: &[f64], ns: &[usize]) -> Result<Vec<SweepRow>> {
    let params = ns
        .iter()
        .flat_map(|&n| hs.iter().map(move |&h| ModelParams::new(n, gamma, h)))
        .collect::<Result<Vec<_>>>()?;
    params.par_iter().map(SweepRow::compute).collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = sweep_header();
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}

/// Field grid from `min` to `max` inclusive; steps are counted, not summed.
pub fn field_grid(min: f64, max: f64, step: f64) -> Vec<f64> {
    let count = ((max - min) / step + 1e-9).floor() as usize;
    (0..=count).map(|k| min + step * k as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub slope: f64,
    pub local_slope: f64,
    pub theory_slope: f64,
    pub transform: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub schema_version: String,
    pub gamma: f64,
    pub h: f64,
    pub phase: String,
    pub window: usize,
    pub tolerance: f64,
    pub measures: Vec<(String, SlopeReport)>,
    pub pass: bool,
}

pub const SLOPE_TOL: f64 = 0.07;
pub const FIT_WINDOW: usize = 4;

impl ScalingReport {
    pub fn from_run(run: &ScalingRun, window: usize, tolerance: f64) -> Result<Self> {
        let measures = run
            .series
            .iter()
            .map(|(m, s)| {
                let fit: ScalingFit = fit_slope(s, window)?;
                let theory = run.theory_slope(*m);
                Ok((
                    m.name().to_string(),
                    SlopeReport {
                        slope: fit.slope,
                        local_slope: fit.final_local_slope,
                        theory_slope: theory,
                        transform: s.transform.name().into(),
                        pass: (fit.final_local_slope - theory).abs() <= tolerance,
                    },
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            schema_version: SCHEMA_VERSION.into(),
            gamma: run.gamma,
            h: run.h,
            phase: run.phase.name().into(),
            window,
            tolerance,
            pass: measures.iter().all(|(_, r)| r.pass),
            measures,
        })
    }
}

/// Long format: one row per (N, measure).
pub fn scaling_csv(run: &ScalingRun) -> String {
    let mut out = String::from("n,measure,transform,value,transformed\n");
    let n_points = run.series.first().map_or(0, |(_, s)| s.points.len());
    for i in 0..n_points {
        for (m, s) in &run.series {
            let p = &s.points[i];
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                p.n,
                m.name(),
                s.transform.name(),
                fmt_f64(p.value),
                fmt_f64(p.transformed)
            );
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub gamma: f64,
    pub computed: CriticalCoefficients,
    pub reference: Option<CriticalCoefficients>,
    /// computed − reference, (a_z, a_xx, a_yy, a_zz).
    pub deviation: Option<[f64; 4]>,
    pub zz_over_z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Report {
    pub schema_version: String,
    pub n: usize,
    pub rows: Vec<Table1Row>,
}

pub fn table1(gammas: &[f64], n: usize) -> Result<Table1Report> {
    let rows = gammas
        .par_iter()
        .map(|&gamma| {
            let computed = extract_critical_coefficients(gamma, n)?;
            let reference = reference_critical(gamma);
            let deviation = reference.map(|r| {
                let (a, b) = (computed.to_array(), r.to_array());
                [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
            });
            Ok(Table1Row { gamma, zz_over_z: computed.a_zz / computed.a_z, computed, reference, deviation })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table1Report { schema_version: SCHEMA_VERSION.into(), n, rows })
}

impl Table1Report {
    /// Fixed-width text table.
    pub fn render(&self) -> String {
        let mut out = format!("N = {}\n{:>6} {:>9} {:>9} {:>9} {:>9} {:>9}\n", self.n, "gamma", "a_z", "a_xx", "a_yy", "a_zz", "zz/z");
        for r in &self.rows {
            let c = r.computed.to_array();
            let _ = writeln!(
                out,
                "{:>6.2} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
                r.gamma, c[0], c[1], c[2], c[3], r.zz_over_z
            );
            if let Some(d) = r.deviation {
                let _ = writeln!(out, "{:>6} {:>9.1e} {:>9.1e} {:>9.1e} {:>9.1e}", "dev", d[0], d[1], d[2], d[3]);
            }
        }
        out
    }
}
