//! Finite-size scaling: log-log slopes, critical amplitudes, and the
//! convergence of N·Δ in the broken phase.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{
    single_spin_theory_slope, tdl_measures, tdl_single_spin, theory_slope, BrokenPhaseCoefficients, CriticalCoefficients,
};
use crate::error::{LmgError, Result};
use crate::measures::{Measure, MeasureSet};
use crate::params::{ModelParams, Phase};
use crate::pipeline::{evaluate, PointMeasures};

/// Quantity actually plotted on the log-log axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    Raw,
    /// 2 − value.
    TwoMinusValue,
    /// value − 2.
    ValueMinusTwo,
    /// limit − value.
    TdlMinusValue,
    /// value − limit.
    ValueMinusTdl,
}

impl Transform {
    pub fn apply(self, value: f64, tdl: f64) -> f64 {
        match self {
            Transform::Raw => value,
            Transform::TwoMinusValue => 2.0 - value,
            Transform::ValueMinusTwo => value - 2.0,
            Transform::TdlMinusValue => tdl - value,
            Transform::ValueMinusTdl => value - tdl,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Transform::Raw => "raw",
            Transform::TwoMinusValue => "two_minus_value",
            Transform::ValueMinusTwo => "value_minus_two",
            Transform::TdlMinusValue => "tdl_minus_value",
            Transform::ValueMinusTdl => "value_minus_tdl",
        }
    }

    /// The transform that is positive and decays for each phase.
    pub fn for_measure(phase: Phase, m: Measure) -> Transform {
        use Measure::*;
        match (phase, m) {
            (Phase::Critical, AscL1 | AscR) => Transform::TwoMinusValue,
            (Phase::Critical, _) => Transform::Raw,
            // l1-ASC sits above 2 for h > 1 but below it at h = 1
            (Phase::Symmetric, AscL1) => Transform::ValueMinusTwo,
            (Phase::Symmetric, AscR) => Transform::TwoMinusValue,
            (Phase::Symmetric, _) => Transform::Raw,
            (Phase::Broken, AscL1 | AscR) => Transform::ValueMinusTdl,
            (Phase::Broken, _) => Transform::TdlMinusValue,
        }
    }

    /// Single-spin maximum coherence approaches 1 from below for h ≥ 1 and
    /// its limit from above for h < 1.
    pub fn for_single_spin(phase: Phase) -> Transform {
        match phase {
            Phase::Broken => Transform::ValueMinusTdl,
            _ => Transform::TdlMinusValue,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub n: u64,
    pub value: f64,
    pub transformed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSeries {
    pub name: String,
    pub phase: Phase,
    pub gamma: f64,
    pub h: f64,
    pub transform: Transform,
    /// Limit value used by the transform (2 or the thermodynamic limit).
    pub reference: f64,
    pub points: Vec<SeriesPoint>,
}

impl MeasureSeries {
    /// Series from raw values, N strictly increasing.
    pub fn new(
        name: impl Into<String>,
        phase: Phase,
        gamma: f64,
        h: f64,
        transform: Transform,
        reference: f64,
        values: &[(u64, f64)],
    ) -> Result<Self> {
        if values.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(LmgError::UnorderedSeries);
        }
        let points = values
            .iter()
            .map(|&(n, value)| SeriesPoint { n, value, transformed: transform.apply(value, reference) })
            .collect();
        Ok(Self { name: name.into(), phase, gamma, h, transform, reference, points })
    }

    fn check_positive(&self) -> Result<()> {
        match self.points.iter().find(|p| p.transformed.is_nan() || p.transformed <= 0.0) {
            Some(p) => Err(LmgError::NonPositiveSeries { name: self.name.clone(), n: p.n, value: p.transformed }),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    /// Slope between consecutive points, one per interval of the series.
    pub local_slopes: Vec<f64>,
    pub final_local_slope: f64,
    pub residual_rms: f64,
    /// N values used in the least-squares fit.
    pub window: Vec<u64>,
}

/// Least-squares line through (log₂ N, log₂ value) over the last `window`
/// points of the series.
pub fn fit_slope(series: &MeasureSeries, window: usize) -> Result<ScalingFit> {
    let k = window.min(series.points.len());
    if k < 3 {
        return Err(LmgError::TooFewPoints { needed: 3, got: k });
    }
    series.check_positive()?;
    let logs: Vec<(f64, f64)> =
        series.points.iter().map(|p| ((p.n as f64).log2(), p.transformed.log2())).collect();
    let local_slopes: Vec<f64> = logs.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();

    let tail = &logs[logs.len() - k..];
    let kf = k as f64;
    let mx = tail.iter().map(|p| p.0).sum::<f64>() / kf;
    let my = tail.iter().map(|p| p.1).sum::<f64>() / kf;
    let sxx: f64 = tail.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = tail.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual_rms = (tail.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / kf).sqrt();

    Ok(ScalingFit {
        slope,
        intercept,
        final_local_slope: *local_slopes.last().expect("at least three points"),
        local_slopes,
        residual_rms,
        window: series.points[series.points.len() - k..].iter().map(|p| p.n).collect(),
    })
}

fn check_n_list(ns: &[usize]) -> Result<()> {
    if ns.is_empty() {
        return Err(LmgError::TooFewPoints { needed: 1, got: 0 });
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LmgError::UnorderedSeries);
    }
    Ok(())
}

/// Evaluate every N of the list in parallel; output keeps the list order.
pub fn evaluate_n_list(gamma: f64, h: f64, ns: &[usize]) -> Result<Vec<PointMeasures>> {
    check_n_list(ns)?;
    ns.par_iter().map(|&n| evaluate(&ModelParams::new(n, gamma, h)?)).collect()
}

/// All six measure series for one (γ, h), with phase-appropriate transforms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRun {
    pub phase: Phase,
    pub gamma: f64,
    pub h: f64,
    pub series: Vec<(Measure, MeasureSeries)>,
}

impl ScalingRun {
    pub fn from_points(gamma: f64, h: f64, points: &[PointMeasures]) -> Result<Self> {
        let phase = Phase::of(h);
        let tdl = if phase == Phase::Broken {
            tdl_measures(gamma, h)?
        } else {
            MeasureSet::POLARIZED
        };
        let series = Measure::ALL
            .iter()
            .map(|&m| {
                let values: Vec<(u64, f64)> = points.iter().map(|p| (p.params.n as u64, p.measures.get(m))).collect();
                let s = MeasureSeries::new(m.name(), phase, gamma, h, Transform::for_measure(phase, m), tdl.get(m), &values)?;
                Ok((m, s))
            })
            .collect::<Result<_>>()?;
        Ok(Self { phase, gamma, h, series })
    }

    pub fn compute(gamma: f64, h: f64, ns: &[usize]) -> Result<Self> {
        Self::from_points(gamma, h, &evaluate_n_list(gamma, h, ns)?)
    }

    pub fn series(&self, m: Measure) -> &MeasureSeries {
        &self.series.iter().find(|(k, _)| *k == m).expect("all measures present").1
    }

    pub fn theory_slope(&self, m: Measure) -> f64 {
        theory_slope(self.phase, m)
    }
}

/// Invert the critical-point expansion of the collective moments.
pub fn critical_coefficients_from_moments(p: &PointMeasures) -> CriticalCoefficients {
    let n = p.params.n as f64;
    let m = &p.moments;
    let n23 = n.powf(2.0 / 3.0);
    CriticalCoefficients {
        a_z: (2.0 * m.sz / n - 1.0 - 1.0 / n) * n23,
        a_xx: 4.0 * m.sx2 / (n * n) * n23,
        a_yy: 4.0 * m.sy2 / (n * n) * n.powf(4.0 / 3.0),
        a_zz: (4.0 * m.sz2 / (n * n) - 1.0 - 2.0 / n) * n23,
    }
}

pub fn extract_critical_coefficients(gamma: f64, n: usize) -> Result<CriticalCoefficients> {
    Ok(critical_coefficients_from_moments(&evaluate(&ModelParams::new(n, gamma, 1.0)?)?))
}

/// Ratio of successive differences above which N·Δ counts as not settling.
pub const CONVERGENCE_RATIO: f64 = 0.8;

/// Numerical 1/N constant of one measure in the broken phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrokenConstant {
    pub measure: Measure,
    /// (N, N·(value − limit)).
    pub scaled: Vec<(u64, f64)>,
    /// Richardson estimate 2s_k − s_{k−1} assuming a 1/N tail.
    pub limit: f64,
    /// Successive differences shrink by at least [`CONVERGENCE_RATIO`].
    pub converging: bool,
    /// Analytic constant, same sign convention.
    pub predicted: f64,
    pub relative_error: f64,
    /// Finite-N values lie below the limit.
    pub from_below: bool,
}

impl BrokenConstant {
    pub fn within(&self, rel_tol: f64) -> bool {
        self.converging && self.relative_error <= rel_tol
    }

    pub fn check(&self) -> Result<()> {
        if self.converging {
            Ok(())
        } else {
            Err(LmgError::Divergent(self.measure.name().into()))
        }
    }
}

pub fn broken_constants_from_points(gamma: f64, h: f64, points: &[PointMeasures]) -> Result<Vec<BrokenConstant>> {
    Phase::Broken.check(h)?;
    if points.len() < 4 {
        return Err(LmgError::TooFewPoints { needed: 4, got: points.len() });
    }
    let coeffs = BrokenPhaseCoefficients::new(gamma, h)?;
    let tdl = tdl_measures(gamma, h)?;
    Ok(Measure::ALL
        .iter()
        .map(|&m| {
            let scaled: Vec<(u64, f64)> = points
                .iter()
                .map(|p| (p.params.n as u64, p.params.n as f64 * (p.measures.get(m) - tdl.get(m))))
                .collect();
            constant_from_scaled(m, scaled, coeffs.constant(m))
        })
        .collect())
}

/// Convergence test and limit estimate for a sequence N·Δ on a doubling grid.
pub fn constant_from_scaled(measure: Measure, scaled: Vec<(u64, f64)>, predicted: f64) -> BrokenConstant {
    let s: Vec<f64> = scaled.iter().map(|p| p.1).collect();
    let k = s.len();
    let diffs: Vec<f64> = s.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let converging = diffs.len() >= 3
        && diffs[diffs.len() - 3..]
            .windows(2)
            .all(|w| w[1] <= CONVERGENCE_RATIO * w[0] || w[1] <= 1e-12 * s[k - 1].abs().max(1.0));
    let limit = if k >= 2 { 2.0 * s[k - 1] - s[k - 2] } else { s[k - 1] };
    BrokenConstant {
        measure,
        from_below: s.iter().all(|&v| v < 0.0),
        limit,
        converging,
        predicted,
        relative_error: ((limit - predicted) / predicted).abs(),
        scaled,
    }
}

pub fn broken_phase_constants(gamma: f64, h: f64, ns: &[usize]) -> Result<Vec<BrokenConstant>> {
    broken_constants_from_points(gamma, h, &evaluate_n_list(gamma, h, ns)?)
}

/// Which single-spin maximum coherence to track.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    L1,
    RelEnt,
}

pub fn single_spin_series(gamma: f64, h: f64, points: &[PointMeasures], metric: Metric) -> Result<MeasureSeries> {
    let phase = Phase::of(h);
    let tdl = tdl_single_spin(h);
    let (name, reference) = match metric {
        Metric::L1 => ("single_l1", tdl.l1),
        Metric::RelEnt => ("single_r", tdl.rel_ent),
    };
    let values: Vec<(u64, f64)> = points
        .iter()
        .map(|p| {
            let v = match metric {
                Metric::L1 => p.single_spin.l1,
                Metric::RelEnt => p.single_spin.rel_ent,
            };
            (p.params.n as u64, v)
        })
        .collect();
    MeasureSeries::new(name, phase, gamma, h, Transform::for_single_spin(phase), reference, &values)
}

pub fn single_spin_scaling(gamma: f64, h: f64, ns: &[usize], metric: Metric, window: usize) -> Result<ScalingFit> {
    fit_slope(&single_spin_series(gamma, h, &evaluate_n_list(gamma, h, ns)?, metric)?, window)
}

pub fn single_spin_theory(h: f64) -> f64 {
    single_spin_theory_slope(Phase::of(h))
}

/// Powers of two 2^lo ..= 2^hi.
pub fn power_of_two_grid(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|k| 1usize << k).collect()
}
