//! Ground state → moments → reduced states → every measure, for one point.

use serde::{Deserialize, Serialize};

use crate::baselines::{isotropic_measures, tdl_measures, tdl_single_spin};
use crate::coherence::{max_single_spin_coherence, CoherencePair};
use crate::correlations::{correlations_x, CorrelationPair};
use crate::error::Result;
use crate::measures::MeasureSet;
use crate::params::{ModelParams, Parity};
use crate::reduced::{moments_from_state, two_spin_state, CollectiveMoments, SingleSpinState, TwoSpinXState};
use crate::solver::{global_ground_state, GroundStateSolution};
use crate::steered::marginal_is_degenerate;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointMeasures {
    pub params: ModelParams,
    pub energy: f64,
    pub parity: Parity,
    pub residual: f64,
    pub moments: CollectiveMoments,
    pub x: TwoSpinXState,
    pub measures: MeasureSet,
    /// Largest single-spin coherence over all reference bases.
    pub single_spin: CoherencePair,
    /// ρ_B has equal eigenvalues; MSC values are the h → 0⁺ limit.
    pub msc_degenerate: bool,
}

impl PointMeasures {
    pub fn from_solution(params: ModelParams, sol: &GroundStateSolution) -> Result<Self> {
        let moments = moments_from_state(sol);
        let x = two_spin_state(&moments)?;
        Ok(Self {
            params,
            energy: sol.energy,
            parity: sol.sector.parity,
            residual: sol.residual,
            moments,
            x,
            measures: MeasureSet::from_x_state(&x),
            single_spin: max_single_spin_coherence(&SingleSpinState::from_moments(&moments)),
            msc_degenerate: marginal_is_degenerate(&x),
        })
    }

    pub fn correlations(&self) -> Result<CorrelationPair> {
        correlations_x(&self.x)
    }
}

/// Solve and evaluate one parameter point.
pub fn evaluate(params: &ModelParams) -> Result<PointMeasures> {
    params.validate()?;
    let sol = global_ground_state(params)?;
    PointMeasures::from_solution(*params, &sol)
}

/// Infinite-N reference for γ < 1; at γ = 1 the exact closed form at the
/// same N, since that point has no separate mean-field limit of this form.
pub fn reference_measures(params: &ModelParams) -> Result<MeasureSet> {
    if params.gamma >= 1.0 {
        isotropic_measures(params.n, params.h)
    } else {
        tdl_measures(params.gamma, params.h)
    }
}

/// Thermodynamic-limit single-spin maximum coherence.
pub fn reference_single_spin(params: &ModelParams) -> CoherencePair {
    tdl_single_spin(params.h)
}
