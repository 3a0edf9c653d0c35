//! The six two-spin quantities tracked throughout: coherence, ASC and MSC
//! under the l₁ and relative-entropy metrics.

use serde::{Deserialize, Serialize};

use crate::coherence::{coherence_two_spin, CoherencePair};
use crate::error::{LmgError, Result};
use crate::reduced::TwoSpinXState;
use crate::steered::{asc_closed_form, msc_closed_form};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    CL1,
    CR,
    AscL1,
    AscR,
    MscL1,
    MscR,
}

impl Measure {
    pub const ALL: [Measure; 6] =
        [Measure::CL1, Measure::CR, Measure::AscL1, Measure::AscR, Measure::MscL1, Measure::MscR];

    /// Column-style name, e.g. `asc_l1`.
    pub fn name(self) -> &'static str {
        match self {
            Measure::CL1 => "c_l1",
            Measure::CR => "c_r",
            Measure::AscL1 => "asc_l1",
            Measure::AscR => "asc_r",
            Measure::MscL1 => "msc_l1",
            Measure::MscR => "msc_r",
        }
    }

    pub fn from_name(name: &str) -> Result<Measure> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == name)
            .ok_or_else(|| LmgError::InvalidParams(format!("unknown measure '{name}'")))
    }

    pub fn is_l1(self) -> bool {
        matches!(self, Measure::CL1 | Measure::AscL1 | Measure::MscL1)
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MeasureSet {
    pub coherence: CoherencePair,
    pub asc: CoherencePair,
    pub msc: CoherencePair,
}

impl MeasureSet {
    /// Symmetric-phase values: the polarized product state.
    pub const POLARIZED: MeasureSet = MeasureSet {
        coherence: CoherencePair::ZERO,
        asc: CoherencePair { l1: 2.0, rel_ent: 2.0 },
        msc: CoherencePair::ZERO,
    };

    pub fn from_x_state(x: &TwoSpinXState) -> Self {
        Self { coherence: coherence_two_spin(x), asc: asc_closed_form(x), msc: msc_closed_form(x) }
    }

    pub fn get(&self, m: Measure) -> f64 {
        match m {
            Measure::CL1 => self.coherence.l1,
            Measure::CR => self.coherence.rel_ent,
            Measure::AscL1 => self.asc.l1,
            Measure::AscR => self.asc.rel_ent,
            Measure::MscL1 => self.msc.l1,
            Measure::MscR => self.msc.rel_ent,
        }
    }

    /// Values in [`Measure::ALL`] order.
    pub fn to_array(&self) -> [f64; 6] {
        Measure::ALL.map(|m| self.get(m))
    }

    pub fn max_abs_diff(&self, other: &MeasureSet) -> f64 {
        Measure::ALL.iter().map(|&m| (self.get(m) - other.get(m)).abs()).fold(0.0, f64::max)
    }
}
