//! Model parameters, Dicke parity sectors and phase classification.

use serde::{Deserialize, Serialize};

use crate::error::{LmgError, Result};

/// Parameters of the ferromagnetic LMG Hamiltonian with coupling fixed to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub gamma: f64,
    pub h: f64,
}

impl ModelParams {
    /// Coupling strength; every energy is measured in units of it.
    pub const LAMBDA: f64 = 1.0;

    pub fn new(n: usize, gamma: f64, h: f64) -> Result<Self> {
        let p = Self { n, gamma, h };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(LmgError::InvalidParams(format!("N = {} < 2", self.n)));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(LmgError::InvalidParams(format!(
                "gamma = {} outside [0, 1]",
                self.gamma
            )));
        }
        if self.h < 0.0 || !self.h.is_finite() {
            return Err(LmgError::InvalidParams(format!("h = {} must be >= 0", self.h)));
        }
        Ok(())
    }

    /// Total spin of the maximal sector, N/2.
    pub fn spin(&self) -> f64 {
        self.n as f64 / 2.0
    }

    pub fn phase(&self) -> Phase {
        Phase::of(self.h)
    }
}

/// Residue class of M within the S = N/2 multiplet.
///
/// `Lower` starts at M = -N/2, `Upper` at M = -N/2 + 1; both step by 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Lower,
    Upper,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Lower, Parity::Upper];

    pub fn name(self) -> &'static str {
        match self {
            Parity::Lower => "M1",
            Parity::Upper => "M2",
        }
    }

    /// The class holding the fully polarized state M = N/2.
    pub fn of_polarized(n: usize) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Lower
        } else {
            Parity::Upper
        }
    }

    /// Parse a user-facing tag ("M1"/"M2", "lower"/"upper").
    pub fn from_tag(tag: &str) -> Result<Parity> {
        match tag.to_ascii_lowercase().as_str() {
            "m1" | "lower" | "1" => Ok(Parity::Lower),
            "m2" | "upper" | "2" => Ok(Parity::Upper),
            other => Err(LmgError::InvalidParams(format!("unknown parity tag '{other}'"))),
        }
    }
}

/// One parity block of the S = N/2 Dicke multiplet, ordered by ascending M.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeSector {
    pub n: usize,
    pub parity: Parity,
    pub m_values: Vec<f64>,
}

impl DickeSector {
    pub fn new(n: usize, parity: Parity) -> Result<Self> {
        if n < 2 {
            return Err(LmgError::InvalidParams(format!("N = {n} < 2")));
        }
        let s = n as f64 / 2.0;
        let offset = match parity {
            Parity::Lower => 0,
            Parity::Upper => 1,
        };
        // 2M + N ranges over offset, offset + 2, ..., <= 2N
        let m_values: Vec<f64> = (offset..=n)
            .step_by(2)
            .map(|k| k as f64 - s)
            .collect();
        if m_values.is_empty() {
            return Err(LmgError::EmptySector(parity.name(), n));
        }
        Ok(Self { n, parity, m_values })
    }

    pub fn spin(&self) -> f64 {
        self.n as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.m_values.len()
    }

    pub fn contains_polarized(&self) -> bool {
        self.parity == Parity::of_polarized(self.n)
    }
}

/// Ground-state phase of the ferromagnetic model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Broken,
    Critical,
    Symmetric,
}

impl Phase {
    /// Tolerance within which h is treated as the critical field.
    pub const CRITICAL_TOL: f64 = 1e-12;

    pub fn of(h: f64) -> Phase {
        if (h - 1.0).abs() <= Self::CRITICAL_TOL {
            Phase::Critical
        } else if h > 1.0 {
            Phase::Symmetric
        } else {
            Phase::Broken
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Phase::Broken => "broken",
            Phase::Critical => "critical",
            Phase::Symmetric => "symmetric",
        }
    }

    pub fn check(self, h: f64) -> Result<()> {
        if Phase::of(h) == self {
            Ok(())
        } else {
            Err(LmgError::PhaseMismatch { phase: self.name(), h })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_params() {
        assert!(ModelParams::new(1, 0.5, 1.0).is_err());
        assert!(ModelParams::new(4, -0.1, 1.0).is_err());
        assert!(ModelParams::new(4, 1.1, 1.0).is_err());
        assert!(ModelParams::new(4, 0.5, -1.0).is_err());
        assert!(ModelParams::new(4, 0.5, f64::NAN).is_err());
        assert!(ModelParams::new(2, 0.0, 0.0).is_ok());
    }

    #[test]
    fn sector_layout_even_n() {
        let lower = DickeSector::new(8, Parity::Lower).unwrap();
        assert_eq!(lower.dim(), 5);
        assert_eq!(lower.m_values, vec![-4.0, -2.0, 0.0, 2.0, 4.0]);
        assert!(lower.contains_polarized());
        let upper = DickeSector::new(8, Parity::Upper).unwrap();
        assert_eq!(upper.m_values, vec![-3.0, -1.0, 1.0, 3.0]);
    }

    #[test]
    fn sector_layout_odd_n() {
        let lower = DickeSector::new(3, Parity::Lower).unwrap();
        assert_eq!(lower.m_values, vec![-1.5, 0.5]);
        let upper = DickeSector::new(3, Parity::Upper).unwrap();
        assert_eq!(upper.m_values, vec![-0.5, 1.5]);
        assert!(upper.contains_polarized());
    }

    #[test]
    fn parity_tags() {
        assert_eq!(Parity::from_tag("M1").unwrap(), Parity::Lower);
        assert_eq!(Parity::from_tag("upper").unwrap(), Parity::Upper);
        assert!(Parity::from_tag("M3").is_err());
    }

    #[test]
    fn phase_classification() {
        assert_eq!(Phase::of(1.0), Phase::Critical);
        assert_eq!(Phase::of(1.1), Phase::Symmetric);
        assert_eq!(Phase::of(0.9), Phase::Broken);
        assert!(Phase::Critical.check(1.1).is_err());
    }
}
