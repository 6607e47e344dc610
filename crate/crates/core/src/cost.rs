//! Hardware cost of an RAA versus a ULA with hybrid beamforming.
//!
//! An RAA needs `N M` antennas and an `N_RF x N` switch network; the
//! hybrid ULA needs `M` antennas and `N_RF M` phase shifters.

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    pub p_switch: f64,
    pub p_antenna: f64,
    pub p_phase_shifter: f64,
    pub m: usize,
    pub n: usize,
    pub n_rf: usize,
}

impl CostParams {
    /// Unit prices used for the 128-element, 16-chain comparison.
    pub fn reference(m: usize, n: usize, n_rf: usize) -> Self {
        Self {
            p_switch: 14.31,
            p_antenna: 0.01,
            p_phase_shifter: 131.2,
            m,
            n,
            n_rf,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("switch", self.p_switch),
            ("antenna", self.p_antenna),
            ("phase shifter", self.p_phase_shifter),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} price must be non-negative, got {v}")));
            }
        }
        Ok(())
    }
}

/// `N_RF N p_sw + N M p_ant`.
pub fn cost_raa(p: &CostParams) -> f64 {
    (p.n_rf * p.n) as f64 * p.p_switch + (p.n * p.m) as f64 * p.p_antenna
}

/// `N_RF M p_ps + M p_ant`.
pub fn cost_ula(p: &CostParams) -> f64 {
    (p.n_rf * p.m) as f64 * p.p_phase_shifter + p.m as f64 * p.p_antenna
}
