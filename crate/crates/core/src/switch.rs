//! Magnon-mediated qubit–qubit coupling and the on/off operating points of
//! the switch. Detunings are signed: qubit frequency minus magnon frequency.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magnonics::converted_decay;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwitchConfig {
    pub g1: f64,
    pub g2: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// Inductive coupling (Hz, signed).
    pub g_ind: f64,
    pub gamma_sw: f64,
    pub gamma_cap: f64,
    pub cap_detuning: f64,
    pub cap_coupling: f64,
}

impl SwitchConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("gamma_sw", self.gamma_sw), ("gamma_cap", self.gamma_cap)] {
            if !(v >= 0.0) {
                return Err(Error::Config(format!("{name} must be non-negative")));
            }
        }
        for (g, d) in [(self.g1, self.delta1), (self.g2, self.delta2)] {
            if d.abs() <= g.abs() {
                return Err(Error::NotDispersive { coupling: g.abs(), detuning: d });
            }
        }
        Ok(())
    }

    pub fn with_detuning(self, delta: f64) -> Self {
        Self { delta1: delta, delta2: delta, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MediatedCoupling {
    pub j: f64,
    /// Set when the qubits sit on opposite sides of the magnon mode.
    pub opposite_sides: bool,
}

/// J = g₁g₂(1/Δ₁ + 1/Δ₂)/2.
pub fn magnon_mediated_j(g1: f64, g2: f64, delta1: f64, delta2: f64) -> Result<MediatedCoupling> {
    for (g, d) in [(g1, delta1), (g2, delta2)] {
        if d == 0.0 {
            return Err(Error::NotDispersive { coupling: g.abs(), detuning: d });
        }
    }
    Ok(MediatedCoupling {
        j: g1 * g2 * (1.0 / delta1 + 1.0 / delta2) / 2.0,
        opposite_sides: delta1.signum() != delta2.signum(),
    })
}

pub fn total_coupling(cfg: &SwitchConfig) -> Result<f64> {
    Ok(magnon_mediated_j(cfg.g1, cfg.g2, cfg.delta1, cfg.delta2)?.j + cfg.g_ind)
}

/// Symmetric detuning at which the mediated coupling cancels `g_ind`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OffPoint {
    Finite {
        detuning: f64,
    },
    /// With no inductive coupling any large detuning switches off.
    Asymptotic,
}

pub fn off_detuning(g1: f64, g2: f64, g_ind: f64) -> Result<OffPoint> {
    if !(g1 * g2 > 0.0) {
        return Err(Error::Config("off detuning needs g1·g2 > 0".into()));
    }
    if g_ind == 0.0 {
        return Ok(OffPoint::Asymptotic);
    }
    Ok(OffPoint::Finite { detuning: -g1 * g2 / g_ind })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BroadeningBudget {
    pub magnon_qubit1: f64,
    pub magnon_qubit2: f64,
    pub capping: f64,
    pub total: f64,
}

pub fn broadening_budget(cfg: &SwitchConfig) -> Result<BroadeningBudget> {
    let magnon_qubit1 = converted_decay(cfg.g1.abs(), cfg.delta1, cfg.gamma_sw)?;
    let magnon_qubit2 = converted_decay(cfg.g2.abs(), cfg.delta2, cfg.gamma_sw)?;
    let capping = converted_decay(cfg.cap_coupling.abs(), cfg.cap_detuning, cfg.gamma_cap)?;
    Ok(BroadeningBudget { magnon_qubit1, magnon_qubit2, capping, total: magnon_qubit1 + magnon_qubit2 + capping })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatingPointReport {
    #[serde(rename = "J_off_detuning")]
    pub j_off_detuning: OffPoint,
    #[serde(rename = "J_on")]
    pub j_on: f64,
    pub on_detuning: f64,
    pub g_ind: f64,
    pub total_on: f64,
    pub total_off: f64,
    /// Mediated coupling at the mirrored OFF detuning, for comparison.
    pub j_mirrored: Option<f64>,
    pub broadening_budget: BroadeningBudget,
}

/// Report for `cfg` switched ON at `on_detuning` and OFF at the symmetric
/// cancellation point. The budget is evaluated at the ON point.
pub fn operating_point(cfg: &SwitchConfig, on_detuning: f64) -> Result<OperatingPointReport> {
    let on = cfg.with_detuning(on_detuning);
    on.validate()?;
    let j_on = magnon_mediated_j(cfg.g1, cfg.g2, on_detuning, on_detuning)?.j;
    let off = off_detuning(cfg.g1, cfg.g2, cfg.g_ind)?;
    let (total_off, j_mirrored) = match off {
        OffPoint::Finite { detuning } => (
            total_coupling(&cfg.with_detuning(detuning))?,
            Some(magnon_mediated_j(cfg.g1, cfg.g2, -detuning, -detuning)?.j),
        ),
        OffPoint::Asymptotic => (cfg.g_ind, None),
    };
    Ok(OperatingPointReport {
        j_off_detuning: off,
        j_on,
        on_detuning,
        g_ind: cfg.g_ind,
        total_on: j_on + cfg.g_ind,
        total_off,
        j_mirrored,
        broadening_budget: broadening_budget(&on)?,
    })
}
