//! Physical constants, field-unit conversion and material records.
//!
//! All internal quantities are SI. Frequencies are ordinary frequencies in Hz;
//! Gauss, GHz and μm only appear at the configuration and output boundary.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vacuum permeability (N/A²), at the rounded value the device analysis uses.
pub const MU0: f64 = 1.256e-6;
/// Bohr magneton (J/T).
pub const MU_B: f64 = 9.274_010_078_3e-24;
/// Planck constant (J·s).
pub const H_PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant (J·s).
pub const HBAR: f64 = H_PLANCK / (2.0 * PI);
/// Gyromagnetic ratio γ/2π (Hz/T).
pub const GAMMA_OVER_2PI: f64 = 28.0e9;

pub const GAUSS: f64 = 1.0e-4;
pub const MICRON: f64 = 1.0e-6;
pub const NANOMETER: f64 = 1.0e-9;
pub const GHZ: f64 = 1.0e9;
pub const MHZ: f64 = 1.0e6;
pub const NANOAMP: f64 = 1.0e-9;

/// The constant set as a value, for reports and manifests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    pub mu0: f64,
    pub mu_b: f64,
    pub h: f64,
    pub hbar: f64,
    pub gamma_over_2pi: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self { mu0: MU0, mu_b: MU_B, h: H_PLANCK, hbar: HBAR, gamma_over_2pi: GAMMA_OVER_2PI }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldUnit {
    Gauss,
    Tesla,
    /// H-field in A/m, converted through μ₀.
    AmperePerMeter,
}

impl FieldUnit {
    fn to_tesla(self) -> f64 {
        match self {
            FieldUnit::Gauss => GAUSS,
            FieldUnit::Tesla => 1.0,
            FieldUnit::AmperePerMeter => MU0,
        }
    }
}

impl FromStr for FieldUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "g" | "gauss" => Ok(FieldUnit::Gauss),
            "t" | "tesla" => Ok(FieldUnit::Tesla),
            "a/m" | "ampere_per_meter" => Ok(FieldUnit::AmperePerMeter),
            other => Err(Error::Config(format!("unknown field unit `{other}`"))),
        }
    }
}

impl fmt::Display for FieldUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldUnit::Gauss => "gauss",
            FieldUnit::Tesla => "tesla",
            FieldUnit::AmperePerMeter => "A/m",
        })
    }
}

/// Linear conversion of a field magnitude between units.
pub fn field_unit_convert(value: f64, from: FieldUnit, to: FieldUnit) -> Result<f64> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::Config(format!("field magnitude must be finite and non-negative, got {value}")));
    }
    if from == to {
        return Ok(value);
    }
    Ok(value * from.to_tesla() / to.to_tesla())
}

/// Magnetic material record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    pub name: String,
    /// Saturation magnetization (A/m).
    pub ms: f64,
    /// Exchange stiffness (J/m).
    pub aex: f64,
    /// Net spins per unit volume (m⁻³).
    pub spin_density: f64,
    /// Gilbert damping α.
    pub damping_alpha: f64,
    /// Fixed intrinsic decay rate (Hz), when known independently of α.
    pub intrinsic_decay: Option<f64>,
}

impl MaterialParams {
    pub fn new(name: impl Into<String>, ms: f64, aex: f64, spin_density: f64, damping_alpha: f64) -> Result<Self> {
        let m = Self { name: name.into(), ms, aex, spin_density, damping_alpha, intrinsic_decay: None };
        m.validate()?;
        Ok(m)
    }

    pub fn with_intrinsic_decay(mut self, decay_hz: f64) -> Self {
        self.intrinsic_decay = Some(decay_hz);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.ms) || !positive(self.aex) || !positive(self.spin_density) {
            return Err(Error::Config(format!("material `{}`: Ms, Aex and spin density must be positive", self.name)));
        }
        if !(self.damping_alpha.is_finite() && self.damping_alpha >= 0.0) {
            return Err(Error::Config(format!("material `{}`: damping must be non-negative", self.name)));
        }
        if let Some(g) = self.intrinsic_decay {
            if !(g.is_finite() && g >= 0.0) {
                return Err(Error::Config(format!("material `{}`: intrinsic decay must be non-negative", self.name)));
            }
        }
        Ok(())
    }

    /// Yttrium iron garnet thin film.
    pub fn yig() -> Self {
        Self {
            name: "YIG".into(),
            ms: 1.92e5,
            aex: 3.1e-12,
            spin_density: 2.14e28,
            damping_alpha: 1.0e-4,
            intrinsic_decay: Some(10.0 * MHZ),
        }
    }

    /// CoFeB pinning layer. Ms follows from one Bohr magneton per net spin.
    pub fn cofeb() -> Self {
        let spin_density = 1.61e29;
        Self {
            name: "CoFeB".into(),
            ms: spin_density * MU_B,
            aex: 1.5e-11,
            spin_density,
            damping_alpha: 4.0e-3,
            intrinsic_decay: Some(300.0 * MHZ),
        }
    }

    /// Bundled record by name (case-insensitive).
    pub fn bundled(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "yig" => Some(Self::yig()),
            "cofeb" => Some(Self::cofeb()),
            _ => None,
        }
    }
}

/// Magnetic moment carried by one net spin, Ms / spin_density (J/T).
pub fn moment_per_spin(m: &MaterialParams) -> f64 {
    m.ms / m.spin_density
}
