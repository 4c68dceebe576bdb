//! Strict JSON scenario schema. Keys carry their unit as a suffix and are
//! converted to SI on load; unknown keys are rejected.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Deserialize;

use crate::coupling::{check_clearance, place_film, CouplingModel, ModeWeight, QuadratureSettings};
use crate::error::{Error, Result};
use crate::geometry::{
    make_inset_arc_loop, make_square_loop, ArcShape, CurrentLoop, PathSegment, Vec3, DEFAULT_SAGITTA_TOL,
};
use crate::magnonics::{Capping, FilmSpec, ModeConvention, Outline, Pinning, PsswMode};
use crate::quantities::{field_unit_convert, FieldUnit, MaterialParams, GHZ, MHZ, MICRON, NANOAMP, NANOMETER};
use crate::spectra::{linspace, QubitParams, SpinWaveOscillator};
use crate::switch::SwitchConfig;

pub const FIG2: &str = include_str!("../../scenarios/fig2.json");
pub const FIG3: &str = include_str!("../../scenarios/fig3.json");
pub const FIG4: &str = include_str!("../../scenarios/fig4.json");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    /// Free-form provenance notes, key → text.
    #[serde(default)]
    pub notes: BTreeMap<String, String>,
    #[serde(default)]
    pub materials: Vec<MaterialConfig>,
    #[serde(default)]
    pub loops: Vec<LoopConfig>,
    pub film: Option<FilmConfig>,
    #[serde(rename = "Hext_gauss", default)]
    pub hext_gauss: f64,
    pub mode: Option<ModeConfig>,
    pub coupling: Option<CouplingConfig>,
    pub qubit: Option<QubitConfig>,
    pub spin_wave: Option<SpinWaveConfig>,
    pub spectrum: Option<SpectrumConfig>,
    #[serde(default)]
    pub sweeps: Vec<SweepConfig>,
    pub quadrature: Option<QuadratureSettings>,
    pub field: Option<FieldConfig>,
    pub inductance: Option<InductanceConfig>,
    pub switch: Option<SwitchScenario>,
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub name: String,
    #[serde(rename = "Ms_A_per_m")]
    pub ms_a_per_m: f64,
    #[serde(rename = "Aex_J_per_m")]
    pub aex_j_per_m: f64,
    pub spin_density_per_m3: f64,
    pub damping_alpha: f64,
    #[serde(rename = "intrinsic_decay_MHz")]
    pub intrinsic_decay_mhz: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopConfig {
    pub name: String,
    #[serde(rename = "current_nA")]
    pub current_na: f64,
    pub geometry: LoopGeometry,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LoopGeometry {
    Square {
        side_um: f64,
        center_um: [f64; 3],
        normal: [f64; 3],
    },
    Fig4Arc {
        left_right_radius_um: f64,
        top_bottom_radius_um: f64,
        center_um: [f64; 3],
        shape: ArcShape,
        #[serde(default)]
        inset_um: f64,
    },
    Segments(Vec<SegmentConfig>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SegmentConfig {
    Line { start_um: [f64; 3], end_um: [f64; 3] },
    Arc { center_um: [f64; 3], radius_um: f64, normal: [f64; 3], start_angle_rad: f64, sweep_rad: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum OutlineConfig {
    Rectangle { width_um: f64, length_um: f64 },
    Rounded { arc_radius_um: f64, straight_length_um: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CappingConfig {
    pub material: String,
    pub thickness_nm: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilmConfig {
    pub material: String,
    pub outline: OutlineConfig,
    pub thickness_nm: f64,
    /// Film center; commands that place the film relative to a loop ignore it.
    #[serde(default)]
    pub center_um: [f64; 3],
    pub normal: [f64; 3],
    pub in_plane_axis: [f64; 3],
    pub magnetization: [f64; 3],
    pub pinning: Pinning,
    pub capping: Option<CappingConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    pub n: u32,
    #[serde(default)]
    pub convention: ModeConvention,
    #[serde(rename = "frequency_override_GHz")]
    pub frequency_override_ghz: Option<f64>,
    #[serde(rename = "decay_MHz")]
    pub decay_mhz: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingConfig {
    /// Loop whose field drives the film.
    #[serde(rename = "loop")]
    pub loop_name: String,
    pub d_um: Option<f64>,
    #[serde(default)]
    pub weight: ModeWeight,
    #[serde(default = "half")]
    pub spin: f64,
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitConfig {
    #[serde(rename = "delta_GHz")]
    pub delta_ghz: f64,
    #[serde(rename = "epsilon_GHz", default)]
    pub epsilon_ghz: f64,
    #[serde(rename = "gamma_MHz")]
    pub gamma_mhz: f64,
    #[serde(rename = "Ip_nA")]
    pub ip_na: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinWaveConfig {
    /// Defaults to the mode frequency (after any override).
    #[serde(rename = "frequency_GHz")]
    pub frequency_ghz: Option<f64>,
    #[serde(rename = "gamma_MHz")]
    pub gamma_mhz: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    #[serde(rename = "couplings_MHz")]
    pub couplings_mhz: Vec<f64>,
    pub bias: SweepConfig,
    pub drive: SweepConfig,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub name: Option<String>,
    /// Swept key, unit suffix included (`d_um`, `epsilon_GHz`, `drive_GHz`).
    pub variable: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    #[serde(default)]
    pub spacing: Spacing,
    /// Fit a log–log slope to this sweep and report it.
    #[serde(default)]
    pub fit_slope: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    #[serde(rename = "loop")]
    pub loop_name: String,
    pub region_min_um: [f64; 3],
    pub region_max_um: [f64; 3],
    pub counts: [usize; 3],
    /// Film-to-loop distances at which the stray field is evaluated at the
    /// loop center.
    pub stray: Option<SweepConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InductanceConfig {
    pub loops: Vec<String>,
    #[serde(default = "default_inductance_tol")]
    pub tol: f64,
}

fn default_inductance_tol() -> f64 {
    1e-6
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwitchScenario {
    #[serde(rename = "g1_MHz")]
    pub g1_mhz: f64,
    #[serde(rename = "g2_MHz")]
    pub g2_mhz: f64,
    #[serde(rename = "g_ind_MHz")]
    pub g_ind_mhz: f64,
    #[serde(rename = "on_detuning_MHz")]
    pub on_detuning_mhz: f64,
    #[serde(rename = "gamma_sw_MHz")]
    pub gamma_sw_mhz: f64,
    #[serde(rename = "gamma_cap_MHz")]
    pub gamma_cap_mhz: f64,
    #[serde(rename = "cap_detuning_MHz")]
    pub cap_detuning_mhz: f64,
    #[serde(rename = "cap_coupling_MHz")]
    pub cap_coupling_mhz: f64,
    /// Qubit loops for the end-to-end check: g from the coupling module,
    /// g_ind from the inductance module.
    pub pair: Option<[String; 2]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: String,
}

fn vec3(a: [f64; 3]) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

fn um3(a: [f64; 3]) -> Vec3 {
    vec3(a) * MICRON
}

fn unit(a: [f64; 3], what: &str) -> Result<Vec3> {
    let v = vec3(a);
    let n = v.norm();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Config(format!("{what} must be a non-zero vector")));
    }
    Ok(v / n)
}

impl SweepConfig {
    /// Sweep values in the key's own unit.
    pub fn values(&self) -> Result<Vec<f64>> {
        let label = self.name.as_deref().unwrap_or(&self.variable);
        if self.steps == 0 {
            return Err(Error::Config(format!("sweep `{label}` has no steps")));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Config(format!("sweep `{label}` has a non-finite bound")));
        }
        if self.steps > 1 && self.start == self.stop {
            return Err(Error::Config(format!("sweep `{label}` is not monotone")));
        }
        Ok(match self.spacing {
            Spacing::Linear => linspace(self.start, self.stop, self.steps),
            Spacing::Log => {
                if !(self.start > 0.0 && self.stop > 0.0) {
                    return Err(Error::Config(format!("log sweep `{label}` needs positive bounds")));
                }
                linspace(self.start.ln(), self.stop.ln(), self.steps).into_iter().map(f64::exp).collect()
            }
        })
    }

    /// Values converted to SI, after checking the swept key is `expected`.
    pub fn si_values(&self, expected: &str) -> Result<Vec<f64>> {
        if self.variable != expected {
            return Err(Error::Config(format!("sweep variable `{}` where `{expected}` was expected", self.variable)));
        }
        let scale = unit_scale(expected)?;
        Ok(self.values()?.into_iter().map(|v| v * scale).collect())
    }
}

fn unit_scale(key: &str) -> Result<f64> {
    let suffix = key.rsplit('_').next().unwrap_or("");
    Ok(match suffix {
        "um" => MICRON,
        "nm" => NANOMETER,
        "GHz" => GHZ,
        "MHz" => MHZ,
        "nA" => NANOAMP,
        _ => return Err(Error::Config(format!("key `{key}` has no recognised unit suffix"))),
    })
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Error::Config(format!("scenario: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn bundled(name: &str) -> Option<&'static str> {
        match name {
            "fig2" => Some(FIG2),
            "fig3" => Some(FIG3),
            "fig4" => Some(FIG4),
            _ => None,
        }
    }

    /// Checks that names resolve, ranges are non-empty and sweeps are monotone.
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for l in &self.loops {
            if !seen.insert(l.name.as_str()) {
                return Err(Error::Config(format!("duplicate loop name `{}`", l.name)));
            }
            self.build_loop(&l.name)?;
        }
        for m in &self.materials {
            self.material(&m.name)?;
        }
        if self.film.is_some() {
            self.film_spec()?;
        }
        if let Some(c) = &self.coupling {
            self.find_loop(&c.loop_name)?;
            if !(c.spin > 0.0) {
                return Err(Error::Config("coupling spin must be positive".into()));
            }
            if self.film.is_some() {
                self.check_film_clearance(c)?;
            }
        }
        if let Some(f) = &self.field {
            self.find_loop(&f.loop_name)?;
            if let Some(s) = &f.stray {
                s.si_values("d_um")?;
            }
        }
        if let Some(i) = &self.inductance {
            for n in &i.loops {
                self.find_loop(n)?;
            }
        }
        for s in &self.sweeps {
            s.values()?;
        }
        if let Some(sp) = &self.spectrum {
            sp.bias.si_values("epsilon_GHz")?;
            sp.drive.si_values("drive_GHz")?;
        }
        if let Some(q) = &self.quadrature {
            q.validate()?;
        }
        if let Some(sw) = &self.switch {
            if let Some(pair) = &sw.pair {
                for n in pair {
                    self.find_loop(n)?;
                }
            }
            self.switch_config()?.validate()?;
        }
        Ok(())
    }

    /// Every loop must clear the film at every distance the film is placed.
    fn check_film_clearance(&self, c: &CouplingConfig) -> Result<()> {
        let film = self.film_spec()?;
        let anchor = self.build_loop(&c.loop_name)?.discretize(DEFAULT_SAGITTA_TOL);
        let mut distances: Vec<f64> = c.d_um.map(|d| d * MICRON).into_iter().collect();
        for sw in self.sweeps.iter().filter(|s| s.variable == "d_um") {
            distances.extend(sw.si_values("d_um")?);
        }
        let wires = self
            .loops
            .iter()
            .map(|l| Ok((l.name.as_str(), self.build_loop(&l.name)?.discretize(DEFAULT_SAGITTA_TOL))))
            .collect::<Result<Vec<_>>>()?;
        for d in distances {
            let placed = place_film(&anchor, &film, d)?;
            for (name, wire) in &wires {
                check_clearance(wire, &placed)
                    .map_err(|e| Error::Geometry(format!("loop `{name}` at d = {} um: {e}", d / MICRON)))?;
            }
        }
        Ok(())
    }

    pub fn material(&self, name: &str) -> Result<MaterialParams> {
        if let Some(m) = self.materials.iter().find(|m| m.name == name) {
            let mut p = MaterialParams::new(
                m.name.clone(),
                m.ms_a_per_m,
                m.aex_j_per_m,
                m.spin_density_per_m3,
                m.damping_alpha,
            )?;
            if let Some(d) = m.intrinsic_decay_mhz {
                p = p.with_intrinsic_decay(d * MHZ);
            }
            p.validate()?;
            return Ok(p);
        }
        MaterialParams::bundled(name).ok_or_else(|| Error::Config(format!("unknown material `{name}`")))
    }

    fn find_loop(&self, name: &str) -> Result<&LoopConfig> {
        self.loops.iter().find(|l| l.name == name).ok_or_else(|| Error::Config(format!("unknown loop `{name}`")))
    }

    pub fn build_loop(&self, name: &str) -> Result<CurrentLoop> {
        let l = self.find_loop(name)?;
        let current = l.current_na * NANOAMP;
        match &l.geometry {
            LoopGeometry::Square { side_um, center_um, normal } => {
                make_square_loop(side_um * MICRON, um3(*center_um), unit(*normal, "loop normal")?, current)
            }
            LoopGeometry::Fig4Arc { left_right_radius_um, top_bottom_radius_um, center_um, shape, inset_um } => {
                make_inset_arc_loop(
                    left_right_radius_um * MICRON,
                    top_bottom_radius_um * MICRON,
                    um3(*center_um),
                    current,
                    *shape,
                    inset_um * MICRON,
                )
            }
            LoopGeometry::Segments(segs) => {
                let segments = segs
                    .iter()
                    .map(|s| {
                        Ok(match s {
                            SegmentConfig::Line { start_um, end_um } => PathSegment::line(um3(*start_um), um3(*end_um)),
                            SegmentConfig::Arc { center_um, radius_um, normal, start_angle_rad, sweep_rad } => {
                                PathSegment::arc(
                                    um3(*center_um),
                                    radius_um * MICRON,
                                    unit(*normal, "arc normal")?,
                                    *start_angle_rad,
                                    *sweep_rad,
                                )
                            }
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                CurrentLoop::new(segments, current)
            }
        }
    }

    pub fn loop_names(&self) -> Vec<&str> {
        self.loops.iter().map(|l| l.name.as_str()).collect()
    }

    pub fn film_spec(&self) -> Result<FilmSpec> {
        let f = self.film.as_ref().ok_or_else(|| Error::Config("scenario has no film".into()))?;
        let outline = match f.outline {
            OutlineConfig::Rectangle { width_um, length_um } => {
                Outline::Rectangle { width: width_um * MICRON, length: length_um * MICRON }
            }
            OutlineConfig::Rounded { arc_radius_um, straight_length_um } => {
                Outline::Rounded { arc_radius: arc_radius_um * MICRON, straight_length: straight_length_um * MICRON }
            }
        };
        let capping = match &f.capping {
            Some(c) => Some(Capping { material: self.material(&c.material)?, thickness: c.thickness_nm * NANOMETER }),
            None => None,
        };
        let spec = FilmSpec {
            material: self.material(&f.material)?,
            outline,
            thickness: f.thickness_nm * NANOMETER,
            center: um3(f.center_um),
            normal: unit(f.normal, "film normal")?,
            in_plane_axis: unit(f.in_plane_axis, "film in-plane axis")?,
            magnetization: unit(f.magnetization, "film magnetization")?,
            pinning: f.pinning,
            capping,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Applied field (A/m).
    pub fn hext(&self) -> Result<f64> {
        field_unit_convert(self.hext_gauss, FieldUnit::Gauss, FieldUnit::AmperePerMeter)
    }

    pub fn mode_config(&self) -> Result<&ModeConfig> {
        self.mode.as_ref().ok_or_else(|| Error::Config("scenario has no mode".into()))
    }

    /// The selected mode, with the frequency override applied when present.
    pub fn pssw_mode(&self, film: &FilmSpec) -> Result<PsswMode> {
        let m = self.mode_config()?;
        let mode = PsswMode::new(m.n, film, self.hext()?, m.convention, m.decay_mhz * MHZ);
        Ok(match m.frequency_override_ghz {
            Some(f) => mode.with_frequency(f * GHZ),
            None => mode,
        })
    }

    pub fn coupling_config(&self) -> Result<&CouplingConfig> {
        self.coupling.as_ref().ok_or_else(|| Error::Config("scenario has no coupling section".into()))
    }

    pub fn coupling_model(&self) -> Result<CouplingModel> {
        let c = self.coupling_config()?;
        Ok(CouplingModel { weight: c.weight, spin: c.spin })
    }

    pub fn quadrature_settings(&self) -> QuadratureSettings {
        self.quadrature.unwrap_or_default()
    }

    pub fn qubit_params(&self) -> Result<QubitParams> {
        let q = self.qubit.as_ref().ok_or_else(|| Error::Config("scenario has no qubit".into()))?;
        let p = QubitParams {
            delta: q.delta_ghz * GHZ,
            epsilon: q.epsilon_ghz * GHZ,
            gamma: q.gamma_mhz * MHZ,
            ip: q.ip_na * NANOAMP,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn spin_wave(&self) -> Result<SpinWaveOscillator> {
        let s = self.spin_wave.as_ref().ok_or_else(|| Error::Config("scenario has no spin_wave".into()))?;
        let frequency = match s.frequency_ghz {
            Some(f) => f * GHZ,
            None => self.pssw_mode(&self.film_spec()?)?.frequency,
        };
        let sw = SpinWaveOscillator { frequency, gamma: s.gamma_mhz * MHZ };
        sw.validate()?;
        Ok(sw)
    }

    pub fn spectrum_couplings(&self) -> Result<Vec<Complex64>> {
        let sp = self.spectrum.as_ref().ok_or_else(|| Error::Config("scenario has no spectrum section".into()))?;
        if sp.couplings_mhz.is_empty() {
            return Err(Error::Config("spectrum needs at least one coupling".into()));
        }
        Ok(sp.couplings_mhz.iter().map(|g| Complex64::new(g * MHZ, 0.0)).collect())
    }

    pub fn switch_config(&self) -> Result<SwitchConfig> {
        let s = self.switch.as_ref().ok_or_else(|| Error::Config("scenario has no switch section".into()))?;
        let on = s.on_detuning_mhz * MHZ;
        let cfg = SwitchConfig {
            g1: s.g1_mhz * MHZ,
            g2: s.g2_mhz * MHZ,
            delta1: on,
            delta2: on,
            g_ind: s.g_ind_mhz * MHZ,
            gamma_sw: s.gamma_sw_mhz * MHZ,
            gamma_cap: s.gamma_cap_mhz * MHZ,
            cap_detuning: s.cap_detuning_mhz * MHZ,
            cap_coupling: s.cap_coupling_mhz * MHZ,
        };
        Ok(cfg)
    }

    /// Apply the global command-line overrides.
    pub fn apply_overrides(&mut self, o: &Overrides) {
        if let Some(tol) = o.tol {
            let mut q = self.quadrature_settings();
            q.rel_tol = tol;
            self.quadrature = Some(q);
            if let Some(i) = &mut self.inductance {
                i.tol = tol;
            }
        }
        if let Some(m) = &mut self.mode {
            if let Some(c) = o.convention {
                m.convention = c;
            }
            if let Some(f) = o.mode_freq_override_ghz {
                m.frequency_override_ghz = Some(f);
            }
        }
    }
}

/// Values given on the command line that take precedence over the scenario.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub convention: Option<ModeConvention>,
    pub mode_freq_override_ghz: Option<f64>,
}
