//! Perpendicular standing spin waves in a pinned thin film.
//!
//! The film is described in a local frame: `u` along [`FilmSpec::in_plane_axis`],
//! `w` along the film normal (thickness), `v = w × u`. The pinned face of a
//! one-sided film carries the optional capping layer.

mod prism;

pub use prism::{prism_field, Prism};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Polyline, Vec3};
use crate::quantities::{MaterialParams, GAMMA_OVER_2PI, MU0};

/// Boundary conditions on the two film faces. "Top" is the face on the
/// +normal side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pinning {
    PinnedTop,
    PinnedBottom,
    BothFree,
    BothPinned,
}

impl Pinning {
    pub fn is_mixed(self) -> bool {
        matches!(self, Pinning::PinnedTop | Pinning::PinnedBottom)
    }
}

/// How the mode index enters the frequency formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeConvention {
    /// Thickness wavevector nπ/δ.
    #[default]
    IntegerN,
    /// Thickness wavevector (n + ½)π/δ, the one-side-pinned quantization.
    HalfIntegerK,
}

impl std::str::FromStr for ModeConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "integer_n" => Ok(ModeConvention::IntegerN),
            "half_integer_k" => Ok(ModeConvention::HalfIntegerK),
            other => Err(Error::Config(format!("unknown mode convention `{other}`"))),
        }
    }
}

/// Lateral shape of the film.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outline {
    /// `width` along u, `length` along v.
    Rectangle { width: f64, length: f64 },
    /// Disk of radius `arc_radius` clipped to |v| ≤ `straight_length`/2: two
    /// straight sides along u joined by two circular arcs.
    Rounded { arc_radius: f64, straight_length: f64 },
}

impl Outline {
    pub fn contains(&self, u: f64, v: f64) -> bool {
        match *self {
            Outline::Rectangle { width, length } => u.abs() <= 0.5 * width && v.abs() <= 0.5 * length,
            Outline::Rounded { arc_radius, straight_length } => {
                v.abs() <= 0.5 * straight_length && u * u + v * v <= arc_radius * arc_radius
            }
        }
    }

    /// Half extents of the bounding rectangle along (u, v).
    pub fn half_extents(&self) -> (f64, f64) {
        match *self {
            Outline::Rectangle { width, length } => (0.5 * width, 0.5 * length),
            Outline::Rounded { arc_radius, straight_length } => {
                (arc_radius, 0.5 * straight_length.min(2.0 * arc_radius))
            }
        }
    }

    pub fn area(&self) -> f64 {
        match *self {
            Outline::Rectangle { width, length } => width * length,
            Outline::Rounded { arc_radius: r, straight_length } => {
                let h = (0.5 * straight_length).min(r);
                // 2 ∫_{-h}^{h} √(r² − v²) dv
                2.0 * (h * (r * r - h * h).sqrt() + r * r * (h / r).asin())
            }
        }
    }

    /// Rectangles (u0, u1, v0, v1) covering the outline. A rectangle maps to
    /// itself; rounded outlines become `strips` bands along v whose u-extent
    /// is taken at the band center.
    pub fn rectangles(&self, strips: usize) -> Vec<[f64; 4]> {
        match *self {
            Outline::Rectangle { width, length } => {
                vec![[-0.5 * width, 0.5 * width, -0.5 * length, 0.5 * length]]
            }
            Outline::Rounded { arc_radius: r, .. } => {
                let (_, hv) = self.half_extents();
                let n = strips.max(1);
                let dv = 2.0 * hv / n as f64;
                (0..n)
                    .map(|i| {
                        let v0 = -hv + i as f64 * dv;
                        let vc = v0 + 0.5 * dv;
                        let hu = (r * r - vc * vc).max(0.0).sqrt();
                        [-hu, hu, v0, v0 + dv]
                    })
                    .collect()
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Outline::Rectangle { width, length } => width > 0.0 && length > 0.0,
            Outline::Rounded { arc_radius, straight_length } => arc_radius > 0.0 && straight_length > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config("film outline dimensions must be positive".into()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Capping {
    pub material: MaterialParams,
    pub thickness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilmSpec {
    pub material: MaterialParams,
    pub outline: Outline,
    /// Thickness δ (m).
    pub thickness: f64,
    /// Center of the magnetic film volume (m), excluding the capping layer.
    pub center: Vec3,
    /// Unit normal; the thickness direction.
    pub normal: Vec3,
    /// Unit in-plane axis fixing the outline's u direction.
    pub in_plane_axis: Vec3,
    /// Unit direction of the saturated static magnetization.
    pub magnetization: Vec3,
    pub pinning: Pinning,
    pub capping: Option<Capping>,
}

impl FilmSpec {
    /// 3 × 3 μm² YIG film, 80 nm thick, thickness along +y, magnetized along
    /// x, pinned by 10 nm of CoFeB on the +y face.
    pub fn fig1_default() -> Self {
        Self {
            material: MaterialParams::yig(),
            outline: Outline::Rectangle { width: 3.0e-6, length: 3.0e-6 },
            thickness: 80.0e-9,
            center: Vec3::new(0.0, 1.0e-6 + 40.0e-9, 0.0),
            normal: Vec3::y(),
            in_plane_axis: Vec3::x(),
            magnetization: Vec3::x(),
            pinning: Pinning::PinnedTop,
            capping: Some(Capping { material: MaterialParams::cofeb(), thickness: 10.0e-9 }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.material.validate()?;
        self.outline.validate()?;
        if !(self.thickness > 0.0) {
            return Err(Error::Config("film thickness must be positive".into()));
        }
        for (name, v) in
            [("normal", self.normal), ("in-plane axis", self.in_plane_axis), ("magnetization", self.magnetization)]
        {
            if (v.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::Config(format!("film {name} must be a unit vector")));
            }
        }
        if self.normal.dot(&self.in_plane_axis).abs() > 1e-9 {
            return Err(Error::Config("film in-plane axis must be normal to the film normal".into()));
        }
        if let Some(c) = &self.capping {
            c.material.validate()?;
            if !(c.thickness > 0.0) {
                return Err(Error::Config("capping thickness must be positive".into()));
            }
        }
        Ok(())
    }

    /// Local frame axes (u, v, w).
    pub fn frame(&self) -> (Vec3, Vec3, Vec3) {
        let w = self.normal;
        let u = self.in_plane_axis;
        (u, w.cross(&u), w)
    }

    pub fn to_local(&self, p: &Vec3) -> Vec3 {
        let (u, v, w) = self.frame();
        let d = p - self.center;
        Vec3::new(d.dot(&u), d.dot(&v), d.dot(&w))
    }

    pub fn to_global(&self, local: &Vec3) -> Vec3 {
        let (u, v, w) = self.frame();
        self.center + u * local.x + v * local.y + w * local.z
    }

    pub fn volume(&self) -> f64 {
        self.outline.area() * self.thickness
    }

    /// Distance from the pinned face for a local thickness coordinate w
    /// (film spans w ∈ [−δ/2, δ/2]). Symmetric films measure from the bottom.
    pub fn distance_from_pinned_face(&self, w: f64) -> f64 {
        match self.pinning {
            Pinning::PinnedTop => 0.5 * self.thickness - w,
            _ => w + 0.5 * self.thickness,
        }
    }

    /// Copy with the center moved to `center`.
    pub fn centered_at(&self, center: Vec3) -> Self {
        Self { center, ..self.clone() }
    }

    /// Magnetized volumes making up the film and its capping layer.
    pub fn prisms(&self, strips: usize) -> Vec<Prism> {
        let mut out = Vec::new();
        let rects = self.outline.rectangles(strips);
        let half = 0.5 * self.thickness;
        for r in &rects {
            out.push(Prism { lo: [r[0], r[2], -half], hi: [r[1], r[3], half], ms: self.material.ms });
        }
        if let Some(cap) = &self.capping {
            let (w0, w1) = match self.pinning {
                Pinning::PinnedBottom => (-half - cap.thickness, -half),
                _ => (half, half + cap.thickness),
            };
            for r in &rects {
                out.push(Prism { lo: [r[0], r[2], w0], hi: [r[1], r[3], w1], ms: cap.material.ms });
            }
        }
        out
    }
}

/// Thickness wavevector for mode `n` under the film's boundary conditions.
pub fn thickness_wavevector(n: u32, pinning: Pinning, thickness: f64) -> f64 {
    let n = n as f64;
    if pinning.is_mixed() {
        (n + 0.5) * PI / thickness
    } else {
        n * PI / thickness
    }
}

/// PSSW resonance (Hz) for mode `n` at applied field `hext` (A/m):
/// (γμ₀/2π)·√[(H + D q²)(H + D q² + Ms)] with D = 2A/(μ₀Ms).
pub fn pssw_frequency(n: u32, film: &FilmSpec, hext: f64, convention: ModeConvention) -> f64 {
    let m = &film.material;
    let q = match convention {
        ModeConvention::IntegerN => n as f64 * PI / film.thickness,
        ModeConvention::HalfIntegerK => (n as f64 + 0.5) * PI / film.thickness,
    };
    let exchange = 2.0 * m.aex / (MU0 * m.ms) * q * q;
    let h = hext + exchange;
    GAMMA_OVER_2PI * MU0 * (h * (h + m.ms)).sqrt()
}

/// A standing spin-wave mode across the film thickness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsswMode {
    pub n: u32,
    pub pinning: Pinning,
    /// Thickness wavevector (rad/m).
    pub k: f64,
    /// Wavelength 2π/k (m); infinite for the uniform mode.
    pub wavelength: f64,
    /// Resonance frequency (Hz).
    pub frequency: f64,
    /// Decay rate Γ_sw (Hz).
    pub decay: f64,
}

impl PsswMode {
    pub fn new(n: u32, film: &FilmSpec, hext: f64, convention: ModeConvention, decay: f64) -> Self {
        let k = thickness_wavevector(n, film.pinning, film.thickness);
        Self {
            n,
            pinning: film.pinning,
            k,
            wavelength: if k > 0.0 { 2.0 * PI / k } else { f64::INFINITY },
            frequency: pssw_frequency(n, film, hext, convention),
            decay,
        }
    }

    /// Replace the computed frequency, e.g. with a measured resonance.
    pub fn with_frequency(mut self, frequency: f64) -> Self {
        self.frequency = frequency;
        self
    }
}

/// Dimensionless thickness profile of `mode`. `z` is the height measured
/// from the unpinned face for one-sided pinning, and from the bottom face
/// otherwise.
pub fn mode_profile(mode: &PsswMode, film: &FilmSpec, z: f64) -> Result<f64> {
    let d = film.thickness;
    if !(z >= -1e-15 * d && z <= d * (1.0 + 1e-15)) {
        return Err(Error::OutsideFilm { z, thickness: d });
    }
    let n = mode.n as f64;
    Ok(match mode.pinning {
        Pinning::PinnedTop | Pinning::PinnedBottom => (mode.k * (d - z)).sin(),
        Pinning::BothFree => (n * PI * z / d).cos(),
        Pinning::BothPinned => (n * PI * z / d).sin(),
    })
}

/// Field (T) at `p` of the film and capping layer saturated along
/// `magnetization`. Non-rectangular outlines use a 64-strip decomposition.
pub fn stray_field(film: &FilmSpec, magnetization: &Vec3, p: &Vec3) -> Result<Vec3> {
    let (u, v, w) = film.frame();
    let m_local = Vec3::new(magnetization.dot(&u), magnetization.dot(&v), magnetization.dot(&w));
    let local = film.to_local(p);
    let mut b = Vec3::zeros();
    for prism in film.prisms(64) {
        b += prism_field(&prism, &m_local, &local)?;
    }
    Ok(u * b.x + v * b.y + w * b.z)
}

/// Largest |B_film + `applied`| (T) along `wire`, sampled at `per_edge`
/// evenly spaced points on every edge.
pub fn peak_field_on_wire(film: &FilmSpec, wire: &Polyline, applied: &Vec3, per_edge: usize) -> Result<f64> {
    let per_edge = per_edge.max(1);
    let mut peak = 0.0f64;
    for (a, b) in wire.edges() {
        for k in 0..per_edge {
            let p = a + (b - a) * (k as f64 / per_edge as f64);
            peak = peak.max((stray_field(film, &film.magnetization, &p)? + applied).norm());
        }
    }
    Ok(peak)
}

/// Γ = α·f.
pub fn damping_to_decay(alpha: f64, frequency: f64) -> Result<f64> {
    if !(alpha >= 0.0) || !(frequency > 0.0) {
        return Err(Error::Config("damping must be non-negative and frequency positive".into()));
    }
    Ok(alpha * frequency)
}

/// Decay inherited through a dispersive coupling: (g/Δ)²·γ.
pub fn converted_decay(coupling: f64, detuning: f64, gamma: f64) -> Result<f64> {
    if coupling < 0.0 || gamma < 0.0 {
        return Err(Error::Config("coupling and bath decay must be non-negative".into()));
    }
    if detuning.abs() <= coupling {
        return Err(Error::NotDispersive { coupling, detuning });
    }
    Ok((coupling / detuning).powi(2) * gamma)
}

/// One row of the mode table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeRow {
    pub n: u32,
    pub k: f64,
    pub wavelength: f64,
    pub frequency: f64,
}

pub fn mode_table(film: &FilmSpec, hext: f64, convention: ModeConvention, n_max: u32) -> Vec<ModeRow> {
    (0..=n_max)
        .map(|n| {
            let m = PsswMode::new(n, film, hext, convention, 0.0);
            ModeRow { n, k: m.k, wavelength: m.wavelength, frequency: m.frequency }
        })
        .collect()
}
