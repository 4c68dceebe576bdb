//! Qubit–magnon coupling from the loop field integrated over the film.
//!
//! g·h = √(2S) μB ∫ ρ w(r) (B·e₁ + i B·e₂)/2 d³r / √(∫ ρ d³r), with e₁ × e₂
//! along the static magnetization. Reported in Hz (energy / h).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{plane_basis, FieldGrid, FieldSource, Polyline, Vec3, WIRE_EXCLUSION_RADIUS};
use crate::magnonics::{mode_profile, FilmSpec, PsswMode};
use crate::quantities::{H_PLANCK, MU_B};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSettings {
    /// Midpoint cells along (u, v, w) at the coarsest level.
    pub base_counts: [usize; 3],
    pub refinement_factor: usize,
    pub rel_tol: f64,
    pub max_levels: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self { base_counts: [16, 16, 8], refinement_factor: 2, rel_tol: 5e-3, max_levels: 4 }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::Config("quadrature tolerance must be positive".into()));
        }
        if self.base_counts.iter().any(|&c| c < 2) || self.base_counts[2] < 8 {
            return Err(Error::Config("quadrature needs >= 2 cells per axis and >= 8 across the thickness".into()));
        }
        if self.refinement_factor < 2 || self.max_levels == 0 {
            return Err(Error::Config("refinement factor >= 2 and at least one level required".into()));
        }
        Ok(())
    }

    fn counts(&self, level: usize) -> [usize; 3] {
        let f = self.refinement_factor.pow(level as u32);
        self.base_counts.map(|c| c * f)
    }
}

/// Spatial weight w(r) multiplying the transverse field.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeWeight {
    /// e^{ikζ}, ζ the distance from the pinned face and k the mode's
    /// thickness wavevector.
    #[default]
    TravelingPhase,
    /// Real thickness profile of the standing mode.
    StandingProfile,
    /// e^{ik·r} with r the global position.
    PlaneWave(Vec3),
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingModel {
    pub weight: ModeWeight,
    pub spin: f64,
}

impl Default for CouplingModel {
    fn default() -> Self {
        Self { weight: ModeWeight::TravelingPhase, spin: 0.5 }
    }
}

/// Signed contributions (Hz) of Re(w)·B·eᵢ to the coupling.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct SignBreakdown {
    pub e1_positive: f64,
    pub e1_negative: f64,
    pub e2_positive: f64,
    pub e2_negative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingResult {
    /// Complex coupling g/h (Hz).
    pub g: Complex64,
    /// Relative change between the last two refinement levels.
    pub achieved_tol: f64,
    pub npoints: usize,
    pub levels: usize,
    pub converged: bool,
    pub breakdown: SignBreakdown,
}

impl CouplingResult {
    pub fn magnitude(&self) -> f64 {
        self.g.norm()
    }
}

struct Level {
    g: Complex64,
    npoints: usize,
    breakdown: SignBreakdown,
}

fn weight_at(weight: &ModeWeight, film: &FilmSpec, mode: &PsswMode, w_local: f64, r: &Vec3) -> Result<Complex64> {
    Ok(match weight {
        ModeWeight::TravelingPhase => {
            let zeta = film.distance_from_pinned_face(w_local);
            Complex64::from_polar(1.0, mode.k * zeta)
        }
        ModeWeight::StandingProfile => {
            let zeta = film.distance_from_pinned_face(w_local).clamp(0.0, film.thickness);
            let z = if film.pinning.is_mixed() { film.thickness - zeta } else { zeta };
            Complex64::new(mode_profile(mode, film, z)?, 0.0)
        }
        ModeWeight::PlaneWave(k) => Complex64::from_polar(1.0, k.dot(r)),
        ModeWeight::Uniform => Complex64::new(1.0, 0.0),
    })
}

fn integrate_level<S: FieldSource + ?Sized>(
    source: &S,
    film: &FilmSpec,
    mode: &PsswMode,
    model: &CouplingModel,
    counts: [usize; 3],
) -> Result<Level> {
    let (hu, hv) = film.outline.half_extents();
    let hw = 0.5 * film.thickness;
    let [nu, nv, nw] = counts;
    let du = 2.0 * hu / nu as f64;
    let dv = 2.0 * hv / nv as f64;
    let dw = 2.0 * hw / nw as f64;
    let cell = du * dv * dw;
    let (e1, e2) = plane_basis(&film.magnetization);
    let rho = film.material.spin_density;

    // one row per u index; rows reduced in index order afterwards
    let rows: Vec<Result<(Complex64, f64, SignBreakdown)>> = (0..nu)
        .into_par_iter()
        .map(|iu| {
            let u = -hu + (iu as f64 + 0.5) * du;
            let mut acc = Complex64::new(0.0, 0.0);
            let mut volume = 0.0;
            let mut bd = SignBreakdown::default();
            for iv in 0..nv {
                let v = -hv + (iv as f64 + 0.5) * dv;
                if !film.outline.contains(u, v) {
                    continue;
                }
                for iw in 0..nw {
                    let w = -hw + (iw as f64 + 0.5) * dw;
                    let r = film.to_global(&Vec3::new(u, v, w));
                    let b = source.field_at(&r)?;
                    let wt = weight_at(&model.weight, film, mode, w, &r)?;
                    let (b1, b2) = (b.dot(&e1), b.dot(&e2));
                    acc += wt * Complex64::new(b1, b2) * 0.5;
                    volume += 1.0;
                    let (p1, p2) = (wt.re * b1, wt.re * b2);
                    if p1 >= 0.0 {
                        bd.e1_positive += p1
                    } else {
                        bd.e1_negative += p1
                    }
                    if p2 >= 0.0 {
                        bd.e2_positive += p2
                    } else {
                        bd.e2_negative += p2
                    }
                }
            }
            Ok((acc, volume, bd))
        })
        .collect();

    let mut sum = Complex64::new(0.0, 0.0);
    let mut count = 0.0;
    let mut bd = SignBreakdown::default();
    for row in rows {
        let (a, c, b) = row?;
        sum += a;
        count += c;
        bd.e1_positive += b.e1_positive;
        bd.e1_negative += b.e1_negative;
        bd.e2_positive += b.e2_positive;
        bd.e2_negative += b.e2_negative;
    }
    if count == 0.0 {
        return Err(Error::Config("film outline contains no quadrature points".into()));
    }
    let scale = (2.0 * model.spin).sqrt() * MU_B / H_PLANCK;
    let numerator_scale = scale * rho * cell;
    let norm = (rho * cell * count).sqrt();
    let half = 0.5 * numerator_scale / norm;
    Ok(Level {
        g: sum * numerator_scale / norm,
        npoints: count as usize,
        breakdown: SignBreakdown {
            e1_positive: bd.e1_positive * half,
            e1_negative: bd.e1_negative * half,
            e2_positive: bd.e2_positive * half,
            e2_negative: bd.e2_negative * half,
        },
    })
}

/// Axis-aligned bounds of the film (and capping layer) in its local frame.
fn film_local_box(film: &FilmSpec) -> ([f64; 3], [f64; 3]) {
    let (hu, hv) = film.outline.half_extents();
    let hw = 0.5 * film.thickness;
    let cap = film.capping.as_ref().map_or(0.0, |c| c.thickness);
    let (w0, w1) = match film.pinning {
        crate::magnonics::Pinning::PinnedBottom => (-hw - cap, hw),
        _ => (-hw, hw + cap),
    };
    ([-hu, -hv, w0], [hu, hv, w1])
}

/// Error if any wire edge passes within the exclusion radius of the film.
pub fn check_clearance(wire: &Polyline, film: &FilmSpec) -> Result<()> {
    let (lo, hi) = film_local_box(film);
    let r = WIRE_EXCLUSION_RADIUS;
    let lo = [lo[0] - r, lo[1] - r, lo[2] - r];
    let hi = [hi[0] + r, hi[1] + r, hi[2] + r];
    for (i, (a, b)) in wire.edges().enumerate() {
        let a = film.to_local(&a);
        let b = film.to_local(&b);
        if segment_hits_box(&a, &b, &lo, &hi) {
            return Err(Error::Geometry(format!("film intersects loop wire segment {i}")));
        }
    }
    Ok(())
}

fn segment_hits_box(a: &Vec3, b: &Vec3, lo: &[f64; 3], hi: &[f64; 3]) -> bool {
    let d = b - a;
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for k in 0..3 {
        if d[k].abs() < 1e-300 {
            if a[k] < lo[k] || a[k] > hi[k] {
                return false;
            }
        } else {
            let (mut ta, mut tb) = ((lo[k] - a[k]) / d[k], (hi[k] - a[k]) / d[k]);
            if ta > tb {
                std::mem::swap(&mut ta, &mut tb);
            }
            t0 = t0.max(ta);
            t1 = t1.min(tb);
            if t0 > t1 {
                return false;
            }
        }
    }
    true
}

/// Coupling of `mode` in `film` to the field of `source`, refined until two
/// successive levels agree to `settings.rel_tol`.
pub fn coupling_strength<S: FieldSource + ?Sized>(
    source: &S,
    film: &FilmSpec,
    mode: &PsswMode,
    model: &CouplingModel,
    settings: &QuadratureSettings,
) -> Result<CouplingResult> {
    settings.validate()?;
    film.validate()?;
    if let Some(wire) = source.wire() {
        check_clearance(wire, film)?;
    }
    let mut prev = integrate_level(source, film, mode, model, settings.counts(0))?;
    let mut npoints = prev.npoints;
    let mut achieved = f64::INFINITY;
    for level in 1..settings.max_levels {
        let next = integrate_level(source, film, mode, model, settings.counts(level))?;
        npoints += next.npoints;
        let scale = next.g.norm().max(prev.g.norm());
        achieved = if scale == 0.0 { 0.0 } else { (next.g - prev.g).norm() / scale };
        prev = next;
        if achieved < settings.rel_tol {
            return Ok(CouplingResult {
                g: prev.g,
                achieved_tol: achieved,
                npoints,
                levels: level + 1,
                converged: true,
                breakdown: prev.breakdown,
            });
        }
    }
    Ok(CouplingResult {
        g: prev.g,
        achieved_tol: achieved,
        npoints,
        levels: settings.max_levels,
        converged: false,
        breakdown: prev.breakdown,
    })
}

/// Unit normal and centroid of a wire loop.
pub fn loop_frame(wire: &Polyline) -> Result<(Vec3, Vec3)> {
    let area = wire.vector_area();
    if area.norm() == 0.0 {
        return Err(Error::Geometry("loop encloses no area".into()));
    }
    Ok((area.normalize(), wire.centroid()))
}

/// Copy of `film` translated along the loop normal so that its face nearest
/// the loop plane sits at distance `d` from it, laterally centered on the loop.
pub fn place_film(wire: &Polyline, film: &FilmSpec, d: f64) -> Result<FilmSpec> {
    if !(d > 0.0) {
        return Err(Error::Config(format!("distance must be positive, got {d:e}")));
    }
    let (n, c) = loop_frame(wire)?;
    let (u, v, w) = film.frame();
    let (hu, hv) = film.outline.half_extents();
    let half = hu * u.dot(&n).abs() + hv * v.dot(&n).abs() + 0.5 * film.thickness * w.dot(&n).abs();
    Ok(film.centered_at(c + n * (d + half)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistancePoint {
    pub d: f64,
    pub result: CouplingResult,
}

pub fn coupling_vs_distance(
    wire: &Polyline,
    film: &FilmSpec,
    mode: &PsswMode,
    distances: &[f64],
    model: &CouplingModel,
    settings: &QuadratureSettings,
) -> Result<Vec<DistancePoint>> {
    distances
        .iter()
        .map(|&d| {
            let placed = place_film(wire, film, d)?;
            let result = coupling_strength(wire, &placed, mode, model, settings)?;
            Ok(DistancePoint { d, result })
        })
        .collect()
}

/// Direct lattice sum √(2S) μB (1/√N) Σ e^{ik·r}(B·e₁ + iB·e₂)/2 / h over the
/// samples of `grid`, with e₁ × e₂ = `magnetization`.
pub fn lattice_coupling_oracle(grid: &FieldGrid, spin: f64, k: &Vec3, magnetization: &Vec3) -> Result<Complex64> {
    let n = grid.len();
    if n == 0 || n > 1_000_000 {
        return Err(Error::Config(format!("lattice oracle needs 1..=1e6 sites, got {n}")));
    }
    let (e1, e2) = plane_basis(magnetization);
    let mut sum = Complex64::new(0.0, 0.0);
    for (r, b) in grid.points().zip(&grid.samples) {
        sum += Complex64::from_polar(1.0, k.dot(&r)) * Complex64::new(b.dot(&e1), b.dot(&e2)) * 0.5;
    }
    Ok(sum * ((2.0 * spin).sqrt() * MU_B / H_PLANCK / (n as f64).sqrt()))
}

/// Least-squares slope of ln y against ln x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Config("slope needs at least two (x, y) pairs".into()));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0)) {
        return Err(Error::Config("log-log slope needs positive data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
