//! Closed current paths and their quasi-static magnetic field.
//!
//! A [`CurrentLoop`] is an ordered chain of straight and circular segments.
//! Field evaluation works on a [`Polyline`]: arcs are replaced by chords
//! whose sagitta stays below a tolerance, and each straight piece uses the
//! closed-form finite-segment Biot–Savart expression.

mod builders;

pub use builders::{make_arc_loop, make_inset_arc_loop, make_square_loop, ArcShape};

use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantities::MU0;

pub type Vec3 = Vector3<f64>;

/// Default maximum chord deviation from a true arc (m).
pub const DEFAULT_SAGITTA_TOL: f64 = 1.0e-9;
/// Field points closer than this to a wire are rejected (m).
pub const WIRE_EXCLUSION_RADIUS: f64 = 10.0e-9;
/// Maximum allowed gap between consecutive segment endpoints (m).
pub const CLOSURE_TOL: f64 = 1.0e-9;

const MU0_OVER_4PI: f64 = MU0 / (4.0 * PI);

/// Deterministic orthonormal pair (e1, e2) spanning the plane normal to `n`,
/// right-handed so that e1 × e2 = n.
pub fn plane_basis(n: &Vec3) -> (Vec3, Vec3) {
    let n = n.normalize();
    let reference = if n.x.abs() > 0.9 { Vec3::y() } else { Vec3::x() };
    let e1 = (reference - n * reference.dot(&n)).normalize();
    let e2 = n.cross(&e1);
    (e1, e2)
}

#[derive(Debug, Clone, PartialEq)]
pub enum PathSegment {
    Line {
        start: Vec3,
        end: Vec3,
    },
    /// Circular arc. Points are `center + radius (cos θ e1 + sin θ e2)` with
    /// (e1, e2) = [`plane_basis`] of `normal`, θ running from `start_angle`
    /// over `sweep` (negative sweeps run clockwise about `normal`).
    Arc {
        center: Vec3,
        radius: f64,
        normal: Vec3,
        start_angle: f64,
        sweep: f64,
    },
}

impl PathSegment {
    pub fn line(start: Vec3, end: Vec3) -> Self {
        PathSegment::Line { start, end }
    }

    pub fn arc(center: Vec3, radius: f64, normal: Vec3, start_angle: f64, sweep: f64) -> Self {
        PathSegment::Arc { center, radius, normal, start_angle, sweep }
    }

    fn validate(&self) -> Result<()> {
        match self {
            PathSegment::Line { start, end } => {
                if (end - start).norm() <= 0.0 {
                    return Err(Error::Geometry("line segment has zero length".into()));
                }
            }
            PathSegment::Arc { radius, normal, sweep, .. } => {
                if !(*radius > 0.0) {
                    return Err(Error::Geometry("arc radius must be positive".into()));
                }
                if !(sweep.abs() > 0.0 && sweep.abs() <= TAU + 1e-12) {
                    return Err(Error::Geometry(format!("arc sweep {sweep} rad outside (0, 2π]")));
                }
                if (normal.norm() - 1.0).abs() > 1e-12 {
                    return Err(Error::Geometry("arc plane normal is not unit length".into()));
                }
            }
        }
        Ok(())
    }

    /// Point at parameter `t` ∈ [0, 1].
    pub fn point_at(&self, t: f64) -> Vec3 {
        match self {
            PathSegment::Line { start, end } => start + (end - start) * t,
            PathSegment::Arc { center, radius, normal, start_angle, sweep } => {
                let (e1, e2) = plane_basis(normal);
                let theta = start_angle + sweep * t;
                center + (e1 * theta.cos() + e2 * theta.sin()) * *radius
            }
        }
    }

    /// Derivative of [`point_at`](Self::point_at) with respect to `t`.
    pub fn tangent_at(&self, t: f64) -> Vec3 {
        match self {
            PathSegment::Line { start, end } => end - start,
            PathSegment::Arc { radius, normal, start_angle, sweep, .. } => {
                let (e1, e2) = plane_basis(normal);
                let theta = start_angle + sweep * t;
                (e2 * theta.cos() - e1 * theta.sin()) * (radius * sweep)
            }
        }
    }

    pub fn start(&self) -> Vec3 {
        self.point_at(0.0)
    }

    pub fn end(&self) -> Vec3 {
        self.point_at(1.0)
    }

    pub fn length(&self) -> f64 {
        match self {
            PathSegment::Line { start, end } => (end - start).norm(),
            PathSegment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn reversed(&self) -> Self {
        match self {
            PathSegment::Line { start, end } => PathSegment::Line { start: *end, end: *start },
            PathSegment::Arc { center, radius, normal, start_angle, sweep } => PathSegment::Arc {
                center: *center,
                radius: *radius,
                normal: *normal,
                start_angle: start_angle + sweep,
                sweep: -sweep,
            },
        }
    }

    fn transformed(&self, f: &impl Fn(Vec3) -> Vec3, scale: f64) -> Self {
        match self {
            PathSegment::Line { start, end } => PathSegment::Line { start: f(*start), end: f(*end) },
            PathSegment::Arc { center, radius, normal, start_angle, sweep } => PathSegment::Arc {
                center: f(*center),
                radius: radius * scale,
                normal: *normal,
                start_angle: *start_angle,
                sweep: *sweep,
            },
        }
    }

    /// Chord endpoints (excluding the final endpoint) so that every chord
    /// deviates from the arc by at most `tol`.
    fn chord_points(&self, tol: f64) -> Vec<Vec3> {
        match self {
            PathSegment::Line { start, .. } => vec![*start],
            PathSegment::Arc { radius, sweep, .. } => {
                let n = arc_chord_count(*radius, sweep.abs(), tol);
                (0..n).map(|i| self.point_at(i as f64 / n as f64)).collect()
            }
        }
    }
}

/// Number of equal chords needed so that the sagitta R(1 − cos(θ/2)) ≤ tol.
fn arc_chord_count(radius: f64, sweep: f64, tol: f64) -> usize {
    if tol >= radius {
        return sweep_min_chords(sweep);
    }
    let max_angle = 2.0 * (1.0 - tol / radius).acos();
    let n = (sweep / max_angle - 1e-9).ceil() as usize;
    n.max(sweep_min_chords(sweep))
}

fn sweep_min_chords(sweep: f64) -> usize {
    // at least a triangle for a full circle, one chord per quarter turn otherwise
    ((sweep / (PI / 2.0)).ceil() as usize).max(if sweep > PI { 3 } else { 1 })
}

/// Closed chain of segments carrying a persistent current.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentLoop {
    segments: Vec<PathSegment>,
    /// Persistent current (A), positive along the segment order.
    pub current: f64,
}

impl CurrentLoop {
    pub fn new(segments: Vec<PathSegment>, current: f64) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Geometry("loop has no segments".into()));
        }
        for s in &segments {
            s.validate()?;
        }
        for (i, s) in segments.iter().enumerate() {
            let next = &segments[(i + 1) % segments.len()];
            let gap = (s.end() - next.start()).norm();
            if gap > CLOSURE_TOL {
                return Err(Error::Geometry(format!(
                    "segment {i} ends {gap:.3e} m away from the start of the next segment"
                )));
            }
        }
        let lp = Self { segments, current };
        lp.check_simple()?;
        Ok(lp)
    }

    pub fn segments(&self) -> &[PathSegment] {
        &self.segments
    }

    pub fn perimeter(&self) -> f64 {
        self.segments.iter().map(PathSegment::length).sum()
    }

    pub fn with_current(mut self, current: f64) -> Self {
        self.current = current;
        self
    }

    /// Same path traversed in the opposite sense.
    pub fn reversed(&self) -> Self {
        Self { segments: self.segments.iter().rev().map(PathSegment::reversed).collect(), current: self.current }
    }

    pub fn translated(&self, offset: Vec3) -> Self {
        Self {
            segments: self.segments.iter().map(|s| s.transformed(&|p| p + offset, 1.0)).collect(),
            current: self.current,
        }
    }

    /// Uniform scaling about `origin`.
    pub fn scaled(&self, factor: f64, origin: Vec3) -> Self {
        Self {
            segments: self
                .segments
                .iter()
                .map(|s| s.transformed(&|p| origin + (p - origin) * factor, factor))
                .collect(),
            current: self.current,
        }
    }

    pub fn discretize(&self, tol: f64) -> Polyline {
        let tol = if tol > 0.0 { tol } else { DEFAULT_SAGITTA_TOL };
        let vertices = self.segments.iter().flat_map(|s| s.chord_points(tol)).collect();
        Polyline { vertices, current: self.current }
    }

    pub fn field_at(&self, p: &Vec3) -> Result<Vec3> {
        self.discretize(DEFAULT_SAGITTA_TOL).field_at(p)
    }

    fn check_simple(&self) -> Result<()> {
        let size = self.perimeter();
        let poly = self.discretize(size * 1e-4);
        let n = poly.vertices.len();
        if n < 3 {
            return Ok(());
        }
        for i in 0..n {
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a0, a1) = poly.edge(i);
                let (b0, b1) = poly.edge(j);
                if segment_distance(&a0, &a1, &b0, &b1) < 1e-12 * size {
                    return Err(Error::Geometry("loop is not simple: non-adjacent segments intersect".into()));
                }
            }
        }
        Ok(())
    }
}

/// Closed piecewise-linear path; the closing edge from the last vertex back
/// to the first is implicit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polyline {
    #[serde(skip)]
    pub vertices: Vec<Vec3>,
    pub current: f64,
}

impl Polyline {
    pub fn new(vertices: Vec<Vec3>, current: f64) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::Geometry("polyline needs at least 3 vertices".into()));
        }
        for i in 0..vertices.len() {
            let j = (i + 1) % vertices.len();
            if vertices[i] == vertices[j] {
                return Err(Error::Geometry(format!("vertices {i} and {j} coincide")));
            }
        }
        Ok(Self { vertices, current })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge(&self, i: usize) -> (Vec3, Vec3) {
        (self.vertices[i], self.vertices[(i + 1) % self.vertices.len()])
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vec3, Vec3)> + '_ {
        (0..self.vertices.len()).map(move |i| self.edge(i))
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| (b - a).norm()).sum()
    }

    /// Vector area ½ Σ vᵢ × vᵢ₊₁; its direction is the right-handed loop normal.
    pub fn vector_area(&self) -> Vec3 {
        let c = self.centroid();
        self.edges().map(|(a, b)| (a - c).cross(&(b - c))).sum::<Vec3>() * 0.5
    }

    pub fn centroid(&self) -> Vec3 {
        self.vertices.iter().sum::<Vec3>() / self.vertices.len() as f64
    }

    /// Smallest distance from `p` to the wire, with the index of the closest edge.
    pub fn distance_to(&self, p: &Vec3) -> (f64, usize) {
        self.edges()
            .enumerate()
            .map(|(i, (a, b))| (point_segment_distance(p, &a, &b), i))
            .fold((f64::INFINITY, 0), |acc, x| if x.0 < acc.0 { x } else { acc })
    }

    pub fn field_at(&self, p: &Vec3) -> Result<Vec3> {
        let mut b = Vec3::zeros();
        for (i, (a, e)) in self.edges().enumerate() {
            let d = point_segment_distance(p, &a, &e);
            if d < WIRE_EXCLUSION_RADIUS {
                return Err(Error::OnWire { segment: i, distance: d, radius: WIRE_EXCLUSION_RADIUS });
            }
            b += segment_field(&a, &e, p);
        }
        Ok(b * (MU0_OVER_4PI * self.current))
    }
}

/// Field of a unit current along a → b at `p`, without the μ₀/4π prefactor.
fn segment_field(a: &Vec3, b: &Vec3, p: &Vec3) -> Vec3 {
    let l = b - a;
    let r1 = p - a;
    let r2 = p - b;
    let c = l.cross(&r1);
    let c2 = c.norm_squared();
    if c2 <= 1e-30 * l.norm_squared() * r1.norm_squared() {
        // on the line through the segment, outside it
        return Vec3::zeros();
    }
    let f = l.dot(&(r1 / r1.norm() - r2 / r2.norm()));
    c * (f / c2)
}

pub fn point_segment_distance(p: &Vec3, a: &Vec3, b: &Vec3) -> f64 {
    let l = b - a;
    let t = ((p - a).dot(&l) / l.norm_squared()).clamp(0.0, 1.0);
    (p - (a + l * t)).norm()
}

/// Minimum distance between two finite segments.
pub fn segment_distance(p0: &Vec3, p1: &Vec3, q0: &Vec3, q1: &Vec3) -> f64 {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    let f = d2.dot(&r);
    let c = d1.dot(&r);
    let b = d1.dot(&d2);
    let denom = a * e - b * b;
    let mut s = if denom > 1e-14 * a * e { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
    let mut t = (b * s + f) / e;
    if t < 0.0 {
        t = 0.0;
        s = (-c / a).clamp(0.0, 1.0);
    } else if t > 1.0 {
        t = 1.0;
        s = ((b - c) / a).clamp(0.0, 1.0);
    }
    ((p0 + d1 * s) - (q0 + d2 * t)).norm()
}

/// Anything that produces a magnetic flux density B (T) at a point.
pub trait FieldSource: Sync {
    fn field_at(&self, p: &Vec3) -> Result<Vec3>;

    /// Wire geometry, when the source has one; used for clearance checks.
    fn wire(&self) -> Option<&Polyline> {
        None
    }
}

impl FieldSource for Polyline {
    fn field_at(&self, p: &Vec3) -> Result<Vec3> {
        Polyline::field_at(self, p)
    }

    fn wire(&self) -> Option<&Polyline> {
        Some(self)
    }
}

/// Spatially constant field.
#[derive(Debug, Clone, Copy)]
pub struct UniformField(pub Vec3);

impl FieldSource for UniformField {
    fn field_at(&self, _p: &Vec3) -> Result<Vec3> {
        Ok(self.0)
    }
}

/// Field given by a closure.
pub struct FnField<F>(pub F);

impl<F: Fn(&Vec3) -> Vec3 + Sync> FieldSource for FnField<F> {
    fn field_at(&self, p: &Vec3) -> Result<Vec3> {
        Ok((self.0)(p))
    }
}

/// Axis-aligned box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxRegion {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

/// Vector field sampled on a regular grid of nodes, x-major
/// (`index = (ix * ny + iy) * nz + iz`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldGrid {
    pub origin: [f64; 3],
    pub spacing: [f64; 3],
    pub counts: [usize; 3],
    #[serde(skip)]
    pub samples: Vec<Vec3>,
}

impl FieldGrid {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (ix * self.counts[1] + iy) * self.counts[2] + iz
    }

    pub fn point(&self, ix: usize, iy: usize, iz: usize) -> Vec3 {
        Vec3::new(
            self.origin[0] + ix as f64 * self.spacing[0],
            self.origin[1] + iy as f64 * self.spacing[1],
            self.origin[2] + iz as f64 * self.spacing[2],
        )
    }

    pub fn points(&self) -> impl Iterator<Item = Vec3> + '_ {
        let [nx, ny, nz] = self.counts;
        (0..nx).flat_map(move |ix| (0..ny).flat_map(move |iy| (0..nz).map(move |iz| self.point(ix, iy, iz))))
    }
}

/// Sample `source` on the nodes of `region`. An axis with a single count is
/// sampled at the box center along that axis.
pub fn field_grid(source: &dyn FieldSource, region: &BoxRegion, counts: [usize; 3]) -> Result<FieldGrid> {
    if counts.contains(&0) {
        return Err(Error::Config("grid counts must be positive".into()));
    }
    let mut origin = [0.0; 3];
    let mut spacing = [0.0; 3];
    for a in 0..3 {
        if region.max[a] < region.min[a] {
            return Err(Error::Config("grid region max below min".into()));
        }
        if counts[a] == 1 {
            origin[a] = 0.5 * (region.min[a] + region.max[a]);
        } else {
            origin[a] = region.min[a];
            spacing[a] = (region.max[a] - region.min[a]) / (counts[a] - 1) as f64;
        }
    }
    let mut grid = FieldGrid { origin, spacing, counts, samples: Vec::new() };
    let points: Vec<Vec3> = grid.points().collect();
    grid.samples = points.par_iter().map(|p| source.field_at(p)).collect::<Result<Vec<_>>>()?;
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    const UM: f64 = 1e-6;
    const I: f64 = 500e-9;

    fn circle(radius: f64, current: f64) -> CurrentLoop {
        CurrentLoop::new(vec![PathSegment::arc(Vec3::zeros(), radius, Vec3::z(), 0.0, TAU)], current).unwrap()
    }

    #[test]
    fn plane_basis_is_right_handed() {
        for n in [Vec3::x(), Vec3::y(), Vec3::z(), -Vec3::z(), Vec3::new(1.0, 2.0, 3.0)] {
            let (e1, e2) = plane_basis(&n);
            assert!((e1.cross(&e2) - n.normalize()).norm() < 1e-12);
            assert!(e1.dot(&n).abs() < 1e-12);
        }
    }

    #[test]
    fn square_center_field_matches_analytic() {
        let a = 5.0 * UM;
        let lp = make_square_loop(a, Vec3::zeros(), Vec3::z(), I).unwrap();
        let b = lp.field_at(&Vec3::zeros()).unwrap();
        let expected = 2.0 * 2f64.sqrt() * MU0 * I / (PI * a);
        assert!((b.z - expected).abs() / expected < 1e-12, "{} vs {expected}", b.z);
        assert!(b.x.abs() < 1e-12 * expected && b.y.abs() < 1e-12 * expected);
        assert!((expected - 1.13e-7).abs() < 0.005e-7);
    }

    #[test]
    fn circle_on_axis_matches_analytic() {
        let r = 10.0 * UM;
        let lp = circle(r, I);
        for z in [0.0, 1.0 * UM, 7.5 * UM, 40.0 * UM] {
            let b = lp.field_at(&Vec3::new(0.0, 0.0, z)).unwrap();
            let expected = MU0 * I * r * r / (2.0 * (r * r + z * z).powf(1.5));
            assert!((b.z - expected).abs() / expected < 1e-3, "z={z}");
        }
    }

    #[test]
    fn zero_current_gives_zero_field() {
        let lp = make_square_loop(5.0 * UM, Vec3::zeros(), Vec3::z(), 0.0).unwrap();
        assert_eq!(lp.field_at(&Vec3::new(1e-6, 2e-6, 3e-6)).unwrap(), Vec3::zeros());
    }

    #[test]
    fn point_on_wire_names_segment() {
        let lp = make_square_loop(4.0 * UM, Vec3::zeros(), Vec3::z(), I).unwrap();
        let poly = lp.discretize(DEFAULT_SAGITTA_TOL);
        let on = poly.vertices[1] + (poly.vertices[2] - poly.vertices[1]) * 0.5;
        match poly.field_at(&on) {
            Err(Error::OnWire { segment, .. }) => assert_eq!(segment, 1),
            other => panic!("expected on-wire error, got {other:?}"),
        }
        let near = on + Vec3::new(0.0, 0.0, 5e-9);
        assert!(matches!(poly.field_at(&near), Err(Error::OnWire { .. })));
    }

    #[test]
    fn square_discretizes_to_four_vertices() {
        let lp = make_square_loop(5.0 * UM, Vec3::zeros(), Vec3::z(), I).unwrap();
        for tol in [1e-12, 1e-9, 1e-3] {
            assert_eq!(lp.discretize(tol).len(), 4);
        }
    }

    #[test]
    fn circle_chord_count_follows_sagitta() {
        let r = 10.0 * UM;
        for n in [8usize, 64, 360] {
            let tol = r * (1.0 - (PI / n as f64).cos());
            assert_eq!(circle(r, I).discretize(tol).len(), n);
        }
        // sagitta ∝ θ², so halving tol multiplies the count by about √2
        let n1 = circle(r, I).discretize(1e-9).len() as f64;
        let n2 = circle(r, I).discretize(0.5e-9).len() as f64;
        assert!((n2 / n1 - 2f64.sqrt()).abs() < 0.01, "{n1} {n2}");
    }

    #[test]
    fn chords_stay_within_tolerance() {
        let r = 13.2 * UM;
        let tol = 2e-9;
        let poly = circle(r, I).discretize(tol);
        for (a, b) in poly.edges() {
            let mid = (a + b) * 0.5;
            assert!(r - mid.norm() <= tol * (1.0 + 1e-9));
        }
    }

    #[test]
    fn open_chain_is_rejected() {
        let segs = vec![PathSegment::line(Vec3::zeros(), Vec3::x()), PathSegment::line(Vec3::x(), Vec3::y())];
        assert!(CurrentLoop::new(segs, I).is_err());
    }

    #[test]
    fn self_intersecting_loop_is_rejected() {
        let p =
            [Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 1.0, 0.0), Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)];
        let segs = (0..4).map(|i| PathSegment::line(p[i], p[(i + 1) % 4])).collect();
        assert!(matches!(CurrentLoop::new(segs, I), Err(Error::Geometry(_))));
    }

    #[test]
    fn invalid_arc_is_rejected() {
        let bad = PathSegment::arc(Vec3::zeros(), 1.0, Vec3::new(0.0, 0.0, 2.0), 0.0, TAU);
        assert!(CurrentLoop::new(vec![bad], I).is_err());
        let bad = PathSegment::arc(Vec3::zeros(), 1.0, Vec3::z(), 0.0, 7.0);
        assert!(CurrentLoop::new(vec![bad], I).is_err());
    }

    #[test]
    fn degenerate_grid_is_a_single_field_value() {
        let lp = make_square_loop(5.0 * UM, Vec3::zeros(), Vec3::z(), I).unwrap();
        let poly = lp.discretize(DEFAULT_SAGITTA_TOL);
        let region = BoxRegion { min: [-1e-6, -2e-6, 1e-6], max: [1e-6, 2e-6, 3e-6] };
        let g = field_grid(&poly, &region, [1, 1, 1]).unwrap();
        assert_eq!(g.len(), 1);
        let direct = poly.field_at(&Vec3::new(0.0, 0.0, 2e-6)).unwrap();
        assert_eq!(g.samples[0], direct);
    }

    #[test]
    fn grid_scales_with_current_and_mirrors() {
        let lp = make_square_loop(5.0 * UM, Vec3::zeros(), Vec3::z(), I).unwrap();
        let p1 = lp.discretize(DEFAULT_SAGITTA_TOL);
        let p2 = lp.clone().with_current(2.0 * I).discretize(DEFAULT_SAGITTA_TOL);
        let region = BoxRegion { min: [-4e-6, -1e-6, 0.5e-6], max: [4e-6, 3e-6, 2.5e-6] };
        let g1 = field_grid(&p1, &region, [5, 3, 3]).unwrap();
        let g2 = field_grid(&p2, &region, [5, 3, 3]).unwrap();
        for (a, b) in g1.samples.iter().zip(&g2.samples) {
            assert_eq!(*a * 2.0, *b);
        }
        // x -> -x maps the square onto itself with reversed circulation, so
        // B(-x, y, z) = (-Bx, By, Bz)(x, y, z)
        for iy in 0..3 {
            for iz in 0..3 {
                let a = g1.samples[g1.index(0, iy, iz)];
                let b = g1.samples[g1.index(4, iy, iz)];
                let scale = a.norm();
                assert!((a.x + b.x).abs() < 1e-12 * scale);
                assert!((a.y - b.y).abs() < 1e-12 * scale);
                assert!((a.z - b.z).abs() < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn reversed_loop_negates_field() {
        let lp = make_square_loop(5.0 * UM, Vec3::zeros(), Vec3::z(), I).unwrap();
        let p = Vec3::new(1e-6, -0.5e-6, 2e-6);
        let b = lp.field_at(&p).unwrap();
        let br = lp.reversed().field_at(&p).unwrap();
        assert!((b + br).norm() < 1e-15 * b.norm());
    }

    #[test]
    fn segment_distance_cases() {
        let d = segment_distance(&Vec3::zeros(), &Vec3::x(), &Vec3::new(0.5, 1.0, 0.0), &Vec3::new(0.5, 2.0, 0.0));
        assert!((d - 1.0).abs() < 1e-12);
        let d = segment_distance(&Vec3::zeros(), &Vec3::x(), &Vec3::new(0.0, 1.0, 0.0), &Vec3::new(1.0, 1.0, 0.0));
        assert!((d - 1.0).abs() < 1e-12);
        let d = segment_distance(&Vec3::zeros(), &Vec3::x(), &Vec3::new(0.5, -1.0, 1.0), &Vec3::new(0.5, 1.0, 1.0));
        assert!((d - 1.0).abs() < 1e-12);
    }
}
