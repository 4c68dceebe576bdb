use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use super::{plane_basis, CurrentLoop, PathSegment, Vec3};
use crate::error::{Error, Result};

/// Square loop of side `side` centered at `center` in the plane normal to
/// `normal`, traversed counter-clockwise about `normal`.
pub fn make_square_loop(side: f64, center: Vec3, normal: Vec3, current: f64) -> Result<CurrentLoop> {
    if !(side > 0.0) {
        return Err(Error::Geometry("square side must be positive".into()));
    }
    if normal.norm() == 0.0 {
        return Err(Error::Geometry("square normal must be non-zero".into()));
    }
    let (e1, e2) = plane_basis(&normal);
    let h = 0.5 * side;
    let corners = [(-h, -h), (h, -h), (h, h), (-h, h)].map(|(a, b)| center + e1 * a + e2 * b);
    let segments = (0..4).map(|i| PathSegment::line(corners[i], corners[(i + 1) % 4])).collect();
    CurrentLoop::new(segments, current)
}

/// Which way the four quarter-arcs of a shape-modified loop bow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcShape {
    /// Outward-bowing arcs meeting tangentially; equal radii give a circle.
    #[default]
    Convex,
    /// Inward-bowing arcs meeting at four corners (an astroid-like outline).
    Concave,
}

/// Loop of four quarter-circle arcs in the xy-plane (normal +z), traversed
/// counter-clockwise. The left/right arcs have radius `left_right_radius`,
/// the top/bottom arcs `top_bottom_radius`; arc centers are placed so that
/// adjacent endpoints coincide.
pub fn make_arc_loop(
    left_right_radius: f64,
    top_bottom_radius: f64,
    center: Vec3,
    current: f64,
    shape: ArcShape,
) -> Result<CurrentLoop> {
    make_inset_arc_loop(left_right_radius, top_bottom_radius, center, current, shape, 0.0)
}

/// The curve lying `inset` inside the [`make_arc_loop`] outline: every arc
/// keeps its center and moves inward by `inset`, so the two wires run at a
/// constant gap. Concave corners move to the intersections of the offset
/// circles.
pub fn make_inset_arc_loop(
    left_right_radius: f64,
    top_bottom_radius: f64,
    center: Vec3,
    current: f64,
    shape: ArcShape,
    inset: f64,
) -> Result<CurrentLoop> {
    let (r_lr, r_tb) = (left_right_radius, top_bottom_radius);
    if !(r_lr > 0.0 && r_tb > 0.0) {
        return Err(Error::Geometry("arc radii must be positive".into()));
    }
    if !(inset >= 0.0) {
        return Err(Error::Geometry("inset must be non-negative".into()));
    }
    let z = Vec3::z();
    let at = |x: f64, y: f64| center + Vec3::new(x, y, 0.0);
    let segments = match shape {
        ArcShape::Convex => {
            let (a, b) = (r_lr - inset, r_tb - inset);
            if !(a > 0.0 && b > 0.0) {
                return Err(Error::Geometry(format!("inset {inset:.3e} m exceeds an arc radius")));
            }
            let off = (r_tb - r_lr) * FRAC_1_SQRT_2;
            vec![
                PathSegment::arc(at(off, 0.0), a, z, -FRAC_PI_4, FRAC_PI_2),
                PathSegment::arc(at(0.0, -off), b, z, FRAC_PI_4, FRAC_PI_2),
                PathSegment::arc(at(-off, 0.0), a, z, 3.0 * FRAC_PI_4, FRAC_PI_2),
                PathSegment::arc(at(0.0, off), b, z, 5.0 * FRAC_PI_4, FRAC_PI_2),
            ]
        }
        ArcShape::Concave => {
            // corners at (±x, ±y); each arc's chord is R√2 and its center sits
            // R/√2 beyond the chord, outside the loop
            let x = r_tb * FRAC_1_SQRT_2;
            let y = r_lr * FRAC_1_SQRT_2;
            // opposite arcs must not cross: sagittas 2R(1 − 1/√2) < chord span
            let sag = 1.0 - FRAC_1_SQRT_2;
            if 2.0 * r_lr * sag >= 2.0 * x || 2.0 * r_tb * sag >= 2.0 * y {
                return Err(Error::Geometry(format!(
                    "concave arcs with radii {r_lr:.3e} m and {r_tb:.3e} m cannot close into a simple loop"
                )));
            }
            let c = x + y;
            let (a, b) = (r_lr + inset, r_tb + inset);
            let (px, py) = concave_corner(c, a, b)
                .ok_or_else(|| Error::Geometry(format!("inset {inset:.3e} m closes the concave outline")))?;
            let cw = |cx: f64, cy: f64, r: f64, from: (f64, f64), to: (f64, f64)| {
                let start = (from.1 - cy).atan2(from.0 - cx);
                let end = (to.1 - cy).atan2(to.0 - cx);
                let mut sweep = end - start;
                while sweep > 0.0 {
                    sweep -= 2.0 * PI;
                }
                while sweep <= -2.0 * PI {
                    sweep += 2.0 * PI;
                }
                PathSegment::arc(at(cx, cy), r, z, start, sweep)
            };
            vec![
                cw(c, 0.0, a, (px, -py), (px, py)),
                cw(0.0, c, b, (px, py), (-px, py)),
                cw(-c, 0.0, a, (-px, py), (-px, -py)),
                cw(0.0, -c, b, (-px, -py), (px, -py)),
            ]
        }
    };
    CurrentLoop::new(segments, current)
}

/// First-quadrant intersection, nearest the origin, of the circles of radius
/// `a` about (c, 0) and `b` about (0, c).
fn concave_corner(c: f64, a: f64, b: f64) -> Option<(f64, f64)> {
    let d = c * SQRT_2;
    let along = (a * a - b * b + d * d) / (2.0 * d);
    let h2 = a * a - along * along;
    if h2 < 0.0 {
        return None;
    }
    let h = h2.sqrt();
    // unit vector from (c, 0) to (0, c) and its perpendicular
    let (ux, uy) = (-FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    let (bx, by) = (c + along * ux, along * uy);
    let p1 = (bx - h * uy, by + h * ux);
    let p2 = (bx + h * uy, by - h * ux);
    let p = if p1.0.hypot(p1.1) < p2.0.hypot(p2.1) { p1 } else { p2 };
    (p.0 > 0.0 && p.1 > 0.0).then_some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DEFAULT_SAGITTA_TOL;

    const UM: f64 = 1e-6;

    #[test]
    fn square_perimeter_and_closure() {
        let lp = make_square_loop(5.0 * UM, Vec3::new(1.0, 2.0, 3.0), Vec3::y(), 500e-9).unwrap();
        assert_eq!(lp.segments().len(), 4);
        assert!((lp.perimeter() - 20.0 * UM).abs() < 1e-9 * UM);
    }

    #[test]
    fn square_normal_sets_orientation() {
        let up = make_square_loop(5.0 * UM, Vec3::zeros(), Vec3::z(), 500e-9).unwrap();
        let down = make_square_loop(5.0 * UM, Vec3::zeros(), -Vec3::z(), 500e-9).unwrap();
        let a = up.discretize(DEFAULT_SAGITTA_TOL).vector_area();
        assert!((a.normalize() - Vec3::z()).norm() < 1e-12);
        assert!((a.norm() - 25.0 * UM * UM).abs() < 1e-22);
        for p in [Vec3::new(0.0, 0.0, 1e-6), Vec3::new(4e-6, -1e-6, 0.3e-6)] {
            let b1 = up.field_at(&p).unwrap();
            let b2 = down.field_at(&p).unwrap();
            assert!((b1 + b2).norm() < 1e-12 * b1.norm());
        }
    }

    #[test]
    fn equal_radii_give_a_circle() {
        let r = 10.0 * UM;
        let lp = make_arc_loop(r, r, Vec3::zeros(), 500e-9, ArcShape::Convex).unwrap();
        for s in lp.segments() {
            if let PathSegment::Arc { center, radius, .. } = s {
                assert!(center.norm() < 1e-18);
                assert_eq!(*radius, r);
            }
        }
        let poly = lp.discretize(DEFAULT_SAGITTA_TOL);
        for v in &poly.vertices {
            assert!((v.norm() - r).abs() < 1e-15);
        }
    }

    #[test]
    fn shape_modified_loops_are_valid() {
        for shape in [ArcShape::Convex, ArcShape::Concave] {
            let lp = make_arc_loop(10.0 * UM, 13.2 * UM, Vec3::zeros(), 500e-9, shape).unwrap();
            let area = lp.discretize(DEFAULT_SAGITTA_TOL).vector_area();
            assert!(area.z > 0.0, "{shape:?} should be counter-clockwise");
            let expected_perimeter = 0.5 * std::f64::consts::PI * (2.0 * 10.0 + 2.0 * 13.2) * UM;
            assert!((lp.perimeter() - expected_perimeter).abs() < 1e-15);
        }
    }

    #[test]
    fn concave_area_matches_rectangle_minus_segments() {
        let (r1, r2) = (10.0 * UM, 13.2 * UM);
        let lp = make_arc_loop(r1, r2, Vec3::zeros(), 500e-9, ArcShape::Concave).unwrap();
        let area = lp.discretize(0.1e-9).vector_area().z;
        let segment = |r: f64| r * r * (std::f64::consts::FRAC_PI_4 - 0.5);
        let rect = (r2 * 2f64.sqrt()) * (r1 * 2f64.sqrt());
        let expected = rect - 2.0 * segment(r1) - 2.0 * segment(r2);
        // chords cut ~⅔·sagitta·perimeter off each arc
        assert!((area - expected).abs() / expected < 1e-4, "{area} vs {expected}");
    }

    #[test]
    fn inset_loops_keep_a_constant_gap() {
        let gap = 0.5 * UM;
        for shape in [ArcShape::Convex, ArcShape::Concave] {
            let outer = make_arc_loop(10.0 * UM, 13.2 * UM, Vec3::zeros(), 1.0, shape).unwrap();
            let inner = make_inset_arc_loop(10.0 * UM, 13.2 * UM, Vec3::zeros(), 1.0, shape, gap).unwrap();
            let po = outer.discretize(DEFAULT_SAGITTA_TOL);
            let pi = inner.discretize(DEFAULT_SAGITTA_TOL);
            assert!(pi.vector_area().z < po.vector_area().z);
            // every inner vertex sits about `gap` from the outer wire; concave
            // corners sit farther, on the bisector of the cusp
            let mut min = f64::INFINITY;
            for v in &pi.vertices {
                let (d, _) = po.distance_to(v);
                assert!(d > gap - 1e-9, "{shape:?}: {d:e}");
                min = min.min(d);
            }
            assert!((min - gap).abs() < 1e-8, "{shape:?}: {min:e}");
        }
        let zero = make_inset_arc_loop(10.0 * UM, 13.2 * UM, Vec3::zeros(), 1.0, ArcShape::Concave, 0.0).unwrap();
        let plain = make_arc_loop(10.0 * UM, 13.2 * UM, Vec3::zeros(), 1.0, ArcShape::Concave).unwrap();
        for (a, b) in zero.segments().iter().zip(plain.segments()) {
            assert!((a.start() - b.start()).norm() < 1e-15 && (a.end() - b.end()).norm() < 1e-15);
        }
        assert!(make_inset_arc_loop(10.0 * UM, 13.2 * UM, Vec3::zeros(), 1.0, ArcShape::Convex, 11.0 * UM).is_err());
    }

    #[test]
    fn concave_radii_too_different_fail() {
        assert!(matches!(
            make_arc_loop(10.0 * UM, 2.0 * UM, Vec3::zeros(), 1e-7, ArcShape::Concave),
            Err(Error::Geometry(_))
        ));
        assert!(make_arc_loop(-1.0, 1.0, Vec3::zeros(), 1e-7, ArcShape::Convex).is_err());
    }
}
