use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::quantities::MU0;

/// Axis-aligned box of uniform magnetization magnitude `ms` (A/m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prism {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
    pub ms: f64,
}

impl Prism {
    fn contains(&self, p: &Vec3) -> bool {
        (0..3).all(|a| p[a] >= self.lo[a] && p[a] <= self.hi[a])
    }
}

/// Field B = μ₀H (T) at `p` outside a prism magnetized along the unit vector
/// `m`, from the surface charges σ = M·n on its six faces.
pub fn prism_field(prism: &Prism, m: &Vec3, p: &Vec3) -> Result<Vec3> {
    if prism.contains(p) {
        return Err(Error::InsideSlab);
    }
    let mut h = Vec3::zeros();
    for a in 0..3 {
        let ma = m[a] * prism.ms;
        if ma == 0.0 {
            continue;
        }
        let (b, c) = ((a + 1) % 3, (a + 2) % 3);
        let xs = [p[b] - prism.hi[b], p[b] - prism.lo[b]];
        let ys = [p[c] - prism.hi[c], p[c] - prism.lo[c]];
        for (face, sigma) in [(prism.hi[a], ma), (prism.lo[a], -ma)] {
            let w = p[a] - face;
            let f = face_field(xs, ys, w);
            h[a] += sigma * f[0];
            h[b] += sigma * f[1];
            h[c] += sigma * f[2];
        }
    }
    Ok(h * (MU0 / (4.0 * PI)))
}

/// ∫∫ (w, X, Y)/R³ dX dY over X ∈ xs, Y ∈ ys, R² = X² + Y² + w².
fn face_field(xs: [f64; 2], ys: [f64; 2], w: f64) -> [f64; 3] {
    let mut normal = 0.0;
    if w != 0.0 {
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                let r = (x * x + y * y + w * w).sqrt();
                let s = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                normal += s * (x * y / (w * r)).atan();
            }
        }
    }
    // X component: −[ln(Y + R)] over Y, differenced over X; symmetric for Y
    let along_x = -(log_diff(xs[1], ys, w) - log_diff(xs[0], ys, w));
    let along_y = -(log_diff(ys[1], xs, w) - log_diff(ys[0], xs, w));
    [normal, along_x, along_y]
}

/// ln(t₁ + R₁) − ln(t₀ + R₀) with R = √(t² + ρ²), ρ² = s² + w², evaluated
/// without cancellation for negative t.
fn log_diff(s: f64, ts: [f64; 2], w: f64) -> f64 {
    let rho2 = s * s + w * w;
    let [t0, t1] = ts;
    let r0 = (t0 * t0 + rho2).sqrt();
    let r1 = (t1 * t1 + rho2).sqrt();
    if t0 < 0.0 && t1 < 0.0 {
        ((r0 - t0) / (r1 - t1)).ln()
    } else {
        let lo = if t0 < 0.0 { (rho2 / (r0 - t0)).ln() } else { (t0 + r0).ln() };
        let hi = if t1 < 0.0 { (rho2 / (r1 - t1)).ln() } else { (t1 + r1).ln() };
        hi - lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(side: f64) -> Prism {
        let h = 0.5 * side;
        Prism { lo: [-h; 3], hi: [h; 3], ms: 1.0e5 }
    }

    fn dipole_sum(prism: &Prism, m: &Vec3, p: &Vec3, n: usize) -> Vec3 {
        let size: Vec<f64> = (0..3).map(|a| prism.hi[a] - prism.lo[a]).collect();
        let dv = size.iter().product::<f64>() / (n * n * n) as f64;
        let moment = m * (prism.ms * dv);
        let mut b = Vec3::zeros();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let idx = [i, j, k];
                    let s = Vec3::from_fn(|a, _| prism.lo[a] + (idx[a] as f64 + 0.5) * size[a] / n as f64);
                    let r = p - s;
                    let d = r.norm();
                    let rh = r / d;
                    b += (rh * (3.0 * moment.dot(&rh)) - moment) / d.powi(3);
                }
            }
        }
        b * (MU0 / (4.0 * PI))
    }

    #[test]
    fn matches_dipole_lattice() {
        let prism = Prism { lo: [-1.5e-6, -40e-9, -1.5e-6], hi: [1.5e-6, 40e-9, 1.5e-6], ms: 1.92e5 };
        let m = Vec3::x();
        for p in [
            Vec3::new(0.3e-6, -6.0e-6, 0.2e-6),
            Vec3::new(5.0e-6, 2.0e-6, -1.0e-6),
            Vec3::new(-4.0e-6, -3.0e-6, 4.0e-6),
        ] {
            let exact = prism_field(&prism, &m, &p).unwrap();
            let approx = dipole_sum(&prism, &m, &p, 10);
            let err = (exact - approx).norm() / exact.norm();
            assert!(err < 0.01, "{p:?}: {exact:?} vs {approx:?}");
        }
    }

    #[test]
    fn far_field_is_a_dipole() {
        let prism = cube(1e-6);
        for m in [Vec3::x(), Vec3::y(), Vec3::new(0.6, 0.0, 0.8)] {
            let p = Vec3::new(20e-6, 13e-6, -7e-6);
            let exact = prism_field(&prism, &m, &p).unwrap();
            let approx = dipole_sum(&prism, &m, &p, 1);
            assert!((exact - approx).norm() / exact.norm() < 2e-3);
        }
    }

    #[test]
    fn large_slab_face_field_is_half_m() {
        // thin wide slab magnetized along its normal, probe close to the face:
        // outside B → 0, since the two face charges cancel
        let prism = Prism { lo: [-1.0, -1.0, -1e-6], hi: [1.0, 1.0, 1e-6], ms: 1e5 };
        let b = prism_field(&prism, &Vec3::z(), &Vec3::new(0.0, 0.0, 2e-6)).unwrap();
        assert!(b.norm() < 1e-6 * MU0 * 1e5);
    }

    #[test]
    fn inside_is_an_error() {
        assert!(matches!(prism_field(&cube(1e-6), &Vec3::x(), &Vec3::new(0.1e-6, 0.0, 0.0)), Err(Error::InsideSlab)));
    }

    #[test]
    fn in_face_plane_points_are_finite() {
        let prism = cube(1e-6);
        for p in [Vec3::new(0.5e-6, 2e-6, 0.0), Vec3::new(0.5e-6, 0.5e-6, 3e-6), Vec3::new(-2e-6, -0.5e-6, -0.5e-6)] {
            let b = prism_field(&prism, &Vec3::new(0.3, 0.4, 0.866), &p).unwrap();
            assert!(b.iter().all(|c| c.is_finite()), "{p:?}: {b:?}");
        }
    }
}
