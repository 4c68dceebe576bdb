//! Qubit spectroscopy with one coupled spin-wave mode: response, poles,
//! spectrum maps and avoided-crossing extraction. All frequencies in Hz.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitParams {
    /// Tunnel splitting Δ.
    pub delta: f64,
    /// Energy bias ε.
    pub epsilon: f64,
    pub gamma: f64,
    /// Persistent current (A).
    pub ip: f64,
}

impl QubitParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0) || !(self.gamma >= 0.0) || !self.epsilon.is_finite() {
            return Err(Error::Config("qubit needs delta > 0, gamma >= 0, finite epsilon".into()));
        }
        Ok(())
    }

    pub fn with_epsilon(self, epsilon: f64) -> Self {
        Self { epsilon, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinWaveOscillator {
    pub frequency: f64,
    pub gamma: f64,
}

impl SpinWaveOscillator {
    pub fn validate(&self) -> Result<()> {
        if !(self.frequency > 0.0) || !(self.gamma >= 0.0) {
            return Err(Error::Config("spin wave needs frequency > 0 and gamma >= 0".into()));
        }
        Ok(())
    }
}

pub fn qubit_frequency(q: &QubitParams) -> f64 {
    q.delta.hypot(q.epsilon)
}

/// |g|·Δ/√(Δ² + ε²).
pub fn dressed_coupling(q: &QubitParams, g: Complex64) -> f64 {
    g.norm() * q.delta / qubit_frequency(q)
}

/// 1 / [ω − ω_q + iΓ_q − g_d²/(ω − ω_sw + iΓ_sw)].
pub fn response(omega: f64, q: &QubitParams, sw: &SpinWaveOscillator, g: Complex64) -> Complex64 {
    let gd = dressed_coupling(q, g);
    let i = Complex64::i();
    let magnon = Complex64::new(omega - sw.frequency, 0.0) + i * sw.gamma;
    let mut denom = Complex64::new(omega - qubit_frequency(q), 0.0) + i * q.gamma;
    if gd != 0.0 {
        denom -= gd * gd / magnon;
    }
    denom.inv()
}

/// The two complex zeros of the response denominator, lower real part first.
pub fn poles(q: &QubitParams, sw: &SpinWaveOscillator, g: Complex64) -> [Complex64; 2] {
    let a = Complex64::new(qubit_frequency(q), -q.gamma);
    let b = Complex64::new(sw.frequency, -sw.gamma);
    let gd = dressed_coupling(q, g);
    let mean = (a + b) * 0.5;
    let root = (((a - b) * 0.5).powu(2) + gd * gd).sqrt();
    let (p, m) = (mean + root, mean - root);
    if p.re <= m.re {
        [p, m]
    } else {
        [m, p]
    }
}

/// Second-order shift g_d²/(ω_q − ω_sw) of the qubit line.
pub fn dispersive_shift(q: &QubitParams, sw: &SpinWaveOscillator, g: Complex64) -> Result<f64> {
    let gd = dressed_coupling(q, g);
    let detuning = qubit_frequency(q) - sw.frequency;
    if detuning.abs() <= gd {
        return Err(Error::NotDispersive { coupling: gd, detuning });
    }
    Ok(gd * gd / detuning)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumMap {
    /// Bias values ε (Hz).
    pub epsilon: Vec<f64>,
    /// Bare qubit frequency at each bias (Hz).
    pub qubit_frequency: Vec<f64>,
    /// Drive frequencies (Hz).
    pub drive: Vec<f64>,
    /// |response|, indexed `[bias][drive]`.
    pub magnitude: Vec<Vec<f64>>,
    pub drive_amplitude: f64,
}

fn strictly_monotone(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] > w[0]) || xs.windows(2).all(|w| w[1] < w[0])
}

/// Evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

pub fn spectrum_map(
    qubit: &QubitParams,
    epsilon: &[f64],
    drive: &[f64],
    sw: &SpinWaveOscillator,
    g: Complex64,
) -> Result<SpectrumMap> {
    qubit.validate()?;
    sw.validate()?;
    if epsilon.is_empty() || drive.is_empty() {
        return Err(Error::Config("spectrum sweeps must be non-empty".into()));
    }
    if !strictly_monotone(epsilon) || !strictly_monotone(drive) {
        return Err(Error::Config("spectrum sweeps must be strictly monotone".into()));
    }
    let magnitude = epsilon
        .par_iter()
        .map(|&e| {
            let q = qubit.with_epsilon(e);
            drive.iter().map(|&w| response(w, &q, sw, g).norm()).collect()
        })
        .collect();
    Ok(SpectrumMap {
        epsilon: epsilon.to_vec(),
        qubit_frequency: epsilon.iter().map(|&e| qubit_frequency(&qubit.with_epsilon(e))).collect(),
        drive: drive.to_vec(),
        magnitude,
        drive_amplitude: 1.0,
    })
}

impl SpectrumMap {
    /// CSV with two header rows (ε, qubit frequency) and one row per drive
    /// frequency.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let row = |label: &str, xs: &[f64]| {
            let mut s = label.to_string();
            for x in xs {
                s.push_str(&format!(",{x:.11e}"));
            }
            s.push('\n');
            s
        };
        out.push_str(&row("epsilon_Hz", &self.epsilon));
        out.push_str(&row("qubit_Hz", &self.qubit_frequency));
        for (j, w) in self.drive.iter().enumerate() {
            let col: Vec<f64> = self.magnitude.iter().map(|c| c[j]).collect();
            out.push_str(&row(&format!("{w:.11e}"), &col));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Splitting {
    /// Distance between the two branches (Hz).
    pub separation: f64,
    pub lower: f64,
    pub upper: f64,
    pub bias_index: usize,
    pub epsilon: f64,
}

/// Interior local maxima of `ys` on axis `xs`, refined by a parabola through
/// the three neighboring samples; (position, height).
pub fn local_maxima(xs: &[f64], ys: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 1..ys.len().saturating_sub(1) {
        let (y0, y1, y2) = (ys[i - 1], ys[i], ys[i + 1]);
        if y1 > y0 && y1 >= y2 {
            let curv = y0 - 2.0 * y1 + y2;
            let shift = if curv < 0.0 { 0.5 * (y0 - y2) / curv } else { 0.0 };
            let h = xs[i + 1] - xs[i];
            let hl = xs[i] - xs[i - 1];
            let step = if shift >= 0.0 { h } else { hl };
            let peak = y1 - 0.25 * (y0 - y2) * shift;
            out.push((xs[i] + shift * step, peak));
        }
    }
    out
}

/// Smallest separation, over bias columns, between the two highest maxima
/// along the drive axis; `None` when no column has two maxima.
pub fn extract_splitting(map: &SpectrumMap) -> Option<Splitting> {
    let mut best: Option<Splitting> = None;
    for (k, col) in map.magnitude.iter().enumerate() {
        let mut peaks = local_maxima(&map.drive, col);
        if peaks.len() < 2 {
            continue;
        }
        peaks.sort_by(|a, b| b.1.total_cmp(&a.1));
        let (a, b) = (peaks[0].0, peaks[1].0);
        let (lower, upper) = if a < b { (a, b) } else { (b, a) };
        let s = Splitting { separation: upper - lower, lower, upper, bias_index: k, epsilon: map.epsilon[k] };
        if best.is_none_or(|b| s.separation < b.separation) {
            best = Some(s);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantities::{GHZ, MHZ};

    fn fig3() -> (QubitParams, SpinWaveOscillator) {
        (
            QubitParams { delta: 4.52 * GHZ, epsilon: 0.0, gamma: 2.0 * MHZ, ip: 500e-9 },
            SpinWaveOscillator { frequency: 4.57 * GHZ, gamma: 20.0 * MHZ },
        )
    }

    fn g(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    // Durand–Kerner on the characteristic polynomial of
    // [[a, gd], [gd, b]]: λ² − (a + b)λ + (ab − gd²).
    fn eigen_oracle(a: Complex64, b: Complex64, gd: f64) -> [Complex64; 2] {
        let c1 = -(a + b);
        let c0 = a * b - gd * gd;
        let f = |x: Complex64| x * x + c1 * x + c0;
        let scale = a.norm().max(b.norm());
        let mut r = [Complex64::new(0.4, 0.9) * scale, Complex64::new(0.4, 0.9).powu(2) * scale];
        for _ in 0..500 {
            let n0 = r[0] - f(r[0]) / (r[0] - r[1]);
            let n1 = r[1] - f(r[1]) / (r[1] - n0);
            r = [n0, n1];
        }
        if r[0].re <= r[1].re {
            r
        } else {
            [r[1], r[0]]
        }
    }

    #[test]
    fn qubit_frequency_examples() {
        let (q, _) = fig3();
        assert_eq!(qubit_frequency(&q), 4.52 * GHZ);
        let q = QubitParams { delta: 3.0 * GHZ, epsilon: 4.0 * GHZ, ..q };
        assert!((qubit_frequency(&q) - 5.0 * GHZ).abs() < 1e-3);
        let (q, _) = fig3();
        let f = qubit_frequency(&q.with_epsilon(0.678 * GHZ));
        assert!((f - 4.5706 * GHZ).abs() < 0.0001 * GHZ);
    }

    #[test]
    fn bare_qubit_is_lorentzian() {
        let (q, sw) = fig3();
        let peak = response(q.delta, &q, &sw, g(0.0)).norm();
        assert!((peak - 1.0 / q.gamma).abs() < 1e-18);
        for dw in [-5.0 * MHZ, 1.0 * MHZ, 3.3 * MHZ] {
            let v = response(q.delta + dw, &q, &sw, g(0.0)).norm();
            let lorentz = 1.0 / (dw * dw + q.gamma * q.gamma).sqrt();
            assert!((v - lorentz).abs() / lorentz < 1e-12);
        }
    }

    #[test]
    fn dressing_factor() {
        let (q, _) = fig3();
        assert_eq!(dressed_coupling(&q, g(30.0 * MHZ)), 30.0 * MHZ);
        let mut last = f64::INFINITY;
        for e in [0.1, 0.5, 1.0, 3.0] {
            let v = dressed_coupling(&q.with_epsilon(e * GHZ), g(30.0 * MHZ));
            assert!(v < last);
            last = v;
        }
    }

    #[test]
    fn dispersive_shift_matches_pole() {
        let (mut q, sw) = fig3();
        q.delta = 4.40 * GHZ;
        let shift = dispersive_shift(&q, &sw, g(30.0 * MHZ)).unwrap();
        assert!((shift + 5.294 * MHZ).abs() < 0.01 * MHZ, "{shift}");
        let p = poles(&q, &sw, g(30.0 * MHZ));
        // the qubit-like pole is the lower one; exact vs second order
        let exact = p[0].re - 4.40 * GHZ;
        assert!((exact - shift).abs() < 0.05 * shift.abs());
        assert!(dispersive_shift(&q, &SpinWaveOscillator { frequency: 4.41 * GHZ, gamma: 1.0 }, g(30.0 * MHZ)).is_err());
    }

    #[test]
    fn splitting_of_fig3_map() {
        let (q, sw) = fig3();
        let eps = linspace(0.0, 1.288 * GHZ, 251);
        let drive = linspace(4.45 * GHZ, 4.70 * GHZ, 1001);
        let map = spectrum_map(&q, &eps, &drive, &sw, g(30.0 * MHZ)).unwrap();
        let s = extract_splitting(&map).unwrap();
        assert!((s.separation - 60.0 * MHZ).abs() < 2.0 * MHZ, "{}", s.separation);
        let bare = spectrum_map(&q, &eps, &drive, &sw, g(0.0)).unwrap();
        assert!(extract_splitting(&bare).is_none());
        // ridge of the bare map follows the qubit frequency
        for (k, col) in bare.magnitude.iter().enumerate().step_by(25) {
            let (x, _) = local_maxima(&bare.drive, col)
                .into_iter()
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap_or((f64::NAN, 0.0));
            if bare.qubit_frequency[k] < 4.699 * GHZ {
                assert!((x - bare.qubit_frequency[k]).abs() < 0.25 * MHZ);
            }
        }
    }

    #[test]
    fn narrow_lines_split_by_twice_dressed_coupling() {
        let (mut q, mut sw) = fig3();
        q.gamma = 0.1 * MHZ;
        sw.gamma = 0.1 * MHZ;
        let eps_res = (sw.frequency.powi(2) - q.delta.powi(2)).sqrt();
        let eps = linspace(eps_res - 20.0 * MHZ, eps_res + 20.0 * MHZ, 81);
        let drive = linspace(4.50 * GHZ, 4.64 * GHZ, 14001);
        let map = spectrum_map(&q, &eps, &drive, &sw, g(30.0 * MHZ)).unwrap();
        let s = extract_splitting(&map).unwrap();
        let gd = 30.0 * MHZ * q.delta / sw.frequency;
        let oracle = eigen_oracle(Complex64::new(sw.frequency, -q.gamma), Complex64::new(sw.frequency, -sw.gamma), gd);
        let expected = oracle[1].re - oracle[0].re;
        assert!((s.separation - expected).abs() < 0.5 * MHZ, "{} vs {}", s.separation, expected);
    }

    #[test]
    fn single_point_map() {
        let (q, sw) = fig3();
        let m = spectrum_map(&q, &[0.1 * GHZ], &[4.5 * GHZ], &sw, g(30.0 * MHZ)).unwrap();
        let direct = response(4.5 * GHZ, &q.with_epsilon(0.1 * GHZ), &sw, g(30.0 * MHZ)).norm();
        assert_eq!(m.magnitude, vec![vec![direct]]);
        assert!(spectrum_map(&q, &[0.0, 0.0], &[4.5 * GHZ], &sw, g(0.0)).is_err());
    }

    #[test]
    fn planted_lorentzians_are_recovered() {
        let xs = linspace(0.0, 100.0, 201);
        for (c1, c2) in [(30.0, 61.3), (42.2, 55.0), (10.1, 90.7)] {
            let ys: Vec<f64> =
                xs.iter().map(|x| 1.0 / ((x - c1).powi(2) + 1.0) + 0.8 / ((x - c2).powi(2) + 1.0)).collect();
            let map = SpectrumMap {
                epsilon: vec![0.0],
                qubit_frequency: vec![0.0],
                drive: xs.clone(),
                magnitude: vec![ys],
                drive_amplitude: 1.0,
            };
            let s = extract_splitting(&map).unwrap();
            assert!((s.separation - (c2 - c1)).abs() < 0.5);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn poles_match_eigenvalue_oracle(
                delta in 1.0f64..8.0, eps in -3.0f64..3.0, wsw in 1.0f64..8.0,
                gq in 0.0f64..0.05, gs in 0.0f64..0.1, gc in 0.0f64..0.3,
            ) {
                let q = QubitParams { delta: delta * GHZ, epsilon: eps * GHZ, gamma: gq * GHZ, ip: 0.0 };
                let sw = SpinWaveOscillator { frequency: wsw * GHZ, gamma: gs * GHZ };
                let p = poles(&q, &sw, g(gc * GHZ));
                let o = eigen_oracle(
                    Complex64::new(qubit_frequency(&q), -q.gamma),
                    Complex64::new(sw.frequency, -sw.gamma),
                    dressed_coupling(&q, g(gc * GHZ)),
                );
                // match as unordered pairs
                let d1 = (p[0] - o[0]).norm().max((p[1] - o[1]).norm());
                let d2 = (p[0] - o[1]).norm().max((p[1] - o[0]).norm());
                let scale = o[0].norm().max(o[1].norm());
                prop_assert!(d1.min(d2) <= 1e-10 * scale, "{p:?} vs {o:?}");
                // and they are zeros of the denominator
                for z in p {
                    let zq = z - Complex64::new(qubit_frequency(&q), -q.gamma);
                    let zs = z - Complex64::new(sw.frequency, -sw.gamma);
                    let gd = dressed_coupling(&q, g(gc * GHZ));
                    prop_assert!((zq * zs - gd * gd).norm() <= 1e-9 * scale * scale);
                }
            }
        }
    }
}
