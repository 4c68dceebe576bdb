//! Qubit absorption spectrum across the spin-wave resonance with and without
//! coupling, and the splitting read off the map.

use num_complex::Complex64;

use fluxmag::quantities::{GHZ, MHZ};
use fluxmag::spectra::{extract_splitting, linspace, poles, spectrum_map, QubitParams, SpinWaveOscillator};

fn main() -> fluxmag::Result<()> {
    let qubit = QubitParams { delta: 4.52 * GHZ, epsilon: 0.0, gamma: 2.0 * MHZ, ip: 500e-9 };
    let sw = SpinWaveOscillator { frequency: 4.57 * GHZ, gamma: 20.0 * MHZ };
    let eps = linspace(0.0, 1.288 * GHZ, 161);
    let drive = linspace(4.45 * GHZ, 4.70 * GHZ, 1001);

    for g in [0.0, 10.0, 30.0, 50.0] {
        let map = spectrum_map(&qubit, &eps, &drive, &sw, Complex64::new(g * MHZ, 0.0))?;
        match extract_splitting(&map) {
            Some(s) => println!(
                "g = {g:4.0} MHz: splitting {:6.2} MHz at eps = {:.3} GHz ({:.4} / {:.4} GHz)",
                s.separation / MHZ,
                s.epsilon / GHZ,
                s.lower / GHZ,
                s.upper / GHZ
            ),
            None => println!("g = {g:4.0} MHz: single branch, no crossing"),
        }
    }

    // eigenfrequencies at the resonant bias
    let at = qubit.with_epsilon((sw.frequency.powi(2) - qubit.delta.powi(2)).sqrt());
    for p in poles(&at, &sw, Complex64::new(30.0 * MHZ, 0.0)) {
        println!("pole {:.4} GHz, width {:.2} MHz", p.re / GHZ, -p.im / MHZ);
    }
    Ok(())
}
