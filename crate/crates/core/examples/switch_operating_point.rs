//! Magnon-mediated coupling between two qubits: detuning sweep, the OFF point
//! where it cancels the direct inductive term, and the ON-point report.

use fluxmag::quantities::MHZ;
use fluxmag::switch::{magnon_mediated_j, operating_point, SwitchConfig};

fn main() -> fluxmag::Result<()> {
    let cfg = SwitchConfig {
        g1: 50.0 * MHZ,
        g2: 50.0 * MHZ,
        delta1: 400.0 * MHZ,
        delta2: 400.0 * MHZ,
        g_ind: 3.97 * MHZ,
        gamma_sw: 10.0 * MHZ,
        gamma_cap: 300.0 * MHZ,
        cap_detuning: 3300.0 * MHZ,
        cap_coupling: 20.0 * MHZ,
    };

    for d in [-1000.0, -630.0, -300.0, 300.0, 400.0, 1000.0] {
        let j = magnon_mediated_j(cfg.g1, cfg.g2, d * MHZ, d * MHZ)?.j;
        println!("detuning {d:6.0} MHz: J = {:7.3} MHz, J + g_ind = {:7.3} MHz", j / MHZ, (j + cfg.g_ind) / MHZ);
    }

    let report = operating_point(&cfg, cfg.delta1)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}
