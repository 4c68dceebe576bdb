//! Mutual inductance of two shape-modified qubit loops and of a readout
//! SQUID nested inside one of them.

use std::f64::consts::SQRT_2;

use fluxmag::geometry::{make_arc_loop, make_inset_arc_loop, make_square_loop, ArcShape, Vec3};
use fluxmag::inductance::{inductive_coupling_frequency, mutual_inductance};
use fluxmag::quantities::MHZ;

fn main() -> fluxmag::Result<()> {
    let um = 1e-6;
    let ip = 500e-9;
    let left = Vec3::new(-10.0 * SQRT_2 * um, 0.0, 0.0);
    let right = Vec3::new(10.0 * SQRT_2 * um, 0.0, 0.0);

    for shape in [ArcShape::Concave, ArcShape::Convex] {
        let a = make_arc_loop(10.0 * um, 13.2 * um, left, ip, shape)?;
        let b = make_arc_loop(10.0 * um, 13.2 * um, right, ip, shape)?;
        let m = mutual_inductance(&a, &b, 1e-6)?;
        println!(
            "{shape:?} pair: M = {:.4e} H, g_ind = {:.3} MHz",
            m.henries,
            inductive_coupling_frequency(m.henries, ip, ip) / MHZ
        );
    }

    let a = make_square_loop(20.0 * um, left, Vec3::z(), ip)?;
    let b = make_square_loop(20.0 * um, right + Vec3::new(2.0 * um, 0.0, 0.0), Vec3::z(), ip)?;
    let m = mutual_inductance(&a, &b, 1e-6)?;
    println!(
        "20 um squares, 2 um gap: M = {:.4e} H, g_ind = {:.3} MHz",
        m.henries,
        inductive_coupling_frequency(m.henries, ip, ip) / MHZ
    );

    let qubit = make_arc_loop(10.0 * um, 13.2 * um, left, ip, ArcShape::Concave)?;
    let other = make_arc_loop(10.0 * um, 13.2 * um, right, ip, ArcShape::Concave)?;
    for gap in [0.25, 0.5, 1.0] {
        let squid = make_inset_arc_loop(10.0 * um, 13.2 * um, left, ip, ArcShape::Concave, gap * um)?;
        let near = mutual_inductance(&squid, &qubit, 1e-6)?;
        let far = mutual_inductance(&squid, &other, 1e-6)?;
        println!(
            "SQUID {gap} um inside: M_near = {:.3e} H, M_far = {:.3e} H, ratio {:.0}",
            near.henries,
            far.henries,
            (near.henries / far.henries).abs()
        );
    }
    Ok(())
}
