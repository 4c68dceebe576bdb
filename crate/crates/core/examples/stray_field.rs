//! Field of the saturated film and its capping layer at the qubit loop, with
//! the 10 G bias added, as the film is moved away from the loop plane.

use fluxmag::coupling::place_film;
use fluxmag::geometry::{make_square_loop, Vec3, DEFAULT_SAGITTA_TOL};
use fluxmag::magnonics::{peak_field_on_wire, stray_field, FilmSpec};
use fluxmag::quantities::{GAUSS, MICRON};

fn main() -> fluxmag::Result<()> {
    let qubit = make_square_loop(5.0 * MICRON, Vec3::zeros(), Vec3::y(), 500e-9)?;
    let wire = qubit.discretize(DEFAULT_SAGITTA_TOL);
    let film = FilmSpec::fig1_default();
    let applied = film.magnetization * 10.0 * GAUSS;

    println!("d (um)  center (G)  wire peak (G)");
    for i in 0..=5 {
        let d = (1.0 + 0.1 * i as f64) * MICRON;
        let placed = place_film(&wire, &film, d)?;
        let center = (stray_field(&placed, &placed.magnetization, &wire.centroid())? + applied).norm();
        let peak = peak_field_on_wire(&placed, &wire, &applied, 50)?;
        println!("{:6.1}  {:10.2}  {:13.2}", d / MICRON, center / GAUSS, peak / GAUSS);
    }
    Ok(())
}
