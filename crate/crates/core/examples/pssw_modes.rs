//! Thickness-mode ladder of the default YIG/CoFeB film under both wavevector
//! conventions, plus the decay a damped mode converts into.

use fluxmag::magnonics::{damping_to_decay, mode_table, FilmSpec, ModeConvention};
use fluxmag::quantities::{GAUSS, GHZ, MHZ, MU0};

fn main() -> fluxmag::Result<()> {
    let film = FilmSpec::fig1_default();
    let hext = 10.0 * GAUSS / MU0;
    for convention in [ModeConvention::IntegerN, ModeConvention::HalfIntegerK] {
        println!("{convention:?}");
        for row in mode_table(&film, hext, convention, 4) {
            println!(
                "  n = {}  k = {:9.3e} 1/m  lambda = {:7.1} nm  f = {:6.3} GHz",
                row.n,
                row.k,
                row.wavelength * 1e9,
                row.frequency / GHZ
            );
        }
    }
    let gamma = damping_to_decay(film.material.damping_alpha, 4.57 * GHZ)?;
    println!("intrinsic linewidth at 4.57 GHz: {:.3} MHz", gamma / MHZ);
    Ok(())
}
