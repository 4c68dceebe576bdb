//! Coupling of the n = 1 mode to a 5 μm square loop as the film moves away.

use fluxmag::coupling::{coupling_vs_distance, loglog_slope, CouplingModel, ModeWeight, QuadratureSettings};
use fluxmag::geometry::{make_square_loop, Vec3, DEFAULT_SAGITTA_TOL};
use fluxmag::magnonics::{FilmSpec, ModeConvention, PsswMode};
use fluxmag::quantities::{GAUSS, MHZ, MU0};

fn main() -> fluxmag::Result<()> {
    let wire = make_square_loop(5e-6, Vec3::zeros(), Vec3::y(), 500e-9)?.discretize(DEFAULT_SAGITTA_TOL);
    let film = FilmSpec::fig1_default();
    let mode = PsswMode::new(1, &film, 10.0 * GAUSS / MU0, ModeConvention::IntegerN, 20.0 * MHZ);
    let settings = QuadratureSettings::default();

    let near: Vec<f64> = [0.5, 1.0, 1.5, 2.0].iter().map(|d| d * 1e-6).collect();
    for weight in [ModeWeight::TravelingPhase, ModeWeight::StandingProfile] {
        let model = CouplingModel { weight, ..Default::default() };
        println!("{weight:?}");
        for p in coupling_vs_distance(&wire, &film, &mode, &near, &model, &settings)? {
            println!(
                "  d = {:4.1} um  |g| = {:6.2} MHz  ({} points, converged: {})",
                p.d * 1e6,
                p.result.magnitude() / MHZ,
                p.result.npoints,
                p.result.converged
            );
        }
    }

    let far: Vec<f64> = (0..10).map(|i| 5e-6 * 10f64.powf(i as f64 / 9.0)).collect();
    let pts = coupling_vs_distance(&wire, &film, &mode, &far, &CouplingModel::default(), &settings)?;
    let g: Vec<f64> = pts.iter().map(|p| p.result.magnitude()).collect();
    println!("far field 5-50 um: log-log slope {:.3}", loglog_slope(&far, &g)?);
    Ok(())
}
