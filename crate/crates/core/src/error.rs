use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("field point lies {distance:.3e} m from segment {segment} (exclusion radius {radius:.1e} m)")]
    OnWire { segment: usize, distance: f64, radius: f64 },

    #[error("point lies inside a magnetized slab")]
    InsideSlab,

    #[error("height {z:.3e} m is outside the film thickness {thickness:.3e} m")]
    OutsideFilm { z: f64, thickness: f64 },

    #[error("dispersive regime violated: |detuning| = {detuning:.6e} Hz does not exceed coupling {coupling:.6e} Hz")]
    NotDispersive { coupling: f64, detuning: f64 },

    #[error("did not converge: {0}")]
    NonConvergence(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 1,
            Error::NonConvergence(_) => 3,
            _ => 2,
        }
    }
}
