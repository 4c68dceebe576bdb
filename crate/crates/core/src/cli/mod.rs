//! Command-line front end: scenario-driven commands writing CSV/JSON data
//! files plus a `manifest.json` per run.
//!
//! Exit codes: 0 success, 1 I/O, 2 validation, 3 non-convergence, 64 usage.

pub mod output;
pub mod scenario;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::coupling::{coupling_strength, coupling_vs_distance, loglog_slope, place_film, DistancePoint};
use crate::error::{Error, Result};
use crate::geometry::{field_grid, BoxRegion, Polyline, DEFAULT_SAGITTA_TOL};
use crate::inductance::{inductive_coupling_frequency, mutual_inductance};
use crate::magnonics::{mode_table, peak_field_on_wire, stray_field, ModeConvention};
use crate::quantities::{GAUSS, GHZ, MHZ, MICRON, MU0};
use crate::spectra::{extract_splitting, spectrum_map};
use crate::switch::{off_detuning, operating_point, OffPoint};

use output::{num, sha256_hex, Csv, Manifest, OutputDir};
use scenario::{Overrides, Scenario};

pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "fluxmag", version, about = "Flux qubit / standing spin wave co-design toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Scenario JSON file; each command falls back to a bundled scenario.
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Relative tolerance for the coupling and inductance quadratures.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Thickness wavevector convention: integer_n or half_integer_k.
    #[arg(long, global = true, value_parser = parse_convention)]
    pub convention: Option<ModeConvention>,
    /// Measured mode frequency (GHz) replacing the computed one.
    #[arg(long = "mode-freq-override", global = true)]
    pub mode_freq_override: Option<f64>,
}

fn parse_convention(s: &str) -> std::result::Result<ModeConvention, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Standing spin-wave mode table.
    Pssw {
        #[arg(long)]
        n: Option<u32>,
        /// Highest mode index in the table.
        #[arg(long, default_value_t = 5)]
        n_max: u32,
    },
    /// Loop field map and film stray field.
    Field,
    /// Qubit–magnon coupling against distance.
    Couple,
    /// Qubit spectroscopy maps with avoided-crossing extraction.
    Spectrum,
    /// Mutual-inductance matrix of the scenario's loops.
    Inductance,
    /// Switch operating-point report.
    Switch,
    /// Regenerate the data behind one of the reference figures.
    Reproduce { target: Target },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Fig2,
    Fig3,
    Fig4,
}

impl Target {
    fn name(self) -> &'static str {
        match self {
            Target::Fig2 => "fig2",
            Target::Fig3 => "fig3",
            Target::Fig4 => "fig4",
        }
    }
}

impl Command {
    fn name(&self) -> String {
        match self {
            Command::Pssw { .. } => "pssw".into(),
            Command::Field => "field".into(),
            Command::Couple => "couple".into(),
            Command::Spectrum => "spectrum".into(),
            Command::Inductance => "inductance".into(),
            Command::Switch => "switch".into(),
            Command::Reproduce { target } => format!("reproduce {}", target.name()),
        }
    }

    fn default_scenario(&self) -> &'static str {
        match self {
            Command::Pssw { .. } | Command::Field | Command::Couple => "fig2",
            Command::Spectrum => "fig3",
            Command::Inductance | Command::Switch => "fig4",
            Command::Reproduce { target } => target.name(),
        }
    }
}

/// Accumulates summary values, timings and convergence failures of a run.
struct Run {
    summary: BTreeMap<String, Value>,
    timings: BTreeMap<String, f64>,
    unconverged: Vec<String>,
}

impl Run {
    fn new() -> Self {
        Self { summary: BTreeMap::new(), timings: BTreeMap::new(), unconverged: Vec::new() }
    }

    fn timed<T>(&mut self, stage: &str, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        let t = Instant::now();
        let out = f(self)?;
        self.timings.insert(stage.to_string(), t.elapsed().as_secs_f64());
        Ok(out)
    }
}

/// Parse `args` (program name first) and run; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(dir) => {
            println!("outputs written to {}", dir.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Execute a parsed command line, returning the output directory.
pub fn run(cli: &Cli) -> Result<PathBuf> {
    match cli.threads {
        Some(0) => Err(Error::Config("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(|| execute(cli)),
        None => execute(cli),
    }
}

fn load(cli: &Cli) -> Result<(Scenario, String)> {
    let text = match &cli.scenario {
        Some(p) => std::fs::read_to_string(p)?,
        None => Scenario::bundled(cli.command.default_scenario()).expect("bundled scenario").to_string(),
    };
    let mut s = Scenario::from_json(&text)?;
    s.apply_overrides(&Overrides {
        tol: cli.tol,
        convention: cli.convention,
        mode_freq_override_ghz: cli.mode_freq_override,
    });
    s.validate()?;
    Ok((s, text))
}

fn inputs_hash(cli: &Cli, text: &str) -> String {
    let flags = json!({
        "command": cli.command.name(),
        "n": match cli.command { Command::Pssw { n, n_max } => json!([n, n_max]), _ => Value::Null },
        "tol": cli.tol,
        "convention": cli.convention.map(|c| format!("{c:?}")),
        "mode_freq_override_GHz": cli.mode_freq_override,
    });
    sha256_hex(format!("{text}\n{flags}").as_bytes())
}

fn execute(cli: &Cli) -> Result<PathBuf> {
    let start = Instant::now();
    let (s, text) = load(cli)?;
    let dir = match (&cli.out, &s.output) {
        (Some(d), _) => d.clone(),
        (None, Some(o)) => PathBuf::from(&o.dir),
        (None, None) => Path::new("out").join(&s.name),
    };
    let mut out = OutputDir::create(&dir)?;
    let mut run = Run::new();
    match &cli.command {
        Command::Pssw { n, n_max } => run.timed("pssw", |r| pssw(&s, *n, *n_max, &mut out, r))?,
        Command::Field => run.timed("field", |r| field(&s, &mut out, r))?,
        Command::Couple => run.timed("couple", |r| couple(&s, &mut out, r))?,
        Command::Spectrum => run.timed("spectrum", |r| spectrum(&s, &mut out, r))?,
        Command::Inductance => run.timed("inductance", |r| inductance(&s, &mut out, r))?,
        Command::Switch => run.timed("switch", |r| switch(&s, &mut out, r))?,
        Command::Reproduce { target } => match target {
            Target::Fig2 => {
                run.timed("field", |r| field(&s, &mut out, r))?;
                run.timed("couple", |r| couple(&s, &mut out, r))?;
            }
            Target::Fig3 => run.timed("spectrum", |r| spectrum(&s, &mut out, r))?,
            Target::Fig4 => {
                run.timed("couple", |r| couple(&s, &mut out, r))?;
                run.timed("inductance", |r| inductance(&s, &mut out, r))?;
                run.timed("switch", |r| switch(&s, &mut out, r))?;
            }
        },
    }
    run.timings.insert("total".into(), start.elapsed().as_secs_f64());
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: cli.command.name(),
        scenario: s.name.clone(),
        inputs_sha256: inputs_hash(cli, &text),
        threads: rayon::current_num_threads(),
        timings_s: run.timings.clone(),
        outputs: out.files().clone(),
        summary: json!(run.summary),
    };
    out.write_json("manifest.json", &manifest)?;
    if !run.unconverged.is_empty() {
        return Err(Error::NonConvergence(run.unconverged.join("; ")));
    }
    Ok(dir)
}

fn pssw(s: &Scenario, n: Option<u32>, n_max: u32, out: &mut OutputDir, run: &mut Run) -> Result<()> {
    let film = s.film_spec()?;
    let cfg = s.mode_config()?;
    let n = n.unwrap_or(cfg.n);
    let hext = s.hext()?;
    let rows = mode_table(&film, hext, cfg.convention, n_max.max(n));
    let mut csv = Csv::new(&["n", "k_z_per_m", "wavelength_m", "frequency_Hz"]);
    for r in &rows {
        csv.row(&[r.n.to_string(), num(r.k), num(r.wavelength), num(r.frequency)]);
    }
    out.write("modes.csv", &csv.into_bytes())?;
    let f = rows[n as usize].frequency;
    let convention = serde_json::to_value(cfg.convention)?;
    println!("n = {n}: {:.2} GHz ({})", f / GHZ, convention.as_str().unwrap_or(""));
    if let Some(o) = cfg.frequency_override_ghz {
        println!("experimental override: {o:.2} GHz");
    }
    run.summary.insert(
        "pssw".into(),
        json!({
            "n": n,
            "convention": convention,
            "frequency_GHz": f / GHZ,
            "frequency_override_GHz": cfg.frequency_override_ghz,
        }),
    );
    Ok(())
}

fn wire_of(s: &Scenario, name: &str) -> Result<Polyline> {
    Ok(s.build_loop(name)?.discretize(DEFAULT_SAGITTA_TOL))
}

fn field(s: &Scenario, out: &mut OutputDir, run: &mut Run) -> Result<()> {
    let cfg = s.field.as_ref().ok_or_else(|| Error::Config("scenario has no field section".into()))?;
    let wire = wire_of(s, &cfg.loop_name)?;
    let region = BoxRegion { min: cfg.region_min_um.map(|v| v * MICRON), max: cfg.region_max_um.map(|v| v * MICRON) };
    let grid = field_grid(&wire, &region, cfg.counts)?;
    let mut csv = Csv::new(&["x_um", "y_um", "z_um", "Bx_gauss", "By_gauss", "Bz_gauss"]);
    for (p, b) in grid.points().zip(&grid.samples) {
        let mut cells: Vec<String> = p.iter().map(|v| num(v / MICRON)).collect();
        cells.extend(b.iter().map(|v| num(v / GAUSS)));
        csv.row(&cells);
    }
    out.write("field_map.csv", &csv.into_bytes())?;
    let mut summary = json!({ "grid_points": grid.len() });

    if let Some(sweep) = &cfg.stray {
        let film = s.film_spec()?;
        let center = wire.centroid();
        let applied = film.magnetization * (MU0 * s.hext()?);
        let mut csv = Csv::new(&[
            "d_um",
            "center_Bx_gauss",
            "center_By_gauss",
            "center_Bz_gauss",
            "center_total_gauss",
            "wire_peak_total_gauss",
        ]);
        let mut peaks = Vec::new();
        for d in sweep.si_values("d_um")? {
            let placed = place_film(&wire, &film, d)?;
            let b = stray_field(&placed, &placed.magnetization, &center)?;
            let peak = peak_field_on_wire(&placed, &wire, &applied, 50)? / GAUSS;
            peaks.push(peak);
            csv.row(&[
                num(d / MICRON),
                num(b.x / GAUSS),
                num(b.y / GAUSS),
                num(b.z / GAUSS),
                num((b + applied).norm() / GAUSS),
                num(peak),
            ]);
        }
        out.write("stray_field.csv", &csv.into_bytes())?;
        let lo = peaks.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = peaks.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        println!("peak total field on the loop wire: {lo:.1} to {hi:.1} G");
        summary["wire_peak_total_gauss"] = json!([lo, hi]);
    }
    run.summary.insert("field".into(), summary);
    Ok(())
}

fn couple(s: &Scenario, out: &mut OutputDir, run: &mut Run) -> Result<()> {
    let c = s.coupling_config()?;
    let wire = wire_of(s, &c.loop_name)?;
    let film = s.film_spec()?;
    let mode = s.pssw_mode(&film)?;
    let model = s.coupling_model()?;
    let settings = s.quadrature_settings();
    let sweeps: Vec<(String, Vec<f64>, bool)> = if s.sweeps.is_empty() {
        let d = c.d_um.ok_or_else(|| Error::Config("couple needs a d_um sweep or coupling.d_um".into()))?;
        vec![("coupling".into(), vec![d * MICRON], false)]
    } else {
        s.sweeps
            .iter()
            .enumerate()
            .map(|(i, sw)| {
                let name = match &sw.name {
                    Some(n) => format!("coupling_{n}"),
                    None => format!("coupling_{i}"),
                };
                Ok((name, sw.si_values("d_um")?, sw.fit_slope))
            })
            .collect::<Result<_>>()?
    };
    let mut summary = serde_json::Map::new();
    for (name, ds, fit) in sweeps {
        let points = coupling_vs_distance(&wire, &film, &mode, &ds, &model, &settings)?;
        out.write(&format!("{name}.csv"), &coupling_csv(&points))?;
        let mags: Vec<f64> = points.iter().map(|p| p.result.magnitude()).collect();
        for p in points.iter().filter(|p| !p.result.converged) {
            run.unconverged.push(format!("{name}: d = {} um reached {:.2e}", p.d / MICRON, p.result.achieved_tol));
        }
        let mut entry = json!({
            "g_abs_MHz": mags.iter().map(|g| g / MHZ).collect::<Vec<_>>(),
            "monotone_decreasing": mags.windows(2).all(|w| w[1] < w[0]),
        });
        if fit {
            let slope = loglog_slope(&ds, &mags)?;
            println!("{name}: log-log slope {slope:.3}");
            entry["loglog_slope"] = json!(slope);
        }
        for p in &points {
            println!("{name}: d = {:.3} um, |g| = {:.3} MHz", p.d / MICRON, p.result.magnitude() / MHZ);
        }
        summary.insert(name, entry);
    }
    run.summary.insert("couple".into(), Value::Object(summary));
    Ok(())
}

fn coupling_csv(points: &[DistancePoint]) -> Vec<u8> {
    let mut csv = Csv::new(&["d_um", "g_abs_MHz", "g_phase_rad", "npoints", "converged"]);
    for p in points {
        csv.row(&[
            num(p.d / MICRON),
            num(p.result.magnitude() / MHZ),
            num(p.result.g.arg()),
            p.result.npoints.to_string(),
            p.result.converged.to_string(),
        ]);
    }
    csv.into_bytes()
}

fn spectrum(s: &Scenario, out: &mut OutputDir, run: &mut Run) -> Result<()> {
    let qubit = s.qubit_params()?;
    let sw = s.spin_wave()?;
    let sp = s.spectrum.as_ref().expect("validated by spectrum_couplings");
    let couplings = s.spectrum_couplings()?;
    let eps = sp.bias.si_values("epsilon_GHz")?;
    let drive = sp.drive.si_values("drive_GHz")?;
    let mut rows = Vec::new();
    for g in couplings {
        let map = spectrum_map(&qubit, &eps, &drive, &sw, g)?;
        let label = format!("{}", g.re / MHZ);
        out.write(&format!("spectrum_g{label}MHz.csv"), map.to_csv().as_bytes())?;
        let split = extract_splitting(&map);
        match &split {
            Some(x) => println!("g = {label} MHz: minimum splitting {:.2} MHz", x.separation / MHZ),
            None => println!("g = {label} MHz: no avoided crossing"),
        }
        rows.push(json!({
            "g_MHz": g.re / MHZ,
            "splitting_MHz": split.map(|x| x.separation / MHZ),
            "splitting": split,
        }));
    }
    out.write_json("splitting.json", &rows)?;
    run.summary.insert("spectrum".into(), Value::Array(rows));
    Ok(())
}

#[derive(Serialize)]
struct InductanceMatrix {
    loops: Vec<String>,
    #[serde(rename = "currents_nA")]
    currents_na: Vec<f64>,
    /// Off-diagonal mutual inductances (H); self terms are null.
    henries: Vec<Vec<Option<f64>>>,
    /// M·I_i·I_j/h (MHz).
    #[serde(rename = "MHz")]
    mhz: Vec<Vec<Option<f64>>>,
    converged: bool,
}

fn inductance(s: &Scenario, out: &mut OutputDir, run: &mut Run) -> Result<()> {
    let cfg = s.inductance.as_ref().ok_or_else(|| Error::Config("scenario has no inductance section".into()))?;
    let loops = cfg.loops.iter().map(|n| s.build_loop(n)).collect::<Result<Vec<_>>>()?;
    let n = loops.len();
    let mut henries = vec![vec![None; n]; n];
    let mut mhz = vec![vec![None; n]; n];
    let mut converged = true;
    for i in 0..n {
        for j in i + 1..n {
            let m = mutual_inductance(&loops[i], &loops[j], cfg.tol)?;
            if !m.converged {
                converged = false;
                run.unconverged.push(format!("M({}, {}) reached {:.2e}", cfg.loops[i], cfg.loops[j], m.achieved_tol));
            }
            let f = inductive_coupling_frequency(m.henries, loops[i].current, loops[j].current) / MHZ;
            println!("M({}, {}) = {:.4e} H, {f:.3} MHz", cfg.loops[i], cfg.loops[j], m.henries);
            henries[i][j] = Some(m.henries);
            henries[j][i] = Some(m.henries);
            mhz[i][j] = Some(f);
            mhz[j][i] = Some(f);
        }
    }
    let matrix = InductanceMatrix {
        loops: cfg.loops.clone(),
        currents_na: loops.iter().map(|l| l.current / 1e-9).collect(),
        henries,
        mhz,
        converged,
    };
    out.write_json("inductance.json", &matrix)?;
    run.summary.insert("inductance".into(), serde_json::to_value(&matrix)?);
    Ok(())
}

fn switch(s: &Scenario, out: &mut OutputDir, run: &mut Run) -> Result<()> {
    let cfg = s.switch_config()?;
    let sw = s.switch.as_ref().expect("validated by switch_config");
    let report = operating_point(&cfg, sw.on_detuning_mhz * MHZ)?;
    out.write_json("switch_report.json", &report)?;
    if let OffPoint::Finite { detuning } = report.j_off_detuning {
        println!("OFF at {:.1} MHz detuning", detuning / MHZ);
    }
    println!("ON total coupling {:.2} MHz", report.total_on / MHZ);
    let mut summary = json!({ "report": report });

    if let Some([a, b]) = &sw.pair {
        let c = s.coupling_config()?;
        let d = c.d_um.ok_or_else(|| Error::Config("end-to-end switch check needs coupling.d_um".into()))? * MICRON;
        let film = s.film_spec()?;
        let mode = s.pssw_mode(&film)?;
        let model = s.coupling_model()?;
        let settings = s.quadrature_settings();
        let mut gs = Vec::new();
        for name in [a, b] {
            let wire = wire_of(s, name)?;
            let placed = place_film(&wire, &film, d)?;
            let r = coupling_strength(&wire, &placed, &mode, &model, &settings)?;
            if !r.converged {
                run.unconverged.push(format!("coupling of {name} reached {:.2e}", r.achieved_tol));
            }
            gs.push(r.magnitude());
        }
        let (la, lb) = (s.build_loop(a)?, s.build_loop(b)?);
        let tol = s.inductance.as_ref().map_or(1e-6, |i| i.tol);
        let m = mutual_inductance(&la, &lb, tol)?;
        let g_ind = inductive_coupling_frequency(m.henries, la.current, lb.current);
        let off = off_detuning(gs[0], gs[1], g_ind)?;
        let e2e = json!({
            "d_um": d / MICRON,
            "g1_MHz": gs[0] / MHZ,
            "g2_MHz": gs[1] / MHZ,
            "mutual_inductance_H": m.henries,
            "g_ind_MHz": g_ind / MHZ,
            "J_off_detuning": off,
        });
        if let OffPoint::Finite { detuning } = off {
            println!("end-to-end OFF at {:.1} MHz detuning", detuning / MHZ);
        }
        out.write_json("switch_end_to_end.json", &e2e)?;
        summary["end_to_end"] = e2e;
    }
    run.summary.insert("switch".into(), summary);
    Ok(())
}
