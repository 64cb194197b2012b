//! `rie`: reservoir-induced entanglement between two double quantum dots.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod error;
mod manifest;
mod state;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use config::ConfigMap;
use error::CliError;
use manifest::Run;
use rie::effint::{self, ModeSumConfig, Vec3};
use rie::entanglement::{concurrence, eof_from_concurrence};
use rie::kernels::{evaluate_kernels, BathKernels, KernelQuery};
use rie::model::{DerivedQuantities, PhysicalParams, CONSTANTS};
use rie::scan::{self, format_float as f, ScanGrid, ScanOptions};
use rie::twoqubit::{evolve, initial_product_state, DensityMatrix4};
use std::path::PathBuf;
use std::process::ExitCode;

const AFTER_HELP: &str = "\
Configuration files hold one `key = value` per line; `#` starts a comment.
Flags override file keys. Run `rie keys` for the list of keys and units.
Exit codes: 0 success, 1 I/O error, 2 configuration error, 3 numerical
strategy refused.";

#[derive(Parser)]
#[command(name = "rie", version, about = "Reservoir-induced entanglement of two double quantum dots in black-body radiation", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decoherence exponents f1, f2 and phases phi1, phi2, phi_minus at one time.
    Kernels {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        physics: Physics,
        #[command(flatten)]
        time: Time,
    },
    /// Evolve a two-qubit state and report its concurrence and entanglement.
    Evolve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        physics: Physics,
        #[command(flatten)]
        time: Time,
        #[command(flatten)]
        input: StateInput,
    },
    /// Concurrence and entanglement of formation of a state file.
    Eof {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: StateInput,
    },
    /// Entanglement over log10(t0/tau) and log10(t/tau) at full coupling.
    ScanFig1 {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        physics: Physics,
        #[command(flatten)]
        grid: Grid,
    },
    /// Long-time entanglement over v (x axis) and phi_minus in radians (y axis).
    ScanFig2 {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
    },
    /// Entanglement over gamma and log10(t/tau) at fixed t0/tau.
    ScanFig3 {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        physics: Physics,
        #[command(flatten)]
        grid: Grid,
        /// Light travel time t0 in units of tau [default: 1e6].
        #[arg(long, value_name = "RATIO")]
        fig3_t0_over_tau: Option<String>,
    },
    /// Predicted first-maximum time in seconds, or the separation for a target time.
    PredictT1 {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        physics: Physics,
        /// Target first-maximum time in seconds; prints the separation instead.
        #[arg(long, value_name = "S")]
        t1_seconds: Option<String>,
    },
    /// Locate the first entanglement maximum numerically.
    FindT1 {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        physics: Physics,
        /// Lower search bound in log10(t/tau) [default: log10(t0/tau)].
        #[arg(long, value_name = "LOG10")]
        search_log10_t_min: Option<String>,
        /// Upper search bound in log10(t/tau) [default: predicted time plus two decades].
        #[arg(long, value_name = "LOG10")]
        search_log10_t_max: Option<String>,
        /// Points of the coarse logarithmic scan [default: 200].
        #[arg(long, value_name = "N")]
        search_points: Option<String>,
        /// Smallest entanglement accepted as the first maximum [default: 0.5].
        #[arg(long, value_name = "E")]
        search_threshold: Option<String>,
    },
    /// Convergence of the mode-summed exchange coupling against the dipole law.
    EffInt {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        physics: Physics,
        /// aligned | perpendicular | oblique | all [default: all].
        #[arg(long, value_name = "NAME")]
        geometry: Option<String>,
        /// Comma-separated box sides in units of R [default: 10].
        #[arg(long, value_name = "LIST")]
        box_ratios: Option<String>,
    },
    /// List every configuration key with its unit.
    Keys,
}

#[derive(Args)]
struct Common {
    /// Configuration file of `key = value` lines.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory; receives data files, run.cfg and manifest.json.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads [default: all cores].
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Args)]
struct Physics {
    /// Bath temperature in kelvin; 0 selects the zero-temperature mode [default: 2.73].
    #[arg(long = "temperature-k", value_name = "K")]
    temperature_k: Option<String>,
    /// Dipole length in nanometres [default: 10].
    #[arg(long, value_name = "NM", conflicts_with = "dipole_um")]
    dipole_nm: Option<String>,
    /// Dipole length in micrometres.
    #[arg(long, value_name = "UM")]
    dipole_um: Option<String>,
    /// Dot separation R in metres [default: 1e-6].
    #[arg(long, value_name = "M", conflicts_with = "t0_over_tau")]
    separation_m: Option<String>,
    /// Light travel time R/c0 in units of tau = hbar/(kB T); sets R.
    #[arg(long, value_name = "RATIO")]
    t0_over_tau: Option<String>,
    /// Cutoff energy hbar*omega_max in electronvolts [default: 1].
    #[arg(long = "cutoff-ev", value_name = "EV", conflicts_with = "y_max")]
    cutoff_ev: Option<String>,
    /// Dimensionless cutoff omega_max*tau (omega_max*t0 at zero temperature).
    #[arg(long, value_name = "Y")]
    y_max: Option<String>,
    /// Relative coupling to the sin-wave bath, in [0, 1] [default: 1].
    #[arg(long, value_name = "G")]
    gamma: Option<String>,
    /// sharp | power_law [default: sharp].
    #[arg(long, value_name = "KIND")]
    cutoff_kind: Option<String>,
    /// Power-law cutoff exponent, greater than 2.
    #[arg(long, value_name = "P")]
    cutoff_p: Option<String>,
    /// auto | quadrature | closed_form_coth_one | long_time_asymptote [default: auto].
    #[arg(long, value_name = "NAME")]
    strategy: Option<String>,
    /// thermal | coth_one [default: thermal].
    #[arg(long, value_name = "MODE")]
    temperature_mode: Option<String>,
}

#[derive(Args)]
struct Time {
    /// Time in units of tau.
    #[arg(long, value_name = "T", group = "when")]
    t_over_tau: Option<String>,
    /// Time in units of t0 = R/c0 (zero temperature only).
    #[arg(long, value_name = "T", group = "when")]
    t_over_t0: Option<String>,
    /// Time in seconds.
    #[arg(long, value_name = "S", group = "when")]
    t_seconds: Option<String>,
}

#[derive(Args)]
struct StateInput {
    /// State file: 16 comma-separated a+bi entries, row-major in |00>,|01>,|10>,|11>.
    #[arg(long, value_name = "PATH")]
    state: Option<String>,
}

#[derive(Args)]
struct Grid {
    /// Number of x samples.
    #[arg(long, value_name = "N")]
    nx: Option<String>,
    /// Number of y samples.
    #[arg(long, value_name = "N")]
    ny: Option<String>,
    /// Lower x bound (decimal log for logarithmic axes).
    #[arg(long, value_name = "X", allow_hyphen_values = true)]
    grid_x_min: Option<String>,
    /// Upper x bound (decimal log for logarithmic axes).
    #[arg(long, value_name = "X", allow_hyphen_values = true)]
    grid_x_max: Option<String>,
    /// Lower y bound (decimal log for logarithmic axes).
    #[arg(long, value_name = "Y", allow_hyphen_values = true)]
    grid_y_min: Option<String>,
    /// Upper y bound (decimal log for logarithmic axes).
    #[arg(long, value_name = "Y", allow_hyphen_values = true)]
    grid_y_max: Option<String>,
    /// Output files to write.
    #[arg(long, value_enum, default_value_t = Format::Both)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Pgm,
    Both,
}

type Flags<'a> = Vec<(&'static str, &'a Option<String>)>;

impl Physics {
    fn flags(&self) -> Flags<'_> {
        vec![
            ("temperature_K", &self.temperature_k),
            ("dipole_nm", &self.dipole_nm),
            ("dipole_um", &self.dipole_um),
            ("separation_m", &self.separation_m),
            ("t0_over_tau", &self.t0_over_tau),
            ("cutoff_eV", &self.cutoff_ev),
            ("y_max", &self.y_max),
            ("gamma", &self.gamma),
            ("cutoff_kind", &self.cutoff_kind),
            ("cutoff_p", &self.cutoff_p),
            ("strategy", &self.strategy),
            ("temperature_mode", &self.temperature_mode),
        ]
    }
}

impl Time {
    fn flags(&self) -> Flags<'_> {
        vec![
            ("t_over_tau", &self.t_over_tau),
            ("t_over_t0", &self.t_over_t0),
            ("t_seconds", &self.t_seconds),
        ]
    }
}

impl Grid {
    fn flags(&self) -> Flags<'_> {
        vec![
            ("grid_nx", &self.nx),
            ("grid_ny", &self.ny),
            ("grid_x_min", &self.grid_x_min),
            ("grid_x_max", &self.grid_x_max),
            ("grid_y_min", &self.grid_y_min),
            ("grid_y_max", &self.grid_y_max),
        ]
    }
}

/// File keys overridden by the given flags. A flag replaces a key of the same
/// family, so `--dipole-um` wins over `dipole_nm` from the file.
fn load_config(common: &Common, flags: Flags<'_>) -> Result<ConfigMap, CliError> {
    let mut cfg = match &common.config {
        Some(path) => ConfigMap::load(path)?,
        None => ConfigMap::default(),
    };
    const FAMILIES: &[&[&str]] = &[
        &["dipole_nm", "dipole_um"],
        &["separation_m", "t0_over_tau"],
        &["cutoff_eV", "y_max"],
        &["t_over_tau", "t_over_t0", "t_seconds"],
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            if let Some(family) = FAMILIES.iter().find(|fam| fam.contains(&key)) {
                for other in family.iter().filter(|k| **k != key) {
                    cfg.remove(other);
                }
            }
            cfg.set(key, v)?;
        }
    }
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(CliError::config("threads", "must be at least 1"));
        }
    }
    Ok(cfg)
}

fn start(name: &str, common: &Common) -> Result<Run, CliError> {
    if let Some(n) = common.threads {
        // Fails only if a pool already exists, which is harmless here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Run::start(name, common.out.clone())
}

fn physics(cfg: &ConfigMap) -> Result<(PhysicalParams, DerivedQuantities), CliError> {
    let params = cfg.physical_params()?;
    let derived = params
        .derive_dimensionless()
        .map_err(|e| config::param_error(e, "dipole_nm"))?;
    Ok((params, derived))
}

fn kernels_at(cfg: &ConfigMap) -> Result<(PhysicalParams, DerivedQuantities, f64, BathKernels), CliError> {
    let (params, derived) = physics(cfg)?;
    let t = cfg.time(&derived)?;
    let query = KernelQuery::new(t, derived.t0(), derived.y_max)
        .with_cutoff(params.cutoff)
        .with_mode(cfg.temperature_mode(&params)?)
        .with_strategy(cfg.strategy()?);
    Ok((params, derived, t, evaluate_kernels(&query)?))
}

fn derived_json(derived: &DerivedQuantities) -> serde_json::Value {
    serde_json::to_value(derived).expect("derived quantities serialize")
}

fn kernel_lines(derived: &DerivedQuantities, t: f64, k: &BathKernels) -> Vec<(&'static str, String)> {
    let unit = if derived.is_zero_temperature() { "t0" } else { "tau" };
    vec![
        ("time_unit", unit.to_string()),
        ("t", f(t)),
        ("t0", f(derived.t0())),
        ("y_max", f(derived.y_max)),
        ("A", f(derived.a)),
        ("f1", f(k.f1)),
        ("f2", f(k.f2)),
        ("phi1", f(k.phi1)),
        ("phi2", f(k.phi2)),
        ("phi_minus", f(k.phi_minus)),
        ("error_estimate", f(k.error_estimate)),
        ("path", k.path.label().to_string()),
    ]
}

fn read_state(cfg: &ConfigMap) -> Result<Option<DensityMatrix4>, CliError> {
    let Some(path) = cfg.get("state") else {
        return Ok(None);
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    state::parse_state(&text).map(Some)
}

fn entanglement_lines(rho: &DensityMatrix4) -> Result<String, CliError> {
    let c = concurrence(rho)?;
    Ok(format!("C={}\nE={}\n", f(c), f(eof_from_concurrence(c))))
}

fn cmd_kernels(common: Common, physics_flags: Physics, time: Time) -> Result<(), CliError> {
    let cfg = load_config(&common, [physics_flags.flags(), time.flags()].concat())?;
    let mut run = start("kernels", &common)?;
    let (_, derived, t, k) = kernels_at(&cfg)?;
    let lines = kernel_lines(&derived, t, &k);
    for (key, value) in &lines {
        println!("{key}={value}");
    }
    let header: Vec<&str> = lines.iter().map(|(k, _)| *k).collect();
    let row: Vec<&str> = lines.iter().map(|(_, v)| v.as_str()).collect();
    run.output("kernels.csv", format!("{}\n{}\n", header.join(","), row.join(",")).as_bytes())?;
    run.histogram.insert(k.path.label().to_string(), 1);
    run.derived = derived_json(&derived);
    run.finish(&cfg)
}

fn cmd_evolve(common: Common, physics_flags: Physics, time: Time, input: StateInput) -> Result<(), CliError> {
    let flags = [physics_flags.flags(), time.flags(), vec![("state", &input.state)]].concat();
    let cfg = load_config(&common, flags)?;
    let mut run = start("evolve", &common)?;
    let (params, derived, t, k) = kernels_at(&cfg)?;
    let rho0 = read_state(&cfg)?.unwrap_or_else(initial_product_state);
    let rho = evolve(&rho0, &k, derived.a, params.gamma)?;
    let text = state::format_state(&rho);
    print!("{text}");
    print!("{}", entanglement_lines(&rho)?);
    run.output("state.csv", text.as_bytes())?;
    run.histogram.insert(k.path.label().to_string(), 1);
    let mut extra = derived_json(&derived);
    extra["t"] = t.into();
    run.derived = extra;
    run.finish(&cfg)
}

fn cmd_eof(common: Common, input: StateInput) -> Result<(), CliError> {
    let cfg = load_config(&common, vec![("state", &input.state)])?;
    let run = start("eof", &common)?;
    let rho = read_state(&cfg)?.ok_or_else(|| CliError::config("state", "required: path of a state file"))?;
    print!("{}", entanglement_lines(&rho)?);
    run.finish(&cfg)
}

fn write_grid(run: &mut Run, stem: &str, grid: &ScanGrid, format: Format) -> Result<(), CliError> {
    if format != Format::Pgm {
        let mut buf = Vec::new();
        scan::write_csv(grid, &mut buf).expect("writing to memory");
        run.output(&format!("{stem}.csv"), &buf)?;
    }
    if format != Format::Csv {
        let mut buf = Vec::new();
        scan::write_pgm(grid, &mut buf).expect("writing to memory");
        run.output(&format!("{stem}.pgm"), &buf)?;
    }
    for (label, count) in grid.strategy_histogram() {
        run.histogram.insert(label.to_string(), count);
    }
    if !grid.diagnostics.is_empty() {
        run.warnings
            .push(format!("{} cells failed and are stored as NaN", grid.diagnostics.len()));
        for d in &grid.diagnostics {
            run.warnings.push(format!("cell ({}, {}): {}", d.ix, d.iy, d.message));
        }
    }
    eprintln!(
        "{stem}: {}x{} cells, max {}",
        grid.x_axis.n,
        grid.y_axis.n,
        f(grid.max_value())
    );
    Ok(())
}

fn scan_run(name: &str, common: &Common, cfg: &ConfigMap) -> Result<(Run, ScanOptions), CliError> {
    if common.out.is_none() {
        return Err(CliError::config("out", "scans need an output directory"));
    }
    let run = start(name, common)?;
    let opts = ScanOptions {
        threads: common.threads,
        strategy: cfg.strategy()?,
    };
    Ok((run, opts))
}

fn cmd_scan_fig1(common: Common, physics_flags: Physics, grid: Grid) -> Result<(), CliError> {
    let cfg = load_config(&common, [physics_flags.flags(), grid.flags()].concat())?;
    let (params, derived) = physics(&cfg)?;
    let (x, y) = cfg.axes(scan::fig1_axes())?;
    let (mut run, opts) = scan_run("scan-fig1", &common, &cfg)?;
    let result = scan::scan_fig1(&params, x, y, opts)?;
    write_grid(&mut run, "fig1", &result, grid.format)?;
    run.derived = derived_json(&derived);
    run.finish(&cfg)
}

fn cmd_scan_fig2(common: Common, grid: Grid) -> Result<(), CliError> {
    let cfg = load_config(&common, grid.flags())?;
    let (x, y) = cfg.axes(scan::fig2_axes())?;
    let (mut run, opts) = scan_run("scan-fig2", &common, &cfg)?;
    let result = scan::scan_fig2(CONSTANTS.alpha0, x, y, opts)?;
    write_grid(&mut run, "fig2", &result, grid.format)?;
    run.finish(&cfg)
}

fn cmd_scan_fig3(common: Common, physics_flags: Physics, grid: Grid, t0: Option<String>) -> Result<(), CliError> {
    let flags = [physics_flags.flags(), grid.flags(), vec![("fig3_t0_over_tau", &t0)]].concat();
    let cfg = load_config(&common, flags)?;
    let (params, derived) = physics(&cfg)?;
    let t0 = cfg.f64("fig3_t0_over_tau")?.unwrap_or(scan::FIG3_T0_OVER_TAU);
    if !(t0 > 0.0) {
        return Err(CliError::config("fig3_t0_over_tau", "must be positive"));
    }
    let (x, y) = cfg.axes(scan::fig3_axes())?;
    let (mut run, opts) = scan_run("scan-fig3", &common, &cfg)?;
    let result = scan::scan_fig3(&params, t0, x, y, opts)?;
    write_grid(&mut run, "fig3", &result, grid.format)?;
    let mut extra = derived_json(&derived);
    extra["fig3_t0_over_tau"] = t0.into();
    run.derived = extra;
    run.finish(&cfg)
}

fn cmd_predict_t1(common: Common, physics_flags: Physics, t1: Option<String>) -> Result<(), CliError> {
    let flags = [physics_flags.flags(), vec![("t1_seconds", &t1)]].concat();
    let cfg = load_config(&common, flags)?;
    let mut run = start("predict-t1", &common)?;
    let params = cfg.physical_params()?;
    let mut lines = Vec::new();
    match cfg.f64("t1_seconds")? {
        Some(t1) => {
            let r = scan::separation_for_t1(t1, params.dipole)
                .map_err(|_| CliError::config("t1_seconds", "must be positive"))?;
            lines.push(("separation_m", f(r)));
            lines.push(("separation_km", f(r / 1e3)));
        }
        None => {
            let t1 = scan::predict_t1(&params)?;
            lines.push(("t1_seconds", f(t1)));
            if let Some(tau) = params.tau() {
                lines.push(("t1_over_tau", f(t1 / tau)));
            }
        }
    }
    let mut text = String::new();
    for (k, v) in &lines {
        text.push_str(&format!("{k}={v}\n"));
    }
    print!("{text}");
    run.output("t1.txt", text.as_bytes())?;
    run.finish(&cfg)
}

#[allow(clippy::too_many_arguments)]
fn cmd_find_t1(
    common: Common,
    physics_flags: Physics,
    lo: Option<String>,
    hi: Option<String>,
    points: Option<String>,
    threshold: Option<String>,
) -> Result<(), CliError> {
    let flags = [
        physics_flags.flags(),
        vec![
            ("search_log10_t_min", &lo),
            ("search_log10_t_max", &hi),
            ("search_points", &points),
            ("search_threshold", &threshold),
        ],
    ]
    .concat();
    let cfg = load_config(&common, flags)?;
    let mut run = start("find-t1", &common)?;
    let params = cfg.physical_params()?;
    let search = cfg.t1_search()?;
    let result = scan::find_t1_numeric(&params, search)?;
    let predicted = scan::predict_t1(&params)?;
    let text = format!(
        "t1_seconds={}\nt1_over_tau={}\neof={}\ny_max_pinned={}\npredicted_t1_seconds={}\nratio={}\nevaluations={}\n",
        f(result.t_seconds),
        f(result.t_over_tau),
        f(result.eof),
        f(result.y_max),
        f(predicted),
        f(result.t_seconds / predicted),
        result.evaluations
    );
    print!("{text}");
    run.output("t1.txt", text.as_bytes())?;
    run.derived = serde_json::to_value(result).expect("result serializes");
    run.finish(&cfg)
}

fn geometries(name: &str, r: f64) -> Result<Vec<(&'static str, Vec3, Vec3, Vec3)>, CliError> {
    let z = [0.0, 0.0, 1.0];
    let x = [1.0, 0.0, 0.0];
    let oblique = [r / 3.0, 2.0 * r / 3.0, 2.0 * r / 3.0];
    let all = vec![
        ("aligned", [0.0, 0.0, r], z, z),
        ("perpendicular", [0.0, 0.0, r], x, x),
        ("oblique", oblique, x, z),
    ];
    if name == "all" {
        return Ok(all);
    }
    let one: Vec<_> = all.into_iter().filter(|g| g.0 == name).collect();
    if one.is_empty() {
        return Err(CliError::config(
            "effint_geometry",
            format!("`{name}` is not one of aligned, perpendicular, oblique, all"),
        ));
    }
    Ok(one)
}

fn cmd_eff_int(
    common: Common,
    physics_flags: Physics,
    geometry: Option<String>,
    ratios: Option<String>,
) -> Result<(), CliError> {
    let flags = [
        physics_flags.flags(),
        vec![("effint_geometry", &geometry), ("effint_box_ratios", &ratios)],
    ]
    .concat();
    let cfg = load_config(&common, flags)?;
    let mut run = start("eff-int", &common)?;
    let params = cfg.physical_params()?;
    let ratios = cfg
        .get("effint_box_ratios")
        .unwrap_or("10")
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite() && *v > 2.0)
                .ok_or_else(|| CliError::config("effint_box_ratios", format!("`{s}` is not a number above 2")))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let r = params.separation;
    let mut configs = Vec::new();
    for (_, r_vec, u1, u2) in geometries(cfg.get("effint_geometry").unwrap_or("all"), r)? {
        let base = ModeSumConfig::standard(r_vec, u1, u2, params.dipole);
        configs.extend(ratios.iter().map(|k| base.with_box(k * r)));
    }
    let rows = effint::convergence_study(&configs)?;
    let mut buf = Vec::new();
    effint::write_convergence_csv(&rows, &mut buf).expect("writing to memory");
    if run.has_out() {
        run.output("effint.csv", &buf)?;
    } else {
        print!("{}", String::from_utf8_lossy(&buf));
    }
    run.finish(&cfg)
}

fn cmd_keys() {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    for (key, doc) in config::KEYS {
        if writeln!(out, "{key:<20} {doc}").is_err() {
            break;
        }
    }
}

fn main() -> ExitCode {
    let matches = Cli::command()
        .mut_subcommands(|s| s.after_help(AFTER_HELP))
        .get_matches();
    let cli = Cli::from_arg_matches(&matches).unwrap_or_else(|e| e.exit());
    let result = match cli.command {
        Command::Kernels { common, physics, time } => cmd_kernels(common, physics, time),
        Command::Evolve {
            common,
            physics,
            time,
            input,
        } => cmd_evolve(common, physics, time, input),
        Command::Eof { common, input } => cmd_eof(common, input),
        Command::ScanFig1 { common, physics, grid } => cmd_scan_fig1(common, physics, grid),
        Command::ScanFig2 { common, grid } => cmd_scan_fig2(common, grid),
        Command::ScanFig3 {
            common,
            physics,
            grid,
            fig3_t0_over_tau,
        } => cmd_scan_fig3(common, physics, grid, fig3_t0_over_tau),
        Command::PredictT1 {
            common,
            physics,
            t1_seconds,
        } => cmd_predict_t1(common, physics, t1_seconds),
        Command::FindT1 {
            common,
            physics,
            search_log10_t_min,
            search_log10_t_max,
            search_points,
            search_threshold,
        } => cmd_find_t1(
            common,
            physics,
            search_log10_t_min,
            search_log10_t_max,
            search_points,
            search_threshold,
        ),
        Command::EffInt {
            common,
            physics,
            geometry,
            box_ratios,
        } => cmd_eff_int(common, physics, geometry, box_ratios),
        Command::Keys => {
            cmd_keys();
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
