//! Command-line driver: configuration ingestion, subcommand dispatch, and
//! CSV/JSON emission of spectral curves and thermodynamic sweeps.

mod config;
mod output;

use std::cell::Cell;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use casimir_te::curve::{log_grid, Channel};
use casimir_te::eddy::{
    dos_eddy, dos_propagating, mode_boundary, mode_count_cut, mode_count_damping,
    BranchCutDensity,
};
use casimir_te::lifshitz::{dispersion_leading, dos_cl, mode_count_cl_curve};
use casimir_te::material::{Cavity, DrudeMaterial, Freq};
use casimir_te::numerics::{differentiate_richardson, Tol};
use casimir_te::thermo::{
    entropy_from_curve, entropy_matsubara, fit_expansion, free_energy_from_dos,
    free_energy_thermal_matsubara, low_t_expansion, pressure,
};
use casimir_te::units::{radps_to_kelvin, C_SI};
use casimir_te::validation;

use config::{ConfigError, Resolved, RunConfig};
use output::{Emitter, Format, Provenance, Table};

#[derive(Parser)]
#[command(
    name = "casimir-te",
    version,
    about = "TE-channel cavity spectra and thermodynamics for a Drude mirror"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// JSON configuration file; omitted = gold preset defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for emitted files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Table output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Relative tolerance override for quadratures.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads for the sweep subcommand (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Omit the timestamp line so outputs are byte-identical across runs.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Density-of-states curves for all spectral channels.
    Dos,
    /// Thermal free energy, entropy, and pressure along each route.
    FreeEnergy,
    /// Low-temperature expansion coefficients: analytic vs fitted.
    Expand,
    /// Overdamped-mode boundary and branch-cut mode-count profile.
    Modes,
    /// Run the full acceptance suite and report pass/fail per check.
    Validate,
    /// Free energy and entropy over a (temperature, gap, gamma) grid.
    Sweep,
}

enum AppError {
    Config(String),
    Numerical(String),
}

impl From<ConfigError> for AppError {
    fn from(e: ConfigError) -> Self {
        AppError::Config(e.to_string())
    }
}

impl From<casimir_te::CoreError> for AppError {
    fn from(e: casimir_te::CoreError) -> Self {
        AppError::Numerical(format!("numerical failure: {e}"))
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Numerical(format!("i/o failure: {e}"))
    }
}

type AppResult<T> = Result<T, AppError>;

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(()) => 0,
        Err(AppError::Config(msg)) => {
            eprintln!("{msg}");
            2
        }
        Err(AppError::Numerical(msg)) => {
            eprintln!("{msg}");
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> AppResult<()> {
    if let Some(n) = cli.threads {
        // A second pool build in the same process is harmless to ignore.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    // Resolve the configuration fully before touching the filesystem, so a
    // bad config produces exit 2 and no output files.
    let cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    let res = cfg.resolve(cli.tol)?;
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| AppError::Config(format!("cannot create --out {}: {e}", cli.out.display())))?;
    let prov = Provenance::new(&res.cavity, res.preset_gold, res.tol);
    let em = Emitter::new(&cli.out, cli.format, cli.no_timestamp, prov);
    match cli.cmd {
        Cmd::Dos => cmd_dos(&res, &em),
        Cmd::FreeEnergy => cmd_free_energy(&res, &em),
        Cmd::Expand => cmd_expand(&res, &em),
        Cmd::Modes => cmd_modes(&res, &em),
        Cmd::Validate => cmd_validate(&em),
        Cmd::Sweep => cmd_sweep(&res, &em),
    }
}

/// Density from an integrated-count closure via Richardson differentiation
/// (the density is minus the frequency derivative of the count).
fn density_from_count(
    f: impl Fn(f64) -> casimir_te::Result<f64>,
    w: f64,
) -> AppResult<(f64, f64)> {
    let failed: Cell<bool> = Cell::new(false);
    let g = |x: f64| {
        f(x).unwrap_or_else(|_| {
            failed.set(true);
            f64::NAN
        })
    };
    let (d, err) = differentiate_richardson(g, w, 0.05 * w);
    if failed.get() {
        return Err(AppError::Numerical(format!(
            "numerical failure: derivative evaluation at omega = {w:e} rad/s"
        )));
    }
    Ok((-d, err))
}

fn cmd_dos(res: &Resolved, em: &Emitter) -> AppResult<()> {
    let cav = &res.cavity;
    let tol = Tol::rel(res.tol);
    let cut = BranchCutDensity::build(cav, 48, tol)?;
    let channels: Vec<(Channel, Box<dyn Fn(f64) -> AppResult<(f64, f64)>>)> = vec![
        (
            Channel::Cl,
            Box::new(|w| Ok(dos_cl(cav, w, tol).map(|q| (q.value, q.err))?)),
        ),
        (
            Channel::D,
            Box::new(|w| Ok(dos_eddy(&cut, w, tol).map(|q| (q.value, q.err))?)),
        ),
        (
            Channel::Propagating,
            Box::new(|w| Ok(dos_propagating(cav, w, tol).map(|q| (q.value, q.err))?)),
        ),
        (
            Channel::Cl0,
            Box::new(|w| {
                density_from_count(
                    |x| Ok(dispersion_leading(cav, Freq::RealAxis(x), tol)?.value.im),
                    w,
                )
            }),
        ),
        (
            Channel::DGamma,
            Box::new(|w| {
                density_from_count(|x| Ok(mode_count_damping(cav, x, tol)?.value), w)
            }),
        ),
    ];
    for (channel, eval) in channels {
        let mut rows = Vec::with_capacity(res.grid.len());
        for &w in &res.grid {
            let (v, e) = eval(w)?;
            rows.push(vec![Some(w), Some(v), Some(e)]);
        }
        let table = Table {
            quantity: "rho",
            unit: "s rad^-1 m^-2",
            channel: channel.label().to_string(),
            columns: vec!["omega_radps", "value", "err"],
            rows,
        };
        em.write_table(&format!("dos_{}", channel.label()), &table)?;
    }
    Ok(())
}

fn cmd_free_energy(res: &Resolved, em: &Emitter) -> AppResult<()> {
    let cav = &res.cavity;
    let tol = Tol::rel(res.tol);
    let xi_l = cav.thouless();
    let t_max = res.temperatures.iter().cloned().fold(0.0f64, f64::max);

    // Matsubara route: sum over imaginary-axis frequencies; also the only
    // route reporting pressure (gap derivative).
    let mut rows = Vec::new();
    for &t in &res.temperatures {
        let f = free_energy_thermal_matsubara(cav, t, tol)?;
        let (s, s_err) = entropy_matsubara(cav, t, tol)?;
        let (p, p_err) = pressure(cav, t, tol)?;
        rows.push(vec![
            Some(t),
            Some(radps_to_kelvin(t)),
            Some(f.value),
            Some(f.err),
            Some(s),
            Some(s_err),
            Some(p),
            Some(p_err),
        ]);
    }
    let columns =
        vec!["t_radps", "t_kelvin", "f", "f_err", "s", "s_err", "p", "p_err"];
    em.write_table(
        "free_energy_matsubara",
        &Table {
            quantity: "free_energy",
            unit: "rad s^-1 m^-2",
            channel: "total (matsubara route)".to_string(),
            columns: columns.clone(),
            rows,
        },
    )?;

    // Real-frequency route: thermal weighting of the integrated mode count.
    let grid = log_grid(1e-5 * xi_l, (60.0 * t_max).max(85.0 * xi_l), 240)?;
    let curve = mode_count_cl_curve(cav, &grid, tol)?;
    let mut rows = Vec::new();
    for &t in &res.temperatures {
        let f = free_energy_from_dos(&curve, t)?;
        let (s, s_err) = entropy_from_curve(&curve, t)?;
        rows.push(vec![
            Some(t),
            Some(radps_to_kelvin(t)),
            Some(f.value),
            Some(f.err),
            Some(s),
            Some(s_err),
            None,
            None,
        ]);
    }
    em.write_table(
        "free_energy_dos",
        &Table {
            quantity: "free_energy",
            unit: "rad s^-1 m^-2",
            channel: "total (dos route)".to_string(),
            columns: columns.clone(),
            rows,
        },
    )?;

    // Low-temperature expansion route (accurate only well below the
    // Thouless scale; emitted at all requested temperatures for comparison).
    let coeffs = low_t_expansion(cav, Channel::D)?;
    let mut rows = Vec::new();
    for &t in &res.temperatures {
        rows.push(vec![
            Some(t),
            Some(radps_to_kelvin(t)),
            Some(coeffs.free_energy(t)),
            None,
            Some(coeffs.entropy(t)),
            None,
            None,
            None,
        ]);
    }
    em.write_table(
        "free_energy_expansion",
        &Table {
            quantity: "free_energy",
            unit: "rad s^-1 m^-2",
            channel: "total (expansion route)".to_string(),
            columns,
            rows,
        },
    )?;
    Ok(())
}

fn cmd_expand(res: &Resolved, em: &Emitter) -> AppResult<()> {
    let cav = &res.cavity;
    let xi_l = cav.thouless();
    let cl = low_t_expansion(cav, Channel::Cl)?;
    let full = low_t_expansion(cav, Channel::D)?;

    // Fit over a low-temperature window against the real-frequency route.
    let t_top = 5e-4 * xi_l;
    let grid = log_grid(1e-7 * t_top, 100.0 * t_top, 220)?;
    let curve = mode_count_cl_curve(cav, &grid, Tol::rel(res.tol.min(1e-9)))?;
    let mut samples = Vec::new();
    for &x in &[1.0f64, 1.5, 2.2, 3.0, 4.0, 5.0] {
        let t = 1e-4 * xi_l * x;
        samples.push((t, free_energy_from_dos(&curve, t)?.value));
    }
    let fit = fit_expansion(&samples, xi_l)?;

    let coeff_json = |c: &casimir_te::thermo::ExpansionCoefficients| {
        serde_json::json!({
            "channel": c.channel.label(),
            "m1": c.m1,
            "m32": c.m32,
            "f2": c.f2,
            "f52": c.f52,
            "f3": c.f3,
        })
    };
    let body = serde_json::json!({
        "analytic": [coeff_json(&cl), coeff_json(&full)],
        "fit": {
            "window_radps": [1e-4 * xi_l, 5e-4 * xi_l],
            "a2": fit.a2,
            "a52": fit.a52,
            "condition_number": fit.cond,
            "rel_dev_f2": fit.a2 / cl.f2 - 1.0,
            "rel_dev_f52": fit.a52 / cl.f52 - 1.0,
        },
    });
    em.write_report("expand", body)?;
    Ok(())
}

fn cmd_modes(res: &Resolved, em: &Emitter) -> AppResult<()> {
    let cav = &res.cavity;
    let mat = &cav.material;
    let tol = Tol::rel(res.tol);

    // Overdamped-mode boundary xi0(k) up to several inverse plasma
    // wavelengths, where it has saturated toward gamma.
    let k_max = 10.0 / mat.plasma_wavelength();
    let n = 128usize;
    let ks: Vec<f64> = (0..n).map(|i| k_max * i as f64 / (n - 1) as f64).collect();
    let boundary = mode_boundary(mat, &ks)?;
    let root_err = 1e-15 * mat.gamma();
    let rows = boundary
        .k_grid
        .iter()
        .zip(&boundary.xi0)
        .map(|(&k, &x)| vec![Some(k), Some(x), Some(root_err)])
        .collect();
    em.write_table(
        "modes_boundary",
        &Table {
            quantity: "xi0",
            unit: "rad s^-1",
            channel: "D".to_string(),
            columns: vec!["k_radpm", "value", "err"],
            rows,
        },
    )?;

    // Integrated mode count along the overdamped cut, 0 < xi < gamma.
    let m = 96usize;
    let mut rows = Vec::with_capacity(m);
    for j in 1..=m {
        let xi = mat.gamma() * j as f64 / (m + 1) as f64;
        let q = mode_count_cut(cav, xi, tol)?;
        rows.push(vec![Some(xi), Some(q.value), Some(q.err)]);
    }
    em.write_table(
        "modes_cut_profile",
        &Table {
            quantity: "M",
            unit: "m^-2",
            channel: "D".to_string(),
            columns: vec!["xi_radps", "value", "err"],
            rows,
        },
    )?;
    Ok(())
}

fn cmd_validate(em: &Emitter) -> AppResult<()> {
    let results = validation::run_all();
    let mut all_ok = true;
    for r in &results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {} - {}", r.name, r.detail);
        all_ok &= r.passed;
    }
    let body = serde_json::json!({
        "checks": results
            .iter()
            .map(|r| serde_json::json!({
                "name": r.name,
                "passed": r.passed,
                "detail": r.detail,
            }))
            .collect::<Vec<_>>(),
        "all_passed": all_ok,
    });
    em.write_report("validate", body)?;
    if all_ok {
        Ok(())
    } else {
        Err(AppError::Numerical("validation suite reported failures".to_string()))
    }
}

fn cmd_sweep(res: &Resolved, em: &Emitter) -> AppResult<()> {
    let base = &res.cavity;
    let tol = Tol::rel(res.tol);
    let mut points = Vec::new();
    for &g in &res.sweep_gammas {
        for &l in &res.sweep_gaps {
            for &t in &res.sweep_temperatures {
                points.push((g, l, t));
            }
        }
    }
    // Independent points across the worker pool; collect preserves order.
    let computed: Result<Vec<(f64, f64, f64, f64)>, casimir_te::CoreError> = points
        .par_iter()
        .map(|&(g, l, t)| {
            let mat = DrudeMaterial::new(base.material.omega_p(), g, C_SI)?;
            let cav = Cavity::new(mat, l)?;
            let f = free_energy_thermal_matsubara(&cav, t, tol)?;
            let (s, s_err) = entropy_matsubara(&cav, t, tol)?;
            Ok((f.value, f.err, s, s_err))
        })
        .collect();
    let computed = computed?;
    let rows = points
        .iter()
        .zip(&computed)
        .map(|(&(g, l, t), &(f, f_err, s, s_err))| {
            vec![
                Some(g),
                Some(l),
                Some(t),
                Some(radps_to_kelvin(t)),
                Some(f),
                Some(f_err),
                Some(s),
                Some(s_err),
            ]
        })
        .collect();
    em.write_table(
        "sweep",
        &Table {
            quantity: "free_energy",
            unit: "rad s^-1 m^-2",
            channel: "total (matsubara route)".to_string(),
            columns: vec![
                "gamma_radps",
                "gap_m",
                "t_radps",
                "t_kelvin",
                "f",
                "f_err",
                "s",
                "s_err",
            ],
            rows,
        },
    )?;
    Ok(())
}
