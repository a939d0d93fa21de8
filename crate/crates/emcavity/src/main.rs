use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use emcavity_core::cavity::{
    balmer_differences, energy_spectrum, gram_matrix, w_coefficients, BetaReading, CavityConfig, WCoefficients,
};
use emcavity_core::fields::{continuity_residual, maxwell_residual};
use emcavity_core::jefimenko::{GaussianCharge, HistoryTolerances, OscillatingDipole, SourceHistory, SourceModel};
use emcavity_core::nonradiating::{boost_fields, boost_source, boosted_curl_identity, BoostParams};
use emcavity_core::specfun::{bessel_zeros, norm_constant, SphereRule};
use emcavity_core::{ScalarField, VectorField3};
use serde_json::json;

use emcavity::config::{pick, ConfigError, RunConfig, SourceSpec, Units};
use emcavity::format::{read_field_file, write_field_file, Field, GridSpec};
use emcavity::parallel::par_jefimenko_fields;
use emcavity::{error_kind, exit_code, selftest};

#[derive(Parser)]
#[command(name = "emcavity", version, about = "Cavity eigenmodes, retarded fields and energy spectra")]
struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true, env = "EMCAVITY_CONFIG")]
    config: Option<PathBuf>,
    /// Worker threads for parallel field evaluation.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Unit system (default natural: ε₀ = μ₀ = c = 1).
    #[arg(long, global = true, value_enum)]
    units: Option<Units>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Zeros of j_l scaled to the cavity: CSV `l,n,k`.
    Zeros {
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        r0: Option<f64>,
    },
    /// Cavity modes (l, m, k): CSV, or the Gram check / computed β table.
    Modes(ModesArgs),
    /// Mean energies of fundamental fields and their differences.
    Spectrum(SpectrumArgs),
    /// Retarded E and B of the configured source on the configured grid.
    Jefimenko {
        /// Directory for E.field and B.field.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maxwell and continuity residuals of field files.
    Verify {
        #[arg(long)]
        e: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        rho: Option<PathBuf>,
        #[arg(long)]
        j: Option<PathBuf>,
    },
    /// Boost a source (and optionally fields) and check the boosted-curl identity.
    Boost {
        #[arg(long)]
        rho: PathBuf,
        #[arg(long)]
        j: PathBuf,
        /// Velocity over c, as `x,y,z`.
        #[arg(long, value_delimiter = ',')]
        beta: Option<Vec<f64>>,
        #[arg(long, requires = "b")]
        e: Option<PathBuf>,
        #[arg(long, requires = "e")]
        b: Option<PathBuf>,
        /// Directory for the boosted files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance criteria.
    Selftest {
        /// Comma-separated criterion numbers.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Args)]
struct ModesArgs {
    #[arg(long)]
    l_max: Option<usize>,
    #[arg(long = "zeros")]
    zeros_per_l: Option<usize>,
    #[arg(long)]
    r0: Option<f64>,
    /// Print max |G − I| of the mode Gram matrix as JSON instead.
    #[arg(long, conflicts_with = "beta")]
    gram: bool,
    /// Print the computed β_l table as CSV `l,beta` instead.
    #[arg(long)]
    beta: bool,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Conserved charge.
    #[arg(long = "Q", alias = "q")]
    q: Option<f64>,
    /// Angular orders, comma-separated.
    #[arg(long, value_delimiter = ',')]
    l0: Vec<usize>,
    #[arg(long)]
    r0: Option<f64>,
    /// Zero indices `a..b` (inclusive, from 1).
    #[arg(long, value_parser = parse_range)]
    n: Option<(usize, usize)>,
    /// `computed` or a number; default 4π.
    #[arg(long)]
    beta: Option<String>,
    /// Whitespace columns `n m k0 mean_energy`, one block per l0.
    #[arg(long)]
    plot_data: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a = a.parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b = b.parse().map_err(|e| format!("{b:?}: {e}"))?;
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            let code = exit_code(&err);
            let report = json!({
                "error": error_kind(&err),
                "exit_code": code,
                "message": format!("{err:#}"),
            });
            eprintln!("{report}");
            ExitCode::from(code as u8)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let threads = cli.threads.or(cfg.threads);
    if let Some(n) = threads {
        if n == 0 {
            return Err(ConfigError::Invalid("--threads must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let units = cli.units.or(cfg.units).unwrap_or_default();
    let consts = units.constants();

    match cli.command {
        Command::Zeros { l, count, r0 } => {
            let sec = cfg.zeros.clone().unwrap_or_default();
            let l = pick(l, sec.l, "l")?;
            let count = pick(count, sec.count, "count")?;
            let r0 = pick(r0, sec.r0, "r0")?;
            let table = bessel_zeros(l, r0, count)?;
            let mut s = String::from("l,n,k\n");
            for (i, k) in table.zeros().iter().enumerate() {
                s += &format!("{l},{},{k:?}\n", i + 1);
            }
            emit(None, &s)?;
        }
        Command::Modes(a) => modes(a, &cfg, consts)?,
        Command::Spectrum(a) => spectrum(a, &cfg, consts)?,
        Command::Jefimenko { out } => jefimenko(out.as_deref(), &cfg, consts)?,
        Command::Verify { e, b, rho, j } => {
            let e = read_field_file(&e).with_context(|| format!("reading {}", e.display()))?.1.into_vector()?;
            let b = read_field_file(&b).with_context(|| format!("reading {}", b.display()))?.1.into_vector()?;
            let grid = *e.grid();
            let rho = match rho {
                Some(p) => read_field_file(&p)?.1.into_scalar()?,
                None => ScalarField::zeros(grid),
            };
            let j = match j {
                Some(p) => read_field_file(&p)?.1.into_vector()?,
                None => VectorField3::zeros(grid),
            };
            let r = maxwell_residual(&e, &b, &rho, &j, &consts)?;
            let cont = if grid.nt() >= 3 { Some(continuity_residual(&rho, &j)?) } else { None };
            let report = json!({
                "grid": GridSpec::from(&grid),
                "gauss_E": r.gauss_e,
                "gauss_B": r.gauss_b,
                "faraday": r.faraday,
                "ampere": r.ampere,
                "continuity": cont,
            });
            emit(None, &format!("{report:#}\n"))?;
        }
        Command::Boost { rho, j, beta, e, b, out } => {
            let beta = match beta {
                Some(v) => <[f64; 3]>::try_from(v.as_slice())
                    .map_err(|_| ConfigError::Invalid(format!("--beta needs three components, got {}", v.len())))?,
                None => pick(None, cfg.boost.as_ref().and_then(|s| s.beta), "beta")?,
            };
            let boost = BoostParams::from_beta(beta, &consts)?;
            let rho = read_field_file(&rho)?.1.into_scalar()?;
            let j = read_field_file(&j)?.1.into_vector()?;
            let id = boosted_curl_identity(&rho, &j, &boost, &consts)?;
            let (rho2, j2) = boost_source(&rho, &j, &boost, &consts)?;
            let mut written = vec![];
            if let Some(dir) = &out {
                std::fs::create_dir_all(dir)?;
                write_field_file(&dir.join("rho.field"), &Field::Scalar(rho2), Some("rho'"))?;
                write_field_file(&dir.join("J.field"), &Field::Vector(j2), Some("J'"))?;
                written.extend(["rho.field", "J.field"]);
            }
            if let (Some(e), Some(b)) = (e, b) {
                let e = read_field_file(&e)?.1.into_vector()?;
                let b = read_field_file(&b)?.1.into_vector()?;
                let (e2, b2) = boost_fields(&e, &b, &boost, &consts)?;
                if let Some(dir) = &out {
                    write_field_file(&dir.join("E.field"), &Field::Vector(e2), Some("E'"))?;
                    write_field_file(&dir.join("B.field"), &Field::Vector(b2), Some("B'"))?;
                    written.extend(["E.field", "B.field"]);
                }
            }
            let report = json!({
                "beta": beta,
                "gamma": boost.gamma(),
                "curl_j_boosted": id.lhs,
                "predicted": id.rhs,
                "residual": id.residual,
                "written": written,
            });
            emit(None, &format!("{report:#}\n"))?;
        }
        Command::Selftest { only } => {
            let mut stdout = std::io::stdout().lock();
            let reports = selftest::run_all(&only, |r| {
                let _ = writeln!(stdout, "{r}");
                let _ = stdout.flush();
            });
            if reports.is_empty() {
                bail!(ConfigError::Invalid(format!("no criteria match {only:?}")));
            }
            let passed = reports.iter().filter(|r| r.passed).count();
            writeln!(stdout, "{passed}/{} criteria passed", reports.len())?;
            if passed != reports.len() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Numbers are written with `{:?}`: the shortest string that parses back to
/// the same `f64`, switching to exponent form outside [1e-5, 1e16).
fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn quadrature(cfg: &RunConfig) -> emcavity::config::Quadrature {
    cfg.quadrature.unwrap_or_default()
}

fn modes(a: ModesArgs, cfg: &RunConfig, consts: emcavity_core::PhysicalConstants) -> Result<()> {
    let sec = cfg.modes.clone().unwrap_or_default();
    let l_max = pick(a.l_max, sec.l_max, "l_max")?;
    let q = quadrature(cfg);
    if a.beta {
        let w = w_coefficients(l_max, &SphereRule::new(q.n_theta, q.n_phi)?)?;
        let mut s = String::from("l,beta\n");
        for (l, b) in w.betas().iter().enumerate() {
            s += &format!("{l},{b:?}\n");
        }
        s += &format!("total,{:?}\n", w.total());
        return emit(a.out.as_deref(), &s);
    }
    let zeros = pick(a.zeros_per_l, sec.zeros_per_l, "zeros")?;
    let r0 = pick(a.r0, sec.r0, "r0")?;
    let cav = CavityConfig::new(r0, consts, l_max, zeros)?;
    let modes = cav.modes();
    if a.gram {
        let g = gram_matrix(&modes, &q.ball(r0)?)?;
        let n = modes.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[i * n + j] - want).norm());
            }
        }
        let report = json!({ "modes": n, "max_deviation_from_identity": worst });
        return emit(a.out.as_deref(), &format!("{report:#}\n"));
    }
    let mut s = String::from("l,m,n,k,norm_constant\n");
    for l in 0..=l_max {
        let ks = cav.wavenumbers(l).unwrap_or(&[]);
        for m in -(l as i64)..=(l as i64) {
            for (i, &k) in ks.iter().enumerate() {
                s += &format!("{l},{m},{},{k:?},{:?}\n", i + 1, norm_constant(l, k, r0)?);
            }
        }
    }
    emit(a.out.as_deref(), &s)
}

fn spectrum(a: SpectrumArgs, cfg: &RunConfig, consts: emcavity_core::PhysicalConstants) -> Result<()> {
    let sec = cfg.spectrum.clone().unwrap_or_default();
    let q = pick(a.q, sec.q, "Q")?;
    let l0s = pick((!a.l0.is_empty()).then_some(a.l0), sec.l0, "l0")?;
    let r0 = pick(a.r0, sec.r0, "r0")?;
    let (lo, hi) = match (a.n, sec.n_min, sec.n_max) {
        (Some(r), _, _) => r,
        (None, Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(ConfigError::Invalid("missing n range (give --n a..b or n_min/n_max)".into()).into()),
    };
    let l_top = l0s.iter().copied().max().unwrap_or(0);
    let w = match a.beta.as_deref() {
        Some("computed") => {
            let quad = quadrature(cfg);
            w_coefficients(l_top.max(1), &SphereRule::new(quad.n_theta, quad.n_phi)?)?
        }
        Some(v) => {
            let b: f64 = v.parse().map_err(|_| ConfigError::Invalid(format!("--beta {v:?} is neither `computed` nor a number")))?;
            WCoefficients::parametric(l_top, b)?
        }
        None => WCoefficients::parametric(l_top, sec.beta.unwrap_or(4.0 * PI))?,
    };
    let reading = match w.reading() {
        BetaReading::Computed => "computed".to_string(),
        BetaReading::Parametric(b) => format!("parametric({b:?})"),
    };
    let spec = energy_spectrum(q, &l0s, lo..=hi, r0, &consts, &w)?;

    let mut s = String::new();
    if a.plot_data {
        for &l0 in &l0s {
            s += &format!("# l0 = {l0}, beta reading {reading}\n# n m k0 mean_energy\n");
            for r in spec.rows.iter().filter(|r| r.l0 == l0) {
                s += &format!("{} {} {:?} {:?}\n", r.n, r.m, r.k0, r.mean_energy);
            }
            s += "\n\n";
        }
        return emit(a.out.as_deref(), &s);
    }
    s += "reading,l0,n,m,k0,omega,mean_energy\n";
    for r in &spec.rows {
        s += &format!("{reading},{},{},{},{:?},{:?},{:?}\n", r.l0, r.n, r.m, r.k0, r.omega, r.mean_energy);
    }
    if hi > lo {
        let idx: Vec<usize> = (lo..=hi).collect();
        s += "\nreading,l0,n0,n1,m0,m1,difference,model,balmer_form,observed_ratio,model_ratio,relative_deviation\n";
        for &l0 in &l0s {
            for r in balmer_differences(q, l0, r0, &consts, &w, &idx)? {
                s += &format!(
                    "{reading},{l0},{},{},{},{},{:?},{:?},{:?},{:?},{:?},{:?}\n",
                    r.n0, r.n1, r.m0, r.m1, r.difference, r.model, r.balmer_form, r.observed_ratio, r.model_ratio,
                    r.relative_deviation
                );
            }
        }
    }
    emit(a.out.as_deref(), &s)
}

fn jefimenko(out: Option<&Path>, cfg: &RunConfig, consts: emcavity_core::PhysicalConstants) -> Result<()> {
    let sec = cfg
        .jefimenko
        .as_ref()
        .ok_or_else(|| ConfigError::Invalid("the jefimenko subcommand needs a `jefimenko` config section".into()))?;
    let grid = sec.eval.to_grid()?;
    let src: Box<dyn SourceModel + Sync> = match &sec.source {
        SourceSpec::Gaussian { q, sigma, center, lattice } => {
            Box::new(GaussianCharge::new(*q, *sigma, *center, &lattice.to_grid()?)?)
        }
        SourceSpec::Dipole { p0, omega, sigma, center, lattice } => {
            Box::new(OscillatingDipole::new(*p0, *omega, *sigma, *center, &lattice.to_grid()?)?)
        }
        SourceSpec::History { rho, j, support_radius } => {
            let rho = read_field_file(rho)?.1.into_scalar()?;
            let j = read_field_file(j)?.1.into_vector()?;
            let tol = match cfg.tolerances {
                Some(t) => HistoryTolerances { continuity: t.continuity, decay: t.decay },
                None => HistoryTolerances::default(),
            };
            Box::new(SourceHistory::new(rho, j, *support_radius, &tol)?)
        }
    };
    let (e, b) = par_jefimenko_fields(src.as_ref(), &grid, &consts)?;
    let mut written = vec![];
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        write_field_file(&dir.join("E.field"), &Field::Vector(e.clone()), Some("E"))?;
        write_field_file(&dir.join("B.field"), &Field::Vector(b.clone()), Some("B"))?;
        written.extend(["E.field", "B.field"]);
    }
    let report = json!({
        "grid": GridSpec::from(&grid),
        "cells": src.cells().len(),
        "max_E": e.max_norm(),
        "max_B": b.max_norm(),
        "written": written,
    });
    emit(None, &format!("{report:#}\n"))
}
