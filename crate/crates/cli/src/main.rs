//! `ruelle` — command-line front end for the invariant computations.
//!
//! Exit codes: 0 success, 2 input/validation error, 3 mathematical
//! precondition violated, 4 internal tolerance failure.  All numeric
//! output uses fixed 12-significant-digit scientific notation so that
//! identical inputs produce byte-identical text.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use ruelle_core::alexander::{self, AlexanderError, ValueAtOne};
use ruelle_core::epstein;
use ruelle_core::foxcalc::{FoxError, TwistData};
use ruelle_core::laurent::LaurentPoly;
use ruelle_core::presentations::Presentation;
use ruelle_core::ruelle::{self, EvalPath, LengthSpectrum};
use ruelle_core::torsion::{self, ChainComplex, TorsionError};
use ruelle_core::traceformula;
use ruelle_core::volume;

const DEFAULT_CROSSCHECK_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "ruelle", version, about = "Ruelle L-function invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Twisted Alexander data of a Wirtinger presentation.
    Alexander {
        /// Presentation file.
        presentation: PathBuf,
        #[command(flatten)]
        twist: TwistArgs,
    },
    /// Cross-check R(0,ρ): Alexander route vs torsion route.
    Crosscheck {
        presentation: PathBuf,
        #[command(flatten)]
        twist: TwistArgs,
    },
    /// Combinatorial torsion of a chain complex (file or presentation).
    Torsion {
        /// Presentation file (needs a twist flag) …
        presentation: Option<PathBuf>,
        /// … or an explicit chain-complex file.
        #[arg(long, conflicts_with = "presentation")]
        complex: Option<PathBuf>,
        #[command(flatten)]
        twist: TwistArgs,
    },
    /// Functional-equation polynomial, exact coefficients and c₁.
    Funceq {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        vol: f64,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
    },
    /// Epstein L-values, cusp constants τ_ν and δ(X,ρ).
    Epstein {
        /// Cusp/lattice file.
        #[arg(long)]
        lattice: PathBuf,
        /// Also evaluate every character lattice at this point.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Option<Complex64>,
    },
    /// Truncated log R_X(z,ρ) from a length-spectrum file.
    RuelleEval {
        #[arg(long)]
        spectrum: PathBuf,
        /// Evaluation point "re,im".
        #[arg(long, value_parser = parse_complex, required_unless_present = "z_grid", allow_hyphen_values = true)]
        z: Option<Complex64>,
        /// Real grid "start,stop,count" (csv output).
        #[arg(long)]
        z_grid: Option<String>,
        #[arg(long, default_value = "factor")]
        path: String,
        /// "text" or "csv".
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Ideal-tetrahedron volumes from shape parameters.
    Volume {
        /// Shapes "re,im;re,im;…".
        #[arg(long)]
        shapes: String,
    },
    /// L²-torsion constant log τ⁽²⁾ = r·vol/(6π).
    L2torsion {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        vol: f64,
    },
}

#[derive(Args)]
struct TwistArgs {
    /// Twist file ("rank:" header).
    #[arg(long, conflicts_with = "xi")]
    twist: Option<PathBuf>,
    /// Rank-1 character "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    xi: Option<Complex64>,
}

fn parse_complex(text: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [re] => Ok(Complex64::new(re.parse().map_err(|e| format!("{e}"))?, 0.0)),
        [re, im] => Ok(Complex64::new(
            re.parse().map_err(|e| format!("{e}"))?,
            im.parse().map_err(|e| format!("{e}"))?,
        )),
        _ => Err(format!("expected 're' or 're,im', got '{text}'")),
    }
}

enum CliError {
    Validation(String),
    MathDomain(String),
    Tolerance(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Validation(_) => 2,
            Self::MathDomain(_) => 3,
            Self::Tolerance(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Validation(m) | Self::MathDomain(m) | Self::Tolerance(m) => m,
        }
    }
}

fn validation<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Validation(e.to_string())
}

fn alexander_error(e: AlexanderError) -> CliError {
    match e {
        AlexanderError::Fox(FoxError::Parse(m)) => CliError::Validation(m),
        AlexanderError::Fox(f) => CliError::Validation(f.to_string()),
        other => CliError::MathDomain(other.to_string()),
    }
}

fn torsion_error(e: TorsionError) -> CliError {
    match e {
        TorsionError::Parse(m) => CliError::Validation(m),
        TorsionError::Fox(f) => CliError::Validation(f.to_string()),
        TorsionError::IllConditioned(v) => {
            CliError::Tolerance(format!("kernel guard band hit at eigenvalue {v:.3e}"))
        }
        other => CliError::MathDomain(other.to_string()),
    }
}

/// 12 significant digits, deterministic.
fn sig(x: f64) -> String {
    format!("{x:.11e}")
}

fn sig_complex(z: Complex64) -> String {
    format!("{},{}", sig(z.re), sig(z.im))
}

fn poly_string(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".to_owned();
    }
    let mut out = String::new();
    for (e, c) in p.iter() {
        if !out.is_empty() {
            out.push_str(" + ");
        }
        let _ = write!(out, "({})*t^{}", sig_complex(c), e);
    }
    out
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn load_presentation(path: &PathBuf) -> Result<Presentation, CliError> {
    Presentation::parse(&read_file(path)?).map_err(validation)
}

fn load_twist(args: &TwistArgs, p: &Presentation) -> Result<TwistData, CliError> {
    match (&args.twist, &args.xi) {
        (Some(path), None) => {
            TwistData::parse(&read_file(path)?, p.num_generators()).map_err(validation)
        }
        (None, Some(xi)) => TwistData::character(*xi).map_err(|e| match e {
            FoxError::NotUnitCharacter(_) => validation(e),
            other => CliError::MathDomain(other.to_string()),
        }),
        (None, None) => Err(CliError::Validation(
            "need --twist FILE or --xi RE,IM".to_owned(),
        )),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    }
}

fn crosscheck_tolerance() -> Result<f64, CliError> {
    match std::env::var("RUELLE_TOL") {
        Ok(v) => v
            .parse::<f64>()
            .map_err(|e| CliError::Validation(format!("RUELLE_TOL: {e}"))),
        Err(_) => Ok(DEFAULT_CROSSCHECK_TOL),
    }
}

fn cmd_alexander(presentation: &PathBuf, twist: &TwistArgs) -> Result<(), CliError> {
    let p = load_presentation(presentation)?;
    let twist = load_twist(twist, &p)?;
    let report = alexander::alexander(&p, &twist).map_err(alexander_error)?;
    println!("delta0={}", poly_string(&report.delta0));
    println!("delta1={}", poly_string(&report.delta1));
    println!("chosen_column={}", report.chosen_column);
    match report.value_at_1 {
        ValueAtOne::Finite(v) => println!("value_at_1={}", sig_complex(v)),
        ValueAtOne::Pole => println!("value_at_1=pole"),
    }
    match report.special_value {
        Some(v) => println!("R0={}", sig(v)),
        None => println!("R0=undefined"),
    }
    Ok(())
}

fn cmd_crosscheck(presentation: &PathBuf, twist: &TwistArgs) -> Result<(), CliError> {
    let p = load_presentation(presentation)?;
    let twist = load_twist(twist, &p)?;
    twist.require_cuspidal().map_err(|e| CliError::MathDomain(e.to_string()))?;
    let report = alexander::alexander(&p, &twist).map_err(alexander_error)?;
    if !alexander::acyclicity_check(&report) {
        return Err(CliError::MathDomain(
            "twist is not acyclic: Δ(1) = 0 or a pole".to_owned(),
        ));
    }
    let alexander_route = report
        .special_value
        .ok_or_else(|| CliError::MathDomain("special value undefined".to_owned()))?;
    let cc = torsion::complex_from_presentation(&p, &twist).map_err(torsion_error)?;
    let torsion_report = torsion::torsion_star(&cc).map_err(torsion_error)?;
    if !torsion_report.is_acyclic() {
        return Err(CliError::MathDomain(format!(
            "torsion complex not acyclic (betti {:?})",
            torsion_report.betti
        )));
    }
    let torsion_route = torsion_report.tau_star().powi(2);
    let tol = crosscheck_tolerance()?;
    let rel = (alexander_route - torsion_route).abs() / alexander_route.abs().max(f64::MIN_POSITIVE);
    println!("alexander_route={}", sig(alexander_route));
    println!("torsion_route={}", sig(torsion_route));
    println!("relative_difference={}", sig(rel));
    println!("tolerance={}", sig(tol));
    if rel < tol {
        println!("crosscheck=PASS");
        Ok(())
    } else {
        println!("crosscheck=FAIL");
        Err(CliError::Tolerance(format!(
            "routes differ by {rel:.3e} (tolerance {tol:.3e})"
        )))
    }
}

fn cmd_torsion(
    presentation: &Option<PathBuf>,
    complex: &Option<PathBuf>,
    twist: &TwistArgs,
) -> Result<(), CliError> {
    let cc = match (presentation, complex) {
        (Some(pres), None) => {
            let p = load_presentation(pres)?;
            let twist = load_twist(twist, &p)?;
            torsion::complex_from_presentation(&p, &twist).map_err(torsion_error)?
        }
        (None, Some(path)) => ChainComplex::parse(&read_file(path)?).map_err(torsion_error)?,
        _ => {
            return Err(CliError::Validation(
                "need a presentation file or --complex FILE".to_owned(),
            ))
        }
    };
    let report = torsion::torsion_star(&cc).map_err(torsion_error)?;
    println!(
        "dims={}",
        cc.dims()
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    println!(
        "betti={}",
        report
            .betti
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    for (p, v) in report.per_degree_logdet.iter().enumerate() {
        println!("logdet_{p}={}", sig(*v));
    }
    println!("log_tau_star={}", sig(report.log_tau_star));
    println!("tau_star={}", sig(report.tau_star()));
    Ok(())
}

fn cmd_funceq(n: usize, r: u32, vol: f64, delta: f64) -> Result<(), CliError> {
    let report = traceformula::funceq_report_checked(n, r, vol, delta)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    println!("n={n}");
    println!("r={r}");
    println!("vol={}", sig(vol));
    println!("delta={}", sig(delta));
    println!("prefactor={} * vol/pi", report.prefactor);
    println!("chi={}", report.chi);
    println!("X={}", report.x_poly);
    println!("c1_exact={} * vol/pi + {} * delta", report.c1_vol_coeff, report.c1_delta_coeff);
    println!("c1={}", sig(report.c1));
    Ok(())
}

fn cmd_epstein(lattice: &PathBuf, s: Option<Complex64>) -> Result<(), CliError> {
    let cusps = epstein::parse_cusps(&read_file(lattice)?).map_err(validation)?;
    if cusps.is_empty() {
        return Err(CliError::Validation("no cusps in file".to_owned()));
    }
    let map_eps = |e: epstein::EpsteinError| match e {
        epstein::EpsteinError::NonconvergentTheta { .. } => CliError::Tolerance(e.to_string()),
        other => CliError::MathDomain(other.to_string()),
    };
    for (i, cusp) in cusps.iter().enumerate() {
        println!("cusp={i}");
        println!("covolume={}", sig(cusp.covolume));
        if let Some(s) = s {
            for (j, l) in cusp.lattices.iter().enumerate() {
                let v = epstein::epstein_value(l, s).map_err(map_eps)?;
                println!("zeta_{i}_{j}({})={}", sig_complex(s), sig_complex(v));
            }
        }
        let tau = epstein::tau_nu(cusp).map_err(map_eps)?;
        println!("tau_{i}={}", sig_complex(tau));
    }
    let delta = epstein::delta_constant(&cusps).map_err(map_eps)?;
    println!("delta={}", sig_complex(delta));
    Ok(())
}

fn parse_path(path: &str) -> Result<EvalPath, CliError> {
    match path {
        "factor" => Ok(EvalPath::Factorization),
        "direct" => Ok(EvalPath::Direct),
        other => Err(CliError::Validation(format!(
            "--path must be 'factor' or 'direct', got '{other}'"
        ))),
    }
}

fn cmd_ruelle_eval(
    spectrum: &PathBuf,
    z: Option<Complex64>,
    z_grid: &Option<String>,
    path: &str,
    format: &str,
) -> Result<(), CliError> {
    let spec = LengthSpectrum::parse_csv(&read_file(spectrum)?).map_err(validation)?;
    let path = parse_path(path)?;
    match (z, z_grid) {
        (Some(z), None) => {
            let log_r = ruelle::ruelle_log(&spec, z, path)
                .map_err(|e| CliError::MathDomain(e.to_string()))?;
            if format == "csv" {
                println!("z,re_logR,im_logR");
                println!("{},{},{}", sig(z.re), sig(log_r.re), sig(log_r.im));
            } else {
                println!("logR={}", sig_complex(log_r));
                println!("R={}", sig_complex(log_r.exp()));
            }
            Ok(())
        }
        (None, Some(grid)) => {
            let parts: Vec<&str> = grid.split(',').collect();
            if parts.len() != 3 {
                return Err(CliError::Validation(
                    "--z-grid wants 'start,stop,count'".to_owned(),
                ));
            }
            let start: f64 = parts[0].trim().parse().map_err(validation)?;
            let stop: f64 = parts[1].trim().parse().map_err(validation)?;
            let count: usize = parts[2].trim().parse().map_err(validation)?;
            if count < 2 {
                return Err(CliError::Validation("count must be ≥ 2".to_owned()));
            }
            println!("z,re_logR,im_logR");
            for i in 0..count {
                let z = start + (stop - start) * i as f64 / (count - 1) as f64;
                let log_r = ruelle::ruelle_log(&spec, Complex64::new(z, 0.0), path)
                    .map_err(|e| CliError::MathDomain(e.to_string()))?;
                println!("{},{},{}", sig(z), sig(log_r.re), sig(log_r.im));
            }
            Ok(())
        }
        _ => Err(CliError::Validation(
            "need exactly one of --z or --z-grid".to_owned(),
        )),
    }
}

fn cmd_volume(shapes: &str) -> Result<(), CliError> {
    let list = volume::ShapeList::parse(shapes).map_err(|e| match e {
        volume::VolumeError::NonPositiveImaginary { .. } => CliError::MathDomain(e.to_string()),
        other => CliError::Validation(other.to_string()),
    })?;
    let mut total = 0.0;
    for (i, &z) in list.shapes().iter().enumerate() {
        let v = volume::tetra_volume(z);
        total += v;
        println!("tetra_{i}={}", sig(v));
    }
    println!("volume={}", sig(total));
    Ok(())
}

fn cmd_l2torsion(r: u32, vol: f64) -> Result<(), CliError> {
    if vol < 0.0 {
        return Err(CliError::Validation("vol must be nonnegative".to_owned()));
    }
    let log_tau2 = volume::l2_torsion_log(r, vol);
    println!("log_tau2={}", sig(log_tau2));
    println!("minus18_log_tau2={}", sig(-18.0 * log_tau2));
    let c1 = traceformula::c1(1, r, vol, 0.0).map_err(|e| CliError::Validation(e.to_string()))?;
    println!("c1_n1={}", sig(c1));
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Alexander {
            presentation,
            twist,
        } => cmd_alexander(presentation, twist),
        Command::Crosscheck {
            presentation,
            twist,
        } => cmd_crosscheck(presentation, twist),
        Command::Torsion {
            presentation,
            complex,
            twist,
        } => cmd_torsion(presentation, complex, twist),
        Command::Funceq { n, r, vol, delta } => cmd_funceq(*n, *r, *vol, *delta),
        Command::Epstein { lattice, s } => cmd_epstein(lattice, *s),
        Command::RuelleEval {
            spectrum,
            z,
            z_grid,
            path,
            format,
        } => cmd_ruelle_eval(spectrum, *z, z_grid, path, format),
        Command::Volume { shapes } => cmd_volume(shapes),
        Command::L2torsion { r, vol } => cmd_l2torsion(*r, *vol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
