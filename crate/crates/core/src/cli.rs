//! Command-line front end: `gen`, `spectrum`, `momenta` and `mathieu-table`.
//!
//! Exit codes: 0 success, 1 usage, 2 numeric failure, 3 I/O or file format.

use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{HwmError, Result};
use crate::fieldio;
use crate::momenta::{self, Method, ReportOptions, IMAGINARY_RESIDUE_TOLERANCE};
use crate::specfun::{mathieu_eigen, Parity};
use crate::spectral::{self, Window, DEFAULT_RING_SAMPLES};
use crate::waves::{
    sample_grid, FieldGrid, FieldMeta, GridSpec, LabelSetBessel, LabelSetMathieu, LabelSetPlane,
    Wave,
};

#[derive(Debug, Parser)]
#[command(name = "hwm", version, about = "Momenta of separable Helmholtz waves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Plane,
    Bessel,
    MathieuEven,
    MathieuOdd,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a wave on a transverse grid and write an HWMF1 field file.
    Gen(GenArgs),
    /// Ring spectrum and charge decomposition of a field.
    Spectrum(SpectrumArgs),
    /// Mean momenta of a field by one or more methods.
    Momenta(MomentaArgs),
    /// Mathieu characteristic values and Fourier coefficients as CSV.
    MathieuTable(TableArgs),
}

#[derive(Debug, clap::Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Wavenumber.
    #[arg(long, allow_negative_numbers = true)]
    pub k: f64,
    /// Cone angle (radians unless --degrees).
    #[arg(long, allow_negative_numbers = true)]
    pub theta: f64,
    /// Plane-wave azimuth (radians unless --degrees).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
    /// Order (topological charge for Bessel waves).
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub n: i64,
    /// Semi-focal distance of Mathieu waves.
    #[arg(long, allow_negative_numbers = true)]
    pub f: Option<f64>,
    /// Grid size `NX,NY`.
    #[arg(long, value_parser = parse_usize_pair)]
    pub grid: (usize, usize),
    #[arg(long, allow_negative_numbers = true)]
    pub dx: f64,
    /// Defaults to --dx.
    #[arg(long, allow_negative_numbers = true)]
    pub dy: Option<f64>,
    /// Coordinates `X0,Y0` of the first node; the grid is centered on the axis by default.
    #[arg(long, value_parser = parse_f64_pair, allow_hyphen_values = true)]
    pub origin: Option<(f64, f64)>,
    /// Transverse plane position.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub z: f64,
    #[arg(long)]
    pub out: PathBuf,
    /// Read --theta and --phi in degrees.
    #[arg(long)]
    pub degrees: bool,
}

/// Field input shared by `spectrum` and `momenta`.
#[derive(Debug, clap::Args)]
pub struct InputArgs {
    /// HWMF1 file, or CSV `x,y,re,im` when the name ends in `.csv`.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Wavenumber for CSV input.
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// Cone angle for CSV input (radians unless --degrees).
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Plane position for CSV input.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub z: f64,
    /// Read --theta in degrees.
    #[arg(long)]
    pub degrees: bool,
}

#[derive(Debug, clap::Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Ring samples M (power of two, at least 256).
    #[arg(long, default_value_t = DEFAULT_RING_SAMPLES)]
    pub ring_samples: usize,
    /// Charge range `NMIN,NMAX`.
    #[arg(long, value_parser = parse_i32_pair, allow_hyphen_values = true, default_value = "-40,40")]
    pub n_range: (i32, i32),
    #[arg(long, default_value = "none", value_parser = parse_window)]
    pub window: Window,
    /// Ring spectrum CSV `phi,re,im`.
    #[arg(long)]
    pub out_ring: Option<PathBuf>,
    /// Charge spectrum CSV `n,re,im,abs2`.
    #[arg(long)]
    pub out_oam: Option<PathBuf>,
    /// JSON summary; printed to stdout when omitted.
    #[arg(long)]
    pub out_json: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct MomentaArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Comma-separated subset of spectral, grid, paper.
    #[arg(long, default_value = "spectral,grid,paper", value_delimiter = ',', value_parser = parse_method)]
    pub methods: Vec<Method>,
    /// Semi-focal distance for the elliptic invariant; taken from a Mathieu label when omitted.
    #[arg(long, allow_negative_numbers = true)]
    pub f: Option<f64>,
    #[arg(long, default_value = "none", value_parser = parse_window)]
    pub window: Window,
    #[arg(long, default_value_t = DEFAULT_RING_SAMPLES)]
    pub ring_samples: usize,
    /// Charge range `NMIN,NMAX` for the spectral method; symmetric ±(M/2 − 1) by default.
    #[arg(long, value_parser = parse_i32_pair, allow_hyphen_values = true)]
    pub n_range: Option<(i32, i32)>,
    /// Largest accepted imaginary residue of grid Rayleigh quotients.
    #[arg(long, default_value_t = IMAGINARY_RESIDUE_TOLERANCE, allow_negative_numbers = true)]
    pub residue_tolerance: f64,
    /// Report JSON; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct TableArgs {
    #[arg(long, value_parser = parse_parity)]
    pub parity: Parity,
    #[arg(long)]
    pub n: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub q: f64,
    /// Upper end of a q sweep starting at --q.
    #[arg(long, requires = "q_steps", allow_negative_numbers = true)]
    pub q_max: Option<f64>,
    /// Number of q values in the sweep, endpoints included.
    #[arg(long, requires = "q_max")]
    pub q_steps: Option<usize>,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn pair<T: std::str::FromStr>(s: &str) -> std::result::Result<(T, T), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two comma-separated values, got `{s}`"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<T>()
            .map_err(|_| format!("`{v}` is not a valid number"))
    };
    Ok((parse(a)?, parse(b)?))
}

fn parse_usize_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    pair(s)
}

fn parse_i32_pair(s: &str) -> std::result::Result<(i32, i32), String> {
    pair(s)
}

fn parse_f64_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    pair(s)
}

fn parse_window(s: &str) -> std::result::Result<Window, String> {
    s.parse().map_err(|e: HwmError| e.to_string())
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: HwmError| e.to_string())
}

fn parse_parity(s: &str) -> std::result::Result<Parity, String> {
    s.parse().map_err(|e: HwmError| e.to_string())
}

fn angle(value: f64, degrees: bool) -> f64 {
    if degrees {
        value * PI / 180.0
    } else {
        value
    }
}

fn usage(msg: impl Into<String>) -> HwmError {
    HwmError::InvalidParameter(msg.into())
}

pub fn wave_from_args(args: &GenArgs) -> Result<Wave> {
    let theta = angle(args.theta, args.degrees);
    let order_u32 = || {
        u32::try_from(args.n)
            .map_err(|_| usage(format!("Mathieu order must be >= 0, got {}", args.n)))
    };
    let focal = || args.f.ok_or_else(|| usage("Mathieu waves need --f"));
    Ok(match args.family {
        Family::Plane => Wave::Plane(LabelSetPlane::new(
            args.k,
            theta,
            angle(args.phi, args.degrees),
        )?),
        Family::Bessel => {
            let n = i32::try_from(args.n)
                .map_err(|_| usage(format!("order {} is too large", args.n)))?;
            Wave::Bessel(LabelSetBessel::new(args.k, theta, n)?)
        }
        Family::MathieuEven => Wave::Mathieu(LabelSetMathieu::new(
            args.k,
            theta,
            order_u32()?,
            Parity::Even,
            focal()?,
        )?),
        Family::MathieuOdd => Wave::Mathieu(LabelSetMathieu::new(
            args.k,
            theta,
            order_u32()?,
            Parity::Odd,
            focal()?,
        )?),
    })
}

pub fn cmd_gen(args: &GenArgs) -> Result<()> {
    let wave = wave_from_args(args)?;
    let (nx, ny) = args.grid;
    let dy = args.dy.unwrap_or(args.dx);
    if nx < 2 || ny < 2 {
        return Err(usage(format!("grid must be at least 2x2, got {nx}x{ny}")));
    }
    let mut spec = GridSpec::centered(nx, ny, args.dx, dy, args.z);
    if let Some((x0, y0)) = args.origin {
        spec.x0 = x0;
        spec.y0 = y0;
    }
    let field = sample_grid(&wave, &spec)?;
    fieldio::write_field(&field, &args.out)
}

pub fn load_input(input: &InputArgs) -> Result<FieldGrid> {
    let is_csv = input
        .input
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if !is_csv {
        return fieldio::read_field(&input.input);
    }
    let (k, theta) = match (input.k, input.theta) {
        (Some(k), Some(t)) => (k, angle(t, input.degrees)),
        _ => return Err(usage("CSV input needs --k and --theta")),
    };
    let meta = FieldMeta {
        k,
        theta,
        z_plane: input.z,
        description: format!("csv {}", input.input.display()),
    };
    fieldio::read_field_csv(&input.input, meta)
}

#[derive(Debug, Serialize)]
pub struct SpectrumSummary {
    pub k: f64,
    pub theta: f64,
    pub ring_samples: usize,
    pub n_min: i32,
    pub n_max: i32,
    pub window: Window,
    pub weight_convention: String,
    /// `(2π/M) Σ|φ_m|²`.
    pub ring_norm: f64,
    /// `Σ|c_n|²` over the requested charges.
    pub oam_norm: f64,
    /// `sinθ · ring_norm`, equal to `oam_norm` when the range spans M charges.
    pub oam_norm_full_range: f64,
    pub mean_charge: Option<f64>,
}

pub fn cmd_spectrum(args: &SpectrumArgs) -> Result<SpectrumSummary> {
    let field = load_input(&args.input)?;
    let ring = spectral::ring_spectrum_from_grid(&field, args.ring_samples, args.window)?;
    let (n_min, n_max) = args.n_range;
    let oam = spectral::oam_spectrum(&ring, n_min, n_max)?;
    if let Some(p) = &args.out_ring {
        fieldio::write_ring_csv(&ring, p)?;
    }
    if let Some(p) = &args.out_oam {
        fieldio::write_oam_csv(&oam, p)?;
    }
    let ring_norm = spectral::parseval_norm(&ring);
    let summary = SpectrumSummary {
        k: ring.k,
        theta: ring.theta,
        ring_samples: ring.len(),
        n_min,
        n_max,
        window: args.window,
        weight_convention: ring.weight_convention.clone(),
        ring_norm,
        oam_norm: oam.norm,
        oam_norm_full_range: ring.theta.sin() * ring_norm,
        mean_charge: momenta::mean_charge(&oam).ok(),
    };
    emit_json(&summary, args.out_json.as_deref())?;
    Ok(summary)
}

#[derive(Debug, Serialize)]
pub struct MomentaOutput {
    pub input: String,
    pub description: String,
    pub reports: Vec<momenta::MomentumReport>,
}

pub fn cmd_momenta(args: &MomentaArgs) -> Result<MomentaOutput> {
    let field = load_input(&args.input)?;
    let label_f = match field.meta.description.parse::<Wave>() {
        Ok(Wave::Mathieu(l)) => Some(l.f),
        _ => None,
    };
    let opts = ReportOptions {
        ring_samples: args.ring_samples,
        n_range: args.n_range,
        window: args.window,
        f: args.f.or(label_f),
        residue_tolerance: args.residue_tolerance,
    };
    let out = MomentaOutput {
        input: args.input.input.display().to_string(),
        description: field.meta.description.clone(),
        reports: momenta::report(&field, &args.methods, &opts)?,
    };
    emit_json(&out, args.out.as_deref())?;
    Ok(out)
}

/// CSV `class,n,q,char_value,j,coeff`; exact zero coefficients are omitted.
pub fn mathieu_table(args: &TableArgs) -> Result<String> {
    let qs: Vec<f64> = match (args.q_max, args.q_steps) {
        (Some(q_max), Some(steps)) => {
            if steps < 2 {
                return Err(usage("--q-steps must be at least 2"));
            }
            (0..steps)
                .map(|i| args.q + (q_max - args.q) * i as f64 / (steps - 1) as f64)
                .collect()
        }
        _ => vec![args.q],
    };
    let mut out = String::from("class,n,q,char_value,j,coeff\n");
    for q in qs {
        let eigen = mathieu_eigen(args.parity, args.n, q)?;
        for (j, c) in eigen.harmonics() {
            if c == 0.0 {
                continue;
            }
            out.push_str(&format!(
                "{},{},{},{},{j},{}\n",
                eigen.class,
                args.n,
                fieldio::fmt_f64(q),
                fieldio::fmt_f64(eigen.char_value),
                fieldio::fmt_f64(c)
            ));
        }
    }
    Ok(out)
}

pub fn cmd_mathieu_table(args: &TableArgs) -> Result<()> {
    let csv = mathieu_table(args)?;
    match &args.out {
        Some(p) => std::fs::write(p, csv).map_err(|e| HwmError::io(p, e)),
        None => write_stdout(csv.as_bytes()),
    }
}

fn write_stdout(bytes: &[u8]) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(bytes)
        .and_then(|_| out.flush())
        .map_err(|e| HwmError::io("<stdout>", e))
}

fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => fieldio::write_json(value, p),
        None => {
            let mut text = serde_json::to_string_pretty(value).expect("serializable");
            text.push('\n');
            write_stdout(text.as_bytes())
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Spectrum(a) => cmd_spectrum(a).map(drop),
        Command::Momenta(a) => cmd_momenta(a).map(drop),
        Command::MathieuTable(a) => cmd_mathieu_table(a),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Messages go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("hwm: {e}");
            e.exit_code()
        }
    }
}
