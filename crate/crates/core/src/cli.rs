//! Command-line front end.
//!
//! Every subcommand reads its knobs from flags, then from an optional
//! `key = value` config file, then from built-in defaults, and writes JSON
//! (or CSV where a table makes sense) to stdout or `--out`.
//!
//! Exit codes: 0 success, 2 input error, 3 numerical failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::bessel::{gamma_closed_form, moment_quadrature};
use crate::entire::{decay_scan, e_alpha_h_stable, e_m_stable, growth_scan, i_alpha};
use crate::error::{Error, Result};
use crate::functional_eq::{solve_root_problem, RootProblem};
use crate::linear_systems::{
    fundamental_solutions_for, parse_matrix_json, residual_check, residual_of_series,
    solution_asymptotics, DEFAULT_TOL,
};
use crate::moment_seq::{
    check_strong_regularity, factorial_bracket, growth_summary, quotient_bracket, MomentSequence,
    SequenceSpec, DEFAULT_P_MAX,
};
use crate::series::TruncatedSeries;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "dunkl-moment",
    version,
    about = "Moment calculus with Dunkl factorials"
)]
pub struct Cli {
    /// `key = value` file supplying defaults for any long flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Factorial,
    Dunkl,
    Custom,
}

impl FromStr for FamilyArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <FamilyArg as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Args)]
struct SeqArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// `p, m(p)` table for the custom family.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Strong-regularity report and growth functions of a moment sequence.
    Seq {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        range: Option<usize>,
        /// Index at which ln θ_p / ln p is probed.
        #[arg(long)]
        probe: Option<usize>,
    },
    /// Fundamental system of ∂_m y = A y for a matrix read from JSON.
    Solve {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Truncation order for the residual check.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        /// Sample points `re,im` at which the solutions are tabulated.
        #[arg(long = "at", allow_hyphen_values = true)]
        at: Vec<String>,
        /// Also run the growth / decay / indicator scan.
        #[arg(long)]
        growth: bool,
        #[arg(long)]
        rmax: Option<f64>,
    },
    /// Zeros of Σ c_ℓ E_m(ω_ℓ z) in a box and the solutions they generate.
    Roots {
        #[arg(long)]
        problem: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Dunkl factorials against quadrature of the Hamburger weight.
    Moments {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// m-translation (or even translation) of a truncated series.
    Translate {
        #[command(flatten)]
        seq: SeqArgs,
        /// Coefficients as a JSON list of `[re, im]`, inline or `@file`.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        #[arg(long)]
        even: bool,
    },
    /// Order, type and indicator estimates of a generalized exponential.
    Growth {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, value_enum)]
        target: Option<Target>,
        #[arg(long)]
        rmax: Option<f64>,
        /// Number of geometrically spaced radii ending at rmax.
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        directions: Option<usize>,
        /// Eigenvalue for the chain target.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long)]
        h: Option<usize>,
        /// Direction of an additional decay fit.
        #[arg(long, allow_hyphen_values = true)]
        decay_theta: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    DunklExp,
    Exp,
    EvenPart,
    Chain,
}

impl FromStr for Target {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Target as ValueEnum>::from_str(s, true)
    }
}

/// Flag > config file > default resolution.
struct Settings {
    file: BTreeMap<String, String>,
}

impl Settings {
    fn load(path: Option<&Path>) -> Result<Self> {
        let mut file = BTreeMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)?;
            for (i, raw) in text.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| {
                    Error::Parse(format!("config line {}: expected key = value", i + 1))
                })?;
                file.insert(k.trim().replace('_', "-"), v.trim().to_string());
            }
        }
        Ok(Self { file })
    }

    fn opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::Parse(format!("config value for {key} is invalid: {v}"))),
            None => Ok(None),
        }
    }

    fn get<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        Ok(self.opt(flag, key)?.unwrap_or(default))
    }

    fn flag(&self, flag: bool, key: &str) -> Result<bool> {
        if flag {
            return Ok(true);
        }
        self.get(None, key, false)
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |x: &str| {
        x.parse::<f64>()
            .map_err(|_| Error::Parse(format!("not a number: {x}")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(Error::Parse(format!("expected re or re,im, got {s}"))),
    }
}

fn parse_complex_list(value: &serde_json::Value, what: &str) -> Result<Vec<Complex64>> {
    let items = value
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be a list of [re, im]")))?;
    items
        .iter()
        .map(|v| {
            match v
                .as_array()
                .map(|a| a.iter().map(|x| x.as_f64()).collect::<Vec<_>>())
            {
                Some(a) if a.len() == 2 && a.iter().all(Option::is_some) => {
                    Ok(Complex64::new(a[0].unwrap(), a[1].unwrap()))
                }
                _ => match v.as_f64() {
                    Some(re) => Ok(Complex64::new(re, 0.0)),
                    None => Err(Error::Parse(format!("{what}: expected [re, im], got {v}"))),
                },
            }
        })
        .collect()
}

fn build_sequence(
    settings: &Settings,
    args: &SeqArgs,
    default: FamilyArg,
) -> Result<MomentSequence> {
    let family = settings.get(args.family, "family", default)?;
    let spec = SequenceSpec {
        family: format!("{family:?}"),
        alpha: Some(settings.get(args.alpha, "alpha", 0.0)?),
        table: settings.opt(args.table.clone(), "table")?,
    };
    if family == FamilyArg::Custom && spec.table.is_none() {
        return Err(Error::Domain("custom family needs --table".into()));
    }
    spec.build(DEFAULT_P_MAX)
}

fn geometric_radii(rmax: f64, points: usize) -> Result<Vec<f64>> {
    if !(rmax > 0.0) || points < 4 {
        return Err(Error::Domain("need rmax > 0 and at least 4 radii".into()));
    }
    let rmin = rmax / 2f64.powi(points as i32 - 1);
    Ok((0..points).map(|i| rmin * 2f64.powi(i as i32)).collect())
}

fn directions(count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::Domain("need at least one direction".into()));
    }
    Ok((0..count)
        .map(|i| {
            -std::f64::consts::PI + 2.0 * std::f64::consts::PI * (i as f64 + 1.0) / count as f64
        })
        .collect())
}

fn json_string(v: &impl Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn cmd_seq(
    settings: &Settings,
    seq_args: &SeqArgs,
    range: Option<usize>,
    probe: Option<usize>,
) -> Result<String> {
    let seq = build_sequence(settings, seq_args, FamilyArg::Dunkl)?;
    let range = settings.get(range, "range", 200)?;
    let probe = settings.get(probe, "probe", 100_000)?;
    let sr = check_strong_regularity(&seq, range)?;
    let ts = [10.0, 100.0, 1e3, 1e4];
    // custom tables may be too short for the growth probes
    let growth = match growth_summary(&seq, probe, &ts, range) {
        Ok(g) => Some(g),
        Err(e) if e.is_input_error() => None,
        Err(e) => return Err(e),
    };
    json_string(&json!({
        "sequence": seq.family(),
        "sr": sr,
        "growth": growth,
        "quotient_bracket": quotient_bracket(&seq, range)?,
        "factorial_bracket": factorial_bracket(&seq, range)?,
    }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    settings: &Settings,
    format: Format,
    seed: u64,
    seq_args: &SeqArgs,
    matrix: Option<PathBuf>,
    order: Option<usize>,
    tol: Option<f64>,
    at: &[String],
    growth: bool,
    rmax: Option<f64>,
) -> Result<String> {
    let seq = build_sequence(settings, seq_args, FamilyArg::Dunkl)?;
    let path = settings
        .opt(matrix, "matrix")?
        .ok_or_else(|| Error::Domain("solve needs --matrix".into()))?;
    let a = parse_matrix_json(&std::fs::read_to_string(path)?)?;
    let order = settings.get(order, "order", 60)?;
    let tol = settings.get(tol, "tol", DEFAULT_TOL)?;
    if order < 8 {
        return Err(Error::Domain("order must be at least 8".into()));
    }
    let system = fundamental_solutions_for(&a, &seq, tol)?;
    let residuals = system
        .solutions
        .iter()
        .map(|y| residual_check(y, &a, &seq, order))
        .collect::<Result<Vec<f64>>>()?;

    let points: Vec<Complex64> = if at.is_empty() {
        match settings.file.get("at") {
            Some(list) => list.split(';').map(parse_complex).collect::<Result<_>>()?,
            None => vec![
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, 0.5),
                Complex64::new(-0.5, 0.25),
                Complex64::new(1.0, 1.0),
            ],
        }
    } else {
        at.iter().map(|s| parse_complex(s)).collect::<Result<_>>()?
    };

    // superposition of two random members is again a solution
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = system.solutions.len();
    let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
    let ca = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let cb = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let (yi, yj) = (
        system.solutions[i].series(&seq, order)?,
        system.solutions[j].series(&seq, order)?,
    );
    let combo: Vec<TruncatedSeries> = yi
        .iter()
        .zip(&yj)
        .map(|(p, q)| p.scale(ca).add(&q.scale(cb)))
        .collect();
    let superposition = json!({
        "members": [i, j],
        "a": ca,
        "b": cb,
        "residual": residual_of_series(&combo, &a, &seq)?,
        "bound": ca.norm() * residuals[i] + cb.norm() * residuals[j] + 1e-12,
    });

    if format == Format::Csv {
        let mut out = String::from("solution,eigenvalue_re,eigenvalue_im,chain_index,residual\n");
        for (k, (y, r)) in system.solutions.iter().zip(&residuals).enumerate() {
            writeln!(
                out,
                "{k},{},{},{},{r:e}",
                y.eigenvalue.re, y.eigenvalue.im, y.chain_index
            )
            .unwrap();
        }
        return Ok(out);
    }

    let samples = points
        .iter()
        .map(|&z| {
            let values = system
                .solutions
                .iter()
                .map(|y| y.evaluate(z, &seq, 1e-15))
                .collect::<Result<Vec<_>>>()?;
            Ok(json!({"z": z, "values": values}))
        })
        .collect::<Result<Vec<_>>>()?;
    let asymptotics = if settings.flag(growth, "growth")? {
        let radii = geometric_radii(settings.get(rmax, "rmax", 20.0)?, 8)?;
        Some(solution_asymptotics(&system, &radii, &directions(16)?)?)
    } else {
        None
    };
    let solutions: Vec<_> = system
        .solutions
        .iter()
        .zip(&residuals)
        .map(|(y, r)| json!({"eigenvalue": y.eigenvalue, "chain_index": y.chain_index, "terms": y.terms, "residual": r}))
        .collect();
    json_string(&json!({
        "sequence": seq.family(),
        "chains": system.chains,
        "solutions": solutions,
        "max_residual": residuals.iter().copied().fold(0.0, f64::max),
        "initial_min_singular_value": system.initial_min_singular_value()?,
        "superposition": superposition,
        "samples": samples,
        "asymptotics": asymptotics,
    }))
}

fn cmd_roots(
    settings: &Settings,
    format: Format,
    problem: Option<PathBuf>,
    tol: Option<f64>,
) -> Result<String> {
    let path = settings
        .opt(problem, "problem")?
        .ok_or_else(|| Error::Domain("roots needs --problem".into()))?;
    let mut problem = RootProblem::from_json(&std::fs::read_to_string(path)?)?;
    problem.tol = settings.get(tol, "tol", problem.tol)?;
    let report = solve_root_problem(&problem)?;
    if format == Format::Csv {
        let mut out = String::from("re,im,residual,newton_steps,equation_residual\n");
        for (r, e) in report.roots.iter().zip(&report.equation_residuals) {
            writeln!(
                out,
                "{},{},{:e},{},{e:e}",
                r.z0.re, r.z0.im, r.residual, r.newton_steps
            )
            .unwrap();
        }
        return Ok(out);
    }
    json_string(&report)
}

fn cmd_moments(
    settings: &Settings,
    format: Format,
    alpha: Option<f64>,
    nmax: Option<usize>,
) -> Result<String> {
    let alpha = settings.get(alpha, "alpha", -0.75)?;
    let nmax = settings.get(nmax, "nmax", 8)?;
    let mut rows = Vec::new();
    for n in 0..=nmax {
        let closed = gamma_closed_form(n, alpha)?;
        let q = moment_quadrature(n, alpha)?;
        rows.push((n, closed, q.value, (q.value - closed).abs() / closed));
    }
    if format == Format::Json {
        let rows: Vec<_> = rows
            .iter()
            .map(|(n, c, q, e)| json!({"n": n, "alpha": alpha, "gamma_closed_form": c, "gamma_quadrature": q, "rel_error": e}))
            .collect();
        return json_string(&rows);
    }
    let mut out = String::from("n,alpha,gamma_closed_form,gamma_quadrature,rel_error\n");
    for (n, c, q, e) in rows {
        writeln!(out, "{n},{alpha},{c:.17e},{q:.17e},{e:e}").unwrap();
    }
    Ok(out)
}

fn cmd_translate(
    settings: &Settings,
    seq_args: &SeqArgs,
    coeffs: Option<String>,
    y: Option<String>,
    even: bool,
) -> Result<String> {
    let seq = build_sequence(settings, seq_args, FamilyArg::Dunkl)?;
    let raw = settings
        .opt(coeffs, "coeffs")?
        .ok_or_else(|| Error::Domain("translate needs --coeffs".into()))?;
    let text = match raw.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)?,
        None => raw,
    };
    let input = TruncatedSeries::new(parse_complex_list(&serde_json::from_str(&text)?, "coeffs")?)?;
    let y = parse_complex(&settings.get(y, "y", "0".to_string())?)?;
    let even = settings.flag(even, "even")?;
    let output = if even {
        input.even_translate(y, &seq)?
    } else {
        input.m_translate(y, &seq)?
    };
    json_string(&json!({
        "sequence": seq.family(),
        "y": y,
        "mode": if even { "even" } else { "m" },
        "input": input,
        "output": output,
    }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_growth(
    settings: &Settings,
    format: Format,
    seq_args: &SeqArgs,
    target: Option<Target>,
    rmax: Option<f64>,
    points: Option<usize>,
    dirs: Option<usize>,
    lambda: Option<String>,
    h: Option<usize>,
    decay_theta: Option<f64>,
) -> Result<String> {
    let seq = build_sequence(settings, seq_args, FamilyArg::Dunkl)?;
    let target = settings.get(target, "target", Target::DunklExp)?;
    let radii = geometric_radii(
        settings.get(rmax, "rmax", 40.0)?,
        settings.get(points, "points", 8)?,
    )?;
    let dirs = directions(settings.get(dirs, "directions", 16)?)?;
    let lambda = parse_complex(&settings.get(lambda, "lambda", "1".to_string())?)?;
    let h = settings.get(h, "h", 1)?;
    let alpha = seq.alpha();
    if target == Target::EvenPart && alpha.is_none() {
        return Err(Error::Domain(
            "even-part target needs the dunkl family".into(),
        ));
    }
    let nan = Complex64::new(f64::NAN, 0.0);
    let f = |z: Complex64| -> Complex64 {
        let r = match target {
            Target::DunklExp => e_m_stable(z, &seq, 1e-15),
            Target::Exp => Ok(crate::entire::EvalResult {
                value: z.exp(),
                terms_used: 0,
                bound_on_tail: 0.0,
            }),
            Target::EvenPart => i_alpha(z, alpha.unwrap_or(0.0), 1e-15),
            Target::Chain => e_alpha_h_stable(lambda, z, h, &seq, 1e-15),
        };
        r.map(|e| e.value).unwrap_or(nan)
    };
    let report = growth_scan(f, &radii, &dirs)?;
    let decay = match settings.opt(decay_theta, "decay-theta")? {
        Some(theta) => Some(decay_scan(f, theta, &radii)?),
        None => None,
    };
    if format == Format::Csv {
        let mut out = String::from("r,log_max_modulus\n");
        for (r, l) in report.radii.iter().zip(&report.log_max_modulus) {
            writeln!(out, "{r},{l}").unwrap();
        }
        return Ok(out);
    }
    json_string(&json!({
        "sequence": seq.family(),
        "target": target,
        "report": report,
        "decay": decay,
    }))
}

fn execute(cli: Cli) -> Result<String> {
    let settings = Settings::load(cli.config.as_deref())?;
    let seed = settings.get(cli.seed, "seed", 0u64)?;
    let default_format = match cli.command {
        Command::Moments { .. } => Format::Csv,
        _ => Format::Json,
    };
    let format = settings.get(cli.format, "format", default_format)?;
    let csv_ok = matches!(
        cli.command,
        Command::Moments { .. }
            | Command::Solve { .. }
            | Command::Roots { .. }
            | Command::Growth { .. }
    );
    if format == Format::Csv && !csv_ok {
        return Err(Error::Domain("this command only writes JSON".into()));
    }
    match cli.command {
        Command::Seq { seq, range, probe } => cmd_seq(&settings, &seq, range, probe),
        Command::Solve {
            seq,
            matrix,
            order,
            tol,
            at,
            growth,
            rmax,
        } => cmd_solve(
            &settings, format, seed, &seq, matrix, order, tol, &at, growth, rmax,
        ),
        Command::Roots { problem, tol } => cmd_roots(&settings, format, problem, tol),
        Command::Moments { alpha, nmax } => cmd_moments(&settings, format, alpha, nmax),
        Command::Translate {
            seq,
            coeffs,
            y,
            even,
        } => cmd_translate(&settings, &seq, coeffs, y, even),
        Command::Growth {
            seq,
            target,
            rmax,
            points,
            directions,
            lambda,
            h,
            decay_theta,
        } => cmd_growth(
            &settings,
            format,
            &seq,
            target,
            rmax,
            points,
            directions,
            lambda,
            h,
            decay_theta,
        ),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let out = cli.out.clone();
    match execute(cli) {
        Ok(text) => {
            let written = match out {
                Some(path) => std::fs::write(path, text),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(text.as_bytes())
                }
            };
            match written {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_INPUT
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_NUMERICAL
            }
        }
    }
}
