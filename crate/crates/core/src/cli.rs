//! Command-line front end.
//!
//! Every value can come from a flag or from a flat `key = value` config file
//! whose keys mirror the flag names (`nu`, `s-min`, ...). Flags win over the
//! config file, which wins over built-in defaults.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or invariant
//! error, 3 too few converged rows in `converge`.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::asymptotics::compute_coeffs;
use crate::converge::{
    format_sig, kernel_for, log_det_at, run_convergence, write_csv, ConvergeOptions, DEFAULT_TOL,
};
use crate::error::{Error, Result};
use crate::kernel::{Kernel, MeijerKernel, ProcessParams};
use crate::verify::{checks, report, run_checks, Level};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COVERAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "meijer-gap",
    version,
    about = "Hard-edge Meijer-G gap probabilities and their large-gap asymptotics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyLevel {
    Fast,
    Full,
}

impl FromStr for VerifyLevel {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

/// Flags shared by all subcommands.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Number of nu parameters.
    #[arg(long)]
    pub r: Option<usize>,
    /// Number of mu parameters.
    #[arg(long)]
    pub q: Option<usize>,
    /// Comma-separated nu values.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    /// Comma-separated mu values.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Flat key = value file with defaults for any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Large-gap coefficients rho, a, b, c and ln C.
    Coeffs {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// One kernel value K(x, y).
    Kernel {
        #[command(flatten)]
        common: CommonArgs,
        /// First argument.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        /// Second argument.
        #[arg(long, allow_hyphen_values = true)]
        y: Option<f64>,
    },
    /// Gap probability det(1 - K|[0,s]).
    Det {
        #[command(flatten)]
        common: CommonArgs,
        /// Interval end: the gap is [0, s].
        #[arg(long, allow_hyphen_values = true)]
        s: Option<f64>,
        /// Nyström node count (default 80).
        #[arg(long)]
        m: Option<usize>,
    },
    /// Compensated determinant f(s) on geometrically spaced s, as CSV.
    Converge {
        #[command(flatten)]
        common: CommonArgs,
        /// Smallest s (default 1).
        #[arg(long)]
        s_min: Option<f64>,
        /// Largest s (default 16).
        #[arg(long)]
        s_max: Option<f64>,
        /// Number of s values, at least 2 (default 9).
        #[arg(long)]
        points: Option<usize>,
        /// Nyström node count (default 100).
        #[arg(long)]
        nodes: Option<usize>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the self-verification suite.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        level: Option<VerifyLevel>,
    },
}

/// Flag values layered over a config file.
struct Settings {
    config: HashMap<String, String>,
}

impl Settings {
    fn load(path: Option<&PathBuf>) -> Result<Self> {
        let config = match path {
            Some(p) => parse_config(
                &std::fs::read_to_string(p)
                    .map_err(|e| Error::Io(format!("cannot read config {}: {e}", p.display())))?,
            )?,
            None => HashMap::new(),
        };
        Ok(Self { config })
    }

    fn get<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.config.get(key) {
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::Domain(format!("config key {key}: cannot parse {v:?}"))),
            None => Ok(None),
        }
    }

    fn get_or<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        Ok(self.get(flag, key)?.unwrap_or(default))
    }

    fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T> {
        self.get(flag, key)?
            .ok_or_else(|| Error::Domain(format!("missing --{key}")))
    }

    fn params(&self, common: &CommonArgs) -> Result<ProcessParams> {
        let nu = parse_list(&self.get_or(common.nu.clone(), "nu", "0".to_string())?)?;
        let mu = parse_list(&self.get_or(common.mu.clone(), "mu", String::new())?)?;
        let r = self.get(common.r, "r")?.unwrap_or(nu.len());
        let q = self.get(common.q, "q")?.unwrap_or(mu.len());
        ProcessParams::with_counts(r, q, nu, mu)
    }
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Domain(format!("config line {}: expected key = value", i + 1)))?;
        map.insert(
            k.trim().trim_start_matches("--").replace('_', "-"),
            v.trim().to_string(),
        );
    }
    Ok(map)
}

/// Parses a comma-separated list of reals; the empty string is the empty list.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Domain(format!("not a number: {t:?}")))
        })
        .collect()
}

/// Rounds to the 15 significant digits used for all printed scalars.
fn sig15(x: f64) -> f64 {
    format_sig(x).parse().unwrap_or(x)
}

fn emit(out: &mut dyn Write, format: Format, rows: &[(&str, f64)]) -> Result<()> {
    match format {
        Format::Json => {
            let obj: serde_json::Map<String, serde_json::Value> = rows
                .iter()
                .map(|(k, v)| (k.to_string(), json!(sig15(*v))))
                .collect();
            writeln!(out, "{}", serde_json::Value::Object(obj))?;
        }
        Format::Text => {
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in rows {
                writeln!(out, "{k:<width$}  {}", format_sig(*v))?;
            }
        }
    }
    Ok(())
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Coeffs { common } => {
            let set = Settings::load(common.config.as_ref())?;
            let params = set.params(&common)?;
            let fmt = set.get_or(common.format, "format", Format::Text)?;
            let co = compute_coeffs(&params)?;
            let rows = [
                ("rho", co.rho),
                ("a", co.a),
                ("b", co.b),
                ("c", co.c),
                ("lnC", co.ln_c),
                ("C", co.ln_c.exp()),
            ];
            emit(out, fmt, &rows)?;
        }
        Command::Kernel { common, x, y } => {
            let set = Settings::load(common.config.as_ref())?;
            let params = set.params(&common)?;
            let fmt = set.get_or(common.format, "format", Format::Text)?;
            let x: f64 = set.require(x, "x")?;
            let y: f64 = set.require(y, "y")?;
            let kernel = MeijerKernel::new(
                params,
                (x.min(y).max(f64::MIN_POSITIVE), x.max(y)),
                DEFAULT_TOL,
            )?;
            let value = kernel.eval(x, y)?;
            match fmt {
                Format::Text => writeln!(out, "{}", format_sig(value))?,
                Format::Json => emit(out, fmt, &[("x", x), ("y", y), ("K", value)])?,
            }
        }
        Command::Det { common, s, m } => {
            let set = Settings::load(common.config.as_ref())?;
            let params = set.params(&common)?;
            let fmt = set.get_or(common.format, "format", Format::Text)?;
            let s: f64 = set.require(s, "s")?;
            let m: usize = set.get_or(m, "m", 80)?;
            if m < 2 {
                return Err(Error::Domain(format!(
                    "need at least 2 quadrature nodes, got m={m}"
                )));
            }
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::Domain(format!(
                    "interval length must be positive, got s={s}"
                )));
            }
            let log_det = log_det_at(&kernel_for(&params, s, DEFAULT_TOL)?, s, m)?;
            match fmt {
                Format::Text => writeln!(out, "{}", format_sig(log_det.exp()))?,
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({"s": sig15(s), "m": m, "det": sig15(log_det.exp()), "log_det": sig15(log_det)})
                )?,
            }
        }
        Command::Converge {
            common,
            s_min,
            s_max,
            points,
            nodes,
            out: path,
        } => {
            let set = Settings::load(common.config.as_ref())?;
            let params = set.params(&common)?;
            let d = ConvergeOptions::default();
            let opts = ConvergeOptions {
                s_min: set.get_or(s_min, "s-min", d.s_min)?,
                s_max: set.get_or(s_max, "s-max", d.s_max)?,
                points: set.get_or(points, "points", d.points)?,
                nodes: set.get_or(nodes, "nodes", d.nodes)?,
                tol: d.tol,
            };
            let path: Option<PathBuf> = set.get(path, "out")?;
            let records = run_convergence(&params, &opts)?;
            let mut ok = 0;
            for r in &records {
                match r.f_of_s {
                    Some(_) => ok += 1,
                    None => writeln!(
                        err,
                        "warning: determinant not resolved at s={}",
                        format_sig(r.s)
                    )?,
                }
            }
            match path {
                Some(p) => {
                    let file = File::create(&p)
                        .map_err(|e| Error::Io(format!("cannot create {}: {e}", p.display())))?;
                    write_csv(BufWriter::new(file), &records)?;
                }
                None => write_csv(&mut *out, &records)?,
            }
            if 2 * ok < records.len() {
                writeln!(err, "error: only {ok} of {} rows resolved", records.len())?;
                return Ok(EXIT_COVERAGE);
            }
        }
        Command::Verify { common, level } => {
            let set = Settings::load(common.config.as_ref())?;
            let level = match set.get_or(level, "level", VerifyLevel::Fast)? {
                VerifyLevel::Fast => Level::Fast,
                VerifyLevel::Full => Level::Full,
            };
            let outcomes = run_checks(&checks(level));
            if !report(out, &outcomes)? {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("meijer-gap").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn config_parsing() {
        let m = parse_config("# comment\nnu = 1.31, 2.15\n\ns_min=2 # trailing\n").unwrap();
        assert_eq!(m["nu"], "1.31, 2.15");
        assert_eq!(m["s-min"], "2");
        assert!(parse_config("no equals sign").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("1, -0.5,2").unwrap(), vec![1.0, -0.5, 2.0]);
        assert!(parse_list("").unwrap().is_empty());
        assert!(parse_list("1,x").is_err());
    }

    #[test]
    fn coeffs_json_contains_ln_c() {
        let (code, out, _) = call(&[
            "coeffs",
            "--nu",
            "1.31,2.15,3.19",
            "--mu",
            "1.87,2.61",
            "--format",
            "json",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["lnC"].as_f64().unwrap() + 2.963).abs() < 1e-3);
    }

    #[test]
    fn bessel_coeffs_text() {
        let (code, out, _) = call(&["coeffs", "--r", "1", "--q", "0", "--nu", "0"]);
        assert_eq!(code, 0);
        assert!(out
            .lines()
            .any(|l| l.split_whitespace().collect::<Vec<_>>() == ["lnC", "0"]));
    }

    #[test]
    fn invariant_violation_exits_2() {
        let (code, _, err) = call(&[
            "coeffs", "--r", "2", "--q", "2", "--nu", "0,0", "--mu", "0,0",
        ]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("requires r > q"), "{err}");
    }

    #[test]
    fn det_tiny_interval_and_bad_m() {
        let (code, out, _) = call(&["det", "--s", "1e-8", "--m", "4"]);
        assert_eq!(code, 0);
        assert!((out.trim().parse::<f64>().unwrap() - 1.0).abs() < 1e-6);
        assert_eq!(call(&["det", "--s", "1", "--m", "0"]).0, EXIT_USAGE);
    }

    #[test]
    fn converge_needs_two_points() {
        assert_eq!(call(&["converge", "--points", "1"]).0, EXIT_USAGE);
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        assert_eq!(call(&["coeffs", "--bogus"]).0, EXIT_USAGE);
    }
}
