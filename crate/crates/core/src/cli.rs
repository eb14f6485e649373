//! Command-line front end: evaluation, grid runs, accuracy experiments and
//! projection, all writing plain CSV.
//!
//! Exit codes: 0 on success, 2 for usage and domain errors, 1 for anything
//! internal (including I/O failures).

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::dual::{dual_all_at_point, dual_all_multi};
use crate::error::Error;
use crate::jacobi::WeightParams;
use crate::projection::{default_nodes, project, Builtin};
use crate::reference::{run_experiment, AccuracyReport, ExperimentConfig, Precision, DEFAULT_REFERENCE_DIGITS};

#[derive(Parser, Debug)]
#[command(name = "dualbern", version, about = "Dual Bernstein polynomials: evaluation, accuracy experiments, projection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print `i,D^n_i(x)` for i = 0..n.
    Eval {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    /// CSV `x,i,value` over a `start:stop:step` grid.
    Grid {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        points: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Accuracy statistics against a high-precision reference.
    Experiment {
        /// Comma-separated degrees.
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        /// Named parameter sets; may be repeated or comma-separated.
        #[arg(long, value_enum, value_delimiter = ',', conflicts_with_all = ["alpha", "beta"])]
        preset: Vec<Preset>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        /// Working precisions: `f64` or a decimal digit count.
        #[arg(long, value_delimiter = ',', default_value = "f64")]
        precisions: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_REFERENCE_DIGITS)]
        ref_digits: u32,
        #[arg(long, default_value = "0.01:0.99:0.01")]
        points: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Weighted least-squares coefficients `I_k` of a builtin function.
    Project {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        params: ParamArgs,
        /// one, x, exp, sin2pi or runge.
        #[arg(long = "fn")]
        function: String,
        /// Quadrature nodes; defaults to max(64, 2n+16), at most 256.
        #[arg(long)]
        m: Option<usize>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub beta: f64,
    /// Overrides --alpha and --beta.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
}

impl ParamArgs {
    fn resolve(&self) -> (f64, f64) {
        self.preset.map_or((self.alpha, self.beta), Preset::params)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Legendre,
    Chebyshev,
    /// Strongly asymmetric weight `(-0.33, 5.6)`.
    #[value(name = "paper-nonstd")]
    Asymmetric,
}

impl Preset {
    pub fn params(self) -> (f64, f64) {
        match self {
            Preset::Legendre => (0.0, 0.0),
            Preset::Chebyshev => (-0.5, -0.5),
            Preset::Asymmetric => (-0.33, 5.6),
        }
    }
}

/// Failure of one command, already classified by exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DegenerateRecurrence { .. } | Error::CoeffMismatch | Error::SingularCoefficient { .. } => {
                Failure::Internal(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Internal(format!("I/O error: {e}"))
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(err, "internal error: {msg}");
            1
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Eval { n, params, x } => {
            let (a, b) = params.resolve();
            let table = dual_all_at_point(n, &WeightParams::new(a, b)?, &x)?;
            for (i, v) in table.values.iter().enumerate() {
                writeln!(out, "{i},{}", fmt_g17(*v))?;
            }
        }
        Command::Grid {
            n,
            params,
            points,
            output,
        } => {
            let (a, b) = params.resolve();
            let xs = parse_grid(&points)?;
            let tables = dual_all_multi(n, &WeightParams::new(a, b)?, &xs)?;
            with_output(output, out, |w| {
                writeln!(w, "x,i,value")?;
                for t in &tables {
                    let x = fmt_g17(t.x);
                    for (i, v) in t.values.iter().enumerate() {
                        writeln!(w, "{x},{i},{}", fmt_g17(*v))?;
                    }
                }
                Ok(())
            })?;
        }
        Command::Experiment {
            n_list,
            preset,
            alpha,
            beta,
            precisions,
            ref_digits,
            points,
            output,
        } => {
            let params_list: Vec<(f64, f64)> = if preset.is_empty() {
                vec![(alpha.unwrap_or(0.0), beta.unwrap_or(0.0))]
            } else {
                preset.iter().map(|p| p.params()).collect()
            };
            for &(a, b) in &params_list {
                WeightParams::new(a, b)?;
            }
            let precisions = precisions
                .iter()
                .map(|s| s.parse::<Precision>())
                .collect::<Result<Vec<_>, _>>()?;
            let config = ExperimentConfig {
                grid: parse_grid(&points)?,
                grid_label: points,
                reference_digits: ref_digits,
            };
            let reports = run_experiment(&n_list, &params_list, &precisions, &config)?;
            with_output(output, out, |w| write_reports(w, &reports))?;
        }
        Command::Project { n, params, function, m } => {
            let (a, b) = params.resolve();
            let f: Builtin = function.parse()?;
            let m = m.unwrap_or_else(|| default_nodes(n));
            let r = project(|x| f.eval(x), n, &WeightParams::new(a, b)?, m)?;
            writeln!(out, "k,I_k")?;
            for (k, c) in r.coeffs.iter().enumerate() {
                writeln!(out, "{k},{}", fmt_g17(*c))?;
            }
            writeln!(out, "error_sq,{}", fmt_g17(r.error_sq))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn with_output(
    path: Option<PathBuf>,
    out: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let file = File::create(&p).map_err(|e| Failure::Internal(format!("cannot create {}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
        }
        None => body(out)?,
    }
    Ok(())
}

/// Writes the experiment CSV.
pub fn write_reports(w: &mut dyn Write, reports: &[AccuracyReport]) -> io::Result<()> {
    writeln!(w, "n,alpha,beta,precision,mean_acc,p1_acc,min_acc")?;
    for r in reports {
        writeln!(
            w,
            "{},{},{},{},{:.4},{:.4},{:.4}",
            r.n,
            fmt_g17(r.alpha),
            fmt_g17(r.beta),
            r.precision,
            r.mean_acc,
            r.p1_acc,
            r.min_acc
        )?;
    }
    Ok(())
}

/// `v` with 17 significant digits, trailing zeros dropped, in the manner of
/// C's `%.17g`: `1` prints as `1`, `0.1` as `0.10000000000000001`.
pub fn fmt_g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..17).contains(&exp) {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (16 - exp) as usize;
    strip_zeros(&format!("{v:.decimals$}")).to_string()
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Expands `start:stop:step` into points `start + k·step <= stop`.
///
/// Each point is computed exactly from the decimal spelling and rounded
/// once, so `0.01:0.99:0.01` yields exactly the literals `0.01, ..., 0.99`.
/// A step larger than the range yields the single point `start`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, Error> {
    let bad = |why: &str| Error::Config(format!("bad grid spec '{spec}': {why} (expected start:stop:step)"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad("need three fields"));
    }
    let mut nums = Vec::with_capacity(3);
    for p in parts {
        nums.push(parse_decimal(p.trim()).ok_or_else(|| bad("fields must be decimal numbers"))?);
    }
    let (start, stop, step) = (&nums[0], &nums[1], &nums[2]);
    if !step.is_positive() {
        return Err(bad("step must be positive"));
    }
    if stop < start {
        return Err(bad("stop is below start"));
    }
    let zero = BigRational::zero();
    let one = BigRational::from_integer(BigInt::from(1));
    if *start < zero || *stop > one {
        return Err(bad("points must lie in [0,1]"));
    }
    let count = ((stop - start) / step).floor().to_integer();
    let count = count.to_usize().filter(|c| *c < 10_000_000).ok_or_else(|| bad("too many points"))?;
    Ok((0..=count)
        .map(|k| {
            let x = start + step * BigRational::from_integer(BigInt::from(k));
            ratio_to_f64(&x)
        })
        .collect())
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (mant, exp) = match body.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Some(r)
}

/// Correctly rounded for the `[0,1]` grids handled here: numerator and
/// denominator are scaled so both fit exactly in 53 bits before dividing
/// whenever possible, and otherwise go through a long integer quotient.
fn ratio_to_f64(r: &BigRational) -> f64 {
    let (n, d) = (r.numer(), r.denom());
    if let (Some(a), Some(b)) = (n.to_i64(), d.to_i64()) {
        if a.unsigned_abs() < 1 << 53 && b.unsigned_abs() < 1 << 53 {
            return a as f64 / b as f64;
        }
    }
    // 64 extra bits then one rounding of an integer: the sticky bit is
    // folded in so the result is still correctly rounded.
    let shift = 64 + d.bits() as i64 - n.bits() as i64 + 53;
    let shift = shift.max(0) as usize;
    let q = (n.clone() << shift) / d;
    let exact = (&q * d) == (n.clone() << shift);
    let q = if exact { q } else { q | BigInt::from(1) };
    q.to_f64().unwrap_or(f64::NAN) / 2f64.powi(shift as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_formatting() {
        assert_eq!(fmt_g17(1.0), "1");
        assert_eq!(fmt_g17(-2.0), "-2");
        assert_eq!(fmt_g17(0.1), "0.10000000000000001");
        assert_eq!(fmt_g17(0.5), "0.5");
        assert_eq!(fmt_g17(1e-7), "9.9999999999999995e-08");
        assert_eq!(fmt_g17(1e20), "1e+20");
        assert_eq!(fmt_g17(123456.0), "123456");
        assert_eq!(fmt_g17(0.0), "0");
        assert_eq!(fmt_g17(f64::INFINITY), "inf");
        for v in [0.1, 1.0 / 3.0, -7.25e-3, 6.02e23, 1e-300] {
            assert_eq!(fmt_g17(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn grid_points_are_exact_literals() {
        let g = parse_grid("0.01:0.99:0.01").unwrap();
        assert_eq!(g.len(), 99);
        for (k, x) in g.iter().enumerate() {
            assert_eq!(*x, format!("0.{:02}", k + 1).parse::<f64>().unwrap());
        }
        assert_eq!(parse_grid("0.5:0.5:0.1").unwrap(), vec![0.5]);
        assert_eq!(parse_grid("0.2:0.3:0.5").unwrap(), vec![0.2]);
        assert_eq!(parse_grid("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn grid_rejects_bad_specs() {
        for s in ["", "0.1:0.2", "a:b:c", "0.1:0.2:0", "0.5:0.2:0.1", "0:1.5:0.5", "-0.1:0.5:0.1"] {
            assert!(parse_grid(s).is_err(), "{s}");
        }
    }

    #[test]
    fn long_quotient_rounds_like_division() {
        // 1/2 + 2^-54 + 2^-61 lies just above a tie and must round up.
        let den = BigInt::from(1u64 << 61);
        let r = BigRational::new(BigInt::from((1u64 << 60) + (1 << 7) + 1), den.clone());
        assert_eq!(ratio_to_f64(&r), 0.5 + 2f64.powi(-53));
        let r = BigRational::new(BigInt::from((1u64 << 60) + (1 << 7)), den);
        assert_eq!(ratio_to_f64(&r), 0.5);
    }
}
