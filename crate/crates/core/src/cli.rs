//! Command-line front end. `run` returns the process exit code: 0 on success,
//! 1 on domain errors, 2 on usage errors.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::contfrac::Rotation;
use crate::dimension::{
    almost_sure_constant, construct_cf_for_dimension, dim_estimate_rotation, lower_bound_process,
};
use crate::discrepancy::{xi_export, xi_sums, ExportFormat};
use crate::error::{Error, Result};
use crate::exactnum::{format_surd, parse_surd, RealEnclosure, DEFAULT_BITS};
use crate::figure::figure_batch;
use crate::heavyset::{
    cover, k_heavy_criterion, k_heavy_simulate, member, rational_heavy_set, strictly_heavy_point,
};
use crate::renorm::run as renorm_run;

pub const PRECISION_ENV: &str = "HEAVY_PRECISION_BITS";

#[derive(Parser, Debug)]
#[command(name = "heavy", version, about = "Heavy sets of circle rotations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args, Debug)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Union of the renormalization islands at a given depth.
    Cover {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Also list every island placement.
        #[arg(long)]
        islands: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Decide whether `x` is heavy.
    Member {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 64)]
        depth: usize,
        #[command(flatten)]
        output: Output,
    },
    /// The strictly heavy point.
    Point {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Exact heavy set of a rational rotation.
    Rational {
        #[arg(long)]
        alpha: String,
        #[command(flatten)]
        output: Output,
    },
    /// Dimension estimate, or a construction hitting a target dimension.
    Dim {
        #[arg(long, required_unless_present = "target", conflicts_with = "target")]
        alpha: Option<String>,
        #[arg(long)]
        target: Option<f64>,
        #[arg(long, default_value_t = 20)]
        depth: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Lower-bound process on a prefix, or the almost-sure constant.
    Lowerbound {
        #[arg(
            long,
            required_unless_present = "constant",
            conflicts_with = "constant"
        )]
        alpha: Option<String>,
        #[arg(long)]
        constant: bool,
        /// Maximum number of steps.
        #[arg(long, default_value_t = 20)]
        depth: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Divisibility criterion for k-heavy points, optionally checked by simulation.
    Criterion {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        k: u64,
        /// Simulate this many steps.
        #[arg(long)]
        n: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Sums ξ(n) along the orbit of `x0`.
    Xi {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value = "0")]
        x0: String,
        #[arg(long)]
        reproducible: bool,
        #[command(flatten)]
        output: Output,
    },
    /// SVG of all rational heavy sets with denominator at most `qmax`.
    FigureBatch {
        #[arg(long)]
        qmax: u64,
        #[arg(long)]
        reproducible: bool,
        #[command(flatten)]
        output: Output,
    },
}

/// Parse `argv`, run the command and report errors on stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::UnsupportedFormat(_) => 2,
        _ => 1,
    }
}

/// Working precision, capped by `HEAVY_PRECISION_BITS` when set.
pub fn precision_bits(requested: u32) -> u32 {
    match std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
    {
        Some(cap) if cap >= 8 => requested.min(cap),
        _ => requested,
    }
}

fn enclosure_json(e: &RealEnclosure) -> Value {
    json!({
        "lo": e.lo().to_string(),
        "hi": e.hi().to_string(),
        "lo_float": e.lo_f64(),
        "hi_float": e.hi_f64(),
        "mid": e.mid_f64(),
    })
}

fn rotation_json(r: &Rotation) -> Value {
    json!({
        "cf": r.cf().to_string(),
        "value": r.value().map(format_surd),
        "float": r.value().map(|v| v.to_f64()),
    })
}

fn check_format(output: &Output, allowed: &[Format]) -> Result<Format> {
    let f = output.format.unwrap_or(allowed[0]);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Error::UnsupportedFormat(format!("{f:?}").to_lowercase()))
    }
}

fn emit(output: &Output, body: &str) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .map_err(|e| Error::InvalidArgument(e.to_string()))
        }
    }
}

fn emit_json(output: &Output, v: &Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    emit(output, &s)
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Cover {
            alpha,
            depth,
            islands,
            output,
        } => {
            let fmt = check_format(&output, &[Format::Json, Format::Csv])?;
            let r = Rotation::parse(&alpha)?;
            let set = cover(&r, depth)?;
            if fmt == Format::Csv {
                return emit(&output, &set.to_csv());
            }
            let total = set.total_length();
            let mut v = json!({
                "alpha": rotation_json(&r),
                "depth": depth,
                "cover": set.to_json(),
                "total_length": format_surd(&total),
                "total_length_float": total.to_f64(),
            });
            if islands {
                v["state"] = renorm_run(&r, depth)?.to_json();
            }
            emit_json(&output, &v)
        }
        Command::Member {
            alpha,
            x,
            depth,
            output,
        } => {
            check_format(&output, &[Format::Json])?;
            let r = Rotation::parse(&alpha)?;
            let x = parse_surd(&x)?;
            let verdict = member(&r, &x, depth)?;
            let mut v = verdict.to_json();
            v["alpha"] = rotation_json(&r);
            v["x"] = json!(format_surd(&x));
            emit_json(&output, &v)
        }
        Command::Point { alpha, tol, output } => {
            check_format(&output, &[Format::Json])?;
            let r = Rotation::parse(&alpha)?;
            let floor = 2f64.powi(-(precision_bits(4096) as i32 - 2));
            let p = strictly_heavy_point(&r, tol.max(floor))?;
            emit_json(
                &output,
                &json!({
                    "alpha": rotation_json(&r),
                    "tol": tol,
                    "enclosure": enclosure_json(&p.enclosure),
                    "exact": p.exact.as_ref().map(format_surd),
                    "within_tol": p.within_tol && tol >= floor,
                }),
            )
        }
        Command::Rational { alpha, output } => {
            let fmt = check_format(&output, &[Format::Json, Format::Csv])?;
            let q = parse_surd(&alpha)?
                .to_rational()
                .ok_or_else(|| Error::InvalidArgument(format!("{alpha} is not rational")))?;
            let (p, q) = (q.numer(), q.denom());
            let (p, q) = match (u64::try_from(p), u64::try_from(q)) {
                (Ok(p), Ok(q)) => (p, q),
                _ => return Err(Error::InvalidArgument(format!("{alpha} outside (0, 1)"))),
            };
            let set = rational_heavy_set(p, q)?;
            match fmt {
                Format::Csv => emit(&output, &set.to_csv()),
                _ => emit_json(&output, &set.to_json()),
            }
        }
        Command::Dim {
            alpha,
            target,
            depth,
            output,
        } => {
            let fmt = check_format(&output, &[Format::Json, Format::Csv])?;
            if let Some(t) = target {
                let c = construct_cf_for_dimension(t, depth)?;
                if fmt == Format::Csv {
                    return emit(&output, &c.estimate.to_csv());
                }
                let last = c.estimate.last();
                return emit_json(
                    &output,
                    &json!({
                        "target": t,
                        "cf": c.cf.to_string(),
                        "blocks": c.blocks.iter().map(|b| json!({"n": b.n, "m": b.m, "reps": b.reps})).collect::<Vec<_>>(),
                        "depth": c.depth,
                        "value": last.value.mid_f64(),
                        "error": c.error,
                        "estimate": c.estimate.to_json(),
                    }),
                );
            }
            let alpha = alpha.expect("clap requires alpha without target");
            let r = Rotation::parse(&alpha)?;
            let est = dim_estimate_rotation(&r, depth, precision_bits(DEFAULT_BITS))?;
            if fmt == Format::Csv {
                return emit(&output, &est.to_csv());
            }
            let last = est.last();
            let mut v = est.to_json();
            v["alpha"] = rotation_json(&r);
            v["depth"] = json!(last.k);
            v["value"] = json!(last.value.mid_f64());
            v["enclosure"] = enclosure_json(&last.value);
            emit_json(&output, &v)
        }
        Command::Lowerbound {
            alpha,
            constant,
            depth,
            output,
        } => {
            check_format(&output, &[Format::Json])?;
            if constant {
                let c = almost_sure_constant()?;
                return emit_json(
                    &output,
                    &json!({ "almost_sure_constant": enclosure_json(&c) }),
                );
            }
            let alpha = alpha.expect("clap requires alpha without --constant");
            let r = Rotation::parse(&alpha)?;
            let want = 3 * depth + 3;
            let n = r.cf().available().map_or(want, |a| a.min(want));
            let prefix = r.cf().entries(n)?;
            let trace = lower_bound_process(&prefix, depth)?;
            let mut v = trace.to_json();
            v["alpha"] = rotation_json(&r);
            emit_json(&output, &v)
        }
        Command::Criterion {
            alpha,
            k,
            n,
            output,
        } => {
            check_format(&output, &[Format::Json])?;
            let r = Rotation::parse(&alpha)?;
            let c = k_heavy_criterion(r.cf(), k)?;
            let mut v = json!({
                "alpha": rotation_json(&r),
                "k": k,
                "criterion": c,
            });
            if let Some(n) = n {
                v["simulation"] = k_heavy_simulate(r.exact_value()?, k, n)?.to_json();
            }
            emit_json(&output, &v)
        }
        Command::Xi {
            alpha,
            n,
            x0,
            reproducible,
            output,
        } => {
            let fmt = check_format(&output, &[Format::Csv, Format::Svg])?;
            let r = Rotation::parse(&alpha)?;
            let series = xi_sums(r.exact_value()?, n, &parse_surd(&x0)?)?;
            let f = if fmt == Format::Svg {
                ExportFormat::Svg
            } else {
                ExportFormat::Csv
            };
            emit(&output, &xi_export(&series, f, reproducible)?)
        }
        Command::FigureBatch {
            qmax,
            reproducible,
            output,
        } => {
            check_format(&output, &[Format::Svg])?;
            let fig = figure_batch(qmax, reproducible)?;
            emit(&output, &fig.svg)?;
            let empty = fig.empty_strips();
            if !empty.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "{} empty strips",
                    empty.len()
                )));
            }
            if output.out.is_some() {
                eprintln!("{} strips", fig.strips.len());
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors() {
        assert_eq!(run(["heavy"]), 2);
        assert_eq!(run(["heavy", "bogus"]), 2);
        assert_eq!(
            run(["heavy", "dim", "--alpha", "[(2)]", "--target", "0.5"]),
            2
        );
        assert_eq!(run(["heavy", "rational", "--alpha", "one third"]), 2);
        assert_eq!(
            run(["heavy", "rational", "--alpha", "1/3", "--format", "svg"]),
            2
        );
    }

    #[test]
    fn domain_errors() {
        assert_eq!(run(["heavy", "rational", "--alpha", "3/2"]), 1);
        assert_eq!(run(["heavy", "point", "--alpha", "1/3"]), 1);
        assert_eq!(run(["heavy", "figure-batch", "--qmax", "1"]), 1);
    }
}
