//! Command-line front end. Every subcommand prints one JSON document (or
//! CSV for `region` boundary samples) on standard output. Exit status is 0
//! on success, 1 for domain errors and 2 for usage or syntax errors; errors
//! are reported as `{"error":{"kind":..,"detail":..}}`.
//!
//! In expressions `*` is the `*`-product and `^` the `*`-power.

pub mod expr;

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::experiments::{
    casorati_scan, default_tolerance, identity_sweep_with_tolerance, CoefficientGenerator, Direction, Rule,
};
use crate::laurent::{classify, expand_rational, DEFAULT_NMAX};
use crate::quaternion::{Quaternion, Sphere};
use crate::rational::analyze_poles;
use crate::slice::{ball_boundary_points, sigma, tau, RegionKind, RegionSpec};
use crate::zeros::analyze_zeros;

pub use expr::{lower, parse, parse_and_lower, Expr, Value};

/// Components below this fraction of the norm are printed as zero.
const CHOP_REL: f64 = 1e-12;

#[derive(Parser, Debug)]
#[command(name = "qslice", version, about = "Slice-regular polynomials and rational functions over the quaternions")]
struct Cli {
    /// Pass threshold for `check` (defaults to the identity's own tolerance).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression at a point.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Spherical and isolated zeros of a polynomial.
    Zeros {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Pole spheres of a rational function.
    Poles {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Laurent expansion of a rational function at a centre.
    Laurent {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        #[arg(long, default_value_t = DEFAULT_NMAX)]
        nmax: usize,
    },
    /// Boundary samples (CSV or JSON) or membership queries (JSON) for a region.
    Region {
        #[arg(long)]
        kind: String,
        #[arg(long = "p", allow_hyphen_values = true)]
        p: String,
        #[arg(long = "R", conflicts_with_all = ["r1", "r2"])]
        r: Option<f64>,
        #[arg(long = "R1", requires = "r2")]
        r1: Option<f64>,
        #[arg(long = "R2", requires = "r1")]
        r2: Option<f64>,
        #[arg(long, value_enum, default_value_t = Emit::Csv)]
        emit: Emit,
        #[arg(long, default_value_t = 256)]
        count: usize,
        /// Membership query; may be repeated.
        #[arg(long, allow_hyphen_values = true)]
        at: Vec<String>,
    },
    /// Randomized sweep of a named identity.
    Check {
        identity: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Density scan of a truncated essential singularity.
    Cw {
        /// `reciprocal_factorial` or `geometric:<r>`.
        #[arg(long, default_value = "reciprocal_factorial")]
        rule: String,
        #[arg(long, value_enum, default_value_t = DirectionArg::Negative)]
        direction: DirectionArg,
        /// Scale quaternion `c` of the coefficients.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        scale: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        center: String,
        #[arg(long, default_value_t = 0.5)]
        radius: f64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 100)]
        targets: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        trunc: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Negative,
    Nonnegative,
    Both,
}

/// Drops components that are rounding noise relative to the whole value.
pub fn chop(q: Quaternion) -> Quaternion {
    let cut = CHOP_REL * q.norm();
    Quaternion::from_components(q.components().map(|c| if c.abs() <= cut { 0.0 } else { c }))
}

fn chop_sphere(s: Sphere) -> Sphere {
    let cut = CHOP_REL * (s.x.abs() + s.y);
    Sphere { x: if s.x.abs() <= cut { 0.0 } else { s.x }, y: if s.y <= cut { 0.0 } else { s.y } }
}

fn quat_arg(name: &str, text: &str) -> Result<Quaternion> {
    text.trim().parse::<Quaternion>().map_err(|e| match e {
        Error::SyntaxError { offset, message } => {
            Error::SyntaxError { offset, message: format!("--{name}: {message}") }
        }
        other => other,
    })
}

fn finite_or_null(x: f64) -> Json {
    if x.is_finite() {
        json!(x)
    } else {
        Json::Null
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SyntaxError { .. }
        | Error::InvalidArgument(_)
        | Error::UnknownIdentity(_)
        | Error::UnsupportedRegionKind(_)
        | Error::InvalidRegion(_) => 2,
        _ => 1,
    }
}

fn error_json(kind: &str, detail: &str) -> String {
    json!({ "error": { "kind": kind, "detail": detail } }).to_string()
}

/// Runs the command line `args` (program name first), writing to `out`.
/// Returns the process exit status.
pub fn run_with<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let _ = writeln!(out, "{}", error_json("UsageError", e.render().to_string().trim()));
            return 2;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let _ = writeln!(out, "{text}");
            0
        }
        Err(e) => {
            let _ = writeln!(out, "{}", error_json(e.kind(), &e.to_string()));
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Eval { expr, at } => {
            let v = parse_and_lower(expr)?;
            let q = quat_arg("at", at)?;
            Ok(json!({ "value": chop(v.eval(q)?).to_string() }).to_string())
        }
        Command::Zeros { expr } => {
            let f = parse_and_lower(expr)?
                .as_polynomial()
                .ok_or_else(|| Error::InvalidArgument("zeros expects a polynomial expression".into()))?;
            let mut report = analyze_zeros(&f)?;
            for s in &mut report.spherical {
                s.sphere = chop_sphere(s.sphere);
            }
            for z in &mut report.isolated {
                z.point = chop(z.point);
            }
            Ok(report.to_json().to_string())
        }
        Command::Poles { expr } => {
            let a = parse_and_lower(expr)?.into_rational();
            let mut report = analyze_poles(&a)?;
            for s in &mut report.spheres {
                s.sphere = chop_sphere(s.sphere);
                if let Some((q, _)) = &mut s.exceptional {
                    *q = chop(*q);
                }
            }
            Ok(report.to_json().to_string())
        }
        Command::Laurent { expr, center, nmax } => {
            let a = parse_and_lower(expr)?.into_rational();
            let p = quat_arg("center", center)?;
            let e = expand_rational(&a, p, *nmax)?;
            let coeffs: Vec<String> = e.coeffs.iter().map(|c| chop(*c).to_string()).collect();
            Ok(json!({
                "center": p.to_string(),
                "nmin": e.n_min,
                "nmax": e.n_max(),
                "coeffs": coeffs,
                "R1": finite_or_null(e.r1),
                "R2": finite_or_null(e.r2),
                "classification": classify(&e).to_string(),
            })
            .to_string())
        }
        Command::Region { kind, p, r, r1, r2, emit, count, at } => {
            let kind: RegionKind = kind.parse()?;
            let p = quat_arg("p", p)?;
            let spec = match (r, r1, r2) {
                (Some(r), None, None) => RegionSpec::ball(kind, p, *r)?,
                (None, Some(a), Some(b)) => RegionSpec::shell(kind, p, *a, *b)?,
                _ => return Err(Error::InvalidArgument("give either --R or both --R1 and --R2".into())),
            };
            if !at.is_empty() {
                let rows = at
                    .iter()
                    .map(|t| {
                        let q = quat_arg("at", t)?;
                        Ok(json!({
                            "point": q.to_string(),
                            "inside": spec.contains(q),
                            "sigma": sigma(q, p),
                            "tau": tau(q, p),
                        }))
                    })
                    .collect::<Result<Vec<_>>>()?;
                return Ok(
                    json!({ "kind": spec.kind, "center": p.to_string(), "R1": spec.r1, "R2": spec.r2, "points": rows })
                        .to_string(),
                );
            }
            let mut samples = ball_boundary_points(&spec, *count)?;
            samples.points.iter_mut().for_each(|q| *q = chop(*q));
            Ok(match emit {
                Emit::Json => serde_json::to_string(&samples).expect("samples serialize"),
                Emit::Csv => {
                    let mut s = String::from("x0,x1,x2,x3");
                    for q in &samples.points {
                        let [a, b, c, d] = q.components();
                        s.push_str(&format!("\n{a},{b},{c},{d}"));
                    }
                    s
                }
            })
        }
        Command::Check { identity, trials, seed } => {
            let tol = cli.tol.unwrap_or_else(|| default_tolerance(identity));
            let report = identity_sweep_with_tolerance(identity, *trials, *seed, tol)?;
            Ok(serde_json::to_string(&report).expect("report serializes"))
        }
        Command::Cw { rule, direction, scale, center, radius, eps, targets, seed, trunc } => {
            let rule = parse_rule(rule)?;
            let direction = match direction {
                DirectionArg::Negative => Direction::Negative,
                DirectionArg::Nonnegative => Direction::NonNegative,
                DirectionArg::Both => Direction::Both,
            };
            // written to reject NaN as well
            if !(*radius > 0.0 && *eps > 0.0) {
                return Err(Error::InvalidArgument("--radius and --eps must be positive".into()));
            }
            let gen = CoefficientGenerator { rule, direction, c: quat_arg("scale", scale)? };
            let p = quat_arg("center", center)?;
            let result = casorati_scan(&gen, p, *radius, *eps, *targets, *seed, *trunc);
            Ok(serde_json::to_string(&result).expect("result serializes"))
        }
    }
}

fn parse_rule(text: &str) -> Result<Rule> {
    if text == "reciprocal_factorial" {
        return Ok(Rule::ReciprocalFactorial);
    }
    if let Some(r) = text.strip_prefix("geometric:") {
        let r: f64 = r.parse().map_err(|_| Error::InvalidArgument(format!("bad ratio in `{text}`")))?;
        return Ok(Rule::Geometric(r));
    }
    Err(Error::InvalidArgument(format!("unknown rule `{text}`")))
}
