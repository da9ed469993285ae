//! `cantor`: command-line front end for cantor-core.
//!
//! Results go to standard output (or `--output`). Failures print a JSON
//! object to standard error and exit with 1 (usage), 2 (domain or
//! validation) or 3 (insufficient depth).

mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use cantor_core::gausskuzmin::{limit_scan, measure_bounds, measure_mc, GkSetSpec, ScanFamily};
use cantor_core::numeral::{classify_rationality, expand_with_probe, Cylinder, DEFAULT_PROBE};
use cantor_core::salem::{default_tolerance, Grid, SalemSystem};
use cantor_core::shifts::{apply_program, normalize_program, representation, Representation};
use cantor_core::{Error, Point, Rational, Rationality, SalemFunction, ShiftProgram};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "cantor",
    version,
    about = "Cantor series digits, shifts, Salem functions and Gauss-Kuzmin measures"
)]
struct Cli {
    /// Write the result to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Print rationals as decimals with this many fractional digits.
    #[arg(long, global = true, conflicts_with = "exact")]
    digits: Option<usize>,

    /// Print rationals exactly as num/den (the default).
    #[arg(long, global = true)]
    exact: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Digit expansion of x to a given depth.
    Expand {
        #[arg(long)]
        x: String,
        /// Base: an integer, inline JSON, or a JSON file.
        #[arg(long)]
        q: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_PROBE)]
        probe: usize,
    },
    /// Value of a digit string (an interval for truncated strings).
    Evaluate {
        /// Digit string JSON, inline or a file.
        #[arg(long)]
        string: String,
        #[arg(long)]
        q: String,
    },
    /// Q-rational, Q-irrational or undecided.
    Classify {
        #[arg(long)]
        x: String,
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = DEFAULT_PROBE)]
        probe: usize,
    },
    /// Endpoints and measure of a cylinder.
    Cylinder {
        /// Comma-separated digits.
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        #[arg(long)]
        q: String,
    },
    /// σⁿ, σ_m or a shift program.
    Shift(ShiftArgs),
    /// Rewrites a program with the composition identities.
    Normalize {
        #[arg(long)]
        program: String,
    },
    /// Generalized Salem functions.
    #[command(subcommand)]
    Salem(SalemCommand),
    /// Measures of Gauss-Kuzmin type sets.
    #[command(subcommand)]
    Gk(GkCommand),
}

#[derive(Args, Debug)]
struct PointArgs {
    #[arg(long, required_unless_present = "string", conflicts_with = "string")]
    x: Option<String>,
    /// Digit string JSON instead of a rational.
    #[arg(long)]
    string: Option<String>,
    /// Representation of a Q-rational x.
    #[arg(long, value_enum, default_value_t = Repr::Zero)]
    repr: Repr,
}

#[derive(Args, Debug)]
struct ShiftArgs {
    #[command(flatten)]
    point: PointArgs,
    #[arg(long)]
    q: String,
    #[command(flatten)]
    op: ShiftOp,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct ShiftOp {
    /// σⁿ.
    #[arg(long)]
    n: Option<usize>,
    /// σ_m.
    #[arg(long)]
    m: Option<usize>,
    /// Shift program JSON.
    #[arg(long)]
    program: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Repr {
    Zero,
    Max,
}

#[derive(Subcommand, Debug)]
enum SalemCommand {
    /// Checks the admissibility conditions.
    Validate {
        #[arg(long)]
        system: String,
    },
    /// g at a point.
    Eval {
        #[arg(long)]
        system: String,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        tol: Option<String>,
    },
    /// Residual of the k-th functional equation.
    Residual {
        #[arg(long)]
        system: String,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        tol: Option<String>,
    },
    /// Exact integral over [0, 1], with an optional Monte-Carlo check.
    Integral {
        #[arg(long)]
        system: String,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tol: Option<String>,
    },
    /// CSV of (x, g, err_bound) over a grid.
    Table {
        #[arg(long)]
        system: String,
        /// Comma-separated points.
        #[arg(long, conflicts_with = "uniform", required_unless_present = "uniform")]
        grid: Option<String>,
        /// The points k/n for k = 0..=n.
        #[arg(long)]
        uniform: Option<u64>,
        #[arg(long)]
        tol: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum GkCommand {
    /// Exact measure bounds from cylinder enumeration.
    Bounds {
        #[arg(long)]
        spec: String,
        /// Defaults to six digits past the last one the programs read.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Monte-Carlo estimate of the measure.
    Mc {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Bounds for every member of a parameterized family.
    Scan {
        #[arg(long)]
        family: String,
    },
}

/// A failure, reported as JSON on standard error.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
    detail: Option<Value>,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            kind: "usage",
            message: message.into(),
            detail: None,
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            kind: "parse",
            message: message.into(),
            detail: None,
        }
    }

    fn to_json(&self) -> Value {
        let mut v = json!({ "error": { "kind": self.kind, "message": self.message } });
        if let Some(d) = &self.detail {
            v["error"]["detail"] = d.clone();
        }
        v
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (code, kind, detail) = match &e {
            Error::Domain(_) => (2, "domain", None),
            Error::Parse(_) => (2, "parse", None),
            Error::Unsupported(_) => (2, "unsupported", None),
            Error::Validation(v) => (2, "validation", serde_json::to_value(v).ok()),
            Error::InsufficientDepth {
                context,
                needed,
                available,
            } => (
                3,
                "insufficient-depth",
                Some(json!({ "context": context, "needed": needed, "available": available })),
            ),
        };
        Failure {
            code,
            kind,
            message,
            detail,
        }
    }
}

type Outcome = Result<String, Failure>;

fn tolerance(tol: &Option<String>) -> Result<Rational, Failure> {
    match tol {
        Some(t) => input::rational(t),
        None => Ok(default_tolerance()),
    }
}

fn salem(system: &str) -> Result<SalemFunction, Failure> {
    let s: SalemSystem = input::json(system, "Salem system")?;
    Ok(s.validate()?)
}

fn representation_flag(r: Repr) -> Representation {
    match r {
        Repr::Zero => Representation::Zero,
        Repr::Max => Representation::Max,
    }
}

/// The point as a digit string in base `q`.
fn point_string(
    p: &PointArgs,
    q: &cantor_core::QSequence,
) -> Result<cantor_core::DigitString, Failure> {
    match (&p.x, &p.string) {
        (Some(x), _) => {
            let x = input::rational(x)?;
            Ok(representation(
                &x,
                q,
                representation_flag(p.repr),
                DEFAULT_PROBE,
            )?)
        }
        (None, Some(s)) => input::digit_string(s, q),
        (None, None) => Err(Failure::usage("one of --x or --string is required")),
    }
}

fn run(cli: Cli) -> Outcome {
    let fmt = Format { digits: cli.digits };
    match cli.command {
        Command::Expand { x, q, depth, probe } => {
            let q = input::qseq(&q)?;
            let d = expand_with_probe(&input::rational(&x)?, &q, depth, probe)?;
            Ok(output::json_line(&output::digit_string(&d)))
        }
        Command::Evaluate { string, q } => {
            let q = input::qseq(&q)?;
            let d = input::digit_string(&string, &q)?;
            Ok(output::json_line(&fmt.evaluation(&d.eval()?)))
        }
        Command::Classify { x, q, probe } => {
            let q = input::qseq(&q)?;
            let v = match classify_rationality(&input::rational(&x)?, &q, probe)? {
                Rationality::QRational { canonical, dual } => json!({
                    "kind": "q-rational",
                    "canonical": output::digit_string(&canonical),
                    "dual": dual.as_ref().map(output::digit_string),
                }),
                Rationality::QIrrational(d) => json!({
                    "kind": "q-irrational",
                    "expansion": output::digit_string(&d),
                }),
                Rationality::Undecided(d) => json!({
                    "kind": "undecided",
                    "expansion": output::digit_string(&d),
                }),
            };
            Ok(output::json_line(&v))
        }
        Command::Cylinder { base, q } => {
            let q = input::qseq(&q)?;
            let c = Cylinder::new(&input::digits(&base)?, &q)?;
            Ok(output::json_line(&json!({
                "base": c.base,
                "inf": fmt.num(&c.inf),
                "sup": fmt.num(&c.sup),
                "measure": fmt.num(&c.measure),
            })))
        }
        Command::Shift(args) => shift(args, fmt),
        Command::Normalize { program } => {
            let p: ShiftProgram = input::json(&program, "shift program")?;
            let n = normalize_program(&p)?;
            Ok(output::json_line(
                &serde_json::to_value(n).expect("programs serialize"),
            ))
        }
        Command::Salem(cmd) => salem_command(cmd, fmt),
        Command::Gk(cmd) => gk_command(cmd, fmt),
    }
}

fn shift(args: ShiftArgs, fmt: Format) -> Outcome {
    let q = input::qseq(&args.q)?;
    let program = match (args.op.n, args.op.m, &args.op.program) {
        (Some(n), _, _) => ShiftProgram::sigma_power(n),
        (_, Some(m), _) => ShiftProgram::new(vec![cantor_core::Atom::Gen(m)]),
        (_, _, Some(p)) => input::json(p, "shift program")?,
        _ => return Err(Failure::usage("one of --n, --m or --program is required")),
    };
    let qjson =
        |q: &cantor_core::QSequence| serde_json::to_value(q).expect("base sequences serialize");
    if let (Some(x), Repr::Zero) = (&args.point.x, args.point.repr) {
        let p = Point::new(input::rational(x)?, q)?;
        let y = apply_program(&program, &p)?;
        return Ok(output::json_line(&json!({
            "q": qjson(&y.base),
            "value": fmt.num(&y.value),
        })));
    }
    let d = point_string(&args.point, &q)?;
    let y = apply_program(&program, &d)?;
    let mut v = json!({ "q": qjson(y.base()), "string": output::digit_string(&y) });
    match y.eval() {
        Ok(e) => {
            for (k, val) in fmt.evaluation(&e).as_object().expect("object") {
                v[k] = val.clone();
            }
        }
        Err(Error::Unsupported(_)) => {}
        Err(e) => return Err(e.into()),
    }
    Ok(output::json_line(&v))
}

fn salem_command(cmd: SalemCommand, fmt: Format) -> Outcome {
    match cmd {
        SalemCommand::Validate { system } => {
            let g = salem(&system)?;
            let columns: Vec<Value> = (1..=g.column_count())
                .map(|n| {
                    json!({
                        "p": g.coefficients(n).iter().map(|r| fmt.value(r)).collect::<Vec<_>>(),
                        "beta": g.betas(n).iter().map(|r| fmt.value(r)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(output::json_line(&json!({
                "valid": true,
                "q": g.q(),
                "columns": columns,
                "maxAbsP": fmt.num(g.max_abs_p()),
                "valueBound": fmt.num(g.value_bound()),
                "horizon": g.reorder_horizon(),
            })))
        }
        SalemCommand::Eval { system, point, tol } => {
            let g = salem(&system)?;
            let tol = tolerance(&tol)?;
            let x = point_string(&point, &g.base())?;
            let v = g.eval::<Rational>(&x, &tol)?;
            Ok(output::json_line(&json!({
                "value": fmt.num(&v.value),
                "errBound": fmt.num(&v.err_bound),
                "terms": v.terms,
                "exact": v.exact,
            })))
        }
        SalemCommand::Residual {
            system,
            point,
            k,
            tol,
        } => {
            let g = salem(&system)?;
            let tol = tolerance(&tol)?;
            let x = point_string(&point, &g.base())?;
            let r = g.residual::<Rational>(&x, k, &tol)?;
            Ok(output::json_line(&json!({
                "k": k,
                "residual": fmt.num(&r.value),
                "errBound": fmt.num(&r.err_bound),
            })))
        }
        SalemCommand::Integral {
            system,
            samples,
            seed,
            tol,
        } => {
            let g = salem(&system)?;
            let exact = g.integral()?;
            match samples {
                None => Ok(format!("{}\n", fmt.num(&exact))),
                Some(n) => {
                    let tol = match tol {
                        Some(t) => input::rational(&t)?,
                        None => Rational::new(1.into(), 1_000_000_000.into()),
                    };
                    let e = g.integral_mc(n, seed, &tol)?;
                    Ok(output::json_line(&json!({
                        "integral": fmt.num(&exact),
                        "mc": e,
                    })))
                }
            }
        }
        SalemCommand::Table {
            system,
            grid,
            uniform,
            tol,
        } => {
            let g = salem(&system)?;
            let tol = tolerance(&tol)?;
            let grid = match (grid, uniform) {
                (Some(points), _) => Grid::Points(input::rationals(&points)?),
                (None, Some(n)) => Grid::Uniform(n),
                (None, None) => {
                    return Err(Failure::usage("one of --grid or --uniform is required"))
                }
            };
            let rows = g.table(&grid, &tol)?;
            Ok(output::csv(
                &["x", "g", "err_bound"],
                rows.iter()
                    .map(|r| vec![fmt.num(&r.x), fmt.num(&r.g), fmt.num(&r.err_bound)]),
            ))
        }
    }
}

fn gk_command(cmd: GkCommand, fmt: Format) -> Outcome {
    match cmd {
        GkCommand::Bounds { spec, depth } => {
            let spec: GkSetSpec = input::json(&spec, "set spec")?;
            let depth = match depth {
                Some(d) => d,
                None => spec.required_depth()? + 5,
            };
            let b = measure_bounds(&spec, depth)?;
            Ok(output::csv(
                &["depth", "lower", "upper", "decided_mass"],
                [vec![
                    b.depth.to_string(),
                    fmt.num(&b.lower),
                    fmt.num(&b.upper),
                    fmt.num(&b.decided_mass),
                ]],
            ))
        }
        GkCommand::Mc {
            spec,
            samples,
            seed,
        } => {
            let spec: GkSetSpec = input::json(&spec, "set spec")?;
            let e = measure_mc(&spec, samples, seed)?;
            Ok(output::json_line(
                &serde_json::to_value(e).expect("estimates serialize"),
            ))
        }
        GkCommand::Scan { family } => {
            let family: ScanFamily = input::json(&family, "scan family")?;
            let mut rows = Vec::new();
            for row in limit_scan(&family)? {
                let b = row.bounds?;
                rows.push(vec![
                    row.n.to_string(),
                    fmt.num(&b.lower),
                    fmt.num(&b.upper),
                    fmt.num(&b.decided_mass),
                ]);
            }
            Ok(output::csv(&["n", "lower", "upper", "decided_mass"], rows))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let f = Failure::usage(e.to_string().trim_end().to_string());
            eprintln!("{}", f.to_json());
            return ExitCode::from(f.code);
        }
    };
    let out = cli.output.clone();
    let result = run(cli).and_then(|text| output::emit(out.as_deref(), &text));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.code)
        }
    }
}
