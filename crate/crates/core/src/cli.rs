//! Command-line front end. [`run`] takes its streams as arguments so tests
//! can drive it without spawning a process.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad input or prime,
//! 3 certificate failure, 4 decomposition failure, 5 malformed region.

use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::Error;
use crate::haar::{integrate_so2, integrate_so3, sample_batch, total_mass, GroupTag, RegionQp};
use crate::linalg::Mat;
use crate::padic::{format_proj, format_rational, parse_rational, PrimeCtx, ProjPoint};
use crate::rotation::{cardano_matrix, decompose_cardano, Angles, Decomposition, Rot3};
use crate::verify::{run_suite, Suite, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;
pub const EXIT_DECOMPOSE: i32 = 4;
pub const EXIT_REGION: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "padic-so3", version, about = "Exact arithmetic on the p-adic rotation group SO(3)_p")]
pub struct Cli {
    /// Odd prime p.
    #[arg(long, global = true, default_value_t = 3)]
    prime: i128,

    /// p-adic digits for Hensel lifts and sampled expansions.
    #[arg(long, global = true, default_value_t = 32)]
    precision: u32,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Square class of a nonzero rational in Q_p.
    Classify { x: String },
    /// Rotation matrix of nautical angles `alpha,beta,gamma` (`inf` allowed).
    Rotate { angles: String },
    /// Product of two rotation matrices given as JSON (`-` reads stdin).
    Compose { left: String, right: String },
    /// Nautical angles of a rotation matrix given as JSON (`-` reads stdin).
    Decompose {
        #[arg(default_value = "-")]
        matrix: String,
    },
    /// Haar measure: masses, integrals and samples.
    #[command(subcommand)]
    Haar(HaarCommand),
    /// Run randomized identity suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Debug, Subcommand)]
enum HaarCommand {
    /// Total mass of `so3` or `so2:<d>` with d in -v, p, up, -p/v.
    Mass {
        #[arg(long)]
        group: String,
    },
    /// Mass of a region; `so3` takes one `--region` per angle.
    Integrate(IntegrateArgs),
    /// Draw Haar-distributed angles as `alpha,beta,gamma` rows.
    Sample {
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Also print each rotation matrix.
        #[arg(long)]
        matrices: bool,
    },
}

#[derive(Debug, Args)]
struct IntegrateArgs {
    #[arg(long)]
    group: String,
    /// Pieces `ball:c,k`, `shell:k`, `zp`, `tail:k` or `all`, comma separated.
    #[arg(long = "region", required = true)]
    regions: Vec<String>,
    /// Divide by the total mass of the group.
    #[arg(long)]
    normalized: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Algebra,
    Iso,
    Jacobian,
    Measure,
    Invariance,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Algebra => Suite::Algebra,
            SuiteArg::Iso => Suite::Iso,
            SuiteArg::Jacobian => Suite::Jacobian,
            SuiteArg::Measure => Suite::Measure,
            SuiteArg::Invariance => Suite::Invariance,
            SuiteArg::All => Suite::All,
        }
    }
}

/// A failed command: exit code and message for stderr.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotInGroup(_) => EXIT_CERTIFICATE,
            Error::NoConsistentBranch(_) | Error::PrecisionExhausted | Error::SingularLocus => {
                EXIT_DECOMPOSE
            }
            Error::MalformedRegion(_) => EXIT_REGION,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    format: Format,
}

impl Io<'_> {
    /// Prints `text` or the JSON object `value` (with the schema tag added).
    fn emit(&mut self, text: &str, mut value: Value) -> Result<(), Failure> {
        let line = match self.format {
            Format::Text => text.to_string(),
            Format::Json => {
                value["schema"] = json!(1);
                value.to_string()
            }
        };
        writeln!(self.out, "{line}").map_err(|e| input_error(format!("write failed: {e}")))
    }

    fn read_source(&mut self, source: &str) -> Result<String, Failure> {
        if source == "-" {
            let mut buf = String::new();
            self.stdin
                .read_to_string(&mut buf)
                .map_err(|e| input_error(format!("cannot read stdin: {e}")))?;
            Ok(buf)
        } else {
            Ok(source.to_string())
        }
    }
}

/// Parses the arguments and runs one command, returning the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return if code == 0 { EXIT_OK } else { EXIT_INPUT };
        }
    };
    let mut io = Io {
        stdin,
        out: stdout,
        format: cli.format,
    };
    match execute(&cli, &mut io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, io: &mut Io<'_>) -> Result<i32, Failure> {
    let ctx = PrimeCtx::from_signed(cli.prime)?;
    if cli.precision < 4 {
        return Err(input_error("--precision must be at least 4"));
    }
    if cli.threads == 0 {
        return Err(input_error("--threads must be positive"));
    }
    let p = ctx.p().to_string();
    match &cli.command {
        Command::Classify { x } => {
            let x = parse_rational(x)?;
            let class = ctx.square_class(&x)?;
            io.emit(
                class.name(),
                json!({ "prime": p, "input": format_rational(&x), "class": class.name() }),
            )?;
        }
        Command::Rotate { angles } => {
            let angles: Angles = angles.parse()?;
            let r = cardano_matrix(&ctx, &angles);
            io.emit(
                &r.to_json().to_string(),
                json!({ "prime": p, "angles": angles_json(&angles), "matrix": r.to_json() }),
            )?;
        }
        Command::Compose { left, right } => {
            if left == "-" && right == "-" {
                return Err(input_error("only one matrix can come from stdin"));
            }
            let a = read_rotation(&ctx, io, left)?;
            let b = read_rotation(&ctx, io, right)?;
            let r = a.compose(&b)?;
            io.emit(
                &r.to_json().to_string(),
                json!({ "prime": p, "matrix": r.to_json() }),
            )?;
        }
        Command::Decompose { matrix } => {
            let r = read_rotation(&ctx, io, matrix)?;
            match decompose_cardano(&r, cli.precision)? {
                Decomposition::Exact(a) => io.emit(
                    &a.to_string(),
                    json!({ "prime": p, "exact": true, "angles": angles_json(&a) }),
                )?,
                Decomposition::Approx(a) => {
                    let parts: Vec<String> = a
                        .as_array()
                        .iter()
                        .map(|x| match x {
                            ProjPoint::Finite(x) => x.to_string(),
                            ProjPoint::Infinity => "inf".to_string(),
                        })
                        .collect();
                    io.emit(
                        &a.to_string(),
                        json!({ "prime": p, "exact": false, "angles": parts }),
                    )?
                }
            }
        }
        Command::Haar(cmd) => haar(&ctx, cli, cmd, io)?,
        Command::Verify { suite, samples } => {
            let cfg = VerifyConfig {
                samples: *samples,
                precision: cli.precision,
                seed: cli.seed,
                threads: cli.threads,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let checks = run_suite(&ctx, (*suite).into(), &cfg, &mut rng);
            let failed = checks.iter().filter(|c| !c.passed()).count();
            let text: Vec<String> = checks.iter().map(|c| c.to_string()).collect();
            let list: Vec<Value> = checks
                .iter()
                .map(|c| json!({ "name": c.name, "cases": c.cases, "passed": c.passed(), "counterexample": c.counterexample }))
                .collect();
            io.emit(
                &format!("{}\n{} passed, {} failed", text.join("\n"), checks.len() - failed, failed),
                json!({ "prime": p, "checks": list, "failed": failed }),
            )?;
            if failed > 0 {
                return Ok(EXIT_VERIFY);
            }
        }
    }
    Ok(EXIT_OK)
}

fn haar(ctx: &PrimeCtx, cli: &Cli, cmd: &HaarCommand, io: &mut Io<'_>) -> Result<(), Failure> {
    let p = ctx.p().to_string();
    match cmd {
        HaarCommand::Mass { group } => {
            let group: GroupTag = group.parse()?;
            let mass = format_rational(&total_mass(ctx, group));
            io.emit(&mass, json!({ "prime": p, "group": group.to_string(), "mass": mass }))
        }
        HaarCommand::Integrate(args) => {
            let group: GroupTag = args.group.parse()?;
            let regions = args
                .regions
                .iter()
                .map(|r| RegionQp::parse(ctx, r))
                .collect::<Result<Vec<_>, _>>()?;
            let mass = match (group, regions.as_slice()) {
                (GroupTag::So2(d), [r]) => {
                    let m = integrate_so2(ctx, d, r);
                    if args.normalized {
                        m / total_mass(ctx, group)
                    } else {
                        m
                    }
                }
                (GroupTag::So3, [a, b, c]) => integrate_so3(ctx, [a, b, c], args.normalized),
                (GroupTag::So2(_), _) => {
                    return Err(Error::MalformedRegion("so2 takes exactly one --region".into()).into())
                }
                (GroupTag::So3, _) => {
                    return Err(Error::MalformedRegion(
                        "so3 takes three --region flags, one per angle".into(),
                    )
                    .into())
                }
            };
            let mass = format_rational(&mass);
            let region_strs: Vec<String> = regions.iter().map(|r| r.to_string()).collect();
            io.emit(
                &mass,
                json!({
                    "prime": p,
                    "group": group.to_string(),
                    "regions": region_strs,
                    "normalized": args.normalized,
                    "mass": mass,
                }),
            )
        }
        HaarCommand::Sample { count, matrices } => {
            let draws = sample_batch(ctx, cli.precision, *count, cli.seed, cli.threads);
            let mut lines = Vec::with_capacity(draws.len());
            let mut list = Vec::with_capacity(draws.len());
            for (angles, r) in &draws {
                if *matrices {
                    lines.push(format!("{angles}\t{}", r.to_json()));
                    list.push(json!({ "angles": angles_json(angles), "matrix": r.to_json() }));
                } else {
                    lines.push(angles.to_string());
                    list.push(json!({ "angles": angles_json(angles) }));
                }
            }
            io.emit(
                &lines.join("\n"),
                json!({ "prime": p, "seed": cli.seed.to_string(), "samples": list }),
            )
        }
    }
}

fn angles_json(a: &Angles) -> Value {
    json!(a.as_array().map(format_proj))
}

/// Accepts a bare 3x3 JSON array or an object with a `matrix` field.
fn read_rotation(ctx: &PrimeCtx, io: &mut Io<'_>, source: &str) -> Result<Rot3, Failure> {
    let text = io.read_source(source)?;
    let value: Value = serde_json::from_str(text.trim())
        .map_err(|e| input_error(format!("invalid matrix JSON: {e}")))?;
    let value = match value.get("matrix") {
        Some(m) => m.clone(),
        None => value,
    };
    Ok(Rot3::certify(ctx, Mat::from_json(&value)?)?)
}
