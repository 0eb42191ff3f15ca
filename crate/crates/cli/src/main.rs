//! `uniftest`: seeded experiments over the uniform-family intersectingness
//! testers, family file generation, and exact-oracle validation.
//!
//! Exit codes: 0 on success, 2 on validation or parse errors, 3 on budget
//! errors (oracle or matching limits).

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use uniftest_core::distance::DEFAULT_EDGE_BUDGET;
use uniftest_core::harness::{validate_instance_with_budget, write_report};
use uniftest_core::{
    dno_family, emit_report, full_family, junta_family, random_family, read_family, run_trials,
    star_family, write_family, Error, ExperimentConfig, ExplicitFamily, GeneratorSpec, Junta, Rat,
    ReportFormat, ReportRow, TesterKind,
};

#[derive(Parser)]
#[command(
    name = "uniftest",
    about = "Property testers for intersecting uniform set families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Budget(_) | Error::InsufficientMatching { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded batch of tester trials and emit a CSV/JSON report.
    Run(RunArgs),
    /// Classify a family file as far from or close to intersecting.
    Validate(ValidateArgs),
    /// Generate a family and write it in the family file format.
    Gen(GenArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    #[arg(long, value_parser = parse_tester)]
    tester: TesterKind,
    #[arg(long)]
    generator: String,
    /// Proximity parameter; a comma-separated list runs a grid, rows ordered
    /// by eps.
    #[arg(long)]
    eps: String,
    #[arg(long, value_parser = parse_rat)]
    eps1: Option<Rat>,
    #[arg(long, value_parser = parse_rat)]
    eps2: Option<Rat>,
    /// Explicit query budget; defaults to the tester's sample-size formula.
    #[arg(long)]
    m: Option<u64>,
    /// Exponent for the canonical sample-size formula (2 uses 12/eps).
    #[arg(long)]
    r: Option<u32>,
    /// Leading constant for the canonical formula at r >= 3.
    #[arg(long, value_parser = parse_rat)]
    c: Option<Rat>,
    /// Junta arity for the junta tester.
    #[arg(long)]
    j: Option<u32>,
    #[arg(long)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Certify every explicit instance with the exact oracle.
    #[arg(long)]
    validate: bool,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: ReportFormat,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    gen_opts: GeneratorOpts,
    #[arg(long, default_value_t = DEFAULT_EDGE_BUDGET)]
    edge_budget: u64,
}

#[derive(Args)]
struct GeneratorOpts {
    /// Star center element (star generator).
    #[arg(long, default_value_t = 1)]
    center: u32,
    /// Membership probability (random generator).
    #[arg(long, value_parser = parse_rat)]
    p: Option<Rat>,
    /// Family file path (file generator).
    #[arg(long)]
    family: Option<PathBuf>,
    /// Junta spec "coords : trace , trace", e.g. "1 2:1,1 2" for
    /// J={1,2}, S={{1},{1,2}}; "1 2:" is the empty trace family.
    #[arg(long)]
    junta_spec: Option<String>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    family: PathBuf,
    #[arg(long, value_parser = parse_rat)]
    eps: Rat,
    #[arg(long, default_value_t = DEFAULT_EDGE_BUDGET)]
    edge_budget: u64,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    generator: String,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Proximity parameter (dno generator).
    #[arg(long, value_parser = parse_rat)]
    eps: Option<Rat>,
    #[command(flatten)]
    gen_opts: GeneratorOpts,
    #[arg(long)]
    out: PathBuf,
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    Rat::from_str(s).map_err(|e| e.to_string())
}

fn parse_tester(s: &str) -> Result<TesterKind, String> {
    TesterKind::from_str(s).map_err(|e| e.to_string())
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    ReportFormat::from_str(s).map_err(|e| e.to_string())
}

fn parse_junta_spec(spec: &str) -> Result<Junta, Error> {
    let (coords, traces) = spec
        .split_once(':')
        .ok_or_else(|| Error::InvalidParameter("junta spec needs \"coords : traces\"".into()))?;
    let coords: Vec<u32> = coords
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::InvalidParameter(format!("bad junta coordinate {t:?}")))
        })
        .collect::<Result<_, _>>()?;
    let mut trace_sets = Vec::new();
    for part in traces.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let elems: Vec<u32> = part
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad trace element {t:?}")))
            })
            .collect::<Result<_, _>>()?;
        trace_sets.push(elems);
    }
    Junta::new(coords, &trace_sets)
}

fn generator_spec(name: &str, opts: &GeneratorOpts, eps: Rat) -> Result<GeneratorSpec, Error> {
    match name {
        "star" => Ok(GeneratorSpec::Star {
            center: opts.center,
        }),
        "full" => Ok(GeneratorSpec::Full),
        "dno" => Ok(GeneratorSpec::Dno { eps }),
        "random" => Ok(GeneratorSpec::Random {
            p: opts.p.unwrap_or(Rat::new(1, 2).expect("1/2")),
        }),
        "junta" => {
            let spec = opts.junta_spec.as_deref().ok_or_else(|| {
                Error::InvalidParameter("generator junta requires --junta-spec".into())
            })?;
            Ok(GeneratorSpec::Junta {
                junta: parse_junta_spec(spec)?,
            })
        }
        "file" => {
            let path = opts.family.clone().ok_or_else(|| {
                Error::InvalidParameter("generator file requires --family".into())
            })?;
            Ok(GeneratorSpec::File { path })
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown generator {other:?}"
        ))),
    }
}

fn dispatch(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run(args) => run(args),
        Command::Validate(args) => validate(args),
        Command::Gen(args) => gen(args),
    }
}

fn run(args: RunArgs) -> Result<(), Error> {
    let mut eps_grid: Vec<Rat> = args
        .eps
        .split(',')
        .map(|t| Rat::from_str(t.trim()))
        .collect::<Result<_, _>>()?;
    eps_grid.sort_by(|a, b| {
        (u128::from(a.num()) * u128::from(b.den()))
            .cmp(&(u128::from(b.num()) * u128::from(a.den())))
    });

    let mut rows = Vec::with_capacity(eps_grid.len());
    for eps in eps_grid {
        let generator = generator_spec(&args.generator, &args.gen_opts, eps)?;
        let mut cfg = ExperimentConfig::new(args.n, args.k, eps, args.tester, generator);
        cfg.eps1 = args.eps1;
        cfg.eps2 = args.eps2;
        cfg.m = args.m;
        cfg.r = args.r;
        cfg.c = args.c.map(|c| c.to_f64());
        cfg.j = args.j;
        cfg.trials = args.trials;
        cfg.seed = args.seed;
        cfg.validate = args.validate;
        cfg.edge_budget = args.edge_budget;
        let stats = run_trials(&cfg)?;
        rows.push(ReportRow::new(&cfg, &stats)?);
    }
    match &args.out {
        Some(path) => write_report(&rows, args.format, path)?,
        None => print!("{}", emit_report(&rows, args.format)),
    }
    Ok(())
}

fn validate(args: ValidateArgs) -> Result<(), Error> {
    let family = read_family(&args.family)?;
    let v = validate_instance_with_budget(&family, args.eps, args.edge_budget)?;
    let classification = if v.far { "far" } else { "close" };
    println!(
        "n={} k={} members={} distance={} eps={} classification={}",
        family.n(),
        family.k(),
        family.member_count(),
        v.distance,
        args.eps,
        classification
    );
    Ok(())
}

fn gen(args: GenArgs) -> Result<(), Error> {
    let family: ExplicitFamily = match args.generator.as_str() {
        "star" => star_family(args.n, args.k, args.gen_opts.center)?,
        "full" => full_family(args.n, args.k)?,
        "junta" => {
            let spec = args.gen_opts.junta_spec.as_deref().ok_or_else(|| {
                Error::InvalidParameter("generator junta requires --junta-spec".into())
            })?;
            junta_family(args.n, args.k, &parse_junta_spec(spec)?)?
        }
        "dno" => {
            let eps = args
                .eps
                .ok_or_else(|| Error::InvalidParameter("generator dno requires --eps".into()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            dno_family(args.n, args.k, eps, &mut rng)?
        }
        "random" => {
            let p = args.gen_opts.p.unwrap_or(Rat::new(1, 2).expect("1/2"));
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            random_family(args.n, args.k, p, &mut rng)?
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "gen supports star|full|junta|dno|random, got {other:?}"
            )))
        }
    };
    write_family(&family, &args.out)?;
    println!(
        "wrote {} members over ({}, {}) to {}",
        family.member_count(),
        family.n(),
        family.k(),
        args.out.display()
    );
    Ok(())
}
