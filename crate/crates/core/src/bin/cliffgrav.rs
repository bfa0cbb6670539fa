use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cliffgrav::config::{self, Overrides};
use cliffgrav::report::{self, Format};
use cliffgrav::{scenarios, suite, Error};

#[derive(Parser)]
#[command(name = "cliffgrav", version, about = "Identity verification for tetrad gravity on coframe fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity suite on one scenario.
    Verify(Box<VerifyArgs>),
    /// List built-in scenarios and their parameters.
    ListScenarios,
    /// List identity ids with default tolerances.
    ListIdentities,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// key = value configuration file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    scenario: Option<String>,
    /// Scenario parameter as name=value.
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
    /// CSV file with header x0,x1,x2,x3.
    #[arg(long, conflicts_with = "n_points")]
    points: Option<PathBuf>,
    #[arg(long)]
    n_points: Option<usize>,
    #[arg(long)]
    fd_step: Option<f64>,
    #[arg(long)]
    fd_order: Option<u32>,
    /// Graviton mass for the massive-variant identities.
    #[arg(long)]
    mass: Option<f64>,
    /// Tolerance override as identity_id=value.
    #[arg(long = "tol", value_name = "ID=VAL")]
    tolerances: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// json, csv or text.
    #[arg(long)]
    format: Option<String>,
}

fn overrides(a: &VerifyArgs) -> Result<Overrides, Error> {
    Ok(Overrides {
        scenario: a.scenario.clone(),
        params: a.params.iter().map(|s| config::parse_assignment(s)).collect::<Result<_, _>>()?,
        points: a.points.clone(),
        n_points: a.n_points,
        fd_step: a.fd_step,
        fd_order: a.fd_order,
        mass: a.mass,
        tolerances: a.tolerances.iter().map(|s| config::parse_assignment(s)).collect::<Result<_, _>>()?,
        out: a.out.clone(),
        format: a.format.as_deref().map(str::parse::<Format>).transpose()?,
    })
}

fn verify(a: &VerifyArgs) -> Result<bool, Error> {
    let file = match &a.config {
        Some(p) => Some(std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?),
        None => None,
    };
    let opts = config::resolve(file.as_deref(), &overrides(a)?)?;
    let rep = suite::run_suite(&opts.suite)?;
    let body = report::render(&rep, opts.format)?;
    match &opts.out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(rep.all_passed())
}

fn list_scenarios() {
    for s in scenarios::SCENARIOS {
        println!("{}  {}", s.name, s.summary);
        for p in s.params {
            println!("    {} (default {}; {})", p.name, p.default, p.range);
        }
    }
}

fn list_identities() {
    for i in suite::IDENTITIES {
        println!("{:<38} {:>8.1e}  {:<18} {}", i.id, i.tolerance, i.kind, i.statement);
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::ListScenarios => list_scenarios(),
        Command::ListIdentities => list_identities(),
        Command::Verify(a) => {
            return match verify(&a) {
                Ok(true) => ExitCode::SUCCESS,
                Ok(false) => ExitCode::from(1),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(config::exit_code(&e) as u8)
                }
            }
        }
    }
    ExitCode::SUCCESS
}
