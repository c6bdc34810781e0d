use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use isvariant::export::{Exportable, Format};
use isvariant::isolated::{classify_completely_isolated_with, classify_isolated_with};
use isvariant::nilpotent::maximal_nilpotents_with;
use isvariant::verify::{run_all, run_verify, Status, TheoremId, VerificationReport, VerifyOptions};
use isvariant::{Limits, Result, SandwichContext};

#[derive(Parser)]
#[command(
    name = "isvariant",
    version,
    about = "Exact computation in variants of the symmetric inverse semigroup"
)]
struct Cli {
    #[command(flatten)]
    bounds: Bounds,
    #[command(subcommand)]
    command: Command,
}

/// Overrides for the refusal bounds; each override prints a warning.
#[derive(Args)]
struct Bounds {
    /// Largest n for element-level scans
    #[arg(long, global = true)]
    max_n: Option<usize>,
    /// Largest n for exhaustive pair and relation enumerations
    #[arg(long, global = true)]
    max_pair_n: Option<usize>,
    /// Largest n for powerset scans
    #[arg(long, global = true)]
    max_powerset_n: Option<usize>,
    /// Largest n for the permutation witness search
    #[arg(long, global = true)]
    max_perm_n: Option<usize>,
    /// Largest semigroup handed to the isomorphism search
    #[arg(long, global = true)]
    max_iso_size: Option<usize>,
}

impl Bounds {
    fn limits(&self) -> Limits {
        let mut limits = Limits::from_env();
        let overrides = [
            ("--max-n", self.max_n, &mut limits.max_n),
            ("--max-pair-n", self.max_pair_n, &mut limits.max_pair_n),
            ("--max-powerset-n", self.max_powerset_n, &mut limits.max_powerset_n),
            ("--max-perm-n", self.max_perm_n, &mut limits.max_perm_n),
            ("--max-iso-size", self.max_iso_size, &mut limits.max_iso_size),
        ];
        for (flag, value, slot) in overrides {
            if let Some(v) = value {
                if v != *slot {
                    eprintln!(
                        "warning: {flag} overrides the bound {} with {v}; runtime may grow sharply",
                        *slot
                    );
                }
                *slot = v;
            }
        }
        limits
    }
}

#[derive(Args)]
struct ContextArgs {
    /// Carrier size
    #[arg(long)]
    n: usize,
    /// Domain of the sandwich idempotent, comma separated
    #[arg(long = "A", value_delimiter = ',', required = true)]
    a: Vec<usize>,
    /// Spare point outside A (defaults to the least one)
    #[arg(long)]
    z: Option<usize>,
}

impl ContextArgs {
    fn context(&self) -> Result<SandwichContext> {
        let ctx = SandwichContext::new(self.n, &self.a)?;
        match self.z {
            Some(z) => ctx.with_z(z),
            None => Ok(ctx),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run registered checks and report pass, fail or bounded-pass
    #[command(group(ArgGroup::new("which").required(true).args(["all", "theorem"])))]
    Verify {
        #[arg(long)]
        all: bool,
        #[arg(long)]
        theorem: Option<String>,
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
        /// Seed for sampled checks
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Random pairs for sampled checks
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// List the isolated or completely isolated subsemigroups
    Classify {
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        json: bool,
    },
    /// Nilpotent subsemigroups
    Nilpotent {
        #[command(subcommand)]
        command: NilCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Isolated,
    CompletelyIsolated,
}

#[derive(Subcommand)]
enum NilCommand {
    /// The maximal nilpotent subsemigroups of degree k
    Max {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with = "dot")]
        json: bool,
        #[arg(long)]
        dot: bool,
    },
}

fn print_reports(reports: &[VerificationReport], format: Option<Format>) -> Result<()> {
    match format {
        Some(f) => print!("{}", reports.export(f)?),
        None => {
            for r in reports {
                let extra = r
                    .bound
                    .as_deref()
                    .map(|b| format!(" [bound: {b}]"))
                    .or_else(|| r.counterexample.as_deref().map(|c| format!(" [counterexample: {c}]")))
                    .unwrap_or_default();
                println!(
                    "{:<22} n={} A={:?} {:<12} {} ms  {}{extra}",
                    r.theorem_id.as_str(),
                    r.n,
                    r.a,
                    r.status.as_str(),
                    r.wall_ms,
                    r.detail
                );
            }
        }
    }
    if format == Some(Format::Json) {
        println!();
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let limits = cli.bounds.limits();
    match cli.command {
        Command::Verify {
            all,
            theorem,
            ctx,
            json,
            csv,
            seed,
            samples,
        } => {
            let ctx = ctx.context()?;
            let opts = VerifyOptions { limits, seed, samples };
            let format = if json {
                Some(Format::Json)
            } else if csv {
                Some(Format::Csv)
            } else {
                None
            };
            let reports = if all {
                let mut reports = Vec::new();
                for (id, result) in run_all(&ctx, &opts) {
                    match result {
                        Ok(r) => reports.push(r),
                        Err(e) => eprintln!("skipped {id}: {e}"),
                    }
                }
                reports
            } else {
                let id: TheoremId = theorem.expect("group requires one").parse()?;
                vec![run_verify(id, &ctx, &opts)?]
            };
            print_reports(&reports, format)?;
            let failed = reports.iter().any(|r| r.status == Status::Fail);
            Ok(if failed { ExitCode::FAILURE } else { ExitCode::SUCCESS })
        }
        Command::Classify { kind, ctx, json } => {
            let ctx = ctx.context()?;
            let list = match kind {
                Kind::Isolated => classify_isolated_with(&ctx, &limits)?,
                Kind::CompletelyIsolated => classify_completely_isolated_with(&ctx, &limits)?,
            };
            if json {
                println!("{}", list.export(Format::Json)?);
            } else {
                for s in &list {
                    println!("{:<12} {}", s.name.to_string(), s.semigroup.len());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Nilpotent {
            command: NilCommand::Max { ctx, k, json, dot },
        } => {
            let ctx = ctx.context()?;
            let ts = maximal_nilpotents_with(&ctx, k, &limits)?;
            if json {
                println!("{}", ts.export(Format::Json)?);
            } else if dot {
                print!("{}", ts.export(Format::Dot)?);
            } else {
                for t in &ts {
                    println!(
                        "{}  type {}  size {}  degree {}",
                        t.partition, t.type_vector, t.size, t.degree
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
