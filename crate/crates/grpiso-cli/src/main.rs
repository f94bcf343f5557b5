use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use grpiso::group::ORACLE_GUARD;
use grpiso_cli::{
    cmd_build, cmd_classify, cmd_codeq, cmd_corpus, cmd_iso, cmd_oracle, cmd_profile, format_cayley, read_corpus_spec,
    CliError, RunReport, Strategy,
};

#[derive(Parser)]
#[command(name = "grpiso", version, about = "Isomorphism testing for groups given by Cayley tables")]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Refuse oracle searches on groups larger than this.
    #[arg(long, global = true, default_value_t = ORACLE_GUARD)]
    guard_order: usize,
    /// Relabelling seed for `build`, sweep seed for `corpus`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether two tables define isomorphic groups.
    Iso {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value_t = Strategy::Auto)]
        strategy: Strategy,
    },
    /// List the classes a group belongs to.
    Classify { table: PathBuf },
    /// Write the table of a group descriptor such as `sl2(5)`.
    Build {
        descriptor: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate the test corpus and its manifest.
    Corpus {
        /// TOML file with corpus settings.
        spec: Option<PathBuf>,
        #[arg(short, long, default_value = "corpus")]
        out: PathBuf,
    },
    /// Brute-force isomorphism of two tables, or automorphism count of one.
    Oracle { first: PathBuf, second: Option<PathBuf> },
    /// Permutation equivalence of two linear codes.
    Codeq { first: PathBuf, second: PathBuf },
    /// Run `iso` under several worker counts and compare the counters.
    Profile {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value_t = Strategy::Auto)]
        strategy: Strategy,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 8])]
        workers: Vec<usize>,
    },
}

fn emit(r: &RunReport, json: bool) {
    if json {
        println!("{}", r.to_json());
    } else {
        print!("{}", r.to_text());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let guard = cli.guard_order;
    match cli.cmd {
        Cmd::Iso { first, second, strategy } => emit(&cmd_iso(&first, &second, strategy, guard)?, cli.json),
        Cmd::Classify { table } => emit(&cmd_classify(&table)?, cli.json),
        Cmd::Oracle { first, second } => emit(&cmd_oracle(&first, second.as_deref(), guard)?, cli.json),
        Cmd::Codeq { first, second } => emit(&cmd_codeq(&first, &second)?, cli.json),
        Cmd::Build { descriptor, output } => {
            let g = cmd_build(&descriptor, cli.seed)?;
            match output {
                Some(p) => std::fs::write(p, format_cayley(&g))?,
                None => print!("{}", format_cayley(&g)),
            }
        }
        Cmd::Corpus { spec, out } => {
            let mut spec = read_corpus_spec(spec.as_deref())?;
            if let Some(s) = cli.seed {
                spec.seed = s;
            }
            let m = cmd_corpus(&spec, &out)?;
            let known = m.pairs.iter().filter(|p| p.expected.is_some()).count();
            if cli.json {
                println!("{}", serde_json::json!({ "groups": m.groups.len(), "pairs": m.pairs.len(), "pairs_with_verdict": known }));
            } else {
                println!("{} groups, {} pairs ({} with oracle verdicts) in {}", m.groups.len(), m.pairs.len(), known, out.display());
            }
        }
        Cmd::Profile { first, second, strategy, workers } => {
            let r = cmd_profile(&first, &second, strategy, guard, &workers)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r).expect("profile serializes"));
            } else {
                for run in &r.runs {
                    println!(
                        "workers {:>2}: verdict {:?}, work {}, span {}, {:.1} ms",
                        run.workers, run.report.verdict, run.report.work, run.report.span, run.report.timings.decide_ms
                    );
                }
                println!("deterministic: {}", r.deterministic);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
