//! `fragments`: batch front end for the fragment toolkit.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 usage or input error,
//! 3 resource limit, 4 an internal self-check failed.

mod commands;
mod report;
mod structure;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fragments_core::normal::DEFAULT_SIZE_GUARD;

use crate::commands::{CliError, Exit};
use crate::report::Report;

#[derive(Parser, Debug)]
#[command(name = "fragments", version, about = "Classify, transform and decide first-order sentences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Largest domain size searched by finite-model commands.
    #[arg(long, global = true, default_value_t = 4)]
    pub max_size: usize,
    /// Kept-clause cap of the resolution prover.
    #[arg(long, global = true, default_value_t = 50_000)]
    pub clause_cap: usize,
    /// Herbrand term depth cap for monadic model search.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Clause-count guard for CNF and DNF conversions.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_GUARD)]
    pub size_guard: usize,
    /// Include intermediate stages in the report.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Leave timings out of the report.
    #[arg(long, global = true)]
    pub no_timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DecideMethod {
    /// Complete procedure for BSR and GBSR, bounded search otherwise.
    Auto,
    /// Complete small-model procedure; the sentence must be BSR.
    Bsr,
    /// Search sizes `1..=max-size`.
    Bounded,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report fragment membership and the analyses behind it.
    Classify { input: String },
    /// Rewrite a GBSR sentence into an equivalent BSR sentence.
    ToBsr { input: String },
    /// Rewrite a GAF sentence so that no universal is nested.
    ToUnnested { input: String },
    /// Skolemize a sentence.
    Skolemize { input: String },
    /// Check the flat-term shape of the Skolemized sentence.
    CheckShape { input: String },
    /// Monadize a GAF sentence (or one already without nested universals).
    ToMonadic { input: String },
    /// Decide satisfiability.
    Decide {
        input: String,
        #[arg(long, value_enum, default_value_t = DecideMethod::Auto)]
        fragment: DecideMethod,
    },
    /// Compare two sentences on all structures up to `--max-size`.
    CheckEquiv { first: String, second: String },
    /// Shrink a model of a GBSR sentence.
    Shrink { model: String, sentence: String },
    /// Compute an interpolant of two entailing (G)BSR sentences.
    Interpolate { phi: String, psi: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::ToBsr { .. } => "to-bsr",
            Command::ToUnnested { .. } => "to-unnested",
            Command::Skolemize { .. } => "skolemize",
            Command::CheckShape { .. } => "check-shape",
            Command::ToMonadic { .. } => "to-monadic",
            Command::Decide { .. } => "decide",
            Command::CheckEquiv { .. } => "check-equiv",
            Command::Shrink { .. } => "shrink",
            Command::Interpolate { .. } => "interpolate",
        }
    }

    fn inputs(&self) -> Vec<String> {
        match self {
            Command::Classify { input }
            | Command::ToBsr { input }
            | Command::ToUnnested { input }
            | Command::Skolemize { input }
            | Command::CheckShape { input }
            | Command::ToMonadic { input }
            | Command::Decide { input, .. } => vec![input.clone()],
            Command::CheckEquiv { first, second } => vec![first.clone(), second.clone()],
            Command::Shrink { model, sentence } => vec![model.clone(), sentence.clone()],
            Command::Interpolate { phi, psi } => vec![phi.clone(), psi.clone()],
        }
    }
}

fn run(command: &Command, opts: &Options, report: &mut Report) -> Result<Exit, CliError> {
    match command {
        Command::Classify { input } => commands::classify(input, report),
        Command::ToBsr { input } => commands::to_bsr(input, opts, report),
        Command::ToUnnested { input } => commands::to_unnested(input, opts, report),
        Command::Skolemize { input } => commands::skolemize(input, report),
        Command::CheckShape { input } => commands::check_shape(input, report),
        Command::ToMonadic { input } => commands::to_monadic(input, opts, report),
        Command::Decide { input, fragment } => commands::decide(input, *fragment, opts, report),
        Command::CheckEquiv { first, second } => commands::check_equiv(first, second, opts, report),
        Command::Shrink { model, sentence } => commands::shrink(model, sentence, report),
        Command::Interpolate { phi, psi } => commands::interpolate(phi, psi, opts, report),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut report = Report::new(cli.command.name(), &cli.command.inputs());
    let start = Instant::now();
    let result = run(&cli.command, &cli.options, &mut report);
    if cli.options.no_timings {
        report.timings.clear();
    } else {
        report.timings.insert("total".into(), (start.elapsed().as_millis() as u64).into());
    }
    let code = match &result {
        Ok(Exit::Success) => 0,
        Ok(Exit::Negative) => 1,
        Err(e) => {
            report.set("error", e.to_string());
            e.exit_code()
        }
    };
    if cli.options.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
        if let Err(e) = &result {
            eprintln!("error: {e}");
        }
    }
    ExitCode::from(code)
}
