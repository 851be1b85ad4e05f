use std::io::Write;
use std::path::PathBuf;

use bsato_cli::{run, Command, Format, Options};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bsato", version, about = "Global and local Bernstein-Sato ideals over the rationals")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Global Bernstein-Sato ideal
    Global(Args),
    /// Local Bernstein-Sato ideal at a rational point
    Local(Args),
    /// Stratification of the base by local Bernstein-Sato ideal
    Stratify(Args),
    /// Compare the global ideal with the intersection of the local ones
    Check(Args),
}

#[derive(clap::Args)]
struct Args {
    /// Problem file: {"vars": [...], "polys": [...], "point": [...]}
    #[arg(long)]
    input: PathBuf,
    /// Point as comma-separated rationals, e.g. 0,1/2
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Run the consistency checks and report them
    #[arg(long)]
    verify: bool,
    /// Wall-clock budget in seconds
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

fn main() {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Global(a) => (Command::Global, a),
        Cmd::Local(a) => (Command::Local, a),
        Cmd::Stratify(a) => (Command::Stratify, a),
        Cmd::Check(a) => (Command::Check, a),
    };
    let opts = Options {
        input: Some(args.input),
        point: args.point,
        format: match args.format {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        },
        verify: args.verify,
        timeout: args.timeout,
    };
    let out = run(command, &opts);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.status);
}
