use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gq_core::dsl::{self, DslError, Options, EXIT_SEMANTIC};

#[derive(Parser)]
#[command(name = "gq", version, about = "Verify graded-manifold identities from a script")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every command in the script and print a report.
    Run {
        /// Script path, or `-` for stdin.
        script: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        emit: Emit,
        /// Leave timings out of the report.
        #[arg(long)]
        no_timing: bool,
    },
    /// Parse and elaborate only.
    Check { script: PathBuf },
    /// Print the script in canonical form.
    Fmt { script: PathBuf },
}

fn read(path: &Path) -> std::io::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn label(path: &Path) -> String {
    if path == Path::new("-") {
        "<stdin>".into()
    } else {
        path.display().to_string()
    }
}

fn fail(path: &Path, e: DslError) -> ExitCode {
    eprintln!("{}:{e}", label(path));
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let path = match &cli.cmd {
        Cmd::Run { script, .. } | Cmd::Check { script } | Cmd::Fmt { script } => script.clone(),
    };
    let src = match read(&path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}: {e}", label(&path));
            return ExitCode::from(EXIT_SEMANTIC as u8);
        }
    };
    let script = match dsl::parse(&src) {
        Ok(s) => s,
        Err(e) => return fail(&path, e.into()),
    };
    let base_dir = if path == Path::new("-") { None } else { path.parent().map(Path::to_path_buf) };
    match cli.cmd {
        Cmd::Fmt { .. } => {
            print!("{}", dsl::format_script(&script));
            ExitCode::SUCCESS
        }
        Cmd::Check { .. } => match dsl::elaborate(&script, &Options { base_dir, timing: false }) {
            Ok(env) => {
                println!("ok: {} names, {} commands", env.len(), script.commands());
                ExitCode::SUCCESS
            }
            Err(e) => fail(&path, e.into()),
        },
        Cmd::Run { emit, no_timing, .. } => match dsl::run(&script, &Options { base_dir, timing: !no_timing }) {
            Ok(report) => {
                match emit {
                    Emit::Text => print!("{}", report.to_text()),
                    Emit::Json => println!("{}", report.to_json()),
                }
                ExitCode::from(report.exit_code() as u8)
            }
            Err(e) => fail(&path, e.into()),
        },
    }
}
