//! `dkcheck`: checks `.dk` files in order and normalizes terms.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dkinterop::casestudy::CorpusManifest;
use dkinterop::{print_term, Session, SessionError, DEFAULT_FUEL};

#[derive(Parser)]
#[command(name = "dkcheck", about = "Type checker for the lambda-Pi calculus modulo rewriting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Admit files in order into one signature and run their commands.
    Check(Inputs),
    /// Print the strong normal form of a term in the signature built from
    /// the inputs.
    Eval {
        /// Term with fully qualified names.
        term: String,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Print the version.
    Version,
}

#[derive(Args)]
struct Inputs {
    /// Files to check, in order. Checked after the manifest's files.
    files: Vec<PathBuf>,
    /// Manifest listing files relative to its own directory.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Reduction step budget per item.
    #[arg(long, env = "DKCHECK_FUEL", default_value_t = DEFAULT_FUEL)]
    fuel: u64,
    /// Print terms in errors as written instead of in weak-head normal form.
    #[arg(long)]
    raw_errors: bool,
    /// Declare the interpreted HOL symbols static when loading `hol.dk`.
    #[arg(long)]
    standalone_hol: bool,
    /// Module name for a single input file instead of its file stem.
    #[arg(long)]
    module: Option<String>,
}

enum Failure {
    Session(SessionError),
    Config(String),
}

impl From<SessionError> for Failure {
    fn from(e: SessionError) -> Self {
        Failure::Session(e)
    }
}

fn configure(inputs: &Inputs) -> Result<Session, Failure> {
    if inputs.fuel == 0 {
        return Err(Failure::Config("fuel budget must be positive".into()));
    }
    if inputs.module.is_some() && (inputs.files.len() != 1 || inputs.manifest.is_some()) {
        return Err(Failure::Config(
            "--module needs exactly one input file and no manifest".into(),
        ));
    }
    Ok(Session::new(inputs.fuel).standalone_hol(inputs.standalone_hol))
}

fn build(inputs: &Inputs, session: &mut Session) -> Result<(), Failure> {
    if let Some(path) = &inputs.manifest {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| SessionError::Io {
            path: shown.clone(),
            source,
        })?;
        let manifest = CorpusManifest::parse(&text).map_err(|error| SessionError::Manifest { file: shown, error })?;
        let dir = path.parent().unwrap_or(Path::new("."));
        session.run_manifest(&manifest, Some(dir))?;
    }
    for file in &inputs.files {
        match &inputs.module {
            Some(module) => {
                let shown = file.display().to_string();
                let text = std::fs::read(file).map_err(|source| SessionError::Io {
                    path: shown.clone(),
                    source,
                })?;
                session.admit_source_as(&shown, module, &text)?;
            }
            None => {
                session.admit_path(file)?;
            }
        }
    }
    Ok(())
}

fn report(session: &Session) {
    for line in session.report() {
        println!("{line}");
    }
}

fn fail(failure: Failure, raw: bool) -> ExitCode {
    match failure {
        Failure::Session(e) => {
            eprintln!("error: {}", e.render(raw));
            ExitCode::from(e.exit_code() as u8)
        }
        Failure::Config(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Version => {
            println!("dkcheck {}", env!("CARGO_PKG_VERSION"));
            ExitCode::SUCCESS
        }
        Command::Check(inputs) => {
            let mut session = match configure(&inputs) {
                Ok(s) => s,
                Err(f) => return fail(f, inputs.raw_errors),
            };
            let result = build(&inputs, &mut session);
            report(&session);
            match result {
                Ok(()) => {
                    println!("all files accepted");
                    ExitCode::SUCCESS
                }
                Err(f) => fail(f, inputs.raw_errors),
            }
        }
        Command::Eval { term, inputs } => {
            let mut session = match configure(&inputs) {
                Ok(s) => s,
                Err(f) => return fail(f, inputs.raw_errors),
            };
            if let Err(f) = build(&inputs, &mut session) {
                report(&session);
                return fail(f, inputs.raw_errors);
            }
            match session.eval_text(&term) {
                Ok(ev) => {
                    println!("{}", print_term(&ev.normal_form));
                    if let Some(q) = ev.stuck_head {
                        println!("STUCK-HEAD: {q}");
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(Failure::Session(e), inputs.raw_errors),
            }
        }
    }
}
