//! Command-line front end. Exit codes: 0 success, 1 logical failure
//! (unsatisfiable, no configuration, invalid saved configuration), 2 usage,
//! I/O or parse error.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use configforge_core::{
    explain_conflict, generate_config_h, generate_config_mk, parse_deps, to_dot,
    violated_statements, Assignment, CompleteSolver, DepsModel, Engine, NodeStatus, Session,
    Verdict,
};

use crate::config_file::parse_config;

#[derive(Debug, Parser)]
#[command(name = "configforge", version, about = "Static configuration from `deps` models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that the model (with optional enforcements) has a correct configuration
    Check {
        deps: PathBuf,
        /// Enforce an option, e.g. `--set sched=1`
        #[arg(long = "set", value_name = "NAME=0|1")]
        set: Vec<String>,
    },
    /// Print enforced, implied and free options
    Solve {
        deps: PathBuf,
        #[arg(long = "set", value_name = "NAME=0|1")]
        set: Vec<String>,
        #[arg(long, default_value = "complete", value_parser = parse_engine)]
        engine: Engine,
    },
    /// List correct configurations in lexicographic order
    Enumerate {
        deps: PathBuf,
        #[arg(long = "set", value_name = "NAME=0|1")]
        set: Vec<String>,
        /// Stop after this many configurations
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Write config.h and config.mk from a saved configuration
    Generate {
        deps: PathBuf,
        config: PathBuf,
        #[arg(long, short = 'o', default_value = ".")]
        out_dir: PathBuf,
    },
    /// Print the model as a Graphviz digraph colored by status
    ExportDot {
        deps: PathBuf,
        #[arg(long = "set", value_name = "NAME=0|1")]
        set: Vec<String>,
        #[arg(long, default_value = "complete", value_parser = parse_engine)]
        engine: Engine,
    },
    /// Serve an interactive session over HTTP
    Serve {
        deps: PathBuf,
        #[arg(long, env = "CONFIGFORGE_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        #[arg(long, default_value = "complete", value_parser = parse_engine)]
        engine: Engine,
        /// Directory holding the web UI bundle
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
}

fn parse_engine(s: &str) -> Result<Engine, String> {
    s.parse().map_err(|e: configforge_core::inference::UnknownEngine| e.to_string())
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable files, malformed models: exit 2.
    Usage(String),
    /// The inputs are well-formed but the answer is negative: exit 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                2
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {}", path.display(), e)))
}

fn load(path: &Path) -> Result<DepsModel, CliError> {
    parse_deps(&read(path)?).map_err(|e| CliError::Usage(format!("{}:{}", path.display(), e)))
}

fn assignment(model: &DepsModel, set: &[String]) -> Result<Assignment, CliError> {
    let mut a = Assignment::new();
    for s in set {
        let bad = || CliError::Usage(format!("`--set {}`: expected NAME=0 or NAME=1", s));
        let (name, bit) = s.rsplit_once('=').ok_or_else(bad)?;
        let value = match bit {
            "0" => false,
            "1" => true,
            _ => return Err(bad()),
        };
        let id = model
            .lookup(name)
            .ok_or_else(|| CliError::Usage(format!("unknown option `{}`", name)))?;
        a.set(id, Some(value));
    }
    Ok(a)
}

fn io(e: std::io::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn session(model: DepsModel, set: &[String], engine: Engine) -> Result<Session, CliError> {
    let a = assignment(&model, set)?;
    let mut s = Session::with_engine(model, engine);
    s.set_assignment(a).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(s)
}

fn describe_conflict(model: &DepsModel, a: &Assignment, out: &mut dyn Write) -> Result<(), CliError> {
    match explain_conflict(model, a) {
        Ok(Some(c)) => {
            writeln!(out, "conflict:").map_err(io)?;
            for i in c.statements {
                writeln!(out, "  {}", model.statements()[i].display(model)).map_err(io)?;
            }
            for (id, v) in c.enforced {
                writeln!(out, "  {}={}", model.name(id), v as u8).map_err(io)?;
            }
        }
        Ok(None) => {}
        Err(e) => writeln!(out, "conflict: not minimized ({})", e).map_err(io)?,
    }
    Ok(())
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Check { deps, set } => {
            let model = load(&deps)?;
            let a = assignment(&model, &set)?;
            match CompleteSolver::for_model(&model).is_satisfiable(&a) {
                Ok(Some(_)) => {
                    writeln!(
                        out,
                        "ok: {} options, {} statements, {} interfaces",
                        model.len(),
                        model.logical_statement_count(),
                        model.interfaces().count()
                    )
                    .map_err(io)?;
                    Ok(())
                }
                Ok(None) => {
                    writeln!(out, "unsatisfiable").map_err(io)?;
                    describe_conflict(&model, &a, out)?;
                    Err(CliError::Failed("no correct configuration".into()))
                }
                Err(e) => Err(CliError::Failed(e.to_string())),
            }
        }
        Command::Solve { deps, set, engine } => {
            let s = session(load(&deps)?, &set, engine)?;
            let model = s.model();
            let list = |pred: &dyn Fn(NodeStatus) -> bool| -> String {
                model
                    .options()
                    .filter(|id| pred(s.status(*id)))
                    .map(|id| format!(" {}", model.name(id)))
                    .collect()
            };
            let enforced: String = s
                .assignment()
                .iter()
                .map(|(id, v)| format!(" {}={}", model.name(id), v as u8))
                .collect();
            let verdict = s.last_result().verdict;
            writeln!(out, "engine: {}", s.engine()).map_err(io)?;
            writeln!(out, "verdict: {}", verdict).map_err(io)?;
            writeln!(out, "enforced:{}", enforced).map_err(io)?;
            writeln!(out, "implied_true:{}", list(&|st| st == NodeStatus::ImpliedTrue)).map_err(io)?;
            writeln!(out, "implied_false:{}", list(&|st| st == NodeStatus::ImpliedFalse)).map_err(io)?;
            writeln!(out, "free:{}", list(&|st| st == NodeStatus::Normal)).map_err(io)?;
            if s.last_result().limit_hit {
                writeln!(out, "note: resource limit reached, implied sets are partial").map_err(io)?;
            }
            if verdict == Verdict::Unsatisfiable {
                describe_conflict(model, s.assignment(), out)?;
                return Err(CliError::Failed("enforced options conflict".into()));
            }
            Ok(())
        }
        Command::Enumerate { deps, set, limit } => {
            let model = load(&deps)?;
            let a = assignment(&model, &set)?;
            let all = CompleteSolver::for_model(&model)
                .enumerate(&a, limit.unwrap_or(usize::MAX))
                .map_err(|e| CliError::Failed(e.to_string()))?;
            for v in &all {
                let row: Vec<String> = model
                    .options()
                    .map(|id| format!("{}={}", model.name(id), v.get(id) as u8))
                    .collect();
                writeln!(out, "{}", row.join(",")).map_err(io)?;
            }
            writeln!(out, "# total: {}", all.len()).map_err(io)?;
            if all.is_empty() {
                return Err(CliError::Failed("no correct configuration".into()));
            }
            Ok(())
        }
        Command::Generate {
            deps,
            config,
            out_dir,
        } => {
            let model = load(&deps)?;
            let v = parse_config(&model, &read(&config)?)
                .map_err(|e| CliError::Failed(format!("{}: {}", config.display(), e)))?;
            let violated = violated_statements(&model, &v);
            if !violated.is_empty() {
                let mut msg = String::from("configuration violates:");
                for i in violated {
                    msg.push_str(&format!("\n  {}", model.statements()[i].display(&model)));
                }
                return Err(CliError::Failed(msg));
            }
            let h = generate_config_h(&model, &v).map_err(|e| CliError::Failed(e.to_string()))?;
            let mk = generate_config_mk(&model, &v).map_err(|e| CliError::Failed(e.to_string()))?;
            std::fs::create_dir_all(&out_dir).map_err(io)?;
            for (name, body) in [("config.h", h), ("config.mk", mk)] {
                let path = out_dir.join(name);
                std::fs::write(&path, body)
                    .map_err(|e| CliError::Usage(format!("cannot write {}: {}", path.display(), e)))?;
                writeln!(out, "wrote {}", path.display()).map_err(io)?;
            }
            Ok(())
        }
        Command::ExportDot { deps, set, engine } => {
            let s = session(load(&deps)?, &set, engine)?;
            out.write_all(to_dot(s.model(), s.statuses()).as_bytes()).map_err(io)
        }
        Command::Serve {
            deps,
            port,
            host,
            engine,
            ui_dir,
        } => {
            let s = Session::with_engine(load(&deps)?, engine);
            let addr = SocketAddr::new(host, port);
            let rt = tokio::runtime::Runtime::new().map_err(io)?;
            eprintln!("listening on http://{}", addr);
            rt.block_on(crate::server::serve(s, addr, ui_dir))
                .map_err(|e| CliError::Usage(format!("cannot serve on {}: {}", addr, e)))
        }
    }
}
