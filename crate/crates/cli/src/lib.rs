//! herdq command line.
//!
//! [`run`] parses arguments (with an optional flat config file underneath
//! them), validates every field, runs the command on a worker pool of the
//! requested size and writes the data files followed by `manifest.json`.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{CommandFactory, FromArgMatches};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use args::{Cli, Command};
use error::{CliError, CliResult};

pub const VERSION: &str = match option_env!("HERDQ_GIT_DESCRIBE") {
    Some(v) => v,
    None => concat!("v", env!("CARGO_PKG_VERSION")),
};

pub const OUT_DIR_ENV: &str = "HERDQ_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "herdq-out";
pub const MANIFEST_NAME: &str = "manifest.json";

/// The clap command with per-subcommand settings applied.
pub fn command() -> clap::Command {
    let mut cmd = Cli::command();
    let names: Vec<String> = cmd.get_subcommands().map(|s| s.get_name().to_string()).collect();
    for name in names {
        cmd = cmd.mut_subcommand(name, |s| s.args_override_self(true).allow_negative_numbers(true));
    }
    cmd
}

/// Value of `--config`, if given, scanning the raw arguments.
fn config_path(argv: &[String]) -> Option<PathBuf> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Parse arguments, splicing config-file flags in front of the command
/// line ones so that the latter win.
pub fn parse_args(argv: Vec<String>) -> CliResult<Command> {
    let cmd = command();
    let mut argv = argv;
    if let Some(path) = config_path(&argv) {
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::usage(format!("cannot read config file {}: {e}", path.display())))?;
        let entries = config::parse_config(&text).map_err(CliError::Usage)?;
        let sub_name = argv.get(1).cloned().unwrap_or_default();
        let Some(sub) = cmd.find_subcommand(&sub_name) else {
            return Err(CliError::usage("a subcommand must come first when --config is used"));
        };
        let flags = config::to_flags(sub, &entries).map_err(CliError::Usage)?;
        argv.splice(2..2, flags);
    }
    let matches = cmd
        .try_get_matches_from(argv)
        .map_err(|e| CliError::Usage(vec![clap_message(&e)]))?;
    let cli = Cli::from_arg_matches(&matches).map_err(|e| CliError::Usage(vec![clap_message(&e)]))?;
    Ok(cli.command)
}

fn clap_message(e: &clap::Error) -> String {
    let text = e.to_string();
    let body: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    body.join("\n").trim_start_matches("error: ").to_string()
}

/// Where the files go: a directory, or for `generate` a single file.
enum Target {
    Dir(PathBuf),
    File(PathBuf),
}

impl Target {
    fn of(cmd: &Command) -> Self {
        let out = cmd.common().out.clone();
        let default_dir =
            || std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from(DEFAULT_OUT_DIR), PathBuf::from);
        match cmd {
            Command::Generate(_) => Target::File(out.unwrap_or_else(|| default_dir().join("graph.txt"))),
            _ => Target::Dir(out.unwrap_or_else(default_dir)),
        }
    }

    fn manifest_path(&self) -> PathBuf {
        match self {
            Target::Dir(d) => d.join(MANIFEST_NAME),
            Target::File(f) => {
                let mut name: OsString = f.file_name().map(OsString::from).unwrap_or_default();
                name.push(".");
                name.push(MANIFEST_NAME);
                f.with_file_name(name)
            }
        }
    }

    fn path_of(&self, name: &str) -> PathBuf {
        match self {
            Target::Dir(d) => d.join(name),
            Target::File(f) => f.clone(),
        }
    }

    fn prepare(&self) -> CliResult<()> {
        let dir = match self {
            Target::Dir(d) => d.as_path(),
            Target::File(f) => f
                .parent()
                .filter(|p| !p.as_os_str().is_empty())
                .unwrap_or(Path::new(".")),
        };
        fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))?;
        let manifest = self.manifest_path();
        if manifest.exists() {
            fs::remove_file(&manifest)?;
        }
        Ok(())
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn execute(cmd: &Command) -> CliResult<()> {
    commands::validate(cmd)?;
    let target = Target::of(cmd);
    target.prepare()?;
    let common = cmd.common();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.workers)
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let start = Instant::now();
    let output = pool.install(|| commands::dispatch(cmd))?;
    let mut files = Vec::new();
    for f in &output.files {
        let path = target.path_of(&f.name);
        fs::write(&path, &f.bytes).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
        let shown = match &target {
            Target::Dir(_) => f.name.clone(),
            Target::File(p) => p
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default(),
        };
        files.push(json!({"path": shown, "bytes": f.bytes.len(), "sha256": sha256_hex(&f.bytes)}));
    }
    for note in &output.notes {
        println!("{note}");
    }
    let mut manifest = json!({
        "tool": "herdq",
        "version": VERSION,
        "status": "ok",
        "command": cmd.name(),
        "config": cmd,
        "seed": common.seed,
        "workers": pool.current_num_threads(),
        "files": files,
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    if let Value::Object(m) = &mut manifest {
        m.extend(output.extra);
    }
    let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Runtime(e.to_string()))?;
    text.push('\n');
    let path = target.manifest_path();
    fs::write(&path, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

/// Run the CLI on `argv` (program name first) and return the exit status.
pub fn run(argv: Vec<String>) -> i32 {
    // Help and version requests go to stdout with status 0.
    if let Err(e) = command().try_get_matches_from(argv.clone()) {
        if matches!(
            e.kind(),
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
        ) {
            let _ = e.print();
            return 0;
        }
        if e.kind() == clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
            let _ = e.print();
            return 2;
        }
    }
    let result = parse_args(argv).and_then(|cmd| execute(&cmd));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
