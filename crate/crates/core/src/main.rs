use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use scmag::config::load_config;
use scmag::scenario::{exit_code, run_materials_default, run_scenario, Subcommand};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    FieldMap,
    Trap,
    TrapScan,
    BeanProfile,
    Remnant,
    Cylinder,
    Bem,
    Materials,
}

/// Fields and traps of superconducting atom-chip wires.
///
/// Thread count: SCMAG_THREADS (default: all cores).
#[derive(Debug, Parser)]
#[command(name = "scmag", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Scenario file (TOML). Optional for `materials`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; overrides [output].dir.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };

    if let Ok(n) = std::env::var("SCMAG_THREADS") {
        match n.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("scmag: SCMAG_THREADS must be a positive integer, got `{n}`");
                return ExitCode::from(2);
            }
        }
    }

    let cmd = Subcommand::from_name(cli.command.to_possible_value().expect("no skipped variants").get_name())
        .expect("subcommand names match");
    let result = match (&cli.config, cmd) {
        (None, Subcommand::Materials) => run_materials_default(cli.out.as_deref().unwrap_or(".".as_ref())),
        (None, _) => {
            eprintln!("scmag: `{}` needs --config <file>", cmd.name());
            return ExitCode::from(2);
        }
        (Some(path), _) => load_config(path).and_then(|cfg| run_scenario(cmd, &cfg, cli.out.as_deref())),
    };
    match result {
        Ok(out) => {
            print!("{}", out.summary);
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("scmag: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
