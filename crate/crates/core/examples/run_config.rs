//! Runs a scenario file the way the `scmag` binary does.
//!
//! cargo run --example run_config -- examples/configs/strip_meissner.toml trap

use std::path::PathBuf;

use scmag::config::load_config;
use scmag::scenario::{run_scenario, Subcommand};

fn main() -> scmag::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(args.next().unwrap_or_else(|| "examples/configs/strip_meissner.toml".into()));
    let cmd = args.next().unwrap_or_else(|| "trap".into());
    let cmd = Subcommand::from_name(&cmd).unwrap_or(Subcommand::Trap);
    let cfg = load_config(&path)?;
    let out = run_scenario(cmd, &cfg, Some(&std::env::temp_dir().join("scmag-example")))?;
    print!("{}", out.summary);
    for f in out.files {
        println!("{}", f.display());
    }
    Ok(())
}
