//! Runs every command on the bundled configurations the way the binary does,
//! with the reports printed and the data files kept in a temporary directory.

use std::path::PathBuf;

use sl_laser::cli::{run, CommonArgs, Command};

fn main() -> sl_laser::Result<()> {
    let configs = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs");
    let dir = tempfile::tempdir()?;
    let jobs: [(&str, fn(CommonArgs) -> Command); 6] = [
        ("boson_reservoir.toml", Command::Gamma),
        ("laser.toml", Command::Build),
        ("laser.toml", Command::Match),
        ("fermion_reservoir.toml", Command::Compare),
        ("laser.toml", Command::Evolve),
        ("sl_check.toml", Command::SlCheck),
    ];
    for (k, (file, cmd)) in jobs.into_iter().enumerate() {
        let output = dir.path().join(format!("out{k}"));
        let args = CommonArgs { config: configs.join(file), output: output.clone(), verbose: false };
        let report = run(&cmd(args))?;
        let written = std::fs::metadata(&output)?.len();
        println!("== {file} ({written} bytes written)");
        for line in report.lines().take(6) {
            println!("   {line}");
        }
    }
    Ok(())
}
