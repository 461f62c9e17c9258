use clap::Parser;
use sl_laser::cli::{main_with, Cli};

fn main() {
    std::process::exit(main_with(&Cli::parse()));
}
