use clap::Parser;
use subharmonic::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
