use clap::Parser;
use khtangle::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
