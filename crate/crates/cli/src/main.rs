use clap::Parser;
use gammaring_cli::{execute, Cli};

fn main() {
    // Clap itself exits with code 2 on usage errors, matching the contract.
    let cli = Cli::parse();
    std::process::exit(execute(&cli));
}
