use clap::Parser;

use certsor::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("certsor: {e}");
        std::process::exit(e.exit_code());
    }
}
