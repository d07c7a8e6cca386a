use clap::Parser;
use mwforge::cli::{run, Cli, ERROR_EXIT};

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ERROR_EXIT
        }
    };
    std::process::exit(code);
}
