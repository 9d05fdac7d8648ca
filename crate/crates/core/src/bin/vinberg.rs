use clap::Parser;
use vinberg::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let code = run(&cli, std::io::stdin().lock(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
