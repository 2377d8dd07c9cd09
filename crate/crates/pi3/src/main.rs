use clap::Parser;

fn main() {
    let cli = pi3::cli::Cli::parse();
    std::process::exit(pi3::cli::run_cli(cli));
}
