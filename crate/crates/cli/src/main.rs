use clap::Parser;

fn main() {
    let cli = oor_cli::cli::Cli::parse();
    std::process::exit(oor_cli::cli::run(cli));
}
