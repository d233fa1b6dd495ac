use clap::Parser;

fn main() {
    std::process::exit(ruinkit::cli::run(ruinkit::cli::Cli::parse()));
}
