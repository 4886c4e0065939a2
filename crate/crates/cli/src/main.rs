use clap::Parser;

fn main() {
    std::process::exit(tdo_cli::run(tdo_cli::Cli::parse()));
}
