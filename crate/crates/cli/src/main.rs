use clap::Parser;

fn main() {
    let cli = rbsys_cli::args::Cli::parse();
    std::process::exit(rbsys_cli::run(&cli));
}
