use clap::Parser;

fn main() {
    let cli = rba::Cli::parse();
    std::process::exit(rba::run(&cli));
}
