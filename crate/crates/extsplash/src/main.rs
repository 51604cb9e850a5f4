use clap::Parser;

fn main() {
    let cli = extsplash::Cli::parse();
    std::process::exit(extsplash::run(&cli));
}
