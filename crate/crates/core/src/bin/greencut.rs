use clap::Parser;
use greencut::cli::{init_threads, run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = init_threads().and_then(|_| run(cli)) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
