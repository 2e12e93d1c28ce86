use clap::Parser;

use mathrelax::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    if let Err(e) = run(cli, &mut stdout.lock(), &mut stderr.lock()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
