mod cli;

use clap::Parser;

fn main() {
    let args = cli::Args::parse();
    match cli::run(&args) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
        }
        Err(e) => {
            eprintln!("{}", e.report());
            std::process::exit(e.exit_code());
        }
    }
}
