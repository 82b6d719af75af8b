use std::io::Write;

use clap::Parser;
use crystal_orders::cli::{render, run, Cli};

fn main() {
    let cli = Cli::parse();
    let out = run(&cli);
    // a closed pipe is not worth a panic
    let _ = std::io::stdout().write_all(render(&out.document).as_bytes());
    if out.exit_code != 0 {
        if let Some(msg) = out.document["error"]["message"].as_str() {
            eprintln!("error: {msg}");
        }
    }
    std::process::exit(out.exit_code);
}
