use clap::Parser;

use leafwise_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let (report, code) = run(&cli);
    if cli.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if let Some(err) = report.value.get("error") {
        if let Some(msg) = err.get("message").and_then(|m| m.as_str()) {
            match err.get("path").and_then(|p| p.as_str()) {
                Some(path) => eprintln!("error at {path}: {msg}"),
                None => eprintln!("error: {msg}"),
            }
        }
    }
    std::process::exit(code);
}
