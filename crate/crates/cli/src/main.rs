use std::io::Write;

use clap::Parser;

use hloc_cli::{run, Cli, EXIT_INPUT};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    let out = run(&cli);
    // a closed pipe on stdout is not worth a panic
    let _ = if cli.json {
        writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&out.json).expect("json"))
    } else if out.json.get("error").is_some() {
        write!(std::io::stderr(), "{}", out.text)
    } else {
        write!(std::io::stdout(), "{}", out.text)
    };
    std::process::exit(out.code);
}
