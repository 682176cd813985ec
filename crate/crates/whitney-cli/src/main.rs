use clap::Parser;

fn main() {
    let cli = whitney_cli::Cli::parse();
    let mut out = String::new();
    let result = whitney_cli::run(&cli, &mut out);
    print!("{out}");
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    std::process::exit(whitney_cli::exit_code(&result));
}
