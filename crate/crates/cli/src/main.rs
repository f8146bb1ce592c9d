use clap::Parser;

use girthlab::cli::Cli;
use girthlab::error::CliError;

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("GIRTHLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("GIRTHLAB_THREADS = {v}: expected a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::usage(format!("thread pool: {e}")))
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = init_threads().and_then(|()| girthlab::execute(&cli));
    match outcome {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            std::process::exit(e.class.exit_code());
        }
    }
}
