use std::io;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use sir_cli::{run, thread_cap, Cli, THREADS_ENV};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = thread_cap(std::env::var(THREADS_ENV).ok().as_deref()).and_then(|cap| {
        if let Some(n) = cap {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("configuring worker threads")?;
        }
        run(&cli, &mut io::stdout().lock())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sir-tool: {e:#}");
            ExitCode::FAILURE
        }
    }
}
