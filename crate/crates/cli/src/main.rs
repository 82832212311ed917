use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use curvectl::args::Command;
use curvectl::commands::error_body;
use curvectl::{execute, exit_code, service, Cli};

fn report(err: &anyhow::Error) -> ExitCode {
    let body = serde_json::to_string_pretty(&error_body(err)).unwrap_or_else(|_| format!("{err:#}"));
    eprintln!("{body}");
    ExitCode::from(exit_code(err))
}

fn serve(cli: &Cli, host: &str, port: u16) -> anyhow::Result<()> {
    let rt = tokio::runtime::Runtime::new().context("starting runtime")?;
    rt.block_on(service::serve(host, port, cli.tolerance()))
        .with_context(|| format!("serving on {host}:{port}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Serve(args) = &cli.command {
        return match serve(&cli, &args.host, args.port) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => report(&e),
        };
    }
    let out = match execute(&cli.command, cli.tolerance(), &mut io::stdin()) {
        Ok(out) => out,
        Err(e) => return report(&e),
    };
    let written = match &out.path {
        Some(p) => fs::write(p, &out.body).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(out.body.as_bytes()).context("writing stdout"),
    };
    if let Err(e) = written {
        return report(&e);
    }
    ExitCode::from(out.code)
}
