//! Command-line front end for `zetaline`.
//!
//! [`run`] parses arguments, executes one subcommand and writes its report.
//! Exit codes: 0 success, 1 a `verify` criterion failed, 2 bad arguments or
//! a violated precondition, 3 file or parse errors.

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub mod args;
pub mod cache;
pub mod commands;
pub mod emit;
pub mod thresholds;
pub mod verify;


use args::{Cli, Command};
use cache::{resolve_dir, TableCache};
use commands::Context;
use emit::Report;
use verify::{Status, Verifier};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

fn exit_code(e: &zetaline::Error) -> i32 {
    if e.is_io() {
        EXIT_IO
    } else {
        EXIT_USAGE
    }
}

pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        if n == 0 {
            let _ = writeln!(err, "error: --jobs must be at least 1");
            return EXIT_USAGE;
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    // reports are assembled in memory so nothing partial reaches stdout
    let (code, stdout, stderr) = pool.install(|| {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = execute(&cli, &mut o, &mut e);
        (code, o, e)
    });
    let _ = err.write_all(&stderr);
    if out.write_all(&stdout).and_then(|_| out.flush()).is_err() {
        let _ = writeln!(err, "error: writing report failed");
        return EXIT_IO;
    }
    code
}

fn execute(cli: &Cli, out: &mut Vec<u8>, err: &mut Vec<u8>) -> i32 {
    let dir = resolve_dir(cli.cache_dir.as_deref());
    let cfg = zetaline::EvalConfig::default();
    let mut code = EXIT_OK;
    let result: zetaline::Result<Report> = match &cli.command {
        Command::Verify(a) => {
            let v = Verifier::new(a.tier, cfg, Some(dir));
            let outcomes = v.run_all();
            for o in &outcomes {
                let _ = writeln!(err, "{o}");
            }
            for w in v.warnings() {
                let _ = writeln!(err, "warning: {w}");
            }
            if outcomes.iter().any(|o| o.status == Status::Fail) {
                code = EXIT_CHECK_FAILED;
            }
            Ok(verify::report(a.tier, &outcomes))
        }
        command => {
            let mut ctx = Context::new(TableCache::new(Some(dir), cfg));
            let r = dispatch(&mut ctx, command);
            for w in &ctx.cache.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            r
        }
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    match report.render(cli.format) {
        Ok(bytes) => {
            out.extend(bytes);
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: writing report: {e}");
            EXIT_IO
        }
    }
}

fn dispatch(ctx: &mut Context, command: &Command) -> zetaline::Result<Report> {
    match command {
        Command::Eval(a) => commands::eval(ctx, a),
        Command::Zeros(a) => commands::zeros(ctx, a),
        Command::Measure(a) => commands::measure(ctx, a),
        Command::Band(a) => commands::band(ctx, a),
        Command::Distribution(a) => commands::distribution(ctx, a),
        Command::Moments(a) => commands::moments(ctx, a),
        Command::Sdiff(a) => commands::sdiff(ctx, a),
        Command::Gaps(a) => commands::gap_stats(ctx, a),
        Command::Fujii(a) => commands::fujii(ctx, a),
        Command::Abmeasure(a) => commands::abmeasure(ctx, a),
        Command::Abd(a) => commands::abd(ctx, a),
        Command::Paircorr(a) => commands::paircorr(ctx, a),
        Command::Ingest(a) => commands::ingest(a),
        Command::Crosscheck(a) => commands::crosscheck(ctx, a),
        Command::Verify(_) => unreachable!("handled by execute"),
    }
}
