mod args;
mod error;
mod fit;
mod format;
mod spectrum;
mod sweep;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use ctm_entropy::Truncation;

use args::{Cli, Command, FitArgs, MethodChoice};
use error::CliError;
use sweep::SweepPlan;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => err.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("ctm-entropy: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let trunc = Truncation::new(cli.numerics.abs_tol, cli.numerics.max_terms)?;
    let cap = cli.numerics.max_kappa;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());

    match cli.command {
        Command::Entropy(a) => {
            let plan = SweepPlan::new(a.kappa, cap, &[a.i], vec![a.eps], &[a.method])?;
            let rows = sweep::run(&plan, trunc, 1)?;
            sweep::write_rows(&rows, a.format, &mut out)?;
        }
        Command::Sweep(a) => {
            let plan = SweepPlan::geometric(
                a.kappa,
                cap,
                &a.i,
                (a.eps_start, a.eps_stop, a.count),
                &a.methods,
            )?;
            let rows = sweep::run(&plan, trunc, a.jobs)?;
            match &a.output {
                Some(path) => {
                    let file = File::create(path).map_err(|e| {
                        CliError::Io(format!("cannot create {}: {e}", path.display()))
                    })?;
                    let mut file = BufWriter::new(file);
                    sweep::write_rows(&rows, a.format, &mut file)?;
                    file.flush()?;
                }
                None => sweep::write_rows(&rows, a.format, &mut out)?,
            }
        }
        Command::Fit(a) => {
            let rows = fit_rows(&a, cap, trunc)?;
            let method = a.input.as_ref().and(a.method).and_then(MethodChoice::fixed);
            let report = fit::analyse(&rows, method, a.xi.into())?;
            fit::write_report(&report, a.format, &mut out)?;
        }
        Command::Spectrum(a) => spectrum::run(&a, cap, trunc, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn fit_rows(a: &FitArgs, cap: u32, trunc: Truncation) -> Result<Vec<sweep::Row>, CliError> {
    if let Some(path) = &a.input {
        let file = File::open(path)
            .map_err(|e| CliError::Io(format!("cannot open {}: {e}", path.display())))?;
        return sweep::read_rows(BufReader::new(file));
    }
    let (Some(kappa), Some(start), Some(stop)) = (a.kappa, a.eps_start, a.eps_stop) else {
        return Err(CliError::Usage(
            "fit needs --input, or --kappa with --eps-start and --eps-stop".into(),
        ));
    };
    let method = a.method.unwrap_or(MethodChoice::Auto);
    let plan = SweepPlan::geometric(kappa, cap, &a.i, (start, stop, a.count), &[method])?;
    sweep::run(&plan, trunc, a.jobs)
}
