use std::io::Write;

use ctm_entropy::character::ctm_spectrum;
use ctm_entropy::entropy::spectrum_probabilities;
use ctm_entropy::{ModelPoint, Nome, Truncation};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::args::{Format, SpectrumArgs};
use crate::error::CliError;
use crate::format::{json_optional, sci};
use crate::sweep::check_kappa;

#[derive(Serialize)]
struct JsonLevel {
    n: usize,
    d_n: Box<RawValue>,
    p_n: Box<RawValue>,
}

pub fn run(
    args: &SpectrumArgs,
    cap: u32,
    trunc: Truncation,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    check_kappa(args.kappa, cap)?;
    if args.i > args.kappa {
        return Err(CliError::Usage(format!(
            "label i={} exceeds kappa={}",
            args.i, args.kappa
        )));
    }
    let table = ctm_spectrum(args.kappa, args.i, args.order)?;
    let probabilities = match args.eps {
        Some(eps) => {
            let point =
                ModelPoint::with_kappa_cap(args.kappa, args.i, Nome::from_epsilon(eps)?, cap)?;
            Some(spectrum_probabilities(&point, &table, trunc)?.0)
        }
        None => None,
    };
    let p = |n: usize| probabilities.as_ref().map(|p| p[n]);
    let degeneracies = table.degeneracies();

    match args.format {
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(out);
            writer.write_record(["n", "d_n", "p_n"])?;
            for (n, d) in degeneracies.iter().enumerate() {
                writer.write_record([
                    n.to_string(),
                    d.to_string(),
                    p(n).map(sci).unwrap_or_default(),
                ])?;
            }
            writer.flush()?;
        }
        Format::Json => {
            let levels: Vec<JsonLevel> = degeneracies
                .iter()
                .enumerate()
                .map(|(n, d)| JsonLevel {
                    n,
                    d_n: RawValue::from_string(d.to_string()).expect("integer is valid JSON"),
                    p_n: json_optional(p(n)),
                })
                .collect();
            serde_json::to_writer_pretty(&mut *out, &levels)?;
            writeln!(out)?;
        }
        Format::Table => {
            writeln!(out, "{:>6} {:>30} {:>24}", "n", "d_n", "p_n")?;
            for (n, d) in degeneracies.iter().enumerate() {
                let pn = p(n).map_or_else(|| "-".to_string(), |v| format!("{v:.16e}"));
                writeln!(out, "{n:>6} {:>30} {pn:>24}", d.to_string())?;
            }
        }
    }
    Ok(())
}
