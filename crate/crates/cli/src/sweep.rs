//! Sweep evaluation and the row formats shared by `entropy`, `sweep` and `fit`.

use std::io::{Read, Write};
use std::str::FromStr;

use ctm_entropy::entropy;
use ctm_entropy::scaling::{self, geometric_grid};
use ctm_entropy::{Method, ModelPoint, Nome, Truncation, XiMode};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::args::{Format, MethodChoice};
use crate::error::CliError;
use crate::format::{json_number, sci};

/// Column order of the CSV format.
pub const HEADER: [&str; 9] = [
    "eps",
    "kappa",
    "i",
    "method",
    "S",
    "est_error",
    "terms",
    "ln_xi_exact",
    "ln_xi_asym",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub eps: f64,
    pub kappa: u32,
    pub i: u32,
    pub method: Method,
    pub s: f64,
    pub est_error: f64,
    pub terms: usize,
    pub ln_xi_exact: f64,
    pub ln_xi_asym: f64,
}

impl Row {
    pub fn ln_xi(&self, mode: XiMode) -> f64 {
        match mode {
            XiMode::Exact => self.ln_xi_exact,
            XiMode::Asymptotic => self.ln_xi_asym,
        }
    }
}

/// A validated sweep: every combination of grid point, label and method.
#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub kappa: u32,
    pub kappa_cap: u32,
    pub labels: Vec<u32>,
    pub grid: Vec<f64>,
    pub methods: Vec<MethodChoice>,
}

impl SweepPlan {
    pub fn new(
        kappa: u32,
        kappa_cap: u32,
        labels: &[u32],
        grid: Vec<f64>,
        methods: &[MethodChoice],
    ) -> Result<Self, CliError> {
        check_kappa(kappa, kappa_cap)?;
        let mut labels = if labels.is_empty() {
            (0..=kappa).collect()
        } else {
            labels.to_vec()
        };
        labels.sort_unstable();
        labels.dedup();
        if let Some(&bad) = labels.iter().find(|&&i| i > kappa) {
            return Err(CliError::Usage(format!(
                "label i={bad} exceeds kappa={kappa}"
            )));
        }
        let mut unique = Vec::new();
        for &m in methods {
            if !unique.contains(&m) {
                unique.push(m);
            }
        }
        if unique.is_empty() {
            unique.push(MethodChoice::Auto);
        }
        Ok(SweepPlan {
            kappa,
            kappa_cap,
            labels,
            grid,
            methods: unique,
        })
    }

    pub fn geometric(
        kappa: u32,
        kappa_cap: u32,
        labels: &[u32],
        (start, stop, count): (f64, f64, usize),
        methods: &[MethodChoice],
    ) -> Result<Self, CliError> {
        let grid = geometric_grid(start, stop, count)?;
        Self::new(kappa, kappa_cap, labels, grid, methods)
    }
}

pub fn check_kappa(kappa: u32, cap: u32) -> Result<(), CliError> {
    if kappa == 0 {
        return Err(CliError::Usage("kappa must be at least 1".into()));
    }
    if kappa > cap {
        return Err(CliError::Usage(format!(
            "kappa={kappa} exceeds --max-kappa {cap}"
        )));
    }
    Ok(())
}

/// Evaluates every point of `plan`. Rows come back ordered by decreasing eps,
/// then label, then method, however many threads were used.
pub fn run(plan: &SweepPlan, trunc: Truncation, jobs: usize) -> Result<Vec<Row>, CliError> {
    let tasks: Vec<(f64, u32, MethodChoice)> = plan
        .grid
        .iter()
        .flat_map(|&eps| {
            plan.labels
                .iter()
                .flat_map(move |&i| plan.methods.iter().map(move |&m| (eps, i, m)))
        })
        .collect();
    let evaluate = || -> Vec<Result<Row, CliError>> {
        tasks
            .par_iter()
            .map(|&(eps, i, m)| evaluate_point(plan, eps, i, m, trunc))
            .collect()
    };
    let results = if jobs == 0 {
        evaluate()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::Io(format!("cannot start worker threads: {e}")))?
            .install(evaluate)
    };
    results.into_iter().collect()
}

fn evaluate_point(
    plan: &SweepPlan,
    eps: f64,
    i: u32,
    choice: MethodChoice,
    trunc: Truncation,
) -> Result<Row, CliError> {
    let method = choice.resolve(eps);
    let at = |e: ctm_entropy::Error| -> CliError {
        let inner = CliError::from(e);
        let context = format!("kappa={} i={i} eps={eps} method={method}", plan.kappa);
        match inner {
            CliError::Usage(msg) => CliError::Usage(format!("{context}: {msg}")),
            CliError::Numeric(msg) => CliError::Numeric(format!("{context}: {msg}")),
            CliError::Io(msg) => CliError::Io(format!("{context}: {msg}")),
        }
    };
    let point = ModelPoint::with_kappa_cap(
        plan.kappa,
        i,
        Nome::from_epsilon(eps).map_err(at)?,
        plan.kappa_cap,
    )
    .map_err(at)?;
    let result = entropy::entropy(&point, method, trunc).map_err(at)?;
    Ok(Row {
        eps,
        kappa: plan.kappa,
        i,
        method,
        s: result.value,
        est_error: result.est_error,
        terms: result.terms_used,
        ln_xi_exact: scaling::correlation_length(eps, XiMode::Exact).map_err(at)?,
        ln_xi_asym: scaling::correlation_length(eps, XiMode::Asymptotic).map_err(at)?,
    })
}

#[derive(Serialize)]
struct JsonRow<'a> {
    eps: Box<RawValue>,
    kappa: u32,
    i: u32,
    method: &'a str,
    #[serde(rename = "S")]
    s: Box<RawValue>,
    est_error: Box<RawValue>,
    terms: usize,
    ln_xi_exact: Box<RawValue>,
    ln_xi_asym: Box<RawValue>,
}

pub fn write_rows(rows: &[Row], format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(out);
            writer.write_record(HEADER)?;
            for r in rows {
                writer.write_record([
                    sci(r.eps),
                    r.kappa.to_string(),
                    r.i.to_string(),
                    r.method.to_string(),
                    sci(r.s),
                    sci(r.est_error),
                    r.terms.to_string(),
                    sci(r.ln_xi_exact),
                    sci(r.ln_xi_asym),
                ])?;
            }
            writer.flush()?;
        }
        Format::Json => {
            let json: Vec<JsonRow> = rows
                .iter()
                .map(|r| JsonRow {
                    eps: json_number(r.eps),
                    kappa: r.kappa,
                    i: r.i,
                    method: r.method.as_str(),
                    s: json_number(r.s),
                    est_error: json_number(r.est_error),
                    terms: r.terms,
                    ln_xi_exact: json_number(r.ln_xi_exact),
                    ln_xi_asym: json_number(r.ln_xi_asym),
                })
                .collect();
            serde_json::to_writer_pretty(&mut *out, &json)?;
            writeln!(out)?;
        }
        Format::Table => {
            writeln!(
                out,
                "{:>12} {:>5} {:>3} {:>10} {:>20} {:>10} {:>8} {:>14} {:>14}",
                "eps",
                "kappa",
                "i",
                "method",
                "S",
                "est_error",
                "terms",
                "ln_xi_exact",
                "ln_xi_asym"
            )?;
            for r in rows {
                writeln!(
                    out,
                    "{:>12.6e} {:>5} {:>3} {:>10} {:>20.15} {:>10.2e} {:>8} {:>14.8} {:>14.8}",
                    r.eps,
                    r.kappa,
                    r.i,
                    r.method,
                    r.s,
                    r.est_error,
                    r.terms,
                    r.ln_xi_exact,
                    r.ln_xi_asym
                )?;
            }
        }
    }
    Ok(())
}

#[derive(Deserialize)]
struct CsvRow {
    eps: f64,
    kappa: u32,
    i: u32,
    method: String,
    #[serde(rename = "S")]
    s: f64,
    est_error: f64,
    terms: usize,
    ln_xi_exact: f64,
    ln_xi_asym: f64,
}

/// Parses a sweep CSV. Errors name the offending data row, counted from 1
/// after the header.
pub fn read_rows(input: impl Read) -> Result<Vec<Row>, CliError> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader
        .headers()
        .map_err(|e| CliError::Io(format!("malformed CSV header: {e}")))?;
    if header.iter().ne(HEADER) {
        return Err(CliError::Io(format!(
            "malformed CSV header: expected '{}', found '{}'",
            HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (index, record) in reader.deserialize::<CsvRow>().enumerate() {
        let row_number = index + 1;
        let malformed =
            |msg: String| CliError::Io(format!("malformed CSV at row {row_number}: {msg}"));
        let raw = record.map_err(|e| malformed(deserialize_message(&e)))?;
        let method = Method::from_str(&raw.method).map_err(|e| malformed(e.to_string()))?;
        if raw.eps.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || raw.eps.is_infinite() {
            return Err(malformed(format!("eps must be positive, got {}", raw.eps)));
        }
        rows.push(Row {
            eps: raw.eps,
            kappa: raw.kappa,
            i: raw.i,
            method,
            s: raw.s,
            est_error: raw.est_error,
            terms: raw.terms,
            ln_xi_exact: raw.ln_xi_exact,
            ln_xi_asym: raw.ln_xi_asym,
        });
    }
    Ok(rows)
}

fn deserialize_message(err: &csv::Error) -> String {
    match err.kind() {
        csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => {
            format!("expected {expected_len} fields, found {len}")
        }
        _ => err.to_string(),
    }
}
