//! Scaling analysis of sweep rows.

use std::collections::BTreeMap;
use std::io::Write;

use ctm_entropy::scaling::{self, Extrapolated, MODULUS_CONVENTION};
use ctm_entropy::{Method, ScalingFit, XiMode};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::args::ReportFormat;
use crate::error::CliError;
use crate::format::{json_number, json_optional};
use crate::sweep::Row;

#[derive(Debug, Clone)]
pub struct LabelFit {
    pub i: u32,
    pub fit: ScalingFit,
    pub ln_g: f64,
    /// `ln g` recovered from `S_i − S_0`; needs label 0 in the same data.
    pub ln_g_extracted: Option<f64>,
    pub c_kappa: Option<Extrapolated>,
}

#[derive(Debug, Clone)]
pub struct FitReport {
    pub kappa: u32,
    pub c_target: f64,
    pub xi_mode: XiMode,
    pub labels: Vec<LabelFit>,
}

impl FitReport {
    /// Largest difference between the per-label `C_κ` estimates.
    pub fn c_kappa_spread(&self) -> Option<f64> {
        let values: Vec<f64> = self
            .labels
            .iter()
            .filter_map(|l| l.c_kappa.map(|c| c.value))
            .collect();
        if values.len() < 2 {
            return None;
        }
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        Some(hi - lo)
    }
}

pub fn analyse(
    rows: &[Row],
    method: Option<Method>,
    xi_mode: XiMode,
) -> Result<FitReport, CliError> {
    let rows: Vec<&Row> = rows
        .iter()
        .filter(|r| method.is_none_or(|m| r.method == m))
        .collect();
    let Some(first) = rows.first() else {
        return Err(CliError::Usage("no rows to fit".into()));
    };
    let kappa = first.kappa;
    if let Some(other) = rows.iter().find(|r| r.kappa != kappa) {
        return Err(CliError::Usage(format!(
            "rows mix kappa={kappa} and kappa={}; fit one kappa at a time",
            other.kappa
        )));
    }

    let mut by_label: BTreeMap<u32, Vec<&Row>> = BTreeMap::new();
    for r in &rows {
        let group = by_label.entry(r.i).or_default();
        if group.iter().any(|g| g.eps == r.eps) {
            return Err(CliError::Usage(format!(
                "several rows for i={} at eps={}; select one with --method",
                r.i, r.eps
            )));
        }
        group.push(r);
    }

    let c = scaling::central_charge(kappa);
    let mut labels = Vec::new();
    for (&i, group) in &by_label {
        let samples: Vec<(f64, f64)> = group.iter().map(|r| (r.eps, r.s)).collect();
        let fit = scaling::fit_scaling(&samples)?;
        let ln_g = scaling::boundary_g(kappa, i)?.ln_g;
        let ln_g_extracted = if i == 0 {
            Some(0.0)
        } else {
            by_label.get(&0).and_then(|reference| {
                let diffs: Vec<(f64, f64)> = group
                    .iter()
                    .filter_map(|r| {
                        reference
                            .iter()
                            .find(|z| z.eps == r.eps)
                            .map(|z| (r.eps, r.s - z.s))
                    })
                    .collect();
                scaling::richardson(&diffs).ok().map(|e| e.value)
            })
        };
        let shifted: Vec<(f64, f64)> = group
            .iter()
            .map(|r| (r.eps, r.s - c / 6.0 * r.ln_xi(xi_mode) - ln_g))
            .collect();
        let c_kappa = scaling::richardson(&shifted).ok();
        labels.push(LabelFit {
            i,
            fit,
            ln_g,
            ln_g_extracted,
            c_kappa,
        });
    }
    Ok(FitReport {
        kappa,
        c_target: c,
        xi_mode,
        labels,
    })
}

fn xi_name(mode: XiMode) -> &'static str {
    match mode {
        XiMode::Exact => "exact",
        XiMode::Asymptotic => "asymptotic",
    }
}

#[derive(Serialize)]
struct JsonLabel {
    i: u32,
    points: usize,
    c_estimate: Box<RawValue>,
    slope: Box<RawValue>,
    intercept: Box<RawValue>,
    residual_max: Box<RawValue>,
    ln_g: Box<RawValue>,
    ln_g_extracted: Box<RawValue>,
    c_kappa: Box<RawValue>,
    c_kappa_residual: Box<RawValue>,
}

#[derive(Serialize)]
struct JsonReport {
    kappa: u32,
    c_target: Box<RawValue>,
    xi: &'static str,
    modulus_convention: &'static str,
    c_kappa_spread: Box<RawValue>,
    labels: Vec<JsonLabel>,
}

pub fn write_report(
    report: &FitReport,
    format: ReportFormat,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match format {
        ReportFormat::Json => {
            let json = JsonReport {
                kappa: report.kappa,
                c_target: json_number(report.c_target),
                xi: xi_name(report.xi_mode),
                modulus_convention: MODULUS_CONVENTION,
                c_kappa_spread: json_optional(report.c_kappa_spread()),
                labels: report
                    .labels
                    .iter()
                    .map(|l| JsonLabel {
                        i: l.i,
                        points: l.fit.points_used.len(),
                        c_estimate: json_number(l.fit.c_estimate),
                        slope: json_number(l.fit.slope),
                        intercept: json_number(l.fit.intercept),
                        residual_max: json_number(l.fit.residual_max),
                        ln_g: json_number(l.ln_g),
                        ln_g_extracted: json_optional(l.ln_g_extracted),
                        c_kappa: json_optional(l.c_kappa.map(|c| c.value)),
                        c_kappa_residual: json_optional(l.c_kappa.map(|c| c.residual)),
                    })
                    .collect(),
            };
            serde_json::to_writer_pretty(&mut *out, &json)?;
            writeln!(out)?;
        }
        ReportFormat::Table => {
            writeln!(out, "kappa               {}", report.kappa)?;
            writeln!(out, "c target            {}", report.c_target)?;
            writeln!(out, "correlation length  {}", xi_name(report.xi_mode))?;
            writeln!(out, "modulus convention  {MODULUS_CONVENTION}")?;
            if let Some(spread) = report.c_kappa_spread() {
                writeln!(out, "C_kappa spread      {spread:.3e}")?;
            }
            writeln!(out)?;
            writeln!(
                out,
                "{:>3} {:>6} {:>14} {:>14} {:>10} {:>14} {:>14} {:>14} {:>10}",
                "i",
                "points",
                "c_estimate",
                "intercept",
                "residual",
                "ln_g",
                "ln_g_extract",
                "C_kappa",
                "C_resid"
            )?;
            let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.10}"));
            for l in &report.labels {
                writeln!(
                    out,
                    "{:>3} {:>6} {:>14.10} {:>14.10} {:>10.2e} {:>14.10} {:>14} {:>14} {:>10}",
                    l.i,
                    l.fit.points_used.len(),
                    l.fit.c_estimate,
                    l.fit.intercept,
                    l.fit.residual_max,
                    l.ln_g,
                    opt(l.ln_g_extracted),
                    opt(l.c_kappa.map(|c| c.value)),
                    l.c_kappa
                        .map_or_else(|| "-".to_string(), |c| format!("{:.2e}", c.residual)),
                )?;
            }
        }
    }
    Ok(())
}
