//! CSV rendering of experiment results. All CSVs carry a header row, use
//! `.` as the decimal separator, and end lines with LF. Undefined ratios
//! print as `NA`, infinite TCR as `inf`. SR/SP columns are macro averages
//! (mean of per-fold values); pooled micro counts stay available on the
//! report struct.

use std::io::{self, Write};

use super::{ExperimentReport, SweepResult, TableReport};

/// Column order of aggregate rows.
pub const AGGREGATE_HEADER: &str = "config,lambda,m_attributes,sr,sp,acc,wacc,wacc_b,tcr,p_vs_bare";

const FOLDS_HEADER: &str =
    "fold,n_ll,n_ls,n_sl,n_ss,sr,sp,acc,wacc,werr,wacc_b,effective_attrs,training_size";

fn fmt_ratio(x: f64) -> String {
    format!("{x:.6}")
}

fn fmt_opt(x: Option<f64>) -> String {
    match x {
        Some(v) => fmt_ratio(v),
        None => "NA".to_string(),
    }
}

fn fmt_tcr(x: f64) -> String {
    if x.is_infinite() {
        "inf".to_string()
    } else {
        format!("{x:.4}")
    }
}

fn aggregate_row(report: &ExperimentReport, p_vs_bare: Option<Option<f64>>) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        report.pipeline,
        report.lambda,
        report.effective_attributes,
        fmt_opt(report.sr_macro),
        fmt_opt(report.sp_macro),
        fmt_ratio(report.acc),
        fmt_ratio(report.wacc),
        fmt_ratio(report.wacc_b),
        fmt_tcr(report.tcr),
        match p_vs_bare {
            Some(p) => fmt_opt(p),
            None => "NA".to_string(),
        }
    )
}

/// One aggregate row for a single cross-validated run.
pub fn write_aggregate_csv<W: Write>(mut w: W, report: &ExperimentReport) -> io::Result<()> {
    writeln!(w, "{AGGREGATE_HEADER}")?;
    writeln!(w, "{}", aggregate_row(report, None))
}

/// Per-fold rows for a single cross-validated run.
pub fn write_folds_csv<W: Write>(mut w: W, report: &ExperimentReport) -> io::Result<()> {
    writeln!(w, "{FOLDS_HEADER}")?;
    for f in &report.folds {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            f.fold,
            f.counts.n_ll,
            f.counts.n_ls,
            f.counts.n_sl,
            f.counts.n_ss,
            fmt_opt(f.metrics.sr),
            fmt_opt(f.metrics.sp),
            fmt_ratio(f.metrics.acc),
            fmt_ratio(f.metrics.wacc),
            fmt_ratio(f.metrics.werr),
            fmt_ratio(f.metrics.wacc_b),
            f.effective_attributes,
            f.training_size,
        )?;
    }
    Ok(())
}

/// Attribute-count sweep: one row per count.
pub fn write_sweep_csv<W: Write>(mut w: W, sweep: &SweepResult) -> io::Result<()> {
    writeln!(w, "attrs,sr,sp,wacc,tcr")?;
    for (axis, report) in sweep.axis.iter().zip(&sweep.reports) {
        writeln!(
            w,
            "{},{},{},{},{}",
            axis,
            fmt_opt(report.sr_macro),
            fmt_opt(report.sp_macro),
            fmt_ratio(report.wacc),
            fmt_tcr(report.tcr),
        )?;
    }
    Ok(())
}

/// Learning curve: one row per training percentage.
pub fn write_curve_csv<W: Write>(mut w: W, sweep: &SweepResult) -> io::Result<()> {
    writeln!(w, "percent,sr,sp,wacc,tcr")?;
    for (axis, report) in sweep.axis.iter().zip(&sweep.reports) {
        writeln!(
            w,
            "{},{},{},{},{}",
            axis,
            fmt_opt(report.sr_macro),
            fmt_opt(report.sp_macro),
            fmt_ratio(report.wacc),
            fmt_tcr(report.tcr),
        )?;
    }
    Ok(())
}

/// The full configuration table, one aggregate row per (pipeline, lambda).
pub fn write_table_csv<W: Write>(mut w: W, table: &TableReport) -> io::Result<()> {
    writeln!(w, "{AGGREGATE_HEADER}")?;
    for row in &table.rows {
        writeln!(w, "{}", aggregate_row(&row.report, Some(row.p_vs_bare)))?;
    }
    Ok(())
}
