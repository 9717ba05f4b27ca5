use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::{ConvergenceReport, Norm};

pub const CSV_HEADER: &str = "h,tau,error,order,norm,alpha,beta,rem";
const NOT_AVAILABLE: &str = "n/a";

/// Six significant digits in scientific notation with a signed, at least
/// two-digit exponent: `4.36080e-04`.
pub fn format_sci(x: f64) -> String {
    let s = format!("{x:.5e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// One CSV line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub h: f64,
    pub tau: f64,
    pub error: f64,
    pub order: Option<f64>,
    pub norm: Norm,
    pub alpha: Option<f64>,
    pub beta: f64,
    pub rem: bool,
}

impl TableRow {
    /// Every float rounded to the six digits the CSV keeps.
    pub fn quantized(self) -> Self {
        let q = |x: f64| format_sci(x).parse::<f64>().expect("formatted float");
        TableRow {
            h: q(self.h),
            tau: q(self.tau),
            error: q(self.error),
            order: self.order.map(q),
            alpha: self.alpha.map(q),
            beta: q(self.beta),
            ..self
        }
    }
}

impl ConvergenceReport {
    /// Rows in CSV order.
    pub fn table_rows(&self) -> Vec<TableRow> {
        self.series
            .iter()
            .flat_map(|s| {
                s.rows.iter().map(move |r| TableRow {
                    h: r.h,
                    tau: r.tau,
                    error: r.error,
                    order: r.order,
                    norm: self.norm,
                    alpha: s.alpha,
                    beta: s.beta,
                    rem: self.rem,
                })
            })
            .collect()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| NOT_AVAILABLE.to_string(), format_sci)
}

pub fn render_csv(rows: &[TableRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            format_sci(r.h),
            format_sci(r.tau),
            format_sci(r.error),
            opt(r.order),
            r.norm,
            opt(r.alpha),
            format_sci(r.beta),
            r.rem
        );
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<TableRow>> {
    let mut lines = text.split('\n').enumerate();
    match lines.next() {
        Some((_, CSV_HEADER)) => {}
        Some((_, other)) => {
            return Err(Error::Csv {
                line: 1,
                reason: format!("expected header {CSV_HEADER:?}, found {other:?}"),
            })
        }
        None => unreachable!("split yields at least one item"),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        if line.is_empty() {
            continue;
        }
        let bad = |reason: String| Error::Csv { line: line_no, reason };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(bad(format!("expected 8 fields, found {}", fields.len())));
        }
        let num = |s: &str, what: &str| s.parse::<f64>().map_err(|_| bad(format!("bad {what} {s:?}")));
        let opt_num = |s: &str, what: &str| {
            if s == NOT_AVAILABLE {
                Ok(None)
            } else {
                num(s, what).map(Some)
            }
        };
        rows.push(TableRow {
            h: num(fields[0], "h")?,
            tau: num(fields[1], "tau")?,
            error: num(fields[2], "error")?,
            order: opt_num(fields[3], "order")?,
            norm: fields[4].parse().map_err(|_| bad(format!("bad norm {:?}", fields[4])))?,
            alpha: opt_num(fields[5], "alpha")?,
            beta: num(fields[6], "beta")?,
            rem: fields[7].parse().map_err(|_| bad(format!("bad rem flag {:?}", fields[7])))?,
        });
    }
    Ok(rows)
}

/// `1/k` when `x` is the reciprocal of an integer, else scientific.
fn fraction_or_sci(x: f64) -> String {
    let k = (1.0 / x).round();
    if k >= 1.0 && ((1.0 / k) - x).abs() <= 1e-12 * x {
        format!("1/{k}")
    } else {
        format_sci(x)
    }
}

fn param_label(alpha: Option<f64>, beta: f64) -> String {
    match alpha {
        Some(a) => format!("alpha={a}, beta={beta}"),
        None => format!("beta={beta}"),
    }
}

/// Aligned table with one `error | order` column pair per parameter point,
/// rows by refinement. Reports with several `α` and several `β` get one
/// block per `α`.
pub fn render_text(report: &ConvergenceReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "problem {}  norm {}  {}  T = {}",
        report.problem,
        report.norm,
        if report.rem { "extrapolated" } else { "Crank-Nicolson" },
        report.t_final
    );
    if report.is_empty() {
        out.push_str("(no rows)\n");
        return out;
    }

    let mut alphas: Vec<Option<f64>> = report.series.iter().map(|s| s.alpha).collect();
    alphas.dedup();
    let several_betas = report.series.iter().any(|s| s.beta != report.series[0].beta);
    let blocks: Vec<Vec<&super::Series>> = if alphas.len() > 1 && several_betas {
        alphas
            .iter()
            .map(|a| report.series.iter().filter(|s| s.alpha == *a).collect())
            .collect()
    } else {
        vec![report.series.iter().collect()]
    };

    const CELL: usize = 13;
    const ORDER: usize = 7;
    for block in blocks {
        out.push('\n');
        let _ = write!(out, "{:<10}{:<10}", "", "");
        for s in &block {
            let _ = write!(out, "  {:<w$}", param_label(s.alpha, s.beta), w = CELL + ORDER + 1);
        }
        out.push('\n');
        let _ = write!(out, "{:<10}{:<10}", "h", "tau");
        for _ in &block {
            let _ = write!(out, "  {:<CELL$} {:>ORDER$}", "error", "order");
        }
        out.push('\n');
        let depth = block.iter().map(|s| s.rows.len()).max().unwrap_or(0);
        for i in 0..depth {
            let lead = block.iter().find_map(|s| s.rows.get(i)).expect("depth bound");
            let _ = write!(out, "{:<10}{:<10}", fraction_or_sci(lead.h), fraction_or_sci(lead.tau));
            for s in &block {
                match s.rows.get(i) {
                    Some(r) => {
                        let order = r.order.map_or(String::new(), |p| format!("{p:.2}"));
                        let _ = write!(out, "  {:<CELL$} {:>ORDER$}", format_sci(r.error), order);
                    }
                    None => {
                        let _ = write!(out, "  {:<CELL$} {:>ORDER$}", "", "");
                    }
                }
            }
            out.push('\n');
        }
    }
    out
}

/// Sibling path with a `.txt` extension for the plain-text table.
pub fn text_path(csv: &Path) -> PathBuf {
    csv.with_extension("txt")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the CSV to `path` and the text table next to it; returns the text path.
pub fn emit_table(report: &ConvergenceReport, path: &Path) -> Result<PathBuf> {
    let txt = text_path(path);
    if txt == path {
        return Err(Error::Config(format!(
            "table path {} must not end in .txt; the text table is written there",
            path.display()
        )));
    }
    write_file(path, &render_csv(&report.table_rows()))?;
    write_file(&txt, &render_text(report))?;
    Ok(txt)
}
