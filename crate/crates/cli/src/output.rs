//! Number formatting and table writers shared by all subcommands.

use std::fmt::Write as _;

use ballspec::spectrum::SpectrumTable;
use ballspec::BoundsReport;
use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Rounds to 15 significant digits, which hides bisection noise in the
/// last bits, and normalizes `-0` to `0`.
pub fn round15(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Shortest representation that round-trips the 15-digit rounding;
/// scientific notation outside `[1e-5, 1e16)`.
pub fn num(x: f64) -> String {
    let r = round15(x);
    if r != 0.0 && !(1e-5..1e16).contains(&r.abs()) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

pub fn rounded_table(table: &SpectrumTable) -> SpectrumTable {
    let mut t = table.clone();
    t.lines.iter_mut().for_each(|l| l.value = round15(l.value));
    t
}

pub fn rounded_bounds(r: &BoundsReport) -> BoundsReport {
    BoundsReport {
        log2_s: round15(r.log2_s),
        r: round15(r.r),
        lambda_lower: round15(r.lambda_lower),
        delta_upper: round15(r.delta_upper),
        modls_lower: round15(r.modls_lower),
        subcube_delta: round15(r.subcube_delta),
        log_lower: round15(r.log_lower),
        ..r.clone()
    }
}

fn t_list(ts: &[u32], sep: &str) -> String {
    ts.iter().map(u32::to_string).collect::<Vec<_>>().join(sep)
}

pub fn spectrum(table: &SpectrumTable, format: Format) -> String {
    let table = rounded_table(table);
    match format {
        Format::Json => serde_json::to_string_pretty(&table).expect("serializable") + "\n",
        Format::Csv => {
            let mut s = String::from("value,multiplicity,t\n");
            for l in &table.lines {
                writeln!(
                    s,
                    "{},{},{}",
                    num(l.value),
                    l.multiplicity,
                    t_list(&l.contributors, ";")
                )
                .unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for l in &table.lines {
                writeln!(
                    s,
                    "{} {} t={}",
                    num(l.value),
                    l.multiplicity,
                    t_list(&l.contributors, ",")
                )
                .unwrap();
            }
            s
        }
    }
}

pub const BOUNDS_CSV_HEADER: &str =
    "n,log2_s,r,t,lambda_lower,delta_upper,modls_lower,subcube_delta,log_lower";

pub fn bounds_csv_row(r: &BoundsReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        r.n,
        num(r.log2_s),
        num(r.r),
        r.t,
        num(r.lambda_lower),
        num(r.delta_upper),
        num(r.modls_lower),
        num(r.subcube_delta),
        num(r.log_lower)
    )
}
