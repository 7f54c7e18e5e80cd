//! Subcommand implementations.

use std::io::Write;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use ballspec::binom::{bitstring, parse_bitstring};
use ballspec::bounds::ball_bound;
use ballspec::eigenfunctions::synthesize;
use ballspec::krawtchouk::{first_root, jacobi_roots, KrawtchoukPoly, EXACT_MAX_DIM};
use ballspec::spectrum::{full_spectrum_with, verify_against_oracle, SpectrumOptions};
use ballspec::{BoundsReport, Error, InducedGraph, Limits, VerifyReport};

use crate::output::{self, num, round15, Format};
use crate::{
    BoundsArgs, Cli, Command, EigenfunctionArgs, Failure, IncidenceArgs, KrawtchoukArgs, Radii,
    VerifyArgs,
};

type Out<'a> = &'a mut dyn Write;

pub fn run(cli: &Cli, out: Out) -> Result<(), Failure> {
    match &cli.command {
        Command::Spectrum(radii) => spectrum(cli, radii, out),
        Command::Verify(args) if args.all => verify_all(cli, args, out),
        Command::Verify(args) => verify_one(cli, args, out),
        Command::Bounds(args) => bounds(cli, args, out),
        Command::Krawtchouk(args) => krawtchouk(cli, args, out),
        Command::Eigenfunction(args) => eigenfunction(cli, args, out),
        Command::Incidence(args) => incidence(cli, args, out),
        Command::Edges(radii) => edges(cli, radii, out),
    }
}

fn limits(cli: &Cli) -> Limits {
    Limits {
        dense_limit: usize::try_from(cli.dense_limit).unwrap_or(usize::MAX),
        ..Limits::default()
    }
}

fn json<T: Serialize>(out: Out, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn spectrum(cli: &Cli, radii: &Radii, out: Out) -> Result<(), Failure> {
    let (n, r1, r2) = radii.resolve();
    let opts = SpectrumOptions {
        merge_eps_scale: cli.merge_eps_scale,
    };
    let table = full_spectrum_with(n, r1, r2, &opts)?;
    for w in &table.warnings {
        eprintln!("warning: {w}");
    }
    out.write_all(output::spectrum(&table, cli.format.unwrap_or(Format::Text)).as_bytes())?;
    Ok(())
}

const VERIFY_CSV_HEADER: &str = "n,r1,r2,vertex_count,lines,max_deviation,status";

fn verify_row(rep: &VerifyReport) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        rep.n,
        rep.r1,
        rep.r2,
        rep.vertex_count,
        rep.lines,
        num(rep.max_deviation),
        if rep.pass { "pass" } else { "fail" }
    )
}

fn rounded_report(rep: &VerifyReport) -> VerifyReport {
    let mut r = rep.clone();
    r.max_deviation = round15(r.max_deviation);
    r.multiplicity_mismatches
        .iter_mut()
        .for_each(|m| m.value = round15(m.value));
    r
}

fn verify_one(cli: &Cli, args: &VerifyArgs, out: Out) -> Result<(), Failure> {
    let n = args.n.expect("clap requires n without --all");
    let (r1, r2) = match (args.r, args.r1, args.r2) {
        (Some(r), _, _) => (0, r),
        (None, r1, Some(r2)) => (r1.unwrap_or(0), r2),
        _ => return Err(Failure::Usage("give --r or --r2".into())),
    };
    let rep = verify_against_oracle(n, r1, r2, args.tol, &limits(cli))?;
    match cli.format.unwrap_or(Format::Text) {
        Format::Json => json(out, &rounded_report(&rep))?,
        Format::Csv => writeln!(out, "{VERIFY_CSV_HEADER}\n{}", verify_row(&rep))?,
        Format::Text => {
            writeln!(
                out,
                "n={} r1={} r2={} vertices={} lines={} max_deviation={} tol={} {}",
                rep.n,
                rep.r1,
                rep.r2,
                rep.vertex_count,
                rep.lines,
                num(rep.max_deviation),
                num(rep.tol),
                if rep.pass { "PASS" } else { "FAIL" }
            )?;
            for m in &rep.multiplicity_mismatches {
                writeln!(
                    out,
                    "multiplicity mismatch at {}: predicted {}, observed {}",
                    num(m.value),
                    m.predicted,
                    m.observed
                )?;
            }
        }
    }
    if rep.pass {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "max deviation {} exceeds {}",
            num(rep.max_deviation),
            num(rep.tol)
        )))
    }
}

#[derive(Serialize)]
struct CaseRow {
    n: u32,
    r1: u32,
    r2: u32,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<VerifyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn verify_all(cli: &Cli, args: &VerifyArgs, out: Out) -> Result<(), Failure> {
    let max_n = args.max_n.expect("clap requires max-n with --all");
    let cases: Vec<(u32, u32, u32)> = (0..=max_n)
        .flat_map(|n| (0..=n / 2).flat_map(move |r2| (0..=r2).map(move |r1| (n, r1, r2))))
        .collect();
    let threads = match cli.threads {
        Some(t) => usize::try_from(t).unwrap_or(usize::MAX),
        None => std::thread::available_parallelism().map_or(1, |p| p.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let lim = limits(cli);
    // `collect` on an indexed parallel iterator keeps case order.
    let results: Vec<Result<VerifyReport, Error>> = pool.install(|| {
        cases
            .par_iter()
            .map(|&(n, r1, r2)| verify_against_oracle(n, r1, r2, args.tol, &lim))
            .collect()
    });

    let rows: Vec<CaseRow> = cases
        .iter()
        .zip(results)
        .map(|(&(n, r1, r2), res)| match res {
            Ok(rep) => CaseRow {
                n,
                r1,
                r2,
                status: if rep.pass { "pass" } else { "fail" },
                report: Some(rounded_report(&rep)),
                error: None,
            },
            Err(e) => CaseRow {
                n,
                r1,
                r2,
                status: if matches!(e, Error::BudgetExceeded { .. }) {
                    "budget"
                } else {
                    "error"
                },
                report: None,
                error: Some(e.to_string()),
            },
        })
        .collect();

    match cli.format.unwrap_or(Format::Csv) {
        Format::Json => json(out, &rows)?,
        Format::Csv | Format::Text => {
            writeln!(out, "{VERIFY_CSV_HEADER}")?;
            for row in &rows {
                match &row.report {
                    Some(rep) => writeln!(out, "{}", verify_row(rep))?,
                    None => writeln!(out, "{},{},{},,,,{}", row.n, row.r1, row.r2, row.status)?,
                }
            }
        }
    }

    let count = |s: &str| rows.iter().filter(|r| r.status == s).count();
    let (failed, errors, budget) = (count("fail"), count("error"), count("budget"));
    eprintln!(
        "{} cases: {} pass, {failed} fail, {errors} error, {budget} over budget",
        rows.len(),
        count("pass")
    );
    if failed + errors > 0 {
        Err(Failure::Verification(format!(
            "{} of {} cases did not pass",
            failed + errors,
            rows.len()
        )))
    } else if budget > 0 {
        Err(Failure::Budget(format!(
            "{budget} cases exceed the dense limit"
        )))
    } else {
        Ok(())
    }
}

/// log₂ of a positive integer given in decimal.
fn log2_of_decimal(s: &str) -> Result<f64, Failure> {
    let v: BigUint = s.trim().parse().map_err(|_| {
        Failure::Usage(format!("--s expects a positive decimal integer, got {s:?}"))
    })?;
    let bits = v.bits();
    if bits == 0 {
        return Err(Failure::Usage("--s must be positive".into()));
    }
    // Keep the top 64 bits; the discarded tail changes log₂ by < 2⁻⁶³.
    let shift = bits.saturating_sub(64);
    let top: BigUint = &v >> shift;
    let top = top.iter_u64_digits().next().unwrap_or(0) as f64;
    Ok(top.log2() + shift as f64)
}

fn bounds(cli: &Cli, args: &BoundsArgs, out: Out) -> Result<(), Failure> {
    let from_s = args.s.as_deref().map(log2_of_decimal).transpose()?;
    let reports = args
        .n
        .iter()
        .map(|&n| {
            let log2_s = match (args.log2s, from_s, args.codim) {
                (Some(x), _, _) | (_, Some(x), _) => x,
                (_, _, Some(c)) => n as f64 - c,
                _ => unreachable!("clap requires one size argument"),
            };
            ball_bound(n, log2_s).map(|r| output::rounded_bounds(&r))
        })
        .collect::<Result<Vec<BoundsReport>, Error>>()?;

    match cli.format.unwrap_or(Format::Json) {
        Format::Json if reports.len() == 1 => json(out, &reports[0])?,
        Format::Json => json(out, &reports)?,
        Format::Csv => {
            writeln!(out, "{}", output::BOUNDS_CSV_HEADER)?;
            for r in &reports {
                writeln!(out, "{}", output::bounds_csv_row(r))?;
            }
        }
        Format::Text => {
            for (k, r) in reports.iter().enumerate() {
                if k > 0 {
                    writeln!(out)?;
                }
                let header: Vec<&str> = output::BOUNDS_CSV_HEADER.split(',').collect();
                let row = output::bounds_csv_row(r);
                for (h, v) in header.iter().zip(row.split(',')) {
                    writeln!(out, "{h} {v}")?;
                }
            }
        }
    }
    Ok(())
}

fn krawtchouk(cli: &Cli, args: &KrawtchoukArgs, out: Out) -> Result<(), Failure> {
    let (n, k) = (args.n, args.k);
    if n < 0 || k < 0 || k > n {
        return Err(Error::InvalidDegree { n, k }.into());
    }
    let format = cli.format.unwrap_or(Format::Text);
    let (key, items): (&str, Vec<String>) = if args.roots {
        let roots = if n <= EXACT_MAX_DIM as i64 {
            KrawtchoukPoly::build(n, k)?.roots(args.tol)?
        } else {
            jacobi_roots(n as u64, k as u64, args.tol)?
        };
        ("roots", roots.values.iter().map(|&x| num(x)).collect())
    } else if args.coeffs {
        let p = KrawtchoukPoly::build(n, k)?;
        let coeffs = p
            .coeffs()
            .iter()
            .map(|c| num_rational::BigRational::new(c.clone(), p.scale().clone()).to_string())
            .collect();
        ("coeffs", coeffs)
    } else if let Some(x) = args.eval {
        let p = KrawtchoukPoly::build(n, k)?;
        let value = num_rational::BigRational::new(p.eval_scaled(&x.into()), p.scale().clone());
        ("value", vec![value.to_string()])
    } else {
        ("first_root", vec![num(first_root(n, k, args.tol)?)])
    };
    match format {
        Format::Text => writeln!(out, "{}", items.join(" "))?,
        Format::Csv => writeln!(out, "{key}\n{}", items.join("\n"))?,
        Format::Json => {
            // Roots are numbers; exact rationals are strings.
            let value = match key {
                "roots" => serde_json::Value::from(
                    items
                        .iter()
                        .map(|s| s.parse::<f64>().unwrap())
                        .collect::<Vec<_>>(),
                ),
                "first_root" => serde_json::Value::from(items[0].parse::<f64>().unwrap()),
                "value" => serde_json::Value::from(items[0].clone()),
                _ => serde_json::Value::from(items),
            };
            let mut obj = serde_json::Map::new();
            obj.insert("n".into(), n.into());
            obj.insert("k".into(), k.into());
            obj.insert(key.into(), value);
            json(out, &obj)?;
        }
    }
    Ok(())
}

fn eigenfunction(cli: &Cli, args: &EigenfunctionArgs, out: Out) -> Result<(), Failure> {
    let (n, r1, r2) = args.radii.resolve();
    let t = args.t;
    let y = match &args.y {
        Some(s) => {
            let y = parse_bitstring(s)
                .filter(|_| s.len() == n as usize)
                .ok_or_else(|| Failure::Usage(format!("--y must be a bitstring of length {n}")))?;
            if y.count_ones() != t {
                return Err(Failure::Usage(format!(
                    "--y has weight {}, expected t = {t}",
                    y.count_ones()
                )));
            }
            y
        }
        None if t < 64 => (1u64 << t) - 1,
        None => u64::MAX,
    };
    let graph = InducedGraph::build(n, r1, r2, &limits(cli))?;
    let mut f = synthesize(&graph, t, y, args.which)?;
    f.lambda = round15(f.lambda);
    f.class_values
        .iter_mut()
        .flatten()
        .for_each(|v| *v = round15(*v));
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => json(out, &f)?,
        Format::Csv => {
            writeln!(out, "i,c,value")?;
            for (k, row) in f.class_values.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    writeln!(out, "{},{c},{}", f.t_star() + k as u32, num(*v))?;
                }
            }
        }
        Format::Text => {
            writeln!(out, "lambda {}", num(f.lambda))?;
            writeln!(out, "t {t}")?;
            writeln!(out, "y {}", bitstring(y, n))?;
            for (k, row) in f.class_values.iter().enumerate() {
                let vals: Vec<String> = row.iter().map(|&v| num(v)).collect();
                writeln!(out, "sphere {} {}", f.t_star() + k as u32, vals.join(" "))?;
            }
        }
    }
    Ok(())
}

fn incidence(cli: &Cli, args: &IncidenceArgs, out: Out) -> Result<(), Failure> {
    if args.r == 0 {
        return Err(Failure::Usage("incidence needs r >= 1".into()));
    }
    let shell = Radii {
        n: args.n,
        r: None,
        r1: Some(args.r - 1),
        r2: Some(args.r),
    };
    spectrum(cli, &shell, out)?;
    if args.check {
        let rep = verify_against_oracle(args.n, args.r - 1, args.r, 1e-8, &limits(cli))?;
        eprintln!(
            "oracle on {} vertices: max deviation {} {}",
            rep.vertex_count,
            num(rep.max_deviation),
            if rep.pass { "PASS" } else { "FAIL" }
        );
        if !rep.pass {
            return Err(Failure::Verification(
                "incidence spectrum disagrees with the oracle".into(),
            ));
        }
    }
    Ok(())
}

fn edges(cli: &Cli, radii: &Radii, out: Out) -> Result<(), Failure> {
    let (n, r1, r2) = radii.resolve();
    let graph = InducedGraph::build(n, r1, r2, &limits(cli))?;
    match cli.format.unwrap_or(Format::Text) {
        Format::Text => graph.write_edge_list(&mut *out)?,
        Format::Csv => {
            writeln!(out, "u,v")?;
            for (u, v) in graph.edges() {
                writeln!(out, "{u},{v}")?;
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct EdgeList {
                n: u32,
                r1: u32,
                r2: u32,
                vertices: Vec<String>,
                edges: Vec<(usize, usize)>,
            }
            let list = EdgeList {
                n,
                r1,
                r2,
                vertices: graph.vertices().iter().map(|&m| bitstring(m, n)).collect(),
                edges: graph.edges().collect(),
            };
            json(out, &list)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_log2() {
        assert_eq!(log2_of_decimal("1").unwrap(), 0.0);
        assert_eq!(log2_of_decimal("1024").unwrap(), 10.0);
        let big = format!("{}", BigUint::from(1u8) << 300u32);
        assert_eq!(log2_of_decimal(&big).unwrap(), 300.0);
        assert!(log2_of_decimal("0").is_err());
        assert!(log2_of_decimal("-3").is_err());
    }
}
