use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::combinatorics::{catalan, even_narayana, narayana};
use crate::error::{Error, Result};

use super::config::MAX_TABLE_N;
use super::run::ResultRow;

pub const CSV_HEADER: [&str; 13] = [
    "experiment",
    "n",
    "n_b",
    "f",
    "q",
    "samples",
    "mean_d1",
    "stderr",
    "stddev",
    "analytic_page",
    "analytic_q0",
    "p_discrimination",
    "wall_time",
];

/// `%.12g`: 12 significant digits, trailing zeros dropped, exponent form
/// outside `1e-4 ..= 1e12`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let fixed = format!("{:.*}", (11 - exp) as usize, x);
    if fixed.contains('.') {
        fixed.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        fixed
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(source) => Error::Io {
                path: path.to_path_buf(),
                source,
            },
            _ => unreachable!(),
        }
    } else {
        Error::Csv(e)
    }
}

/// Writes the header and one record per row.
pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    Ok(write_rows(rows, out)?)
}

fn write_rows<W: Write>(rows: &[ResultRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.experiment.clone(),
            r.n.to_string(),
            r.n_b.to_string(),
            format_float(r.f),
            opt(r.q),
            r.samples.to_string(),
            format_float(r.mean_d1),
            format_float(r.stderr),
            format_float(r.stddev),
            opt(r.analytic_page),
            opt(r.analytic_q0),
            opt(r.p_discrimination),
            opt(r.wall_time),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_error(path))?;
    write_rows(rows, BufWriter::new(file)).map_err(|e| csv_error(path, e))
}

fn parse_opt(field: &str) -> std::result::Result<Option<f64>, String> {
    if field.is_empty() {
        Ok(None)
    } else {
        field.parse().map(Some).map_err(|e| format!("{field:?}: {e}"))
    }
}

/// Parses CSV written by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let header = reader.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Dimension(format!("unexpected CSV header {header:?}")));
    }
    let bad = |line: usize, msg: String| Error::Dimension(format!("{}:{line}: {msg}", path.display()));
    reader
        .records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec?;
            let line = i + 2;
            let num = |j: usize| parse_opt(&rec[j]).map_err(|m| bad(line, m));
            let req = |j: usize| num(j)?.ok_or_else(|| bad(line, format!("missing {}", CSV_HEADER[j])));
            let int = |j: usize| rec[j].parse::<u64>().map_err(|e| bad(line, format!("{}: {e}", CSV_HEADER[j])));
            Ok(ResultRow {
                experiment: rec[0].to_string(),
                n: int(1)? as u32,
                n_b: int(2)? as u32,
                f: req(3)?,
                q: num(4)?,
                samples: int(5)? as usize,
                mean_d1: req(6)?,
                stderr: req(7)?,
                stddev: req(8)?,
                analytic_page: num(9)?,
                analytic_q0: num(10)?,
                p_discrimination: num(11)?,
                wall_time: num(12)?,
            })
        })
        .collect()
}

/// Whitespace-separated columns, one block per `(experiment, N, Q)` separated
/// by two blank lines (gnuplot `index`); missing values are `NaN`.
pub fn emit_gnuplot(rows: &[ResultRow], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_error(path))?;
    let mut w = BufWriter::new(file);
    let g = |x: Option<f64>| x.map(format_float).unwrap_or_else(|| "NaN".into());
    let mut write = || -> std::io::Result<()> {
        writeln!(w, "# f mean_d1 stderr stddev analytic_page analytic_q0")?;
        let mut previous: Option<(&str, u32, Option<u64>)> = None;
        for r in rows {
            let key = (r.experiment.as_str(), r.n, r.q.map(f64::to_bits));
            if previous.is_some_and(|p| p != key) {
                writeln!(w)?;
                writeln!(w)?;
            }
            if previous != Some(key) {
                let q = r.q.map(|q| format!(" Q={}", format_float(q))).unwrap_or_default();
                writeln!(w, "# {} N={}{q}", r.experiment, r.n)?;
            }
            previous = Some(key);
            writeln!(
                w,
                "{} {} {} {} {} {}",
                format_float(r.f),
                format_float(r.mean_d1),
                format_float(r.stderr),
                format_float(r.stddev),
                g(r.analytic_page),
                g(r.analytic_q0)
            )?;
        }
        w.flush()
    };
    write().map_err(io_error(path))
}

/// One `(n, k)` entry of the non-crossing permutation counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatoricsRow {
    pub n: usize,
    pub k: usize,
    pub narayana: String,
    /// Only for even `n` and `k <= n/2`.
    pub even_narayana: Option<String>,
    pub catalan: String,
}

pub fn combinatorics_table(n_max: usize) -> Result<Vec<CombinatoricsRow>> {
    if n_max == 0 || n_max > MAX_TABLE_N {
        return Err(Error::config("n_max", format!("must be in 1..={MAX_TABLE_N}")));
    }
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let cat = catalan(n).to_string();
        for k in 1..=n {
            let even = if n % 2 == 0 && k <= n / 2 {
                Some(even_narayana(n, k)?.to_string())
            } else {
                None
            };
            rows.push(CombinatoricsRow {
                n,
                k,
                narayana: narayana(n, k)?.to_string(),
                even_narayana: even,
                catalan: cat.clone(),
            });
        }
    }
    Ok(rows)
}

pub fn write_combinatorics_csv<W: Write>(rows: &[CombinatoricsRow], out: W) -> Result<()> {
    Ok(write_table(rows, out)?)
}

fn write_table<W: Write>(rows: &[CombinatoricsRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "k", "narayana", "even_narayana", "catalan"])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.k.to_string(),
            r.narayana.clone(),
            r.even_narayana.clone().unwrap_or_default(),
            r.catalan.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_combinatorics_csv(rows: &[CombinatoricsRow], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_error(path))?;
    write_table(rows, BufWriter::new(file)).map_err(|e| csv_error(path, e))
}
