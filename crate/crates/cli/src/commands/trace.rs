use std::path::Path;

use anyhow::{bail, Context};

use crate::args::parse_exponent;
use crate::manifest::{absolute, TraceInput};
use crate::output::{fmt_f64, write_atomic};
use crate::Outcome;

use super::solve::TRACE_HEADER;

pub const PLOT_FILE: &str = "trace_plot_data.csv";

/// `P=PATH`, or a bare path whose file name has a `p<value>` token such as
/// `trace_p0.25.csv`.
pub fn parse_input(s: &str) -> anyhow::Result<TraceInput> {
    if let Some((p, path)) = s.split_once('=') {
        if let Ok(p) = parse_exponent(p) {
            return Ok(TraceInput {
                p,
                path: absolute(Path::new(path))?,
            });
        }
    }
    let path = Path::new(s);
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
    let p = stem
        .split(['_', '-'])
        .filter_map(|tok| tok.strip_prefix('p'))
        .find_map(|v| parse_exponent(v).ok())
        .with_context(|| format!("cannot tell p for {s}; pass it as P=PATH"))?;
    Ok(TraceInput {
        p,
        path: absolute(path)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub k: usize,
    pub rho: f64,
}

pub fn read_trace(path: &Path) -> anyhow::Result<Vec<TraceRow>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_trace(&text).with_context(|| format!("in trace {}", path.display()))
}

pub fn parse_trace(text: &str) -> anyhow::Result<Vec<TraceRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != TRACE_HEADER {
        bail!("expected header `{TRACE_HEADER}`, found `{}`", header.join(","));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.with_context(|| format!("row {}", i + 1))?;
        let k = rec[0]
            .parse()
            .with_context(|| format!("row {}: bad k `{}`", i + 1, &rec[0]))?;
        let rho = rec[2]
            .parse()
            .with_context(|| format!("row {}: bad rho `{}`", i + 1, &rec[2]))?;
        rows.push(TraceRow { k, rho });
    }
    if rows.is_empty() {
        bail!("trace has no rows");
    }
    Ok(rows)
}

pub fn run(dir: &Path, inputs: &[TraceInput]) -> anyhow::Result<Outcome> {
    let mut out = String::from("p,k,rho\n");
    for input in inputs {
        for row in read_trace(&input.path)? {
            out.push_str(&format!("{},{},{}\n", input.p, row.k, fmt_f64(row.rho)));
        }
    }
    write_atomic(dir, PLOT_FILE, out.as_bytes())?;
    Ok(Outcome::Done)
}
