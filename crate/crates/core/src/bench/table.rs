use std::path::Path;

use super::aggregate::{Aggregate, AlgorithmSummary};
use super::runner::write_file;
use crate::validity::MetricBundle;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    /// Full precision, parseable by [`parse_table_csv`].
    Csv,
    /// GitHub table, 3 decimals.
    Markdown,
}

const PREFIX: [&str; 3] = ["algorithm", "statistic", "runs"];
const STATISTICS: [&str; 3] = ["mean", "min", "max"];

fn rows(g: &AlgorithmSummary) -> [(&'static str, &MetricBundle, Option<usize>); 3] {
    [
        ("mean", &g.mean, None),
        ("min", &g.min, Some(g.err_min_run)),
        ("max", &g.max, Some(g.err_max_run)),
    ]
}

pub fn render_table(agg: &Aggregate, format: TableFormat) -> String {
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            let header: Vec<&str> = PREFIX
                .iter()
                .chain(MetricBundle::HEADER.iter())
                .copied()
                .chain(["err_run"])
                .collect();
            out += &header.join(",");
            out.push('\n');
            for g in &agg.groups {
                for (stat, b, run) in rows(g) {
                    let run = run.map(|r| r.to_string()).unwrap_or_default();
                    out += &format!(
                        "{},{stat},{},{},{run}\n",
                        g.algorithm,
                        g.runs,
                        b.to_csv_row()
                    );
                }
            }
        }
        TableFormat::Markdown => {
            out += "| algorithm | statistic |";
            for h in MetricBundle::HEADER {
                out += &format!(" {h} |");
            }
            out += "\n|---|---|";
            out += &"---:|".repeat(MetricBundle::HEADER.len());
            out.push('\n');
            for g in &agg.groups {
                for (stat, b, _) in rows(g) {
                    out += &format!("| {} | {stat} |", g.algorithm);
                    for v in b.values() {
                        out += &format!(" {v:.3} |");
                    }
                    out.push('\n');
                }
            }
        }
    }
    out
}

/// Writes the table, creating parent directories as needed.
pub fn emit_table(agg: &Aggregate, format: TableFormat, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), render_table(agg, format).as_bytes())
}

/// Inverse of the CSV rendering.
pub fn parse_table_csv(text: &str) -> Result<Aggregate> {
    let bad = |line: usize, msg: String| Error::Format(format!("table line {line}: {msg}"));
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| bad(1, "missing header".into()))?;
    let expected = render_table(&Aggregate { groups: vec![] }, TableFormat::Csv);
    if header != expected.trim_end() {
        return Err(bad(1, format!("unexpected header {header:?}")));
    }
    let mut groups: Vec<AlgorithmSummary> = Vec::new();
    let mut pending: Vec<(usize, Vec<&str>)> = Vec::new();
    for (idx, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(bad(
                idx + 1,
                format!("expected 11 fields, found {}", fields.len()),
            ));
        }
        pending.push((idx + 1, fields));
        if pending.len() < 3 {
            continue;
        }
        let block = std::mem::take(&mut pending);
        let algorithm = block[0].1[0];
        let mut bundles = Vec::new();
        let mut err_runs = Vec::new();
        for ((line_no, f), stat) in block.iter().zip(STATISTICS) {
            if f[0] != algorithm || f[1] != stat {
                return Err(bad(
                    *line_no,
                    format!("expected {algorithm} {stat}, found {} {}", f[0], f[1]),
                ));
            }
            let mut v = [0.0; 7];
            for (slot, s) in v.iter_mut().zip(&f[3..10]) {
                *slot = s
                    .parse()
                    .map_err(|_| bad(*line_no, format!("bad number {s:?}")))?;
            }
            bundles.push(MetricBundle::from_values(v));
            err_runs.push(f[10]);
        }
        let (line_no, f) = &block[0];
        let runs = f[2]
            .parse()
            .map_err(|_| bad(*line_no, format!("bad run count {:?}", f[2])))?;
        let run_at = |i: usize| {
            err_runs[i]
                .parse::<usize>()
                .map_err(|_| bad(block[i].0, format!("bad err_run {:?}", err_runs[i])))
        };
        groups.push(AlgorithmSummary {
            algorithm: algorithm.to_string(),
            runs,
            mean: bundles[0],
            min: bundles[1],
            max: bundles[2],
            err_min_run: run_at(1)?,
            err_max_run: run_at(2)?,
        });
    }
    if let Some((line_no, _)) = pending.first() {
        return Err(bad(*line_no, "incomplete mean/min/max block".into()));
    }
    Ok(Aggregate { groups })
}
