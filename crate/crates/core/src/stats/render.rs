//! Plain-text and tab-delimited tables.

use std::fmt::Write;
use std::str::FromStr;

use super::{ComparisonTable, CorpusStats, DiffReport, Distribution, KappaResult, StatsReport};
use crate::scalar::{round_half_up_2, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    /// Space-aligned columns for the terminal.
    Text,
    /// Tab-separated values with a header row.
    Delimited,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "delimited" | "tsv" => Ok(OutputFormat::Delimited),
            other => Err(format!("unknown table format '{other}'")),
        }
    }
}

/// Marker for a cell the scheme does not define.
pub const ABSENT: &str = "\\";

pub fn table(header: &[String], rows: &[Vec<String>], format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Delimited => {
            out.push_str(&header.join("\t"));
            out.push('\n');
            for r in rows {
                out.push_str(&r.join("\t"));
                out.push('\n');
            }
        }
        OutputFormat::Text => {
            let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
            for r in rows {
                for (i, c) in r.iter().enumerate() {
                    widths[i] = widths[i].max(c.chars().count());
                }
            }
            let line = |cells: &[String]| {
                let mut s = String::new();
                for (i, c) in cells.iter().enumerate() {
                    if i == 0 {
                        let _ = write!(s, "{:<w$}", c, w = widths[i]);
                    } else {
                        let _ = write!(s, "  {:>w$}", c, w = widths[i]);
                    }
                }
                s.trim_end().to_string()
            };
            out.push_str(&line(header));
            out.push('\n');
            for r in rows {
                out.push_str(&line(r));
                out.push('\n');
            }
        }
    }
    out
}

fn pct(v: f64) -> String {
    format!("{:.2}", round_half_up_2(v))
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

pub fn render_stats(report: &StatsReport, format: OutputFormat) -> String {
    let s: &CorpusStats = &report.stats;
    let header = strings(&["measure", "value"]);
    let rows: Vec<Vec<String>> = [
        ("passages", s.n_passages),
        ("passages with implicit", s.n_passages_with_implicit),
        ("sentences", s.n_sentences),
        ("sentences with implicit", s.n_sentences_with_implicit),
        ("implicit units", s.n_implicit_total),
        ("valid implicit units", s.n_implicit_valid),
        ("tokens", s.n_tokens),
        ("nodes", s.n_nodes),
        ("edges", s.n_edges),
        ("excluded passages", report.excluded.len()),
    ]
    .iter()
    .map(|(k, v)| vec![k.to_string(), v.to_string()])
    .collect();
    table(&header, &rows, format)
}

pub fn render_distribution<F: Scalar>(d: &Distribution<F>, format: OutputFormat) -> String {
    let header = strings(&["category", "count", "percent"]);
    let mut rows: Vec<Vec<String>> = d
        .iter()
        .map(|(c, n, p)| vec![c.name().to_string(), n.to_string(), pct(p.to_f64_lossy())])
        .collect();
    rows.push(vec![
        "total".into(),
        d.total().to_string(),
        pct(d.rounded_sum()),
    ]);
    table(&header, &rows, format)
}

pub fn render_comparison<F: Scalar>(t: &ComparisonTable<F>, format: OutputFormat) -> String {
    let mut header = vec!["scheme".to_string()];
    header.extend(t.columns.iter().cloned());
    let absent = match format {
        OutputFormat::Text => ABSENT,
        OutputFormat::Delimited => "",
    };
    let rows: Vec<Vec<String>> = t
        .rows
        .iter()
        .map(|r| {
            let mut cells = vec![r.name.clone()];
            cells.extend(r.cells.iter().map(|c| match c {
                Some(v) => pct(v.to_f64_lossy()),
                None => absent.to_string(),
            }));
            cells
        })
        .collect();
    table(&header, &rows, format)
}

pub fn render_kappa<F: Scalar>(k: &KappaResult<F>, format: OutputFormat) -> String {
    let header = strings(&["items", "observed", "expected", "kappa"]);
    let f = |v: F| format!("{:.4}", v.to_f64_lossy());
    let rows = vec![vec![
        k.n.to_string(),
        f(k.observed),
        f(k.expected),
        f(k.kappa),
    ]];
    table(&header, &rows, format)
}

pub fn render_diff(d: &DiffReport, format: OutputFormat) -> String {
    let header = strings(&["measure", "original", "refined", "delta"]);
    let (a, b, x) = (&d.original, &d.refined, &d.delta);
    let rows: Vec<Vec<String>> = [
        ("passages", a.n_passages, b.n_passages, x.n_passages),
        (
            "passages with implicit",
            a.n_passages_with_implicit,
            b.n_passages_with_implicit,
            x.n_passages_with_implicit,
        ),
        ("sentences", a.n_sentences, b.n_sentences, x.n_sentences),
        (
            "sentences with implicit",
            a.n_sentences_with_implicit,
            b.n_sentences_with_implicit,
            x.n_sentences_with_implicit,
        ),
        (
            "implicit units",
            a.n_implicit_total,
            b.n_implicit_total,
            x.n_implicit_total,
        ),
        (
            "valid implicit units",
            a.n_implicit_valid,
            b.n_implicit_valid,
            x.n_implicit_valid,
        ),
    ]
    .iter()
    .map(|(k, a, b, x)| {
        vec![
            k.to_string(),
            a.to_string(),
            b.to_string(),
            format!("{x:+}"),
        ]
    })
    .collect();
    let mut out = table(&header, &rows, format);
    if format == OutputFormat::Text {
        let changed: usize = d.passages.len();
        let _ = writeln!(
            out,
            "{changed} passage(s) with implicit changes, {} only in original, {} only in refined",
            d.only_original.len(),
            d.only_refined.len()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{compare_distributions, figref_row};

    #[test]
    fn absent_cells_render_per_format() {
        let ours = ("Ours".to_string(), vec![("Deictic".to_string(), 12.5f64)]);
        let t = compare_distributions(&[ours, figref_row::<f64>()]);
        let text = render_comparison(&t, OutputFormat::Text);
        assert!(text.lines().nth(1).unwrap().ends_with(ABSENT));
        let tsv = render_comparison(&t, OutputFormat::Delimited);
        assert!(tsv.lines().nth(1).unwrap().ends_with('\t'));
        assert!(tsv.lines().nth(1).unwrap().starts_with("Ours\t12.50"));
    }
}
