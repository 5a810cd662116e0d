//! Report builders shared by the batch commands and the service, so both
//! produce the same bytes for the same corpus state.

use std::fmt::Write;

use serde::Serialize;
use ucca_refine::heuristics::SuggestionsDocument;
use ucca_refine::stats::render::{
    render_comparison, render_distribution, render_stats, OutputFormat,
};
use ucca_refine::stats::{
    category_distribution, compare_distributions, corpus_stats, figref_row, ComparisonTable,
    Corpus, Distribution, DistributionReport, StatsError, StatsReport,
};

/// Everything `stats` prints.
#[derive(Clone, Debug, Serialize)]
pub struct StatsOutput {
    pub stats: StatsReport,
    /// Confirmed-category shares; present when refinements were loaded.
    pub distribution: Option<DistributionReport>,
    pub comparison: Option<ComparisonTable<f64>>,
    #[serde(skip)]
    shares: Option<Distribution<f64>>,
}

impl StatsOutput {
    pub fn build(
        corpus: &Corpus,
        with_distribution: bool,
        strict: bool,
        compare: bool,
    ) -> Result<Self, StatsError> {
        let stats = corpus_stats(corpus);
        let shares = if with_distribution {
            Some(category_distribution::<f64>(corpus, strict)?)
        } else {
            None
        };
        let comparison = match (&shares, compare) {
            (Some(d), true) => Some(compare_distributions(&[
                d.comparison_row("Ours"),
                figref_row(),
            ])),
            _ => None,
        };
        Ok(StatsOutput {
            stats,
            distribution: shares.as_ref().map(Distribution::report),
            comparison,
            shares,
        })
    }

    pub fn to_json(&self) -> String {
        json(self)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        let mut out = render_stats(&self.stats, format);
        if let Some(d) = &self.shares {
            out.push('\n');
            out.push_str(&render_distribution(d, format));
        }
        if let Some(t) = &self.comparison {
            out.push('\n');
            out.push_str(&render_comparison(t, format));
        }
        if format == OutputFormat::Text && !self.stats.excluded.is_empty() {
            let _ = writeln!(
                out,
                "\nexcluded (invalid): {}",
                self.stats.excluded.join(", ")
            );
        }
        out
    }
}

/// Pretty JSON with a trailing newline.
pub fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

pub fn render_suggestions(docs: &[SuggestionsDocument], format: OutputFormat) -> String {
    let header: Vec<String> = [
        "passage",
        "scene",
        "slot",
        "node",
        "category",
        "rule",
        "confidence",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let rows: Vec<Vec<String>> = docs
        .iter()
        .flat_map(|d| &d.suggestions)
        .map(|s| {
            vec![
                s.site.passage_id.clone(),
                s.site.scene.clone(),
                s.site.slot.to_string(),
                s.site.implicit_node.clone().unwrap_or_else(|| "-".into()),
                s.category.to_string(),
                s.rule.clone(),
                s.confidence.to_string(),
            ]
        })
        .collect();
    ucca_refine::stats::render::table(&header, &rows, format)
}
