use num_rational::Rational64;
use proptest::prelude::*;

use ucca_refine::fixtures::{
    generate_corpus, original_corpus, refined_corpus, CorpusShape, ORIGINAL_SHAPE,
    REFINED_CATEGORY_COUNTS, REFINED_SHAPE,
};
use ucca_refine::refinement::ImplicitCategory;
use ucca_refine::stats::render::{render_comparison, OutputFormat};
use ucca_refine::stats::{
    category_distribution, cohen_kappa, compare_distributions, corpus_stats, diff_corpora,
    figref_row, Corpus, Distribution, StatsError,
};

use ImplicitCategory::*;

#[test]
fn generated_corpora_hit_their_counters() {
    let original = corpus_stats(&original_corpus());
    assert_eq!(original.stats.summary_row(), ORIGINAL_SHAPE.row());
    assert!(original.excluded.is_empty());
    let refined = corpus_stats(&refined_corpus());
    assert_eq!(refined.stats.summary_row(), REFINED_SHAPE.row());
}

#[test]
fn generator_is_seed_deterministic() {
    let a = generate_corpus(&ORIGINAL_SHAPE, 5).unwrap();
    let b = generate_corpus(&ORIGINAL_SHAPE, 5).unwrap();
    assert_eq!(a, b);
    let bad = CorpusShape {
        implicit_total: 1,
        ..ORIGINAL_SHAPE
    };
    assert!(generate_corpus(&bad, 5).is_err());
}

#[test]
fn diff_between_versions() {
    let d = diff_corpora(&original_corpus(), &refined_corpus());
    assert_eq!(d.delta.n_implicit_valid, 250);
    assert_eq!(d.delta.n_passages_with_implicit, 13);
    assert_eq!(d.delta.n_passages, 0);
    assert!(d.only_original.is_empty() && d.only_refined.is_empty());
    let added: usize = d.passages.iter().map(|p| p.added.len()).sum();
    let removed: usize = d.passages.iter().map(|p| p.removed.len()).sum();
    assert_eq!(added as i64 - removed as i64, d.delta.n_implicit_total);
}

#[test]
fn refined_distribution() {
    let d = category_distribution::<f64>(&refined_corpus(), true).unwrap();
    assert_eq!(d.total(), 348);
    for (c, n) in REFINED_CATEGORY_COUNTS {
        assert_eq!(d.count(c), n);
        // Oracle: plain share of the total.
        let share = n as f64 * 100.0 / 348.0;
        assert!((d.percentage(c) - share).abs() < 1e-9);
    }
    let published = [
        (Deictic, 17.52),
        (Generic, 18.10),
        (GenreBased, 25.57),
        (TypeIdentifiable, 9.48),
        (NonSpecific, 26.72),
        (IteratedSet, 2.59),
    ];
    for (c, p) in published {
        assert!(
            (d.percentage(c) - p).abs() <= 0.01,
            "{c}: {}",
            d.percentage(c)
        );
    }
    let sum: f64 = ImplicitCategory::ALL
        .iter()
        .map(|c| d.rounded_percentage(*c))
        .sum();
    assert!((99.95..=100.05).contains(&sum), "{sum}");

    let exact = category_distribution::<Rational64>(&refined_corpus(), true).unwrap();
    let total: Rational64 = ImplicitCategory::ALL
        .iter()
        .map(|c| exact.percentage(*c))
        .sum();
    assert_eq!(total, Rational64::from_integer(100));
}

#[test]
fn strict_distribution_needs_every_category() {
    let corpus = original_corpus();
    assert!(matches!(
        category_distribution::<f64>(&corpus, true),
        Err(StatsError::UncategorizedImplicit { .. })
    ));
    assert_eq!(
        category_distribution::<f64>(&corpus, false)
            .unwrap()
            .total(),
        0
    );
    assert_eq!(
        category_distribution::<f64>(&Corpus::default(), true)
            .unwrap()
            .total(),
        0
    );
}

#[test]
fn comparison_with_figref() {
    let ours = Distribution::<f64>::from_counts(REFINED_CATEGORY_COUNTS).comparison_row("Ours");
    let table = compare_distributions(&[ours, figref_row::<f64>()]);
    assert_eq!(
        &table.columns[..4],
        ["Type-identifiable", "Deictic", "Generic", "Non-specific"]
    );
    assert_eq!(table.cell("FiGref", "Genre-based"), None);
    assert_eq!(table.cell("Ours", "Invalid"), None);
    assert_eq!(table.cell("FiGref", "Invalid"), Some(53.0));
    assert_eq!(table.row_total("FiGref"), Some(100.0));
    let delta = &table.deltas()[0];
    assert_eq!(delta.differences.len(), 4);
    let text = render_comparison(&table, OutputFormat::Text);
    assert!(text.contains("17.53"));
}

#[test]
fn kappa_reference_cases() {
    let labels = [Deictic, Generic, GenreBased, NonSpecific, Deictic];
    let identity = cohen_kappa::<f64>(&labels, &labels).unwrap();
    assert!((identity.kappa - 1.0).abs() < 1e-12);

    // Agreement at chance: two raters, balanced marginals, half agreement.
    let zero = cohen_kappa::<f64>(
        &[Deictic, Deictic, Generic, Generic],
        &[Deictic, Generic, Deictic, Generic],
    )
    .unwrap();
    assert!(zero.kappa.abs() < 1e-12);
    // Systematic disagreement on a balanced two-way split.
    let minus = cohen_kappa::<f64>(&[Deictic, Generic], &[Generic, Deictic]).unwrap();
    assert!((minus.kappa + 1.0).abs() < 1e-12);
}

fn category() -> impl Strategy<Value = ImplicitCategory> {
    prop::sample::select(ImplicitCategory::ALL.to_vec())
}

proptest! {
    #[test]
    fn kappa_is_symmetric(pairs in prop::collection::vec((category(), category()), 1..60)) {
        let (a, b): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        match (cohen_kappa::<Rational64>(&a, &b), cohen_kappa::<Rational64>(&b, &a)) {
            (Ok(x), Ok(y)) => {
                prop_assert_eq!(x.kappa, y.kappa);
                prop_assert!(x.kappa <= Rational64::from_integer(1));
            }
            (Err(_), Err(_)) => {}
            other => prop_assert!(false, "asymmetric result {:?}", other),
        }
    }
}
