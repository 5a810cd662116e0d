use serde::{Deserialize, Serialize};

use super::{Corpus, StatsError};
use crate::graph::{implicit_units, validate_graph};
use crate::refinement::{ImplicitCategory, ReviewStatus};
use crate::scalar::{round_half_up_2, Scalar};

/// Count and share per implicit category.
///
/// Shares are kept exact (in the scalar type) and only rounded when
/// rendered.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution<F> {
    counts: [usize; 6],
    percentages: [F; 6],
}

impl<F: Scalar> Distribution<F> {
    pub fn from_counts(counts: impl IntoIterator<Item = (ImplicitCategory, usize)>) -> Self {
        let mut array = [0usize; 6];
        for (c, n) in counts {
            array[c as usize] += n;
        }
        let total: usize = array.iter().sum();
        let percentages = array.map(|n| {
            if total == 0 {
                F::zero()
            } else {
                F::from_count(n) * F::hundred() / F::from_count(total)
            }
        });
        Distribution {
            counts: array,
            percentages,
        }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn count(&self, c: ImplicitCategory) -> usize {
        self.counts[c as usize]
    }

    pub fn percentage(&self, c: ImplicitCategory) -> F {
        self.percentages[c as usize]
    }

    /// Share rounded half-up to two decimals.
    pub fn rounded_percentage(&self, c: ImplicitCategory) -> f64 {
        round_half_up_2(self.percentage(c).to_f64_lossy())
    }

    pub fn rounded_sum(&self) -> f64 {
        let cents: f64 = ImplicitCategory::ALL
            .iter()
            .map(|c| (self.rounded_percentage(*c) * 100.0).round())
            .sum();
        cents / 100.0
    }

    pub fn iter(&self) -> impl Iterator<Item = (ImplicitCategory, usize, F)> + '_ {
        ImplicitCategory::ALL
            .into_iter()
            .map(|c| (c, self.count(c), self.percentage(c)))
    }

    pub fn report(&self) -> DistributionReport {
        DistributionReport {
            total: self.total(),
            categories: ImplicitCategory::ALL
                .into_iter()
                .map(|c| CategoryShare {
                    category: c,
                    count: self.count(c),
                    percentage: self.rounded_percentage(c),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategoryShare {
    pub category: ImplicitCategory,
    pub count: usize,
    pub percentage: f64,
}

/// Rendered form of a [`Distribution`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub total: usize,
    pub categories: Vec<CategoryShare>,
}

/// Counts confirmed categories on valid (Participant) implicit units.
///
/// In strict mode a valid implicit unit without a confirmed category is an
/// error; otherwise it is skipped. Passages failing validation are skipped.
pub fn category_distribution<F: Scalar>(
    corpus: &Corpus,
    strict: bool,
) -> Result<Distribution<F>, StatsError> {
    let mut counts = [0usize; 6];
    for p in &corpus.passages {
        if !validate_graph(p).ok() {
            continue;
        }
        let doc = corpus.refinement(p.id());
        for unit in implicit_units(p).into_iter().filter(|u| u.valid) {
            let category = doc
                .and_then(|d| d.entry(&unit.node))
                .filter(|e| e.status == ReviewStatus::Confirmed)
                .and_then(|e| e.category);
            match category {
                Some(c) => counts[c as usize] += 1,
                None if strict => {
                    return Err(StatsError::UncategorizedImplicit {
                        passage: p.id().to_string(),
                        node: unit.node,
                    })
                }
                None => {}
            }
        }
    }
    Ok(Distribution::from_counts(
        ImplicitCategory::ALL.into_iter().zip(counts),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;
    use ImplicitCategory::*;

    #[test]
    fn single_item_is_all_of_one_category() {
        let d = Distribution::<f64>::from_counts([(Deictic, 1)]);
        assert_eq!(d.rounded_percentage(Deictic), 100.0);
        for c in [
            Generic,
            GenreBased,
            TypeIdentifiable,
            NonSpecific,
            IteratedSet,
        ] {
            assert_eq!(d.rounded_percentage(c), 0.0);
        }
    }

    #[test]
    fn uniform_counts_give_equal_shares() {
        // 10 of 60 each: 16.666.. rounds to 16.67
        let d = Distribution::<f64>::from_counts(ImplicitCategory::ALL.map(|c| (c, 10)));
        for c in ImplicitCategory::ALL {
            assert_eq!(d.rounded_percentage(c), 16.67);
        }
        let exact = Distribution::<Rational64>::from_counts(ImplicitCategory::ALL.map(|c| (c, 10)));
        assert_eq!(exact.percentage(Deictic), Rational64::new(50, 3));
    }

    #[test]
    fn empty_distribution_is_all_zero() {
        let d = Distribution::<f64>::from_counts([]);
        assert_eq!(d.total(), 0);
        assert!(d.iter().all(|(_, n, p)| n == 0 && p == 0.0));
    }
}
