use std::collections::BTreeMap;

use serde::Serialize;

use super::StatsError;
use crate::refinement::ImplicitCategory;
use crate::scalar::Scalar;

/// Item id to category, as produced by one annotator.
pub type Labeling = BTreeMap<String, ImplicitCategory>;

/// Two-rater agreement over the six categories.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KappaResult<F> {
    pub observed: F,
    pub expected: F,
    pub kappa: F,
    pub n: usize,
}

/// Cohen's kappa for two positional labelings of the same items.
///
/// `observed` is the fraction of items labelled alike, `expected` the chance
/// agreement from the two raters' marginals, and
/// `kappa = (observed - expected) / (1 - expected)`.
pub fn cohen_kappa<F: Scalar>(
    first: &[ImplicitCategory],
    second: &[ImplicitCategory],
) -> Result<KappaResult<F>, StatsError> {
    if first.len() != second.len() {
        return Err(StatsError::LengthMismatch(first.len(), second.len()));
    }
    let n = first.len();
    if n == 0 {
        return Err(StatsError::EmptyItems);
    }
    let agree = first.iter().zip(second).filter(|(a, b)| a == b).count();
    let mut marginal_a = [0usize; 6];
    let mut marginal_b = [0usize; 6];
    for (a, b) in first.iter().zip(second) {
        marginal_a[*a as usize] += 1;
        marginal_b[*b as usize] += 1;
    }
    let chance: usize = marginal_a.iter().zip(&marginal_b).map(|(a, b)| a * b).sum();
    if chance == n * n {
        return Err(StatsError::DegenerateAgreement);
    }
    let observed = F::from_count(agree) / F::from_count(n);
    let expected = F::from_count(chance) / F::from_count(n * n);
    let kappa = (observed - expected) / (F::one() - expected);
    Ok(KappaResult {
        observed,
        expected,
        kappa,
        n,
    })
}

/// Kappa over two keyed labelings that must cover the same items.
pub fn cohen_kappa_labelings<F: Scalar>(
    first: &Labeling,
    second: &Labeling,
) -> Result<KappaResult<F>, StatsError> {
    let only_first: Vec<String> = first
        .keys()
        .filter(|k| !second.contains_key(*k))
        .cloned()
        .collect();
    let only_second: Vec<String> = second
        .keys()
        .filter(|k| !first.contains_key(*k))
        .cloned()
        .collect();
    if !only_first.is_empty() || !only_second.is_empty() {
        return Err(StatsError::ItemMismatch {
            only_first,
            only_second,
        });
    }
    let a: Vec<ImplicitCategory> = first.values().copied().collect();
    let b: Vec<ImplicitCategory> = second.values().copied().collect();
    cohen_kappa(&a, &b)
}

/// Reads `item<TAB>Category` lines. Blank lines and `#` comments are skipped.
pub fn parse_labeling(text: &str) -> Result<Labeling, StatsError> {
    let mut out = Labeling::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| StatsError::Labeling {
            line: i + 1,
            message,
        };
        let (item, label) = line
            .split_once('\t')
            .ok_or_else(|| err("expected item<TAB>category".to_string()))?;
        let category = label
            .parse()
            .map_err(|e: crate::refinement::UnknownCategory| err(e.to_string()))?;
        if out.insert(item.to_string(), category).is_some() {
            return Err(err(format!("item '{item}' labelled twice")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;
    use ImplicitCategory::*;

    #[test]
    fn hand_computed_cases_are_exact() {
        let r = cohen_kappa::<Rational64>(
            &[Deictic, Deictic, Generic, Generic],
            &[Deictic, Generic, Generic, Deictic],
        )
        .unwrap();
        assert_eq!(r.observed, Rational64::new(1, 2));
        assert_eq!(r.expected, Rational64::new(1, 2));
        assert_eq!(r.kappa, Rational64::from_integer(0));

        let r = cohen_kappa::<Rational64>(&[Deictic, Generic], &[Generic, Deictic]).unwrap();
        assert_eq!(r.kappa, Rational64::from_integer(-1));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            cohen_kappa::<f64>(&[], &[]),
            Err(StatsError::EmptyItems)
        ));
        assert!(matches!(
            cohen_kappa::<f64>(&[Deictic], &[Deictic, Generic]),
            Err(StatsError::LengthMismatch(1, 2))
        ));
        assert!(matches!(
            cohen_kappa::<f64>(&[Deictic, Deictic], &[Deictic, Deictic]),
            Err(StatsError::DegenerateAgreement)
        ));
        let a: Labeling = [("x".to_string(), Deictic)].into();
        let b: Labeling = [("y".to_string(), Deictic)].into();
        assert!(matches!(
            cohen_kappa_labelings::<f64>(&a, &b),
            Err(StatsError::ItemMismatch { .. })
        ));
    }

    #[test]
    fn labeling_file() {
        let l = parse_labeling("# rater 1\ni1\tDeictic\n\ni2\tGenre-based\n").unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l["i2"], GenreBased);
        assert!(matches!(
            parse_labeling("i1\tCataphoric\n"),
            Err(StatsError::Labeling { line: 1, .. })
        ));
    }
}
