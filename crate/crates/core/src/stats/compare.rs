use serde::Serialize;

use super::Distribution;
use crate::refinement::ImplicitCategory;
use crate::scalar::Scalar;

/// Category column order used when a distribution becomes a comparison row:
/// the four categories shared with FiGref first, then the two exclusive ones.
pub const COMPARISON_ORDER: [ImplicitCategory; 6] = [
    ImplicitCategory::TypeIdentifiable,
    ImplicitCategory::Deictic,
    ImplicitCategory::Generic,
    ImplicitCategory::NonSpecific,
    ImplicitCategory::GenreBased,
    ImplicitCategory::IteratedSet,
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow<F> {
    pub name: String,
    /// One cell per table column; `None` where the scheme has no such type.
    pub cells: Vec<Option<F>>,
}

/// Pairwise differences on the columns both rows fill.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowDelta<F> {
    pub first: String,
    pub second: String,
    pub differences: Vec<(String, F)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonTable<F> {
    pub columns: Vec<String>,
    pub rows: Vec<ComparisonRow<F>>,
}

impl<F: Scalar> ComparisonTable<F> {
    pub fn cell(&self, row: &str, column: &str) -> Option<F> {
        let c = self.columns.iter().position(|x| x == column)?;
        self.rows.iter().find(|r| r.name == row)?.cells[c]
    }

    /// Sum of the present cells of a row.
    pub fn row_total(&self, row: &str) -> Option<F> {
        let r = self.rows.iter().find(|r| r.name == row)?;
        Some(r.cells.iter().flatten().fold(F::zero(), |acc, v| acc + *v))
    }

    /// Differences (first minus second) for every pair of rows.
    pub fn deltas(&self) -> Vec<RowDelta<F>> {
        let mut out = Vec::new();
        for (i, a) in self.rows.iter().enumerate() {
            for b in &self.rows[i + 1..] {
                let differences = self
                    .columns
                    .iter()
                    .zip(a.cells.iter().zip(&b.cells))
                    .filter_map(|(col, (x, y))| Some((col.clone(), (*x)? - (*y)?)))
                    .collect();
                out.push(RowDelta {
                    first: a.name.clone(),
                    second: b.name.clone(),
                    differences,
                });
            }
        }
        out
    }
}

impl<F: Scalar> Distribution<F> {
    /// Percentages as a named comparison row in [`COMPARISON_ORDER`].
    pub fn comparison_row(&self, name: &str) -> (String, Vec<(String, F)>) {
        (
            name.to_string(),
            COMPARISON_ORDER
                .iter()
                .map(|c| (c.name().to_string(), self.percentage(*c)))
                .collect(),
        )
    }
}

/// Published FiGref relative frequencies for non-recoverable roles, in
/// percent.
pub fn figref_row<F: Scalar>() -> (String, Vec<(String, F)>) {
    let cells = [
        ("Type-identifiable", 7),
        ("Deictic", 5),
        ("Generic", 10),
        ("Non-specific", 4),
        ("Script-inferrable", 9),
        ("Other", 12),
        ("Invalid", 53),
    ];
    (
        "FiGref".to_string(),
        cells
            .iter()
            .map(|(name, v)| (name.to_string(), F::from_count(*v)))
            .collect(),
    )
}

/// Lays named distributions over a common column set.
///
/// Columns present in every row come first (in the first row's order), then
/// the remaining columns in order of first appearance. Missing cells stay
/// empty; nothing is imputed.
pub fn compare_distributions<F: Scalar>(rows: &[(String, Vec<(String, F)>)]) -> ComparisonTable<F> {
    let mut seen: Vec<String> = Vec::new();
    for (_, cells) in rows {
        for (col, _) in cells {
            if !seen.contains(col) {
                seen.push(col.clone());
            }
        }
    }
    let in_all = |col: &String| {
        rows.iter()
            .all(|(_, cells)| cells.iter().any(|(c, _)| c == col))
    };
    let mut columns: Vec<String> = seen.iter().filter(|c| in_all(c)).cloned().collect();
    columns.extend(seen.iter().filter(|c| !in_all(c)).cloned());

    let rows = rows
        .iter()
        .map(|(name, cells)| ComparisonRow {
            name: name.clone(),
            cells: columns
                .iter()
                .map(|col| cells.iter().find(|(c, _)| c == col).map(|(_, v)| *v))
                .collect(),
        })
        .collect();
    ComparisonTable { columns, rows }
}
