//! Selecting functions: which divisible cell to split next.

use serde::{Deserialize, Serialize};

use crate::domain::Cardinality;
use crate::error::StoreError;
use crate::precision::PrecisionValue;
use crate::store::Store;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectorKind {
    /// Leftmost divisible cell.
    #[default]
    Naive,
    /// Divisible cell of least precision, leftmost on ties.
    FirstFail,
}

impl SelectorKind {
    pub fn name(&self) -> &'static str {
        match self {
            SelectorKind::Naive => "naive",
            SelectorKind::FirstFail => "ff",
        }
    }

    pub fn choose(&self, s: &Store) -> Result<usize, StoreError> {
        match self {
            SelectorKind::Naive => choose_naive(s),
            SelectorKind::FirstFail => choose_ff(s),
        }
    }
}

fn divisible_cells(s: &Store) -> Result<impl Iterator<Item = usize> + '_, StoreError> {
    if !s.is_divisible() {
        return Err(StoreError::NotDivisible);
    }
    Ok((0..s.len()).filter(|&i| s.cell(i).cardinality_class() == Cardinality::Many))
}

pub fn choose_naive(s: &Store) -> Result<usize, StoreError> {
    divisible_cells(s)?.next().ok_or(StoreError::NotDivisible)
}

/// Precision values are comparable across domain kinds, so mixed stores
/// need no per-kind normalisation beyond the precision map itself.
pub fn choose_ff(s: &Store) -> Result<usize, StoreError> {
    let mut best: Option<(PrecisionValue, usize)> = None;
    for i in divisible_cells(s)? {
        let p = s.cell(i).precision()?;
        // strict comparison keeps the leftmost on ties
        if best.is_none_or(|(bp, _)| p < bp) {
            best = Some((p, i));
        }
    }
    best.map(|(_, i)| i).ok_or(StoreError::NotDivisible)
}
