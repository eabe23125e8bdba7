//! Constraint stores, stacks, and the inclusion/covering orders on them.

use std::fmt;

use crate::domain::{Cardinality, DomainValue};
use crate::error::{DomainError, StoreError};
use crate::precision::PrecisionValue;

/// One domain subset per variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Store {
    cells: Vec<DomainValue>,
}

impl Store {
    pub fn new(cells: Vec<DomainValue>) -> Self {
        Store { cells }
    }

    pub fn cells(&self) -> &[DomainValue] {
        &self.cells
    }

    pub fn cell(&self, index: usize) -> &DomainValue {
        &self.cells[index]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Every cell non-empty.
    pub fn is_consistent(&self) -> bool {
        self.cells.iter().all(|c| !c.is_empty())
    }

    /// Consistent with at least one cell of cardinality > 1.
    pub fn is_divisible(&self) -> bool {
        self.is_consistent()
            && self
                .cells
                .iter()
                .any(|c| c.cardinality_class() == Cardinality::Many)
    }

    /// Consistent and every cell a singleton.
    pub fn is_ground(&self) -> bool {
        self.cells.iter().all(|c| c.is_singleton())
    }

    /// The store with every cell emptied.
    pub fn inconsistent_like(&self) -> Store {
        Store {
            cells: self.cells.iter().map(DomainValue::empty_like).collect(),
        }
    }

    /// `s[j/d]`: a copy of the store with cell `index` replaced.
    pub fn replace(&self, index: usize, value: DomainValue) -> Result<Store, StoreError> {
        let old = self.cells.get(index).ok_or(StoreError::IndexOutOfRange {
            index,
            len: self.cells.len(),
        })?;
        if old.kind() != value.kind() {
            return Err(DomainError::KindMismatch {
                expected: old.kind(),
                found: value.kind(),
            }
            .into());
        }
        let mut cells = self.cells.clone();
        cells[index] = value;
        Ok(Store { cells })
    }

    /// Sum of per-cell precisions.
    pub fn precision(&self) -> Result<PrecisionValue, DomainError> {
        self.cells
            .iter()
            .map(DomainValue::precision)
            .try_fold(PrecisionValue::ZERO, |acc, p| Ok(acc + p?))
    }

    /// Cellwise inclusion `self ⪯_s other`.
    pub fn leq(&self, other: &Store) -> Result<bool, StoreError> {
        if self.len() != other.len() {
            return Err(StoreError::Arity {
                left: self.len(),
                right: other.len(),
            });
        }
        for (a, b) in self.cells.iter().zip(&other.cells) {
            if !a.is_subset_of(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Strict inclusion: `self ⪯_s other` with some cell strictly smaller.
    pub fn lt(&self, other: &Store) -> Result<bool, StoreError> {
        Ok(self.leq(other)? && !other.leq(self)?)
    }
}

impl fmt::Display for Store {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `s ⪯_s t`.
pub fn store_leq(s: &Store, t: &Store) -> Result<bool, StoreError> {
    s.leq(t)
}

/// `s ≺_s t`.
pub fn store_lt(s: &Store, t: &Store) -> Result<bool, StoreError> {
    s.lt(t)
}

pub fn store_replace(s: &Store, index: usize, value: DomainValue) -> Result<Store, StoreError> {
    s.replace(index, value)
}

pub fn precision_of_store(s: &Store) -> Result<PrecisionValue, DomainError> {
    s.precision()
}

/// Ordered sequence of stores; the last pushed is the top.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Stack {
    items: Vec<Store>,
}

impl Stack {
    pub fn new() -> Self {
        Stack { items: Vec::new() }
    }

    pub fn push(&mut self, store: Store) {
        self.items.push(store);
    }

    pub fn pop(&mut self) -> Option<Store> {
        self.items.pop()
    }

    pub fn top(&self) -> Option<&Store> {
        self.items.last()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Bottom-to-top iteration.
    pub fn iter(&self) -> std::slice::Iter<'_, Store> {
        self.items.iter()
    }

    pub fn as_slice(&self) -> &[Store] {
        &self.items
    }

    /// `self ⪯_p other`: every store here lies below some store of `other`.
    pub fn covered_by(&self, other: &Stack) -> Result<bool, StoreError> {
        for s in &self.items {
            let mut found = false;
            for t in &other.items {
                if s.leq(t)? {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl From<Vec<Store>> for Stack {
    fn from(items: Vec<Store>) -> Self {
        Stack { items }
    }
}

impl<'a> IntoIterator for &'a Stack {
    type Item = &'a Store;
    type IntoIter = std::slice::Iter<'a, Store>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

/// `p ⪯_p q`.
pub fn stack_covers(p: &Stack, q: &Stack) -> Result<bool, StoreError> {
    p.covered_by(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(cells: &[&[i64]]) -> Store {
        Store::new(
            cells
                .iter()
                .map(|c| DomainValue::finite(c.iter().copied()))
                .collect(),
        )
    }

    #[test]
    fn boolean_example_orderings() {
        let s1 = fd(&[&[1], &[0], &[0]]);
        let s2 = fd(&[&[0, 1], &[0, 1], &[0, 1]]);
        let s3 = fd(&[&[0], &[0], &[0]]);
        assert!(store_leq(&s1, &s2).unwrap());
        assert!(store_lt(&s1, &s2).unwrap());
        assert!(store_leq(&s1, &s1).unwrap());
        assert!(!store_lt(&s1, &s1).unwrap());
        assert!(!store_leq(&s3, &s1).unwrap());
        assert!(!store_leq(&s1, &s3).unwrap());
    }

    #[test]
    fn arity_mismatch() {
        let a = fd(&[&[1]]);
        let b = fd(&[&[1], &[0]]);
        assert!(matches!(a.leq(&b), Err(StoreError::Arity { .. })));
    }

    #[test]
    fn stack_covering() {
        let small = Stack::from(vec![fd(&[&[1], &[0]])]);
        let big = Stack::from(vec![fd(&[&[0, 1], &[0, 1]])]);
        assert!(stack_covers(&Stack::new(), &big).unwrap());
        assert!(stack_covers(&small, &small).unwrap());
        assert!(stack_covers(&small, &big).unwrap());
        assert!(!stack_covers(&big, &small).unwrap());
        assert!(!stack_covers(&small, &Stack::new()).unwrap());
    }

    #[test]
    fn replace_cells() {
        let s = fd(&[&[0, 1], &[0]]);
        assert_eq!(
            store_replace(&s, 0, DomainValue::finite([1])).unwrap(),
            fd(&[&[1], &[0]])
        );
        assert_eq!(store_replace(&s, 1, s.cell(1).clone()).unwrap(), s);
        let t = fd(&[&[0, 1], &[0, 1]]);
        let r = store_replace(&t, 1, DomainValue::finite([])).unwrap();
        assert!(!r.is_consistent());
        assert!(matches!(
            store_replace(&t, 2, DomainValue::finite([0])),
            Err(StoreError::IndexOutOfRange { .. })
        ));
        assert!(store_replace(&t, 0, DomainValue::int(0, 0)).is_err());
    }

    #[test]
    fn store_precision() {
        let s = fd(&[&[0, 1], &[0, 1], &[0, 1]]);
        assert_eq!(precision_of_store(&s).unwrap(), PrecisionValue::new(6.0, 0));
        let g = fd(&[&[3], &[4], &[5], &[6]]);
        assert_eq!(precision_of_store(&g).unwrap(), PrecisionValue::new(4.0, 0));
        let i = Store::new(vec![DomainValue::int(0, 1); 3]);
        assert_eq!(precision_of_store(&i).unwrap(), PrecisionValue::new(3.0, 0));
    }

    #[test]
    fn consistency_and_divisibility() {
        assert!(fd(&[&[0, 1], &[0]]).is_divisible());
        assert!(!fd(&[&[1], &[0]]).is_divisible());
        assert!(fd(&[&[1], &[0]]).is_consistent());
        assert!(!fd(&[&[], &[0, 1]]).is_consistent());
        assert!(!fd(&[&[], &[0, 1]]).is_divisible());
    }
}
