//! Filtering functions.
//!
//! Both filters satisfy three conditions on every input store `s`:
//! the result lies below `s`; every solution below `s` stays below the
//! result; and a consistent, non-divisible result is a solution.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::constraint::ConstraintExpr;
use crate::domain::DomainValue;
use crate::store::Store;

pub const DEFAULT_MAX_ROUNDS: usize = 10_000;

/// Real-cell width changes below this do not re-trigger propagation.
pub const REAL_CHANGE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FilteringKind {
    /// Keep a consistent store; reject inconsistent stores and ground
    /// stores that violate a constraint.
    ConsistencyCheck,
    /// FIFO revision of constraint narrowing until nothing changes.
    FixpointPropagation { max_rounds: usize },
}

impl FilteringKind {
    pub fn fixpoint() -> Self {
        FilteringKind::FixpointPropagation {
            max_rounds: DEFAULT_MAX_ROUNDS,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FilteringKind::ConsistencyCheck => "consistency",
            FilteringKind::FixpointPropagation { .. } => "fixpoint",
        }
    }
}

impl Default for FilteringKind {
    fn default() -> Self {
        FilteringKind::fixpoint()
    }
}

/// Statistics of one fixpoint run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FixpointStats {
    pub rounds: usize,
    pub hit_limit: bool,
}

/// Applies the configured filter.
pub fn filter(kind: FilteringKind, constraints: &[ConstraintExpr], s: &Store, tol: f64) -> Store {
    match kind {
        FilteringKind::ConsistencyCheck => filter_consistency_check(constraints, s, tol),
        FilteringKind::FixpointPropagation { max_rounds } => {
            filter_fixpoint(constraints, s, max_rounds, tol).0
        }
    }
}

pub fn filter_consistency_check(constraints: &[ConstraintExpr], s: &Store, tol: f64) -> Store {
    if !s.is_consistent() {
        return s.inconsistent_like();
    }
    if s.is_divisible() || verify_ground(constraints, s, tol) {
        s.clone()
    } else {
        s.inconsistent_like()
    }
}

fn verify_ground(constraints: &[ConstraintExpr], s: &Store, tol: f64) -> bool {
    constraints
        .iter()
        .all(|c| c.eval_on_singleton(s, tol).unwrap_or(false))
}

fn changed(old: &DomainValue, new: &DomainValue) -> bool {
    match (old, new) {
        (DomainValue::Real(Some((a, b))), DomainValue::Real(Some((c, d)))) => {
            (c - a).abs() + (b - d).abs() >= REAL_CHANGE_THRESHOLD
        }
        _ => old != new,
    }
}

pub fn filter_fixpoint(
    constraints: &[ConstraintExpr],
    s: &Store,
    max_rounds: usize,
    tol: f64,
) -> (Store, FixpointStats) {
    let mut stats = FixpointStats::default();
    if !s.is_consistent() {
        return (s.inconsistent_like(), stats);
    }
    let vars: Vec<Vec<usize>> = constraints.iter().map(|c| c.variables()).collect();
    let mut watchers: Vec<Vec<usize>> = vec![Vec::new(); s.len()];
    for (ci, vs) in vars.iter().enumerate() {
        for &v in vs {
            watchers[v].push(ci);
        }
    }

    let mut queue: VecDeque<usize> = (0..constraints.len()).collect();
    let mut queued = vec![true; constraints.len()];
    let mut current = s.clone();

    while let Some(ci) = queue.pop_front() {
        if stats.rounds >= max_rounds {
            stats.hit_limit = true;
            break;
        }
        stats.rounds += 1;
        queued[ci] = false;
        let next = constraints[ci].narrow(&current, tol);
        if !next.is_consistent() {
            return (s.inconsistent_like(), stats);
        }
        for &v in &vars[ci] {
            if changed(current.cell(v), next.cell(v)) {
                for &other in &watchers[v] {
                    if !queued[other] {
                        queued[other] = true;
                        queue.push_back(other);
                    }
                }
            }
        }
        current = next;
    }

    if !current.is_divisible() && !verify_ground(constraints, &current, tol) {
        return (s.inconsistent_like(), stats);
    }
    (current, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::{BoolExpr, Relation};

    fn ints(v: &[(i64, i64)]) -> Store {
        Store::new(v.iter().map(|(a, b)| DomainValue::int(*a, *b)).collect())
    }

    fn bools(v: &[&[i64]]) -> Store {
        Store::new(
            v.iter()
                .map(|c| DomainValue::finite(c.iter().copied()))
                .collect(),
        )
    }

    #[test]
    fn consistency_check_cases() {
        let c = vec![ConstraintExpr::Bool(BoolExpr::Or(vec![
            BoolExpr::var(0),
            BoolExpr::And(vec![BoolExpr::var(1), BoolExpr::var(2)]),
        ]))];
        let divisible = bools(&[&[0, 1], &[0, 1], &[0]]);
        assert_eq!(filter_consistency_check(&c, &divisible, 0.0), divisible);
        let bad = bools(&[&[0], &[0], &[0]]);
        assert_eq!(
            filter_consistency_check(&c, &bad, 0.0),
            bools(&[&[], &[], &[]])
        );
        let empty = bools(&[&[], &[0], &[0]]);
        assert_eq!(
            filter_consistency_check(&c, &empty, 0.0),
            bools(&[&[], &[], &[]])
        );
        let good = bools(&[&[1], &[0], &[0]]);
        assert_eq!(filter_consistency_check(&c, &good, 0.0), good);
    }

    #[test]
    fn fixpoint_cases() {
        let le = vec![ConstraintExpr::linear(
            vec![(1.0, 0), (1.0, 1)],
            Relation::Le,
            0.0,
        )];
        let (out, stats) = filter_fixpoint(&le, &ints(&[(0, 1), (0, 1)]), 100, 1e-9);
        assert_eq!(out, ints(&[(0, 0), (0, 0)]));
        assert!(!stats.hit_limit);

        let any = ints(&[(0, 3), (2, 5)]);
        assert_eq!(filter_fixpoint(&[], &any, 100, 1e-9).0, any);

        let contradiction = vec![
            ConstraintExpr::linear(vec![(1.0, 0)], Relation::Eq, 1.0),
            ConstraintExpr::linear(vec![(1.0, 0)], Relation::Eq, 0.0),
        ];
        let out = filter_fixpoint(&contradiction, &ints(&[(0, 1)]), 100, 1e-9).0;
        assert!(!out.is_consistent());
        assert!(out.cells().iter().all(DomainValue::is_empty));
    }

    #[test]
    fn fixpoint_respects_round_limit() {
        // x = y + 1, y = x + 1 shrinks one unit per pass
        let c = vec![
            ConstraintExpr::linear(vec![(1.0, 0), (-1.0, 1)], Relation::Eq, 1.0),
            ConstraintExpr::linear(vec![(1.0, 1), (-1.0, 0)], Relation::Eq, 1.0),
        ];
        let (out, stats) = filter_fixpoint(&c, &ints(&[(0, 1000), (0, 1000)]), 5, 1e-9);
        assert!(stats.hit_limit);
        assert_eq!(stats.rounds, 5);
        assert!(out.leq(&ints(&[(0, 1000), (0, 1000)])).unwrap());
        let (out, stats) =
            filter_fixpoint(&c, &ints(&[(0, 1000), (0, 1000)]), DEFAULT_MAX_ROUNDS, 1e-9);
        assert!(!stats.hit_limit);
        assert!(!out.is_consistent());
    }
}
