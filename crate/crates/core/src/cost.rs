//! Cost functions, orderings on their ranges, and initial bounds.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CostError;
use crate::store::Store;

/// A cost value: one real per component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostValue(pub Vec<f64>);

impl CostValue {
    pub fn scalar(v: f64) -> Self {
        CostValue(vec![v])
    }

    pub fn pair(a: f64, b: f64) -> Self {
        CostValue(vec![a, b])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{:?}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v:?}")?;
        }
        write!(f, ")")
    }
}

/// One component of a cost function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CostExpr {
    Constant {
        value: f64,
    },
    /// Sum of the listed variables; interval cells contribute their
    /// midpoint, so the sum is the midpoint of the interval sum.
    Sum {
        vars: Vec<usize>,
    },
}

impl CostExpr {
    pub fn eval(&self, s: &Store) -> Result<f64, CostError> {
        match self {
            CostExpr::Constant { value } => Ok(*value),
            CostExpr::Sum { vars } => {
                let (mut lo, mut hi) = (0.0, 0.0);
                for &v in vars {
                    let (a, b) = s
                        .cells()
                        .get(v)
                        .and_then(|c| c.numeric_hull())
                        .ok_or(CostError::NonNumeric(v))?;
                    lo += a;
                    hi += b;
                }
                Ok(if lo == hi { lo } else { (lo + hi) / 2.0 })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Min,
    Max,
}

impl Direction {
    fn better(self, new: f64, old: f64) -> bool {
        match self {
            Direction::Min => new < old,
            Direction::Max => new > old,
        }
    }

    fn worst(self) -> f64 {
        match self {
            Direction::Min => f64::INFINITY,
            Direction::Max => f64::NEG_INFINITY,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Direction::Min => "min",
            Direction::Max => "max",
        }
    }
}

/// The strict test `new ⋄ old` applied at the push step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "directions", rename_all = "snake_case")]
pub enum CostOrdering {
    Eq,
    Lt,
    Gt,
    /// Strictly better on every component in its direction.
    Componentwise(Vec<Direction>),
    /// Strictly better on the first differing component.
    Lexicographic(Vec<Direction>),
}

impl CostOrdering {
    /// Arity the ordering applies to; `None` for `eq`, which takes any.
    pub fn arity(&self) -> Option<usize> {
        match self {
            CostOrdering::Eq => None,
            CostOrdering::Lt | CostOrdering::Gt => Some(1),
            CostOrdering::Componentwise(d) | CostOrdering::Lexicographic(d) => Some(d.len()),
        }
    }

    pub fn improves(&self, new: &CostValue, old: &CostValue) -> Result<bool, CostError> {
        if new.arity() != old.arity() {
            return Err(CostError::Arity(new.arity(), old.arity()));
        }
        if let Some(k) = self.arity() {
            if k != new.arity() {
                return Err(CostError::Ordering {
                    ordering: self.to_string(),
                    arity: new.arity(),
                });
            }
        }
        let (n, o) = (&new.0, &old.0);
        Ok(match self {
            CostOrdering::Eq => n == o,
            CostOrdering::Lt => n[0] < o[0],
            CostOrdering::Gt => n[0] > o[0],
            CostOrdering::Componentwise(dirs) => dirs
                .iter()
                .zip(n.iter().zip(o))
                .all(|(d, (a, b))| d.better(*a, *b)),
            CostOrdering::Lexicographic(dirs) => {
                for (d, (a, b)) in dirs.iter().zip(n.iter().zip(o)) {
                    if a != b {
                        return Ok(d.better(*a, *b));
                    }
                }
                false
            }
        })
    }

    /// The initial bound from which every first cost improves: `+inf` for
    /// minimised components and `-inf` for maximised ones.
    pub fn default_bound(&self) -> Option<CostValue> {
        match self {
            CostOrdering::Eq => None,
            CostOrdering::Lt => Some(CostValue::scalar(f64::INFINITY)),
            CostOrdering::Gt => Some(CostValue::scalar(f64::NEG_INFINITY)),
            CostOrdering::Componentwise(d) | CostOrdering::Lexicographic(d) => {
                Some(CostValue(d.iter().map(|d| d.worst()).collect()))
            }
        }
    }
}

impl fmt::Display for CostOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dirs = |f: &mut fmt::Formatter<'_>, name: &str, d: &[Direction]| {
            let names: Vec<&str> = d.iter().map(|d| d.name()).collect();
            write!(f, "{name}({})", names.join(","))
        };
        match self {
            CostOrdering::Eq => write!(f, "eq"),
            CostOrdering::Lt => write!(f, "lt"),
            CostOrdering::Gt => write!(f, "gt"),
            CostOrdering::Componentwise(d) => dirs(f, "comp", d),
            CostOrdering::Lexicographic(d) => dirs(f, "lex", d),
        }
    }
}

/// Cost function, ordering, and initial bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostSpec {
    pub fcost: Vec<CostExpr>,
    pub ordering: CostOrdering,
    pub delta0: CostValue,
}

impl CostSpec {
    /// Constant cost `k`, ordering `=`, bound `k`: every solution is pushed.
    pub fn classical(k: f64) -> Self {
        CostSpec {
            fcost: vec![CostExpr::Constant { value: k }],
            ordering: CostOrdering::Eq,
            delta0: CostValue::scalar(k),
        }
    }

    pub fn minimise(expr: CostExpr) -> Self {
        CostSpec {
            fcost: vec![expr],
            ordering: CostOrdering::Lt,
            delta0: CostValue::scalar(f64::INFINITY),
        }
    }

    pub fn maximise(expr: CostExpr) -> Self {
        CostSpec {
            fcost: vec![expr],
            ordering: CostOrdering::Gt,
            delta0: CostValue::scalar(f64::NEG_INFINITY),
        }
    }

    /// Compound cost with the ordering's default bound.
    pub fn compound(fcost: Vec<CostExpr>, ordering: CostOrdering) -> Result<Self, CostError> {
        let delta0 = ordering
            .default_bound()
            .ok_or_else(|| CostError::Ordering {
                ordering: ordering.to_string(),
                arity: fcost.len(),
            })?;
        let spec = CostSpec {
            fcost,
            ordering,
            delta0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn arity(&self) -> usize {
        self.fcost.len()
    }

    pub fn validate(&self) -> Result<(), CostError> {
        if self.delta0.arity() != self.arity() {
            return Err(CostError::Arity(self.delta0.arity(), self.arity()));
        }
        if let Some(k) = self.ordering.arity() {
            if k != self.arity() {
                return Err(CostError::Ordering {
                    ordering: self.ordering.to_string(),
                    arity: self.arity(),
                });
            }
        }
        Ok(())
    }

    /// Constant cost equal to the bound under `=`.
    pub fn is_classical(&self) -> bool {
        self.ordering == CostOrdering::Eq
            && self
                .fcost
                .iter()
                .zip(&self.delta0.0)
                .all(|(e, d)| matches!(e, CostExpr::Constant { value } if value == d))
    }

    pub fn eval(&self, s: &Store) -> Result<CostValue, CostError> {
        if !s.is_consistent() {
            return Err(CostError::Inconsistent);
        }
        self.fcost
            .iter()
            .map(|e| e.eval(s))
            .collect::<Result<Vec<_>, _>>()
            .map(CostValue)
    }

    pub fn improves(&self, new: &CostValue, delta: &CostValue) -> Result<bool, CostError> {
        self.ordering.improves(new, delta)
    }
}

impl Default for CostSpec {
    fn default() -> Self {
        CostSpec::classical(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainValue;

    fn ints(v: &[(i64, i64)]) -> Store {
        Store::new(v.iter().map(|(a, b)| DomainValue::int(*a, *b)).collect())
    }

    #[test]
    fn sum_cost_uses_midpoints() {
        let sum = CostExpr::Sum {
            vars: vec![0, 1, 2],
        };
        assert_eq!(sum.eval(&ints(&[(1, 1), (0, 0), (0, 0)])).unwrap(), 1.0);
        assert_eq!(sum.eval(&ints(&[(0, 1), (0, 1), (0, 1)])).unwrap(), 1.5);
        let c = CostExpr::Constant { value: 1.0 };
        assert_eq!(c.eval(&ints(&[(0, 1)])).unwrap(), 1.0);
        let spec = CostSpec::minimise(sum);
        assert_eq!(
            spec.eval(&ints(&[(1, 0), (0, 0), (0, 0)])),
            Err(CostError::Inconsistent)
        );
    }

    #[test]
    fn scalar_orderings() {
        let lt = CostOrdering::Lt;
        assert!(lt
            .improves(&CostValue::scalar(0.0), &CostValue::scalar(1.0))
            .unwrap());
        assert!(!lt
            .improves(&CostValue::scalar(1.0), &CostValue::scalar(1.0))
            .unwrap());
        let spec = CostSpec::classical(1.0);
        assert!(spec
            .improves(&CostValue::scalar(1.0), &spec.delta0)
            .unwrap());
        assert!(spec.is_classical());
    }

    #[test]
    fn priority_ordering() {
        // (a,b) <2 (c,d) iff a > c, or a = c and b < d
        let le2 = CostOrdering::Lexicographic(vec![Direction::Max, Direction::Min]);
        assert!(le2
            .improves(&CostValue::pair(1.0, 0.0), &CostValue::pair(1.0, 1.0))
            .unwrap());
        assert!(le2
            .improves(&CostValue::pair(2.0, 9.0), &CostValue::pair(1.0, 0.0))
            .unwrap());
        assert!(!le2
            .improves(&CostValue::pair(1.0, 1.0), &CostValue::pair(1.0, 1.0))
            .unwrap());
        assert!(!le2
            .improves(&CostValue::pair(0.0, 0.0), &CostValue::pair(1.0, 1.0))
            .unwrap());
    }

    #[test]
    fn mixed_criteria_example() {
        // minimise the first component and maximise the second
        let comp = CostOrdering::Componentwise(vec![Direction::Min, Direction::Max]);
        let lex = CostOrdering::Lexicographic(vec![Direction::Min, Direction::Min]);
        let costs = [
            CostValue::pair(1.0, 5.0),
            CostValue::pair(3.0, 1.0),
            CostValue::pair(1.0, 8.0),
        ];
        let optimal = |o: &CostOrdering| -> Vec<usize> {
            (0..3)
                .filter(|&i| (0..3).all(|j| !o.improves(&costs[j], &costs[i]).unwrap()))
                .collect()
        };
        assert!(optimal(&comp).contains(&2));
        assert!(!optimal(&comp).contains(&1));
        assert_eq!(optimal(&lex), vec![0]);
    }

    #[test]
    fn arity_errors() {
        let lt = CostOrdering::Lt;
        assert!(lt
            .improves(&CostValue::pair(0.0, 0.0), &CostValue::scalar(1.0))
            .is_err());
        assert!(lt
            .improves(&CostValue::pair(0.0, 0.0), &CostValue::pair(1.0, 1.0))
            .is_err());
        assert!(
            CostSpec::compound(vec![CostExpr::Sum { vars: vec![0] }], CostOrdering::Eq).is_err()
        );
    }

    #[test]
    fn default_bounds() {
        let o = CostOrdering::Lexicographic(vec![Direction::Max, Direction::Min]);
        assert_eq!(
            o.default_bound().unwrap(),
            CostValue::pair(f64::NEG_INFINITY, f64::INFINITY)
        );
    }
}
